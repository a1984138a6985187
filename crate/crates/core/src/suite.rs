//! The verification suite.
//!
//! [`run_suite`] generates a deterministic family of step functions, runs
//! every identity and inequality check on each of them and collects one
//! [`CheckRecord`] per (check, case, exponent). Each record carries its
//! left- and right-hand sides, the constant and the tolerance, so its pass
//! flag can be recomputed from the record alone.

use std::path::PathBuf;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covering::{dyadic_cover, verify_cover};
use crate::dyadic::{CellValues, Grid, StepFunction};
use crate::error::{Error, Result};
use crate::functionals::{
    bmo_dyadic, double_sharp_sup, oneil_functional, oneil_sup, sharp_norm, sharp_sup,
    weak_star_norm, weak_star_sup, weak_sup, Exponent,
};
use crate::generators::{
    gen_cell_set, gen_dipole, gen_log, gen_power, gen_random, mix_seed, rng_for, Law,
};
use crate::numeric;
use crate::packing::{
    antichain_count, for_each_packing, jn_norm_dyadic, GaroTable, OptimalPacking, PackingObjective,
};
use crate::rearrangement::{distribution, Profile};
use crate::tensor::{
    tensor_brute, tensor_distribution, tensor_distribution_at, tensor_infinity_check,
    TENSOR_CELL_GUARD, TENSOR_CHECK_SLACK,
};

/// Relative slack granted to every `≤` check for floating-point round-off.
pub const INEQUALITY_SLACK: f64 = 1e-12;
/// Relative tolerance for oracle comparisons (brute force, `L¹`, transport).
pub const ORACLE_TOLERANCE: f64 = 1e-12;
/// Grid level of the one-dimensional convergence profiles.
pub const CONVERGENCE_LEVEL: u32 = 12;
/// Relative tolerance of the convergence targets.
pub const CONVERGENCE_TOLERANCE: f64 = 0.05;
/// Largest grid accepted by the suite.
pub const MAX_SUITE_CELLS: usize = 4096;
/// Exponents of the power profiles `x^{-1/q}` added to one-dimensional grids.
pub const POWER_PROFILE_EXPONENTS: [f64; 4] = [1.25, 1.5, 2.0, 3.0];
/// Random antichains drawn per case when exhaustive enumeration is too large.
pub const SAMPLED_PACKINGS: usize = 32;

const COVER_SALT: u64 = 0xC0E5;
const TENSOR_SALT: u64 = 0x7E50;
const PACKING_SALT: u64 = 0xFACC;

/// Constants of the checks that the negative controls perturb.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConstants {
    /// `C` in `GaRo_p ≤ C·JN_p` and in the per-packing Hölder step (2).
    pub garo_jn: f64,
    /// `s` in `‖f‖_{L(p,∞)} ≤ (p − s)‖f‖^#` (0).
    pub sandwich_shift: f64,
}

impl Default for SuiteConstants {
    fn default() -> Self {
        Self {
            garo_jn: 2.0,
            sandwich_shift: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random functions per `(dim, level)` grid.
    pub cases: usize,
    pub dims: Vec<usize>,
    pub levels: Vec<u32>,
    pub p_values: Vec<Exponent>,
    /// Relative tolerance of the equality checks; `0` demands bit equality.
    pub tolerance_eq: f64,
    #[serde(default)]
    pub constants: SuiteConstants,
    /// Grids with at most this many packings are checked exhaustively.
    pub enumeration_limit: u64,
    /// Include the fixed-level convergence targets.
    #[serde(default = "yes")]
    pub convergence: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            cases: 20,
            dims: vec![1, 2],
            levels: vec![2, 4, 6],
            p_values: vec![
                Exponent::Finite(1.5),
                Exponent::Finite(2.0),
                Exponent::Finite(3.0),
                Exponent::Finite(10.0),
                Exponent::Infinity,
            ],
            tolerance_eq: 1e-9,
            constants: SuiteConstants::default(),
            enumeration_limit: 100_000,
            convergence: true,
            output: None,
        }
    }
}

fn yes() -> bool {
    true
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.cases == 0 {
            return bad("cases must be at least 1".into());
        }
        if !(self.tolerance_eq.is_finite() && self.tolerance_eq >= 0.0) {
            return bad(format!(
                "tolerance_eq = {} must be finite and nonnegative",
                self.tolerance_eq
            ));
        }
        if self.dims.is_empty() || self.levels.is_empty() || self.p_values.is_empty() {
            return bad("dims, levels and p_values must be nonempty".into());
        }
        for &p in &self.p_values {
            Exponent::new(p.as_f64()).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        for &dim in &self.dims {
            for &level in &self.levels {
                let grid =
                    Grid::new(dim, level, 1.0).map_err(|e| Error::InvalidConfig(e.to_string()))?;
                if grid.cell_count() > MAX_SUITE_CELLS {
                    return bad(format!(
                        "dim {dim}, level {level} has {} cells; the suite accepts at most {MAX_SUITE_CELLS}",
                        grid.cell_count()
                    ));
                }
            }
        }
        let c = &self.constants;
        if !(c.garo_jn.is_finite() && c.sandwich_shift.is_finite()) {
            return bad("suite constants must be finite".into());
        }
        Ok(())
    }
}

/// Every check the suite runs; the declaration order is the report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    WeakInfinityEquality,
    WeakPEquality,
    SandwichLower,
    SandwichUpper,
    ClassicalLower,
    ClassicalUpper,
    OneilUpper,
    OneilLower,
    GaroJn,
    HolderStep,
    GaroWeakStar,
    SharpCover,
    BmoDomination,
    PackingOracleJn,
    PackingOracleGaro,
    CoverDensity,
    CoverContainment,
    CoverMeasure,
    TensorExact,
    TensorInfinity,
    TensorTransport,
    ConvergenceWeakStar,
    ConvergenceSharp,
    ConvergenceOneil,
    ConvergenceLog,
    L1Tail,
}

impl CheckId {
    pub const ALL: [CheckId; 26] = [
        CheckId::WeakInfinityEquality,
        CheckId::WeakPEquality,
        CheckId::SandwichLower,
        CheckId::SandwichUpper,
        CheckId::ClassicalLower,
        CheckId::ClassicalUpper,
        CheckId::OneilUpper,
        CheckId::OneilLower,
        CheckId::GaroJn,
        CheckId::HolderStep,
        CheckId::GaroWeakStar,
        CheckId::SharpCover,
        CheckId::BmoDomination,
        CheckId::PackingOracleJn,
        CheckId::PackingOracleGaro,
        CheckId::CoverDensity,
        CheckId::CoverContainment,
        CheckId::CoverMeasure,
        CheckId::TensorExact,
        CheckId::TensorInfinity,
        CheckId::TensorTransport,
        CheckId::ConvergenceWeakStar,
        CheckId::ConvergenceSharp,
        CheckId::ConvergenceOneil,
        CheckId::ConvergenceLog,
        CheckId::L1Tail,
    ];

    /// The statement being verified.
    pub fn statement(self) -> &'static str {
        match self {
            CheckId::WeakInfinityEquality => "sup_t T(t)/λ(t) = ‖f‖_{L(∞,∞)} = sup_t (f** − f*)(t)",
            CheckId::WeakPEquality => "‖f‖^## = ‖f‖^# = sup_t t^{1/p}(f** − f*)(t)",
            CheckId::SandwichLower => "‖f‖^# ≤ ‖f‖_{L(p,∞)}",
            CheckId::SandwichUpper => "‖f‖_{L(p,∞)} ≤ p‖f‖^#",
            CheckId::ClassicalLower => "‖f‖*_{L(p,∞)} ≤ ‖f‖_{L(p,∞)}",
            CheckId::ClassicalUpper => "‖f‖_{L(p,∞)} ≤ p'‖f‖*_{L(p,∞)}",
            CheckId::OneilUpper => "O_p(f) ≤ (‖f‖^##)^{1/p} (‖f‖*_{L(p,∞)})^{1−1/p}",
            CheckId::OneilLower => "‖f‖*_{L(p,∞)} ≤ 2·2^{(p−1)/p} O_p(f)",
            CheckId::GaroJn => "GaRo_p(f) ≤ 2 JN_p(f)",
            CheckId::HolderStep => {
                "Σ D(Q_i) ≤ 2 (Σ|Q_i|)^{1/p'} (Σ|Q_i| osc(Q_i)^p)^{1/p} for every packing"
            }
            CheckId::GaroWeakStar => "GaRo_p(f) ≤ (2p/(p−1)) ‖f‖*_{L(p,∞)}",
            CheckId::SharpCover => "‖f‖^# ≤ 2^{n/p'+1} GaRo_p(f) + (4/|Q0|)^{1/p'} ‖f‖_1",
            CheckId::BmoDomination => "JN_p(f) ≤ ‖f‖_{BMO} |Q0|^{1/p} (dyadic BMO)",
            CheckId::PackingOracleJn => {
                "dynamic-programming JN_p equals the maximum over all packings"
            }
            CheckId::PackingOracleGaro => "knapsack GaRo_p equals the maximum over all packings",
            CheckId::CoverDensity => "|Ω ∩ Q_i| ≤ |Q_i|/2 for every cover cube",
            CheckId::CoverContainment => "Ω ⊂ ⋃Q_i ⊂ Q0 with pairwise disjoint Q_i",
            CheckId::CoverMeasure => "Σ|Q_i| ≤ 2^{n+1} |Ω|",
            CheckId::TensorExact => {
                "λ_{f⊗g} from value masses equals the distribution of the materialized product"
            }
            CheckId::TensorInfinity => "‖f⊗g‖^##_{L(∞,∞)} ≤ ‖f‖^##_{L(∞,∞)} ‖g‖_{L^∞}",
            CheckId::TensorTransport => "λ_{f⊗g}(z) = Σ_j m_j λ_f(z/u_j)",
            CheckId::ConvergenceWeakStar => "x^{-1/2} cell averages: ‖f‖*_{L(2,∞)} → 1",
            CheckId::ConvergenceSharp => "x^{-1/2} cell averages: ‖f‖^#_{L(2,∞)} → 2",
            CheckId::ConvergenceOneil => "x^{-1/2} cell averages: O_2(f) → 1",
            CheckId::ConvergenceLog => "log(1/x) cell averages: ‖f‖_{L(∞,∞)} → 1",
            CheckId::L1Tail => "sup_t ∫_t^∞ λ_f = ‖f‖_1",
        }
    }
}

/// How `lhs`, `rhs`, `constant` and `tolerance` decide a record's outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ constant·rhs·(1 + tolerance)`.
    AtMost,
    /// `|lhs − constant·rhs| ≤ tolerance·max(|lhs|, |constant·rhs|)`.
    Equal,
    /// `|lhs − constant·rhs| ≤ tolerance·|constant·rhs|` (convergence to a target).
    Near,
}

impl Relation {
    pub fn holds(self, lhs: f64, rhs: f64, constant: f64, tolerance: f64) -> bool {
        let target = constant * rhs;
        match self {
            Relation::AtMost => lhs <= target + tolerance * target.abs(),
            Relation::Equal => (lhs - target).abs() <= tolerance * lhs.abs().max(target.abs()),
            Relation::Near => (lhs - target).abs() <= tolerance * target.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckId,
    pub statement: String,
    pub case: usize,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

impl CheckRecord {
    /// The pass flag implied by the record's numbers.
    pub fn recompute(&self) -> bool {
        self.relation
            .holds(self.lhs, self.rhs, self.constant, self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: CheckId,
    pub total: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckSummary>,
}

impl Summary {
    fn of(records: &[CheckRecord]) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let checks = CheckId::ALL
            .iter()
            .filter_map(|&check| {
                let of_check = records.iter().filter(|r| r.check == check);
                let total = of_check.clone().count();
                (total > 0).then(|| CheckSummary {
                    check,
                    total,
                    failed: of_check.filter(|r| !r.pass).count(),
                })
            })
            .collect();
        Self {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            checks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn records_of(&self, check: CheckId) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(move |r| r.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Runs every check; writes the report to `config.output` when set.
///
/// Fails with [`Error::Inconsistency`] when two independent computations
/// of the same object disagree (for instance a witness packing that does
/// not reproduce its optimum).
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let mut records = Vec::new();
    let cases = build_cases(config)?;
    for case in &cases {
        check_case(case, config, &mut records)?;
    }
    if config.convergence {
        check_convergence(cases.len(), &mut records)?;
    }
    records.sort_by_key(|r| (r.check, r.case));
    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        summary: Summary::of(&records),
        records,
    };
    if let Some(path) = &config.output {
        std::fs::write(path, report.to_json())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

/// One input function of the suite.
#[derive(Debug, Clone)]
pub struct Case {
    pub index: usize,
    pub label: String,
    pub seed: u64,
    pub law: Option<Law>,
    pub f: StepFunction,
}

/// The suite's inputs: per grid, the structured profiles followed by
/// `cases` random functions cycling through the laws.
pub fn build_cases(config: &SuiteConfig) -> Result<Vec<Case>> {
    let mut out = Vec::new();
    for &dim in &config.dims {
        for &level in &config.levels {
            let grid = Grid::new(dim, level, 1.0)?;
            let grid_seed = mix_seed(config.seed, ((dim as u64) << 32) | level as u64);
            let tag = format!("n={dim} L={level}");
            let mut push = |label: String, law: Option<Law>, f: StepFunction| {
                let index = out.len();
                out.push(Case {
                    index,
                    label,
                    seed: mix_seed(grid_seed, index as u64),
                    law,
                    f,
                });
            };
            if grid.cell_count() >= 2 {
                push(format!("{tag} dipole"), None, gen_dipole(&grid)?);
            }
            if dim == 1 && level >= 1 {
                for q in POWER_PROFILE_EXPONENTS {
                    push(format!("{tag} power q={q}"), None, gen_power(q, &grid)?);
                }
                push(format!("{tag} log"), None, gen_log(&grid)?);
            }
            for i in 0..config.cases {
                let law = Law::ALL[i % Law::ALL.len()];
                let seed = mix_seed(grid_seed, 1 << 40 | i as u64);
                push(
                    format!("{tag} {law} #{i}"),
                    Some(law),
                    gen_random(seed, &grid, law),
                );
            }
        }
    }
    Ok(out)
}

struct Recorder<'a> {
    case: &'a Case,
    out: &'a mut Vec<CheckRecord>,
}

impl Recorder<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        check: CheckId,
        p: Option<Exponent>,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        constant: f64,
        tolerance: f64,
        witness: Value,
    ) {
        self.out.push(CheckRecord {
            check,
            statement: check.statement().to_string(),
            case: self.case.index,
            label: self.case.label.clone(),
            p,
            relation,
            lhs,
            rhs,
            constant,
            tolerance,
            pass: relation.holds(lhs, rhs, constant, tolerance),
            witness,
        });
    }
}

fn check_case(case: &Case, config: &SuiteConfig, out: &mut Vec<CheckRecord>) -> Result<()> {
    let f = &case.f;
    let grid = f.grid();
    let n = grid.dim() as f64;
    let q0 = grid.measure();
    let profile = Profile::of(f);
    let l1 = f.l1_norm();
    let tol = config.tolerance_eq;
    let mut rec = Recorder { case, out };

    rec.push(
        CheckId::L1Tail,
        None,
        Relation::Equal,
        profile.l1(),
        l1,
        1.0,
        ORACLE_TOLERANCE,
        Value::Null,
    );

    if config.p_values.contains(&Exponent::Infinity) {
        let ds = double_sharp_sup(&profile, Exponent::Infinity)?;
        let sh = sharp_sup(&profile, Exponent::Infinity)?;
        let witness = json!({ "double_sharp_at": ds.location, "sharp_at": sh.location });
        rec.push(
            CheckId::WeakInfinityEquality,
            Some(Exponent::Infinity),
            Relation::Equal,
            ds.value,
            sh.value,
            1.0,
            tol,
            witness,
        );
    }

    let finite: Vec<f64> = config
        .p_values
        .iter()
        .filter_map(|p| p.finite().ok())
        .collect();
    if !finite.is_empty() {
        let bmo = bmo_dyadic(f);
        let garo_table = GaroTable::new(f);
        let enumerable = antichain_count(grid) <= config.enumeration_limit as u128;
        for p in finite {
            let e = Exponent::Finite(p);
            let pc = e.conjugate();
            let ds = double_sharp_sup(&profile, e)?;
            let sh = sharp_sup(&profile, e)?;
            let weak = weak_sup(&profile, e)?;
            let ws = weak_star_sup(&profile, e)?;
            let oneil = oneil_sup(&profile, e)?.value.powf(1.0 / p);
            let at = |w: &crate::functionals::SupWitness| json!(w.location);

            rec.push(
                CheckId::WeakPEquality,
                Some(e),
                Relation::Equal,
                ds.value,
                sh.value,
                1.0,
                tol,
                json!({ "double_sharp_at": at(&ds), "sharp_at": at(&sh) }),
            );
            rec.push(
                CheckId::SandwichLower,
                Some(e),
                Relation::AtMost,
                sh.value,
                weak.value,
                1.0,
                INEQUALITY_SLACK,
                json!({ "sharp_at": at(&sh), "weak_at": at(&weak) }),
            );
            rec.push(
                CheckId::SandwichUpper,
                Some(e),
                Relation::AtMost,
                weak.value,
                sh.value,
                p - config.constants.sandwich_shift,
                INEQUALITY_SLACK,
                json!({ "weak_at": at(&weak), "sharp_at": at(&sh) }),
            );
            rec.push(
                CheckId::ClassicalLower,
                Some(e),
                Relation::AtMost,
                ws.value,
                weak.value,
                1.0,
                INEQUALITY_SLACK,
                Value::Null,
            );
            rec.push(
                CheckId::ClassicalUpper,
                Some(e),
                Relation::AtMost,
                weak.value,
                ws.value,
                pc,
                INEQUALITY_SLACK,
                Value::Null,
            );
            rec.push(
                CheckId::OneilUpper,
                Some(e),
                Relation::AtMost,
                oneil,
                ds.value.powf(1.0 / p) * ws.value.powf(1.0 - 1.0 / p),
                1.0,
                INEQUALITY_SLACK,
                json!({ "double_sharp": ds.value, "weak_star": ws.value }),
            );
            rec.push(
                CheckId::OneilLower,
                Some(e),
                Relation::AtMost,
                ws.value,
                oneil,
                oneil_lower_constant(p),
                INEQUALITY_SLACK,
                Value::Null,
            );

            let jn_objective = PackingObjective::john_nirenberg(f, p)?;
            let garo_objective = PackingObjective::garsia_rodemich(f, e)?;
            let jn = jn_norm_dyadic(f, p)?;
            let garo = garo_table.optimum(e)?;
            ensure_reproduces("JN", &jn_objective, &jn)?;
            ensure_reproduces("GaRo", &garo_objective, &garo)?;

            rec.push(
                CheckId::GaroJn,
                Some(e),
                Relation::AtMost,
                garo.value,
                jn.value,
                config.constants.garo_jn,
                INEQUALITY_SLACK,
                json!({ "garo_packing": garo.packing.cubes(), "jn_packing": jn.packing.cubes() }),
            );

            let mut holder = HolderScan::new(grid, &jn_objective, &garo_objective, p);
            let mut brute = (0.0f64, 0.0f64);
            if enumerable {
                for_each_packing(grid, |nodes| {
                    holder.visit(nodes);
                    brute.0 = brute.0.max(jn_objective.evaluate_nodes(nodes));
                    brute.1 = brute.1.max(garo_objective.evaluate_nodes(nodes));
                })?;
            } else {
                for nodes in sampled_packings(
                    grid,
                    &jn,
                    &garo,
                    mix_seed(case.seed, PACKING_SALT ^ p.to_bits()),
                ) {
                    holder.visit(&nodes);
                }
            }
            let (h_lhs, h_rhs, h_nodes) = holder.worst();
            let h_cubes: Vec<_> = h_nodes.iter().map(|&k| grid.cube_from_node(k)).collect();
            rec.push(CheckId::HolderStep, Some(e), Relation::AtMost, h_lhs, h_rhs, config.constants.garo_jn,
                INEQUALITY_SLACK, json!({ "packing": h_cubes, "packings_checked": holder.count, "exhaustive": enumerable }));

            rec.push(
                CheckId::GaroWeakStar,
                Some(e),
                Relation::AtMost,
                garo.value,
                ws.value,
                2.0 * p / (p - 1.0),
                INEQUALITY_SLACK,
                Value::Null,
            );
            let cover_term = 2f64.powf(n / pc + 1.0) * garo.value;
            let l1_term = (4.0 / q0).powf(1.0 / pc) * l1;
            rec.push(
                CheckId::SharpCover,
                Some(e),
                Relation::AtMost,
                sh.value,
                cover_term + l1_term,
                1.0,
                INEQUALITY_SLACK,
                json!({ "garo_term": cover_term, "l1_term": l1_term, "sharp_at": at(&sh) }),
            );
            rec.push(
                CheckId::BmoDomination,
                Some(e),
                Relation::AtMost,
                jn.value,
                bmo,
                q0.powf(1.0 / p),
                INEQUALITY_SLACK,
                json!({ "packing": jn.packing.cubes() }),
            );

            if enumerable {
                rec.push(
                    CheckId::PackingOracleJn,
                    Some(e),
                    Relation::Equal,
                    jn.value,
                    brute.0,
                    1.0,
                    ORACLE_TOLERANCE,
                    json!({ "packing": jn.packing.cubes() }),
                );
                rec.push(
                    CheckId::PackingOracleGaro,
                    Some(e),
                    Relation::Equal,
                    garo.value,
                    brute.1,
                    1.0,
                    ORACLE_TOLERANCE,
                    json!({ "packing": garo.packing.cubes() }),
                );
            }
        }
    }

    check_cover(&mut rec, case)?;
    check_tensor(&mut rec, case)?;
    Ok(())
}

/// `C₂(p) = 2·2^{(p−1)/p}` of `‖f‖* ≤ C₂ O_p(f)`.
pub fn oneil_lower_constant(p: f64) -> f64 {
    2.0 * 2f64.powf((p - 1.0) / p)
}

fn ensure_reproduces(name: &str, objective: &PackingObjective, opt: &OptimalPacking) -> Result<()> {
    let again = objective.evaluate(&opt.packing);
    if !Relation::Equal.holds(again, opt.value, 1.0, ORACLE_TOLERANCE) {
        return Err(Error::Inconsistency(format!(
            "{name} witness evaluates to {again}, optimum reported {}",
            opt.value
        )));
    }
    Ok(())
}

/// Tracks the packing with the largest Hölder ratio
/// `Σ D / ((Σ|Q|)^{1/p'} (Σ |Q| osc^p)^{1/p})`.
struct HolderScan<'a> {
    jn: &'a [f64],
    garo: &'a [f64],
    node_cells: Vec<usize>,
    cell_measure: f64,
    p: f64,
    best: (f64, f64, f64, Vec<usize>),
    count: u64,
}

impl<'a> HolderScan<'a> {
    fn new(grid: &Grid, jn: &'a PackingObjective, garo: &'a PackingObjective, p: f64) -> Self {
        let node_cells = (0..=grid.level())
            .flat_map(|d| std::iter::repeat_n(grid.cells_at_depth(d), grid.cubes_at_depth(d)))
            .collect();
        Self {
            jn: jn.weights(),
            garo: garo.weights(),
            node_cells,
            cell_measure: grid.cell_measure(),
            p,
            best: (f64::NEG_INFINITY, 0.0, 0.0, Vec::new()),
            count: 0,
        }
    }

    fn visit(&mut self, nodes: &[usize]) {
        self.count += 1;
        let d = numeric::sum(nodes.iter().map(|&k| self.garo[k]));
        let j = numeric::sum(nodes.iter().map(|&k| self.jn[k]));
        let m = nodes.iter().map(|&k| self.node_cells[k]).sum::<usize>() as f64 * self.cell_measure;
        let rhs = m.powf(1.0 - 1.0 / self.p) * j.powf(1.0 / self.p);
        let ratio = if rhs > 0.0 {
            d / rhs
        } else if d > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > self.best.0 {
            self.best = (ratio, d, rhs, nodes.to_vec());
        }
    }

    fn worst(&self) -> (f64, f64, Vec<usize>) {
        (self.best.1, self.best.2, self.best.3.clone())
    }
}

/// Packings checked when exhaustive enumeration is out of reach: every
/// single cube, every full layer, both optimal witnesses and random
/// antichains.
fn sampled_packings(
    grid: &Grid,
    jn: &OptimalPacking,
    garo: &OptimalPacking,
    seed: u64,
) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..grid.node_count()).map(|k| vec![k]).collect();
    for d in 0..=grid.level() {
        let start = grid.depth_offset(d);
        out.push((start..start + grid.cubes_at_depth(d)).collect());
    }
    for opt in [jn, garo] {
        if !opt.packing.is_empty() {
            out.push(
                opt.packing
                    .cubes()
                    .iter()
                    .map(|q| grid.node_id(q))
                    .collect(),
            );
        }
    }
    let mut rng = rng_for(seed);
    while out.len() < grid.node_count() + grid.level() as usize + 3 + SAMPLED_PACKINGS {
        let mut nodes = Vec::new();
        random_antichain(grid, 0, &mut rng, &mut nodes);
        if !nodes.is_empty() {
            out.push(nodes);
        }
    }
    out
}

fn random_antichain(grid: &Grid, node: usize, rng: &mut impl Rng, out: &mut Vec<usize>) {
    let cube = grid.cube_from_node(node);
    if cube.depth == grid.level() {
        if rng.gen_bool(0.5) {
            out.push(node);
        }
        return;
    }
    if rng.gen_bool(0.3) {
        out.push(node);
        return;
    }
    let b = grid.branching();
    let first = grid.depth_offset(cube.depth + 1) + cube.tree_prefix() * b;
    for child in first..first + b {
        random_antichain(grid, child, rng, out);
    }
}

fn check_cover(rec: &mut Recorder<'_>, case: &Case) -> Result<()> {
    let grid = case.f.grid();
    let omega = gen_cell_set(mix_seed(case.seed, COVER_SALT), grid);
    let report = dyadic_cover(&omega)?;
    let verified = verify_cover(&omega, &report);

    // independent recount in tree order
    let members = grid.to_tree_order(omega.members());
    let mut owners = vec![0u32; members.len()];
    let mut max_density = 0.0f64;
    let mut covered = 0usize;
    for cube in report.cover.cubes() {
        let range = grid.cube_cells(cube);
        let inside = members[range.clone()].iter().filter(|&&m| m).count();
        max_density = max_density.max(inside as f64 / range.len() as f64);
        covered += range.len();
        for o in &mut owners[range] {
            *o += 1;
        }
    }
    let defects = members
        .iter()
        .zip(&owners)
        .filter(|&(&m, &o)| o > 1 || (m && o != 1))
        .count() as f64;
    let omega_measure = omega.count() as f64 * grid.cell_measure();
    let covered_measure = covered as f64 * grid.cell_measure();
    let bound = 2f64.powi(grid.dim() as i32 + 1);

    let witness = json!({ "omega_cells": omega.count(), "cover": report.cover.cubes() });
    rec.push(
        CheckId::CoverDensity,
        None,
        Relation::AtMost,
        max_density,
        0.5,
        1.0,
        0.0,
        witness,
    );
    rec.push(
        CheckId::CoverContainment,
        None,
        Relation::AtMost,
        defects,
        0.0,
        1.0,
        0.0,
        Value::Null,
    );
    rec.push(
        CheckId::CoverMeasure,
        None,
        Relation::AtMost,
        covered_measure,
        omega_measure,
        bound,
        0.0,
        Value::Null,
    );

    let recount = CoverAgreement {
        density: max_density <= 0.5,
        covers: defects == 0.0,
        measure: omega.count() <= covered && covered as f64 <= bound * omega.count() as f64,
    };
    if (recount.density, recount.covers, recount.measure)
        != (verified.density, verified.covers, verified.measure)
    {
        return Err(Error::Inconsistency(format!(
            "cover checks disagree for case {}: recount {recount:?}, verifier {verified:?}",
            case.index
        )));
    }
    Ok(())
}

#[derive(Debug)]
struct CoverAgreement {
    density: bool,
    covers: bool,
    measure: bool,
}

fn check_tensor(rec: &mut Recorder<'_>, case: &Case) -> Result<()> {
    let f = &case.f;
    let g_level = 1 + (case.index % 3) as u32;
    let law = case.law.unwrap_or(Law::TwoPoint);
    let g = gen_random(
        mix_seed(case.seed, TENSOR_SALT),
        &Grid::new(1, g_level, 1.0)?,
        law,
    );
    if f.grid().cell_count() * g.grid().cell_count() > TENSOR_CELL_GUARD {
        return Ok(());
    }
    let lambda = tensor_distribution(f, &g);
    let brute = distribution(&tensor_brute(f, &g)?);
    let mismatches = curve_mismatches(&lambda, &brute) as f64;
    rec.push(
        CheckId::TensorExact,
        None,
        Relation::Equal,
        mismatches,
        0.0,
        1.0,
        0.0,
        json!({ "breakpoints": lambda.len(), "g_level": g_level }),
    );

    let check = tensor_infinity_check(f, &g)?;
    rec.push(
        CheckId::TensorInfinity,
        Some(Exponent::Infinity),
        Relation::AtMost,
        check.lhs,
        check.rhs,
        1.0,
        TENSOR_CHECK_SLACK,
        json!({ "f_double_sharp": check.f_double_sharp, "g_sup": check.g_sup }),
    );

    // worst point of the transport formula; probes avoid the jumps, where
    // z/u_j may round to the other side of a breakpoint of λ_f
    let lambda_f = distribution(f);
    let b = lambda.breakpoints();
    let mut probes = vec![0.0];
    for (i, &z) in b.iter().enumerate() {
        let prev = if i == 0 { 0.0 } else { b[i - 1] };
        probes.push(0.5 * (prev + z));
    }
    probes.push(b.last().map_or(1.0, |&z| 2.0 * z));
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
    for z in probes {
        let lhs = lambda.eval(z);
        let rhs = tensor_distribution_at(&lambda_f, &g, z);
        let scale = lhs.abs().max(rhs.abs());
        let err = if scale > 0.0 {
            (lhs - rhs).abs() / scale
        } else {
            0.0
        };
        if err > worst.0 {
            worst = (err, lhs, rhs, z);
        }
    }
    rec.push(
        CheckId::TensorTransport,
        None,
        Relation::Equal,
        worst.1,
        worst.2,
        1.0,
        ORACLE_TOLERANCE,
        json!({ "z": worst.3 }),
    );
    Ok(())
}

fn curve_mismatches(
    a: &crate::rearrangement::StepCurve,
    b: &crate::rearrangement::StepCurve,
) -> usize {
    let diff = |x: &[f64], y: &[f64]| {
        x.iter().zip(y).filter(|(u, v)| u != v).count() + x.len().abs_diff(y.len())
    };
    diff(a.breakpoints(), b.breakpoints()) + diff(a.values(), b.values())
}

/// Convergence of the one-dimensional profiles at [`CONVERGENCE_LEVEL`].
fn check_convergence(first_index: usize, out: &mut Vec<CheckRecord>) -> Result<()> {
    let grid = Grid::new(1, CONVERGENCE_LEVEL, 1.0)?;
    let two = Exponent::Finite(2.0);
    let power = gen_power(2.0, &grid)?;
    let log = gen_log(&grid)?;
    let power_case = Case {
        index: first_index,
        label: format!("n=1 L={CONVERGENCE_LEVEL} power q=2"),
        seed: 0,
        law: None,
        f: power.clone(),
    };
    let mut rec = Recorder {
        case: &power_case,
        out,
    };
    let near = Relation::Near;
    let tol = CONVERGENCE_TOLERANCE;
    rec.push(
        CheckId::ConvergenceWeakStar,
        Some(two),
        near,
        weak_star_norm(&power, two)?,
        1.0,
        1.0,
        tol,
        Value::Null,
    );
    rec.push(
        CheckId::ConvergenceSharp,
        Some(two),
        near,
        sharp_norm(&power, two)?,
        2.0,
        1.0,
        tol,
        Value::Null,
    );
    rec.push(
        CheckId::ConvergenceOneil,
        Some(two),
        near,
        oneil_functional(&power, two)?,
        1.0,
        1.0,
        tol,
        Value::Null,
    );
    let log_case = Case {
        index: first_index + 1,
        label: format!("n=1 L={CONVERGENCE_LEVEL} log"),
        seed: 0,
        law: None,
        f: log.clone(),
    };
    let mut rec = Recorder {
        case: &log_case,
        out: rec.out,
    };
    rec.push(
        CheckId::ConvergenceLog,
        Some(Exponent::Infinity),
        near,
        sharp_norm(&log, Exponent::Infinity)?,
        1.0,
        1.0,
        tol,
        Value::Null,
    );
    Ok(())
}
