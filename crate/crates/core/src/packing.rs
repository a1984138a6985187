//! John–Nirenberg and Garsia–Rodemich functionals over dyadic packings.
//!
//! A packing is an antichain of the dyadic cube tree. Both functionals are
//! suprema over the (finite) set of packings of the grid:
//!
//! * JN: `(Σ_i |Q_i| osc(Q_i)^p)^{1/p}` — an additive objective, solved by
//!   `best(Q) = max(w(Q), Σ_children best(child))`;
//! * GaRo: `Σ_i D(Q_i) / (Σ_i |Q_i|)^{1/p'}` with
//!   `D(Q) = (1/|Q|)∬_{Q×Q}|f(x) − f(y)|` — a ratio objective, solved by a
//!   tree knapsack over the exact number of covered cells followed by a scan
//!   over that count.

use serde::Serialize;

use crate::dyadic::{cube_mean, DyadicCube, Grid, Packing, StepFunction};
use crate::error::{Error, Result};
use crate::functionals::Exponent;
use crate::numeric::{self, CompensatedSum};

/// `(1/|Q|) ∫_Q |f − f_Q|`.
pub fn mean_oscillation(f: &StepFunction, cube: &DyadicCube) -> Result<f64> {
    let mean = cube_mean(f, cube)?;
    let vals = f.cube_values(cube)?;
    Ok(numeric::sum(vals.iter().map(|v| (v - mean).abs())) / vals.len() as f64)
}

/// `(1/|Q|) ∬_{Q×Q} |f(x) − f(y)| dx dy`.
pub fn double_oscillation(f: &StepFunction, cube: &DyadicCube) -> Result<f64> {
    let vals = f.cube_values(cube)?;
    Ok(pair_sum(vals) * f.grid().cell_measure() / vals.len() as f64)
}

/// `Σ_{a,b} |v_a − v_b|` over ordered pairs, via sorting:
/// `Σ_{a<b} (v_(b) − v_(a)) = Σ_i (2i − k + 1) v_(i)`.
fn pair_sum(vals: &[f64]) -> f64 {
    let k = vals.len();
    let mut sorted = vals.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut acc = CompensatedSum::new();
    for (i, v) in sorted.iter().enumerate() {
        acc.add((2.0 * i as f64 - (k as f64 - 1.0)) * v);
    }
    2.0 * acc.value()
}

/// Which packing functional an objective describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// `(Σ w(Q_i))^{1/p}`, `w(Q) = |Q| osc(Q)^p`.
    SumPower { p: f64 },
    /// `Σ w(Q_i) / (Σ |Q_i|)^{1/p'}`, `w(Q) = D(Q)`.
    Ratio { p: f64 },
}

/// Per-cube weights (indexed by flat node id) plus aggregation rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingObjective {
    grid: Grid,
    weights: Vec<f64>,
    mode: Aggregation,
}

impl PackingObjective {
    pub fn john_nirenberg(f: &StepFunction, p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::ExponentOutOfRange(format!(
                "p = {p}, expected p in [1, inf)"
            )));
        }
        let grid = f.grid().clone();
        let weights = node_weights(f, |vals, cells| {
            let mean = numeric::sum(vals.iter().copied()) / vals.len() as f64;
            let osc = numeric::sum(vals.iter().map(|v| (v - mean).abs())) / vals.len() as f64;
            cells as f64 * grid.cell_measure() * osc.powf(p)
        });
        Ok(Self {
            grid,
            weights,
            mode: Aggregation::SumPower { p },
        })
    }

    pub fn garsia_rodemich(f: &StepFunction, p: Exponent) -> Result<Self> {
        let p = p.finite()?;
        Ok(Self {
            grid: f.grid().clone(),
            weights: garo_weights(f),
            mode: Aggregation::Ratio { p },
        })
    }

    pub fn mode(&self) -> Aggregation {
        self.mode
    }

    pub fn weight(&self, cube: &DyadicCube) -> f64 {
        self.weights[self.grid.node_id(cube)]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Objective value of a packing given by node ids (empty → 0).
    pub fn evaluate_nodes(&self, nodes: &[usize]) -> f64 {
        if nodes.is_empty() {
            return 0.0;
        }
        let num = numeric::sum(nodes.iter().map(|&n| self.weights[n]));
        match self.mode {
            Aggregation::SumPower { p } => num.powf(1.0 / p),
            Aggregation::Ratio { p } => {
                let cells: usize = nodes
                    .iter()
                    .map(|&n| self.grid.cells_at_depth(self.grid.cube_from_node(n).depth))
                    .sum();
                num / (cells as f64 * self.grid.cell_measure()).powf(1.0 - 1.0 / p)
            }
        }
    }

    pub fn evaluate(&self, packing: &Packing) -> f64 {
        let nodes: Vec<usize> = packing
            .cubes()
            .iter()
            .map(|q| self.grid.node_id(q))
            .collect();
        self.evaluate_nodes(&nodes)
    }
}

fn node_weights(f: &StepFunction, weight: impl Fn(&[f64], usize) -> f64) -> Vec<f64> {
    let grid = f.grid();
    let mut out = Vec::with_capacity(grid.node_count());
    for depth in 0..=grid.level() {
        let len = grid.cells_at_depth(depth);
        for chunk in f.tree_values().chunks(len) {
            out.push(weight(chunk, len));
        }
    }
    out
}

fn garo_weights(f: &StepFunction) -> Vec<f64> {
    let mu = f.grid().cell_measure();
    node_weights(f, |vals, _| pair_sum(vals) * mu / vals.len() as f64)
}

/// An optimum with a packing that attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalPacking {
    pub value: f64,
    pub packing: Packing,
    /// Per-cube weights `w(Q_i)` in packing order.
    pub contributions: Vec<f64>,
}

fn witness(grid: &Grid, weights: &[f64], nodes: Vec<usize>, value: f64) -> Result<OptimalPacking> {
    let contributions = nodes.iter().map(|&n| weights[n]).collect();
    let cubes = nodes.iter().map(|&n| grid.cube_from_node(n)).collect();
    Ok(OptimalPacking {
        value,
        packing: Packing::new(grid.clone(), cubes)?,
        contributions,
    })
}

/// Dyadic `JN_p(f, Q0)`; `p ∈ [1, ∞)`.
///
/// Ties between a cube and its children prefer the cube. A zero optimum
/// returns the empty packing.
pub fn jn_norm_dyadic(f: &StepFunction, p: f64) -> Result<OptimalPacking> {
    let objective = PackingObjective::john_nirenberg(f, p)?;
    let grid = f.grid();
    let w = objective.weights();
    let n = grid.node_count();
    let mut best = vec![0.0; n];
    let mut take = vec![false; n];
    let b = grid.branching();
    for depth in (0..=grid.level()).rev() {
        let off = grid.depth_offset(depth);
        let child_off = grid.depth_offset(depth + 1);
        for k in 0..grid.cubes_at_depth(depth) {
            let node = off + k;
            let children = if depth == grid.level() {
                0.0
            } else {
                numeric::sum((0..b).map(|c| best[child_off + k * b + c]))
            };
            if w[node] >= children {
                best[node] = w[node];
                take[node] = true;
            } else {
                best[node] = children;
            }
        }
    }
    let mut nodes = Vec::new();
    if best[0] > 0.0 {
        collect_jn(grid, &take, &best, 0, 0, &mut nodes);
    }
    let value = if nodes.is_empty() {
        0.0
    } else {
        objective.evaluate_nodes(&nodes)
    };
    witness(grid, w, nodes, value)
}

fn collect_jn(
    grid: &Grid,
    take: &[bool],
    best: &[f64],
    depth: u32,
    k: usize,
    out: &mut Vec<usize>,
) {
    let node = grid.depth_offset(depth) + k;
    if best[node] == 0.0 {
        return;
    }
    if take[node] {
        out.push(node);
        return;
    }
    let b = grid.branching();
    for c in 0..b {
        collect_jn(grid, take, best, depth + 1, k * b + c, out);
    }
}

/// Max-plus knapsack tables for the GaRo numerator.
///
/// `best(Q, m)` is the largest `Σ D(Q_i)` over packings inside `Q` covering
/// exactly `m` cells (`−∞` when impossible). The tables depend on `f` only,
/// so one table serves every exponent.
#[derive(Debug, Clone)]
pub struct GaroTable {
    grid: Grid,
    weights: Vec<f64>,
    /// Per node: `best(Q, m)` for `m = 0..=cells(Q)`.
    best: Vec<Vec<f64>>,
    /// Per node: whether the full-count entry uses the cube itself.
    own: Vec<bool>,
    /// Per node, per child stage `s ≥ 1`: cells assigned to children `0..s`
    /// for each combined count `m` (stage 0 is trivial).
    splits: Vec<Vec<Vec<u32>>>,
}

impl GaroTable {
    pub fn new(f: &StepFunction) -> Self {
        let grid = f.grid().clone();
        let weights = garo_weights(f);
        let n = grid.node_count();
        let b = grid.branching();
        let mut best: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut own = vec![false; n];
        let mut splits: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
        for depth in (0..=grid.level()).rev() {
            let off = grid.depth_offset(depth);
            let child_off = grid.depth_offset(depth + 1);
            for k in 0..grid.cubes_at_depth(depth) {
                let node = off + k;
                if depth == grid.level() {
                    best[node] = vec![0.0, weights[node]];
                    own[node] = true;
                    continue;
                }
                let mut acc = best[child_off + k * b].clone();
                let mut stages = Vec::with_capacity(b - 1);
                for c in 1..b {
                    let child = &best[child_off + k * b + c];
                    let (merged, split) = max_plus(&acc, child);
                    acc = merged;
                    stages.push(split);
                }
                let full = acc.len() - 1;
                if weights[node] >= acc[full] {
                    acc[full] = weights[node];
                    own[node] = true;
                }
                best[node] = acc;
                splits[node] = stages;
            }
        }
        Self {
            grid,
            weights,
            best,
            own,
            splits,
        }
    }

    /// `best(Q0, m)` for `m = 0..=cells`.
    pub fn root_profile(&self) -> &[f64] {
        &self.best[0]
    }

    /// Optimal ratio for exponent `p ∈ (1, ∞)`; ties prefer the smallest
    /// covered cell count.
    pub fn optimum(&self, p: Exponent) -> Result<OptimalPacking> {
        let p = p.finite()?;
        let q = 1.0 - 1.0 / p;
        let mu = self.grid.cell_measure();
        let mut best_m = None;
        let mut best_val = 0.0;
        for (m, &num) in self.best[0].iter().enumerate().skip(1) {
            if num == f64::NEG_INFINITY {
                continue;
            }
            let ratio = num / (m as f64 * mu).powf(q);
            if ratio > best_val {
                best_val = ratio;
                best_m = Some(m);
            }
        }
        let mut nodes = Vec::new();
        if let Some(m) = best_m {
            self.trace(0, 0, m, &mut nodes);
        }
        let objective = PackingObjective {
            grid: self.grid.clone(),
            weights: self.weights.clone(),
            mode: Aggregation::Ratio { p },
        };
        let value = objective.evaluate_nodes(&nodes);
        witness(&self.grid, &self.weights, nodes, value)
    }

    fn trace(&self, depth: u32, k: usize, m: usize, out: &mut Vec<usize>) {
        if m == 0 {
            return;
        }
        let node = self.grid.depth_offset(depth) + k;
        let full = self.best[node].len() - 1;
        if m == full && self.own[node] {
            out.push(node);
            return;
        }
        let b = self.grid.branching();
        let mut remaining = m;
        let mut per_child = vec![0usize; b];
        for c in (1..b).rev() {
            let before = self.splits[node][c - 1][remaining] as usize;
            per_child[c] = remaining - before;
            remaining = before;
        }
        per_child[0] = remaining;
        for (c, &mc) in per_child.iter().enumerate() {
            self.trace(depth + 1, k * b + c, mc, out);
        }
    }
}

/// Max-plus convolution; returns the merged array and, per total, the
/// amount assigned to the left operand (smallest on ties).
fn max_plus(left: &[f64], right: &[f64]) -> (Vec<f64>, Vec<u32>) {
    let len = left.len() + right.len() - 1;
    let mut out = vec![f64::NEG_INFINITY; len];
    let mut arg = vec![0u32; len];
    for (i, &l) in left.iter().enumerate() {
        if l == f64::NEG_INFINITY {
            continue;
        }
        for (j, &r) in right.iter().enumerate() {
            if r == f64::NEG_INFINITY {
                continue;
            }
            let v = l + r;
            if v > out[i + j] {
                out[i + j] = v;
                arg[i + j] = i as u32;
            }
        }
    }
    (out, arg)
}

/// Dyadic `GaRo_p(f, Q0)`; `p ∈ (1, ∞)`.
pub fn garo_norm_dyadic(f: &StepFunction, p: Exponent) -> Result<OptimalPacking> {
    p.finite()?;
    GaroTable::new(f).optimum(p)
}

/// Largest cell count accepted by [`enumerate_packings`].
pub const ENUMERATION_CELL_GUARD: usize = 256;
/// Largest antichain count accepted by [`enumerate_packings`].
pub const ENUMERATION_COUNT_GUARD: u128 = 1 << 24;

/// Number of nonempty antichains of the cube tree (saturating).
pub fn antichain_count(grid: &Grid) -> u128 {
    // A(leaf) = 2 (counting the empty antichain), A(Q) = 1 + A(child)^{2^n}
    let mut a: u128 = 2;
    for _ in 0..grid.level() {
        let mut prod: u128 = 1;
        for _ in 0..grid.branching() {
            prod = prod.saturating_mul(a);
        }
        a = prod.saturating_add(1);
    }
    a - 1
}

fn check_enumeration_guard(grid: &Grid) -> Result<()> {
    if grid.cell_count() > ENUMERATION_CELL_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{} cells exceeds the enumeration limit of {ENUMERATION_CELL_GUARD}",
            grid.cell_count()
        )));
    }
    let count = antichain_count(grid);
    if count > ENUMERATION_COUNT_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{count} antichains exceeds the enumeration limit of {ENUMERATION_COUNT_GUARD}"
        )));
    }
    Ok(())
}

/// Calls `visit` with the node ids of every nonempty antichain exactly once.
///
/// Each internal cube is either selected or descended into; each leaf is
/// selected or skipped. This is a bijection with antichains.
pub fn for_each_packing(grid: &Grid, mut visit: impl FnMut(&[usize])) -> Result<()> {
    check_enumeration_guard(grid)?;
    let mut chosen = Vec::new();
    let mut pending = vec![0usize];
    walk(grid, &mut pending, &mut chosen, &mut visit);
    Ok(())
}

fn walk(
    grid: &Grid,
    pending: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let Some(node) = pending.pop() else {
        if !chosen.is_empty() {
            visit(chosen);
        }
        return;
    };
    let cube = grid.cube_from_node(node);
    chosen.push(node);
    walk(grid, pending, chosen, visit);
    chosen.pop();
    if cube.depth < grid.level() {
        let b = grid.branching();
        let first = grid.depth_offset(cube.depth + 1) + cube.tree_prefix() * b;
        let mark = pending.len();
        pending.extend((first..first + b).rev());
        walk(grid, pending, chosen, visit);
        pending.truncate(mark);
    } else {
        walk(grid, pending, chosen, visit);
    }
    pending.push(node);
}

/// Every nonempty packing of the grid (oracle; guarded).
pub fn enumerate_packings(grid: &Grid) -> Result<Vec<Packing>> {
    let mut out = Vec::new();
    for_each_packing(grid, |nodes| {
        let cubes = nodes.iter().map(|&n| grid.cube_from_node(n)).collect();
        out.push(Packing::new(grid.clone(), cubes).expect("enumerated families are antichains"));
    })?;
    Ok(out)
}

/// Brute-force maximum of an objective over all packings (oracle).
pub fn brute_force_optimum(objective: &PackingObjective) -> Result<f64> {
    let mut best = 0.0f64;
    for_each_packing(&objective.grid, |nodes| {
        best = best.max(objective.evaluate_nodes(nodes));
    })?;
    Ok(best)
}
