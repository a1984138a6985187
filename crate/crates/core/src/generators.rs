//! Deterministic test-function generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::{CellSet, Grid, StepFunction};
use crate::error::{Error, Result};

/// Value distribution for [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// Values uniform in `[0, 1)`.
    Uniform,
    /// Two magnitudes, random signs.
    TwoPoint,
    /// `|value| = U^{-1/q}` with `q ∈ {1.5, 2, 3}`, random signs.
    HeavyTail,
}

impl Law {
    pub const ALL: [Law; 3] = [Law::Uniform, Law::TwoPoint, Law::HeavyTail];
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Uniform => "uniform",
            Law::TwoPoint => "two-point",
            Law::HeavyTail => "heavy-tail",
        })
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Law::Uniform),
            "two-point" => Ok(Law::TwoPoint),
            "heavy-tail" => Ok(Law::HeavyTail),
            other => Err(Error::UnknownLaw(other.to_string())),
        }
    }
}

/// SplitMix64 finalizer, used to derive independent per-case seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_sign(rng: &mut impl Rng) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}

pub fn gen_random(seed: u64, grid: &Grid, law: Law) -> StepFunction {
    let mut rng = rng_for(seed);
    let n = grid.cell_count();
    let values = match law {
        Law::Uniform => (0..n).map(|_| rng.gen::<f64>()).collect(),
        Law::TwoPoint => {
            let a = rng.gen_range(0.5..2.0);
            let b = if rng.gen_bool(0.3) {
                0.0
            } else {
                rng.gen_range(0.0..1.0)
            };
            let pa = rng.gen_range(0.05..0.95);
            (0..n)
                .map(|_| {
                    let m = if rng.gen_bool(pa) { a } else { b };
                    m * random_sign(&mut rng)
                })
                .collect()
        }
        Law::HeavyTail => {
            let q = [1.5, 2.0, 3.0][rng.gen_range(0..3)];
            (0..n)
                .map(|_| {
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    u.powf(-1.0 / q) * random_sign(&mut rng)
                })
                .collect()
        }
    };
    StepFunction::new(grid.clone(), values).expect("generated values are finite")
}

/// Cell averages of `x ↦ x^{-1/p}` on a one-dimensional grid `[0, s0)`.
pub fn gen_power(p: f64, grid: &Grid) -> Result<StepFunction> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::ExponentOutOfRange(format!(
            "p = {p}, expected p in (1, inf)"
        )));
    }
    one_dimensional(grid)?;
    let e = 1.0 - 1.0 / p;
    let h = grid.cell_side();
    let values = (0..grid.cell_count())
        .map(|k| {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            (b.powf(e) - a.powf(e)) / (e * h)
        })
        .collect();
    StepFunction::new(grid.clone(), values)
}

/// Cell averages of `x ↦ log(1/x)` on a one-dimensional grid `[0, s0)`.
pub fn gen_log(grid: &Grid) -> Result<StepFunction> {
    one_dimensional(grid)?;
    let h = grid.cell_side();
    // antiderivative of -log x is x - x log x
    let anti = |x: f64| if x == 0.0 { 0.0 } else { x - x * x.ln() };
    let values = (0..grid.cell_count())
        .map(|k| (anti((k + 1) as f64 * h) - anti(k as f64 * h)) / h)
        .collect();
    StepFunction::new(grid.clone(), values)
}

/// `+1` on the first cell, `−1` on the second, zero elsewhere.
pub fn gen_dipole(grid: &Grid) -> Result<StepFunction> {
    let n = grid.cell_count();
    if n < 2 {
        return Err(Error::InvalidGrid("dipole needs at least two cells".into()));
    }
    let mut values = vec![0.0; n];
    values[0] = 1.0;
    values[1] = -1.0;
    StepFunction::new(grid.clone(), values)
}

/// Random nonempty cell set with `|Ω| ≤ |Q0|/2`.
pub fn gen_cell_set(seed: u64, grid: &Grid) -> CellSet {
    let mut rng = rng_for(seed);
    let n = grid.cell_count();
    let k = rng.gen_range(1..=(n / 2).max(1));
    let mut members = vec![false; n];
    if n >= 2 {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        for &i in &idx[..k] {
            members[i] = true;
        }
    }
    CellSet::new(grid.clone(), members).expect("length matches grid")
}

fn one_dimensional(grid: &Grid) -> Result<()> {
    if grid.dim() != 1 {
        return Err(Error::InvalidGrid(
            "profile generators are one-dimensional".into(),
        ));
    }
    Ok(())
}
