//! Distribution functions of tensor products `(f⊗g)(x, y) = f(x) g(y)`.
//!
//! `λ_{f⊗g}(z) = ∫_0^∞ λ_f(z/u) d(−λ_g(u)) = Σ_j m_j λ_f(z/u_j)` where
//! `(u_j, m_j)` are the distinct nonzero `|g|` values and their masses.
//! The curve is assembled from integer cell counts so that it coincides
//! bit-for-bit with the distribution of the materialized product.

use serde::Serialize;

use crate::dyadic::{CellValues, StepFunction};
use crate::error::{Error, Result};
use crate::functionals::{double_sharp_of_distribution, Exponent};
use crate::numeric::CompensatedSum;
use crate::rearrangement::{distribution, LevelCounts, StepCurve};

/// The Stieltjes measure `d(−λ_g)`: point masses at the distinct nonzero
/// `|g|` values, largest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueMassList {
    pub values: Vec<f64>,
    pub counts: Vec<u64>,
    pub cell_measure: f64,
}

impl ValueMassList {
    pub fn of<F: CellValues + ?Sized>(g: &F) -> Self {
        let lc = LevelCounts::of(g);
        Self {
            values: lc.levels,
            counts: lc.counts,
            cell_measure: lc.cell_measure,
        }
    }

    /// Mass `m_j` at `values[j]`.
    pub fn mass(&self, j: usize) -> f64 {
        self.counts[j] as f64 * self.cell_measure
    }

    pub fn total_mass(&self) -> f64 {
        self.counts.iter().sum::<u64>() as f64 * self.cell_measure
    }
}

/// `λ_{f⊗g}` as an exact step curve.
pub fn tensor_distribution<F, G>(f: &F, g: &G) -> StepCurve
where
    F: CellValues + ?Sized,
    G: CellValues + ?Sized,
{
    let lf = LevelCounts::of(f);
    let lg = ValueMassList::of(g);
    let mut products: Vec<(f64, u64)> = Vec::with_capacity(lf.levels.len() * lg.values.len());
    for (&v, &cv) in lf.levels.iter().zip(&lf.counts) {
        for (&u, &cu) in lg.values.iter().zip(&lg.counts) {
            products.push((v * u, cv * cu));
        }
    }
    products.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut levels: Vec<f64> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for (z, c) in products {
        if z == 0.0 {
            continue;
        }
        match levels.last() {
            Some(&last) if last == z => *counts.last_mut().unwrap() += c,
            _ => {
                levels.push(z);
                counts.push(c);
            }
        }
    }
    let cell_measure = f.cell_measure() * g.cell_measure();
    LevelCounts {
        levels,
        counts,
        cell_measure,
    }
    .rearrangement()
    .inverse()
}

/// `Σ_j m_j λ_f(z/u_j)` evaluated directly from the formula.
pub fn tensor_distribution_at<F: CellValues + ?Sized>(lambda_f: &StepCurve, g: &F, z: f64) -> f64 {
    let masses = ValueMassList::of(g);
    let mut acc = CompensatedSum::new();
    for (j, &u) in masses.values.iter().enumerate() {
        acc.add(masses.mass(j) * lambda_f.eval(z / u));
    }
    acc.value()
}

/// Product function on the product of the two grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFunction {
    /// `values[a * |g| + b] = f_a g_b` (row-major in `f`, then `g`).
    pub values: Vec<f64>,
    pub cell_measure: f64,
    pub dim: usize,
}

impl CellValues for ProductFunction {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }

    fn cell_measure(&self) -> f64 {
        self.cell_measure
    }
}

/// Largest product cell count accepted by [`tensor_brute`].
pub const TENSOR_CELL_GUARD: usize = 1 << 20;

/// Materializes `f⊗g` (oracle).
pub fn tensor_brute(f: &StepFunction, g: &StepFunction) -> Result<ProductFunction> {
    let (nf, ng) = (f.values().len(), g.values().len());
    if nf.saturating_mul(ng) > TENSOR_CELL_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{nf} x {ng} product cells exceeds the limit of {TENSOR_CELL_GUARD}"
        )));
    }
    let values = f
        .values()
        .iter()
        .flat_map(|&a| g.values().iter().map(move |&b| a * b))
        .collect();
    Ok(ProductFunction {
        values,
        cell_measure: f.cell_measure() * g.cell_measure(),
        dim: f.grid().dim() + g.grid().dim(),
    })
}

/// Result of checking `‖f⊗g‖_{L(∞,∞)} ≤ ‖f‖_{L(∞,∞)} ‖g‖_{L^∞}` via the
/// `##` functionals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub f_double_sharp: f64,
    pub g_sup: f64,
    pub pass: bool,
}

/// Relative slack allowed for round-off in [`tensor_infinity_check`].
pub const TENSOR_CHECK_SLACK: f64 = 1e-12;

pub fn tensor_infinity_check(f: &StepFunction, g: &StepFunction) -> Result<TensorCheck> {
    let lhs = double_sharp_of_distribution(&tensor_distribution(f, g), Exponent::Infinity)?;
    let f_double_sharp = double_sharp_of_distribution(&distribution(f), Exponent::Infinity)?;
    let g_sup = g.sup_abs();
    let rhs = f_double_sharp * g_sup;
    Ok(TensorCheck {
        lhs,
        rhs,
        f_double_sharp,
        g_sup,
        pass: lhs <= rhs * (1.0 + TENSOR_CHECK_SLACK),
    })
}
