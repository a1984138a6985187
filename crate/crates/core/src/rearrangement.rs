//! Distribution function, decreasing rearrangement, maximal function and
//! tail integrals of step functions, as exact piecewise curves.
//!
//! Conventions: `λ_f(t) = |{|f| > t}|` (strict), `f*(t) = inf{s ≥ 0 : λ_f(s) ≤ t}`
//! (right-continuous), `f**(t) = (1/t) ∫_0^t f*`. Curves are defined on all of
//! `(0, ∞)`, not only on `(0, |Q0|]`.

use serde::{Deserialize, Serialize};

use crate::dyadic::CellValues;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Nonincreasing right-continuous step function on `[0, ∞)` with finitely
/// many breakpoints and eventual value zero.
///
/// `curve(t) = values[j]` for `t ∈ [x_j, x_{j+1})` with `x_0 = 0`,
/// `x_{k+1} = ∞`; `values` is strictly decreasing and ends in `0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCurve {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepCurve {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::MalformedCurve(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if breakpoints.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::MalformedCurve("non-finite entry".into()));
        }
        if breakpoints.first().is_some_and(|&x| x <= 0.0)
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::MalformedCurve(
                "breakpoints must be positive and strictly increasing".into(),
            ));
        }
        if values.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::MalformedCurve(
                "curve is not strictly decreasing across plateaus".into(),
            ));
        }
        if *values.last().unwrap() != 0.0 {
            return Err(Error::MalformedCurve("final plateau must be zero".into()));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    /// The identically zero curve.
    pub fn zero() -> Self {
        Self {
            breakpoints: Vec::new(),
            values: vec![0.0],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of nonzero plateaus.
    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// Left endpoint of plateau `j` (`x_0 = 0`).
    pub fn left(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.breakpoints[j - 1]
        }
    }

    /// Right endpoint of plateau `j` (`∞` for the last one).
    pub fn right(&self, j: usize) -> f64 {
        self.breakpoints.get(j).copied().unwrap_or(f64::INFINITY)
    }

    /// Index of the plateau containing `t`.
    pub fn piece_index(&self, t: f64) -> usize {
        self.breakpoints.partition_point(|&x| x <= t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.values[self.piece_index(t)]
    }

    /// First point after which the curve vanishes.
    pub fn support_end(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// Generalized inverse `s ↦ inf{t ≥ 0 : curve(t) ≤ s}`.
    ///
    /// Maps `λ_f` to `f*` and `f*` to `λ_f`.
    pub fn inverse(&self) -> StepCurve {
        let k = self.breakpoints.len();
        let breakpoints = self.values[..k].iter().rev().copied().collect();
        let mut values: Vec<f64> = self.breakpoints.iter().rev().copied().collect();
        values.push(0.0);
        StepCurve {
            breakpoints,
            values,
        }
    }

    /// `∫_t^∞ curve(s) ds` for `t ≥ 0`.
    pub fn tail_integral(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::InvalidArgument {
                expected: "t >= 0",
                value: t,
            });
        }
        let mut acc = CompensatedSum::new();
        for j in (self.piece_index(t)..self.breakpoints.len()).rev() {
            let lo = self.left(j).max(t);
            acc.add(self.values[j] * (self.breakpoints[j] - lo));
        }
        Ok(acc.value())
    }

    /// `∫_0^∞ curve`.
    pub fn integral(&self) -> f64 {
        self.tail_integral(0.0).expect("0 is a valid argument")
    }
}

/// Piecewise curve `t ↦ A_j / t + v_j` on `[x_j, x_{j+1})`, defined for `t > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaCurve {
    breakpoints: Vec<f64>,
    coefficients: Vec<(f64, f64)>,
}

impl HyperbolaCurve {
    pub fn new(breakpoints: Vec<f64>, coefficients: Vec<(f64, f64)>) -> Result<Self> {
        if coefficients.len() != breakpoints.len() + 1 {
            return Err(Error::MalformedCurve("piece count mismatch".into()));
        }
        if breakpoints.first().is_some_and(|&x| x <= 0.0)
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::MalformedCurve(
                "breakpoints must be positive and strictly increasing".into(),
            ));
        }
        if coefficients
            .iter()
            .any(|&(a, v)| !(a.is_finite() && v.is_finite() && a >= 0.0))
        {
            return Err(Error::MalformedCurve(
                "coefficients must be finite with A >= 0".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            coefficients,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Per-piece `(A_j, v_j)`.
    pub fn coefficients(&self) -> &[(f64, f64)] {
        &self.coefficients
    }

    pub fn left(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.breakpoints[j - 1]
        }
    }

    pub fn right(&self, j: usize) -> f64 {
        self.breakpoints.get(j).copied().unwrap_or(f64::INFINITY)
    }

    pub fn piece_index(&self, t: f64) -> usize {
        self.breakpoints.partition_point(|&x| x <= t)
    }

    /// Value at `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        let (a, v) = self.coefficients[self.piece_index(t)];
        if a == 0.0 {
            v
        } else {
            a / t + v
        }
    }
}

/// Magnitudes of a cell family grouped into distinct nonzero levels,
/// largest first, with integer multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LevelCounts {
    pub levels: Vec<f64>,
    pub counts: Vec<u64>,
    pub cell_measure: f64,
}

impl LevelCounts {
    pub fn from_magnitudes(mut magnitudes: Vec<f64>, cell_measure: f64) -> Self {
        magnitudes.retain(|&m| m != 0.0);
        magnitudes.sort_by(|a, b| b.total_cmp(a));
        let mut levels: Vec<f64> = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for m in magnitudes {
            match levels.last() {
                Some(&last) if last == m => *counts.last_mut().unwrap() += 1,
                _ => {
                    levels.push(m);
                    counts.push(1);
                }
            }
        }
        Self {
            levels,
            counts,
            cell_measure,
        }
    }

    pub fn of<F: CellValues + ?Sized>(f: &F) -> Self {
        Self::from_magnitudes(
            f.cell_values().iter().map(|v| v.abs()).collect(),
            f.cell_measure(),
        )
    }

    /// `f*` with breakpoints `(cumulative count) × cell measure`.
    pub fn rearrangement(&self) -> StepCurve {
        let mut cumulative = 0u64;
        let breakpoints = self
            .counts
            .iter()
            .map(|&c| {
                cumulative += c;
                cumulative as f64 * self.cell_measure
            })
            .collect();
        let mut values = self.levels.clone();
        values.push(0.0);
        StepCurve {
            breakpoints,
            values,
        }
    }
}

/// `λ_f`: breakpoints at the distinct nonzero `|values|`, plateau heights
/// `(number of cells above) × cell measure`.
pub fn distribution<F: CellValues + ?Sized>(f: &F) -> StepCurve {
    LevelCounts::of(f).rearrangement().inverse()
}

/// `f*`: sorted `|values|` on intervals of length equal to the cell measure,
/// equal values merged.
pub fn rearrange<F: CellValues + ?Sized>(f: &F) -> StepCurve {
    LevelCounts::of(f).rearrangement()
}

/// `f**` from `f*`.
///
/// On plateau `j` of `f*`, `f**(t) = A_j / t + c_j` with
/// `A_j = ∫_0^{x_j} f* − c_j x_j`, accumulated as
/// `A_{j+1} = A_j + (c_j − c_{j+1}) x_{j+1}` so every increment is nonnegative.
pub fn maximal(fstar: &StepCurve) -> HyperbolaCurve {
    let k = fstar.len();
    let mut coefficients = Vec::with_capacity(k + 1);
    let mut acc = CompensatedSum::new();
    coefficients.push((0.0, fstar.values[0]));
    for j in 0..k {
        acc.add((fstar.values[j] - fstar.values[j + 1]) * fstar.breakpoints[j]);
        coefficients.push((acc.value(), fstar.values[j + 1]));
    }
    HyperbolaCurve {
        breakpoints: fstar.breakpoints.clone(),
        coefficients,
    }
}

/// `f** − f*` from `f*`: on plateau `j` it is `A_j / t`.
pub fn oscillation_curve(fstar: &StepCurve) -> HyperbolaCurve {
    let mut curve = maximal(fstar);
    for (_, v) in curve.coefficients.iter_mut() {
        *v = 0.0;
    }
    curve
}

/// `T(t) = ∫_t^∞ λ(s) ds`.
pub fn tail_integral(lambda: &StepCurve, t: f64) -> Result<f64> {
    lambda.tail_integral(t)
}

/// `(f** − f*)(t)` for `t > 0`.
pub fn oscillation_at<F: CellValues + ?Sized>(f: &F, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidArgument {
            expected: "t > 0",
            value: t,
        });
    }
    let fstar = rearrange(f);
    Ok(oscillation_curve(&fstar).eval(t))
}

/// Everything derived from `λ_f` in one place.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub distribution: StepCurve,
    pub rearrangement: StepCurve,
    pub maximal: HyperbolaCurve,
    /// `T(u_i)` at the left endpoint of every plateau of `λ_f`.
    pub tails: Vec<f64>,
}

impl Profile {
    pub fn of<F: CellValues + ?Sized>(f: &F) -> Self {
        let rearrangement = rearrange(f);
        let distribution = rearrangement.inverse();
        Self::assemble(distribution, rearrangement)
    }

    pub fn from_distribution(distribution: StepCurve) -> Self {
        let rearrangement = distribution.inverse();
        Self::assemble(distribution, rearrangement)
    }

    fn assemble(distribution: StepCurve, rearrangement: StepCurve) -> Self {
        let maximal = maximal(&rearrangement);
        let k = distribution.len();
        let mut tails = vec![0.0; k + 1];
        let mut acc = CompensatedSum::new();
        for i in (0..k).rev() {
            acc.add(distribution.values[i] * (distribution.right(i) - distribution.left(i)));
            tails[i] = acc.value();
        }
        Self {
            distribution,
            rearrangement,
            maximal,
            tails,
        }
    }

    /// `‖f‖_{L¹} = T(0)`.
    pub fn l1(&self) -> f64 {
        self.tails[0]
    }

    pub fn oscillation(&self) -> HyperbolaCurve {
        oscillation_curve(&self.rearrangement)
    }
}
