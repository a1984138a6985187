//! Scalar rearrangement-invariant functionals of step functions.
//!
//! Every supremum over `t > 0` is reduced, piece by piece, to maximizing
//! `a t^β + b t^δ` on an interval and solved in closed form by
//! [`maximize_power_pair`]. No grid scans.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::{enumerate_cubes, CellValues, StepFunction};
use crate::error::{Error, Result};
use crate::packing::mean_oscillation;
use crate::rearrangement::{Profile, StepCurve};

/// An exponent `p ∈ (1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Validates `p ∈ (1, ∞)`; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p > 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::ExponentOutOfRange(format!(
                "p = {p}, expected p in (1, inf]"
            )))
        }
    }

    pub fn finite(self) -> Result<f64> {
        match self {
            Exponent::Finite(p) => Ok(p),
            Exponent::Infinity => Err(Error::ExponentOutOfRange(
                "p = inf, expected p in (1, inf)".into(),
            )),
        }
    }

    /// `1/p` (zero for `p = ∞`).
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// `p' = p/(p−1)`, with `p' = 1` for `p = ∞`.
    pub fn conjugate(self) -> f64 {
        match self {
            Exponent::Finite(p) => p / (p - 1.0),
            Exponent::Infinity => 1.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| Error::ExponentOutOfRange(format!("cannot parse `{s}`")))?;
        if p.is_infinite() {
            return Err(Error::ExponentOutOfRange(
                "use \"inf\" for p = infinity".into(),
            ));
        }
        Exponent::new(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p).map_err(serde::de::Error::custom),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `t ↦ a t^β + b t^δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerPair {
    pub a: f64,
    pub beta: f64,
    pub b: f64,
    pub delta: f64,
}

impl PowerPair {
    pub fn new(a: f64, beta: f64, b: f64, delta: f64) -> Self {
        Self { a, beta, b, delta }
    }

    fn terms(&self) -> [(f64, f64); 2] {
        [(self.a, self.beta), (self.b, self.delta)]
    }

    /// Value at `t > 0`; zero coefficients contribute nothing.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms()
            .iter()
            .filter(|(c, _)| *c != 0.0)
            .map(|&(c, e)| c * t.powf(e))
            .sum()
    }

    /// Limit as `t → 0⁺`; `+∞`/`−∞` when divergent.
    fn limit_at_zero(&self) -> f64 {
        let mut value = 0.0;
        for (c, e) in self.terms() {
            if c == 0.0 || e > 0.0 {
                continue;
            }
            value += if e == 0.0 {
                c
            } else {
                c.signum() * f64::INFINITY
            };
        }
        value
    }

    /// Limit as `t → ∞`; `+∞`/`−∞` when divergent.
    fn limit_at_infinity(&self) -> f64 {
        let mut value = 0.0;
        for (c, e) in self.terms() {
            if c == 0.0 || e < 0.0 {
                continue;
            }
            value += if e == 0.0 {
                c
            } else {
                c.signum() * f64::INFINITY
            };
        }
        value
    }

    /// Stationary point `t* = (−bδ/(aβ))^{1/(β−δ)}` when it exists.
    fn critical_point(&self) -> Option<f64> {
        let (ab, bd) = (self.a * self.beta, self.b * self.delta);
        if ab == 0.0 || bd == 0.0 || self.beta == self.delta {
            return None;
        }
        let ratio = -bd / ab;
        (ratio > 0.0).then(|| ratio.powf(1.0 / (self.beta - self.delta)))
    }
}

/// Where a supremum over `t` is attained or approached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "t", rename_all = "snake_case")]
pub enum SupLocation {
    /// Attained at `t`.
    At(f64),
    /// Approached as `s → t⁻`.
    LeftLimit(f64),
    /// Approached as `s → t⁺`.
    RightLimit(f64),
    /// Approached as `s → ∞`.
    Infinity,
}

impl SupLocation {
    pub fn t(&self) -> f64 {
        match *self {
            SupLocation::At(t) | SupLocation::LeftLimit(t) | SupLocation::RightLimit(t) => t,
            SupLocation::Infinity => f64::INFINITY,
        }
    }
}

/// A supremum together with where it occurs and the closed-form expression
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupWitness {
    pub value: f64,
    pub location: SupLocation,
    pub expression: PowerPair,
}

impl SupWitness {
    /// Re-evaluates the expression at the recorded location (limits at
    /// interval ends are taken by continuity).
    pub fn reevaluate(&self) -> f64 {
        match self.location {
            SupLocation::Infinity => self.expression.limit_at_infinity(),
            loc if loc.t() == 0.0 => self.expression.limit_at_zero(),
            loc => self.expression.eval(loc.t()),
        }
    }

    fn better(self, other: SupWitness) -> SupWitness {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

/// `sup_{t ∈ [lo, hi)} a t^β + b t^δ` by exact calculus.
///
/// Candidates are `lo` (or its right limit when `lo = 0`), the left limit at
/// `hi` (or the limit at infinity) and the interior stationary point. Ties
/// go to the leftmost candidate.
pub fn maximize_power_pair(
    a: f64,
    beta: f64,
    b: f64,
    delta: f64,
    lo: f64,
    hi: f64,
) -> Result<SupWitness> {
    if !(lo >= 0.0 && lo.is_finite() && hi > lo) {
        return Err(Error::InvalidArgument {
            expected: "0 <= lo < hi",
            value: lo,
        });
    }
    let expression = PowerPair::new(a, beta, b, delta);
    let start = if lo == 0.0 {
        SupWitness {
            value: expression.limit_at_zero(),
            location: SupLocation::RightLimit(0.0),
            expression,
        }
    } else {
        SupWitness {
            value: expression.eval(lo),
            location: SupLocation::At(lo),
            expression,
        }
    };
    let mut best = start;
    if let Some(t) = expression.critical_point().filter(|&t| t > lo && t < hi) {
        best = best.better(SupWitness {
            value: expression.eval(t),
            location: SupLocation::At(t),
            expression,
        });
    }
    let end = if hi.is_infinite() {
        SupWitness {
            value: expression.limit_at_infinity(),
            location: SupLocation::Infinity,
            expression,
        }
    } else {
        SupWitness {
            value: expression.eval(hi),
            location: SupLocation::LeftLimit(hi),
            expression,
        }
    };
    best = best.better(end);
    if best.value == f64::INFINITY {
        return Err(Error::Unbounded);
    }
    Ok(best)
}

fn fold_sup(pieces: impl IntoIterator<Item = Result<SupWitness>>) -> Result<SupWitness> {
    let mut best = SupWitness {
        value: 0.0,
        location: SupLocation::Infinity,
        expression: PowerPair::new(0.0, 0.0, 0.0, 0.0),
    };
    for w in pieces {
        best = best.better(w?);
    }
    Ok(best)
}

/// `‖f‖*_{L(p,∞)} = sup_t f*(t) t^{1/p}` from a profile.
pub fn weak_star_sup(profile: &Profile, p: Exponent) -> Result<SupWitness> {
    let q = 1.0 / p.finite()?;
    let fstar = &profile.rearrangement;
    fold_sup((0..fstar.len()).map(|j| {
        maximize_power_pair(
            fstar.values()[j],
            q,
            0.0,
            0.0,
            fstar.left(j),
            fstar.right(j),
        )
    }))
}

/// `‖f‖_{L(p,∞)} = sup_t f**(t) t^{1/p}` from a profile.
pub fn weak_sup(profile: &Profile, p: Exponent) -> Result<SupWitness> {
    let q = 1.0 / p.finite()?;
    let fss = &profile.maximal;
    fold_sup(
        fss.coefficients()
            .iter()
            .enumerate()
            .map(|(j, &(a, v))| maximize_power_pair(a, q - 1.0, v, q, fss.left(j), fss.right(j))),
    )
}

/// `sup_t (f**(t) − f*(t)) t^{1/p}`; for `p = ∞` this is `‖f‖_{L(∞,∞)}`.
pub fn sharp_sup(profile: &Profile, p: Exponent) -> Result<SupWitness> {
    let q = p.reciprocal();
    let osc = profile.oscillation();
    fold_sup(
        osc.coefficients()
            .iter()
            .enumerate()
            .map(|(j, &(a, v))| maximize_power_pair(a, q - 1.0, v, q, osc.left(j), osc.right(j))),
    )
}

/// `sup_t T(t) / λ(t)^{1−1/p}` with `T(t) = ∫_t^∞ λ`; `p = ∞` gives exponent 1.
///
/// On each plateau of `λ` the denominator is fixed and `T` decreases
/// linearly, so the supremum sits at plateau left endpoints. Where `λ = 0`
/// the ratio is taken to be `0`.
pub fn double_sharp_sup(profile: &Profile, p: Exponent) -> Result<SupWitness> {
    let power = 1.0 - p.reciprocal();
    let lambda = &profile.distribution;
    fold_sup((0..lambda.len()).map(|i| {
        let (lo, height) = (lambda.left(i), lambda.values()[i]);
        let scale = height.powf(power);
        // T(t)/scale = (T(lo) + height·lo − height·t)/scale on this plateau
        let b0 = profile.tails[i] + height * lo;
        maximize_power_pair(b0 / scale, 0.0, -height / scale, 1.0, lo, lambda.right(i))
    }))
}

/// `sup_t (T(t) t^{p−1})^{1/p}` (witness carries the value before the
/// `1/p` root).
pub fn oneil_sup(profile: &Profile, p: Exponent) -> Result<SupWitness> {
    let p = p.finite()?;
    let lambda = &profile.distribution;
    fold_sup((0..lambda.len()).map(|i| {
        let (lo, height) = (lambda.left(i), lambda.values()[i]);
        let b0 = profile.tails[i] + height * lo;
        maximize_power_pair(b0, p - 1.0, -height, p, lo, lambda.right(i))
    }))
}

/// `‖f‖*_{L(p,∞)}`.
pub fn weak_star_norm<F: CellValues + ?Sized>(f: &F, p: Exponent) -> Result<f64> {
    Ok(weak_star_sup(&Profile::of(f), p)?.value)
}

/// `‖f‖_{L(p,∞)}`.
pub fn weak_norm<F: CellValues + ?Sized>(f: &F, p: Exponent) -> Result<f64> {
    Ok(weak_sup(&Profile::of(f), p)?.value)
}

/// `‖f‖^#_{L(p,∞)}`, or `‖f‖_{L(∞,∞)}` when `p = ∞`.
pub fn sharp_norm<F: CellValues + ?Sized>(f: &F, p: Exponent) -> Result<f64> {
    Ok(sharp_sup(&Profile::of(f), p)?.value)
}

/// `‖f‖^##_{L(p,∞)}`.
pub fn double_sharp<F: CellValues + ?Sized>(f: &F, p: Exponent) -> Result<f64> {
    Ok(double_sharp_sup(&Profile::of(f), p)?.value)
}

/// `‖·‖^##` of a bare distribution function.
pub fn double_sharp_of_distribution(lambda: &StepCurve, p: Exponent) -> Result<f64> {
    Ok(double_sharp_sup(&Profile::from_distribution(lambda.clone()), p)?.value)
}

/// `inf{C^{1/p} : ∫_t^∞ λ_f ≤ C t^{1−p}} = sup_t (T(t) t^{p−1})^{1/p}`.
pub fn oneil_functional<F: CellValues + ?Sized>(f: &F, p: Exponent) -> Result<f64> {
    let pf = p.finite()?;
    Ok(oneil_sup(&Profile::of(f), p)?.value.powf(1.0 / pf))
}

/// `sup_t ∫_t^∞ λ_f = T(0) = ‖f‖_{L¹}`.
pub fn l1_tail_sup<F: CellValues + ?Sized>(f: &F) -> f64 {
    Profile::of(f).l1()
}

/// Dyadic BMO norm: largest mean oscillation over all dyadic cubes.
pub fn bmo_dyadic(f: &StepFunction) -> f64 {
    enumerate_cubes(f.grid())
        .map(|q| mean_oscillation(f, &q).expect("enumerated cubes are valid"))
        .fold(0.0, f64::max)
}

/// All functionals of one function at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSummary {
    pub p: Exponent,
    pub p_conjugate: f64,
    pub l1: f64,
    pub l1_tail_sup: f64,
    pub sup_abs: f64,
    pub weak_star: Option<SupWitness>,
    pub weak: Option<SupWitness>,
    pub sharp: SupWitness,
    pub double_sharp: SupWitness,
    pub oneil: Option<f64>,
    pub bmo_dyadic: f64,
}

pub fn summarize(f: &StepFunction, p: Exponent) -> Result<NormSummary> {
    let profile = Profile::of(f);
    let finite = !p.is_infinite();
    Ok(NormSummary {
        p,
        p_conjugate: p.conjugate(),
        l1: f.l1_norm(),
        l1_tail_sup: profile.l1(),
        sup_abs: f.sup_abs(),
        weak_star: finite.then(|| weak_star_sup(&profile, p)).transpose()?,
        weak: finite.then(|| weak_sup(&profile, p)).transpose()?,
        sharp: sharp_sup(&profile, p)?,
        double_sharp: double_sharp_sup(&profile, p)?,
        oneil: finite
            .then(|| oneil_sup(&profile, p).map(|w| w.value.powf(p.reciprocal())))
            .transpose()?,
        bmo_dyadic: bmo_dyadic(f),
    })
}
