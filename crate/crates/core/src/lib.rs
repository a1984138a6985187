//! Rearrangement-invariant functionals, dyadic packing optimizers and
//! Whitney-type coverings for step functions on dyadic grids.
//!
//! Every quantity is computed exactly from the finitely many values of a
//! step function: distribution functions and rearrangements are step
//! curves, maximal functions are piecewise hyperbolas, suprema over `t` are
//! solved piece by piece in closed form, and suprema over packings are
//! solved by dynamic programming over the dyadic cube tree.

pub mod covering;
pub mod dyadic;
pub mod error;
pub mod functionals;
pub mod generators;
pub mod io;
pub mod numeric;
pub mod packing;
pub mod rearrangement;
pub mod suite;
pub mod tensor;

pub use covering::{dyadic_cover, verify_cover, CoverCheck, CoverReport};
pub use dyadic::{
    cube_mean, enumerate_cubes, make_step_function, CellSet, CellValues, DyadicCube, Grid, Packing,
    StepFunction,
};
pub use error::{Error, Result};
pub use functionals::{
    bmo_dyadic, double_sharp, l1_tail_sup, maximize_power_pair, oneil_functional, sharp_norm,
    weak_norm, weak_star_norm, Exponent, SupLocation, SupWitness,
};
pub use generators::{gen_log, gen_power, gen_random, Law};
pub use packing::{
    double_oscillation, enumerate_packings, garo_norm_dyadic, jn_norm_dyadic, mean_oscillation,
    OptimalPacking, PackingObjective,
};
pub use rearrangement::{
    distribution, maximal, oscillation_at, rearrange, tail_integral, HyperbolaCurve, Profile,
    StepCurve,
};
pub use suite::{
    run_suite, CheckId, CheckRecord, Relation, Report, SuiteConfig, SuiteConstants, Summary,
};
pub use tensor::{tensor_brute, tensor_distribution, tensor_infinity_check, ValueMassList};
