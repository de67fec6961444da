//! Thin re-export of the `libm` routines used throughout the crate, so the
//! same code paths run with or without `std` in the crate graph.

pub(crate) use libm::{ceil, cos, exp, fabs, hypot, log, pow, round, sin, sqrt, tanh};

pub(crate) const FRAC_2_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;
pub(crate) const PI: f64 = core::f64::consts::PI;
