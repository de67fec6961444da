//! The symbol `Lambda_m^gamma(s) = |sum_j a_j beta_j^{-(1/2 + gamma - i s)}|`
//! and its infimum over frequencies.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::StepPartition;
use crate::math::{cos, fabs, hypot, log, pow, sin, PI};

/// Default number of frequency samples for [`c_gamma`].
pub const DEFAULT_SAMPLES: usize = 100_000;

/// `Lambda_m^gamma(s)`.
pub fn lambda_gamma(s: f64, gamma: f64, part: &StepPartition) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, b) in part.weights().iter().zip(part.betas()) {
        let amp = a * pow(*b, -(0.5 + gamma));
        let phase = s * log(*b);
        re += amp * cos(phase);
        im += amp * sin(phase);
    }
    hypot(re, im)
}

/// `a_m beta_m^{-gamma-1/2} - sum_{j<m} a_j beta_j^{-(gamma+1/2)}`, a lower
/// bound of `Lambda_m^gamma(s)` valid for every `s`.
pub fn lambda_lower_bound(gamma: f64, part: &StepPartition) -> f64 {
    let m = part.m();
    let e = -(gamma + 0.5);
    let a = part.weights();
    let b = part.betas();
    let mut v = a[m - 1] * pow(b[m - 1], e);
    for j in 0..m - 1 {
        v -= a[j] * pow(b[j], e);
    }
    v
}

/// `beta_m^{-gamma-1/2} (a_m - (beta_{m-1}/beta_m)^{-(gamma+1/2)})`, the
/// closed-form lower bound on `C_gamma`; positive once `gamma` exceeds
/// [`gamma0_bound`]. For `m = 1` this is `a_1 beta_1^{-gamma-1/2}`.
pub fn analytic_c_gamma_bound(gamma: f64, part: &StepPartition) -> f64 {
    let m = part.m();
    let a = part.weights();
    let b = part.betas();
    let e = -(gamma + 0.5);
    if m == 1 {
        return a[0] * pow(b[0], e);
    }
    pow(b[m - 1], e) * (a[m - 1] - pow(b[m - 2] / b[m - 1], e))
}

/// `ln(a_m) / ln(beta_m / beta_{m-1}) - 1/2`, a sufficient threshold for
/// `C_gamma > 0`. Returns negative infinity for `m = 1`, where `C_gamma > 0`
/// for every `gamma`.
pub fn gamma0_bound(part: &StepPartition) -> f64 {
    let m = part.m();
    if m == 1 {
        return f64::NEG_INFINITY;
    }
    let a = part.weights();
    let b = part.betas();
    log(a[m - 1]) / log(b[m - 1] / b[m - 2]) - 0.5
}

/// Default frequency window `40 pi / |ln(beta_m / beta_1)|`.
pub fn default_s_max(part: &StepPartition) -> f64 {
    let b = part.betas();
    let spread = fabs(log(b[b.len() - 1] / b[0]));
    if spread == 0.0 {
        40.0 * PI
    } else {
        40.0 * PI / spread
    }
}

/// Result of the grid search for `C_gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct CGamma {
    pub gamma: f64,
    /// Grid infimum of `Lambda_m^gamma` over `[0, s_max]`.
    pub value: f64,
    /// Frequency where the grid infimum was found.
    pub argmin: f64,
    pub s_max: f64,
    pub spacing: f64,
    /// Analytic lower bound, attached when `gamma > gamma0_bound`.
    pub certificate: Option<f64>,
}

/// Grid infimum of `Lambda_m^gamma` on `n_samples` equally spaced
/// frequencies in `[0, s_max]`. `Lambda` is even in `s`, so the negative
/// half-line adds nothing. Ties keep the smallest index.
pub fn c_gamma(gamma: f64, part: &StepPartition, s_max: f64, n_samples: usize) -> Result<CGamma> {
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::Domain {
            name: "s_max",
            value: s_max,
        });
    }
    if n_samples < 1000 {
        return Err(Error::InvalidArgument {
            name: "n_samples",
            reason: "at least 1000 samples are required",
        });
    }
    let spacing = s_max / (n_samples - 1) as f64;
    let mut best = f64::INFINITY;
    let mut argmin = 0.0;
    for i in 0..n_samples {
        let s = i as f64 * spacing;
        let v = lambda_gamma(s, gamma, part);
        if v < best {
            best = v;
            argmin = s;
        }
    }
    let certificate = if gamma > gamma0_bound(part) {
        Some(analytic_c_gamma_bound(gamma, part))
    } else {
        None
    };
    Ok(CGamma {
        gamma,
        value: best,
        argmin,
        s_max,
        spacing,
        certificate,
    })
}

/// `Lambda_m^gamma` sampled on `n` equally spaced frequencies in `[0, s_max]`.
pub fn lambda_profile(gamma: f64, part: &StepPartition, s_max: f64, n: usize) -> Vec<(f64, f64)> {
    let spacing = if n > 1 { s_max / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .map(|i| {
            let s = i as f64 * spacing;
            (s, lambda_gamma(s, gamma, part))
        })
        .collect()
}
