//! Numerical verifiers for the stability and continuity estimates of
//! `Phi_m` and `I_m`.
//!
//! Each verifier evaluates both sides of an inequality and reports the
//! margin `rhs - lhs`. A margin of at least `-MARGIN_REL_TOL * rhs` passes;
//! the slack absorbs quadrature error.

use alloc::vec::Vec;

use super::norms::{weighted_h1, weighted_h_minus1, weighted_l2, NormFamily, PiecewiseLinear};
use super::stability::{gamma0_bound, CGamma};
use crate::error::{Error, Result};
use crate::forward::{i_m_derivative, i_m_formula, Density};
use crate::kernel::{PhysicalParams, StepPartition};
use crate::math::{fabs, pow, sqrt, tanh};

/// Relative slack allowed on the right-hand side of a checked inequality.
pub const MARGIN_REL_TOL: f64 = 1e-9;

/// Both sides of one inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
}

impl Margin {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self) -> bool {
        self.margin() >= -MARGIN_REL_TOL * self.rhs
    }
}

/// `Phi_m[phi](tau) - Phi_m[phi](L_m) = sum_j a_j (phi(min(L, beta_j tau)) - phi(L))`
/// on `[0, L_m]`, exact for piecewise-linear `phi` on `[0, L]`.
pub fn offset_dilation_sum(phi: &PiecewiseLinear, part: &StepPartition) -> Result<PiecewiseLinear> {
    let l = part.length();
    if phi.start() != 0.0 || fabs(phi.end() - l) > 1e-12 * l {
        return Err(Error::InvalidArgument {
            name: "phi",
            reason: "phi must be tabulated on [0, L]",
        });
    }
    let l_m = part.l_m();
    let phi_l = phi.left_limit(l);
    let mut knots: Vec<f64> = Vec::with_capacity(phi.xs().len() * part.m() + 2);
    knots.push(0.0);
    for b in part.betas() {
        knots.extend(phi.xs().iter().map(|x| (x / b).min(l_m)));
    }
    knots.push(l_m);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let values = knots
        .iter()
        .map(|&tau| {
            part.weights()
                .iter()
                .zip(part.betas())
                .map(|(a, b)| {
                    let x = b * tau;
                    if x >= l {
                        0.0
                    } else {
                        a * (phi.eval(x) - phi_l)
                    }
                })
                .sum()
        })
        .collect();
    PiecewiseLinear::new(knots, values)
}

/// Checks `C_gamma ||phi - phi(L)||_{0,gamma,L} <= ||Phi_m[phi] - Phi_m[phi](L_m)||_{0,gamma,L_m}`.
///
/// `breaks` lists the points of `[0, L]` where `phi` is not smooth. Requires
/// `gamma > gamma0_bound`.
pub fn verify_stability_l2(
    phi: impl Fn(f64) -> f64,
    breaks: &[f64],
    c: &CGamma,
    part: &StepPartition,
    rel_tol: f64,
) -> Result<Margin> {
    if !(c.gamma > gamma0_bound(part)) {
        return Err(Error::InvalidArgument {
            name: "gamma",
            reason: "gamma must exceed the sufficient threshold",
        });
    }
    let l = part.length();
    let l_m = part.l_m();
    let phi_l = phi(l);
    let lhs = weighted_l2(|x| phi(x) - phi_l, c.gamma, l, breaks, rel_tol)?;

    let mut tau_breaks: Vec<f64> = part.horizons().to_vec();
    for b in part.betas() {
        tau_breaks.extend(breaks.iter().map(|x| x / b));
    }
    let g = |tau: f64| -> f64 {
        part.weights()
            .iter()
            .zip(part.betas())
            .map(|(a, b)| {
                let x = b * tau;
                if x >= l {
                    0.0
                } else {
                    a * (phi(x) - phi_l)
                }
            })
            .sum()
    };
    let rhs = weighted_l2(g, c.gamma, l_m, &tau_breaks, rel_tol)?;
    Ok(Margin { lhs: c.value * lhs, rhs })
}

/// `sum_j a_j beta_j^{-1/p}`, the contraction constant in
/// `||Phi_m[f]||_{L^p(0,L_m)} <= C ||f||_{L^p(0,L)}` for `f(L) = 0`.
pub fn lp_contraction_constant(p: f64, part: &StepPartition) -> f64 {
    part.weights()
        .iter()
        .zip(part.betas())
        .map(|(a, b)| a * pow(*b, -1.0 / p))
        .sum()
}

/// `sqrt(c1^2 + beta_1)` with `c1 = ((1 + ||T_L||^2 L) / beta_m)^{1/2}`, the
/// constant in `||Phi_m[phi]||_{H^1(0,L_m)} <= C ||phi||_{H^1(0,L)}`. The
/// trace norm is the sharp value `||T_L||^2 = coth L`.
pub fn h1_continuity_constant(part: &StepPartition) -> f64 {
    let l = part.length();
    let b = part.betas();
    let trace_sq = 1.0 / tanh(l);
    let c1_sq = (1.0 + trace_sq * l) / b[b.len() - 1];
    sqrt(c1_sq + b[0])
}

/// `||Phi_m[f]||_{L^p(0,L_m)}` against `C ||f||_{L^p(0,L)}` for
/// piecewise-linear `f` with `f(L) = 0`.
pub fn verify_lp_contraction(f: &PiecewiseLinear, p: f64, part: &StepPartition) -> Result<Margin> {
    let l = part.length();
    if fabs(f.left_limit(l)) > 0.0 {
        return Err(Error::InvalidArgument {
            name: "f",
            reason: "f must vanish at L",
        });
    }
    let image = offset_dilation_sum(f, part)?;
    Ok(Margin {
        lhs: image.lp_norm(p),
        rhs: lp_contraction_constant(p, part) * f.lp_norm(p),
    })
}

/// `||Phi_m[phi]||_{H^1(0,L_m)}` against `C ||phi||_{H^1(0,L)}`, given
/// `phi` and `phi'` and the points of `[0, L]` where they are not smooth.
pub fn verify_h1_continuity(
    phi: impl Fn(f64) -> f64,
    dphi: impl Fn(f64) -> f64,
    breaks: &[f64],
    part: &StepPartition,
    rel_tol: f64,
) -> Result<Margin> {
    let l = part.length();
    let phi_l = phi(l);
    let image = |t: f64| -> f64 {
        part.weights()
            .iter()
            .zip(part.betas())
            .map(|(a, b)| a * if b * t >= l { phi_l } else { phi(b * t) })
            .sum()
    };
    let d_image = |t: f64| -> f64 {
        part.weights()
            .iter()
            .zip(part.betas())
            .map(|(a, b)| if b * t >= l { 0.0 } else { a * b * dphi(b * t) })
            .sum()
    };
    let mut t_breaks: Vec<f64> = part.horizons().to_vec();
    for b in part.betas() {
        t_breaks.extend(breaks.iter().map(|x| x / b));
    }
    let lhs = weighted_h1(image, d_image, 0.0, part.l_m(), &t_breaks, rel_tol)?;
    let norm = weighted_h1(&phi, &dphi, 0.0, l, breaks, rel_tol)?;
    Ok(Margin {
        lhs,
        rhs: h1_continuity_constant(part) * norm,
    })
}

/// One level of the level-wise stability bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMargin {
    pub level: usize,
    pub family: NormFamily,
    pub margin: Margin,
}

/// Checks, for levels `k = 0..=k_max` on a geometric partition,
/// `||phi - phi(L)||_{[beta^{k+1} L, beta^k L)} <= C(beta0) C(beta^m) / a_m^{k+1}
///  ||Phi_m[phi] - Phi_m[phi](L_m)||_{[beta^{k+1} L_m, L_m)}`.
pub fn verify_level_bounds(
    phi: &PiecewiseLinear,
    family: NormFamily,
    part: &StepPartition,
    k_max: usize,
) -> Result<Vec<LevelMargin>> {
    let spec = part.geometric().ok_or(Error::InvalidArgument {
        name: "part",
        reason: "the level-wise bound needs a geometric partition",
    })?;
    let beta = spec.beta();
    let m = part.m();
    let l = part.length();
    let l_m = part.l_m();
    let a_m = part.weights()[m - 1];
    let phi_l = phi.left_limit(l);
    let shifted = PiecewiseLinear::new(phi.xs().to_vec(), phi.ys().iter().map(|y| y - phi_l).collect())?;
    let g = offset_dilation_sum(phi, part)?;
    let factor = family.scaling_constant(spec.beta0()) * family.scaling_constant(pow(beta, m as f64));

    (0..=k_max)
        .map(|k| {
            let lo = pow(beta, (k + 1) as f64);
            let hi = pow(beta, k as f64);
            let lhs = family.norm(&shifted, lo * l, hi * l)?;
            let rhs = factor / pow(a_m, (k + 1) as f64) * family.norm(&g, lo * l_m, l_m)?;
            Ok(LevelMargin {
                level: k,
                family,
                margin: Margin { lhs, rhs },
            })
        })
        .collect()
}

/// Accuracy settings for [`operator_norms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNormOptions {
    /// Relative tolerance of the outer quadratures.
    pub rel_tol: f64,
    /// Absolute tolerance of each evaluation of `I_m`.
    pub current_tol: f64,
    /// Grid intervals of the discrete dual problem.
    pub dual_intervals: usize,
}

impl Default for OperatorNormOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            current_tol: 1e-12,
            dual_intervals: 2000,
        }
    }
}

impl OperatorNormOptions {
    /// Tolerances tightened a hundredfold and the dual grid refined fourfold.
    pub fn refined(&self) -> Self {
        Self {
            rel_tol: self.rel_tol * 1e-2,
            current_tol: self.current_tol * 1e-2,
            dual_intervals: self.dual_intervals * 4,
        }
    }
}

/// The weighted norms appearing in the continuity and stability estimates
/// of `I_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNorms {
    pub gamma: f64,
    /// `||rho||_{L^2(0,L)}`.
    pub rho_l2: f64,
    /// `||I_m[rho]||_{1,gamma,L_m^2}`.
    pub current_h1: f64,
    /// `||rho||_{-1,gamma+1,L}`.
    pub rho_h_minus1: f64,
    /// `||I_m[rho]||_{1,gamma/2-1/4,L_m^2}`.
    pub current_h1_half: f64,
}

impl OperatorNorms {
    /// `||I_m[rho]||_{1,gamma,L_m^2} / ||rho||_{L^2}`, bounded by the
    /// continuity constant.
    pub fn continuity_ratio(&self) -> Option<f64> {
        ratio(self.current_h1, self.rho_l2)
    }

    /// `||rho||_{-1,gamma+1,L} / ||I_m[rho]||_{1,gamma/2-1/4,L_m^2}`, bounded
    /// by the stability constant.
    pub fn stability_ratio(&self) -> Option<f64> {
        ratio(self.rho_h_minus1, self.current_h1_half)
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

/// Evaluates the four weighted norms for `gamma >= 3/4`.
pub fn operator_norms<D: Density + ?Sized>(
    rho: &D,
    gamma: f64,
    part: &StepPartition,
    pp: &PhysicalParams,
    opts: OperatorNormOptions,
) -> Result<OperatorNorms> {
    if !(gamma >= 0.75 && gamma.is_finite()) {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
        });
    }
    let l = pp.length();
    let t_end = part.l_m() * part.l_m();

    let rho_l2 = weighted_l2(|x| rho.eval(x), 0.0, l, rho.breakpoints(), opts.rel_tol)?;
    let rho_h_minus1 = weighted_h_minus1(|x| rho.eval(x), gamma + 1.0, l, opts.dual_intervals)?;

    // I_m is smooth between the times where a front reaches L or crosses a
    // breakpoint of rho.
    let mut t_breaks: Vec<f64> = part.horizons().iter().map(|h| h * h).collect();
    for b in part.betas() {
        t_breaks.extend(rho.breakpoints().iter().map(|x| (x / b) * (x / b)));
    }

    let failure = core::cell::Cell::new(None);
    let current = |t: f64| match i_m_formula(rho, t, part, pp, opts.current_tol) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let derivative = |t: f64| match i_m_derivative(rho, t, part, pp) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let current_h1 = weighted_h1(current, derivative, gamma, t_end, &t_breaks, opts.rel_tol)?;
    let current_h1_half = weighted_h1(current, derivative, 0.5 * gamma - 0.25, t_end, &t_breaks, opts.rel_tol)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(OperatorNorms {
        gamma,
        rho_l2,
        current_h1,
        rho_h_minus1,
        current_h1_half,
    })
}

/// Norms at two accuracy levels and the relative change of each ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorStability {
    pub coarse: OperatorNorms,
    pub fine: OperatorNorms,
    /// Whether `gamma` exceeds the sufficient threshold, so the stability
    /// estimate applies.
    pub stability_applies: bool,
}

impl OperatorStability {
    pub fn continuity_change(&self) -> Option<f64> {
        relative_change(self.coarse.continuity_ratio(), self.fine.continuity_ratio())
    }

    pub fn stability_change(&self) -> Option<f64> {
        relative_change(self.coarse.stability_ratio(), self.fine.stability_ratio())
    }

    /// Both ratios finite and stable to `tol` under refinement. A vanishing
    /// density has no ratios and counts as stable.
    pub fn is_stable(&self, tol: f64) -> bool {
        let ok = |c: Option<f64>| c.is_none_or(|v| v.is_finite() && v <= tol);
        ok(self.continuity_change()) && ok(self.stability_change())
    }
}

fn relative_change(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(fabs(a - b) / fabs(b).max(f64::MIN_POSITIVE)),
        _ => None,
    }
}

/// Runs [`operator_norms`] at `opts` and at `opts.refined()`.
pub fn verify_operator_stability<D: Density + ?Sized>(
    rho: &D,
    gamma: f64,
    part: &StepPartition,
    pp: &PhysicalParams,
    opts: OperatorNormOptions,
) -> Result<OperatorStability> {
    let coarse = operator_norms(rho, gamma, part, pp, opts)?;
    let fine = operator_norms(rho, gamma, part, pp, opts.refined())?;
    Ok(OperatorStability {
        coarse,
        fine,
        stability_applies: gamma > gamma0_bound(part),
    })
}
