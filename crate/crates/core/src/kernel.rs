//! Step and polynomial approximations of the activation kernel.
//!
//! The exact kernel is `F(c(t, x))`, Hill's function applied to the cAMP
//! concentration along the cilium. Two approximations are provided: the step
//! kernel `K_m = F_m(w)` built on a partition of `[0, c0]`, and the
//! polynomial kernel `PK_m = P_m(c - c0)` built on the Taylor expansion of
//! `F` at `c0`.

use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::math::{exp, fabs, sin, sqrt, PI};
use crate::special::{erfc_inv, erfc_value, hill_taylor, horner, HillParams};

/// Physical constants of the model. All strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    d: f64,
    l: f64,
    c0: f64,
    j0: f64,
    hill: HillParams,
}

impl PhysicalParams {
    pub fn new(d: f64, l: f64, c0: f64, j0: f64, hill: HillParams) -> Result<Self> {
        for (name, v) in [("D", d), ("L", l), ("c0", c0), ("J0", j0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain { name, value: v });
            }
        }
        Ok(Self { d, l, c0, j0, hill })
    }

    /// Same parameters with a different cilium length.
    pub fn with_length(self, l: f64) -> Result<Self> {
        Self::new(self.d, l, self.c0, self.j0, self.hill)
    }

    pub fn diffusivity(&self) -> f64 {
        self.d
    }

    pub fn length(&self) -> f64 {
        self.l
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn hill(&self) -> &HillParams {
        &self.hill
    }

    /// F(c0).
    pub fn f_c0(&self) -> f64 {
        self.hill.value(self.c0)
    }
}

impl Default for PhysicalParams {
    /// Dimensionless defaults: D = L = c0 = J0 = 1, n = 2, K = 0.5.
    fn default() -> Self {
        Self {
            d: 1.0,
            l: 1.0,
            c0: 1.0,
            j0: 1.0,
            hill: HillParams::default(),
        }
    }
}

/// Parameters `(beta, beta0, m)` of the geometric threshold mesh
/// `alpha_j = c0 erfc(beta0 beta^j / (2 sqrt(D)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricMeshSpec {
    beta: f64,
    beta0: f64,
    m: usize,
}

impl GeometricMeshSpec {
    pub fn new(beta: f64, beta0: f64, m: usize) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Domain { name: "beta", value: beta });
        }
        if !(beta0.is_finite() && beta0 > 0.0) {
            return Err(Error::Domain {
                name: "beta0",
                value: beta0,
            });
        }
        if m == 0 {
            return Err(Error::InvalidArgument {
                name: "m",
                reason: "at least one threshold is required",
            });
        }
        Ok(Self { beta, beta0, m })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

impl Default for GeometricMeshSpec {
    /// beta = 0.8, beta0 = 1, m = 8.
    fn default() -> Self {
        Self {
            beta: 0.8,
            beta0: 1.0,
            m: 8,
        }
    }
}

/// A partition `0 < alpha_1 < ... < alpha_m < c0` together with its weights,
/// front speeds and horizon times. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPartition {
    alphas: Vec<f64>,
    a: Vec<f64>,
    betas: Vec<f64>,
    horizons: Vec<f64>,
    length: f64,
    f_c0: f64,
    geometric: Option<GeometricMeshSpec>,
}

impl StepPartition {
    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Weights `a_1..a_m`; positive and summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.a
    }

    /// Front speeds `beta_1 > ... > beta_m`.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Horizon times `L_0 = 0 < L_1 < ... < L_m`, with `L_k = L / beta_k`.
    pub fn horizons(&self) -> &[f64] {
        &self.horizons
    }

    /// `L_m`, the square root of the time after which the current is constant.
    pub fn l_m(&self) -> f64 {
        self.horizons[self.horizons.len() - 1]
    }

    /// Cilium length the horizons were computed for.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// F(c0) for the Hill parameters the weights were computed with.
    pub fn f_c0(&self) -> f64 {
        self.f_c0
    }

    /// The mesh specification, when the partition was built geometrically.
    pub fn geometric(&self) -> Option<&GeometricMeshSpec> {
        self.geometric.as_ref()
    }

    /// `F_m(x) = F(c0) * sum_{alpha_j <= x} a_j`.
    pub fn step_f(&self, x: f64) -> f64 {
        let mut s = 0.0;
        for (alpha, a) in self.alphas.iter().zip(&self.a) {
            if x >= *alpha {
                s += a;
            }
        }
        self.f_c0 * s
    }

    /// `K_m(t, x) = F(c0) * sum_{x <= beta_j sqrt(t)} a_j`.
    ///
    /// Written with the comparison on `x` rather than through `w`, so jump
    /// locations are exactly `beta_j sqrt(t)`.
    pub fn kernel(&self, t: f64, x: f64) -> f64 {
        let st = sqrt(t);
        let mut s = 0.0;
        for (beta, a) in self.betas.iter().zip(&self.a) {
            if x <= beta * st {
                s += a;
            }
        }
        self.f_c0 * s
    }
}

/// Builds the partition for the given thresholds using the midpoint recipe
/// `F_j = F((alpha_j + alpha_{j+1}) / 2)`, `F_m = F(c0)`,
/// `a_j = (F_j - F_{j-1}) / F(c0)`.
pub fn partition_from_alphas(alphas: &[f64], pp: &PhysicalParams) -> Result<StepPartition> {
    build_partition(alphas, pp, None)
}

fn build_partition(
    alphas: &[f64],
    pp: &PhysicalParams,
    geometric: Option<GeometricMeshSpec>,
) -> Result<StepPartition> {
    let m = alphas.len();
    if m == 0 {
        return Err(Error::InvalidArgument {
            name: "alphas",
            reason: "at least one threshold is required",
        });
    }
    let c0 = pp.c0();
    for (i, &alpha) in alphas.iter().enumerate() {
        ensure_finite("alpha", alpha)?;
        if alpha <= 0.0 || alpha >= c0 {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
            });
        }
        if i > 0 && alpha <= alphas[i - 1] {
            return Err(Error::InvalidArgument {
                name: "alphas",
                reason: "thresholds must be strictly ascending",
            });
        }
    }

    let f_c0 = pp.f_c0();
    let mut a = Vec::with_capacity(m);
    let mut prev = 0.0;
    for j in 0..m {
        let fj = if j + 1 < m {
            pp.hill.value(0.5 * (alphas[j] + alphas[j + 1]))
        } else {
            f_c0
        };
        let w = (fj - prev) / f_c0;
        if !(w > 0.0) {
            return Err(Error::InvalidArgument {
                name: "alphas",
                reason: "thresholds too close to separate Hill values",
            });
        }
        a.push(w);
        prev = fj;
    }

    let two_sqrt_d = 2.0 * sqrt(pp.d);
    let mut betas = Vec::with_capacity(m);
    for &alpha in alphas {
        betas.push(two_sqrt_d * erfc_inv(alpha / c0)?);
    }

    if let Some(spec) = geometric {
        // The erfc round trip must land on beta0 beta^j; snap to the exact
        // values once that is confirmed.
        let tol = 1e-12 * spec.beta0.max(1.0);
        let mut exact = spec.beta0;
        for b in betas.iter_mut() {
            exact *= spec.beta;
            if fabs(*b - exact) > tol {
                return Err(Error::Mesh("erfc round trip missed beta0 * beta^j"));
            }
            *b = exact;
        }
    }

    for j in 1..m {
        if !(betas[j] < betas[j - 1]) {
            return Err(Error::InvalidArgument {
                name: "alphas",
                reason: "front speeds are not strictly decreasing",
            });
        }
    }

    let mut horizons = Vec::with_capacity(m + 1);
    horizons.push(0.0);
    horizons.extend(betas.iter().map(|b| pp.l / b));

    Ok(StepPartition {
        alphas: alphas.to_vec(),
        a,
        betas,
        horizons,
        length: pp.l,
        f_c0,
        geometric,
    })
}

/// Partition with thresholds `alpha_j = c0 erfc(beta0 beta^j / (2 sqrt(D)))`,
/// so that `beta_j = beta0 beta^j`.
pub fn geometric_partition(spec: &GeometricMeshSpec, pp: &PhysicalParams) -> Result<StepPartition> {
    let two_sqrt_d = 2.0 * sqrt(pp.d);
    let mut alphas = Vec::with_capacity(spec.m);
    let mut b = spec.beta0;
    for _ in 0..spec.m {
        b *= spec.beta;
        alphas.push(pp.c0 * erfc_value(b / two_sqrt_d));
    }
    // alphas come out ascending because beta^j decreases.
    build_partition(&alphas, pp, Some(*spec))
}

/// Half-space concentration `w(t, x) = c0 erfc(x / (2 sqrt(D t)))`.
pub fn w(t: f64, x: f64, pp: &PhysicalParams) -> Result<f64> {
    ensure_finite("t", t)?;
    if t <= 0.0 {
        return Err(Error::Domain { name: "t", value: t });
    }
    check_position(x, pp)?;
    Ok(w_value(t, x, pp))
}

pub(crate) fn w_value(t: f64, x: f64, pp: &PhysicalParams) -> f64 {
    pp.c0 * erfc_value(x / (2.0 * sqrt(pp.d * t)))
}

fn check_position(x: f64, pp: &PhysicalParams) -> Result<()> {
    ensure_finite("x", x)?;
    if x < 0.0 || x > pp.l {
        return Err(Error::Domain { name: "x", value: x });
    }
    Ok(())
}

/// Step approximation of Hill's function on the partition.
pub fn step_f_m(x: f64, part: &StepPartition) -> f64 {
    part.step_f(x)
}

/// Step kernel `K_m(t, x) = F_m(w(t, x))`.
pub fn kernel_k_m(t: f64, x: f64, part: &StepPartition, pp: &PhysicalParams) -> Result<f64> {
    ensure_finite("t", t)?;
    if t <= 0.0 {
        return Err(Error::Domain { name: "t", value: t });
    }
    check_position(x, pp)?;
    Ok(part.kernel(t, x))
}

/// Hard cap on the number of eigenfunction terms.
pub const SERIES_MAX_TERMS: usize = 10_000;

/// Below this value of `D t / L^2` the eigenfunction series converges slowly
/// and `w` is accurate; callers that do not care which is used should
/// switch to `w` there.
pub const SHORT_TIME_THRESHOLD: f64 = 0.01;

/// Eigenvalue `mu_k = (2k + 1) pi / (2L)`.
pub fn mu(k: usize, l: f64) -> f64 {
    (2 * k + 1) as f64 * PI / (2.0 * l)
}

/// Eigenfunction expansion of the concentration with `c(t, 0) = c0`,
/// `c_x(t, L) = 0`, `c(0, x) = 0`:
///
/// `c = c0 - c0 (2/L) sum_k exp(-mu_k^2 D t) sin(mu_k x) / mu_k`.
///
/// Terms are added in ascending order until the geometric tail bound drops
/// below `tol`.
pub fn concentration_series(t: f64, x: f64, pp: &PhysicalParams, tol: f64) -> Result<f64> {
    concentration_series_capped(t, x, pp, tol, SERIES_MAX_TERMS)
}

pub(crate) fn concentration_series_capped(
    t: f64,
    x: f64,
    pp: &PhysicalParams,
    tol: f64,
    max_terms: usize,
) -> Result<f64> {
    ensure_finite("t", t)?;
    check_position(x, pp)?;
    if t < 0.0 {
        return Err(Error::Domain { name: "t", value: t });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain { name: "tol", value: tol });
    }
    if x == 0.0 {
        return Ok(pp.c0);
    }
    let dt = pp.d * t;
    let amp = pp.c0 * 2.0 / pp.l;
    let mut sum = 0.0;
    for k in 0..max_terms {
        let mk = mu(k, pp.l);
        sum += exp(-mk * mk * dt) * sin(mk * x) / mk;

        let m1 = mu(k + 1, pp.l);
        let m2 = mu(k + 2, pp.l);
        let next = amp * exp(-m1 * m1 * dt) / m1;
        let ratio = exp(-(m2 * m2 - m1 * m1) * dt);
        if ratio < 1.0 && next / (1.0 - ratio) < tol {
            let c = pp.c0 - amp * sum;
            return Ok(c.clamp(0.0, pp.c0));
        }
    }
    Err(Error::Series {
        terms: max_terms,
        tol,
    })
}

/// Concentration by the series, or by `w` in the short-time regime
/// `D t / L^2 < 0.01`.
pub fn concentration(t: f64, x: f64, pp: &PhysicalParams, tol: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    if t > 0.0 && pp.d * t / (pp.l * pp.l) < SHORT_TIME_THRESHOLD {
        check_position(x, pp)?;
        return Ok(w_value(t, x, pp));
    }
    if t == 0.0 {
        check_position(x, pp)?;
        return Ok(if x == 0.0 { pp.c0 } else { 0.0 });
    }
    concentration_series(t, x, pp, tol)
}

/// Taylor polynomial `P_m` of Hill's function at `c0`, with the series
/// truncation used to evaluate `c(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialKernel {
    coeffs: Vec<f64>,
    c0: f64,
    max_terms: usize,
    tail_tol: f64,
}

impl PolynomialKernel {
    /// Degree-`m` kernel for the given parameters; `m <= 8`.
    pub fn new(m: usize, pp: &PhysicalParams) -> Result<Self> {
        Ok(Self {
            coeffs: hill_taylor(pp.c0, m, &pp.hill)?,
            c0: pp.c0,
            max_terms: SERIES_MAX_TERMS,
            tail_tol: 1e-13 * pp.c0,
        })
    }

    pub fn with_truncation(mut self, max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidArgument {
                name: "max_terms",
                reason: "must be positive",
            });
        }
        if !(tail_tol > 0.0 && tail_tol.is_finite()) {
            return Err(Error::Domain {
                name: "tail_tol",
                value: tail_tol,
            });
        }
        self.max_terms = max_terms;
        self.tail_tol = tail_tol;
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// `P_m(c - c0)`.
    pub fn eval_at_concentration(&self, c: f64) -> f64 {
        horner(&self.coeffs, c - self.c0)
    }
}

/// Polynomial kernel `PK_m(t, x) = P_m(c(t, x) - c0)`.
pub fn kernel_pk_m(t: f64, x: f64, pk: &PolynomialKernel, pp: &PhysicalParams) -> Result<f64> {
    if t == 0.0 {
        check_position(x, pp)?;
        let c = if x == 0.0 { pp.c0 } else { 0.0 };
        return Ok(pk.eval_at_concentration(c));
    }
    let c = concentration_series_capped(t, x, pp, pk.tail_tol, pk.max_terms)?;
    Ok(pk.eval_at_concentration(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn params_validate() {
        let h = HillParams::default();
        assert!(PhysicalParams::new(1.0, 1.0, 1.0, 1.0, h).is_ok());
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 1.0, h).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0, 1.0, h).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::NAN, 1.0, h).is_err());
        assert!(GeometricMeshSpec::new(1.0, 1.0, 3).is_err());
        assert!(GeometricMeshSpec::new(0.5, 0.0, 3).is_err());
        assert!(GeometricMeshSpec::new(0.5, 1.0, 0).is_err());
    }

    #[test]
    fn single_threshold_has_unit_weight() {
        let part = partition_from_alphas(&[0.37], &pp()).unwrap();
        assert_eq!(part.weights(), &[1.0]);
        assert_eq!(part.horizons().len(), 2);
    }

    #[test]
    fn two_threshold_weights() {
        let p = pp();
        let part = partition_from_alphas(&[0.2, 0.6], &p).unwrap();
        let f1 = 0.16 / (0.16 + 0.25);
        assert!((f1 - 0.390_243_902_439_024_4_f64).abs() < 1e-15);
        let a1 = f1 / 0.8;
        assert!((part.weights()[0] - a1).abs() < 1e-15);
        assert!((part.weights()[1] - (1.0 - a1)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_alphas() {
        let p = pp();
        assert!(partition_from_alphas(&[], &p).is_err());
        assert!(partition_from_alphas(&[0.5, 0.4], &p).is_err());
        assert!(partition_from_alphas(&[0.5, 0.5], &p).is_err());
        assert!(partition_from_alphas(&[0.5, 1.0], &p).is_err());
        assert!(partition_from_alphas(&[0.0, 0.5], &p).is_err());
    }

    #[test]
    fn geometric_betas_and_horizons() {
        let spec = GeometricMeshSpec::new(0.8, 1.0, 3).unwrap();
        let part = geometric_partition(&spec, &pp()).unwrap();
        assert_eq!(part.betas(), &[0.8, 0.8 * 0.8, 0.8 * 0.8 * 0.8]);
        assert!((part.betas()[2] - 0.512).abs() < 1e-15);
        assert!((part.l_m() - 1.953_125).abs() < 1e-12);
        assert!(part.alphas().windows(2).all(|w| w[0] < w[1]));
        assert!(part.geometric().is_some());
    }

    #[test]
    fn geometric_partition_default_weights_sum_to_one() {
        let part = geometric_partition(&GeometricMeshSpec::default(), &pp()).unwrap();
        let s: f64 = part.weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(part.weights().iter().all(|&a| a > 0.0));
    }

    #[test]
    fn geometric_partition_underflow_rejected() {
        // beta0 beta / 2 = 60 makes erfc vanish, so alpha_1 = 0.
        let spec = GeometricMeshSpec::new(0.5, 240.0, 2).unwrap();
        assert!(geometric_partition(&spec, &pp()).is_err());
    }

    #[test]
    fn step_function_conventions() {
        let p = pp();
        let part = partition_from_alphas(&[0.2, 0.6], &p).unwrap();
        let f = p.f_c0();
        assert_eq!(step_f_m(0.1, &part), 0.0);
        assert!((step_f_m(0.2, &part) - f * part.weights()[0]).abs() < 1e-15);
        assert!((step_f_m(0.4, &part) - f * part.weights()[0]).abs() < 1e-15);
        assert!((step_f_m(1.0, &part) - f).abs() < 1e-15);
    }

    #[test]
    fn w_examples() {
        let p = pp();
        assert_eq!(w(1.0, 0.0, &p).unwrap(), 1.0);
        assert!((w(1.0, 1.0, &p.with_length(3.0).unwrap()).unwrap() - erfc_value(0.5)).abs() < 1e-15);
        let long = p.with_length(3.0).unwrap();
        assert!((w(1.0, 2.0, &long).unwrap() - 0.157_299_207_050_285_13).abs() < 1e-13);
        assert!(w(0.0, 0.5, &p).is_err());
        assert!(w(1.0, 1.5, &p).is_err());
    }

    #[test]
    fn w_at_front_equals_threshold() {
        let p = pp();
        let part = partition_from_alphas(&[0.1, 0.3, 0.7], &p).unwrap();
        let t = 0.4;
        for (alpha, beta) in part.alphas().iter().zip(part.betas()) {
            let x = beta * sqrt(t);
            if x <= p.length() {
                assert!((w(t, x, &p).unwrap() - alpha).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_jumps_at_fronts() {
        let p = pp();
        let part = geometric_partition(&GeometricMeshSpec::default(), &p).unwrap();
        let t = 0.81;
        assert!((kernel_k_m(t, 0.0, &part, &p).unwrap() - p.f_c0()).abs() < 1e-15);
        let st = sqrt(t);
        for (j, beta) in part.betas().iter().enumerate() {
            let x = beta * st;
            let at = kernel_k_m(t, x, &part, &p).unwrap();
            let after = kernel_k_m(t, x * (1.0 + 1e-15), &part, &p).unwrap();
            let tail: f64 = part.weights()[..=j].iter().sum();
            assert!((at - p.f_c0() * tail).abs() < 1e-14);
            assert!(after < at);
        }
        assert_eq!(kernel_k_m(t, part.betas()[0] * st * 1.01, &part, &p).unwrap(), 0.0);
    }

    #[test]
    fn series_boundary_values() {
        let p = pp();
        for t in [0.05, 0.3, 2.0] {
            assert_eq!(concentration_series(t, 0.0, &p, 1e-12).unwrap(), 1.0);
            let h = 1e-5;
            let d = (concentration_series(t, 1.0, &p, 1e-13).unwrap()
                - concentration_series(t, 1.0 - h, &p, 1e-13).unwrap())
                / h;
            assert!(d.abs() < 1e-4, "t = {t}: slope {d}");
        }
    }

    #[test]
    fn series_heat_residual() {
        let p = pp();
        // Fourth-order central stencils in both variables.
        let h = 2e-3;
        let k = 5e-4;
        for t in [0.05, 0.1, 0.5] {
            for i in 1..10 {
                let x = i as f64 * 0.1;
                let c = |t: f64, x: f64| concentration_series(t, x, &p, 1e-15).unwrap();
                let ct = (-c(t + 2.0 * k, x) + 8.0 * c(t + k, x) - 8.0 * c(t - k, x) + c(t - 2.0 * k, x))
                    / (12.0 * k);
                let cxx = (-c(t, x + 2.0 * h) + 16.0 * c(t, x + h) - 30.0 * c(t, x) + 16.0 * c(t, x - h)
                    - c(t, x - 2.0 * h))
                    / (12.0 * h * h);
                assert!((ct - cxx).abs() < 1e-6, "t={t} x={x}: {}", ct - cxx);
            }
        }
    }

    #[test]
    fn series_close_to_w_at_short_times() {
        let p = pp();
        for t in [0.005, 0.01, 0.02] {
            for i in 0..=20 {
                let x = i as f64 * 0.05;
                let c = concentration_series(t, x, &p, 1e-12).unwrap();
                let wv = w(t, x, &p).unwrap();
                assert!((c - wv).abs() <= 0.01, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn series_rejects_initial_time() {
        let p = pp();
        assert!(concentration_series(0.0, 0.5, &p, 1e-10).is_err());
        assert_eq!(concentration_series(0.0, 0.0, &p, 1e-10).unwrap(), 1.0);
        assert!(concentration_series_capped(1e-6, 0.5, &p, 1e-12, 10).is_err());
    }

    #[test]
    fn polynomial_kernel_limits() {
        let p = pp();
        let pk0 = PolynomialKernel::new(0, &p).unwrap();
        assert_eq!(kernel_pk_m(0.3, 0.7, &pk0, &p).unwrap(), p.f_c0());
        let pk = PolynomialKernel::new(4, &p).unwrap();
        assert!((kernel_pk_m(0.3, 0.0, &pk, &p).unwrap() - p.f_c0()).abs() < 1e-15);
        // exp(-mu_0^2 t) < 1e-9 for t > 4 ln(10^9) / pi^2.
        let t = 4.0 * 9.0 * core::f64::consts::LN_10 / (PI * PI) + 0.1;
        for i in 0..=10 {
            let x = i as f64 * 0.1;
            assert!((kernel_pk_m(t, x, &pk, &p).unwrap() - p.f_c0()).abs() < 1e-8);
        }
    }
}
