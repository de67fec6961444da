//! Forward maps from a channel density to a current.
//!
//! `I_m` is evaluated two ways: through the cumulative function,
//! `J0 F(c0) Phi_m[phi](sqrt t)`, and by direct quadrature of `rho K_m`. The
//! two paths share no code beyond the quadrature routine and serve as each
//! other's oracle.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::error::{ensure_finite, Error, Result};
use crate::kernel::{concentration, kernel_pk_m, PhysicalParams, PolynomialKernel, StepPartition};
use crate::math::sqrt;
use crate::quadrature::{integrate_with_breaks, QuadOptions};

/// A channel density on `[0, L]`.
pub trait Density {
    fn eval(&self, x: f64) -> f64;

    /// Points where the density is not smooth; quadrature panels are split
    /// there.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

impl<F: Fn(f64) -> f64> Density for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Piecewise-linear interpolation of tabulated values. Constant
/// extrapolation outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Tabulated {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidArgument {
                name: "ys",
                reason: "table columns differ in length",
            });
        }
        if xs.is_empty() {
            return Err(Error::InvalidArgument {
                name: "xs",
                reason: "table is empty",
            });
        }
        for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            ensure_finite("x", x)?;
            ensure_finite("y", y)?;
            if i > 0 && x <= xs[i - 1] {
                return Err(Error::InvalidArgument {
                    name: "xs",
                    reason: "abscissae must be strictly increasing",
                });
            }
        }
        Ok(Self { xs, ys })
    }

    /// Same as [`Tabulated::new`] but also requires `y >= 0`.
    pub fn density(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if let Some(&y) = ys.iter().find(|&&y| y < 0.0) {
            return Err(Error::Domain { name: "rho", value: y });
        }
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn value(&self, x: f64) -> f64 {
        interpolate(&self.xs, &self.ys, x)
    }
}

impl Density for Tabulated {
    fn eval(&self, x: f64) -> f64 {
        self.value(x)
    }

    fn breakpoints(&self) -> &[f64] {
        &self.xs
    }
}

/// The sigmoidal test density `rho(x) = 8 a^8 x^7 / (x^8 + a^8)^2`, with
/// cumulative `phi(x) = x^8 / (x^8 + a^8)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hill8 {
    a: f64,
}

impl Hill8 {
    pub fn new(a: f64) -> Result<Self> {
        ensure_finite("a", a)?;
        if !(a > 0.0) {
            return Err(Error::Domain { name: "a", value: a });
        }
        Ok(Hill8 { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn rho(&self, x: f64) -> f64 {
        let r = x / self.a;
        let r2 = r * r;
        let r4 = r2 * r2;
        let r8 = r4 * r4;
        let v = 8.0 * r4 * r2 * r / (self.a * (1.0 + r8) * (1.0 + r8));
        // Far past `a` both factors overflow; the true value is below 1e-300.
        if v.is_finite() { v } else { 0.0 }
    }

    pub fn phi(&self, x: f64) -> f64 {
        let r8 = pow8(x / self.a);
        r8 / (1.0 + r8)
    }

    /// `phi(min(x, L)) - phi(L)`.
    pub fn phi_tilde(&self, x: f64, l: f64) -> f64 {
        self.phi(x.min(l)) - self.phi(l)
    }
}

fn pow8(x: f64) -> f64 {
    let x2 = x * x;
    let x4 = x2 * x2;
    x4 * x4
}

impl Density for Hill8 {
    fn eval(&self, x: f64) -> f64 {
        self.rho(x)
    }
}

/// Linear interpolation with constant extrapolation. `xs` strictly increasing
/// and non-empty.
pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    // First index with xs[i] > x; 1 <= i <= n - 1.
    let i = xs.partition_point(|&v| v <= x);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let (y0, y1) = (ys[i - 1], ys[i]);
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
}

/// Strictly increasing times with one current value each.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidArgument {
                name: "values",
                reason: "times and values differ in length",
            });
        }
        for (i, (&t, &v)) in times.iter().zip(&values).enumerate() {
            ensure_finite("t", t)?;
            ensure_finite("I", v)?;
            if i == 0 && t < 0.0 {
                return Err(Error::Domain { name: "t", value: t });
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::InvalidArgument {
                    name: "times",
                    reason: "times must be strictly increasing",
                });
            }
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Piecewise-linear interpolation; `None` outside the sampled range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        if self.times.is_empty() || t < self.times[0] || t > self.times[self.times.len() - 1] {
            return None;
        }
        Some(interpolate(&self.times, &self.values, t))
    }
}

fn check_x(x: f64, pp: &PhysicalParams) -> Result<()> {
    ensure_finite("x", x)?;
    if x < 0.0 || x > pp.length() {
        return Err(Error::Domain { name: "x", value: x });
    }
    Ok(())
}

fn check_t(t: f64, allow_zero: bool) -> Result<()> {
    ensure_finite("t", t)?;
    if t < 0.0 || (!allow_zero && t == 0.0) {
        return Err(Error::Domain { name: "t", value: t });
    }
    Ok(())
}

/// Sorted, deduplicated panel boundaries: `a`, `b`, and every extra point
/// strictly inside `(a, b)`.
fn panel_points(a: f64, b: f64, extra: &[f64], more: &[f64]) -> Vec<f64> {
    let mut pts = Vec::with_capacity(extra.len() + more.len() + 2);
    pts.push(a);
    pts.extend(extra.iter().chain(more).copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn integrate_density<D: Density + ?Sized>(
    rho: &D,
    a: f64,
    b: f64,
    extra: &[f64],
    tol: f64,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let pts = panel_points(a, b, rho.breakpoints(), extra);
    let opts = QuadOptions::with_abs_tol(tol);
    Ok(integrate_with_breaks(|x| rho.eval(x) * f(x), &pts, opts)?.value)
}

/// `phi(x) = int_0^x rho`, by adaptive quadrature to absolute tolerance `tol`.
pub fn phi_from_rho<D: Density + ?Sized>(rho: &D, x: f64, pp: &PhysicalParams, tol: f64) -> Result<f64> {
    check_x(x, pp)?;
    integrate_density(rho, 0.0, x, &[], tol, |_| 1.0)
}

/// `Phi_m[phi](t) = sum_j a_j phi(min(L, beta_j t))`, with `t` in units of
/// sqrt(time).
pub fn phi_m(phi: impl Fn(f64) -> f64, t: f64, part: &StepPartition) -> f64 {
    let l = part.length();
    part.weights()
        .iter()
        .zip(part.betas())
        .map(|(a, b)| a * phi((b * t).min(l)))
        .sum()
}

/// `I_m[rho](t) = J0 F(c0) Phi_m[phi](sqrt t)`.
///
/// The cumulative function is integrated once, panel by panel, over the
/// sorted clamp points `h_j = min(L, beta_j sqrt t)`.
pub fn i_m_formula<D: Density + ?Sized>(
    rho: &D,
    t: f64,
    part: &StepPartition,
    pp: &PhysicalParams,
    tol: f64,
) -> Result<f64> {
    check_t(t, true)?;
    let m = part.m();
    let st = sqrt(t);
    let l = pp.length();
    let panel_tol = tol / m as f64;
    // betas descend, so h_m <= ... <= h_1.
    let mut sum = 0.0;
    let mut phi = 0.0;
    let mut left = 0.0;
    for j in (0..m).rev() {
        let h = (part.betas()[j] * st).min(l);
        phi += integrate_density(rho, left, h, &[], panel_tol, |_| 1.0)?;
        left = left.max(h);
        sum += part.weights()[j] * phi;
    }
    Ok(pp.j0() * part.f_c0() * sum)
}

/// `I_m[rho](t) = J0 int_0^L rho(x) K_m(t, x) dx`, with panels split at the
/// kernel jumps `beta_j sqrt t`.
pub fn i_m_quadrature<D: Density + ?Sized>(
    rho: &D,
    t: f64,
    part: &StepPartition,
    pp: &PhysicalParams,
    tol: f64,
) -> Result<f64> {
    check_t(t, false)?;
    let st = sqrt(t);
    let jumps: Vec<f64> = part.betas().iter().map(|b| b * st).collect();
    let v = integrate_density(rho, 0.0, pp.length(), &jumps, tol / pp.j0(), |x| part.kernel(t, x))?;
    Ok(pp.j0() * v)
}

/// d/dt `I_m[rho](t) = J0 F(c0) sum_{beta_j sqrt t < L} a_j beta_j rho(beta_j sqrt t) / (2 sqrt t)`.
pub fn i_m_derivative<D: Density + ?Sized>(rho: &D, t: f64, part: &StepPartition, pp: &PhysicalParams) -> Result<f64> {
    check_t(t, false)?;
    let st = sqrt(t);
    let l = pp.length();
    let mut s = 0.0;
    for (a, b) in part.weights().iter().zip(part.betas()) {
        let h = b * st;
        if h < l {
            s += a * b * rho.eval(h);
        }
    }
    Ok(pp.j0() * part.f_c0() * s / (2.0 * st))
}

/// Current through the exact kernel `F(c(t, x))`. The concentration comes
/// from the eigenfunction series, or from `w` when `D t / L^2 < 0.01`.
pub fn i_exact<D: Density + ?Sized>(rho: &D, t: f64, pp: &PhysicalParams, tol: f64) -> Result<f64> {
    check_t(t, false)?;
    let series_tol = 1e-13 * pp.c0();
    // Errors inside the integrand are surfaced after the fact.
    let failure = Cell::new(None);
    let v = integrate_density(rho, 0.0, pp.length(), &[], tol / pp.j0(), |x| {
        match concentration(t, x, pp, series_tol) {
            Ok(c) => pp.hill().value(c),
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    })?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(pp.j0() * v)
}

/// `PI_m[rho](t) = int_0^L rho(x) PK_m(t, x) dx`. No `J0` factor.
pub fn pi_m<D: Density + ?Sized>(
    rho: &D,
    t: f64,
    pk: &PolynomialKernel,
    pp: &PhysicalParams,
    tol: f64,
) -> Result<f64> {
    check_t(t, false)?;
    let failure = Cell::new(None);
    let v = integrate_density(rho, 0.0, pp.length(), &[], tol, |x| match kernel_pk_m(t, x, pk, pp) {
        Ok(k) => k,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    })?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(v)
}

/// Which forward map generates a signal.
#[derive(Debug, Clone, Copy)]
pub enum ForwardModel<'a> {
    /// `I_m` through the cumulative function.
    Step(&'a StepPartition),
    /// The exact kernel.
    Exact,
    /// `PI_m`.
    Polynomial(&'a PolynomialKernel),
}

/// Value of the chosen forward map at one time. At `t = 0` the exact and
/// step currents vanish; the polynomial kernel sees `c = 0` away from the
/// open end and returns `P_m(-c0) int rho`.
pub fn current_at<D: Density + ?Sized>(
    rho: &D,
    model: ForwardModel<'_>,
    t: f64,
    pp: &PhysicalParams,
    tol: f64,
) -> Result<f64> {
    check_t(t, true)?;
    match model {
        ForwardModel::Step(part) => i_m_formula(rho, t, part, pp, tol),
        ForwardModel::Exact if t == 0.0 => Ok(0.0),
        ForwardModel::Exact => i_exact(rho, t, pp, tol),
        ForwardModel::Polynomial(pk) if t == 0.0 => {
            let mass = phi_from_rho(rho, pp.length(), pp, tol)?;
            Ok(pk.eval_at_concentration(0.0) * mass)
        }
        ForwardModel::Polynomial(pk) => pi_m(rho, t, pk, pp, tol),
    }
}

/// Samples the chosen forward map on a strictly increasing, nonnegative grid.
pub fn sample_current<D: Density + ?Sized>(
    rho: &D,
    model: ForwardModel<'_>,
    times: &[f64],
    pp: &PhysicalParams,
    tol: f64,
) -> Result<SampledSignal> {
    let values = times
        .iter()
        .map(|&t| current_at(rho, model, t, pp, tol))
        .collect::<Result<Vec<_>>>()?;
    SampledSignal::new(times.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{geometric_partition, partition_from_alphas, GeometricMeshSpec};
    use alloc::vec;

    fn setup() -> (PhysicalParams, StepPartition) {
        let pp = PhysicalParams::default();
        let part = geometric_partition(&GeometricMeshSpec::default(), &pp).unwrap();
        (pp, part)
    }

    #[test]
    fn tabulated_interpolates() {
        let tab = Tabulated::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(tab.value(0.5), 1.0);
        assert_eq!(tab.value(2.0), 1.0);
        assert_eq!(tab.value(-1.0), 0.0);
        assert_eq!(tab.value(5.0), 0.0);
        assert!(Tabulated::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Tabulated::density(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn signal_validation() {
        assert!(SampledSignal::new(vec![], vec![]).unwrap().is_empty());
        assert!(SampledSignal::new(vec![-1.0], vec![0.0]).is_err());
        assert!(SampledSignal::new(vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(SampledSignal::new(vec![0.0], vec![]).is_err());
        let s = SampledSignal::new(vec![0.0, 2.0], vec![0.0, 4.0]).unwrap();
        assert_eq!(s.interpolate(1.5), Some(3.0));
        assert_eq!(s.interpolate(2.5), None);
    }

    #[test]
    fn phi_of_constant_density() {
        let pp = PhysicalParams::default();
        let v = phi_from_rho(&|_x: f64| 1.0, 0.3, &pp, 1e-12).unwrap();
        assert!((v - 0.3).abs() < 1e-14);
        assert!(phi_from_rho(&|_x: f64| 1.0, 1.5, &pp, 1e-12).is_err());
    }

    #[test]
    fn phi_m_identities() {
        let (_, part) = setup();
        for t in [0.0, 0.3, 2.0, 100.0] {
            assert!((phi_m(|_| 1.0, t, &part) - 1.0).abs() < 1e-14);
        }
        let lm = part.l_m();
        assert!((phi_m(|x| x * x + 3.0 * x, lm, &part) - 4.0).abs() < 1e-14);
        let t = 0.5 * part.horizons()[1];
        let sab: f64 = part.weights().iter().zip(part.betas()).map(|(a, b)| a * b).sum();
        assert!((phi_m(|x| x, t, &part) - t * sab).abs() < 1e-15);
    }

    #[test]
    fn constant_density_closed_form() {
        let (pp, part) = setup();
        let sab: f64 = part.weights().iter().zip(part.betas()).map(|(a, b)| a * b).sum();
        let t: f64 = 0.7;
        let want = pp.j0() * pp.f_c0() * t.sqrt() * sab;
        let rho = |_x: f64| 1.0;
        assert!((i_m_formula(&rho, t, &part, &pp, 1e-12).unwrap() - want).abs() < 1e-12);
        assert!((i_m_quadrature(&rho, t, &part, &pp, 1e-12).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn current_saturates_after_horizon() {
        let (pp, part) = setup();
        let rho = |x: f64| 1.0 + x * x;
        let mass = 1.0 + 1.0 / 3.0;
        let lm2 = part.l_m() * part.l_m();
        for t in [lm2, lm2 * 1.5, 1e6] {
            let v = i_m_formula(&rho, t, &part, &pp, 1e-12).unwrap();
            assert!((v - pp.f_c0() * mass).abs() < 1e-12);
            let q = i_m_quadrature(&rho, t, &part, &pp, 1e-12).unwrap();
            assert!((q - pp.f_c0() * mass).abs() < 1e-12);
        }
        assert_eq!(i_m_formula(&rho, 0.0, &part, &pp, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn paths_agree_on_irregular_partition() {
        let pp = PhysicalParams::default();
        let part = partition_from_alphas(&[0.05, 0.2, 0.45, 0.9], &pp).unwrap();
        let rho = |x: f64| 2.0 + (5.0 * x).sin();
        for t in [0.01, 0.2, 0.9, 3.0, 40.0] {
            let a = i_m_formula(&rho, t, &part, &pp, 1e-11).unwrap();
            let b = i_m_quadrature(&rho, t, &part, &pp, 1e-11).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs().max(1e-12), "t = {t}");
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let (pp, part) = setup();
        let rho = |x: f64| 1.0 + x;
        let t = 0.9;
        let h = 1e-6;
        let fd = (i_m_formula(&rho, t + h, &part, &pp, 1e-13).unwrap()
            - i_m_formula(&rho, t - h, &part, &pp, 1e-13).unwrap())
            / (2.0 * h);
        let d = i_m_derivative(&rho, t, &part, &pp).unwrap();
        assert!((fd - d).abs() < 1e-6);
    }

    #[test]
    fn hill8_values() {
        let h = Hill8::new(1.5).unwrap();
        assert_eq!(h.phi(1.5), 0.5);
        assert_eq!(h.phi(0.0), 0.0);
        assert_eq!(h.rho(0.0), 0.0);
        assert_eq!(h.rho(1e200), 0.0);
        // rho(a) = 8 / (4 a).
        assert!((h.rho(1.5) - 2.0 / 1.5).abs() < 1e-15);
        let pp = PhysicalParams::default().with_length(3.0).unwrap();
        for x in [0.3, 1.0, 1.5, 2.2, 3.0] {
            let q = phi_from_rho(&h, x, &pp, 1e-13).unwrap();
            assert!((q - h.phi(x)).abs() < 1e-12, "x = {x}");
        }
        assert_eq!(h.phi_tilde(4.0, 3.0), 0.0);
        assert!(Hill8::new(0.0).is_err());
    }

    #[test]
    fn zero_density_gives_zero_current() {
        let (pp, part) = setup();
        let pk = PolynomialKernel::new(3, &pp).unwrap();
        let rho = |_x: f64| 0.0;
        for model in [ForwardModel::Step(&part), ForwardModel::Exact, ForwardModel::Polynomial(&pk)] {
            let s = sample_current(&rho, model, &[0.0, 0.5, 1.0], &pp, 1e-10).unwrap();
            assert!(s.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constant_polynomial_kernel() {
        let pp = PhysicalParams::default();
        let pk = PolynomialKernel::new(0, &pp).unwrap();
        let rho = |x: f64| 3.0 * x * x;
        for t in [0.1, 1.0] {
            assert!((pi_m(&rho, t, &pk, &pp, 1e-12).unwrap() - pp.f_c0()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_current_approaches_saturation() {
        let pp = PhysicalParams::default();
        let rho = |_x: f64| 1.0;
        let late = i_exact(&rho, 50.0, &pp, 1e-12).unwrap();
        assert!((late - pp.f_c0()).abs() < 1e-10);
        let early = i_exact(&rho, 0.001, &pp, 1e-12).unwrap();
        assert!(early > 0.0 && early < 0.2);
    }
}
