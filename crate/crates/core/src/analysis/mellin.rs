//! Numerical Mellin transform `M[f](s) = int_0^inf f(x) x^{s-1} dx` for
//! bounded `f` supported in `(0, L]` and `Re s > 0`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cos, exp, log, pow, sin, sqrt, PI};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

/// Transform of `f` on `(0, support_end]`.
///
/// The interval is split into dyadic panels `[L/2^{k+1}, L/2^k]` until the
/// remaining piece near zero is bounded by `sup|f| x^{Re s} / Re s < tol/4`,
/// with `sup|f|` estimated from the samples taken so far. `breaks` are
/// extra panel boundaries where `f` is not smooth.
pub fn mellin_numeric(
    f: impl Fn(f64) -> f64,
    support_end: f64,
    breaks: &[f64],
    s: Complex64,
    tol: f64,
) -> Result<Complex64> {
    let sigma = s.re;
    if !(sigma > 0.0) {
        return Err(Error::Domain {
            name: "Re s",
            value: sigma,
        });
    }
    if !(support_end > 0.0 && support_end.is_finite()) {
        return Err(Error::Domain {
            name: "support_end",
            value: support_end,
        });
    }
    let tau = s.im;
    let kernel_re = |x: f64| pow(x, sigma - 1.0) * cos(tau * log(x));
    let kernel_im = |x: f64| pow(x, sigma - 1.0) * sin(tau * log(x));

    let mut total = Complex64::new(0.0, 0.0);
    let mut sup: f64 = 0.0;
    let mut hi = support_end;
    let opts = QuadOptions {
        abs_tol: tol / 4.0,
        rel_tol: 0.0,
        max_segments: 4000,
    };
    // 1100 halvings reach the bottom of the f64 range.
    for _ in 0..1100 {
        let lo = 0.5 * hi;
        let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
        pts.push(lo);
        pts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
        pts.push(hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut sampled = 0.0_f64;
        let re = integrate_with_breaks(
            |x| {
                let v = f(x);
                sampled = sampled.max(v.abs());
                v * kernel_re(x)
            },
            &pts,
            opts,
        )?;
        let im = integrate_with_breaks(|x| f(x) * kernel_im(x), &pts, opts)?;
        sup = sup.max(sampled);
        total += Complex64::new(re.value, im.value);

        let tail = sup * pow(lo, sigma) / sigma;
        if tail < tol / 4.0 || lo == 0.0 {
            return Ok(total);
        }
        hi = lo;
    }
    Err(Error::Convergence("mellin_numeric: tail did not decay"))
}

/// Unitary transform `M~[f](tau) = M[f](1/2 - i tau) / sqrt(2 pi)`.
pub fn mellin_unitary(f: impl Fn(f64) -> f64, support_end: f64, breaks: &[f64], tau: f64, tol: f64) -> Result<Complex64> {
    let m = mellin_numeric(f, support_end, breaks, Complex64::new(0.5, -tau), tol)?;
    Ok(m / sqrt(2.0 * PI))
}

/// `int_{-tau_max}^{tau_max} |M~[f](tau)|^2 dtau`. `|M~[f]|` is even in
/// `tau` for real `f`, so only `tau >= 0` is evaluated.
pub fn plancherel_energy(
    f: impl Fn(f64) -> f64,
    support_end: f64,
    breaks: &[f64],
    tau_max: f64,
    tol: f64,
) -> Result<f64> {
    let mut failure = None;
    let opts = QuadOptions {
        abs_tol: tol,
        rel_tol: 0.0,
        max_segments: 4000,
    };
    let est = crate::quadrature::integrate(
        |tau| match mellin_unitary(&f, support_end, breaks, tau, tol * 1e-2) {
            Ok(v) => v.norm_sqr(),
            Err(e) => {
                failure = Some(e);
                0.0
            }
        },
        0.0,
        tau_max,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * est.value)
}

/// `M[f](s)` for `f` the indicator of `(0, b]`: `b^s / s`.
pub fn mellin_indicator(b: f64, s: Complex64) -> Complex64 {
    let r = exp(s.re * log(b));
    let theta = s.im * log(b);
    Complex64::new(r * cos(theta), r * sin(theta)) / s
}
