//! Complementary error function, its inverse, and Hill's activation curve.

use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::math::{exp, fabs, pow, FRAC_2_SQRT_PI};

/// Past this `1 - erf` starts to cancel, so the continued fraction takes over.
const SERIES_CUTOFF: f64 = 0.5;
/// `erfc(z)` underflows to zero past this point.
const ERFC_UNDERFLOW: f64 = 27.3;
/// The fraction needs about 730 terms at the cutoff.
const MAX_CF_TERMS: usize = 2000;

/// erfc(z) = 1 - (2/sqrt(pi)) * integral_0^z exp(-t^2) dt.
pub fn erfc(z: f64) -> Result<f64> {
    ensure_finite("z", z)?;
    Ok(erfc_value(z))
}

pub(crate) fn erfc_value(z: f64) -> f64 {
    if z < 0.0 {
        return 2.0 - erfc_nonneg(-z);
    }
    erfc_nonneg(z)
}

fn erfc_nonneg(z: f64) -> f64 {
    if z < SERIES_CUTOFF {
        1.0 - erf_series(z)
    } else if z < ERFC_UNDERFLOW {
        erfc_continued_fraction(z)
    } else {
        0.0
    }
}

/// erf(z) = (2/sqrt(pi)) exp(-z^2) sum_n (2z^2)^n z / (1*3*...*(2n+1)).
/// All terms are positive, so there is no cancellation.
fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * z2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * exp(-z2) * sum
}

/// Modified Lentz evaluation of
/// erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))).
fn erfc_continued_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for n in 1..=MAX_CF_TERMS {
        let a = n as f64 * 0.5;
        d = z + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = z + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if fabs(delta - 1.0) < 1e-16 {
            break;
        }
    }
    0.5 * FRAC_2_SQRT_PI * exp(-z * z) / f
}

/// Inverse of [`erfc`] on (0, 2).
///
/// Safeguarded Newton iteration inside a bisection bracket, stopped when the
/// residual `erfc(x) - y` is below `1e-14` relative to `y`, or below the
/// accuracy floor of `erfc` itself once the bracket has collapsed.
pub fn erfc_inv(y: f64) -> Result<f64> {
    ensure_finite("y", y)?;
    if !(y > 0.0 && y < 2.0) {
        return Err(Error::Domain { name: "y", value: y });
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    if y > 1.0 {
        // 2 - y is exact here.
        return erfc_inv_upper(2.0 - y).map(|x| -x);
    }
    erfc_inv_upper(y)
}

/// Solves erfc(x) = y for y in (0, 1), so x > 0.
fn erfc_inv_upper(y: f64) -> Result<f64> {
    if y < f64::MIN_POSITIVE {
        return Err(Error::Convergence("erfc_inv: target below normal range"));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while erfc_nonneg(hi) >= y {
        lo = hi;
        hi *= 2.0;
        if hi > 2.0 * ERFC_UNDERFLOW {
            return Err(Error::Convergence("erfc_inv: could not bracket target"));
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = erfc_nonneg(x) - y;
        let floor = 1e-14_f64.max(4.0 * f64::EPSILON * (1.0 + 2.0 * x * x));
        if fabs(r) <= 1e-14 * y {
            return Ok(x);
        }
        if r > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            return if fabs(r) <= floor * y {
                Ok(x)
            } else {
                Err(Error::Convergence("erfc_inv: residual stalled above tolerance"))
            };
        }
        // d/dx erfc = -(2/sqrt(pi)) exp(-x^2)
        let slope = FRAC_2_SQRT_PI * exp(-x * x);
        let newton = x + r / slope;
        x = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence("erfc_inv: iteration cap reached"))
}

/// Parameters of Hill's function F(x) = x^n / (x^n + K^n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillParams {
    n: f64,
    k_half: f64,
}

impl HillParams {
    pub fn new(n: f64, k_half: f64) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Domain { name: "n", value: n });
        }
        if !(k_half.is_finite() && k_half > 0.0) {
            return Err(Error::Domain {
                name: "k_half",
                value: k_half,
            });
        }
        Ok(Self { n, k_half })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn k_half(&self) -> f64 {
        self.k_half
    }

    /// Unchecked evaluation; `x` is assumed nonnegative.
    pub(crate) fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x <= self.k_half {
            let r = pow(x / self.k_half, self.n);
            r / (1.0 + r)
        } else {
            1.0 / (1.0 + pow(self.k_half / x, self.n))
        }
    }
}

impl Default for HillParams {
    fn default() -> Self {
        Self { n: 2.0, k_half: 0.5 }
    }
}

/// Hill's function at a nonnegative concentration.
pub fn hill_f(x: f64, p: &HillParams) -> Result<f64> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::Domain { name: "x", value: x });
    }
    Ok(p.value(x))
}

/// Highest Taylor degree for which the polynomial-kernel operator is known
/// to be injective.
pub const MAX_TAYLOR_DEGREE: usize = 8;

/// Taylor coefficients `F^(k)(c0) / k!` for `k = 0..=m`.
///
/// With `r(x) = (x/K)^n`, the series of `r` about `c0` is a generalized
/// binomial series, and `F = r / (1 + r)` follows by power-series division.
/// No numerical differentiation is involved.
pub fn hill_taylor(c0: f64, m: usize, p: &HillParams) -> Result<Vec<f64>> {
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(Error::Domain { name: "c0", value: c0 });
    }
    if m > MAX_TAYLOR_DEGREE {
        return Err(Error::InvalidArgument {
            name: "m",
            reason: "Taylor degree above 8 is not supported",
        });
    }
    let r0 = pow(c0 / p.k_half, p.n);
    let mut r = Vec::with_capacity(m + 1);
    let mut binom = 1.0;
    let mut scale = 1.0;
    for k in 0..=m {
        if k > 0 {
            binom *= (p.n - (k - 1) as f64) / k as f64;
            scale /= c0;
        }
        r.push(r0 * binom * scale);
    }

    // (1 + R) * Fs = R, term by term.
    let d0 = 1.0 + r0;
    let mut coeffs: Vec<f64> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut acc = r[k];
        for i in 1..=k {
            acc -= r[i] * coeffs[k - i];
        }
        coeffs.push(acc / d0);
    }
    Ok(coeffs)
}

/// Evaluates `sum coeffs[k] * h^k` by Horner's rule.
pub fn horner(coeffs: &[f64], h: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * h + c)
}
