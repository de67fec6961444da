//! Norm families on intervals `[a, b)` and weighted Sobolev norms.
//!
//! The `L^p`, `L^inf` and BV norms act on [`PiecewiseLinear`] functions and
//! are computed in closed form, so the restriction and scaling axioms can be
//! checked to rounding error. Weighted norms act on closures and use
//! adaptive quadrature, or a finite-difference dual problem for order `-1`.

use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::math::{fabs, pow, sqrt};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

/// Continuous-from-the-right piecewise-linear function. Knots are
/// nondecreasing; a repeated knot encodes a jump, the first value being the
/// left limit.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidArgument {
                name: "ys",
                reason: "knot and value counts differ",
            });
        }
        if xs.len() < 2 {
            return Err(Error::InvalidArgument {
                name: "xs",
                reason: "at least two knots are required",
            });
        }
        for (&x, &y) in xs.iter().zip(&ys) {
            ensure_finite("x", x)?;
            ensure_finite("y", y)?;
        }
        if xs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument {
                name: "xs",
                reason: "knots must be nondecreasing",
            });
        }
        if xs.windows(3).any(|w| w[0] == w[2]) {
            return Err(Error::InvalidArgument {
                name: "xs",
                reason: "a knot may repeat at most once",
            });
        }
        if xs[0] == xs[xs.len() - 1] {
            return Err(Error::InvalidArgument {
                name: "xs",
                reason: "support has zero width",
            });
        }
        Ok(Self { xs, ys })
    }

    /// Interpolant of `f` at `xs`.
    pub fn sample(f: impl Fn(f64) -> f64, xs: Vec<f64>) -> Result<Self> {
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn start(&self) -> f64 {
        self.xs[0]
    }

    pub fn end(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    fn segment_value(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        if x1 == x0 {
            return y1;
        }
        let s = (x - x0) / (x1 - x0);
        y0 + s * (y1 - y0)
    }

    /// Value at `x`, right limit at jumps, constant beyond the ends.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&v| v <= x);
        if i == 0 {
            self.ys[0]
        } else if i == n {
            self.ys[n - 1]
        } else {
            self.segment_value(i - 1, x)
        }
    }

    /// Left limit at `x`.
    pub fn left_limit(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&v| v < x);
        if i == 0 {
            self.ys[0]
        } else if i == n {
            self.ys[n - 1]
        } else {
            self.segment_value(i - 1, x)
        }
    }

    /// The function on `[a, b)`, as knots `a, interior knots, b` with the
    /// left limit at `b`.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidArgument {
                name: "b",
                reason: "interval must have a < b",
            });
        }
        if a < self.start() || b > self.end() {
            return Err(Error::InvalidArgument {
                name: "a",
                reason: "interval leaves the support",
            });
        }
        let mut xs = Vec::with_capacity(self.xs.len() + 2);
        let mut ys = Vec::with_capacity(self.xs.len() + 2);
        xs.push(a);
        ys.push(self.eval(a));
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            if x > a && x < b {
                xs.push(x);
                ys.push(y);
            }
        }
        xs.push(b);
        ys.push(self.left_limit(b));
        Self::new(xs, ys)
    }

    /// `x -> f(x / lambda)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain {
                name: "lambda",
                value: lambda,
            });
        }
        Self::new(self.xs.iter().map(|x| x * lambda).collect(), self.ys.clone())
    }

    /// `int |f|^p`, exact for every segment.
    pub fn integral_abs_pow(&self, p: f64) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| segment_abs_pow(x[1] - x[0], y[0], y[1], p))
            .sum()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        pow(self.integral_abs_pow(p), 1.0 / p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, y| m.max(fabs(*y)))
    }

    /// Total variation, the sum of knot-to-knot swings.
    pub fn total_variation(&self) -> f64 {
        self.ys.windows(2).map(|w| fabs(w[1] - w[0])).sum()
    }

    pub fn bv_norm(&self) -> f64 {
        self.sup_norm() + self.total_variation()
    }
}

/// `int_0^h |y0 + (y1 - y0) s/h|^p ds`.
fn segment_abs_pow(h: f64, y0: f64, y1: f64, p: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    if (y0 < 0.0 && y1 > 0.0) || (y0 > 0.0 && y1 < 0.0) {
        let r = h * fabs(y0) / (fabs(y0) + fabs(y1));
        return (r * pow(fabs(y0), p) + (h - r) * pow(fabs(y1), p)) / (p + 1.0);
    }
    let (u, v) = (fabs(y0), fabs(y1));
    // h (v^{p+1} - u^{p+1}) / ((p + 1)(v - u)), evaluated without
    // cancellation: exact power sums for integer p, Gauss-Legendre otherwise
    // when the endpoints are close.
    if p.fract() == 0.0 && p <= 64.0 {
        let k = p as i32;
        let mut s = 0.0;
        for i in 0..=k {
            s += pow(v, i as f64) * pow(u, (k - i) as f64);
        }
        return h * s / (p + 1.0);
    }
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    if hi - lo > 1e-3 * hi {
        return h * (pow(hi, p + 1.0) - pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
    }
    let mut s = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
        let t = 0.5 * (1.0 + x);
        s += w * pow(u + (v - u) * t, p);
    }
    0.5 * h * s
}

#[allow(clippy::excessive_precision)]
const GL8_NODES: [f64; 8] = [
    -0.960289856497536231683560868569473,
    -0.796666477413626739591553936475830,
    -0.525532409916328985817739049189246,
    -0.183434642495649804939476142360184,
    0.183434642495649804939476142360184,
    0.525532409916328985817739049189246,
    0.796666477413626739591553936475830,
    0.960289856497536231683560868569473,
];

#[allow(clippy::excessive_precision)]
const GL8_WEIGHTS: [f64; 8] = [
    0.101228536290376259152531354309962,
    0.222381034453374470544355994426241,
    0.313706645877887287337962201986601,
    0.362683783378361982965150449277195,
    0.362683783378361982965150449277195,
    0.313706645877887287337962201986601,
    0.222381034453374470544355994426241,
    0.101228536290376259152531354309962,
];

/// A family of norms `||.||_{[a,b)}` satisfying the restriction and scaling
/// axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormFamily {
    /// `L^p` with finite `p >= 1`.
    Lp(f64),
    LInf,
    /// Sup norm plus total variation.
    BV,
}

impl NormFamily {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Domain { name: "p", value: p });
        }
        Ok(Self::Lp(p))
    }

    /// `C(lambda)` in `||f(./lambda)||_{[lambda a, lambda b)} <= C(lambda) ||f||_{[a,b)}`.
    pub fn scaling_constant(&self, lambda: f64) -> f64 {
        match self {
            Self::Lp(p) => pow(lambda, 1.0 / p),
            Self::LInf | Self::BV => 1.0,
        }
    }

    /// `||f||_{[a,b)}`.
    pub fn norm(&self, f: &PiecewiseLinear, a: f64, b: f64) -> Result<f64> {
        let r = f.restrict(a, b)?;
        Ok(self.norm_whole(&r))
    }

    /// The norm over the whole support of `f`.
    pub fn norm_whole(&self, f: &PiecewiseLinear) -> f64 {
        match self {
            Self::Lp(p) => f.lp_norm(*p),
            Self::LInf => f.sup_norm(),
            Self::BV => f.bv_norm(),
        }
    }
}

/// Order of a weighted Sobolev norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevOrder {
    MinusOne,
    Zero,
    One,
}

/// Defaults for the weighted norms.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_DUAL_INTERVALS: usize = 4000;

fn weighted_opts(rel_tol: f64) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-300,
        rel_tol,
        max_segments: 20_000,
    }
}

fn panel_points(b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = Vec::with_capacity(breaks.len() + 2);
    pts.push(0.0);
    pts.extend(breaks.iter().copied().filter(|&x| x > 0.0 && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn check_endpoint(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { name: "b", value: b })
    }
}

/// `||f||_{0,gamma,b} = ||x^gamma f||_{L^2(0,b)}`.
pub fn weighted_l2(f: impl Fn(f64) -> f64, gamma: f64, b: f64, breaks: &[f64], rel_tol: f64) -> Result<f64> {
    check_endpoint(b)?;
    let pts = panel_points(b, breaks);
    let est = integrate_with_breaks(
        |x| {
            let v = pow(x, gamma) * f(x);
            v * v
        },
        &pts,
        weighted_opts(rel_tol),
    )?;
    Ok(sqrt(est.value))
}

/// `||f||_{1,gamma,b} = ||x^gamma f||_{H^1(0,b)}`, given `f` and `f'`.
pub fn weighted_h1(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    gamma: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    check_endpoint(b)?;
    let pts = panel_points(b, breaks);
    let est = integrate_with_breaks(
        |x| {
            let fx = f(x);
            let w = pow(x, gamma);
            let d = if gamma == 0.0 {
                df(x)
            } else {
                gamma * pow(x, gamma - 1.0) * fx + w * df(x)
            };
            let v = w * fx;
            v * v + d * d
        },
        &pts,
        weighted_opts(rel_tol),
    )?;
    Ok(sqrt(est.value))
}

/// `||f||_{-1,gamma,b}` as the discrete `H^1` norm of the solution of
/// `-u'' + u = x^gamma f`, `u(0) = u(b) = 0`, on `n` uniform intervals.
pub fn weighted_h_minus1(f: impl Fn(f64) -> f64, gamma: f64, b: f64, n: usize) -> Result<f64> {
    check_endpoint(b)?;
    if n < 2 {
        return Err(Error::InvalidArgument {
            name: "n",
            reason: "at least two intervals are required",
        });
    }
    let h = b / n as f64;
    let rhs: Vec<f64> = (1..n)
        .map(|i| {
            let x = i as f64 * h;
            pow(x, gamma) * f(x)
        })
        .collect();
    let u = solve_dirichlet(&rhs, h);
    Ok(discrete_h1(&u, h))
}

/// Discrete `L^2(0,b)` norm of `x^gamma f` on the interior nodes used by
/// [`weighted_h_minus1`].
pub fn weighted_l2_discrete(f: impl Fn(f64) -> f64, gamma: f64, b: f64, n: usize) -> Result<f64> {
    check_endpoint(b)?;
    let h = b / n as f64;
    let s: f64 = (1..n)
        .map(|i| {
            let x = i as f64 * h;
            let v = pow(x, gamma) * f(x);
            v * v
        })
        .sum();
    Ok(sqrt(h * s))
}

/// Thomas solve of `(-u_{i-1} + 2u_i - u_{i+1}) / h^2 + u_i = r_i` with zero
/// boundary values.
fn solve_dirichlet(rhs: &[f64], h: f64) -> Vec<f64> {
    let n = rhs.len();
    let off = -1.0 / (h * h);
    let diag = 2.0 / (h * h) + 1.0;
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let (ci, di) = if i == 0 {
            (off / diag, rhs[0] / diag)
        } else {
            let denom = diag - off * c[i - 1];
            (off / denom, (rhs[i] - off * d[i - 1]) / denom)
        };
        c.push(ci);
        d.push(di);
    }
    let mut u = d;
    for i in (0..n.saturating_sub(1)).rev() {
        u[i] -= c[i] * u[i + 1];
    }
    u
}

fn discrete_h1(u: &[f64], h: f64) -> f64 {
    let mut s = 0.0;
    let mut prev = 0.0;
    for &v in u.iter().chain(core::iter::once(&0.0)) {
        let d = (v - prev) / h;
        s += d * d;
        prev = v;
    }
    let l2: f64 = u.iter().map(|v| v * v).sum();
    sqrt(h * (s + l2))
}

/// Weighted norm of the given order. Order `1` requires `df`.
pub fn weighted_norm(
    f: impl Fn(f64) -> f64,
    df: Option<&dyn Fn(f64) -> f64>,
    order: SobolevOrder,
    gamma: f64,
    b: f64,
    breaks: &[f64],
) -> Result<f64> {
    match order {
        SobolevOrder::Zero => weighted_l2(f, gamma, b, breaks, DEFAULT_REL_TOL),
        SobolevOrder::One => {
            let df = df.ok_or(Error::InvalidArgument {
                name: "df",
                reason: "the order-one norm needs the derivative",
            })?;
            weighted_h1(f, df, gamma, b, breaks, DEFAULT_REL_TOL)
        }
        SobolevOrder::MinusOne => weighted_h_minus1(f, gamma, b, DEFAULT_DUAL_INTERVALS),
    }
}
