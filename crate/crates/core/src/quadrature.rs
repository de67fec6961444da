//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.
//!
//! Segments are bisected in order of decreasing error estimate until the
//! summed estimate meets the requested tolerance. Callers with known kinks or
//! jumps pass them as breakpoints so every initial panel is smooth. Ties in
//! the error heap are broken by insertion order, so results are reproducible
//! bit for bit.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math::{fabs, pow};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208977235767,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_segments: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = fabs(err);
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = pow(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor > scaled {
            scaled = floor;
        }
    }
    scaled
}

/// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = fabs(res_k);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (fabs(f1) + fabs(f2));
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (fabs(f1) + fabs(f2));
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * fabs(fc - mean);
    for j in 0..10 {
        res_asc += WGK[j] * (fabs(fv1[j] - mean) + fabs(fv2[j] - mean));
    }
    let abs_half = fabs(half);
    let err = (res_k - res_g) * half;
    (
        res_k * half,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    )
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Estimate> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrates `f` over `[points[0], points[last]]`, using every listed point as
/// an initial panel boundary. `points` must be nondecreasing; zero-width
/// panels are skipped.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: QuadOptions,
) -> Result<Estimate> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument {
            name: "points",
            reason: "need at least two panel boundaries",
        });
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "points",
            reason: "panel boundaries must be finite",
        });
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument {
            name: "points",
            reason: "panel boundaries must be nondecreasing",
        });
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut evaluations = 0usize;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error) = kronrod21(&mut f, w[0], w[1]);
        evaluations += 21;
        total += value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            seq,
        });
        seq += 1;
    }

    let target = |total: f64| opts.abs_tol.max(opts.rel_tol * fabs(total));
    while total_err > target(total) {
        if heap.len() >= opts.max_segments {
            return Err(Error::Quadrature {
                achieved: total_err,
                requested: target(total),
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Segment is at floating-point resolution; nothing left to gain.
            heap.push(worst);
            return Err(Error::Quadrature {
                achieved: total_err,
                requested: target(total),
            });
        }
        let (v1, e1) = kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, worst.b);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            seq,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            seq: seq + 1,
        });
        seq += 2;
    }

    // Re-sum in panel order to remove drift from the running updates.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}
