//! Explicit inversion of `Phi_m` on the geometric mesh.
//!
//! With `beta_j = beta0 beta^j` the forward map becomes
//! `g(t) = sum_j a_j phi~(beta^j t)`, where `phi~ = phi - phi(L)` vanishes
//! from `L` on. Points of level `k` live in `[beta^k L, beta^{k-1} L)`, and
//! evaluating `g` at `x / beta^m` for a level-`k` point `x` touches only
//! levels `<= k`. Each level is therefore solved from the previous ones with
//! a single division by `a_m`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::forward::{interpolate, SampledSignal, Tabulated};
use crate::kernel::{GeometricMeshSpec, PhysicalParams, StepPartition};
use crate::math::{ceil, fabs, log, pow, round};

/// Default cap on the recursion depth of [`phi_recursion`].
pub const DEFAULT_MAX_DEPTH: usize = 2000;

fn geometric_spec(part: &StepPartition) -> Result<&GeometricMeshSpec> {
    part.geometric()
        .ok_or(Error::Mesh("reconstruction needs a geometric partition"))
}

/// The normalized, offset current
/// `g(t) = (I(t^2 / beta0^2) - I(L_m^2)) / (J0 F(c0))` on `[0, beta0 L_m]`,
/// with the limit value 0 at the right end.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalG {
    times: Vec<f64>,
    values: Vec<f64>,
    i_end: f64,
    scale: f64,
    beta0: f64,
    t_end: f64,
    interpolation_bound: f64,
}

impl SignalG {
    /// `g(t)`; errors outside `[0, beta0 L_m]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        ensure_finite("t", t)?;
        if t < 0.0 || t > self.t_end * (1.0 + 1e-12) {
            return Err(Error::Domain { name: "t", value: t });
        }
        if t >= self.t_end {
            return Ok(0.0);
        }
        let s = t / self.beta0;
        let i = interpolate(&self.times, &self.values, s * s);
        Ok((i - self.i_end) / self.scale)
    }

    /// Right end `beta0 L_m` of the domain.
    pub fn domain_end(&self) -> f64 {
        self.t_end
    }

    /// `I(L_m^2) / (J0 F(c0))`, the constant linking `phi~` and `int rho`.
    pub fn offset(&self) -> f64 {
        self.i_end / self.scale
    }

    /// Bound on the interpolation error of `g`, valid when the underlying
    /// current is monotone: the largest normalized jump between consecutive
    /// samples that touch `[0, L_m^2]`.
    pub fn interpolation_bound(&self) -> f64 {
        self.interpolation_bound
    }
}

/// Builds `g` from a sampled current. The samples must start at `t = 0` and
/// reach `L_m^2`.
pub fn g_from_signal(sig: &SampledSignal, part: &StepPartition, pp: &PhysicalParams) -> Result<SignalG> {
    let spec = geometric_spec(part)?;
    let lm = part.l_m();
    let required = lm * lm;
    let times = sig.times();
    if times.is_empty() {
        return Err(Error::Coverage {
            start: f64::NAN,
            end: f64::NAN,
            required,
        });
    }
    let (start, end) = (times[0], times[times.len() - 1]);
    if start > 0.0 || end < required * (1.0 - 1e-12) {
        return Err(Error::Coverage { start, end, required });
    }
    let i_end = interpolate(times, sig.values(), required);
    let scale = pp.j0() * part.f_c0();

    let mut bound: f64 = 0.0;
    for i in 1..times.len() {
        if times[i - 1] >= required {
            break;
        }
        bound = bound.max(fabs(sig.values()[i] - sig.values()[i - 1]));
    }

    Ok(SignalG {
        times: times.to_vec(),
        values: sig.values().to_vec(),
        i_end,
        scale,
        beta0: spec.beta0(),
        t_end: spec.beta0() * lm,
        interpolation_bound: bound / scale,
    })
}

/// `g` computed directly from a cumulative function:
/// `g(t) = sum_j a_j phi(min(L, beta^j t)) - phi(L)`.
pub fn g_exact(phi: impl Fn(f64) -> f64, t: f64, part: &StepPartition) -> Result<f64> {
    let spec = geometric_spec(part)?;
    let l = part.length();
    let mut s = 0.0;
    let mut b = 1.0;
    for a in part.weights() {
        b *= spec.beta();
        s += a * phi((b * t).min(l));
    }
    Ok(s - phi(l))
}

/// Level `k*(x) = ceil(ln(x/L) / ln beta)`, so that
/// `x in [beta^k L, beta^{k-1} L)`. Ratios within `1e-9` of an integer are
/// snapped, so points built as `beta^{k-1}` times a base point land on their
/// intended level.
pub fn level_index(x: f64, l: f64, beta: f64) -> Result<usize> {
    ensure_finite("x", x)?;
    if !(x > 0.0 && x < l) {
        return Err(Error::Domain { name: "x", value: x });
    }
    let r = log(x / l) / log(beta);
    let nearest = round(r);
    let k = if fabs(r - nearest) < 1e-9 { nearest } else { ceil(r) };
    Ok((k as usize).max(1))
}

/// Value at level `k + 1` from the values at levels `1..=k` of the same base
/// point, given `g` at the level's argument:
/// `(g - sum_{l} a_{l - k + m - 1} v_l) / a_m`, the sum running over
/// `max(1, k - m + 2) <= l <= k`.
fn next_level(g_value: f64, prev: &[f64], a: &[f64]) -> f64 {
    let m = a.len();
    let k = prev.len();
    let first = (k + 2).saturating_sub(m).max(1);
    let mut s = g_value;
    for level in first..=k {
        s -= a[level + m - k - 2] * prev[level - 1];
    }
    s / a[m - 1]
}

/// `phi~(x) = phi_{k*(x)}(x)` by the level recursion, for `x in (0, L)`.
///
/// The chain runs through the points `x beta^{l - k*}` of levels
/// `1..=k*`, each of which lies in the support of its level.
pub fn phi_recursion(
    g: impl Fn(f64) -> Result<f64>,
    part: &StepPartition,
    x: f64,
    max_depth: usize,
) -> Result<f64> {
    let spec = geometric_spec(part)?;
    let beta = spec.beta();
    let l = part.length();
    let depth = level_index(x, l, beta)?;
    if depth > max_depth {
        return Err(Error::DepthExceeded {
            depth,
            cap: max_depth,
        });
    }
    let beta_m = pow(beta, part.m() as f64);
    let mut values = Vec::with_capacity(depth);
    for level in 1..=depth {
        let y = x / pow(beta, (depth - level) as f64);
        let gv = g(y / beta_m)?;
        let v = next_level(gv, &values, part.weights());
        values.push(v);
    }
    Ok(values[depth - 1])
}

/// How the level-1 base points in `[beta L, L)` are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseRule {
    /// `x_i = beta L + i (L - beta L) / (q + 1)`.
    Uniform,
    /// Caller-supplied points; must start at `beta L` and ascend below `L`.
    Explicit(Vec<f64>),
}

/// The mesh `P = (P_1, ..., P_p)` with `P_j = beta^{j-1} P_1`, stored level
/// by level.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionMesh {
    p: usize,
    q: usize,
    beta: f64,
    length: f64,
    base: Vec<f64>,
    points: Vec<f64>,
}

impl ReconstructionMesh {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    /// All points, level-major: `points[(k - 1) (q + 1) + s]` is point `s`
    /// of level `k`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points of level `k` (1-based).
    pub fn level(&self, k: usize) -> &[f64] {
        let n = self.q + 1;
        &self.points[(k - 1) * n..k * n]
    }
}

/// Builds the mesh for `p` levels of `q + 1` points each.
pub fn build_mesh(
    spec: &GeometricMeshSpec,
    pp: &PhysicalParams,
    p: usize,
    q: usize,
    rule: &BaseRule,
) -> Result<ReconstructionMesh> {
    if p == 0 {
        return Err(Error::InvalidArgument {
            name: "p",
            reason: "at least one level is required",
        });
    }
    if q == 0 {
        return Err(Error::InvalidArgument {
            name: "q",
            reason: "at least two points per level are required",
        });
    }
    let beta = spec.beta();
    let l = pp.length();
    let x0 = beta * l;
    let base = match rule {
        BaseRule::Uniform => {
            let h = (l - x0) / (q + 1) as f64;
            (0..=q).map(|i| if i == 0 { x0 } else { x0 + i as f64 * h }).collect::<Vec<_>>()
        }
        BaseRule::Explicit(pts) => {
            if pts.len() != q + 1 {
                return Err(Error::InvalidArgument {
                    name: "base",
                    reason: "explicit base must have q + 1 points",
                });
            }
            if pts[0] != x0 {
                return Err(Error::Mesh("explicit base must start at beta L"));
            }
            for w in pts.windows(2) {
                if !(w[1] > w[0]) {
                    return Err(Error::Mesh("explicit base must be strictly ascending"));
                }
            }
            if !(pts[q] < l) {
                return Err(Error::Mesh("explicit base must stay below L"));
            }
            pts.clone()
        }
    };

    let mut points = Vec::with_capacity(p * (q + 1));
    points.extend_from_slice(&base);
    for k in 1..p {
        let prev = (k - 1) * (q + 1);
        for s in 0..=q {
            points.push(beta * points[prev + s]);
        }
    }
    if points.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Mesh("mesh points underflowed to zero"));
    }
    Ok(ReconstructionMesh {
        p,
        q,
        beta,
        length: l,
        base,
        points,
    })
}

fn check_mesh(mesh: &ReconstructionMesh, part: &StepPartition) -> Result<GeometricMeshSpec> {
    let spec = *geometric_spec(part)?;
    if spec.beta() != mesh.beta || part.length() != mesh.length {
        return Err(Error::Mesh("mesh and partition disagree on beta or L"));
    }
    Ok(spec)
}

/// Arguments `P / beta^m` at which `g` is sampled, aligned with the mesh.
pub fn g_arguments(mesh: &ReconstructionMesh, part: &StepPartition) -> Result<Vec<f64>> {
    let spec = check_mesh(mesh, part)?;
    let beta_m = pow(spec.beta(), part.m() as f64);
    Ok(mesh.points.iter().map(|x| x / beta_m).collect())
}

/// The vector `G`, aligned with the mesh points, by the level recursion.
pub fn reconstruct_g(
    g: impl Fn(f64) -> Result<f64>,
    mesh: &ReconstructionMesh,
    part: &StepPartition,
) -> Result<Vec<f64>> {
    let args = g_arguments(mesh, part)?;
    let n = mesh.q + 1;
    let mut out = vec![0.0; args.len()];
    let mut chain = Vec::with_capacity(mesh.p);
    for s in 0..n {
        chain.clear();
        for k in 0..mesh.p {
            let gv = g(args[k * n + s])?;
            let v = next_level(gv, &chain, part.weights());
            chain.push(v);
            out[k * n + s] = v;
        }
    }
    Ok(out)
}

/// Reconstructed density on the mesh, sorted by abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    /// Mesh abscissae, ascending.
    pub x: Vec<f64>,
    /// Clamped forward differences, `max(dG/dx, 0)`.
    pub y: Vec<f64>,
    /// Forward differences before the clamp.
    pub raw_diff: Vec<f64>,
    /// `G` at `x`.
    pub phi_tilde: Vec<f64>,
    /// Constant with `int_0^x rho = phi~(x) + offset`.
    pub offset: f64,
    /// Right end of the last difference interval, where `phi~ = 0`.
    pub length: f64,
}

impl DensityEstimate {
    /// `phi~(x) + offset` at the mesh points.
    pub fn cumulative(&self) -> Vec<f64> {
        self.phi_tilde.iter().map(|v| v + self.offset).collect()
    }

    /// Number of mesh intervals where the positivity clamp was active.
    pub fn clamped_count(&self) -> usize {
        self.raw_diff.iter().filter(|&&d| d < 0.0).count()
    }

    /// Cumulative function of the clamped density, as a piecewise-linear
    /// table on `0, x_1, ..., x_n, L`. On `[0, x_1)` the density is taken
    /// constant so that the mass up to `x_1` matches `phi~(x_1) + offset`
    /// (or zero, if that is negative).
    pub fn clamped_cumulative(&self) -> Result<Tabulated> {
        let n = self.x.len();
        let mut xs = Vec::with_capacity(n + 2);
        let mut ys = Vec::with_capacity(n + 2);
        xs.push(0.0);
        ys.push(0.0);
        let mut acc = (self.phi_tilde[0] + self.offset).max(0.0);
        for s in 0..n {
            xs.push(self.x[s]);
            ys.push(acc);
            let right = if s + 1 < n { self.x[s + 1] } else { self.length };
            acc += self.y[s] * (right - self.x[s]);
        }
        xs.push(self.length);
        ys.push(acc);
        Tabulated::new(xs, ys)
    }
}

/// Forward differences of `G` with the positivity clamp. The last point is
/// differenced against `phi~(L) = 0`, so `x` and `y` have equal length.
pub fn density_from_g(mesh: &ReconstructionMesh, g_vec: &[f64], offset: f64) -> Result<DensityEstimate> {
    if g_vec.len() != mesh.points.len() {
        return Err(Error::InvalidArgument {
            name: "G",
            reason: "length differs from the mesh",
        });
    }
    let mut pairs: Vec<(f64, f64)> = mesh.points.iter().copied().zip(g_vec.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pairs.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Mesh("mesh points are not distinct"));
        }
    }
    let n = pairs.len();
    let l = mesh.length;
    let mut raw_diff = Vec::with_capacity(n);
    for s in 0..n {
        let (x0, g0) = pairs[s];
        let (x1, g1) = if s + 1 < n { pairs[s + 1] } else { (l, 0.0) };
        raw_diff.push((g1 - g0) / (x1 - x0));
    }
    Ok(DensityEstimate {
        x: pairs.iter().map(|p| p.0).collect(),
        y: raw_diff.iter().map(|d| d.max(0.0)).collect(),
        raw_diff,
        phi_tilde: pairs.iter().map(|p| p.1).collect(),
        offset,
        length: l,
    })
}

/// Dense lower-triangular matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    n: usize,
    data: Vec<f64>,
}

impl LowerTriangular {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// True when every entry above the diagonal is exactly zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| self.row(i)[i + 1..].iter().all(|&v| v == 0.0))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `ln |det A|` and the sign of `det A`.
    pub fn log_abs_det(&self) -> (f64, f64) {
        let mut sign = 1.0;
        let mut acc = 0.0;
        for i in 0..self.n {
            let d = self.get(i, i);
            if d < 0.0 {
                sign = -sign;
            }
            acc += log(fabs(d));
        }
        (acc, sign)
    }

    /// `det A`; may underflow for large dimensions, see [`Self::log_abs_det`].
    pub fn det(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).product()
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i)[..=i].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Forward substitution.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(Error::InvalidArgument {
                name: "rhs",
                reason: "length differs from the matrix dimension",
            });
        }
        let mut x = vec![0.0; self.n];
        for i in 0..self.n {
            let row = self.row(i);
            let mut s = rhs[i];
            for j in 0..i {
                s -= row[j] * x[j];
            }
            let d = row[i];
            if d == 0.0 {
                return Err(Error::Convergence("singular triangular matrix"));
            }
            x[i] = s / d;
        }
        Ok(x)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| (j..self.n).map(|i| fabs(self.get(i, j))).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `||A||_1 ||A^{-1}||_1`, with the inverse formed column by column.
    pub fn condition_1(&self) -> Result<f64> {
        let mut inv_norm: f64 = 0.0;
        let mut e = vec![0.0; self.n];
        for j in 0..self.n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            inv_norm = inv_norm.max(col.iter().map(|v| fabs(*v)).sum());
        }
        Ok(self.norm_1() * inv_norm)
    }
}

/// Matrix of the discretized forward map on the mesh: the row of point
/// `(k, s)` holds `a_j` in the column of the mesh point `beta^j P_{k,s} / beta^m`.
/// Arguments at or beyond `L` hit `phi~ = 0` and contribute no column.
pub fn assemble_matrix(mesh: &ReconstructionMesh, part: &StepPartition) -> Result<LowerTriangular> {
    let spec = check_mesh(mesh, part)?;
    let beta = spec.beta();
    let m = part.m();
    let a = part.weights();
    let n = mesh.points.len();
    let per = mesh.q + 1;
    let l = mesh.length;
    let args = g_arguments(mesh, part)?;
    let mut data = vec![0.0; n * n];
    for k in 0..mesh.p {
        for s in 0..per {
            let row = k * per + s;
            let t = args[row];
            for j in 1..=m {
                let point = pow(beta, j as f64) * t;
                if point >= l * (1.0 - 1e-12) {
                    continue;
                }
                // Level (0-based) of the matching mesh point.
                let level = (k + j) as isize - m as isize;
                if level < 0 {
                    return Err(Error::Mesh("argument below L has no level"));
                }
                let col = level as usize * per + s;
                let target = mesh.points[col];
                if fabs(target - point) > 1e-10 * target {
                    return Err(Error::Mesh("argument does not land on a mesh point"));
                }
                data[row * n + col] += a[j - 1];
            }
        }
    }
    Ok(LowerTriangular { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::geometric_partition;

    fn setup(m: usize) -> (PhysicalParams, StepPartition) {
        let pp = PhysicalParams::default();
        let spec = GeometricMeshSpec::new(0.8, 1.0, m).unwrap();
        (pp, geometric_partition(&spec, &pp).unwrap())
    }

    #[test]
    fn level_index_examples() {
        assert_eq!(level_index(0.8, 1.0, 0.8).unwrap(), 1);
        assert_eq!(level_index(0.64, 1.0, 0.8).unwrap(), 2);
        assert_eq!(level_index(0.99, 1.0, 0.8).unwrap(), 1);
        assert_eq!(level_index(0.7999, 1.0, 0.8).unwrap(), 2);
        assert!(level_index(1.0, 1.0, 0.8).is_err());
        assert!(level_index(0.0, 1.0, 0.8).is_err());
    }

    #[test]
    fn mesh_shape() {
        let (pp, _) = setup(3);
        let spec = GeometricMeshSpec::new(0.8, 1.0, 3).unwrap();
        let mesh = build_mesh(&spec, &pp, 1, 4, &BaseRule::Uniform).unwrap();
        assert_eq!(mesh.points(), mesh.base());
        assert_eq!(mesh.base()[0], 0.8);
        let mesh = build_mesh(&spec, &pp, 3, 2, &BaseRule::Uniform).unwrap();
        assert_eq!(mesh.len(), 9);
        for k in 2..=3 {
            for (a, b) in mesh.level(k).iter().zip(mesh.level(k - 1)) {
                assert_eq!(*a, 0.8 * b);
            }
        }
        assert!(build_mesh(&spec, &pp, 0, 2, &BaseRule::Uniform).is_err());
        assert!(build_mesh(&spec, &pp, 2, 0, &BaseRule::Uniform).is_err());
        assert!(build_mesh(&spec, &pp, 2, 1, &BaseRule::Explicit(vec![0.8, 1.0])).is_err());
        assert!(build_mesh(&spec, &pp, 2, 1, &BaseRule::Explicit(vec![0.81, 0.9])).is_err());
        assert!(build_mesh(&spec, &pp, 2, 1, &BaseRule::Explicit(vec![0.8, 0.9])).is_ok());
    }

    #[test]
    fn zero_g_gives_zero_g_vector() {
        let (pp, part) = setup(4);
        let mesh = build_mesh(part.geometric().unwrap(), &pp, 6, 3, &BaseRule::Uniform).unwrap();
        let g = reconstruct_g(|_| Ok(0.0), &mesh, &part).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn small_matrix_structure() {
        let (pp, part) = setup(2);
        let mesh = build_mesh(part.geometric().unwrap(), &pp, 1, 1, &BaseRule::Uniform).unwrap();
        let a = assemble_matrix(&mesh, &part).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_lower_triangular());
        let am = part.weights()[1];
        assert_eq!(a.diagonal(), vec![am, am]);
        assert!((a.det() - am * am).abs() < 1e-15);
    }

    #[test]
    fn recursion_reproduces_linear_phi() {
        let (pp, part) = setup(3);
        // phi(x) = x on [0, L]; phi~ = x - 1.
        let phi = |x: f64| x;
        let g = |t: f64| g_exact(phi, t, &part);
        for x in [0.95, 0.8, 0.5, 0.3, 0.1, 0.01] {
            let v = phi_recursion(g, &part, x, DEFAULT_MAX_DEPTH).unwrap();
            assert!((v - (x - 1.0)).abs() < 1e-8, "x = {x}: {v}");
        }
        let mesh = build_mesh(part.geometric().unwrap(), &pp, 5, 3, &BaseRule::Uniform).unwrap();
        let gv = reconstruct_g(g, &mesh, &part).unwrap();
        for (x, v) in mesh.points().iter().zip(&gv) {
            assert!((v - (x - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn recursion_depth_cap() {
        let (_, part) = setup(2);
        let g = |t: f64| g_exact(|x| x, t, &part);
        assert!(matches!(
            phi_recursion(g, &part, 1e-6, 10),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn matrix_solve_matches_recursion() {
        let (pp, part) = setup(5);
        let mesh = build_mesh(part.geometric().unwrap(), &pp, 9, 4, &BaseRule::Uniform).unwrap();
        let g = |t: f64| g_exact(|x| x * x * (3.0 - x), t, &part);
        let gv = reconstruct_g(g, &mesh, &part).unwrap();
        let rhs: Vec<f64> = g_arguments(&mesh, &part)
            .unwrap()
            .iter()
            .map(|&t| g(t).unwrap())
            .collect();
        let a = assemble_matrix(&mesh, &part).unwrap();
        let sol = a.solve(&rhs).unwrap();
        for (x, y) in gv.iter().zip(&sol) {
            assert!((x - y).abs() < 1e-12);
        }
        let back = a.matvec(&gv);
        for (x, y) in back.iter().zip(&rhs) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn density_of_identity_and_constant() {
        let (pp, part) = setup(3);
        let mesh = build_mesh(part.geometric().unwrap(), &pp, 4, 3, &BaseRule::Uniform).unwrap();
        let ident: Vec<f64> = mesh.points().iter().map(|x| x - 1.0).collect();
        let est = density_from_g(&mesh, &ident, 1.0).unwrap();
        assert!(est.y.iter().all(|&y| (y - 1.0).abs() < 1e-12));
        assert!(est.x.windows(2).all(|w| w[0] < w[1]));
        let cum = est.cumulative();
        for (x, c) in est.x.iter().zip(&cum) {
            assert!((x - c).abs() < 1e-12);
        }
        let constant = vec![0.0; mesh.len()];
        let est = density_from_g(&mesh, &constant, 0.0).unwrap();
        assert!(est.y.iter().all(|&y| y == 0.0));
    }

    #[test]
    fn clamp_retains_raw_differences() {
        let (pp, part) = setup(2);
        let mesh = build_mesh(part.geometric().unwrap(), &pp, 1, 1, &BaseRule::Uniform).unwrap();
        let est = density_from_g(&mesh, &[-0.1, -0.5], 0.5).unwrap();
        assert!(est.raw_diff[0] < 0.0);
        assert_eq!(est.y[0], 0.0);
        assert_eq!(est.clamped_count(), 1);
        let cum = est.clamped_cumulative().unwrap();
        assert_eq!(cum.ys()[0], 0.0);
        assert!((cum.ys()[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn signal_coverage_and_values() {
        let (pp, part) = setup(2);
        let lm2 = part.l_m() * part.l_m();
        let short = SampledSignal::new(vec![0.0, lm2 * 0.5], vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            g_from_signal(&short, &part, &pp),
            Err(Error::Coverage { .. })
        ));
        let late = SampledSignal::new(vec![0.1, lm2], vec![0.0, 1.0]).unwrap();
        assert!(g_from_signal(&late, &part, &pp).is_err());
        let sig = SampledSignal::new(vec![0.0, lm2, 2.0 * lm2], vec![0.0, 0.8, 0.8]).unwrap();
        let g = g_from_signal(&sig, &part, &pp).unwrap();
        assert!((g.eval(0.0).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(g.eval(g.domain_end()).unwrap(), 0.0);
        assert!((g.offset() - 1.0).abs() < 1e-15);
        assert!(g.eval(g.domain_end() * 1.1).is_err());
        assert!((g.interpolation_bound() - 1.0).abs() < 1e-15);
    }
}
