//! Properties of the forward maps: linearity, agreement of the two `I_m`
//! paths, continuity of `Phi_m` and monotonicity of the current.

use cilia_core::analysis::inequalities::{verify_h1_continuity, verify_lp_contraction};
use cilia_core::analysis::norms::PiecewiseLinear;
use cilia_core::forward::{i_m_formula, i_m_quadrature, phi_m};
use cilia_core::kernel::{geometric_partition, partition_from_alphas};
use cilia_core::{GeometricMeshSpec, PhysicalParams, StepPartition, Tabulated};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_density(rng: &mut ChaCha8Rng, l: f64) -> Tabulated {
    let n = rng.random_range(2..15);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..l)).collect();
    xs.push(0.0);
    xs.push(l);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let ys = xs.iter().map(|_| rng.random_range(0.0..5.0)).collect();
    Tabulated::density(xs, ys).unwrap()
}

fn random_partition(rng: &mut ChaCha8Rng, pp: &PhysicalParams) -> StepPartition {
    if rng.random_bool(0.5) {
        let beta = rng.random_range(0.5..0.95);
        let m = rng.random_range(1..10);
        geometric_partition(&GeometricMeshSpec::new(beta, rng.random_range(0.5..1.5), m).unwrap(), pp).unwrap()
    } else {
        let m = rng.random_range(1..10);
        let mut alphas: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..0.99) * pp.c0()).collect();
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        partition_from_alphas(&alphas, pp).unwrap()
    }
}

fn random_pl_vanishing_at(rng: &mut ChaCha8Rng, l: f64) -> PiecewiseLinear {
    let n = rng.random_range(1..12);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..l)).collect();
    xs.push(0.0);
    xs.push(l);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let k = xs.len();
    let ys = (0..k).map(|i| if i + 1 == k { 0.0 } else { rng.random_range(-3.0..3.0) }).collect();
    PiecewiseLinear::new(xs, ys).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dilation_sum_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0, t in 0.0f64..8.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pp = PhysicalParams::default();
        let part = random_partition(&mut rng, &pp);
        let f = random_density(&mut rng, 1.0);
        let g = random_density(&mut rng, 1.0);
        let combo = phi_m(|x| a * f.value(x) + b * g.value(x), t, &part);
        let split = a * phi_m(|x| f.value(x), t, &part) + b * phi_m(|x| g.value(x), t, &part);
        prop_assert!((combo - split).abs() <= 1e-12 * (1.0 + combo.abs()));
    }

    #[test]
    fn formula_and_quadrature_paths_agree(seed in any::<u64>(), frac in 0.001f64..1.2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pp = PhysicalParams::default().with_length(rng.random_range(0.5..3.0)).unwrap();
        let part = random_partition(&mut rng, &pp);
        let rho = random_density(&mut rng, pp.length());
        let t = frac * part.l_m() * part.l_m();
        let a = i_m_formula(&rho, t, &part, &pp, 1e-12).unwrap();
        let b = i_m_quadrature(&rho, t, &part, &pp, 1e-12).unwrap();
        prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(f64::EPSILON), "{a} vs {b}");
    }
}

#[test]
fn lp_contraction_on_random_ramps() {
    let pp = PhysicalParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..50 {
        let part = random_partition(&mut rng, &pp);
        let f = random_pl_vanishing_at(&mut rng, pp.length());
        for p in [1.0, 2.0] {
            let m = verify_lp_contraction(&f, p, &part).unwrap();
            assert!(m.holds(), "case {case}, p = {p}: {m:?}");
        }
    }
}

#[test]
fn h1_continuity_on_random_smooth_phi() {
    let pp = PhysicalParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..30 {
        let part = random_partition(&mut rng, &pp);
        let c: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let w = rng.random_range(0.5..10.0);
        let phi = |x: f64| c[0] + c[1] * x + c[2] * x * x + c[3] * (w * x).sin();
        let dphi = |x: f64| c[1] + 2.0 * c[2] * x + c[3] * w * (w * x).cos();
        let m = verify_h1_continuity(phi, dphi, &[], &part, 1e-11).unwrap();
        assert!(m.holds(), "case {case}: {m:?}");
    }
}

#[test]
fn nonnegative_density_gives_nondecreasing_saturating_current() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..10 {
        let pp = PhysicalParams::default().with_length(rng.random_range(0.5..2.0)).unwrap();
        let part = random_partition(&mut rng, &pp);
        let rho = random_density(&mut rng, pp.length());
        let end = part.l_m() * part.l_m();
        let mut prev = 0.0;
        for i in 0..=200 {
            let t = end * i as f64 / 200.0;
            let v = i_m_formula(&rho, t, &part, &pp, 1e-11).unwrap();
            assert!(v >= prev - 1e-12, "t = {t}");
            prev = v;
        }
        for scale in [1.0, 1.5, 4.0] {
            let v = i_m_formula(&rho, scale * end, &part, &pp, 1e-11).unwrap();
            assert!((v - prev).abs() <= 1e-12 * prev.max(1.0));
        }
    }
}
