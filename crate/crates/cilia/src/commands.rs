//! The four subcommands as library functions. Each returns its results in
//! memory; the `write_*` companions put them on disk.

use std::path::Path;

use cilia_core::analysis::lemma::{certificate, lemma9_scan, MAX_K};
use cilia_core::analysis::stability::{analytic_c_gamma_bound, default_s_max, lambda_profile};
use cilia_core::analysis::{c_gamma, gamma0_bound, CGamma};
use cilia_core::forward::{current_at, phi_m, ForwardModel};
use cilia_core::reconstruction::{
    assemble_matrix, density_from_g, g_arguments, g_from_signal, reconstruct_g, ReconstructionMesh, SignalG,
};
use cilia_core::{Density, DensityEstimate, Hill8, PhysicalParams, PolynomialKernel, SampledSignal, StepPartition};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Auto, RunConfig};
use crate::error::{CliError, Result};
use crate::formats::{write_columns, write_current, write_density, write_json, CURRENT_HEADER};
use crate::french::FrenchParams;
use crate::source::{DensitySource, ModelChoice};

/// Number of frequencies in the written `Lambda` profile.
const PROFILE_SAMPLES: usize = 4001;
/// Number of intervals of the hill8 target table.
const TARGET_INTERVALS: usize = 300;

/// Samples a forward map on `times`, in parallel, keeping grid order.
pub fn sample_parallel<D: Density + Sync + ?Sized>(
    rho: &D,
    model: ForwardModel<'_>,
    times: &[f64],
    pp: &PhysicalParams,
    tol: f64,
) -> Result<SampledSignal> {
    let values = times
        .par_iter()
        .map(|&t| current_at(rho, model, t, pp, tol))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(SampledSignal::new(times.to_vec(), values)?)
}

/// `forward`: the current of `rho` on the configured time grid.
pub fn forward(cfg: &RunConfig, rho: &DensitySource, model: ModelChoice) -> Result<SampledSignal> {
    let pp = cfg.physical()?;
    let part = cfg.partition()?;
    let times = cfg.time_grid(&part);
    match model {
        ModelChoice::Step => sample_parallel(rho, ForwardModel::Step(&part), &times, &pp, cfg.quad_tol),
        ModelChoice::Exact => sample_parallel(rho, ForwardModel::Exact, &times, &pp, cfg.quad_tol),
        ModelChoice::Poly(m) => {
            let pk = PolynomialKernel::new(m, &pp).map_err(|e| CliError::Usage(format!("--model poly:{m}: {e}")))?;
            sample_parallel(rho, ForwardModel::Polynomial(&pk), &times, &pp, cfg.quad_tol)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixDiagnostics {
    pub dim: usize,
    /// May underflow to 0 for large meshes; see `log_abs_det`.
    pub det: f64,
    pub log_abs_det: f64,
    pub det_sign: f64,
    /// `dim ln a_m`.
    pub expected_log_det: f64,
    /// `|det / a_m^dim - 1|`, as the product of `d_i / a_m`, which neither
    /// underflows nor picks up the rounding of a long sum of logarithms.
    pub det_rel_err: f64,
    pub condition_1: f64,
}

fn matrix_diagnostics(mesh: &ReconstructionMesh, part: &StepPartition) -> Result<MatrixDiagnostics> {
    let a = assemble_matrix(mesh, part)?;
    let (log_abs_det, det_sign) = a.log_abs_det();
    let am = part.weights()[part.m() - 1];
    let expected_log_det = a.dim() as f64 * am.ln();
    let ratio: f64 = a.diagonal().iter().map(|d| d / am).product();
    Ok(MatrixDiagnostics {
        dim: a.dim(),
        det: a.det(),
        log_abs_det,
        det_sign,
        expected_log_det,
        det_rel_err: (ratio - 1.0).abs(),
        condition_1: a.condition_1()?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub beta: f64,
    pub beta0: f64,
    pub length: f64,
    /// `int_0^x rho = phi~(x) + offset`.
    pub offset: f64,
    /// Bound on the interpolation error of the normalized signal `g`.
    pub interpolation_bound: f64,
    /// Intervals where the positivity clamp was active.
    pub clamped_count: usize,
    pub matrix: MatrixDiagnostics,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub mesh: ReconstructionMesh,
    pub g: SignalG,
    pub estimate: DensityEstimate,
    pub report: ReconstructionReport,
}

/// `reconstruct`: the density behind a sampled current.
pub fn reconstruct(cfg: &RunConfig, sig: &SampledSignal) -> Result<Reconstruction> {
    if cfg.p > cfg.max_depth {
        return Err(cilia_core::Error::DepthExceeded {
            depth: cfg.p,
            cap: cfg.max_depth,
        }
        .into());
    }
    let pp = cfg.physical()?;
    let part = cfg.partition()?;
    let mesh = cfg.mesh()?;
    let g = g_from_signal(sig, &part, &pp)?;
    let gv = reconstruct_g(|t| g.eval(t), &mesh, &part)?;
    let estimate = density_from_g(&mesh, &gv, g.offset())?;
    let report = ReconstructionReport {
        p: mesh.p(),
        q: mesh.q(),
        m: part.m(),
        beta: cfg.beta,
        beta0: cfg.beta0,
        length: pp.length(),
        offset: g.offset(),
        interpolation_bound: g.interpolation_bound(),
        clamped_count: estimate.clamped_count(),
        matrix: matrix_diagnostics(&mesh, &part)?,
    };
    Ok(Reconstruction {
        mesh,
        g,
        estimate,
        report,
    })
}

pub fn write_reconstruction(out: &Path, prefix: &str, r: &Reconstruction) -> Result<()> {
    write_density(&out.join(format!("{prefix}density.csv")), &r.estimate)?;
    write_json(&out.join(format!("{prefix}diagnostics.json")), &r.report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CGammaReport {
    pub value: f64,
    pub argmin: f64,
    pub s_max: f64,
    pub spacing: f64,
    pub analytic_bound: f64,
    pub value_at_half_spacing: f64,
    pub refinement_rel_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaEntry {
    pub k: usize,
    pub collisions: usize,
    pub lhs_residue: u32,
    pub rhs_residue: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnoseReport {
    /// `null` when there is a single threshold, where every `gamma` works.
    pub gamma0_bound: Option<f64>,
    pub gamma: f64,
    pub c_gamma: CGammaReport,
    pub matrix: MatrixDiagnostics,
    pub lemma_n_max: u32,
    pub lemma: Vec<LemmaEntry>,
}

#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub report: DiagnoseReport,
    pub profile: Vec<(f64, f64)>,
}

/// `gamma`, or one above the sufficient threshold.
pub fn diagnose_gamma(cfg: &RunConfig, part: &StepPartition) -> f64 {
    match cfg.gamma {
        Auto::Value(g) => g,
        Auto::Auto => {
            let b = gamma0_bound(part);
            if b.is_finite() {
                b + 1.0
            } else {
                0.0
            }
        }
    }
}

/// `diagnose`: stability constant, matrix determinant and the collision
/// scan.
pub fn diagnose(cfg: &RunConfig) -> Result<Diagnosis> {
    let part = cfg.partition()?;
    let mesh = cfg.mesh()?;
    let gamma = diagnose_gamma(cfg, &part);
    let s_max = match cfg.s_max {
        Auto::Value(v) => v,
        Auto::Auto => default_s_max(&part),
    };
    let n = cfg.s_samples;
    let (coarse, fine): (CGamma, CGamma) = (c_gamma(gamma, &part, s_max, n)?, c_gamma(gamma, &part, s_max, 2 * n - 1)?);
    let c_report = CGammaReport {
        value: coarse.value,
        argmin: coarse.argmin,
        s_max,
        spacing: coarse.spacing,
        analytic_bound: analytic_c_gamma_bound(gamma, &part),
        value_at_half_spacing: fine.value,
        refinement_rel_change: (coarse.value - fine.value).abs() / fine.value,
    };
    let lemma = (1..=MAX_K)
        .into_par_iter()
        .map(|k| {
            let c = certificate(k);
            lemma9_scan(k, cfg.lemma_n).map(|v| LemmaEntry {
                k,
                collisions: v.len(),
                lhs_residue: c.lhs_residue,
                rhs_residue: c.rhs_residue,
            })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let b = gamma0_bound(&part);
    Ok(Diagnosis {
        report: DiagnoseReport {
            gamma0_bound: b.is_finite().then_some(b),
            gamma,
            c_gamma: c_report,
            matrix: matrix_diagnostics(&mesh, &part)?,
            lemma_n_max: cfg.lemma_n,
            lemma,
        },
        profile: lambda_profile(gamma, &part, s_max, PROFILE_SAMPLES),
    })
}

pub fn write_diagnosis(out: &Path, d: &Diagnosis) -> Result<()> {
    let (s, v): (Vec<f64>, Vec<f64>) = d.profile.iter().copied().unzip();
    write_columns(&out.join("lambda_profile.csv"), &["s", "lambda"], &[&s, &v])?;
    write_json(&out.join("stability.json"), &d.report)
}

/// Times `(t / beta0)^2` at which `g` is read on the mesh arguments `t`.
pub fn sample_times(cfg: &RunConfig, mesh: &ReconstructionMesh, part: &StepPartition) -> Result<Vec<f64>> {
    let args = g_arguments(mesh, part)?;
    Ok(args.iter().map(|a| (a / cfg.beta0) * (a / cfg.beta0)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hill8Summary {
    pub a: f64,
    pub length: f64,
    pub max_phi_tilde_error: f64,
    pub max_rho_error: f64,
    pub reconstruction: ReconstructionReport,
}

#[derive(Debug, Clone)]
pub struct Hill8Demo {
    pub target: [Vec<f64>; 3],
    pub current: SampledSignal,
    pub recon: Reconstruction,
    pub rho_true: Vec<f64>,
    pub phi_tilde_true: Vec<f64>,
    pub summary: Hill8Summary,
}

/// `demo hill8`: the sigmoidal test density on a cilium of length
/// `hill8_length`, sampled with the step model on the uniform grid merged
/// with every time the reconstruction reads, then reconstructed.
pub fn demo_hill8(cfg: &RunConfig) -> Result<Hill8Demo> {
    let cfg = cfg.with_length(cfg.hill8_length)?;
    let pp = cfg.physical()?;
    let part = cfg.partition()?;
    let mesh = cfg.mesh()?;
    let h = Hill8::new(cfg.hill8_a)?;
    let l = pp.length();

    let xs: Vec<f64> = (0..=TARGET_INTERVALS)
        .map(|i| l * i as f64 / TARGET_INTERVALS as f64)
        .collect();
    let target = [xs.clone(), xs.iter().map(|&x| h.rho(x)).collect(), xs.iter().map(|&x| h.phi(x)).collect()];

    let mut times = cfg.time_grid(&part);
    times.extend(sample_times(&cfg, &mesh, &part)?);
    times.push(part.l_m() * part.l_m());
    times.sort_by(f64::total_cmp);
    times.dedup();
    let current = sample_parallel(&h, ForwardModel::Step(&part), &times, &pp, cfg.quad_tol)?;
    let recon = reconstruct(&cfg, &current)?;

    let est = &recon.estimate;
    let rho_true: Vec<f64> = est.x.iter().map(|&x| h.rho(x)).collect();
    let phi_tilde_true: Vec<f64> = est.x.iter().map(|&x| h.phi_tilde(x, l)).collect();
    let max_abs = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    let summary = Hill8Summary {
        a: h.a(),
        length: l,
        max_phi_tilde_error: max_abs(&est.phi_tilde, &phi_tilde_true),
        max_rho_error: max_abs(&est.y, &rho_true),
        reconstruction: recon.report.clone(),
    };
    Ok(Hill8Demo {
        target,
        current,
        recon,
        rho_true,
        phi_tilde_true,
        summary,
    })
}

pub fn write_hill8(out: &Path, d: &Hill8Demo) -> Result<()> {
    write_columns(
        &out.join("hill8_target.csv"),
        &["x", "rho", "phi"],
        &[&d.target[0], &d.target[1], &d.target[2]],
    )?;
    write_current(&out.join("hill8_current.csv"), &d.current)?;
    let est = &d.recon.estimate;
    let rho_err: Vec<f64> = est.y.iter().zip(&d.rho_true).map(|(a, b)| a - b).collect();
    let phi_err: Vec<f64> = est.phi_tilde.iter().zip(&d.phi_tilde_true).map(|(a, b)| a - b).collect();
    write_columns(
        &out.join("hill8_density.csv"),
        &[
            "x",
            "rho",
            "phi_tilde",
            "phi_tilde_raw_diff",
            "rho_true",
            "phi_tilde_true",
            "rho_error",
            "phi_tilde_error",
        ],
        &[&est.x, &est.y, &est.phi_tilde, &est.raw_diff, &d.rho_true, &d.phi_tilde_true, &rho_err, &phi_err],
    )?;
    write_json(&out.join("hill8_summary.json"), &d.summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrenchSummary {
    pub note: &'static str,
    pub params: FrenchParams,
    pub length: f64,
    pub diffusivity: f64,
    pub c0: f64,
    pub min_density: f64,
    pub clamped_count: usize,
    /// Largest `|I_forward - I|` over the sample times, in current units.
    pub max_misfit: f64,
    /// Interpolation bound of `g` scaled back to current units.
    pub tolerance: f64,
    pub consistent: bool,
    pub reconstruction: ReconstructionReport,
}

#[derive(Debug, Clone)]
pub struct FrenchDemo {
    pub current: SampledSignal,
    pub recon: Reconstruction,
    pub check: Consistency,
    pub summary: FrenchSummary,
}

/// Relative slack added to the interpolation bound for rounding in the
/// forward image.
const ROUNDING_SLACK: f64 = 1e-9;

/// Forward image of a reconstruction compared with the current it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Consistency {
    /// Times at which the reconstruction read the current.
    pub times: Vec<f64>,
    pub input: Vec<f64>,
    /// Step-model current of the clamped density.
    pub image: Vec<f64>,
    pub max_misfit: f64,
    /// Interpolation bound of `g` in current units, plus rounding slack.
    pub tolerance: f64,
}

impl Consistency {
    pub fn holds(&self) -> bool {
        self.max_misfit <= self.tolerance
    }
}

/// Pushes the clamped density of `recon` through the step model at every
/// time the reconstruction read, and compares with `input`.
pub fn consistency_check(cfg: &RunConfig, recon: &Reconstruction, input: impl Fn(f64) -> f64) -> Result<Consistency> {
    let pp = cfg.physical()?;
    let part = cfg.partition()?;
    let cum = recon.estimate.clamped_cumulative()?;
    let scale = pp.j0() * part.f_c0();
    let times = sample_times(cfg, &recon.mesh, &part)?;
    let input: Vec<f64> = times.iter().map(|&t| input(t)).collect();
    let image: Vec<f64> = times.iter().map(|&t| scale * phi_m(|x| cum.value(x), t.sqrt(), &part)).collect();
    let max_misfit = input.iter().zip(&image).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let peak = input.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(Consistency {
        tolerance: recon.g.interpolation_bound() * scale + ROUNDING_SLACK * peak.max(f64::MIN_POSITIVE),
        times,
        input,
        image,
        max_misfit,
    })
}

/// `demo french`: the delayed sigmoidal current on the configured grid,
/// reconstructed, then pushed forward again through the step model.
pub fn demo_french(cfg: &RunConfig) -> Result<FrenchDemo> {
    let pp = cfg.physical()?;
    let part = cfg.partition()?;
    let times = cfg.time_grid(&part);
    let values = times.iter().map(|&t| cfg.french.current(t)).collect();
    let current = SampledSignal::new(times, values)?;
    let recon = reconstruct(cfg, &current)?;

    let check = consistency_check(cfg, &recon, |t| cfg.french.current(t))?;
    let summary = FrenchSummary {
        note: "cilium length, diffusivity and c0 are the dimensionless config values; the source gives none",
        params: cfg.french,
        length: pp.length(),
        diffusivity: pp.diffusivity(),
        c0: pp.c0(),
        min_density: recon.estimate.y.iter().copied().fold(f64::INFINITY, f64::min),
        clamped_count: recon.estimate.clamped_count(),
        max_misfit: check.max_misfit,
        tolerance: check.tolerance,
        consistent: check.holds(),
        reconstruction: recon.report.clone(),
    };
    Ok(FrenchDemo {
        current,
        recon,
        check,
        summary,
    })
}

pub fn write_french(out: &Path, d: &FrenchDemo) -> Result<()> {
    write_columns(&out.join("french_current.csv"), &CURRENT_HEADER, &[d.current.times(), d.current.values()])?;
    write_density(&out.join("french_density.csv"), &d.recon.estimate)?;
    write_columns(
        &out.join("french_consistency.csv"),
        &["t", "I", "I_forward"],
        &[&d.check.times, &d.check.input, &d.check.image],
    )?;
    write_json(&out.join("french_summary.json"), &d.summary)
}
