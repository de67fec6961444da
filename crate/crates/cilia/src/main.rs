use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cilia::commands;
use cilia::formats::{read_current, write_current};
use cilia::source::{DensitySource, ModelChoice};
use cilia::{CliError, RunConfig};

#[derive(Parser)]
#[command(name = "cilia", version, about = "Forward currents and density reconstruction for an olfactory cilium")]
struct Cli {
    /// Flat `key = value` run configuration; every key has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the current of a density; writes current.csv.
    Forward {
        /// zero, one, hill8, table:x=rho,..., or a CSV file with header x,rho.
        #[arg(long)]
        rho: String,
        /// step, exact, or poly:<degree>.
        #[arg(long, default_value = "step")]
        model: ModelChoice,
    },
    /// Recover the density from a current CSV; writes density.csv and
    /// diagnostics.json.
    Reconstruct {
        /// CSV with header t,I covering [0, L_m^2].
        current: PathBuf,
    },
    /// Stability constant, matrix determinant and collision scan; writes
    /// stability.json and lambda_profile.csv.
    Diagnose,
    /// Run a built-in example end to end.
    Demo { name: DemoName },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Hill8,
    French,
}

fn run(cli: Cli) -> Result<(), CliError> {
    cilia::init_threads()?;
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out: &Path = &cli.out;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    match cli.command {
        Command::Forward { rho, model } => {
            let rho = DensitySource::parse(&rho, cfg.hill8_a)?;
            let sig = commands::forward(&cfg, &rho, model)?;
            let path = out.join("current.csv");
            write_current(&path, &sig)?;
            println!("wrote {}", path.display());
        }
        Command::Reconstruct { current } => {
            let sig = read_current(&current)?;
            let r = commands::reconstruct(&cfg, &sig)?;
            commands::write_reconstruction(out, "", &r)?;
            println!(
                "wrote density.csv and diagnostics.json to {}; clamped intervals: {}",
                out.display(),
                r.report.clamped_count
            );
        }
        Command::Diagnose => {
            let d = commands::diagnose(&cfg)?;
            commands::write_diagnosis(out, &d)?;
            println!("wrote stability.json and lambda_profile.csv to {}", out.display());
        }
        Command::Demo { name: DemoName::Hill8 } => {
            let d = commands::demo_hill8(&cfg)?;
            commands::write_hill8(out, &d)?;
            println!(
                "hill8: max |G - phi~| = {:e}, max |rho_est - rho| = {:e}",
                d.summary.max_phi_tilde_error, d.summary.max_rho_error
            );
        }
        Command::Demo { name: DemoName::French } => {
            let d = commands::demo_french(&cfg)?;
            commands::write_french(out, &d)?;
            println!("french: {}", d.summary.note);
            println!(
                "french: max misfit {:e} vs interpolation bound {:e}, clamped intervals {}",
                d.summary.max_misfit, d.summary.tolerance, d.summary.clamped_count
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
