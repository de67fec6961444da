//! Density sources and forward-model choices named on the command line.

use std::path::Path;
use std::str::FromStr;

use cilia_core::{Density, Hill8, Tabulated};

use crate::error::{CliError, Result};
use crate::formats::read_density_table;

/// Where a density comes from: `zero`, `one`, `hill8`, an inline table
/// `table:x0=y0,x1=y1,...`, or a CSV file with header `x,rho`.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySource {
    Zero,
    One,
    Hill8(Hill8),
    Table(Tabulated),
}

impl DensitySource {
    /// `hill8_a` sets the scale of the builtin `hill8` density.
    pub fn parse(spec: &str, hill8_a: f64) -> Result<Self> {
        match spec {
            "zero" => return Ok(DensitySource::Zero),
            "one" => return Ok(DensitySource::One),
            "hill8" => return Ok(DensitySource::Hill8(Hill8::new(hill8_a)?)),
            _ => {}
        }
        if let Some(body) = spec.strip_prefix("table:") {
            let bad = |piece: &str| CliError::Usage(format!("table entry `{piece}` is not `x=rho`"));
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for piece in body.split(',') {
                let (x, y) = piece.split_once('=').ok_or_else(|| bad(piece))?;
                xs.push(x.trim().parse::<f64>().map_err(|_| bad(piece))?);
                ys.push(y.trim().parse::<f64>().map_err(|_| bad(piece))?);
            }
            let t = Tabulated::density(xs, ys).map_err(|e| CliError::Usage(format!("inline table: {e}")))?;
            return Ok(DensitySource::Table(t));
        }
        let path = Path::new(spec);
        if path.extension().is_some_and(|e| e == "csv") || path.exists() {
            return Ok(DensitySource::Table(read_density_table(path)?));
        }
        Err(CliError::Usage(format!(
            "unknown density source `{spec}`; expected zero, one, hill8, table:x=rho,... or a CSV path"
        )))
    }
}

impl Density for DensitySource {
    fn eval(&self, x: f64) -> f64 {
        match self {
            DensitySource::Zero => 0.0,
            DensitySource::One => 1.0,
            DensitySource::Hill8(h) => h.rho(x),
            DensitySource::Table(t) => t.value(x),
        }
    }

    fn breakpoints(&self) -> &[f64] {
        match self {
            DensitySource::Table(t) => t.xs(),
            _ => &[],
        }
    }
}

/// Forward map selected by `--model`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    /// Step kernel on the geometric partition.
    Step,
    /// Exact kernel `F(c(t, x))`.
    Exact,
    /// Taylor kernel of the given degree.
    Poly(usize),
}

impl FromStr for ModelChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "step" => Ok(ModelChoice::Step),
            "exact" => Ok(ModelChoice::Exact),
            _ => s
                .strip_prefix("poly:")
                .and_then(|m| m.parse().ok())
                .map(ModelChoice::Poly)
                .ok_or_else(|| format!("`{s}` is not one of step, exact, poly:<degree>")),
        }
    }
}
