//! CSV and JSON files.
//!
//! CSV: comma-separated, `.` decimal point, mandatory header row, UTF-8, LF
//! line endings. Floats are written in shortest round-trip form, so a file
//! read back yields the same values bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cilia_core::{DensityEstimate, SampledSignal, Tabulated};
use serde::Serialize;

use crate::error::{CliError, Result};

pub const CURRENT_HEADER: [&str; 2] = ["t", "I"];
pub const DENSITY_INPUT_HEADER: [&str; 2] = ["x", "rho"];
pub const DENSITY_HEADER: [&str; 4] = ["x", "rho", "phi_tilde", "phi_tilde_raw_diff"];

fn input_err(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Reads a two-column table with the exact header `expected`.
fn read_pairs(path: &Path, expected: [&str; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = rdr.headers().map_err(|e| input_err(path, e.to_string()))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(input_err(
            path,
            format!("header must be `{}`, found `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| input_err(path, e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let parse = |i: usize| -> Result<f64> {
            let raw = &rec[i];
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| input_err(path, format!("line {line}: `{raw}` is not a finite number")))
        };
        a.push(parse(0)?);
        b.push(parse(1)?);
    }
    if a.is_empty() {
        return Err(input_err(path, "no data rows"));
    }
    Ok((a, b))
}

pub fn read_current(path: &Path) -> Result<SampledSignal> {
    let (t, i) = read_pairs(path, CURRENT_HEADER)?;
    SampledSignal::new(t, i).map_err(|e| input_err(path, e.to_string()))
}

/// Density table `x,rho`, interpolated linearly.
pub fn read_density_table(path: &Path) -> Result<Tabulated> {
    let (x, rho) = read_pairs(path, DENSITY_INPUT_HEADER)?;
    Tabulated::density(x, rho).map_err(|e| input_err(path, e.to_string()))
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

/// Writes a header and equal-length numeric columns.
pub fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    debug_assert_eq!(header.len(), columns.len());
    let rows = columns.first().map_or(0, |c| c.len());
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let csv_err = |e: csv::Error| input_err(path, e.to_string());
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err)?;
    let mut row = Vec::with_capacity(columns.len());
    for r in 0..rows {
        row.clear();
        row.extend(columns.iter().map(|c| c[r]));
        w.serialize(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_current(path: &Path, sig: &SampledSignal) -> Result<()> {
    write_columns(path, &CURRENT_HEADER, &[sig.times(), sig.values()])
}

pub fn write_density(path: &Path, est: &DensityEstimate) -> Result<()> {
    write_columns(path, &DENSITY_HEADER, &[&est.x, &est.y, &est.phi_tilde, &est.raw_diff])
}

/// Pretty-printed JSON with a trailing newline. Non-finite floats become
/// `null`.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| input_err(path, e.to_string()))?;
    w.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn current_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let sig = SampledSignal::new(vec![0.0, 0.1, 1.0 / 3.0, 1e-300 + 1.0], vec![0.0, -2.5e-17, 1e300, 0.1 + 0.2]).unwrap();
        write_current(&path, &sig).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,I\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_current(&path).unwrap(), sig);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cases = [
            ("time,I\n0,1\n", "header"),
            ("t,I\n0,abc\n", "line 2"),
            ("t,I\n0,1\n0,2\n", "increasing"),
            ("t,I\n", "no data"),
            ("t,I\n0,inf\n", "finite"),
        ];
        for (i, (text, needle)) in cases.iter().enumerate() {
            let path = dir.path().join(format!("{i}.csv"));
            std::fs::write(&path, text).unwrap();
            let e = read_current(&path).unwrap_err();
            assert_eq!(e.exit_code(), 3);
            assert!(e.to_string().contains(needle), "{text:?}: {e}");
        }
        let e = read_current(&dir.path().join("missing.csv")).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    proptest::proptest! {
        #[test]
        fn any_finite_current_round_trips(
            steps in proptest::collection::vec(1e-9f64..10.0, 1..40),
            values in proptest::collection::vec(-1e6f64..1e6, 40),
        ) {
            let mut t = 0.0;
            let times: Vec<f64> = std::iter::once(0.0).chain(steps.iter().map(|d| { t += d; t })).collect();
            let sig = SampledSignal::new(times.clone(), values[..times.len()].to_vec()).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("c.csv");
            write_current(&path, &sig).unwrap();
            proptest::prop_assert_eq!(read_current(&path).unwrap(), sig);
        }
    }
}
