//! Text formats for operators, phase-space data and spectra.
//!
//! Operators are written as a line with the dimension followed by `dim²`
//! lines `re im` in row-major order, with a JSON sidecar (`<path>.json`)
//! holding the [`FockConfig`]. Everything else is CSV with a header row.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::counterexample::LevelCurve;
use crate::error::{Error, Result};
use crate::fock_rep::{FockConfig, FockOperator};
use crate::phase_space::PhasePoint;
use crate::qtranslate::DifferenceSpec;
use crate::schatten::SpectrumProfile;
use crate::transforms::{PhaseFunction, SurfaceMeasure};

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_err(path: &Path, line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}:{line}: {msg}", path.display()))
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_operator(path: &Path, op: &FockOperator) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    let m = op.matrix();
    writeln!(out, "{}", op.dim())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            writeln!(out, "{} {}", fmt_f64(z.re), fmt_f64(z.im))?;
        }
    }
    out.flush()?;
    let sidecar = serde_json::to_string_pretty(&op.config()).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(sidecar_path(path), sidecar + "\n")?;
    Ok(())
}

pub fn read_operator(path: &Path) -> Result<FockOperator> {
    let sidecar = sidecar_path(path);
    let cfg: FockConfig = serde_json::from_str(&fs::read_to_string(&sidecar)?)
        .map_err(|e| parse_err(&sidecar, e.line(), e))?;
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines().enumerate();
    let dim: usize = match lines.next() {
        Some((_, line)) => line?.trim().parse().map_err(|e| parse_err(path, 1, e))?,
        None => return Err(parse_err(path, 1, "empty operator file")),
    };
    if dim != cfg.dim() {
        return Err(Error::DimensionMismatch { expected: cfg.dim(), found: dim });
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace().map(str::parse::<f64>);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(re)), Some(Ok(im)), None) => entries.push(C64::new(re, im)),
            _ => return Err(parse_err(path, idx + 1, "expected `re im`")),
        }
    }
    if entries.len() != dim * dim {
        return Err(parse_err(path, entries.len() + 1, format!("expected {} entries, found {}", dim * dim, entries.len())));
    }
    FockOperator::from_matrix(cfg, DMatrix::from_row_slice(dim, dim, &entries))
}

fn coord_headers(n: usize) -> Vec<String> {
    let xs = (1..=n).map(|j| format!("x{j}"));
    let ys = (1..=n).map(|j| format!("y{j}"));
    xs.chain(ys).collect()
}

fn write_rows(path: &Path, header: Vec<String>, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt_f64)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Numeric rows of a CSV file with a header; every row has `width` columns.
fn read_rows(path: &Path, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(csv_err)?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        if rec.len() != width {
            return Err(parse_err(path, line, format!("expected {width} columns, found {}", rec.len())));
        }
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| parse_err(path, line, format!("{f:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_phase_function(path: &Path, f: &PhaseFunction) -> Result<()> {
    let grid = *f.grid();
    let mut header = coord_headers(grid.n());
    header.extend(["re".into(), "im".into()]);
    write_rows(
        path,
        header,
        f.values().iter().enumerate().map(|(i, v)| {
            let mut row = grid.node_coords(i);
            row.extend([v.re, v.im]);
            row
        }),
    )
}

pub fn write_points(path: &Path, points: &[PhasePoint]) -> Result<()> {
    let n = points.first().map_or(1, PhasePoint::dim);
    write_rows(path, coord_headers(n), points.iter().map(PhasePoint::coords))
}

/// Reads points in `ℝ^{2n}`.
pub fn read_points(path: &Path, n: usize) -> Result<Vec<PhasePoint>> {
    read_rows(path, 2 * n)?.iter().map(|r| PhasePoint::from_coords(r)).collect()
}

pub fn write_measure(path: &Path, mu: &SurfaceMeasure) -> Result<()> {
    let mut header = coord_headers(mu.n());
    header.push("weight".into());
    write_rows(
        path,
        header,
        mu.nodes().iter().zip(mu.weights()).map(|(z, w)| {
            let mut row = z.coords();
            row.push(*w);
            row
        }),
    )
}

pub fn read_measure(path: &Path, n: usize) -> Result<SurfaceMeasure> {
    let rows = read_rows(path, 2 * n + 1)?;
    let nodes = rows.iter().map(|r| PhasePoint::from_coords(&r[..2 * n])).collect::<Result<_>>()?;
    SurfaceMeasure::new(nodes, rows.iter().map(|r| r[2 * n]).collect())
}

pub fn write_difference_spec(path: &Path, spec: &DifferenceSpec) -> Result<()> {
    let mut header = coord_headers(spec.n());
    header.extend(["re".into(), "im".into()]);
    write_rows(
        path,
        header,
        spec.points().iter().zip(spec.coeffs()).map(|(z, c)| {
            let mut row = z.coords();
            row.extend([c.re, c.im]);
            row
        }),
    )
}

pub fn read_difference_spec(path: &Path, n: usize) -> Result<DifferenceSpec> {
    let rows = read_rows(path, 2 * n + 2)?;
    let points = rows.iter().map(|r| PhasePoint::from_coords(&r[..2 * n])).collect::<Result<_>>()?;
    DifferenceSpec::new(points, rows.iter().map(|r| C64::new(r[2 * n], r[2 * n + 1])).collect())
}

/// Fit summary written next to a spectrum CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub exponent: f64,
    pub stderr: f64,
    pub j_lo: usize,
    pub j_hi: usize,
}

/// Writes `(j, s_j)` to `csv_path` and the fit summary to `json_path`.
pub fn write_spectrum(csv_path: &Path, json_path: &Path, profile: &SpectrumProfile) -> Result<()> {
    let mut w = csv::Writer::from_path(csv_path).map_err(csv_err)?;
    w.write_record(["j", "s_j"]).map_err(csv_err)?;
    for (j, s) in profile.values.iter().enumerate() {
        w.write_record([(j + 1).to_string(), fmt_f64(*s)]).map_err(csv_err)?;
    }
    w.flush()?;
    let summary = FitSummary {
        exponent: profile.fit_exponent,
        stderr: profile.fit_stderr,
        j_lo: profile.fit_range.0,
        j_hi: profile.fit_range.1,
    };
    fs::write(json_path, serde_json::to_string_pretty(&summary).map_err(|e| Error::Parse(e.to_string()))? + "\n")?;
    Ok(())
}

pub fn write_curve(path: &Path, curve: &LevelCurve) -> Result<()> {
    write_rows(
        path,
        vec!["x".into(), "y".into(), "weight".into(), "curvature".into()],
        curve
            .nodes()
            .iter()
            .zip(curve.weights())
            .zip(curve.curvatures())
            .map(|((z, w), k)| vec![z[0], z[1], *w, *k]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{low_rank_operator, rng_from_seed};

    #[test]
    fn operator_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.op");
        let a = low_rank_operator(&FockConfig::new(2, 4).unwrap(), 2, &mut rng_from_seed(1)).unwrap();
        write_operator(&path, &a).unwrap();
        assert_eq!(read_operator(&path).unwrap(), a);
    }

    #[test]
    fn operator_reader_rejects_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.op");
        write_operator(&path, &FockOperator::identity(FockConfig::new(1, 2).unwrap())).unwrap();
        fs::write(&path, "2\n1 0\n0 0\n0 0\n").unwrap();
        assert!(matches!(read_operator(&path), Err(Error::Parse(_))));
        fs::write(&path, "3\n").unwrap();
        assert!(read_operator(&path).is_err());
        fs::write(&path, "2\n1 0\n0 x\n0 0\n1 0\n").unwrap();
        assert!(read_operator(&path).is_err());
    }

    #[test]
    fn spec_and_points_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.csv");
        let spec = crate::qtranslate::eq4_spec(2).unwrap();
        write_difference_spec(&path, &spec).unwrap();
        assert_eq!(read_difference_spec(&path, 2).unwrap(), spec);
        assert!(read_difference_spec(&path, 1).is_err());

        let pts = vec![PhasePoint::planar(0.1, -0.2), PhasePoint::planar(1.0 / 3.0, 0.0)];
        let path = dir.path().join("pts.csv");
        write_points(&path, &pts).unwrap();
        assert_eq!(read_points(&path, 1).unwrap(), pts);
    }

    #[test]
    fn measure_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mu.csv");
        let mu = SurfaceMeasure::new(vec![PhasePoint::planar(0.5, 0.25)], vec![0.75]).unwrap();
        write_measure(&path, &mu).unwrap();
        let back = read_measure(&path, 1).unwrap();
        assert_eq!(back.nodes(), mu.nodes());
        assert_eq!(back.weights(), mu.weights());
    }

    #[test]
    fn points_reader_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        fs::write(&path, "x1,y1\n0.1,0.2\n0.3,oops\n").unwrap();
        let err = read_points(&path, 1).unwrap_err().to_string();
        assert!(err.contains(":3:"), "{err}");
    }
}
