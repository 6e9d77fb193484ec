//! CSV reading and writing shared by the command-line tool and the tests.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{PiteError, Result};
use crate::hamiltonians::Spectrum;

/// Fixed 17-significant-digit rendering; non-finite values become `-inf`,
/// `inf` or `nan`. Every output re-parses to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Inverse of [`format_number`].
pub fn parse_number(s: &str) -> Option<f64> {
    match s.trim() {
        "-inf" => Some(f64::NEG_INFINITY),
        "inf" => Some(f64::INFINITY),
        "nan" => Some(f64::NAN),
        t => t.parse().ok(),
    }
}

/// Maps a CSV write failure; I/O problems keep their kind.
pub(crate) fn csv_write_error(e: csv::Error) -> PiteError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => PiteError::io("<output>", io),
        other => PiteError::Internal(format!("{other:?}")),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> PiteError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => PiteError::io(path, io),
        other => PiteError::config(path.display().to_string(), format!("{other:?}")),
    }
}

/// Eigenvalues and optional weights from a CSV with header
/// `index,eigenvalue[,weight]` (0-based index, rows in any order).
pub fn read_spectrum_file(path: &Path) -> Result<(Spectrum, Option<Vec<f64>>)> {
    let rows = read_columns(path, &["index", "eigenvalue"], Some("weight"))?;
    let eigenvalues: Vec<f64> = rows.iter().map(|r| r.1[0]).collect();
    let weights = rows[0]
        .2
        .is_some()
        .then(|| rows.iter().map(|r| r.2.unwrap_or(0.0)).collect());
    let spec = Spectrum::from_eigenvalues(eigenvalues)
        .map_err(|e| PiteError::config(path.display().to_string(), e.to_string()))?;
    Ok((spec, weights))
}

/// Weights from a CSV with an `index` and a `weight` column.
pub fn read_weights_file(path: &Path) -> Result<Vec<f64>> {
    let rows = read_columns(path, &["index", "weight"], None)?;
    Ok(rows.iter().map(|r| r.1[0]).collect())
}

type Row = (usize, Vec<f64>, Option<f64>);

/// Reads the required columns (after `index`) and one optional column,
/// sorted by index; indices must be exactly `0..n`.
fn read_columns(path: &Path, required: &[&str], optional: Option<&str>) -> Result<Vec<Row>> {
    let field = path.display().to_string();
    let file = File::open(path).map_err(|e| PiteError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let cols: Vec<usize> = required
        .iter()
        .map(|name| {
            find(name).ok_or_else(|| PiteError::config(&field, format!("missing column `{name}`")))
        })
        .collect::<Result<_>>()?;
    let opt = optional.and_then(find);

    let mut rows: Vec<Row> = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let get = |c: usize| -> Result<f64> {
            rec.get(c).and_then(parse_number).ok_or_else(|| {
                PiteError::config(&field, format!("bad number on data row {}", line + 1))
            })
        };
        let index = rec[cols[0]].parse::<usize>().map_err(|_| {
            PiteError::config(&field, format!("bad index on data row {}", line + 1))
        })?;
        let values = cols[1..].iter().map(|&c| get(c)).collect::<Result<_>>()?;
        let extra = opt.map(get).transpose()?;
        rows.push((index, values, extra));
    }
    if rows.is_empty() {
        return Err(PiteError::config(&field, "file has no data rows"));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(PiteError::config(
            &field,
            "indices must be 0..n without gaps",
        ));
    }
    Ok(rows)
}

/// Writes `index,eigenvalue,weight`.
pub fn write_spectrum_csv<W: Write>(out: W, spec: &Spectrum, weights: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = csv_write_error;
    w.write_record(["index", "eigenvalue", "weight"])
        .map_err(io)?;
    for (i, (l, p)) in spec.eigenvalues().iter().zip(weights).enumerate() {
        w.write_record([i.to_string(), format_number(*l), format_number(*p)])
            .map_err(io)?;
    }
    w.flush().map_err(|e| PiteError::io("<output>", e))
}

/// Creates `path` (and missing parent directories) for writing.
pub fn create_file(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| PiteError::io(dir, e))?;
    }
    File::create(path).map_err(|e| PiteError::io(path, e))
}
