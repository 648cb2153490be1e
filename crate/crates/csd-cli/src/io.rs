//! CSV and JSON plumbing for the CLI.

use std::path::Path;

use serde::Serialize;

use csd::estimator::PseudoSample;

use crate::{fail, CliResult, EXIT_INPUT};

/// Read a CSV with a header row into data rows.
pub fn read_csv(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot open {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
        let row: Vec<f64> = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| {
                    fail(
                        EXIT_INPUT,
                        format!("{} row {}: {:?} is not a number", path.display(), lineno + 2, cell),
                    )
                })
            })
            .collect::<CliResult<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Write sampled points with a u1..ud header. Values carry 17 significant
/// digits so the CSV round-trips f64 exactly.
pub fn write_sample_csv(path: &Path, sample: &PseudoSample) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))?;
    let d = sample.dim();
    let header: Vec<String> = (1..=d).map(|j| format!("u{j}")).collect();
    writer
        .write_record(&header)
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    for row in sample.points() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        writer
            .write_record(&cells)
            .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    Ok(())
}

/// One-column CSV of bootstrap statistics.
pub fn write_bootstrap_csv(path: &Path, stats: &[f64]) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))?;
    writer
        .write_record(["t_star"])
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    for t in stats {
        writer
            .write_record([format!("{t:.16e}")])
            .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    Ok(())
}

/// CSV from serializable row structs (serde field names become the header).
pub fn write_csv_rows<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Pretty JSON to a file, or stdout when no path is given.
pub fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| fail(EXIT_INPUT, format!("serialization failed: {e}")))?;
    match path {
        Some(p) => std::fs::write(p, text + "\n")
            .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
