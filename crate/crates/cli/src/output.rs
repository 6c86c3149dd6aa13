//! Deterministic output writers: CSV with 17-significant-digit numeric
//! fields and `\n` line endings, and pretty JSON reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::CliError;

/// One CSV cell.
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(&'static str),
}

pub fn format_number(x: f64) -> String {
    // 17 significant digits: one leading digit plus 16 after the point
    format!("{x:.16e}")
}

pub fn csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for cell in row {
            if !first {
                out.push(',');
            }
            first = false;
            match cell {
                Cell::Int(v) => {
                    let _ = write!(out, "{v}");
                }
                Cell::Num(v) => out.push_str(&format_number(*v)),
                Cell::Text(v) => out.push_str(v),
            }
        }
        out.push('\n');
    }
    out
}

/// Writes to the path when given, otherwise to stdout.
pub fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
