//! Flag definitions and the JSON config file they can be merged with.
//! Resolution order: command-line flag, then config-file value, then the
//! built-in default.

use clap::Args;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::CliError;

/// Values accepted through `--config`: a flat object whose keys mirror the
/// long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub s: Option<f64>,
    #[serde(rename = "N")]
    pub n_dim: Option<u32>,
    pub t: Option<String>,
    pub r: Option<String>,
    pub method: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub omega: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub lambda: Option<f64>,
    pub f: Option<String>,
    #[serde(rename = "s-list")]
    pub s_list: Option<String>,
    #[serde(rename = "t-list")]
    pub t_list: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Usage(format!("--config: cannot read {}: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("--config: invalid JSON: {e}")))
            }
        }
    }
}

/// Flags shared by the grid-based commands.
#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// Left endpoint of the interval
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Right endpoint of the interval
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Interval as "a,b" (alternative to --a/--b)
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Number of grid cells
    #[arg(long)]
    pub n: Option<usize>,
}

pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_required<T: Clone>(
    flag: Option<T>,
    file: Option<T>,
    name: &str,
) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}

pub fn parse_list(name: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect();
    match values {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "--{name}: expected a comma-separated list of numbers, got {text:?}"
        ))),
    }
}

/// Resolves the interval from `--omega` or the `--a`/`--b` pair.
pub fn resolve_interval(
    grid: &GridArgs,
    file: &FileConfig,
    default: (f64, f64),
) -> Result<(f64, f64), CliError> {
    let omega = grid.omega.clone().or_else(|| file.omega.clone());
    if omega.is_some() && (grid.a.is_some() || grid.b.is_some()) {
        return Err(CliError::Usage(
            "--omega conflicts with --a/--b; give the interval one way".into(),
        ));
    }
    if let Some(text) = omega {
        let ends = parse_list("omega", &text)?;
        if ends.len() != 2 {
            return Err(CliError::Usage(format!(
                "--omega: expected two endpoints \"a,b\", got {text:?}"
            )));
        }
        return Ok((ends[0], ends[1]));
    }
    Ok((
        pick(grid.a, file.a, default.0),
        pick(grid.b, file.b, default.1),
    ))
}

pub fn validate_s(s: f64) -> Result<f64, CliError> {
    if s > 0.0 && s < 1.0 {
        Ok(s)
    } else {
        Err(CliError::Usage(format!(
            "--s: exponent must lie strictly between 0 and 1, got {s}"
        )))
    }
}

pub fn validate_dim(n_dim: u32) -> Result<u32, CliError> {
    if (1..=3).contains(&n_dim) {
        Ok(n_dim)
    } else {
        Err(CliError::Usage(format!(
            "--N: dimension must be 1, 2 or 3, got {n_dim}"
        )))
    }
}

/// Echo of the resolved parameters, embedded in JSON reports so outputs are
/// reproducible from the file alone.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub s: f64,
    #[serde(rename = "N")]
    pub n_dim: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub seed: u64,
}
