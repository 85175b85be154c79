//! CSV and JSON result files.
//!
//! Every experiment writes the same pair of files from a base path:
//! `<base>.csv` holds a header row and one row per grid point, and
//! `<base>.json` holds
//!
//! ```text
//! { "schema_version", "suite_version", "experiment",
//!   "config": {...resolved configuration...},
//!   "rows": [...same fields as the CSV, null for not-applicable...],
//!   "metadata": {...} }
//! ```
//!
//! Floats are written in shortest round-trip form (at most 17 significant
//! digits), so files reproduce the in-memory values exactly. Not-applicable
//! CSV cells are written as `NA`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{Error, Result, SCHEMA_VERSION};

/// A row type with a fixed CSV layout.
pub trait Tabular: Serialize {
    const COLUMNS: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), fmt_f64)
}

pub fn csv_string<R: Tabular>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::COLUMNS)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Serialize)]
pub struct Document<'a, C, R, M> {
    pub schema_version: u32,
    pub suite_version: &'static str,
    pub experiment: &'a str,
    pub config: &'a C,
    pub rows: &'a [R],
    pub metadata: &'a M,
}

impl<'a, C: Serialize, R: Serialize, M: Serialize> Document<'a, C, R, M> {
    pub fn new(experiment: &'a str, config: &'a C, rows: &'a [R], metadata: &'a M) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite_version: env!("CARGO_PKG_VERSION"),
            experiment,
            config,
            rows,
            metadata,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// `base` with any `.csv`/`.json` extension replaced by each of the two.
pub fn output_paths(base: &Path) -> (PathBuf, PathBuf) {
    let stem = match base.extension().and_then(|e| e.to_str()) {
        Some("csv") | Some("json") => base.with_extension(""),
        _ => base.to_path_buf(),
    };
    let mut csv = stem.clone().into_os_string();
    csv.push(".csv");
    let mut json = stem.into_os_string();
    json.push(".json");
    (csv.into(), json.into())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `<base>.csv` and `<base>.json`; returns their paths.
pub fn write_outputs<C, R, M>(base: &Path, doc: &Document<'_, C, R, M>) -> Result<(PathBuf, PathBuf)>
where
    C: Serialize,
    R: Tabular,
    M: Serialize,
{
    let (csv_path, json_path) = output_paths(base);
    write_file(&csv_path, &csv_string(doc.rows)?)?;
    write_file(&json_path, &doc.to_json()?)?;
    Ok((csv_path, json_path))
}
