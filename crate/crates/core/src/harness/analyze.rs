//! Standalone scoring of a dataset file.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use serde::Serialize;

use crate::choice::{load_dataset, validate, ValidationReport};
use crate::efficiency::{ccei, EfficiencyIndex, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::preference::{check_level, garp_violations, ViolationReport};
use crate::rank::{decision_series, DecisionSeries};

/// Relative tolerance used to flag under- and overspending.
pub const SPEND_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetAnalysis {
    pub label: String,
    pub rounds: usize,
    pub good_count: usize,
    pub efficiency_level: f64,
    /// Violations at `efficiency_level`.
    pub garp: ViolationReport,
    pub ccei: EfficiencyIndex,
    pub series: DecisionSeries,
    pub validation: ValidationReport,
}

/// Scores the dataset at `path` at `e = 1`. The label is the file stem.
pub fn analyze_dataset(path: impl AsRef<Path>) -> Result<DatasetAnalysis> {
    let path = path.as_ref();
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset").to_string();
    analyze_reader(BufReader::new(File::open(path).map_err(|e| Error::io_at(path, e))?), &label, 1.0)
}

pub fn analyze_reader<R: Read>(source: R, label: &str, e: f64) -> Result<DatasetAnalysis> {
    check_level(e)?;
    let data = load_dataset(source, label)?;
    Ok(DatasetAnalysis {
        label: label.to_string(),
        rounds: data.len(),
        good_count: data.good_count(),
        efficiency_level: e,
        garp: garp_violations(&data, e)?,
        ccei: ccei(&data, DEFAULT_TOLERANCE)?,
        series: decision_series(&data),
        validation: validate(&data, SPEND_TOLERANCE),
    })
}
