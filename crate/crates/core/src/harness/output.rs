//! On-disk layout of an experiment run.
//!
//! ```text
//! <dir>/results.json
//! <dir>/report.json
//! <dir>/report.csv
//! <dir>/report.txt
//! <dir>/datasets/<agent label>/session_000.csv
//! ```

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::choice::save_dataset;
use crate::error::{Error, Result};
use crate::harness::experiment::ExperimentResults;
use crate::harness::report::{aggregate_report, export_report, RationalityReport, ReportFormat};

pub const RESULTS_FILE: &str = "results.json";

/// Keeps ASCII alphanumerics, `-` and `_`; everything else becomes `_`.
pub fn sanitize_label(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io_at(path, e))?))
}

/// Writes results, the aggregated report in every format, and one dataset
/// file per successful session. Returns the report.
pub fn write_results(dir: impl AsRef<Path>, results: &ExperimentResults) -> Result<RationalityReport> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut w = create(&dir.join(RESULTS_FILE))?;
    serde_json::to_writer_pretty(&mut w, results)?;
    w.write_all(b"\n")?;
    w.flush()?;

    let report = aggregate_report(results)?;
    for (name, format) in [
        ("report.json", ReportFormat::Json),
        ("report.csv", ReportFormat::Csv),
        ("report.txt", ReportFormat::Table),
    ] {
        export_report(&report, format, create(&dir.join(name))?)?;
    }

    for agent in &results.agents {
        let agent_dir: PathBuf = dir.join("datasets").join(sanitize_label(&agent.label));
        fs::create_dir_all(&agent_dir)?;
        for s in &agent.sessions {
            if let Some(data) = &s.dataset {
                let mut w = create(&agent_dir.join(format!("session_{:03}.csv", s.index)))?;
                save_dataset(data, &mut w)?;
                w.flush()?;
            }
        }
    }
    Ok(report)
}

/// Reads `results.json` from a run directory. Per-session datasets are not
/// reloaded.
pub fn load_results(dir: impl AsRef<Path>) -> Result<ExperimentResults> {
    let path = dir.as_ref().join(RESULTS_FILE);
    let file = File::open(&path).map_err(|e| Error::io_at(&path, e))?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}
