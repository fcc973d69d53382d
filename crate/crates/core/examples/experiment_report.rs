//! Runs the desk experiment (four agent kinds, 100 high-risk sessions each),
//! writes the run directory and prints the report next to the published
//! reference rows.
//!
//! ```bash
//! cargo run --release --example experiment_report -- /tmp/desk-run
//! ```

use std::io;
use std::path::{Path, PathBuf};

use rationality::harness::{export_report, run_experiment, write_results, ExperimentConfig, ReportFormat};

fn main() -> rationality::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("desk-run"));
    let cfg = ExperimentConfig::from_path(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/desk.toml"))?;
    let results = run_experiment(&cfg)?;
    let report = write_results(&out, &results)?;
    export_report(&report, ReportFormat::Table, io::stdout().lock())?;
    println!();
    println!("config hash {}", results.provenance.config_hash);
    println!("failed sessions {}", results.provenance.total_failed_sessions);
    println!("wrote {}", out.display());
    Ok(())
}
