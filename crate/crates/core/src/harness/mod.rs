//! Experiment orchestration and reporting.

pub mod analyze;
pub mod experiment;
pub mod output;
pub mod protocol;
pub mod reference;
pub mod report;

pub use analyze::{analyze_dataset, analyze_reader, DatasetAnalysis};
pub use experiment::{
    run_experiment, AgentEntry, AgentResults, ExperimentConfig, ExperimentResults, Provenance, SessionMetrics,
    SessionOutcome,
};
pub use output::{load_results, write_results};
pub use reference::{reference_benchmark, ReferenceRow, REFERENCE_MARKER};
pub use report::{aggregate_report, export_report, ReportFormat, ReportRow, RationalityReport};
