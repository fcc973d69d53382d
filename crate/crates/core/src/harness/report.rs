//! Subject-level aggregation and export in table, CSV and JSON form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::experiment::{ExperimentResults, Provenance};
use crate::harness::reference::{reference_benchmark, ReferenceRow, REFERENCE_MARKER};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub subject: String,
    pub kind: String,
    /// Sessions that completed; failed sessions contribute nothing.
    pub sessions: usize,
    pub failed_sessions: usize,
    pub rounds_per_session: usize,
    pub total_rounds: usize,
    pub garp_violations: usize,
    pub mean_ccei: f64,
    /// Mean over sessions where the correlation is defined.
    pub mean_spearman: Option<f64>,
    pub spearman_sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalityReport {
    pub rows: Vec<ReportRow>,
    pub reference: Vec<ReferenceRow>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

/// One row per agent with at least one successful session, followed by the
/// published reference rows.
pub fn aggregate_report(results: &ExperimentResults) -> Result<RationalityReport> {
    if results.agents.is_empty() {
        return Err(Error::Validation("no agent results to aggregate".into()));
    }
    let rounds_per_session = results.config.session.rounds;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for agent in &results.agents {
        let ok: Vec<_> = agent.sessions.iter().filter_map(|s| s.metrics.as_ref()).collect();
        if ok.is_empty() {
            warnings.push(format!(
                "{}: all {} sessions failed; row omitted",
                agent.label,
                agent.sessions.len()
            ));
            continue;
        }
        let ccei_sum: f64 = ok.iter().map(|m| m.ccei).sum();
        let rhos: Vec<f64> = ok.iter().filter_map(|m| m.spearman).collect();
        rows.push(ReportRow {
            subject: agent.label.clone(),
            kind: agent.kind.name().to_string(),
            sessions: ok.len(),
            failed_sessions: agent.sessions.len() - ok.len(),
            rounds_per_session,
            total_rounds: ok.len() * rounds_per_session,
            garp_violations: ok.iter().map(|m| m.garp_violations).sum(),
            mean_ccei: ccei_sum / ok.len() as f64,
            mean_spearman: if rhos.is_empty() {
                None
            } else {
                Some(rhos.iter().sum::<f64>() / rhos.len() as f64)
            },
            spearman_sessions: rhos.len(),
        });
    }
    Ok(RationalityReport {
        rows,
        reference: reference_benchmark(),
        provenance: results.provenance.clone(),
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format `{other}`"))),
        }
    }
}

pub fn export_report<W: Write>(report: &RationalityReport, format: ReportFormat, mut sink: W) -> Result<()> {
    match format {
        ReportFormat::Table => sink.write_all(render_table(report).as_bytes())?,
        ReportFormat::Csv => write_csv(report, &mut sink)?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, report)?;
            sink.write_all(b"\n")?;
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn load_report_json<R: Read>(source: R) -> Result<RationalityReport> {
    Ok(serde_json::from_reader(source)?)
}

const HEADERS: [&str; 5] = [
    "Subjects",
    "Total Number of Rounds",
    "Number of GARP Violations",
    "Average CCEI",
    "Average Spearman Correlation",
];

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

fn render_table(report: &RationalityReport) -> String {
    let simulated: Vec<[String; 5]> = report
        .rows
        .iter()
        .map(|r| {
            [
                r.subject.clone(),
                format!("{} × {}", r.sessions, r.rounds_per_session),
                r.garp_violations.to_string(),
                fmt4(r.mean_ccei),
                r.mean_spearman.map(fmt4).unwrap_or_else(|| "n/a".into()),
            ]
        })
        .collect();
    let published: Vec<[String; 5]> = report
        .reference
        .iter()
        .map(|r| {
            [
                r.subject.clone(),
                format!("{} × {}", r.sessions, r.rounds_per_session),
                r.garp_violations.to_string(),
                fmt4(r.mean_ccei),
                fmt4(r.mean_spearman),
            ]
        })
        .collect();

    let mut widths = HEADERS.map(|h| h.chars().count());
    for row in simulated.iter().chain(&published) {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let mut out = String::new();
        for (k, (cell, w)) in cells.iter().zip(widths).enumerate() {
            let pad = w - cell.chars().count();
            if k > 0 {
                out.push_str("  ");
            }
            if k == 0 {
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str(&" ".repeat(pad));
                out.push_str(cell);
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let rule = "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)) + "\n";

    let mut out = String::new();
    out.push_str(&line(&HEADERS.map(String::from)));
    out.push_str(&rule);
    for row in &simulated {
        out.push_str(&line(row));
    }
    out.push_str(&rule);
    out.push_str(&format!("{REFERENCE_MARKER}:\n"));
    for row in &published {
        out.push_str(&line(row));
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

fn write_csv<W: Write>(report: &RationalityReport, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record([
        "subject",
        "kind",
        "source",
        "sessions",
        "rounds_per_session",
        "total_rounds",
        "garp_violations",
        "mean_ccei",
        "mean_spearman",
        "failed_sessions",
    ])
    .map_err(csv_err)?;
    for r in &report.rows {
        w.write_record([
            r.subject.clone(),
            r.kind.clone(),
            "simulated".into(),
            r.sessions.to_string(),
            r.rounds_per_session.to_string(),
            r.total_rounds.to_string(),
            r.garp_violations.to_string(),
            r.mean_ccei.to_string(),
            r.mean_spearman.map(|v| v.to_string()).unwrap_or_default(),
            r.failed_sessions.to_string(),
        ])
        .map_err(csv_err)?;
    }
    for r in &report.reference {
        w.write_record([
            r.subject.clone(),
            String::new(),
            "published_reference".into(),
            r.sessions.to_string(),
            r.rounds_per_session.to_string(),
            (r.sessions * r.rounds_per_session).to_string(),
            r.garp_violations.to_string(),
            r.mean_ccei.to_string(),
            r.mean_spearman.to_string(),
            String::new(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
