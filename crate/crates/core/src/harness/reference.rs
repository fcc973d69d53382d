//! Published subject-level results for the budget-allocation task.
//!
//! These rows are shown next to simulated results for orientation only.
//! They are never recomputed and never enter simulated aggregates. How the
//! violation counts were aggregated (per subject or pooled) was not
//! published.

use serde::{Deserialize, Serialize};

pub const REFERENCE_MARKER: &str = "published reference, not reproduced";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub subject: String,
    pub sessions: u32,
    pub rounds_per_session: u32,
    pub garp_violations: u32,
    pub mean_ccei: f64,
    pub mean_spearman: f64,
    pub note: String,
}

struct Published {
    subject: &'static str,
    sessions: u32,
    garp: u32,
    ccei: f64,
    spearman: f64,
}

const PUBLISHED: [Published; 6] = [
    Published { subject: "Humans", sessions: 347, garp: 50, ccei: 0.9600, spearman: -0.7500 },
    Published { subject: "GPT", sessions: 100, garp: 3, ccei: 0.8730, spearman: -0.6850 },
    Published { subject: "Basic Agent", sessions: 100, garp: 99, ccei: 0.9160, spearman: -0.4590 },
    Published { subject: "Biotech Expert Agent", sessions: 100, garp: 88, ccei: 0.1270, spearman: -0.1750 },
    Published { subject: "Economist Agent", sessions: 100, garp: 100, ccei: 0.2977, spearman: -0.3694 },
    Published { subject: "Basic Agent (new)", sessions: 100, garp: 70, ccei: 0.8500, spearman: -0.7700 },
];

/// The published rows, in publication order.
pub fn reference_benchmark() -> Vec<ReferenceRow> {
    PUBLISHED
        .iter()
        .map(|p| ReferenceRow {
            subject: p.subject.to_string(),
            sessions: p.sessions,
            rounds_per_session: 25,
            garp_violations: p.garp,
            mean_ccei: p.ccei,
            mean_spearman: p.spearman,
            note: match p.subject {
                "Humans" => format!("{REFERENCE_MARKER}; violation count aggregation unpublished"),
                "Basic Agent (new)" => format!("{REFERENCE_MARKER}; row not described in the source"),
                _ => REFERENCE_MARKER.to_string(),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_rows_verbatim() {
        let rows = reference_benchmark();
        assert_eq!(rows.len(), 6);
        let gpt = &rows[1];
        assert_eq!((gpt.subject.as_str(), gpt.garp_violations, gpt.mean_ccei), ("GPT", 3, 0.873));
        assert_eq!(rows[0].sessions, 347);
        assert_eq!(rows[3].mean_ccei, 0.127);
        assert_eq!(rows[4].mean_spearman, -0.3694);
        assert!(rows.iter().all(|r| r.note.starts_with(REFERENCE_MARKER)));
    }
}
