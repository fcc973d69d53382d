//! Per-round decision statistics and Spearman rank correlation.

use serde::{Deserialize, Serialize};

use crate::choice::ChoiceDataset;
use crate::error::{Error, Result};

/// One value per round, in round order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionSeries {
    pub label: String,
    pub values: Vec<f64>,
}

impl DecisionSeries {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        DecisionSeries {
            label: label.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Expenditure share on the first good in each round; 0 when nothing was
/// spent.
pub fn decision_series(dataset: &ChoiceDataset) -> DecisionSeries {
    let values = dataset
        .observations()
        .iter()
        .map(|obs| {
            let total = obs.spent();
            if total > 0.0 {
                obs.prices()[0] * obs.choice().quantities()[0] / total
            } else {
                0.0
            }
        })
        .collect();
    DecisionSeries::new(dataset.label(), values)
}

/// Ranks starting at 1, with tied values sharing the mean of their ranks.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of the average ranks.
pub fn spearman(a: &DecisionSeries, b: &DecisionSeries) -> Result<f64> {
    spearman_values(&a.values, &b.values)
}

pub fn spearman_values(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least 2 paired values, got {}",
            a.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Domain("series contain non-finite values".into()));
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = a.len() as f64;
    // ranks always average (n + 1) / 2
    let mean = (n + 1.0) / 2.0;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        let (dx, dy) = (x - mean, y - mean);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "every value in one series is tied".into(),
        ));
    }
    Ok((cov / (va * vb).sqrt()).clamp(-1.0, 1.0))
}
