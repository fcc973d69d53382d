//! Rounds, bundles and datasets, plus the line-oriented dataset file format.
//!
//! A dataset file has one header line and one observation per line:
//!
//! ```text
//! round,p_A,p_B,budget,x_A,x_B
//! 1,1,2,9,1,4
//! 2,2,1,9,4,1
//! ```
//!
//! With more than two goods the columns are `p_1..p_n` and `x_1..x_n`; the
//! good count is read off the header. Numbers are written with the shortest
//! decimal text that parses back to the same `f64`, so a save/load cycle is
//! bit-exact.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantities of each good, all non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bundle(Vec<f64>);

impl Bundle {
    pub fn new(quantities: Vec<f64>) -> Result<Self> {
        if quantities.len() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: quantities.len(),
            });
        }
        for (k, q) in quantities.iter().enumerate() {
            if !q.is_finite() || *q < 0.0 {
                return Err(Error::Validation(format!(
                    "quantity of good {} must be finite and non-negative, got {q}",
                    k + 1
                )));
            }
        }
        Ok(Bundle(quantities))
    }

    pub fn quantities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|q| *q == 0.0)
    }
}

/// Cost of `bundle` at `prices`: the dot product of the two vectors.
pub fn expenditure(prices: &[f64], bundle: &Bundle) -> Result<f64> {
    if prices.len() != bundle.len() {
        return Err(Error::Dimension {
            expected: prices.len(),
            found: bundle.len(),
        });
    }
    Ok(dot(prices, bundle.quantities()))
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, x)| p * x).sum()
}

pub(crate) fn check_prices(prices: &[f64]) -> Result<()> {
    for (k, p) in prices.iter().enumerate() {
        if !p.is_finite() || *p <= 0.0 {
            return Err(Error::Validation(format!(
                "price of good {} must be finite and positive, got {p}",
                k + 1
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_budget(budget: f64) -> Result<()> {
    if !budget.is_finite() || budget <= 0.0 {
        return Err(Error::Validation(format!(
            "budget must be finite and positive, got {budget}"
        )));
    }
    Ok(())
}

/// One round: the prices faced, the budget, and the bundle chosen.
///
/// Overspending is not rejected here; [`validate`] reports it. The
/// revealed-preference relations only use observed expenditure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    prices: Vec<f64>,
    budget: f64,
    choice: Bundle,
}

impl Observation {
    pub fn new(prices: Vec<f64>, budget: f64, choice: Vec<f64>) -> Result<Self> {
        Self::from_bundle(prices, budget, Bundle::new(choice)?)
    }

    pub fn from_bundle(prices: Vec<f64>, budget: f64, choice: Bundle) -> Result<Self> {
        if prices.len() != choice.len() {
            return Err(Error::Dimension {
                expected: prices.len(),
                found: choice.len(),
            });
        }
        check_prices(&prices)?;
        check_budget(budget)?;
        Ok(Observation {
            prices,
            budget,
            choice,
        })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn choice(&self) -> &Bundle {
        &self.choice
    }

    pub fn good_count(&self) -> usize {
        self.prices.len()
    }

    /// Observed expenditure `p·x`.
    pub fn spent(&self) -> f64 {
        dot(&self.prices, self.choice.quantities())
    }

    /// Price of this round's prices applied to another bundle.
    pub fn cost_of(&self, other: &Bundle) -> f64 {
        dot(&self.prices, other.quantities())
    }
}

/// An ordered, non-empty sequence of observations over the same goods.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceDataset {
    label: String,
    good_count: usize,
    observations: Vec<Observation>,
}

impl ChoiceDataset {
    pub fn new(label: impl Into<String>, observations: Vec<Observation>) -> Result<Self> {
        let first = observations.first().ok_or(Error::EmptyDataset)?;
        let good_count = first.good_count();
        for obs in &observations {
            if obs.good_count() != good_count {
                return Err(Error::Dimension {
                    expected: good_count,
                    found: obs.good_count(),
                });
            }
        }
        Ok(ChoiceDataset {
            label: label.into(),
            good_count,
            observations,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn good_count(&self) -> usize {
        self.good_count
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// A new dataset made of the observations at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut picked = Vec::with_capacity(indices.len());
        for &i in indices {
            let obs = self.observations.get(i).ok_or_else(|| {
                Error::Domain(format!("observation index {i} out of range 0..{}", self.len()))
            })?;
            picked.push(obs.clone());
        }
        ChoiceDataset::new(self.label.clone(), picked)
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

fn header_for(good_count: usize) -> String {
    let names: Vec<String> = if good_count == 2 {
        vec!["A".into(), "B".into()]
    } else {
        (1..=good_count).map(|k| k.to_string()).collect()
    };
    let mut cols = vec!["round".to_string()];
    cols.extend(names.iter().map(|n| format!("p_{n}")));
    cols.push("budget".into());
    cols.extend(names.iter().map(|n| format!("x_{n}")));
    cols.join(",")
}

/// Column names for a dataset with `good_count` goods, following the
/// header the file format requires.
pub fn column_names(good_count: usize) -> Vec<String> {
    header_for(good_count).split(',').map(str::to_string).collect()
}

fn parse_header(line: &str) -> Result<(usize, Vec<String>)> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    if cols.first() != Some(&"round") {
        return Err(Error::parse(1, "round", "header must start with `round`"));
    }
    if cols.len() < 6 || !(cols.len() - 2).is_multiple_of(2) {
        return Err(Error::parse(
            1,
            "header",
            format!("expected round, n prices, budget, n quantities; got {} columns", cols.len()),
        ));
    }
    let n = (cols.len() - 2) / 2;
    if cols[n + 1] != "budget" {
        return Err(Error::parse(1, cols[n + 1], "expected `budget` column"));
    }
    for k in 0..n {
        let p = cols[1 + k];
        let x = cols[n + 2 + k];
        let p_name = p
            .strip_prefix("p_")
            .ok_or_else(|| Error::parse(1, p, "price columns must be named p_<good>"))?;
        let x_name = x
            .strip_prefix("x_")
            .ok_or_else(|| Error::parse(1, x, "quantity columns must be named x_<good>"))?;
        if p_name != x_name {
            return Err(Error::parse(1, x, format!("quantity column does not match price column {p}")));
        }
    }
    Ok((n, cols.iter().map(|c| c.to_string()).collect()))
}

fn parse_number(line: usize, field: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, field, format!("not a number: `{text}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, field, "value must be finite"));
    }
    Ok(v)
}

/// Read a dataset from `source`, labelling it `label`.
///
/// Errors name the offending line (1-based, header is line 1) and column.
pub fn load_dataset<R: Read>(source: R, label: &str) -> Result<ChoiceDataset> {
    let reader = BufReader::new(source);
    let mut lines = reader.lines().enumerate();
    let (n, cols) = match lines.next() {
        None => return Err(Error::parse(1, "header", "file is empty")),
        Some((_, line)) => {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                return Err(Error::parse(1, "header", "missing header line"));
            }
            parse_header(line)?
        }
    };

    let mut observations = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::parse(
                lineno,
                "record",
                format!("expected {} fields, found {}", cols.len(), fields.len()),
            ));
        }
        fields[0]
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(lineno, "round", format!("not a round number: `{}`", fields[0])))?;

        let mut prices = Vec::with_capacity(n);
        for k in 0..n {
            let p = parse_number(lineno, &cols[1 + k], fields[1 + k])?;
            if p <= 0.0 {
                return Err(Error::parse(lineno, &cols[1 + k], format!("price must be positive, got {p}")));
            }
            prices.push(p);
        }
        let budget = parse_number(lineno, "budget", fields[n + 1])?;
        if budget <= 0.0 {
            return Err(Error::parse(lineno, "budget", format!("budget must be positive, got {budget}")));
        }
        let mut quantities = Vec::with_capacity(n);
        for k in 0..n {
            let col = &cols[n + 2 + k];
            let x = parse_number(lineno, col, fields[n + 2 + k])?;
            if x < 0.0 {
                return Err(Error::parse(lineno, col, format!("quantity must be non-negative, got {x}")));
            }
            quantities.push(x);
        }
        observations.push(
            Observation::new(prices, budget, quantities)
                .map_err(|e| Error::parse(lineno, "record", e.to_string()))?,
        );
    }
    if observations.is_empty() {
        return Err(Error::parse(1, "record", "dataset has no observations"));
    }
    ChoiceDataset::new(label, observations)
}

/// Write `dataset` in the dataset file format.
pub fn save_dataset<W: Write>(dataset: &ChoiceDataset, mut sink: W) -> Result<()> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut out = String::with_capacity(32 * (dataset.len() + 1));
    out.push_str(&header_for(dataset.good_count()));
    out.push('\n');
    for (t, obs) in dataset.observations().iter().enumerate() {
        out.push_str(&(t + 1).to_string());
        for p in obs.prices() {
            out.push(',');
            out.push_str(&p.to_string());
        }
        out.push(',');
        out.push_str(&obs.budget().to_string());
        for x in obs.choice().quantities() {
            out.push(',');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationFlags {
    pub underspend: bool,
    pub overspend: bool,
    pub zero_bundle: bool,
}

impl ObservationFlags {
    pub fn any(&self) -> bool {
        self.underspend || self.overspend || self.zero_bundle
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub flags: Vec<ObservationFlags>,
    pub underspend_count: usize,
    pub overspend_count: usize,
    pub zero_bundle_count: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.underspend_count == 0 && self.overspend_count == 0 && self.zero_bundle_count == 0
    }
}

/// Flag rounds whose expenditure falls outside `budget × (1 ± tolerance)`,
/// and rounds where nothing was bought.
pub fn validate(dataset: &ChoiceDataset, tolerance: f64) -> ValidationReport {
    let flags: Vec<ObservationFlags> = dataset
        .observations()
        .iter()
        .map(|obs| {
            let spent = obs.spent();
            ObservationFlags {
                underspend: spent < obs.budget() * (1.0 - tolerance),
                overspend: spent > obs.budget() * (1.0 + tolerance),
                zero_bundle: obs.choice().is_zero(),
            }
        })
        .collect();
    ValidationReport {
        tolerance,
        underspend_count: flags.iter().filter(|f| f.underspend).count(),
        overspend_count: flags.iter().filter(|f| f.overspend).count(),
        zero_bundle_count: flags.iter().filter(|f| f.zero_bundle).count(),
        flags,
    }
}
