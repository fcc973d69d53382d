//! Session generation: a fixed budget and per-round prices for goods A and B.
//!
//! Task files use the dataset layout without the choice columns:
//!
//! ```text
//! round,p_A,p_B,budget
//! 1,0.9731,1.0412,100
//! ```

use std::io::{BufRead, BufReader, Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::choice::{check_budget, check_prices};
use crate::error::{Error, Result};
use crate::sim::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RiskRegime {
    /// Prices move slightly around 1.
    #[default]
    Low,
    /// Prices move across more than an order of magnitude.
    High,
}

impl std::str::FromStr for RiskRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(RiskRegime::Low),
            "high" => Ok(RiskRegime::High),
            other => Err(Error::Config(format!("unknown risk regime `{other}` (expected low or high)"))),
        }
    }
}

fn default_rounds() -> usize {
    25
}
fn default_budget() -> f64 {
    100.0
}
fn default_low_range() -> [f64; 2] {
    [0.9, 1.1]
}
fn default_high_range() -> [f64; 2] {
    [0.2, 5.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default = "default_budget")]
    pub budget: f64,
    #[serde(default)]
    pub risk: RiskRegime,
    /// Price range `[low, high]` for the low-risk regime.
    #[serde(default = "default_low_range")]
    pub low_range: [f64; 2],
    #[serde(default = "default_high_range")]
    pub high_range: [f64; 2],
    #[serde(default)]
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            rounds: default_rounds(),
            budget: default_budget(),
            risk: RiskRegime::Low,
            low_range: default_low_range(),
            high_range: default_high_range(),
            seed: 0,
        }
    }
}

impl SessionConfig {
    pub fn with_risk(risk: RiskRegime, seed: u64) -> Self {
        SessionConfig {
            risk,
            seed,
            ..Default::default()
        }
    }

    pub fn price_range(&self) -> [f64; 2] {
        match self.risk {
            RiskRegime::Low => self.low_range,
            RiskRegime::High => self.high_range,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if !(self.budget.is_finite() && self.budget > 0.0) {
            return Err(Error::Config(format!("budget must be positive, got {}", self.budget)));
        }
        for (name, [lo, hi]) in [("low_range", self.low_range), ("high_range", self.high_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(Error::Config(format!("{name} must satisfy 0 < low <= high, got [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// Prices and budget for one round, before any choice is made.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSpec {
    pub prices: Vec<f64>,
    pub budget: f64,
}

/// Draws every price independently and uniformly from the regime's range.
pub fn generate_session(config: &SessionConfig) -> Result<Vec<RoundSpec>> {
    config.validate()?;
    let [lo, hi] = config.price_range();
    let mut stream = rng::stream(config.seed);
    let rounds = (0..config.rounds)
        .map(|_| {
            let prices = (0..2)
                .map(|_| if lo == hi { lo } else { stream.random_range(lo..=hi) })
                .collect();
            RoundSpec {
                prices,
                budget: config.budget,
            }
        })
        .collect();
    Ok(rounds)
}

pub fn save_tasks<W: Write>(rounds: &[RoundSpec], mut sink: W) -> Result<()> {
    let n = rounds.first().map(|r| r.prices.len()).ok_or(Error::EmptyDataset)?;
    let names: Vec<String> = if n == 2 {
        vec!["p_A".into(), "p_B".into()]
    } else {
        (1..=n).map(|k| format!("p_{k}")).collect()
    };
    let mut out = format!("round,{},budget\n", names.join(","));
    for (t, r) in rounds.iter().enumerate() {
        out.push_str(&(t + 1).to_string());
        for p in &r.prices {
            out.push(',');
            out.push_str(&p.to_string());
        }
        out.push(',');
        out.push_str(&r.budget.to_string());
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    Ok(())
}

pub fn load_tasks<R: Read>(source: R) -> Result<Vec<RoundSpec>> {
    let mut lines = BufReader::new(source).lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, "header", "file is empty"))??;
    let cols: Vec<String> = header.trim_end_matches('\r').split(',').map(|c| c.trim().to_string()).collect();
    if cols.len() < 4 || cols[0] != "round" || cols[cols.len() - 1] != "budget" {
        return Err(Error::parse(1, "header", "expected round,p_1..p_n,budget"));
    }
    let n = cols.len() - 2;
    let mut rounds = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(Error::parse(lineno, "record", format!("expected {} fields", cols.len())));
        }
        let num = |k: usize| -> Result<f64> {
            fields[k]
                .parse::<f64>()
                .map_err(|_| Error::parse(lineno, &cols[k], format!("not a number: `{}`", fields[k])))
        };
        let prices = (1..=n).map(num).collect::<Result<Vec<_>>>()?;
        let budget = num(n + 1)?;
        check_prices(&prices).map_err(|e| Error::parse(lineno, "prices", e.to_string()))?;
        check_budget(budget).map_err(|e| Error::parse(lineno, "budget", e.to_string()))?;
        rounds.push(RoundSpec { prices, budget });
    }
    if rounds.is_empty() {
        return Err(Error::parse(1, "record", "task file has no rounds"));
    }
    Ok(rounds)
}
