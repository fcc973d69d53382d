use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    /// Closed-form CES utility maximizer.
    CesRational,
    /// Inverse-price budget split with seeded noise on the share.
    BasicHeuristic,
    /// Uniform expenditure share; a power baseline for the metrics.
    RandomUniform,
    /// Weighted blend of a domain rule and choice-time GARP consistency.
    Specialist,
    /// A child process speaking the line-delimited JSON protocol.
    External,
}

impl AgentKind {
    pub fn name(&self) -> &'static str {
        match self {
            AgentKind::CesRational => "ces_rational",
            AgentKind::BasicHeuristic => "basic_heuristic",
            AgentKind::RandomUniform => "random_uniform",
            AgentKind::Specialist => "specialist",
            AgentKind::External => "external",
        }
    }
}

/// `u(x) = (a·x_A^r + (1 − a)·x_B^r)^(1/r)`, Cobb-Douglas at `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CesPreferences {
    #[serde(default = "half")]
    pub share: f64,
    #[serde(default)]
    pub exponent: f64,
}

fn half() -> f64 {
    0.5
}

impl Default for CesPreferences {
    fn default() -> Self {
        CesPreferences {
            share: 0.5,
            exponent: 0.0,
        }
    }
}

/// The specialist's local rule: the share the risky good should receive.
///
/// The risky good is avoided entirely when it is either relatively
/// expensive (`p_risky / p_safe > ratio_threshold`) or a high-reward bargain
/// (`p_risky / p_safe < bargain_threshold`); otherwise it receives
/// `share_cap` of the budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainRule {
    #[serde(default = "DomainRule::default_ratio")]
    pub ratio_threshold: f64,
    #[serde(default = "DomainRule::default_bargain")]
    pub bargain_threshold: f64,
    #[serde(default = "half")]
    pub share_cap: f64,
    /// Index of the risky good (0 = A, 1 = B).
    #[serde(default)]
    pub risky_good: usize,
}

impl DomainRule {
    fn default_ratio() -> f64 {
        2.0
    }
    fn default_bargain() -> f64 {
        0.5
    }

    /// Target expenditure share on good A under these prices.
    pub fn target_share(&self, prices: &[f64]) -> f64 {
        let risky = self.risky_good;
        let safe = 1 - risky;
        let relative = prices[risky] / prices[safe];
        let risky_share = if relative > self.ratio_threshold || relative < self.bargain_threshold {
            0.0
        } else {
            self.share_cap
        };
        if risky == 0 {
            risky_share
        } else {
            1.0 - risky_share
        }
    }

    /// `1 − (share − target)²`.
    pub fn local_value(&self, prices: &[f64], share: f64) -> f64 {
        let d = share - self.target_share(prices);
        1.0 - d * d
    }
}

impl Default for DomainRule {
    fn default() -> Self {
        DomainRule {
            ratio_threshold: 2.0,
            bargain_threshold: 0.5,
            share_cap: 0.5,
            risky_good: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalCommand {
    pub program: String,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default = "ExternalCommand::default_timeout")]
    pub timeout_ms: u64,
}

impl ExternalCommand {
    fn default_timeout() -> u64 {
        30_000
    }
}

/// A simulated subject: its decision policy and every parameter the policy
/// reads. Fields a kind does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentProfile {
    pub label: String,
    pub kind: AgentKind,
    #[serde(default)]
    pub ces: CesPreferences,
    /// Specialization weight on the domain objective.
    #[serde(default)]
    pub alpha: f64,
    /// Specialization level; sets how much of the deliberation budget goes
    /// to refining the domain rule instead of checking consistency.
    #[serde(default = "half")]
    pub level: f64,
    /// Candidate points evaluated per round.
    #[serde(default = "AgentProfile::default_deliberation")]
    pub deliberation_budget: usize,
    /// Minimum acceptable consistency score; 0 disables the constraint.
    #[serde(default)]
    pub g_threshold: f64,
    #[serde(default)]
    pub domain_rule: DomainRule,
    /// Standard deviation of the heuristic's share noise.
    #[serde(default = "AgentProfile::default_noise")]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external: Option<ExternalCommand>,
}

impl AgentProfile {
    pub const DEFAULT_DELIBERATION: usize = 256;

    fn default_deliberation() -> usize {
        Self::DEFAULT_DELIBERATION
    }
    fn default_noise() -> f64 {
        0.1
    }

    pub fn new(label: impl Into<String>, kind: AgentKind) -> Self {
        AgentProfile {
            label: label.into(),
            kind,
            ces: CesPreferences::default(),
            alpha: 0.0,
            level: 0.5,
            deliberation_budget: Self::DEFAULT_DELIBERATION,
            g_threshold: 0.0,
            domain_rule: DomainRule::default(),
            noise: Self::default_noise(),
            seed: 0,
            external: None,
        }
    }

    pub fn ces_rational(label: impl Into<String>, share: f64, exponent: f64) -> Self {
        let mut p = Self::new(label, AgentKind::CesRational);
        p.ces = CesPreferences { share, exponent };
        p
    }

    pub fn specialist(label: impl Into<String>, alpha: f64, level: f64) -> Self {
        let mut p = Self::new(label, AgentKind::Specialist);
        p.alpha = alpha;
        p.level = level;
        p
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Candidate points diverted to the domain rule: `round(level · budget)`.
    pub fn domain_points(&self) -> usize {
        ((self.level * self.deliberation_budget as f64).round() as usize).min(self.deliberation_budget)
    }

    /// Candidate points left for consistency checking.
    pub fn consistency_points(&self) -> usize {
        self.deliberation_budget - self.domain_points()
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{}: {name} must lie in [0, 1], got {v}", self.label)))
            }
        };
        unit("alpha", self.alpha)?;
        unit("level", self.level)?;
        unit("g_threshold", self.g_threshold)?;
        unit("ces.share", self.ces.share)?;
        unit("domain_rule.share_cap", self.domain_rule.share_cap)?;
        if self.ces.exponent >= 1.0 || !self.ces.exponent.is_finite() {
            return Err(Error::Config(format!("{}: ces.exponent must be < 1, got {}", self.label, self.ces.exponent)));
        }
        if self.deliberation_budget == 0 {
            return Err(Error::Config(format!("{}: deliberation_budget must be at least 1", self.label)));
        }
        let rule = &self.domain_rule;
        if !(rule.ratio_threshold > 0.0 && rule.bargain_threshold >= 0.0 && rule.bargain_threshold <= rule.ratio_threshold) {
            return Err(Error::Config(format!(
                "{}: domain_rule thresholds must satisfy 0 <= bargain_threshold <= ratio_threshold, ratio_threshold > 0",
                self.label
            )));
        }
        if rule.risky_good > 1 {
            return Err(Error::Config(format!("{}: domain_rule.risky_good must be 0 or 1", self.label)));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::Config(format!("{}: noise must be non-negative", self.label)));
        }
        if self.kind == AgentKind::External && self.external.is_none() {
            return Err(Error::Config(format!("{}: external agents need an `external` command", self.label)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deliberation_split() {
        let p = AgentProfile::specialist("s", 0.5, 0.25);
        assert_eq!(p.domain_points(), 64);
        assert_eq!(p.consistency_points(), 192);
        let p = AgentProfile::specialist("s", 0.5, 1.0);
        assert_eq!(p.domain_points(), 256);
        assert_eq!(p.consistency_points(), 0);
    }

    #[test]
    fn target_share_regimes() {
        let rule = DomainRule::default();
        assert_eq!(rule.target_share(&[4.0, 1.0]), 0.0);
        assert_eq!(rule.target_share(&[1.0, 1.0]), 0.5);
        assert_eq!(rule.target_share(&[2.0, 1.0]), 0.5);
        assert_eq!(rule.target_share(&[0.2, 1.0]), 0.0);
        let b_risky = DomainRule { risky_good: 1, ..rule };
        assert_eq!(b_risky.target_share(&[1.0, 4.0]), 1.0);
        assert_eq!(rule.local_value(&[1.0, 1.0], 0.5), 1.0);
        assert_eq!(rule.local_value(&[4.0, 1.0], 0.5), 0.75);
    }

    #[test]
    fn validation() {
        assert!(AgentProfile::specialist("s", 1.5, 0.5).validate().is_err());
        assert!(AgentProfile::ces_rational("c", 0.5, 1.0).validate().is_err());
        assert!(AgentProfile::ces_rational("c", 0.5, -2.0).validate().is_ok());
        assert!(AgentProfile::new("x", AgentKind::External).validate().is_err());
    }

    #[test]
    fn toml_profile_defaults() {
        let p: AgentProfile = toml::from_str("label = \"bio\"\nkind = \"specialist\"\nalpha = 1.0\n").unwrap();
        assert_eq!(p.kind, AgentKind::Specialist);
        assert_eq!(p.deliberation_budget, 256);
        assert_eq!(p.domain_rule, DomainRule::default());
        assert_eq!(p.level, 0.5);
    }
}
