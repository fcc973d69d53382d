//! Seeded multi-agent experiments.
//!
//! Every session index `s` gets one round sequence, shared by all agents so
//! their decisions can be compared round by round. Seeds derive from the
//! master seed with [`mix_seed`]:
//!
//! - tasks of session `s`: `mix_seed([master, TASK_STREAM, s])`
//! - agent `a` in session `s`: `mix_seed([master, a, s])`
//! - the implicit reference agent: `mix_seed([master, REFERENCE_STREAM, s])`
//!
//! Appending agents to the roster therefore leaves earlier agents' draws
//! untouched.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::choice::ChoiceDataset;
use crate::efficiency::{ccei_costs, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::preference::{relations_from_costs, transitive_closure, ExpenditureMatrix};
use crate::rank::{decision_series, spearman, DecisionSeries};
use crate::sim::profile::{AgentKind, AgentProfile};
use crate::sim::rng::mix_seed;
use crate::sim::session::run_session;
use crate::sim::task::{generate_session, RoundSpec, SessionConfig};

pub const TASK_STREAM: u64 = u64::MAX;
pub const REFERENCE_STREAM: u64 = u64::MAX - 1;

/// Label of the reference subject used when the config names none.
pub const DEFAULT_REFERENCE_LABEL: &str = "reference_ces";

fn one() -> usize {
    1
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEntry {
    #[serde(default = "one")]
    pub sessions: usize,
    #[serde(flatten)]
    pub profile: AgentProfile,
}

impl AgentEntry {
    pub fn new(profile: AgentProfile, sessions: usize) -> Self {
        AgentEntry { sessions, profile }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub master_seed: u64,
    /// Session shape; its `seed` field is ignored in favour of derived seeds.
    #[serde(default)]
    pub session: SessionConfig,
    /// Subject whose decisions every agent is rank-correlated against.
    /// Defaults to a CES maximizer (`share = 0.5`, `exponent = -1`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default = "default_tolerance")]
    pub ccei_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    pub agents: Vec<AgentEntry>,
}

impl ExperimentConfig {
    pub fn new(session: SessionConfig, agents: Vec<AgentEntry>, master_seed: u64) -> Self {
        ExperimentConfig {
            master_seed,
            session,
            reference: None,
            ccei_tolerance: DEFAULT_TOLERANCE,
            output_dir: None,
            agents,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_toml_str(&std::fs::read_to_string(path).map_err(|e| Error::io_at(path, e))?)
    }

    pub fn validate(&self) -> Result<()> {
        self.session.validate()?;
        if self.agents.is_empty() {
            return Err(Error::Config("at least one agent is required".into()));
        }
        if !(self.ccei_tolerance > 0.0 && self.ccei_tolerance < 1.0) {
            return Err(Error::Config("ccei_tolerance must lie in (0, 1)".into()));
        }
        for (i, entry) in self.agents.iter().enumerate() {
            entry.profile.validate()?;
            if entry.sessions == 0 {
                return Err(Error::Config(format!("{}: sessions must be at least 1", entry.profile.label)));
            }
            if self.agents[..i].iter().any(|e| e.profile.label == entry.profile.label) {
                return Err(Error::Config(format!("duplicate agent label `{}`", entry.profile.label)));
            }
        }
        if let Some(label) = &self.reference {
            if self.reference_index().is_none() {
                return Err(Error::Config(format!("reference `{label}` does not name a configured agent")));
            }
        }
        Ok(())
    }

    fn reference_index(&self) -> Option<usize> {
        let label = self.reference.as_ref()?;
        self.agents.iter().position(|e| &e.profile.label == label)
    }

    /// SHA-256 of the config's JSON serialization, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn task_seed(&self, session: usize) -> u64 {
        mix_seed(&[self.master_seed, TASK_STREAM, session as u64])
    }

    pub fn agent_seed(&self, agent: usize, session: usize) -> u64 {
        mix_seed(&[self.master_seed, agent as u64, session as u64])
    }

    pub fn rounds_for(&self, session: usize) -> Result<Vec<RoundSpec>> {
        generate_session(&SessionConfig {
            seed: self.task_seed(session),
            ..self.session.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMetrics {
    pub garp_violations: usize,
    pub warp_violations: usize,
    pub ccei: f64,
    /// `None` when either series is constant.
    pub spearman: Option<f64>,
    pub fallback_rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionOutcome {
    pub index: usize,
    pub task_seed: u64,
    pub agent_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<SessionMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip)]
    pub dataset: Option<ChoiceDataset>,
}

impl SessionOutcome {
    pub fn succeeded(&self) -> bool {
        self.metrics.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentResults {
    pub label: String,
    pub kind: AgentKind,
    pub sessions: Vec<SessionOutcome>,
}

impl AgentResults {
    pub fn failed(&self) -> usize {
        self.sessions.iter().filter(|s| !s.succeeded()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureCount {
    pub label: String,
    pub failed_sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub master_seed: u64,
    pub config_hash: String,
    pub seed_rule: String,
    pub rng: String,
    pub reference: String,
    pub ccei_tolerance: f64,
    pub ccei_mean: String,
    pub garp_count: String,
    pub failures: Vec<FailureCount>,
    pub total_failed_sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResults {
    pub config: ExperimentConfig,
    pub provenance: Provenance,
    pub agents: Vec<AgentResults>,
}

fn score(dataset: &ChoiceDataset, reference: Option<&DecisionSeries>, tolerance: f64) -> Result<SessionMetrics> {
    let costs = ExpenditureMatrix::new(dataset);
    let relations = transitive_closure(relations_from_costs(&costs, 1.0));
    let n = relations.size();
    let mut warp = 0;
    let mut garp = 0;
    for i in 0..n {
        for j in 0..n {
            if relations.strict(j, i) {
                warp += relations.direct(i, j) as usize;
                garp += relations.closed(i, j) as usize;
            }
        }
    }
    let index = ccei_costs(&costs, tolerance)?;
    let spearman = reference.and_then(|r| spearman(&decision_series(dataset), r).ok());
    Ok(SessionMetrics {
        garp_violations: garp,
        warp_violations: warp,
        ccei: index.value,
        spearman,
        fallback_rounds: 0,
    })
}

/// Runs every configured agent for its number of sessions and scores each
/// session. Sessions run in parallel; results are ordered by agent, then
/// session index.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResults> {
    config.validate()?;
    let max_sessions = config.agents.iter().map(|e| e.sessions).max().unwrap_or(0);
    let rounds: Vec<Vec<RoundSpec>> = (0..max_sessions).map(|s| config.rounds_for(s)).collect::<Result<_>>()?;

    let reference_index = config.reference_index();
    let reference_label = match reference_index {
        Some(i) => config.agents[i].profile.label.clone(),
        None => DEFAULT_REFERENCE_LABEL.to_string(),
    };
    let reference_series: Vec<Option<DecisionSeries>> = (0..max_sessions)
        .into_par_iter()
        .map(|s| {
            let profile = match reference_index {
                Some(i) => config.agents[i].profile.clone().with_seed(config.agent_seed(i, s)),
                None => AgentProfile::ces_rational(DEFAULT_REFERENCE_LABEL, 0.5, -1.0)
                    .with_seed(mix_seed(&[config.master_seed, REFERENCE_STREAM, s as u64])),
            };
            run_session(&profile, &rounds[s]).ok().map(|t| decision_series(&t.dataset))
        })
        .collect();

    let jobs: Vec<(usize, usize)> = config
        .agents
        .iter()
        .enumerate()
        .flat_map(|(a, e)| (0..e.sessions).map(move |s| (a, s)))
        .collect();
    let outcomes: Vec<SessionOutcome> = jobs
        .par_iter()
        .map(|&(a, s)| {
            let agent_seed = config.agent_seed(a, s);
            let profile = config.agents[a].profile.clone().with_seed(agent_seed);
            let result = run_session(&profile, &rounds[s]).and_then(|trace| {
                let mut m = score(&trace.dataset, reference_series[s].as_ref(), config.ccei_tolerance)?;
                m.fallback_rounds = trace.fallback_rounds.len();
                Ok((m, trace.dataset))
            });
            let (metrics, failure, dataset) = match result {
                Ok((m, d)) => (Some(m), None, Some(d)),
                Err(e) => (None, Some(e.to_string()), None),
            };
            SessionOutcome {
                index: s,
                task_seed: config.task_seed(s),
                agent_seed,
                metrics,
                failure,
                dataset,
            }
        })
        .collect();

    let mut outcomes = outcomes.into_iter();
    let agents: Vec<AgentResults> = config
        .agents
        .iter()
        .map(|e| AgentResults {
            label: e.profile.label.clone(),
            kind: e.profile.kind,
            sessions: outcomes.by_ref().take(e.sessions).collect(),
        })
        .collect();

    let failures: Vec<FailureCount> = agents
        .iter()
        .map(|a| FailureCount {
            label: a.label.clone(),
            failed_sessions: a.failed(),
        })
        .collect();
    let provenance = Provenance {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: config.master_seed,
        config_hash: config.hash(),
        seed_rule: "tasks: mix_seed([master, 2^64-1, session]); agent a: mix_seed([master, a, session]); \
                    mix_seed folds parts with h = splitmix64(h ^ part) from h = 0x5EED"
            .to_string(),
        rng: "ChaCha8 (rand_chacha) via seed_from_u64".to_string(),
        reference: reference_label,
        ccei_tolerance: config.ccei_tolerance,
        ccei_mean: "arithmetic mean of per-session CCEI over successful sessions".to_string(),
        garp_count: "ordered pairs (i, j) with x_i R x_j and x_j P0 x_i at e = 1, summed over sessions".to_string(),
        total_failed_sessions: failures.iter().map(|f| f.failed_sessions).sum(),
        failures,
    };
    Ok(ExperimentResults {
        config: config.clone(),
        provenance,
        agents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::task::RiskRegime;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig::new(
            SessionConfig::with_risk(RiskRegime::High, 0),
            vec![
                AgentEntry::new(AgentProfile::ces_rational("econ", 0.4, -0.5), 3),
                AgentEntry::new(AgentProfile::new("rand", AgentKind::RandomUniform), 2),
            ],
            99,
        )
    }

    #[test]
    fn toml_config() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
            master_seed = 7
            reference = "econ"

            [session]
            rounds = 10
            risk = "high"

            [[agents]]
            label = "econ"
            kind = "ces_rational"
            sessions = 4
            ces = { share = 0.3, exponent = -1.0 }

            [[agents]]
            label = "bio"
            kind = "specialist"
            alpha = 0.75
            level = 0.5
            domain_rule = { ratio_threshold = 2.0, share_cap = 0.6 }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.agents.len(), 2);
        assert_eq!(cfg.agents[0].sessions, 4);
        assert_eq!(cfg.agents[1].sessions, 1);
        assert_eq!(cfg.agents[1].profile.domain_rule.share_cap, 0.6);
        assert_eq!(cfg.session.rounds, 10);
        assert_eq!(cfg.session.budget, 100.0);
    }

    #[test]
    fn config_errors() {
        let mut cfg = small_config();
        cfg.reference = Some("nobody".into());
        assert!(cfg.validate().is_err());
        let mut cfg = small_config();
        cfg.agents[1].profile.label = "econ".into();
        assert!(cfg.validate().is_err());
        let mut cfg = small_config();
        cfg.agents[0].sessions = 0;
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::from_toml_str("agents = []").is_err());
        assert!(ExperimentConfig::from_toml_str("master_seed = \"x\"").is_err());
    }

    #[test]
    fn shape_and_seeds() {
        let cfg = small_config();
        let res = run_experiment(&cfg).unwrap();
        assert_eq!(res.agents[0].sessions.len(), 3);
        assert_eq!(res.agents[1].sessions.len(), 2);
        // shared task streams across agents
        assert_eq!(res.agents[0].sessions[1].task_seed, res.agents[1].sessions[1].task_seed);
        assert_ne!(res.agents[0].sessions[1].agent_seed, res.agents[1].sessions[1].agent_seed);
        for s in &res.agents[0].sessions {
            let m = s.metrics.as_ref().unwrap();
            assert_eq!(m.garp_violations, 0);
            assert_eq!(m.ccei, 1.0);
            assert!(m.spearman.is_some());
        }
        assert_eq!(res.provenance.total_failed_sessions, 0);
    }

    #[test]
    fn appending_agents_keeps_existing_draws() {
        let cfg = small_config();
        let mut more = cfg.clone();
        more.agents.push(AgentEntry::new(AgentProfile::new("basic", AgentKind::BasicHeuristic), 2));
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&more).unwrap();
        assert_eq!(a.agents[1], b.agents[1]);
    }

    #[test]
    fn failures_are_counted_not_fatal() {
        let mut cfg = small_config();
        let mut ext = AgentProfile::new("ghost", AgentKind::External);
        ext.external = Some(crate::sim::profile::ExternalCommand {
            program: "/nonexistent/agent".into(),
            args: vec![],
            timeout_ms: 50,
        });
        cfg.agents.push(AgentEntry::new(ext, 2));
        let res = run_experiment(&cfg).unwrap();
        assert_eq!(res.agents[2].failed(), 2);
        assert_eq!(res.provenance.total_failed_sessions, 2);
        assert!(res.agents[2].sessions[0].failure.as_ref().unwrap().contains("cannot start"));
    }

    #[test]
    fn hash_tracks_config() {
        let a = small_config();
        let mut b = a.clone();
        b.master_seed += 1;
        assert_eq!(a.hash(), small_config().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
