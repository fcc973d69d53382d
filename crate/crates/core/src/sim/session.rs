use crate::choice::{ChoiceDataset, Observation};
use crate::error::{Error, Result};
use crate::harness::protocol::ExternalAgent;
use crate::sim::agents::{
    basic_heuristic_agent, ces_rational_agent, random_uniform_agent, specialist_decision, RoundContext,
};
use crate::sim::profile::{AgentKind, AgentProfile};
use crate::sim::task::RoundSpec;

/// A completed session and the rounds where the specialist had to ignore
/// its consistency threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionTrace {
    pub dataset: ChoiceDataset,
    pub fallback_rounds: Vec<usize>,
}

/// Plays `rounds` in order, feeding each round the observations so far.
pub fn run_session(profile: &AgentProfile, rounds: &[RoundSpec]) -> Result<SessionTrace> {
    profile.validate()?;
    if rounds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut external = match profile.kind {
        AgentKind::External => {
            let cmd = profile.external.as_ref().expect("validated above");
            Some(ExternalAgent::spawn(cmd)?)
        }
        _ => None,
    };

    let mut history: Vec<Observation> = Vec::with_capacity(rounds.len());
    let mut fallback_rounds = Vec::new();
    for spec in rounds {
        let ctx = RoundContext::new(&spec.prices, spec.budget, &history);
        let bundle = match profile.kind {
            AgentKind::CesRational => ces_rational_agent(&ctx, profile)?,
            AgentKind::BasicHeuristic => basic_heuristic_agent(&ctx, profile)?,
            AgentKind::RandomUniform => random_uniform_agent(&ctx, profile)?,
            AgentKind::Specialist => {
                let choice = specialist_decision(&ctx, profile)?;
                if choice.fallback {
                    fallback_rounds.push(ctx.round);
                }
                choice.bundle
            }
            AgentKind::External => external.as_mut().expect("spawned above").decide(&ctx)?,
        };
        history.push(Observation::from_bundle(spec.prices.clone(), spec.budget, bundle)?);
    }
    if let Some(agent) = external {
        agent.finish();
    }
    Ok(SessionTrace {
        dataset: ChoiceDataset::new(profile.label.clone(), history)?,
        fallback_rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efficiency::ccei;
    use crate::sim::task::{generate_session, RiskRegime, SessionConfig};

    #[test]
    fn length_and_determinism() {
        let rounds = generate_session(&SessionConfig::with_risk(RiskRegime::High, 5)).unwrap();
        for kind in [AgentKind::CesRational, AgentKind::BasicHeuristic, AgentKind::RandomUniform, AgentKind::Specialist] {
            let mut p = AgentProfile::new(kind.name(), kind).with_seed(77);
            p.alpha = 0.5;
            let a = run_session(&p, &rounds).unwrap();
            assert_eq!(a.dataset.len(), 25);
            assert_eq!(a, run_session(&p, &rounds).unwrap());
            for obs in a.dataset.observations() {
                assert!((obs.spent() - obs.budget()).abs() <= 1e-9 * obs.budget());
            }
        }
    }

    #[test]
    fn ces_session_is_fully_efficient() {
        let rounds = generate_session(&SessionConfig::with_risk(RiskRegime::High, 2)).unwrap();
        let trace = run_session(&AgentProfile::ces_rational("c", 0.3, -2.0), &rounds).unwrap();
        assert_eq!(ccei(&trace.dataset, 1e-6).unwrap().value, 1.0);
    }

    #[test]
    fn empty_rounds_rejected() {
        assert!(run_session(&AgentProfile::ces_rational("c", 0.5, 0.0), &[]).is_err());
    }
}
