//! Rank agreement between two subjects' per-round decisions on the same
//! budget lines.
//!
//! ```bash
//! cargo run --example spearman_agreement
//! ```

use rationality::rank::{average_ranks, decision_series, spearman, spearman_values};
use rationality::sim::{generate_session, run_session, AgentKind, AgentProfile, RiskRegime, SessionConfig};

fn main() -> rationality::Result<()> {
    println!("ranks of [3, 1, 4, 1, 5]: {:?}", average_ranks(&[3.0, 1.0, 4.0, 1.0, 5.0]));
    println!("[1,2,3] vs [3,1,2]: {}", spearman_values(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0])?);
    match spearman_values(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]) {
        Ok(r) => println!("constant series: {r}"),
        Err(e) => println!("constant series: {e}"),
    }

    let tasks = generate_session(&SessionConfig::with_risk(RiskRegime::High, 42))?;
    let reference = decision_series(&run_session(&AgentProfile::ces_rational("ref", 0.5, -1.0), &tasks)?.dataset);
    for profile in [
        AgentProfile::ces_rational("same tastes", 0.5, -1.0),
        AgentProfile::ces_rational("substitutes", 0.5, 0.5),
        AgentProfile::new("heuristic", AgentKind::BasicHeuristic).with_seed(1),
        AgentProfile::new("random", AgentKind::RandomUniform).with_seed(1),
        AgentProfile::specialist("specialist", 1.0, 0.5),
    ] {
        let series = decision_series(&run_session(&profile, &tasks)?.dataset);
        match spearman(&series, &reference) {
            Ok(r) => println!("{:<12} rho = {r:+.4}", profile.label),
            Err(e) => println!("{:<12} {e}", profile.label),
        }
    }
    Ok(())
}
