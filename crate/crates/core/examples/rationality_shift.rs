//! Sweeps the specialist's weight on its domain rule and prints how GARP
//! violations and CCEI respond.
//!
//! ```bash
//! cargo run --release --example rationality_shift -- 100
//! ```

use rationality::harness::{run_experiment, AgentEntry, ExperimentConfig};
use rationality::rank::spearman_values;
use rationality::sim::{AgentProfile, RiskRegime, SessionConfig};

fn main() -> rationality::Result<()> {
    let sessions: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let alphas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let agents = alphas
        .iter()
        .map(|&a| AgentEntry::new(AgentProfile::specialist(format!("alpha={a}"), a, 0.5), sessions))
        .collect();
    let cfg = ExperimentConfig::new(SessionConfig::with_risk(RiskRegime::High, 0), agents, 2024);
    let results = run_experiment(&cfg)?;

    println!("{:>6}  {:>10}  {:>9}  {:>9}", "alpha", "mean GARP", "mean CCEI", "fallbacks");
    let mut ccei = Vec::new();
    for (alpha, agent) in alphas.iter().zip(&results.agents) {
        let m: Vec<_> = agent.sessions.iter().filter_map(|s| s.metrics.as_ref()).collect();
        let garp = m.iter().map(|m| m.garp_violations).sum::<usize>() as f64 / m.len() as f64;
        let mean = m.iter().map(|m| m.ccei).sum::<f64>() / m.len() as f64;
        let fallbacks: usize = m.iter().map(|m| m.fallback_rounds).sum();
        ccei.push(mean);
        println!("{alpha:>6.2}  {garp:>10.2}  {mean:>9.4}  {fallbacks:>9}");
    }
    println!("Spearman(alpha, mean CCEI) = {:.4}", spearman_values(&alphas, &ccei)?);
    Ok(())
}
