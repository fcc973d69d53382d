//! CES maximizers never violate GARP, while uniformly random choices on the
//! same budget lines usually do.
//!
//! ```bash
//! cargo run --release --example ces_baseline
//! ```

use rationality::efficiency::{ccei, DEFAULT_TOLERANCE};
use rationality::preference::garp_violations;
use rationality::sim::{generate_session, run_session, AgentKind, AgentProfile, RiskRegime, SessionConfig};

fn main() -> rationality::Result<()> {
    let profiles = [
        AgentProfile::ces_rational("cobb-douglas", 0.5, 0.0),
        AgentProfile::ces_rational("complements", 0.3, -2.0),
        AgentProfile::ces_rational("substitutes", 0.6, 0.7),
        AgentProfile::new("random", AgentKind::RandomUniform),
    ];
    for risk in [RiskRegime::Low, RiskRegime::High] {
        println!("{risk:?} risk");
        for profile in &profiles {
            let mut violating = 0;
            let mut ccei_sum = 0.0;
            for s in 0..200 {
                let tasks = generate_session(&SessionConfig::with_risk(risk, s))?;
                let data = run_session(&profile.clone().with_seed(s), &tasks)?.dataset;
                violating += (garp_violations(&data, 1.0)?.garp_count() > 0) as usize;
                ccei_sum += ccei(&data, DEFAULT_TOLERANCE)?.value;
            }
            println!(
                "  {:<13} sessions with violations {violating:>3}/200, mean CCEI {:.4}",
                profile.label,
                ccei_sum / 200.0
            );
        }
    }
    Ok(())
}
