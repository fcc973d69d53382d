//! One specialist decision, varying the weight on the domain rule. Shows the
//! chosen share, its domain value `L`, consistency score `G` and objective.
//!
//! ```bash
//! cargo run --example specialist_round
//! ```

use rationality::choice::Observation;
use rationality::sim::{specialist_decision, AgentProfile, RoundContext};

fn main() -> rationality::Result<()> {
    // an earlier round where good A was cheap and mostly bought
    let history = vec![Observation::new(vec![1.0, 1.0], 100.0, vec![80.0, 20.0])?];
    for prices in [[4.0, 1.0], [1.0, 1.0], [0.3, 1.0]] {
        println!("prices {prices:?}");
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let mut profile = AgentProfile::specialist("bio", alpha, 0.5);
            profile.ces.share = 0.8;
            let ctx = RoundContext::new(&prices, 100.0, &history);
            let c = specialist_decision(&ctx, &profile)?;
            println!(
                "  alpha {alpha:.2}: share {:.3}  L {:.3}  G {:.3}  objective {:.3}  bundle {:?}",
                c.share,
                c.local,
                c.consistency,
                c.objective,
                c.bundle.quantities()
            );
        }
    }

    let mut strict = AgentProfile::specialist("careful", 1.0, 0.5);
    strict.g_threshold = 1.0;
    let ctx = RoundContext::new(&[0.3, 1.0], 100.0, &history);
    let c = specialist_decision(&ctx, &strict)?;
    println!("with g_threshold 1: share {:.3}, G {:.3}, fallback {}", c.share, c.consistency, c.fallback);
    Ok(())
}
