//! Attaches a decision maker running in a separate process. This example
//! re-launches itself with `--serve` as the child; any program that speaks
//! the line-delimited JSON protocol can take its place.
//!
//! ```bash
//! cargo run --example external_agent
//! ```

use std::io;

use rationality::harness::protocol::serve;
use rationality::harness::{run_experiment, AgentEntry, ExperimentConfig};
use rationality::sim::{AgentKind, AgentProfile, ExternalCommand, SessionConfig};

fn main() -> rationality::Result<()> {
    if std::env::args().any(|a| a == "--serve") {
        let agent = AgentProfile::new("child", AgentKind::BasicHeuristic).with_seed(9);
        serve(&agent, io::stdin().lock(), io::stdout().lock())?;
        return Ok(());
    }

    let mut remote = AgentProfile::new("child process", AgentKind::External);
    remote.external = Some(ExternalCommand {
        program: std::env::current_exe()?.to_string_lossy().into_owned(),
        args: vec!["--serve".into()],
        timeout_ms: 5_000,
    });
    let cfg = ExperimentConfig::new(SessionConfig::default(), vec![AgentEntry::new(remote, 3)], 1);
    let results = run_experiment(&cfg)?;
    for s in &results.agents[0].sessions {
        match (&s.metrics, &s.failure) {
            (Some(m), _) => println!(
                "session {}: GARP {}, CCEI {:.4}, rho {:?}",
                s.index, m.garp_violations, m.ccei, m.spearman
            ),
            (None, Some(f)) => println!("session {} failed: {f}", s.index),
            _ => unreachable!(),
        }
    }
    Ok(())
}
