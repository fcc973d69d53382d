//! Generates a task session, writes it in the task file layout, then
//! records choices and checks them for slack and overspending.
//!
//! ```bash
//! cargo run --example task_files
//! ```

use rationality::choice::{load_dataset, save_dataset, validate, ChoiceDataset, Observation};
use rationality::sim::{generate_session, load_tasks, save_tasks, RiskRegime, SessionConfig};

fn main() -> rationality::Result<()> {
    let tasks = generate_session(&SessionConfig {
        rounds: 4,
        ..SessionConfig::with_risk(RiskRegime::Low, 3)
    })?;
    let mut file = Vec::new();
    save_tasks(&tasks, &mut file)?;
    print!("{}", String::from_utf8_lossy(&file));
    let tasks = load_tasks(&file[..])?;

    // spend everything, half, everything, and a little too much
    let spend = [1.0, 0.5, 1.0, 1.2];
    let obs = tasks
        .iter()
        .zip(spend)
        .map(|(t, f)| {
            let m = t.budget * f;
            Observation::new(t.prices.clone(), t.budget, vec![m / 2.0 / t.prices[0], m / 2.0 / t.prices[1]])
        })
        .collect::<rationality::Result<Vec<_>>>()?;
    let data = ChoiceDataset::new("log", obs)?;

    let report = validate(&data, 1e-6);
    println!(
        "underspend {}, overspend {}, zero bundles {}",
        report.underspend_count, report.overspend_count, report.zero_bundle_count
    );

    let mut out = Vec::new();
    save_dataset(&data, &mut out)?;
    assert_eq!(load_dataset(&out[..], "log")?, data);
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
