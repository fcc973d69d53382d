//! The two-round dataset where each bundle was affordable when the other was
//! chosen. Prints the relations, violating pairs and the efficiency index.
//!
//! ```bash
//! cargo run --example worked_violation
//! ```

use rationality::choice::{ChoiceDataset, Observation};
use rationality::efficiency::{ccei, ccei_grid_oracle, DEFAULT_TOLERANCE};
use rationality::preference::{direct_relations, garp_violations, transitive_closure};

fn main() -> rationality::Result<()> {
    let data = ChoiceDataset::new(
        "worked",
        vec![
            Observation::new(vec![1.0, 2.0], 9.0, vec![1.0, 4.0])?,
            Observation::new(vec![2.0, 1.0], 9.0, vec![4.0, 1.0])?,
        ],
    )?;

    for e in [1.0, 0.7, 2.0 / 3.0, 0.5] {
        let rel = transitive_closure(direct_relations(&data, e)?);
        let report = garp_violations(&data, e)?;
        println!(
            "e = {e:.4}: R0 {:?}  P0 {:?}  GARP pairs {:?}",
            rel.direct_pairs(),
            rel.strict_pairs(),
            report.pairs
        );
    }

    let index = ccei(&data, DEFAULT_TOLERANCE)?;
    println!(
        "CCEI = {:.6} after {} bisection steps (grid check: {})",
        index.value,
        index.iterations,
        ccei_grid_oracle(&data, 1e-3)?
    );
    Ok(())
}
