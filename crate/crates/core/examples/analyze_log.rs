//! Scores a choice log in the dataset format, e.g. a transcript converted
//! offline to `round,p_A,p_B,budget,x_A,x_B` rows.
//!
//! ```bash
//! cargo run --example analyze_log -- crates/core/tests/fixtures/rational.csv
//! ```

use std::path::PathBuf;

use rationality::harness::analyze_dataset;

fn main() -> rationality::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/dstar.csv"));
    let a = analyze_dataset(&path)?;
    println!("{}: {} rounds of {} goods", a.label, a.rounds, a.good_count);
    println!("GARP violations {} (WARP {})", a.garp.garp_count, a.garp.warp_count);
    println!("CCEI {:.4}", a.ccei.value);
    println!("share on A by round: {:?}", a.series.values);
    for (t, f) in a.validation.flags.iter().enumerate() {
        if f.any() {
            println!("round {}: {:?}", t + 1, f);
        }
    }
    Ok(())
}
