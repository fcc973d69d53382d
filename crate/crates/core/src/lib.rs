//! Revealed-preference rationality metrics and a seeded simulation harness
//! for budget-allocation experiments.
//!
//! The crate is organized bottom-up:
//!
//! - [`choice`]: observations, bundles, datasets and the line-oriented
//!   dataset file format.
//! - [`preference`]: direct and transitive revealed-preference relations at
//!   an efficiency level `e`, WARP and GARP violation detection.
//! - [`efficiency`]: Afriat's critical cost efficiency index (CCEI) by
//!   bisection, plus a grid-scan cross-check.
//! - [`rank`]: per-round decision statistics and tie-aware Spearman
//!   correlation.
//! - [`sim`]: task generation and the simulated agent roster (CES
//!   maximizer, heuristic, random, and the weighted-objective specialist).
//! - [`harness`]: experiment orchestration, Table-style reports, the
//!   published reference benchmark and the external-agent wire protocol.
//!
//! ```
//! use rationality::choice::{ChoiceDataset, Observation};
//! use rationality::{efficiency, preference};
//!
//! let data = ChoiceDataset::new(
//!     "two-rounds",
//!     vec![
//!         Observation::new(vec![1.0, 2.0], 9.0, vec![1.0, 4.0]).unwrap(),
//!         Observation::new(vec![2.0, 1.0], 9.0, vec![4.0, 1.0]).unwrap(),
//!     ],
//! )
//! .unwrap();
//! let report = preference::garp_violations(&data, 1.0).unwrap();
//! assert_eq!(report.garp_count(), 2);
//! let index = efficiency::ccei(&data, 1e-6).unwrap();
//! assert!((index.value - 2.0 / 3.0).abs() < 1e-6);
//! ```

pub mod choice;
pub mod efficiency;
pub mod error;
pub mod harness;
pub mod preference;
pub mod rank;
pub mod sim;

mod bitmatrix;

pub use error::{Error, Result};

/// Relative tolerance used for every expenditure comparison in the crate.
pub const REL_TOL: f64 = 1e-9;
