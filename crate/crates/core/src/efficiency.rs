//! Afriat's critical cost efficiency index.
//!
//! The CCEI is the largest efficiency level `e ∈ [0, 1]` at which a dataset
//! satisfies GARP. [`ccei`] brackets it by bisection on `[0, 1]` and always
//! reports the satisfied end of the bracket. [`ccei_grid_oracle`] scans a
//! uniform grid from the top and is only meant for cross-checking.

use serde::{Deserialize, Serialize};

use crate::choice::ChoiceDataset;
use crate::error::{Error, Result};
use crate::preference::{satisfies_garp_costs, ExpenditureMatrix};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyIndex {
    pub value: f64,
    pub tolerance: f64,
    pub iterations: u32,
    /// GARP holds at `value`. Always true for indices produced by [`ccei`].
    pub satisfied_at_value: bool,
}

pub fn ccei(dataset: &ChoiceDataset, tolerance: f64) -> Result<EfficiencyIndex> {
    ccei_costs(&ExpenditureMatrix::new(dataset), tolerance)
}

pub fn ccei_costs(costs: &ExpenditureMatrix, tolerance: f64) -> Result<EfficiencyIndex> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::Domain(format!("CCEI tolerance must lie in (0, 1), got {tolerance}")));
    }
    if satisfies_garp_costs(costs, 1.0) {
        return Ok(EfficiencyIndex {
            value: 1.0,
            tolerance,
            iterations: 0,
            satisfied_at_value: true,
        });
    }
    // GARP always holds at e = 0: the strict relation is empty there.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iterations = 0;
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if satisfies_garp_costs(costs, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(EfficiencyIndex {
        value: lo,
        tolerance,
        iterations,
        satisfied_at_value: true,
    })
}

/// Largest `e` in `{0, step, 2·step, …, 1}` with GARP satisfied.
pub fn ccei_grid_oracle(dataset: &ChoiceDataset, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Domain(format!("grid step must lie in (0, 1], got {step}")));
    }
    let costs = ExpenditureMatrix::new(dataset);
    if satisfies_garp_costs(&costs, 1.0) {
        return Ok(1.0);
    }
    let top = (1.0 / step + 1e-9).floor() as u64;
    for k in (0..=top).rev() {
        let e = (k as f64 * step).min(1.0);
        if satisfies_garp_costs(&costs, e) {
            return Ok(e);
        }
    }
    Ok(0.0)
}
