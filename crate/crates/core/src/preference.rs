//! Revealed-preference relations at an efficiency level `e`, and WARP/GARP
//! violation detection.
//!
//! Observation `i` is directly revealed preferred to `j` at level `e` when
//! `e·p_i·x_i ≥ p_i·x_j`, and strictly so when the inequality is strict.
//! Both sides are compared with a tolerance of `REL_TOL · p_i·x_i`; exact
//! ties resolve to the weak relation only.
//!
//! Indices in every relation and report are 0-based positions in the
//! dataset.

use serde::{Deserialize, Serialize};

use crate::bitmatrix::BitMatrix;
use crate::choice::{dot, ChoiceDataset};
use crate::error::{Error, Result};
use crate::REL_TOL;

/// `cost(i, j) = p_i · x_j` for every ordered pair of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpenditureMatrix {
    size: usize,
    cost: Vec<f64>,
}

impl ExpenditureMatrix {
    pub fn new(dataset: &ChoiceDataset) -> Self {
        let obs = dataset.observations();
        let size = obs.len();
        let mut cost = Vec::with_capacity(size * size);
        for row in obs {
            for col in obs {
                cost.push(dot(row.prices(), col.choice().quantities()));
            }
        }
        ExpenditureMatrix { size, cost }
    }

    pub(crate) fn from_raw(size: usize, cost: Vec<f64>) -> Self {
        debug_assert_eq!(cost.len(), size * size);
        ExpenditureMatrix { size, cost }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.size + j]
    }

    /// Observed expenditure of round `i`.
    #[inline]
    pub fn spent(&self, i: usize) -> f64 {
        self.cost(i, i)
    }
}

/// Direct (`R0`), strict direct (`P0`) and transitively closed (`R`)
/// relations at one efficiency level.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationMatrices {
    level: f64,
    direct: BitMatrix,
    strict: BitMatrix,
    closure: BitMatrix,
    closed: bool,
}

impl RelationMatrices {
    pub fn size(&self) -> usize {
        self.direct.size()
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// `x_i R0 x_j`.
    pub fn direct(&self, i: usize, j: usize) -> bool {
        self.direct.get(i, j)
    }

    /// `x_i P0 x_j`.
    pub fn strict(&self, i: usize, j: usize) -> bool {
        self.strict.get(i, j)
    }

    /// `x_i R x_j`; all false until [`transitive_closure`] has run.
    pub fn closed(&self, i: usize, j: usize) -> bool {
        self.closure.get(i, j)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// `P0 ⊆ R0`, and `R0 ⊆ R` once closed.
    pub fn is_nested(&self) -> bool {
        self.strict.is_subset_of(&self.direct) && (!self.closed || self.direct.is_subset_of(&self.closure))
    }

    /// Builds the matrices from explicit pair lists. Intended for exercising
    /// the closure on hand-written relations.
    pub fn from_pairs(size: usize, level: f64, direct: &[(usize, usize)], strict: &[(usize, usize)]) -> Result<Self> {
        let mut d = BitMatrix::new(size);
        let mut s = BitMatrix::new(size);
        for &(i, j) in direct.iter().chain(strict) {
            if i >= size || j >= size {
                return Err(Error::Domain(format!("pair ({i}, {j}) outside a {size}x{size} relation")));
            }
            d.set(i, j, true);
        }
        for &(i, j) in strict {
            s.set(i, j, true);
        }
        Ok(RelationMatrices {
            level,
            direct: d,
            strict: s,
            closure: BitMatrix::new(size),
            closed: false,
        })
    }

    pub fn direct_pairs(&self) -> Vec<(usize, usize)> {
        pairs_of(&self.direct)
    }

    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        pairs_of(&self.strict)
    }

    pub fn closed_pairs(&self) -> Vec<(usize, usize)> {
        pairs_of(&self.closure)
    }
}

fn pairs_of(m: &BitMatrix) -> Vec<(usize, usize)> {
    let n = m.size();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m.get(i, j))
        .collect()
}

pub(crate) fn check_level(e: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::Domain(format!("efficiency level must lie in [0, 1], got {e}")));
    }
    Ok(())
}

fn build_direct(costs: &ExpenditureMatrix, e: f64) -> (BitMatrix, BitMatrix) {
    let n = costs.size();
    let mut direct = BitMatrix::new(n);
    let mut strict = BitMatrix::new(n);
    for i in 0..n {
        let own = costs.spent(i);
        let lhs = e * own;
        let tol = REL_TOL * own;
        for j in 0..n {
            let c = costs.cost(i, j);
            if lhs >= c - tol {
                direct.set(i, j, true);
                if lhs > c + tol {
                    strict.set(i, j, true);
                }
            }
        }
    }
    (direct, strict)
}

/// `R0` and `P0` at level `e`; `R` is left empty.
pub fn direct_relations(dataset: &ChoiceDataset, e: f64) -> Result<RelationMatrices> {
    check_level(e)?;
    Ok(relations_from_costs(&ExpenditureMatrix::new(dataset), e))
}

/// As [`direct_relations`], reusing a precomputed cost matrix.
pub fn relations_from_costs(costs: &ExpenditureMatrix, e: f64) -> RelationMatrices {
    let (direct, strict) = build_direct(costs, e);
    RelationMatrices {
        level: e,
        closure: BitMatrix::new(costs.size()),
        direct,
        strict,
        closed: false,
    }
}

/// Fills `R` with the smallest transitively closed superset of `R0`.
pub fn transitive_closure(mut mats: RelationMatrices) -> RelationMatrices {
    let mut closure = mats.direct.clone();
    closure.close_transitively();
    mats.closure = closure;
    mats.closed = true;
    mats
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Warp,
    Garp,
}

/// Violating ordered pairs for one axiom, with counts for both axioms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub level: f64,
    pub axiom: Axiom,
    /// Pairs `(i, j)` with `x_i R x_j` (or `R0` for WARP) and `x_j P0 x_i`.
    pub pairs: Vec<(usize, usize)>,
    pub warp_count: usize,
    pub garp_count: usize,
}

impl ViolationReport {
    pub fn garp_count(&self) -> usize {
        self.garp_count
    }

    pub fn warp_count(&self) -> usize {
        self.warp_count
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn violating_pairs(reach: &BitMatrix, strict: &BitMatrix) -> Vec<(usize, usize)> {
    let n = reach.size();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if reach.get(i, j) && strict.get(j, i) {
                out.push((i, j));
            }
        }
    }
    out
}

fn report(mats: &RelationMatrices, axiom: Axiom) -> ViolationReport {
    let warp = violating_pairs(&mats.direct, &mats.strict);
    let garp = violating_pairs(&mats.closure, &mats.strict);
    let (warp_count, garp_count) = (warp.len(), garp.len());
    ViolationReport {
        level: mats.level,
        axiom,
        pairs: match axiom {
            Axiom::Warp => warp,
            Axiom::Garp => garp,
        },
        warp_count,
        garp_count,
    }
}

/// All ordered pairs `(i, j)` with `x_i R x_j` and `x_j P0 x_i` at level `e`.
pub fn garp_violations(dataset: &ChoiceDataset, e: f64) -> Result<ViolationReport> {
    let mats = transitive_closure(direct_relations(dataset, e)?);
    Ok(report(&mats, Axiom::Garp))
}

/// All ordered pairs `(i, j)` with `x_i R0 x_j` and `x_j P0 x_i` at level `e`.
pub fn warp_violations(dataset: &ChoiceDataset, e: f64) -> Result<ViolationReport> {
    let mats = transitive_closure(direct_relations(dataset, e)?);
    Ok(report(&mats, Axiom::Warp))
}

pub fn satisfies_garp(dataset: &ChoiceDataset, e: f64) -> Result<bool> {
    check_level(e)?;
    Ok(satisfies_garp_costs(&ExpenditureMatrix::new(dataset), e))
}

/// GARP test on a precomputed cost matrix; `e` is assumed to be in range.
pub fn satisfies_garp_costs(costs: &ExpenditureMatrix, e: f64) -> bool {
    garp_count_costs(costs, e) == 0
}

/// Number of GARP-violating ordered pairs on a precomputed cost matrix.
pub fn garp_count_costs(costs: &ExpenditureMatrix, e: f64) -> usize {
    let (mut reach, strict) = build_direct(costs, e);
    if strict.count_ones() == 0 {
        return 0;
    }
    reach.close_transitively();
    // (i, j) violates iff R[i] has bit j and P0^T[i] has bit j
    let strict_t = strict.transpose();
    (0..reach.size())
        .map(|i| {
            reach
                .row(i)
                .iter()
                .zip(strict_t.row(i))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::Observation;

    fn dstar() -> ChoiceDataset {
        ChoiceDataset::new(
            "dstar",
            vec![
                Observation::new(vec![1.0, 2.0], 9.0, vec![1.0, 4.0]).unwrap(),
                Observation::new(vec![2.0, 1.0], 9.0, vec![4.0, 1.0]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dstar_relations_at_full_efficiency() {
        let m = direct_relations(&dstar(), 1.0).unwrap();
        assert!(m.direct(0, 1) && m.direct(1, 0));
        assert!(m.strict(0, 1) && m.strict(1, 0));
        assert!(m.direct(0, 0) && m.direct(1, 1));
        assert!(!m.strict(0, 0) && !m.strict(1, 1));
        assert!(!m.is_closed());
    }

    #[test]
    fn dstar_relations_at_boundary() {
        let m = direct_relations(&dstar(), 2.0 / 3.0).unwrap();
        assert!(m.direct(0, 1) && m.direct(1, 0));
        assert!(!m.strict(0, 1) && !m.strict(1, 0));
    }

    #[test]
    fn zero_level_relations() {
        let d = ChoiceDataset::new(
            "z",
            vec![
                Observation::new(vec![1.0, 2.0], 9.0, vec![1.0, 4.0]).unwrap(),
                Observation::new(vec![2.0, 1.0], 9.0, vec![0.0, 0.0]).unwrap(),
            ],
        )
        .unwrap();
        let m = direct_relations(&d, 0.0).unwrap();
        assert_eq!(m.direct_pairs(), vec![(0, 1), (1, 1)]);
        assert!(m.strict_pairs().is_empty());
    }

    #[test]
    fn level_out_of_range() {
        assert!(matches!(direct_relations(&dstar(), 1.5), Err(Error::Domain(_))));
        assert!(matches!(direct_relations(&dstar(), -0.1), Err(Error::Domain(_))));
        assert!(direct_relations(&dstar(), f64::NAN).is_err());
        assert!(satisfies_garp(&dstar(), 2.0).is_err());
    }

    #[test]
    fn closure_of_chain() {
        let m = RelationMatrices::from_pairs(3, 1.0, &[(0, 1), (1, 2)], &[]).unwrap();
        let r = transitive_closure(m);
        assert!(r.is_closed());
        assert_eq!(r.closed_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn closure_fixpoint() {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let r = transitive_closure(RelationMatrices::from_pairs(3, 1.0, &pairs, &[]).unwrap());
        assert_eq!(r.closed_pairs(), r.direct_pairs());
    }

    #[test]
    fn closure_of_cycle_is_complete() {
        let r = transitive_closure(RelationMatrices::from_pairs(3, 1.0, &[(0, 1), (1, 2), (2, 0)], &[]).unwrap());
        assert_eq!(r.closed_pairs().len(), 9);
    }

    #[test]
    fn dstar_violations() {
        let g = garp_violations(&dstar(), 1.0).unwrap();
        assert_eq!(g.pairs, vec![(0, 1), (1, 0)]);
        assert_eq!(g.garp_count(), 2);
        assert_eq!(g.warp_count(), 2);

        let w = warp_violations(&dstar(), 1.0).unwrap();
        assert_eq!(w.pairs.len(), 2);
        assert_eq!(w.axiom, Axiom::Warp);
        assert!(warp_violations(&dstar(), 0.5).unwrap().pairs.is_empty());

        assert!(!satisfies_garp(&dstar(), 1.0).unwrap());
        assert!(satisfies_garp(&dstar(), 2.0 / 3.0).unwrap());
        assert!(satisfies_garp(&dstar(), 0.0).unwrap());
    }

    #[test]
    fn single_observation_never_violates() {
        let d = ChoiceDataset::new("one", vec![Observation::new(vec![1.0, 3.0], 10.0, vec![4.0, 2.0]).unwrap()]).unwrap();
        assert!(garp_violations(&d, 1.0).unwrap().is_empty());
    }

    #[test]
    fn garp_but_not_warp() {
        // x0 R0 x1 R0 x2 weakly, x2 P0 x0: a three-cycle with no two-cycle
        let d = ChoiceDataset::new(
            "cycle",
            vec![
                Observation::new(vec![1.0, 1.0, 2.0], 1.0, vec![1.0, 0.0, 0.0]).unwrap(),
                Observation::new(vec![2.0, 1.0, 1.0], 1.0, vec![0.0, 1.0, 0.0]).unwrap(),
                Observation::new(vec![1.0, 2.0, 2.0], 2.0, vec![0.0, 0.0, 1.0]).unwrap(),
            ],
        )
        .unwrap();
        let g = garp_violations(&d, 1.0).unwrap();
        assert_eq!(g.warp_count(), 0);
        assert_eq!(g.pairs, vec![(0, 2)]);
        assert_eq!(garp_count_costs(&ExpenditureMatrix::new(&d), 1.0), 1);
    }
}
