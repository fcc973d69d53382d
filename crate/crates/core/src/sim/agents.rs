//! Built-in decision policies for the two-good budget task.
//!
//! Every policy is a pure function of the agent profile and the round
//! context. Policies that need randomness draw from a stream seeded by
//! `mix_seed([profile.seed, round])`, so a round's draw does not depend on
//! how many draws earlier rounds consumed.
//!
//! All policies choose on the budget line: they pick an expenditure share
//! `s` on good A and buy `s·m/p_A` of A and `(1 − s)·m/p_B` of B.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::choice::{dot, Bundle, Observation};
use crate::error::{Error, Result};
use crate::preference::{garp_count_costs, ExpenditureMatrix};
use crate::sim::profile::{AgentProfile, CesPreferences};
use crate::sim::rng;

/// The round being decided, plus every earlier round of the session.
#[derive(Debug, Clone, Copy)]
pub struct RoundContext<'a> {
    /// 0-based round index.
    pub round: usize,
    pub prices: &'a [f64],
    pub budget: f64,
    pub history: &'a [Observation],
}

impl<'a> RoundContext<'a> {
    pub fn new(prices: &'a [f64], budget: f64, history: &'a [Observation]) -> Self {
        RoundContext {
            round: history.len(),
            prices,
            budget,
            history,
        }
    }

    fn check(&self) -> Result<()> {
        if self.prices.len() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: self.prices.len(),
            });
        }
        if let Some(obs) = self.history.iter().find(|o| o.good_count() != 2) {
            return Err(Error::Dimension {
                expected: 2,
                found: obs.good_count(),
            });
        }
        crate::choice::check_prices(self.prices)?;
        crate::choice::check_budget(self.budget)
    }
}

fn round_stream(profile: &AgentProfile, round: usize) -> rng::Stream {
    rng::stream(rng::mix_seed(&[profile.seed, round as u64]))
}

/// Spend share `s` (clamped to `[0, 1]`) of the budget on good A and the
/// rest on good B.
pub fn bundle_from_share(prices: &[f64], budget: f64, share: f64) -> Result<Bundle> {
    let s = share.clamp(0.0, 1.0);
    Bundle::new(vec![s * budget / prices[0], (1.0 - s) * budget / prices[1]])
}

/// Expenditure share on good A at the CES optimum.
fn ces_share(ces: &CesPreferences, prices: &[f64]) -> f64 {
    let a = ces.share;
    if a <= 0.0 || a >= 1.0 || ces.exponent == 0.0 {
        return a;
    }
    let sigma = 1.0 / (1.0 - ces.exponent);
    let wa = a.powf(sigma) * prices[0].powf(1.0 - sigma);
    let wb = (1.0 - a).powf(sigma) * prices[1].powf(1.0 - sigma);
    wa / (wa + wb)
}

pub fn ces_utility(ces: &CesPreferences, bundle: &Bundle) -> f64 {
    let q = bundle.quantities();
    let (a, r) = (ces.share, ces.exponent);
    let weights = [a, 1.0 - a];
    if r == 0.0 {
        return q.iter().zip(weights).map(|(x, w)| if w == 0.0 { 1.0 } else { x.powf(w) }).product();
    }
    if r < 0.0 && q.iter().zip(weights).any(|(x, w)| *x == 0.0 && w > 0.0) {
        return 0.0;
    }
    let inner: f64 = q.iter().zip(weights).filter(|(_, w)| *w > 0.0).map(|(x, w)| w * x.powf(r)).sum();
    inner.powf(1.0 / r)
}

/// Closed-form CES demand: with `σ = 1/(1 − r)` the share on A is
/// `a^σ p_A^(1−σ) / (a^σ p_A^(1−σ) + (1−a)^σ p_B^(1−σ))`, and `a` itself
/// in the Cobb-Douglas limit.
pub fn ces_rational_agent(ctx: &RoundContext<'_>, profile: &AgentProfile) -> Result<Bundle> {
    ctx.check()?;
    bundle_from_share(ctx.prices, ctx.budget, ces_share(&profile.ces, ctx.prices))
}

/// Splits the budget in proportion to inverse prices, then adds Gaussian
/// noise with standard deviation `profile.noise` to the share on A.
pub fn basic_heuristic_agent(ctx: &RoundContext<'_>, profile: &AgentProfile) -> Result<Bundle> {
    ctx.check()?;
    let inv = [1.0 / ctx.prices[0], 1.0 / ctx.prices[1]];
    let mut share = inv[0] / (inv[0] + inv[1]);
    if profile.noise > 0.0 {
        let normal = Normal::new(0.0, profile.noise).map_err(|e| Error::Config(e.to_string()))?;
        share += normal.sample(&mut round_stream(profile, ctx.round));
    }
    bundle_from_share(ctx.prices, ctx.budget, share)
}

pub fn random_uniform_agent(ctx: &RoundContext<'_>, profile: &AgentProfile) -> Result<Bundle> {
    ctx.check()?;
    let share = round_stream(profile, ctx.round).random_range(0.0..=1.0);
    bundle_from_share(ctx.prices, ctx.budget, share)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialistChoice {
    pub bundle: Bundle,
    pub share: f64,
    pub objective: f64,
    pub local: f64,
    /// Consistency score the agent believed the choice had.
    pub consistency: f64,
    /// No candidate met `g_threshold`; the unconstrained best was used.
    pub fallback: bool,
}

/// Scores how many new GARP violations a candidate would add to the history.
struct ConsistencyCheck<'a> {
    history: &'a [Observation],
    costs: Vec<f64>,
    base_violations: usize,
}

impl<'a> ConsistencyCheck<'a> {
    fn new(history: &'a [Observation]) -> Self {
        let h = history.len();
        let mut costs = Vec::with_capacity(h * h);
        for row in history {
            for col in history {
                costs.push(row.cost_of(col.choice()));
            }
        }
        let base_violations = garp_count_costs(&ExpenditureMatrix::from_raw(h, costs.clone()), 1.0);
        ConsistencyCheck {
            history,
            costs,
            base_violations,
        }
    }

    /// `1` when appending the bundle adds no GARP violation at `e = 1`,
    /// otherwise `1 − new_pairs / history_len`, floored at 0.
    fn score(&self, prices: &[f64], bundle: &Bundle) -> f64 {
        let h = self.history.len();
        if h == 0 {
            return 1.0;
        }
        let n = h + 1;
        let mut cost = Vec::with_capacity(n * n);
        for (i, row) in self.history.iter().enumerate() {
            cost.extend_from_slice(&self.costs[i * h..(i + 1) * h]);
            cost.push(row.cost_of(bundle));
        }
        for col in self.history {
            cost.push(dot(prices, col.choice().quantities()));
        }
        cost.push(dot(prices, bundle.quantities()));
        let total = garp_count_costs(&ExpenditureMatrix::from_raw(n, cost), 1.0);
        let added = total.saturating_sub(self.base_violations);
        if added == 0 {
            1.0
        } else {
            (1.0 - added as f64 / h as f64).max(0.0)
        }
    }
}

/// Half-width of the share window refined around the domain target.
const DOMAIN_WINDOW: f64 = 0.1;

fn consistency_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        n => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

fn domain_grid(points: usize, target: f64) -> Vec<f64> {
    if points == 0 {
        return Vec::new();
    }
    let mut out = vec![target];
    let rest = points - 1;
    if rest > 0 {
        let lo = (target - DOMAIN_WINDOW).max(0.0);
        let hi = (target + DOMAIN_WINDOW).min(1.0);
        if rest == 1 {
            out.push(0.5 * (lo + hi));
        } else {
            out.extend((0..rest).map(|k| lo + (hi - lo) * k as f64 / (rest - 1) as f64));
        }
    }
    out
}

/// The weighted-objective specialist.
///
/// Candidates are shares on the budget line. `consistency_points()` of them
/// lie on a uniform grid over `[0, 1]` and have their consistency score
/// computed exactly; `domain_points()` of them refine the domain target and
/// inherit the score of the nearest checked share. Each candidate is scored
/// `alpha · L + (1 − alpha) · G`, where `L` is the domain rule's value and
/// `G` the consistency score. With `g_threshold > 0` only candidates with
/// `G ≥ g_threshold` are eligible. Ties go to the higher CES utility.
///
/// At `alpha = 0` the agent is exactly the CES maximizer.
pub fn specialist_decision(ctx: &RoundContext<'_>, profile: &AgentProfile) -> Result<SpecialistChoice> {
    ctx.check()?;
    if profile.alpha == 0.0 {
        let share = ces_share(&profile.ces, ctx.prices);
        let bundle = bundle_from_share(ctx.prices, ctx.budget, share)?;
        let local = profile.domain_rule.local_value(ctx.prices, share);
        return Ok(SpecialistChoice {
            bundle,
            share,
            objective: 1.0,
            local,
            consistency: 1.0,
            fallback: false,
        });
    }

    let check = ConsistencyCheck::new(ctx.history);
    let rule = &profile.domain_rule;
    let target = rule.target_share(ctx.prices);

    struct Candidate {
        share: f64,
        bundle: Bundle,
        local: f64,
        consistency: f64,
        objective: f64,
        utility: f64,
    }
    let make = |share: f64, consistency: f64| -> Result<Candidate> {
        let bundle = bundle_from_share(ctx.prices, ctx.budget, share)?;
        let local = rule.local_value(ctx.prices, share);
        Ok(Candidate {
            share,
            local,
            consistency,
            objective: profile.alpha * local + (1.0 - profile.alpha) * consistency,
            utility: ces_utility(&profile.ces, &bundle),
            bundle,
        })
    };

    let mut candidates = Vec::with_capacity(profile.deliberation_budget);
    let checked = consistency_grid(profile.consistency_points());
    let mut checked_scores = Vec::with_capacity(checked.len());
    for &share in &checked {
        let bundle = bundle_from_share(ctx.prices, ctx.budget, share)?;
        let g = check.score(ctx.prices, &bundle);
        checked_scores.push(g);
        candidates.push(make(share, g)?);
    }
    for share in domain_grid(profile.domain_points(), target) {
        let g = nearest(&checked, &checked_scores, share).unwrap_or(1.0);
        candidates.push(make(share, g)?);
    }

    let better = |a: &Candidate, b: &Candidate| a.objective > b.objective || (a.objective == b.objective && a.utility > b.utility);
    let pick = |eligible: &dyn Fn(&Candidate) -> bool| -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, c) in candidates.iter().enumerate() {
            if !eligible(c) {
                continue;
            }
            if best.is_none_or(|b| better(c, &candidates[b])) {
                best = Some(i);
            }
        }
        best
    };

    let threshold = profile.g_threshold;
    let constrained = if threshold > 0.0 {
        pick(&|c: &Candidate| c.consistency >= threshold)
    } else {
        pick(&|_: &Candidate| true)
    };
    let (index, fallback) = match constrained {
        Some(i) => (i, false),
        None => (pick(&|_: &Candidate| true).expect("deliberation budget is at least 1"), true),
    };
    let c = candidates.swap_remove(index);
    Ok(SpecialistChoice {
        bundle: c.bundle,
        share: c.share,
        objective: c.objective,
        local: c.local,
        consistency: c.consistency,
        fallback,
    })
}

fn nearest(shares: &[f64], scores: &[f64], share: f64) -> Option<f64> {
    // shares are sorted ascending
    if shares.is_empty() {
        return None;
    }
    let idx = shares.partition_point(|s| *s < share);
    let best = match idx {
        0 => 0,
        i if i == shares.len() => i - 1,
        i if share - shares[i - 1] <= shares[i] - share => i - 1,
        i => i,
    };
    Some(scores[best])
}

pub fn specialist_agent(ctx: &RoundContext<'_>, profile: &AgentProfile) -> Result<Bundle> {
    specialist_decision(ctx, profile).map(|c| c.bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::expenditure;
    use crate::sim::profile::{AgentKind, DomainRule};

    fn ctx<'a>(prices: &'a [f64], history: &'a [Observation]) -> RoundContext<'a> {
        RoundContext::new(prices, 100.0, history)
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn cobb_douglas_share_rule() {
        let p = AgentProfile::ces_rational("cd", 0.5, 0.0);
        let b = ces_rational_agent(&ctx(&[1.0, 2.0], &[]), &p).unwrap();
        assert_close(b.quantities(), &[50.0, 25.0]);
    }

    #[test]
    fn degenerate_share_puts_everything_on_a() {
        let p = AgentProfile::ces_rational("a1", 1.0, -1.0);
        let b = ces_rational_agent(&ctx(&[2.0, 5.0], &[]), &p).unwrap();
        assert_close(b.quantities(), &[50.0, 0.0]);
    }

    #[test]
    fn ces_matches_budget_line_grid_search() {
        let p = AgentProfile::ces_rational("ces", 0.5, -1.0);
        let prices = [1.0, 4.0];
        let b = ces_rational_agent(&ctx(&prices, &[]), &p).unwrap();
        // grid oracle: 10^4 points along x_A ∈ [0, m/p_A]
        let n = 10_000;
        let step = 100.0 / prices[0] / n as f64;
        let (mut best_x, mut best_u) = (0.0, f64::NEG_INFINITY);
        for k in 0..=n {
            let xa = k as f64 * step;
            let xb = (100.0 - prices[0] * xa) / prices[1];
            let u = if xa == 0.0 || xb <= 0.0 {
                0.0
            } else {
                1.0 / (0.5 / xa + 0.5 / xb)
            };
            if u > best_u {
                best_u = u;
                best_x = xa;
            }
        }
        assert!((b.quantities()[0] - best_x).abs() <= step, "{} vs {best_x}", b.quantities()[0]);
        // analytic: sigma = 1/2, share = 1/(1 + 2) → x_A = 100/3
        assert!((b.quantities()[0] - 100.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn heuristic_without_noise() {
        let mut p = AgentProfile::new("basic", AgentKind::BasicHeuristic);
        p.noise = 0.0;
        assert_close(basic_heuristic_agent(&ctx(&[1.0, 1.0], &[]), &p).unwrap().quantities(), &[50.0, 50.0]);
        assert_close(basic_heuristic_agent(&ctx(&[1.0, 3.0], &[]), &p).unwrap().quantities(), &[75.0, 25.0 / 3.0]);
    }

    #[test]
    fn heuristic_noise_is_seeded() {
        let p = AgentProfile::new("basic", AgentKind::BasicHeuristic).with_seed(9);
        let a = basic_heuristic_agent(&ctx(&[1.0, 3.0], &[]), &p).unwrap();
        let b = basic_heuristic_agent(&ctx(&[1.0, 3.0], &[]), &p).unwrap();
        assert_eq!(a, b);
        let q = p.clone().with_seed(10);
        assert_ne!(a, basic_heuristic_agent(&ctx(&[1.0, 3.0], &[]), &q).unwrap());
    }

    #[test]
    fn share_corners() {
        assert_close(bundle_from_share(&[2.0, 4.0], 100.0, 0.0).unwrap().quantities(), &[0.0, 25.0]);
        assert_close(bundle_from_share(&[2.0, 4.0], 100.0, 1.0).unwrap().quantities(), &[50.0, 0.0]);
    }

    #[test]
    fn random_agent_stays_on_budget_line() {
        let p = AgentProfile::new("rand", AgentKind::RandomUniform).with_seed(1);
        let prices = [0.7, 3.1];
        for round in 0..200 {
            let mut c = ctx(&prices, &[]);
            c.round = round;
            let b = random_uniform_agent(&c, &p).unwrap();
            let spent = expenditure(&prices, &b).unwrap();
            assert!((spent - 100.0).abs() <= 1e-9 * 100.0);
        }
    }

    #[test]
    fn specialist_with_zero_alpha_is_ces() {
        let mut p = AgentProfile::specialist("s", 0.0, 0.7);
        p.ces.exponent = -0.5;
        let mut c = p.clone();
        c.kind = AgentKind::CesRational;
        let prices = [1.3, 0.6];
        assert_eq!(
            specialist_agent(&ctx(&prices, &[]), &p).unwrap(),
            ces_rational_agent(&ctx(&prices, &[]), &c).unwrap()
        );
    }

    #[test]
    fn pure_specialist_takes_safe_corner() {
        let mut p = AgentProfile::specialist("bio", 1.0, 0.5);
        p.domain_rule = DomainRule {
            ratio_threshold: 2.0,
            share_cap: 0.5,
            ..DomainRule::default()
        };
        let b = specialist_agent(&ctx(&[4.0, 1.0], &[]), &p).unwrap();
        assert_eq!(b.quantities(), &[0.0, 100.0]);
    }

    #[test]
    fn consistency_score_detects_new_violation() {
        // history: p=(1,2), x=(1,4); candidate at p=(2,1), x=(4,1) reverses it
        let history = vec![Observation::new(vec![1.0, 2.0], 9.0, vec![1.0, 4.0]).unwrap()];
        let check = ConsistencyCheck::new(&history);
        let g = check.score(&[2.0, 1.0], &Bundle::new(vec![4.0, 1.0]).unwrap());
        assert_eq!(g, 0.0);
        let ok = check.score(&[2.0, 1.0], &Bundle::new(vec![1.0, 7.0]).unwrap());
        assert_eq!(ok, 1.0);
    }

    #[test]
    fn threshold_falls_back_when_nothing_qualifies() {
        let history = vec![Observation::new(vec![1.0, 2.0], 9.0, vec![1.0, 4.0]).unwrap()];
        let mut p = AgentProfile::specialist("s", 0.5, 0.0);
        p.deliberation_budget = 1;
        p.g_threshold = 0.5;
        // share 0.5 at p=(2,1), m=6 is (1.5, 3): 7.5 < 9 at p1 and 6 <= 6 at p2
        let c = specialist_decision(&RoundContext::new(&[2.0, 1.0], 6.0, &history), &p).unwrap();
        assert!(c.fallback);
        assert_eq!(c.consistency, 0.0);
        assert_eq!(c.bundle.quantities(), &[1.5, 3.0]);

        // with a larger budget the same share is consistent
        let c = specialist_decision(&RoundContext::new(&[2.0, 1.0], 9.0, &history), &p).unwrap();
        assert!(!c.fallback);
        assert_eq!(c.consistency, 1.0);
    }

    #[test]
    fn utility_edge_cases() {
        let ces = CesPreferences { share: 0.5, exponent: -1.0 };
        assert_eq!(ces_utility(&ces, &Bundle::new(vec![0.0, 3.0]).unwrap()), 0.0);
        let cd = CesPreferences { share: 0.5, exponent: 0.0 };
        assert!((ces_utility(&cd, &Bundle::new(vec![4.0, 9.0]).unwrap()) - 6.0).abs() < 1e-12);
    }
}
