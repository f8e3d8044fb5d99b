//! Brute-force ground truth for small networks.
//!
//! Nothing here calls into the engine's payoff code: payoffs are summed
//! straight from the edge list, deviations are found by trying every
//! alternative, and reachability is a plain depth-first search. The
//! [`Engine`] trait is the seam through which the engine is compared.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{explore, ExploreLimits};
use crate::error::{Error, Result};
use crate::game::{self, EdgeClass, Move, MoveRule, Network, NetworkBuilder, PlayerId, Strategy, StrategyState};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    pub max_total_states: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_total_states: 2_000_000,
        }
    }
}

/// Number of positions: the product of `|P(i)| + 1` over all players.
pub fn state_space_size<S: Scalar>(net: &Network<S>) -> u128 {
    net.players()
        .iter()
        .map(|p| p.available.len() as u128 + 1)
        .try_fold(1u128, |acc, k| acc.checked_mul(k))
        .unwrap_or(u128::MAX)
}

fn options<S: Scalar>(net: &Network<S>, i: usize) -> Vec<Strategy> {
    let mut out = vec![Strategy::Refusal];
    out.extend(net.players()[i].available.iter().map(|t| Strategy::Use(*t)));
    out
}

/// Every position of `net`, in mixed-radix order with the last player fastest.
pub fn all_states<S: Scalar>(net: &Network<S>, budget: &EnumerationBudget) -> Result<Vec<StrategyState>> {
    let size = state_space_size(net);
    if size > budget.max_total_states as u128 {
        return Err(Error::BudgetExceeded {
            states: size,
            budget: budget.max_total_states,
        });
    }
    let opts: Vec<Vec<Strategy>> = (0..net.num_players()).map(|i| options(net, i)).collect();
    let mut digits = vec![0usize; opts.len()];
    let mut out = Vec::with_capacity(size as usize);
    loop {
        out.push(StrategyState::new(
            digits.iter().zip(&opts).map(|(d, o)| o[*d]).collect(),
        ));
        let mut k = opts.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < opts[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Payoff by the definition, straight from the edge list.
pub fn oracle_payoff<S: Scalar>(net: &Network<S>, s: &StrategyState, i: PlayerId) -> S {
    let Strategy::Use(t) = s[i.index()] else {
        return S::zero();
    };
    let mut sum = S::zero();
    for e in net.edges() {
        if e.dst == i && e.src != i && s[e.src.index()] == Strategy::Use(t) {
            sum = sum + e.weight.clone();
        }
    }
    sum - net.players()[i.index()].thresholds[&t].clone()
}

/// Deviations allowed by `rule`, found by trying every alternative.
pub fn oracle_deviations<S: Scalar>(net: &Network<S>, s: &StrategyState, rule: MoveRule) -> Vec<(PlayerId, Strategy, S)> {
    let mut out = Vec::new();
    for i in 0..net.num_players() {
        let id = PlayerId::from(i);
        let now = oracle_payoff(net, s, id);
        let mut found: Vec<(PlayerId, Strategy, S)> = Vec::new();
        for alt in options(net, i) {
            if alt == s[i] {
                continue;
            }
            let then = oracle_payoff(net, &s.with(id, alt), id);
            if then > now {
                found.push((id, alt, then - now.clone()));
            }
        }
        if rule == MoveRule::BestResponse {
            let mut best: Option<S> = None;
            for (_, _, g) in &found {
                if best.as_ref().is_none_or(|b| g > b) {
                    best = Some(g.clone());
                }
            }
            found.retain(|(_, _, g)| Some(g) == best.as_ref());
        }
        out.extend(found);
    }
    out
}

/// Positions with no improving deviation, found by scanning every position.
pub fn enumerate_equilibria<S: Scalar>(net: &Network<S>, budget: &EnumerationBudget) -> Result<Vec<StrategyState>> {
    Ok(all_states(net, budget)?
        .into_iter()
        .filter(|s| oracle_deviations(net, s, MoveRule::Improvement).is_empty())
        .collect())
}

/// Every position reachable from `start` under `rule`.
pub fn oracle_reachable<S: Scalar>(net: &Network<S>, start: &StrategyState, rule: MoveRule) -> BTreeSet<StrategyState> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut stack = vec![start.clone()];
    while let Some(s) = stack.pop() {
        for (p, to, _) in oracle_deviations(net, &s, rule) {
            let next = s.with(p, to);
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen
}

/// The engine surface the oracle checks.
pub trait Engine<S: Scalar> {
    fn payoff_vector(&self, net: &Network<S>, s: &StrategyState) -> Result<Vec<S>>;
    fn moves(&self, net: &Network<S>, s: &StrategyState, rule: MoveRule) -> Result<Vec<Move<S>>>;
    fn is_equilibrium(&self, net: &Network<S>, s: &StrategyState) -> Result<bool>;
    fn reachable(&self, net: &Network<S>, start: &StrategyState, rule: MoveRule) -> Result<Vec<StrategyState>>;
}

/// The real engine: `game` plus `dynamics`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GameCore;

impl<S: Scalar> Engine<S> for GameCore {
    fn payoff_vector(&self, net: &Network<S>, s: &StrategyState) -> Result<Vec<S>> {
        Ok(game::payoff_vector(net, s)?)
    }

    fn moves(&self, net: &Network<S>, s: &StrategyState, rule: MoveRule) -> Result<Vec<Move<S>>> {
        Ok(game::moves(net, s, rule)?)
    }

    fn is_equilibrium(&self, net: &Network<S>, s: &StrategyState) -> Result<bool> {
        Ok(game::is_equilibrium(net, s)?)
    }

    fn reachable(&self, net: &Network<S>, start: &StrategyState, rule: MoveRule) -> Result<Vec<StrategyState>> {
        Ok(explore(net, start, &ExploreLimits::default(), rule)?.states().to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MismatchKind {
    Payoff,
    Moves,
    Equilibrium,
    Reachability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub kind: MismatchKind,
    pub state: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub states: usize,
    pub equilibria: usize,
    pub reachability_starts: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn absorb(&mut self, other: CrossCheckReport) {
        self.states += other.states;
        self.equilibria += other.equilibria;
        self.reachability_starts += other.reachability_starts;
        self.mismatches.extend(other.mismatches);
    }
}

/// Number of evenly spaced start states whose reachable sets are compared.
pub const REACHABILITY_SAMPLES: usize = 6;

pub fn cross_check<S: Scalar>(net: &Network<S>, budget: &EnumerationBudget) -> Result<CrossCheckReport> {
    cross_check_with(&GameCore, net, budget)
}

/// Compares `engine` with the oracle on every position of `net`, under both
/// move rules, and on reachability from a few sampled starts.
pub fn cross_check_with<S: Scalar, E: Engine<S>>(
    engine: &E,
    net: &Network<S>,
    budget: &EnumerationBudget,
) -> Result<CrossCheckReport> {
    let states = all_states(net, budget)?;
    let mut report = CrossCheckReport {
        states: states.len(),
        ..Default::default()
    };
    let mut miss = |kind, s: &StrategyState, detail: String| {
        report_push(&mut report.mismatches, kind, s, detail);
    };
    let mut equilibria = 0;
    for s in &states {
        let ours: Vec<S> = (0..net.num_players()).map(|i| oracle_payoff(net, s, PlayerId::from(i))).collect();
        let theirs = engine.payoff_vector(net, s)?;
        if ours != theirs {
            miss(MismatchKind::Payoff, s, format!("oracle {} engine {}", fmt_vec(&ours), fmt_vec(&theirs)));
        }
        for rule in [MoveRule::Improvement, MoveRule::BestResponse] {
            let ours = oracle_deviations(net, s, rule);
            let theirs: Vec<(PlayerId, Strategy, S)> = engine
                .moves(net, s, rule)?
                .into_iter()
                .map(|m| (m.player, m.to, m.gain))
                .collect();
            if ours != theirs {
                miss(
                    MismatchKind::Moves,
                    s,
                    format!("{}: oracle {} moves, engine {}", rule.name(), ours.len(), theirs.len()),
                );
            }
        }
        let eq = oracle_deviations(net, s, MoveRule::Improvement).is_empty();
        equilibria += usize::from(eq);
        if eq != engine.is_equilibrium(net, s)? {
            miss(MismatchKind::Equilibrium, s, format!("oracle says {eq}"));
        }
    }
    let step = (states.len() / REACHABILITY_SAMPLES).max(1);
    let mut starts = 0;
    for s in states.iter().step_by(step).take(REACHABILITY_SAMPLES) {
        starts += 1;
        for rule in [MoveRule::Improvement, MoveRule::BestResponse] {
            let ours = oracle_reachable(net, s, rule);
            let theirs: BTreeSet<StrategyState> = engine.reachable(net, s, rule)?.into_iter().collect();
            if ours != theirs {
                miss(
                    MismatchKind::Reachability,
                    s,
                    format!("{}: oracle {} states, engine {}", rule.name(), ours.len(), theirs.len()),
                );
            }
        }
    }
    report.equilibria = equilibria;
    report.reachability_starts = starts;
    Ok(report)
}

fn report_push(list: &mut Vec<Mismatch>, kind: MismatchKind, s: &StrategyState, detail: String) {
    list.push(Mismatch {
        kind,
        state: s.to_string(),
        detail,
    });
}

fn fmt_vec<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::format_scalar).collect();
    format!("[{}]", parts.join(", "))
}

/// Shape of randomly generated test networks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomSpec {
    pub max_players: usize,
    pub max_products: usize,
    pub max_denominator: i64,
    pub max_numerator: i64,
    pub density: f64,
    /// Chance that a present edge gets a parallel twin.
    pub parallel: f64,
    /// Chance that a product is available to a player.
    pub availability: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_players: 6,
            max_products: 3,
            max_denominator: 8,
            max_numerator: 16,
            density: 0.5,
            parallel: 0.1,
            availability: 0.6,
        }
    }
}

fn small_ratio<S: Scalar, R: Rng>(rng: &mut R, spec: &RandomSpec, min_num: i64) -> S {
    let den = rng.random_range(1..=spec.max_denominator);
    let num = rng.random_range(min_num..=spec.max_numerator);
    S::from_ratio(num, den)
}

pub fn random_network<S: Scalar, R: Rng>(rng: &mut R, spec: &RandomSpec) -> Network<S> {
    let mut b = NetworkBuilder::new();
    let k = rng.random_range(1..=spec.max_products);
    let products: Vec<_> = (0..k).map(|t| b.product(&format!("P{t}"))).collect();
    let n = rng.random_range(1..=spec.max_players);
    for i in 0..n {
        let mut offer = Vec::new();
        for t in &products {
            if rng.random_bool(spec.availability) {
                offer.push((*t, small_ratio(rng, spec, 1)));
            }
        }
        b.add_player(format!("v{i}"), &offer);
    }
    for dst in 0..n {
        for src in 0..n {
            if src == dst || !rng.random_bool(spec.density) {
                continue;
            }
            let (s, d) = (PlayerId::from(src), PlayerId::from(dst));
            b.add_edge(s, d, small_ratio(rng, spec, 0), EdgeClass::Plain);
            if rng.random_bool(spec.parallel) {
                b.add_edge(s, d, small_ratio(rng, spec, 0), EdgeClass::Plain);
            }
        }
    }
    b.build()
}

/// `count` networks from a seeded generator; equal seeds give equal lists.
pub fn random_networks<S: Scalar>(seed: u64, count: usize, spec: &RandomSpec) -> Vec<Network<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_network(&mut rng, spec)).collect()
}
