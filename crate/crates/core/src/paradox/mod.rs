//! Paradoxical networks: builders for the examples and verifiers for their claims.
//!
//! A claim is checked quantifier by quantifier. The start must be an
//! equilibrium of the base game; after the mutation, the whole improvement
//! graph reachable from the start is explored and every maximal path is
//! accounted for through its sinks and cycles.

mod examples;
mod very_bad;

use std::fmt;

use serde::Serialize;

pub use examples::{build_example, CaseName, Reduction};
pub use very_bad::{build_very_bad, verify_very_bad, VeryBadCase, VeryBadReport};

use crate::cascade::{CascadeLayout, EmotionalMonitor};
use crate::dynamics::{classify, explore, ExploreLimits, ImprovementGraph, PathClassification};
use crate::error::Result;
use crate::game::{
    contract, dominates, expand, is_equilibrium, payoff_vector, set_edge_weight, EdgeSelector, Move, MoveRule,
    Network, PlayerId, ProductId, Strategy, StrategyState,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParadoxKind {
    Vulnerable,
    Fragile,
    Ineffective,
    Unsafe,
}

impl ParadoxKind {
    pub const ALL: [ParadoxKind; 4] = [
        ParadoxKind::Vulnerable,
        ParadoxKind::Fragile,
        ParadoxKind::Ineffective,
        ParadoxKind::Unsafe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParadoxKind::Vulnerable => "vulnerable",
            ParadoxKind::Fragile => "fragile",
            ParadoxKind::Ineffective => "ineffective",
            ParadoxKind::Unsafe => "unsafe",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Edge-weight scenarios, named by direction and outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    DecreaseAllWorse,
    DecreaseAllBetter,
    DecreaseLoop,
    IncreaseAllWorse,
    IncreaseAllBetter,
    IncreaseLoop,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::DecreaseAllWorse,
        ScenarioKind::DecreaseAllBetter,
        ScenarioKind::DecreaseLoop,
        ScenarioKind::IncreaseAllWorse,
        ScenarioKind::IncreaseAllBetter,
        ScenarioKind::IncreaseLoop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::DecreaseAllWorse => "dec-all-worse",
            ScenarioKind::DecreaseAllBetter => "dec-all-better",
            ScenarioKind::DecreaseLoop => "dec-loop",
            ScenarioKind::IncreaseAllWorse => "inc-all-worse",
            ScenarioKind::IncreaseAllBetter => "inc-all-better",
            ScenarioKind::IncreaseLoop => "inc-loop",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_decrease(self) -> bool {
        matches!(
            self,
            ScenarioKind::DecreaseAllWorse | ScenarioKind::DecreaseAllBetter | ScenarioKind::DecreaseLoop
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Claim {
    Paradox(ParadoxKind),
    Scenario(ScenarioKind),
}

/// What a claim says about the paths after the mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Every path ends, in a state worse for every player than the start.
    AllWorse,
    /// Every path ends, in a state better for every player than the start.
    AllBetter,
    /// No path ends.
    Loop,
}

/// Whether the sinks must also be equilibria of the unmutated game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginalEquilibrium {
    Required,
    Reported,
    NotApplicable,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::Paradox(k) => k.name(),
            Claim::Scenario(k) => k.name(),
        }
    }

    pub fn outcome(self) -> Outcome {
        match self {
            Claim::Paradox(ParadoxKind::Vulnerable) => Outcome::AllWorse,
            Claim::Paradox(ParadoxKind::Ineffective) => Outcome::AllBetter,
            Claim::Paradox(_) => Outcome::Loop,
            Claim::Scenario(ScenarioKind::DecreaseAllWorse | ScenarioKind::IncreaseAllWorse) => Outcome::AllWorse,
            Claim::Scenario(ScenarioKind::DecreaseAllBetter | ScenarioKind::IncreaseAllBetter) => Outcome::AllBetter,
            Claim::Scenario(_) => Outcome::Loop,
        }
    }

    pub fn original_equilibrium(self) -> OriginalEquilibrium {
        match self {
            Claim::Paradox(ParadoxKind::Vulnerable | ParadoxKind::Ineffective) => OriginalEquilibrium::Required,
            Claim::Scenario(
                ScenarioKind::DecreaseAllWorse | ScenarioKind::DecreaseAllBetter | ScenarioKind::IncreaseAllBetter,
            ) => OriginalEquilibrium::Required,
            Claim::Scenario(ScenarioKind::IncreaseAllWorse) => OriginalEquilibrium::Reported,
            _ => OriginalEquilibrium::NotApplicable,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A one-step change of the network.
#[derive(Debug, Clone, PartialEq)]
pub enum Mutation<S> {
    Expand {
        player: PlayerId,
        product: ProductId,
        threshold: S,
    },
    /// Players left on the removed product restart from refusal.
    Contract { player: PlayerId, product: ProductId },
    SetWeight { edge: EdgeSelector, weight: S },
}

impl<S: Scalar> Mutation<S> {
    /// The mutated network and the start state carried over to it.
    pub fn apply(&self, net: &Network<S>, start: &StrategyState) -> Result<(Network<S>, StrategyState)> {
        Ok(match self {
            Mutation::Expand {
                player,
                product,
                threshold,
            } => (expand(net, *player, *product, threshold.clone())?, start.clone()),
            Mutation::Contract { player, product } => {
                let mut s = start.clone();
                if s.get(*player) == Some(Strategy::Use(*product)) {
                    s.set(*player, Strategy::Refusal);
                }
                (contract(net, *player, *product)?, s)
            }
            Mutation::SetWeight { edge, weight } => (set_edge_weight(net, edge, weight.clone())?, start.clone()),
        })
    }

    pub fn describe(&self, net: &Network<S>) -> String {
        let product = |t: &ProductId| net.product_name(*t).unwrap_or("?").to_string();
        match self {
            Mutation::Expand {
                player,
                product: t,
                threshold,
            } => format!("expand player {player} with {} at {}", product(t), threshold.display_scalar()),
            Mutation::Contract { player, product: t } => format!("contract player {player} by {}", product(t)),
            Mutation::SetWeight { edge, weight } => {
                let at = match edge.resolve(net) {
                    Ok(k) => {
                        let e = &net.edges()[k];
                        format!("{} -> {} ({}, was {})", e.src, e.dst, e.class.name(), e.weight.display_scalar())
                    }
                    Err(_) => format!("{edge:?}"),
                };
                format!("set edge {at} to {}", weight.display_scalar())
            }
        }
    }
}

/// An example network, its start state, the mutation and the claim about it.
#[derive(Debug, Clone)]
pub struct ParadoxCase<S = crate::Rational> {
    pub name: String,
    pub claim: Claim,
    pub net: Network<S>,
    pub start: StrategyState,
    pub mutation: Mutation<S>,
    pub layouts: Vec<CascadeLayout>,
    pub externals: Vec<PlayerId>,
    /// Players whose payoffs the claim compares; everyone when `None`.
    pub scope: Option<Vec<PlayerId>>,
}

impl<S: Scalar> ParadoxCase<S> {
    /// Every example runs on the three cascade products and nothing else.
    pub fn product_count(&self) -> usize {
        self.net.products().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

/// One checked condition. Only required conditions decide the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub name: String,
    pub required: bool,
    pub status: Status,
    pub evidence: String,
}

/// A reached equilibrium compared with the start.
#[derive(Debug, Clone)]
pub struct SinkEvidence<S> {
    pub node: usize,
    pub state: StrategyState,
    pub payoffs: Vec<S>,
    pub equilibrium_of_mutated: bool,
    pub equilibrium_of_original: bool,
    pub all_worse: bool,
    pub all_better: bool,
    pub trace: Vec<Move<S>>,
}

#[derive(Debug, Clone)]
pub struct ParadoxReport<S = crate::Rational> {
    pub case: String,
    pub claim: Claim,
    pub rule: MoveRule,
    pub mutation: String,
    pub verdict: Status,
    pub conditions: Vec<Condition>,
    pub start: StrategyState,
    pub start_payoffs: Vec<S>,
    pub classification: PathClassification,
    pub states: usize,
    pub arcs: usize,
    pub max_out_degree: usize,
    pub sinks: Vec<SinkEvidence<S>>,
    /// States of one cycle, in order, and the moves between them.
    pub cycle: Option<(Vec<StrategyState>, Vec<Move<S>>)>,
    /// Moves from the start to the cycle's first state.
    pub cycle_entry: Vec<Move<S>>,
    pub invariant_violations: usize,
}

impl<S> ParadoxReport<S> {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// A verification together with the explored graph and mutated network.
#[derive(Debug, Clone)]
pub struct Verification<S> {
    pub report: ParadoxReport<S>,
    pub graph: ImprovementGraph<S>,
    pub mutated: Network<S>,
}

pub fn verify<S: Scalar>(case: &ParadoxCase<S>, limits: &ExploreLimits, rule: MoveRule) -> Result<ParadoxReport<S>> {
    Ok(verify_full(case, limits, rule, false)?.report)
}

fn eq_in<S: Scalar>(net: &Network<S>, s: &StrategyState) -> bool {
    is_equilibrium(net, s).unwrap_or(false)
}

// A property every sink must have. Sinks beyond a truncated search are
// unseen, so only a counterexample is conclusive then.
fn over_sinks<S>(sinks: &[SinkEvidence<S>], truncated: bool, ok: impl Fn(&SinkEvidence<S>) -> bool) -> Status {
    if !sinks.iter().all(ok) {
        Status::Fail
    } else if truncated {
        Status::Unknown
    } else {
        Status::of(!sinks.is_empty())
    }
}

fn verdict_of(conditions: &[Condition]) -> Status {
    let required = conditions.iter().filter(|c| c.required);
    if required.clone().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if required.clone().any(|c| c.status == Status::Unknown) {
        Status::Unknown
    } else {
        Status::Pass
    }
}

/// Runs every check of the claim. With `invariant_required`, a broken
/// emotional invariant at any explored state fails the verdict; otherwise
/// it is only reported.
pub fn verify_full<S: Scalar>(
    case: &ParadoxCase<S>,
    limits: &ExploreLimits,
    rule: MoveRule,
    invariant_required: bool,
) -> Result<Verification<S>> {
    let mut conditions = Vec::new();
    let base = &case.net;
    let start_eq = is_equilibrium(base, &case.start)?;
    conditions.push(Condition {
        name: "start-equilibrium".into(),
        required: true,
        status: Status::of(start_eq),
        evidence: format!("start {} of the base game", if start_eq { "admits no improvement" } else { "admits an improvement" }),
    });
    let start_payoffs = payoff_vector(base, &case.start)?;
    let scoped = |v: &[S]| -> Vec<S> {
        match &case.scope {
            Some(ids) => ids.iter().map(|p| v[p.index()].clone()).collect(),
            None => v.to_vec(),
        }
    };
    let start_scoped = scoped(&start_payoffs);

    let (mutated, start) = case.mutation.apply(base, &case.start)?;
    let g = explore(&mutated, &start, limits, rule)?;
    let classification = classify(&g);
    let truncated = g.truncated();

    let mut sinks = Vec::new();
    for &node in g.sinks() {
        let state = g.state(node).clone();
        let payoffs = payoff_vector(&mutated, &state)?;
        sinks.push(SinkEvidence {
            node,
            equilibrium_of_mutated: eq_in(&mutated, &state),
            equilibrium_of_original: eq_in(base, &state),
            all_worse: dominates(&start_scoped, &scoped(&payoffs))?,
            all_better: dominates(&scoped(&payoffs), &start_scoped)?,
            trace: g.path_to(node),
            payoffs,
            state,
        });
    }

    let cycle_nodes = g.cycle_witness();
    let cycle = cycle_nodes.as_ref().map(|nodes| {
        let states = nodes.iter().map(|v| g.state(*v).clone()).collect();
        let moves = nodes
            .iter()
            .zip(nodes.iter().cycle().skip(1))
            .map(|(v, w)| {
                g.arcs(*v)
                    .iter()
                    .find(|a| a.target == *w)
                    .expect("consecutive cycle nodes are joined")
                    .mv
                    .clone()
            })
            .collect();
        (states, moves)
    });
    let cycle_entry = cycle_nodes.as_ref().map(|c| g.path_to(c[0])).unwrap_or_default();

    let outcome = case.claim.outcome();
    match outcome {
        Outcome::AllWorse | Outcome::AllBetter => {
            let finite = match (&classification, truncated) {
                (PathClassification::AllFinite { .. }, _) => Status::Pass,
                (_, true) if g.has_cycle() => Status::Fail,
                (_, true) => Status::Unknown,
                _ => Status::Fail,
            };
            conditions.push(Condition {
                name: "all-paths-finite".into(),
                required: true,
                status: finite,
                evidence: format!(
                    "{} over {} states ({} sinks, cycle {})",
                    classification.label(),
                    g.len(),
                    g.sinks().len(),
                    g.has_cycle()
                ),
            });
            let worse = outcome == Outcome::AllWorse;
            let ok = |s: &SinkEvidence<S>| if worse { s.all_worse } else { s.all_better };
            conditions.push(Condition {
                name: if worse { "sinks-all-worse" } else { "sinks-all-better" }.into(),
                required: true,
                status: over_sinks(&sinks, truncated, ok),
                evidence: format!(
                    "{} of {} sinks {} the start for every player",
                    sinks.iter().filter(|s| ok(s)).count(),
                    sinks.len(),
                    if worse { "are below" } else { "are above" }
                ),
            });
            conditions.push(Condition {
                name: "sinks-equilibria-mutated".into(),
                required: true,
                status: over_sinks(&sinks, truncated, |s| s.equilibrium_of_mutated),
                evidence: format!(
                    "{} of {} sinks admit no improvement in the mutated game",
                    sinks.iter().filter(|s| s.equilibrium_of_mutated).count(),
                    sinks.len()
                ),
            });
            let original = case.claim.original_equilibrium();
            if original != OriginalEquilibrium::NotApplicable {
                conditions.push(Condition {
                    name: "sinks-equilibria-original".into(),
                    required: original == OriginalEquilibrium::Required,
                    status: over_sinks(&sinks, truncated, |s| s.equilibrium_of_original),
                    evidence: format!(
                        "{} of {} sinks admit no improvement in the original game",
                        sinks.iter().filter(|s| s.equilibrium_of_original).count(),
                        sinks.len()
                    ),
                });
            }
        }
        Outcome::Loop => {
            let status = match (&classification, truncated) {
                (PathClassification::AllInfinite { .. }, _) => Status::Pass,
                (_, true) if !g.sinks().is_empty() => Status::Fail,
                (_, true) => Status::Unknown,
                _ => Status::Fail,
            };
            conditions.push(Condition {
                name: "all-paths-infinite".into(),
                required: true,
                status,
                evidence: format!(
                    "{} over {} states ({} sinks, cycle of length {})",
                    classification.label(),
                    g.len(),
                    g.sinks().len(),
                    cycle_nodes.as_ref().map_or(0, Vec::len)
                ),
            });
            let refusal = StrategyState::refusal(mutated.num_players());
            let refusal_eq = eq_in(&mutated, &refusal);
            let reached = g.node_of(&refusal).is_some();
            conditions.push(Condition {
                name: "total-refusal-unreached".into(),
                required: false,
                status: Status::of(refusal_eq && !reached),
                evidence: format!("total refusal is an equilibrium: {refusal_eq}; reached: {reached}"),
            });
        }
    }

    let monitor = EmotionalMonitor::new(&mutated);
    let invariant_violations: usize = g.states().iter().map(|s| monitor.violations(s).len()).sum();
    conditions.push(Condition {
        name: "emotional-invariant".into(),
        required: invariant_required,
        status: Status::of(invariant_violations == 0),
        evidence: format!(
            "{invariant_violations} violations over {} states and {} influenced players",
            g.len(),
            monitor.influenced().count()
        ),
    });

    let report = ParadoxReport {
        case: case.name.clone(),
        claim: case.claim,
        rule,
        mutation: case.mutation.describe(base),
        verdict: verdict_of(&conditions),
        conditions,
        start: case.start.clone(),
        start_payoffs,
        classification,
        states: g.len(),
        arcs: g.arc_count(),
        max_out_degree: g.max_out_degree(),
        sinks,
        cycle,
        cycle_entry,
        invariant_violations,
    };
    Ok(Verification {
        report,
        graph: g,
        mutated,
    })
}

impl<S: Scalar> ParadoxReport<S> {
    /// Plain-text rendering.
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "case {} ({}): {}\n",
            self.case,
            self.rule.name(),
            self.verdict.name().to_uppercase()
        ));
        out.push_str(&format!("mutation: {}\n", self.mutation));
        out.push_str(&format!(
            "explored {} states, {} moves, max out-degree {}, {}\n",
            self.states,
            self.arcs,
            self.max_out_degree,
            self.classification.label()
        ));
        for c in &self.conditions {
            out.push_str(&format!(
                "  [{}]{} {}: {}\n",
                c.status.name(),
                if c.required { "" } else { " (info)" },
                c.name,
                c.evidence
            ));
        }
        for s in &self.sinks {
            out.push_str(&format!("  sink after {} moves: {}\n", s.trace.len(), s.state));
        }
        if let Some((states, _)) = &self.cycle {
            out.push_str(&format!(
                "  cycle of {} states entered after {} moves\n",
                states.len(),
                self.cycle_entry.len()
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::CascadeParams;
    use crate::Rational;

    fn run(name: CaseName) -> ParadoxReport<Rational> {
        let p = CascadeParams::<Rational>::minimal();
        let case = build_example(name, &p).unwrap();
        verify(&case, &ExploreLimits::states(100_000), MoveRule::BestResponse).unwrap()
    }

    #[test]
    fn vulnerable_sink_has_player_one_refusing() {
        let r = run(CaseName::Paradox(ParadoxKind::Vulnerable));
        assert!(r.passed(), "{}", r.text());
        assert_eq!(r.sinks.len(), 1);
        let p = CascadeParams::<Rational>::minimal();
        let case = build_example(CaseName::Paradox(ParadoxKind::Vulnerable), &p).unwrap();
        let p1 = case.externals[0];
        assert_eq!(r.sinks[0].state.get(p1), Some(Strategy::Refusal));
        assert_eq!(r.start_payoffs[p1.index()], p.rank_bonus() - p.theta);
    }

    #[test]
    fn fragile_cycles_without_sinks() {
        let r = run(CaseName::Paradox(ParadoxKind::Fragile));
        assert!(r.passed(), "{}", r.text());
        assert!(r.sinks.is_empty());
        let (states, moves) = r.cycle.as_ref().unwrap();
        assert_eq!(states.len(), moves.len());
        assert!(r.condition("total-refusal-unreached").unwrap().status == Status::Pass);
    }

    #[test]
    fn contraction_reseeds_to_refusal() {
        let p = CascadeParams::<Rational>::minimal();
        let case = build_example(CaseName::Paradox(ParadoxKind::Ineffective), &p).unwrap();
        let (net, s) = case.mutation.apply(&case.net, &case.start).unwrap();
        assert_eq!(s.get(case.externals[0]), Some(Strategy::Refusal));
        assert!(net.players()[case.externals[0].index()].available.len() == 1);
    }

    #[test]
    fn truncation_is_never_a_pass() {
        let p = CascadeParams::<Rational>::minimal();
        let case = build_example(CaseName::Paradox(ParadoxKind::Ineffective), &p).unwrap();
        let r = verify(&case, &ExploreLimits::states(5), MoveRule::BestResponse).unwrap();
        assert_eq!(r.verdict, Status::Unknown);
        let case = build_example(CaseName::Paradox(ParadoxKind::Unsafe), &p).unwrap();
        let r = verify(&case, &ExploreLimits::states(5), MoveRule::BestResponse).unwrap();
        assert_eq!(r.verdict, Status::Unknown);
    }

    #[test]
    fn wrong_claim_fails() {
        let p = CascadeParams::<Rational>::minimal();
        let mut case = build_example(CaseName::Paradox(ParadoxKind::Vulnerable), &p).unwrap();
        case.claim = Claim::Paradox(ParadoxKind::Ineffective);
        let r = verify(&case, &ExploreLimits::default(), MoveRule::BestResponse).unwrap();
        assert_eq!(r.verdict, Status::Fail);
        case.claim = Claim::Paradox(ParadoxKind::Fragile);
        let r = verify(&case, &ExploreLimits::default(), MoveRule::BestResponse).unwrap();
        assert_eq!(r.verdict, Status::Fail);
    }
}
