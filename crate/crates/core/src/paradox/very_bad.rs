//! All four paradoxes in one network.
//!
//! The vulnerable, fragile, ineffective and unsafe examples are placed side
//! by side. The cascades of the vulnerable and the ineffective example then
//! emotionally influence every player of the other three examples, internal
//! cascade players included, so a switch of either cascade moves the payoff
//! of everyone outside it.

use super::examples::{place_example, CaseName, Part};
use super::{verify_full, ParadoxCase, ParadoxKind, ParadoxReport, Status};
use crate::cascade::{CascadeParams, Letter};
use crate::dynamics::ExploreLimits;
use crate::error::Result;
use crate::game::{MoveRule, Network, NetworkBuilder, PlayerId, ProductId, StrategyState};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct VeryBadCase<S = crate::Rational> {
    pub net: Network<S>,
    pub start: StrategyState,
    /// One case per paradox, all sharing `net` and `start`.
    pub cases: Vec<ParadoxCase<S>>,
    pub cross_influence: bool,
}

fn members<S>(part: &Part<S>) -> Vec<PlayerId> {
    let mut v = part.layout.players();
    v.extend(&part.externals);
    v
}

/// Builds the combined network. Without `cross_influence` it is a plain
/// disjoint union, and each claim only compares its own example's players.
pub fn build_very_bad<S: Scalar>(p: &CascadeParams<S>, cross_influence: bool) -> Result<VeryBadCase<S>> {
    let mut b = NetworkBuilder::new();
    let mut parts = Vec::new();
    for kind in ParadoxKind::ALL {
        parts.push(place_example(&mut b, p, CaseName::Paradox(kind))?);
    }
    if cross_influence {
        let sources = [ParadoxKind::Vulnerable, ParadoxKind::Ineffective];
        for src in sources {
            let k = ParadoxKind::ALL.iter().position(|x| *x == src).expect("placed");
            let mut layout = parts[k].layout.clone();
            for (j, other) in parts.iter().enumerate() {
                if j == k {
                    continue;
                }
                for v in members(other) {
                    let anticipated: Vec<ProductId> = other
                        .anticipated
                        .iter()
                        .filter(|(w, _)| *w == v)
                        .map(|(_, t)| *t)
                        .collect();
                    let player = b.player(v).expect("placed");
                    let ranks: Vec<Letter> = Letter::ALL
                        .into_iter()
                        .filter(|l| {
                            let t = layout.product(*l);
                            !player.can_use(t) && !anticipated.contains(&t)
                        })
                        .collect();
                    layout.attach_influence_anticipating(&mut b, v, &ranks, &p.e, &anticipated)?;
                }
            }
            parts[k].layout = layout;
        }
    }
    let net = b.build();
    let mut start = StrategyState::refusal(net.num_players());
    for part in &parts {
        for (v, s) in &part.start {
            start.set(*v, *s);
        }
    }
    let cases = parts
        .iter()
        .map(|part| ParadoxCase {
            name: format!("very-bad/{}", part.name.name()),
            claim: part.name.claim(),
            net: net.clone(),
            start: start.clone(),
            mutation: part.mutation.clone(),
            layouts: parts.iter().map(|q| q.layout.clone()).collect(),
            externals: part.externals.clone(),
            scope: (!cross_influence).then(|| members(part)),
        })
        .collect();
    Ok(VeryBadCase {
        net,
        start,
        cases,
        cross_influence,
    })
}

#[derive(Debug, Clone)]
pub struct VeryBadReport<S = crate::Rational> {
    pub players: usize,
    pub cross_influence: bool,
    pub reports: Vec<ParadoxReport<S>>,
    pub invariant_violations: usize,
}

impl<S> VeryBadReport<S> {
    pub fn verdict(&self) -> Status {
        let v: Vec<Status> = self.reports.iter().map(|r| r.verdict).collect();
        if v.contains(&Status::Fail) {
            Status::Fail
        } else if v.contains(&Status::Unknown) {
            Status::Unknown
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Status::Pass
    }
}

/// Verifies all four claims on the one combined network, with the emotional
/// invariant required at every explored state.
pub fn verify_very_bad<S: Scalar>(
    p: &CascadeParams<S>,
    limits: &ExploreLimits,
    rule: MoveRule,
    cross_influence: bool,
) -> Result<VeryBadReport<S>> {
    let case = build_very_bad(p, cross_influence)?;
    let mut reports = Vec::new();
    for c in &case.cases {
        reports.push(verify_full(c, limits, rule, true)?.report);
    }
    Ok(VeryBadReport {
        players: case.net.num_players(),
        cross_influence,
        invariant_violations: reports.iter().map(|r| r.invariant_violations).sum(),
        reports,
    })
}
