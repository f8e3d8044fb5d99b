use std::collections::BTreeMap;

use crate::game::{EdgeClass, Network, PlayerId, ProductId, Strategy, StrategyState};
use crate::scalar::Scalar;

/// `E(v, t)`: number of incoming emotional edges of `v` whose source plays `t`.
/// Every product of the network gets an entry.
pub fn emotional_profile<S: Scalar>(net: &Network<S>, s: &StrategyState, v: PlayerId) -> BTreeMap<ProductId, usize> {
    let mut out: BTreeMap<ProductId, usize> = (0..net.num_products()).map(|k| (ProductId::from(k), 0)).collect();
    for e in net.edges() {
        if e.dst == v && e.class == EdgeClass::Emotional {
            if let Some(Strategy::Use(t)) = s.get(e.src) {
                *out.entry(t).or_default() += 1;
            }
        }
    }
    out
}

fn balanced(counts: impl Iterator<Item = usize>) -> bool {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for c in counts {
        lo = lo.min(c);
        hi = hi.max(c);
    }
    lo == usize::MAX || hi - lo <= 1
}

/// Emotional counts of any two products *available* to `v` differ by at most one.
pub fn check_emotional_invariant<S: Scalar>(net: &Network<S>, s: &StrategyState, v: PlayerId) -> bool {
    let profile = emotional_profile(net, s, v);
    let Some(player) = net.player(v) else {
        return false;
    };
    balanced(player.available.iter().map(|t| profile.get(t).copied().unwrap_or(0)))
}

/// Pre-indexed emotional sources, for checking the invariant on many states.
#[derive(Debug, Clone)]
pub struct EmotionalMonitor {
    sources: Vec<Vec<PlayerId>>,
    available: Vec<Vec<ProductId>>,
    products: usize,
}

/// One player whose emotional inputs are out of balance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantViolation {
    pub player: PlayerId,
    pub profile: BTreeMap<ProductId, usize>,
}

impl EmotionalMonitor {
    pub fn new<S: Scalar>(net: &Network<S>) -> Self {
        let mut sources = vec![Vec::new(); net.num_players()];
        for e in net.edges() {
            if e.class == EdgeClass::Emotional && e.dst.index() < sources.len() {
                sources[e.dst.index()].push(e.src);
            }
        }
        EmotionalMonitor {
            sources,
            available: net.players().iter().map(|p| p.available.iter().copied().collect()).collect(),
            products: net.num_products(),
        }
    }

    /// Players that receive at least one emotional edge.
    pub fn influenced(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.sources
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(k, _)| PlayerId::from(k))
    }

    pub fn counts(&self, s: &StrategyState, v: PlayerId) -> Vec<usize> {
        let mut counts = vec![0; self.products];
        for src in &self.sources[v.index()] {
            if let Strategy::Use(t) = s[src.index()] {
                counts[t.index()] += 1;
            }
        }
        counts
    }

    pub fn holds_for(&self, s: &StrategyState, v: PlayerId) -> bool {
        let counts = self.counts(s, v);
        balanced(self.available[v.index()].iter().map(|t| counts[t.index()]))
    }

    /// Every influenced player whose invariant fails in `s`.
    pub fn violations(&self, s: &StrategyState) -> Vec<InvariantViolation> {
        self.influenced()
            .filter(|v| !self.holds_for(s, *v))
            .map(|v| InvariantViolation {
                player: v,
                profile: self
                    .counts(s, v)
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| (ProductId::from(k), c))
                    .collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{build_cascade, CascadeParams, CascadeState, Letter};
    use crate::Rational;

    #[test]
    fn rank_member_profiles() {
        let p = CascadeParams::<Rational>::minimal();
        let a = build_cascade(&p).unwrap();
        let l = &a.layout;
        let (pa, pb, pc) = (l.product(Letter::A), l.product(Letter::B), l.product(Letter::C));
        // member 1 of the A-rank offers {A, C}, so only the B-rank reaches it
        let v = l.rank(Letter::A).members[1];
        let first = a.state(CascadeState::First);
        let prof = emotional_profile(&a.net, &first, v);
        assert_eq!(prof, BTreeMap::from([(pa, 0), (pb, 2 * p.n), (pc, 0)]));
        let second = a.state(CascadeState::Second);
        let prof = emotional_profile(&a.net, &second, v);
        assert_eq!(prof, BTreeMap::from([(pa, p.n), (pb, 0), (pc, p.n)]));
        assert!(check_emotional_invariant(&a.net, &first, v));
        assert!(check_emotional_invariant(&a.net, &second, v));
    }

    #[test]
    fn canonical_states_are_balanced() {
        let a = build_cascade(&CascadeParams::<Rational>::minimal()).unwrap();
        let mon = EmotionalMonitor::new(&a.net);
        assert_eq!(mon.influenced().count(), 30);
        for w in [CascadeState::First, CascadeState::Second] {
            assert_eq!(mon.violations(&a.state(w)), vec![]);
        }
        assert_eq!(mon.violations(&StrategyState::refusal(30)), vec![]);
    }

    #[test]
    fn half_a_rank_refusing_breaks_balance() {
        let p = CascadeParams::<Rational>::minimal();
        let a = build_cascade(&p).unwrap();
        let l = &a.layout;
        let mut s = a.state(CascadeState::Second);
        for m in l.rank(Letter::B).members.iter().skip(1).step_by(2) {
            s.set(*m, Strategy::Refusal);
        }
        let v = l.rank(Letter::A).members[1];
        assert!(!check_emotional_invariant(&a.net, &s, v));
        let mon = EmotionalMonitor::new(&a.net);
        assert!(!mon.holds_for(&s, v));
        let bad = mon.violations(&s);
        let hit = bad.iter().find(|x| x.player == v).unwrap();
        assert_eq!(hit.profile[&l.product(Letter::C)], p.n);
        assert_eq!(hit.profile[&l.product(Letter::A)], 0);
    }
}
