use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::{validate_params, CascadeParams};
use crate::error::{Error, Result};
use crate::game::{EdgeClass, Network, NetworkBuilder, PlayerId, ProductId, Strategy, StrategyState};
use crate::scalar::Scalar;

/// The three products a cascade is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::C];

    pub fn name(self) -> &'static str {
        match self {
            Letter::A => "A",
            Letter::B => "B",
            Letter::C => "C",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Secondary products of the rank with this main product, in the
    /// alternation order of the rank: A -> (B, C), B -> (C, A), C -> (A, B).
    pub fn secondaries(self) -> [Letter; 2] {
        match self {
            Letter::A => [Letter::B, Letter::C],
            Letter::B => [Letter::C, Letter::A],
            Letter::C => [Letter::A, Letter::B],
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Registers the cascade products in `b` and returns their ids, indexed by [`Letter`].
pub fn letters<S: Scalar>(b: &mut NetworkBuilder<S>) -> [ProductId; 3] {
    [b.product("A"), b.product("B"), b.product("C")]
}

/// Which of the two canonical configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CascadeState {
    /// Every rank member on its rank's main product.
    First,
    /// Every rank member on its own secondary product.
    Second,
}

impl CascadeState {
    pub fn other(self) -> Self {
        match self {
            CascadeState::First => CascadeState::Second,
            CascadeState::Second => CascadeState::First,
        }
    }
}

/// A chain of `2n` humans sharing a main product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank {
    pub main: Letter,
    pub members: Vec<PlayerId>,
    pub secondaries: Vec<Letter>,
}

impl Rank {
    pub fn first(&self) -> PlayerId {
        self.members[0]
    }

    pub fn last(&self) -> PlayerId {
        *self.members.last().expect("ranks are never empty")
    }

    /// Product member `k` plays in the given rank state.
    pub fn choice(&self, k: usize, which: CascadeState) -> Letter {
        match which {
            CascadeState::First => self.main,
            CascadeState::Second => self.secondaries[k],
        }
    }
}

/// "Rank `rank` emotionally influences `target`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Influence {
    pub rank: Letter,
    pub target: PlayerId,
}

/// Where a cascade's players sit inside a (possibly larger) network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeLayout {
    pub products: [ProductId; 3],
    /// Two spirits per product, indexed by [`Letter`].
    pub spirits: [[PlayerId; 2]; 3],
    /// Ranks indexed by main product.
    pub ranks: [Rank; 3],
    /// First member of the C-rank; target of the external incoming control edge.
    pub input_anchor: PlayerId,
    /// Last member of the B-rank; source of the external outgoing control edge.
    pub output_source: PlayerId,
    pub influence: Vec<Influence>,
}

impl CascadeLayout {
    pub fn product(&self, l: Letter) -> ProductId {
        self.products[l.index()]
    }

    pub fn letter_of(&self, t: ProductId) -> Option<Letter> {
        Letter::ALL.into_iter().find(|l| self.product(*l) == t)
    }

    pub fn rank(&self, main: Letter) -> &Rank {
        &self.ranks[main.index()]
    }

    pub fn spirit_ids(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.spirits.iter().flatten().copied()
    }

    pub fn human_ids(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.ranks.iter().flat_map(|r| r.members.iter().copied())
    }

    /// Every player of the cascade: spirits then humans.
    pub fn players(&self) -> Vec<PlayerId> {
        self.spirit_ids().chain(self.human_ids()).collect()
    }

    pub fn contains(&self, p: PlayerId) -> bool {
        self.spirit_ids().any(|s| s == p) || self.human_ids().any(|h| h == p)
    }

    /// Debug role of a cascade player: `spirit:A` or `rank:A:3`.
    pub fn role(&self, p: PlayerId) -> Option<String> {
        for l in Letter::ALL {
            if self.spirits[l.index()].contains(&p) {
                return Some(format!("spirit:{l}"));
            }
            if let Some(k) = self.rank(l).members.iter().position(|m| *m == p) {
                return Some(format!("rank:{l}:{k}"));
            }
        }
        None
    }

    pub fn roles(&self) -> BTreeMap<PlayerId, String> {
        self.players()
            .into_iter()
            .map(|p| (p, self.role(p).expect("own player")))
            .collect()
    }

    /// Canonical assignment of all cascade players; other players untouched.
    pub fn state_fragment(&self, which: CascadeState) -> Vec<(PlayerId, Strategy)> {
        let mut out = Vec::with_capacity(6 + 3 * self.ranks[0].members.len());
        for l in Letter::ALL {
            for s in self.spirits[l.index()] {
                out.push((s, Strategy::Use(self.product(l))));
            }
        }
        for rank in &self.ranks {
            for (k, m) in rank.members.iter().enumerate() {
                out.push((*m, Strategy::Use(self.product(rank.choice(k, which)))));
            }
        }
        out
    }

    pub fn write_state(&self, which: CascadeState, s: &mut StrategyState) {
        for (p, st) in self.state_fragment(which) {
            s.set(p, st);
        }
    }

    /// Which canonical state the cascade players of `s` are in, if any.
    pub fn recognize(&self, s: &StrategyState) -> Option<CascadeState> {
        [CascadeState::First, CascadeState::Second]
            .into_iter()
            .find(|w| self.state_fragment(*w).iter().all(|(p, st)| s.get(*p) == Some(*st)))
    }

    /// Adds one emotional edge from every member of each rank in `ranks` to `v`.
    ///
    /// `v` may only use cascade products, and none of them may be the main
    /// product of an influencing rank; otherwise the rank could sway `v`'s
    /// choice.
    pub fn attach_influence<S: Scalar>(
        &mut self,
        b: &mut NetworkBuilder<S>,
        v: PlayerId,
        ranks: &[Letter],
        e: &S,
    ) -> Result<()> {
        self.attach_influence_anticipating(b, v, ranks, e, &[])
    }

    /// As [`Self::attach_influence`], also treating `anticipated` products as
    /// available to `v` (for players that a later expansion will widen).
    pub fn attach_influence_anticipating<S: Scalar>(
        &mut self,
        b: &mut NetworkBuilder<S>,
        v: PlayerId,
        ranks: &[Letter],
        e: &S,
        anticipated: &[ProductId],
    ) -> Result<()> {
        let player = b.player(v).ok_or(crate::error::GameError::InvalidPlayer(v))?;
        let avail: Vec<ProductId> = player.available.iter().copied().chain(anticipated.iter().copied()).collect();
        for &rank in ranks {
            let fail = |reason: String| Error::InfluencePrecondition {
                rank: rank.name().to_string(),
                player: v,
                reason,
            };
            if let Some(t) = avail.iter().find(|t| self.letter_of(**t).is_none()) {
                return Err(fail(format!("product {t} is not a cascade product")));
            }
            if avail.contains(&self.product(rank)) {
                return Err(fail(format!("player can use the rank's main product {rank}")));
            }
            if self.rank(rank).members.contains(&v) {
                return Err(fail("player belongs to the rank".to_string()));
            }
        }
        for &rank in ranks {
            for &m in &self.ranks[rank.index()].members {
                b.add_edge(m, v, e.clone(), EdgeClass::Emotional);
            }
            self.influence.push(Influence { rank, target: v });
        }
        Ok(())
    }
}

/// Places the six stimulus spirits: pairs of single-product players locked
/// together by mutual control edges.
pub(crate) fn place_stimuli<S: Scalar>(
    b: &mut NetworkBuilder<S>,
    p: &CascadeParams<S>,
    products: &[ProductId; 3],
) -> [[PlayerId; 2]; 3] {
    Letter::ALL.map(|l| {
        let t = products[l.index()];
        let s0 = b.add_player(format!("spirit:{l}"), &[(t, p.theta.clone())]);
        let s1 = b.add_player(format!("spirit:{l}"), &[(t, p.theta.clone())]);
        b.add_edge(s0, s1, p.c.clone(), EdgeClass::Control);
        b.add_edge(s1, s0, p.c.clone(), EdgeClass::Control);
        [s0, s1]
    })
}

/// Places a rank: `2n` humans, member k offering {main, secondaries[k mod 2]},
/// chained by control edges. The first member is inclined to the main
/// product, every other member to its own secondary.
pub(crate) fn place_rank<S: Scalar>(
    b: &mut NetworkBuilder<S>,
    p: &CascadeParams<S>,
    products: &[ProductId; 3],
    spirits: &[[PlayerId; 2]; 3],
    main: Letter,
) -> Rank {
    let alt = main.secondaries();
    let mut members: Vec<PlayerId> = Vec::with_capacity(2 * p.n);
    let mut secondaries = Vec::with_capacity(2 * p.n);
    for k in 0..2 * p.n {
        let sec = alt[k % 2];
        let id = b.add_player(
            format!("rank:{main}:{k}"),
            &[
                (products[main.index()], p.theta.clone()),
                (products[sec.index()], p.theta.clone()),
            ],
        );
        let inclined_to = if k == 0 { main } else { sec };
        b.add_edge(spirits[inclined_to.index()][0], id, p.i.clone(), EdgeClass::Inclination);
        if let Some(&prev) = members.last() {
            b.add_edge(prev, id, p.c.clone(), EdgeClass::Control);
        }
        members.push(id);
        secondaries.push(sec);
    }
    Rank {
        main,
        members,
        secondaries,
    }
}

/// Builds a cascade into `b` and returns where its players are.
///
/// Wiring: stimuli; ranks C, A, B in that order, joined by control edges
/// C-rank last -> A-rank first -> ... -> B-rank first; and every rank
/// emotionally influencing each cascade player without its main product.
pub fn place_cascade<S: Scalar>(b: &mut NetworkBuilder<S>, p: &CascadeParams<S>) -> Result<CascadeLayout> {
    validate_params(p).map_err(Error::InvalidParams)?;
    let products = letters(b);
    let spirits = place_stimuli(b, p, &products);
    let c_rank = place_rank(b, p, &products, &spirits, Letter::C);
    let a_rank = place_rank(b, p, &products, &spirits, Letter::A);
    let b_rank = place_rank(b, p, &products, &spirits, Letter::B);
    b.add_edge(c_rank.last(), a_rank.first(), p.c.clone(), EdgeClass::Control);
    b.add_edge(a_rank.last(), b_rank.first(), p.c.clone(), EdgeClass::Control);

    let mut layout = CascadeLayout {
        products,
        spirits,
        input_anchor: c_rank.first(),
        output_source: b_rank.last(),
        ranks: [a_rank, b_rank, c_rank],
        influence: Vec::new(),
    };
    let everyone = layout.players();
    for rank in Letter::ALL {
        for &v in &everyone {
            let lacks = !b.player(v).expect("placed").can_use(layout.product(rank));
            if lacks {
                layout.attach_influence(b, v, &[rank], &p.e)?;
            }
        }
    }
    Ok(layout)
}

/// A standalone cascade.
#[derive(Debug, Clone)]
pub struct CascadeAssembly<S = crate::Rational> {
    pub net: Network<S>,
    pub layout: CascadeLayout,
    pub params: CascadeParams<S>,
}

pub fn build_cascade<S: Scalar>(p: &CascadeParams<S>) -> Result<CascadeAssembly<S>> {
    let mut b = NetworkBuilder::new();
    let layout = place_cascade(&mut b, p)?;
    Ok(CascadeAssembly {
        net: b.build(),
        layout,
        params: p.clone(),
    })
}

impl<S: Scalar> CascadeAssembly<S> {
    pub fn state(&self, which: CascadeState) -> StrategyState {
        let mut s = StrategyState::refusal(self.net.num_players());
        self.layout.write_state(which, &mut s);
        s
    }
}

/// Canonical cascade configuration as a fragment over the cascade's players.
pub fn cascade_state(layout: &CascadeLayout, which: CascadeState) -> Vec<(PlayerId, Strategy)> {
    layout.state_fragment(which)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn incoming<S: Scalar>(net: &Network<S>, v: PlayerId, class: EdgeClass) -> usize {
        net.edges().iter().filter(|e| e.dst == v && e.class == class).count()
    }

    #[test]
    fn player_counts() {
        let small = build_cascade(&CascadeParams::<Rational>::minimal()).unwrap();
        assert_eq!(small.net.num_players(), 30);
        let big = build_cascade(&CascadeParams::<Rational>::integral()).unwrap();
        assert_eq!(big.net.num_players(), 66);
        assert_eq!(big.layout.players().len(), 66);
        assert_eq!(big.layout.rank(Letter::B).members.len(), 20);
    }

    #[test]
    fn edge_classes_per_role() {
        let p = CascadeParams::<Rational>::minimal();
        let a = build_cascade(&p).unwrap();
        let l = &a.layout;
        for s in l.spirit_ids() {
            assert_eq!(incoming(&a.net, s, EdgeClass::Inclination), 0);
            assert_eq!(incoming(&a.net, s, EdgeClass::Control), 1);
            assert_eq!(incoming(&a.net, s, EdgeClass::Emotional), 4 * p.n);
            assert_eq!(a.net.player(s).unwrap().available.len(), 1);
        }
        for h in l.human_ids() {
            assert_eq!(incoming(&a.net, h, EdgeClass::Inclination), 1);
            assert_eq!(incoming(&a.net, h, EdgeClass::Emotional), 2 * p.n);
            assert_eq!(a.net.player(h).unwrap().available.len(), 2);
        }
        for m in &l.rank(Letter::A).members {
            assert_eq!(incoming(&a.net, *m, EdgeClass::Control), 1);
        }
        assert_eq!(incoming(&a.net, l.input_anchor, EdgeClass::Control), 0);
        assert!(a.net.edges().iter().all(|e| e.src != l.output_source || e.class != EdgeClass::Control));
    }

    #[test]
    fn first_member_leans_to_main() {
        let a = build_cascade(&CascadeParams::<Rational>::minimal()).unwrap();
        let l = &a.layout;
        for rank in &l.ranks {
            for (k, m) in rank.members.iter().enumerate() {
                let src = a
                    .net
                    .edges()
                    .iter()
                    .find(|e| e.dst == *m && e.class == EdgeClass::Inclination)
                    .unwrap()
                    .src;
                let lean = if k == 0 { rank.main } else { rank.secondaries[k] };
                assert_eq!(src, l.spirits[lean.index()][0]);
            }
        }
    }

    #[test]
    fn state_fragments() {
        let a = build_cascade(&CascadeParams::<Rational>::minimal()).unwrap();
        let l = &a.layout;
        let first = a.state(CascadeState::First);
        let second = a.state(CascadeState::Second);
        assert_eq!(l.recognize(&first), Some(CascadeState::First));
        assert_eq!(l.recognize(&second), Some(CascadeState::Second));
        assert_eq!(l.recognize(&StrategyState::refusal(30)), None);
        for s in l.spirit_ids() {
            assert_eq!(first.get(s), second.get(s));
        }
        let b = l.rank(Letter::B);
        assert_eq!(first.get(b.first()), Some(Strategy::Use(l.product(Letter::B))));
        assert_eq!(second.get(b.members[0]), Some(Strategy::Use(l.product(Letter::C))));
        assert_eq!(second.get(b.members[1]), Some(Strategy::Use(l.product(Letter::A))));
        assert_eq!(CascadeState::First.other(), CascadeState::Second);
        assert_eq!(l.role(b.members[3]).as_deref(), Some("rank:B:3"));
    }

    #[test]
    fn influence_preconditions() {
        let p = CascadeParams::<Rational>::minimal();
        let mut b = NetworkBuilder::new();
        let mut l = place_cascade(&mut b, &p).unwrap();
        let member = l.rank(Letter::A).members[0];
        let err = l.attach_influence(&mut b, member, &[Letter::A], &p.e).unwrap_err();
        assert!(matches!(err, Error::InfluencePrecondition { player, .. } if player == member));
        let d = b.product("D");
        let outsider = b.add_player("x", &[(d, p.theta)]);
        assert!(l.attach_influence(&mut b, outsider, &[Letter::A], &p.e).is_err());
        let fine = b.add_player("y", &[(l.product(Letter::B), p.theta)]);
        let before = l.influence.len();
        l.attach_influence(&mut b, fine, &[Letter::A, Letter::C], &p.e).unwrap();
        assert_eq!(l.influence.len(), before + 2);
        let blocked = b.add_player("z", &[(l.product(Letter::B), p.theta)]);
        assert!(l
            .attach_influence_anticipating(&mut b, blocked, &[Letter::A], &p.e, &[l.product(Letter::A)])
            .is_err());
    }

    #[test]
    fn rejects_infeasible_params() {
        let p = CascadeParams::<Rational>::minimal().with_n(3);
        assert!(matches!(build_cascade(&p), Err(Error::InvalidParams(_))));
    }
}
