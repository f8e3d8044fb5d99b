//! Wiring of the example networks around a cascade.

use super::{Claim, Mutation, ParadoxCase, ParadoxKind, ScenarioKind};
use crate::cascade::{place_cascade, CascadeLayout, CascadeParams, CascadeState, Letter};
use crate::error::Result;
use crate::game::{EdgeClass, EdgeSelector, NetworkBuilder, PlayerId, ProductId, Strategy, StrategyState};
use crate::scalar::Scalar;

/// Every buildable example. The decrease scenarios take the reduced weight
/// as a [`Reduction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseName {
    Paradox(ParadoxKind),
    Scenario(ScenarioKind, Reduction),
}

/// Target weight of a decreased edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Reduction {
    #[default]
    Zero,
    /// `(i - e) / 2`: any value below `i - e` behaves like zero.
    HalfGap,
}

impl CaseName {
    pub const ALL: [CaseName; 10] = [
        CaseName::Paradox(ParadoxKind::Vulnerable),
        CaseName::Paradox(ParadoxKind::Fragile),
        CaseName::Paradox(ParadoxKind::Ineffective),
        CaseName::Paradox(ParadoxKind::Unsafe),
        CaseName::Scenario(ScenarioKind::DecreaseAllWorse, Reduction::Zero),
        CaseName::Scenario(ScenarioKind::DecreaseAllBetter, Reduction::Zero),
        CaseName::Scenario(ScenarioKind::DecreaseLoop, Reduction::Zero),
        CaseName::Scenario(ScenarioKind::IncreaseAllWorse, Reduction::Zero),
        CaseName::Scenario(ScenarioKind::IncreaseAllBetter, Reduction::Zero),
        CaseName::Scenario(ScenarioKind::IncreaseLoop, Reduction::Zero),
    ];

    pub fn claim(self) -> Claim {
        match self {
            CaseName::Paradox(k) => Claim::Paradox(k),
            CaseName::Scenario(k, _) => Claim::Scenario(k),
        }
    }

    pub fn name(self) -> String {
        match self {
            CaseName::Paradox(k) => k.name().to_string(),
            CaseName::Scenario(k, Reduction::HalfGap) if k.is_decrease() => format!("{}-half-gap", k.name()),
            CaseName::Scenario(k, _) => k.name().to_string(),
        }
    }

    /// Parses a case name; `-half-gap` selects the reduced-weight variant of
    /// a decrease scenario.
    pub fn parse(s: &str) -> Option<CaseName> {
        let (base, reduction) = match s.strip_suffix("-half-gap") {
            Some(b) => (b, Reduction::HalfGap),
            None => (s, Reduction::Zero),
        };
        if let Some(k) = ParadoxKind::parse(base) {
            return (reduction == Reduction::Zero).then_some(CaseName::Paradox(k));
        }
        let k = ScenarioKind::parse(base)?;
        if reduction == Reduction::HalfGap && !k.is_decrease() {
            return None;
        }
        Some(CaseName::Scenario(k, reduction))
    }
}

/// One example placed into a shared builder.
#[derive(Debug, Clone)]
pub(crate) struct Part<S> {
    pub name: CaseName,
    pub layout: CascadeLayout,
    pub externals: Vec<PlayerId>,
    /// Strategies of the example's players in its start state.
    pub start: Vec<(PlayerId, Strategy)>,
    pub mutation: Mutation<S>,
    /// Products a mutation will add, per external player.
    pub anticipated: Vec<(PlayerId, ProductId)>,
}

struct Kit<'a, S> {
    b: &'a mut NetworkBuilder<S>,
    p: &'a CascadeParams<S>,
    layout: CascadeLayout,
    externals: Vec<PlayerId>,
}

impl<S: Scalar> Kit<'_, S> {
    fn t(&self, l: Letter) -> ProductId {
        self.layout.product(l)
    }

    fn player(&mut self, label: &str, offer: &[Letter]) -> PlayerId {
        let offer: Vec<_> = offer.iter().map(|l| (self.t(*l), self.p.theta.clone())).collect();
        let id = self.b.add_player(label, &offer);
        self.externals.push(id);
        id
    }

    fn incline(&mut self, v: PlayerId, to: Letter) {
        let spirit = self.layout.spirits[to.index()][0];
        self.b.add_edge(spirit, v, self.p.i.clone(), EdgeClass::Inclination);
    }

    fn influence(&mut self, v: PlayerId, rank: Letter, anticipated: &[Letter]) -> Result<()> {
        let extra: Vec<ProductId> = anticipated.iter().map(|l| self.t(*l)).collect();
        self.layout
            .attach_influence_anticipating(self.b, v, &[rank], &self.p.e, &extra)
    }

    fn control(&mut self, src: PlayerId, dst: PlayerId) {
        self.b.add_edge(src, dst, self.p.c.clone(), EdgeClass::Control);
    }

    fn dashed(&mut self, src: PlayerId, dst: PlayerId) {
        self.b.add_edge(src, dst, S::zero(), EdgeClass::Control);
    }

    fn start(&self, which: CascadeState, ext: &[(PlayerId, Letter)]) -> Vec<(PlayerId, Strategy)> {
        let mut out = self.layout.state_fragment(which);
        out.extend(ext.iter().map(|(v, l)| (*v, Strategy::Use(self.t(*l)))));
        out
    }

    fn reduced(&self, r: Reduction) -> S {
        match r {
            Reduction::Zero => S::zero(),
            Reduction::HalfGap => (self.p.i.clone() - self.p.e.clone()) / S::from_int(2),
        }
    }

    fn select(src: PlayerId, dst: PlayerId) -> EdgeSelector {
        EdgeSelector::Endpoints {
            src,
            dst,
            class: Some(EdgeClass::Control),
        }
    }

    fn part(self, name: CaseName, start: Vec<(PlayerId, Strategy)>, mutation: Mutation<S>) -> Part<S> {
        Part {
            name,
            layout: self.layout,
            externals: self.externals,
            start,
            mutation,
            anticipated: Vec::new(),
        }
    }
}

/// Places the cascade and external players of one example into `b`.
pub(crate) fn place_example<S: Scalar>(
    b: &mut NetworkBuilder<S>,
    p: &CascadeParams<S>,
    name: CaseName,
) -> Result<Part<S>> {
    let layout = place_cascade(b, p)?;
    let mut k = Kit {
        b,
        p,
        layout,
        externals: Vec::new(),
    };
    use Letter::{A, B, C};
    let anchor = k.layout.input_anchor;
    let output = k.layout.output_source;
    let part = match name {
        CaseName::Paradox(kind @ (ParadoxKind::Vulnerable | ParadoxKind::Fragile)) => {
            let p1 = k.player("p1", &[A]);
            let p2 = k.player("p2", &[B, C]);
            if kind == ParadoxKind::Fragile {
                k.incline(p1, A);
            }
            k.incline(p2, C);
            k.influence(p1, B, &[C])?;
            k.influence(p2, A, &[])?;
            k.control(p1, anchor);
            k.control(output, p2);
            k.control(p2, p1);
            let start = k.start(CascadeState::Second, &[(p1, A), (p2, C)]);
            let mutation = Mutation::Expand {
                player: p1,
                product: k.t(C),
                threshold: p.theta.clone(),
            };
            let mut part = k.part(name, start, mutation);
            part.anticipated.push((p1, part.layout.product(C)));
            part
        }
        CaseName::Paradox(ParadoxKind::Ineffective) | CaseName::Scenario(ScenarioKind::DecreaseAllBetter, _) => {
            let p1 = k.player("p1", &[B, A]);
            k.incline(p1, A);
            k.influence(p1, C, &[])?;
            k.control(output, p1);
            k.control(p1, anchor);
            let start = k.start(CascadeState::First, &[(p1, B)]);
            let mutation = match name {
                CaseName::Scenario(_, r) => Mutation::SetWeight {
                    edge: Kit::<S>::select(output, p1),
                    weight: k.reduced(r),
                },
                _ => Mutation::Contract {
                    player: p1,
                    product: k.t(B),
                },
            };
            k.part(name, start, mutation)
        }
        CaseName::Paradox(ParadoxKind::Unsafe) | CaseName::Scenario(ScenarioKind::DecreaseLoop, _) => {
            let contraction = matches!(name, CaseName::Paradox(_));
            let p1 = if contraction { k.player("p1", &[B, C]) } else { k.player("p1", &[C]) };
            let p2 = k.player("p2", &[C, A]);
            let p3 = k.player("p3", &[B, C]);
            k.incline(p1, C);
            k.incline(p2, A);
            k.incline(p3, C);
            k.influence(p2, B, &[])?;
            k.influence(p3, A, &[])?;
            k.control(p1, p2);
            k.control(p2, anchor);
            k.control(output, p3);
            k.control(p3, p2);
            let start = k.start(CascadeState::First, &[(p1, C), (p2, C), (p3, B)]);
            let mutation = match name {
                CaseName::Scenario(_, r) => Mutation::SetWeight {
                    edge: Kit::<S>::select(p1, p2),
                    weight: k.reduced(r),
                },
                _ => Mutation::Contract {
                    player: p1,
                    product: k.t(C),
                },
            };
            k.part(name, start, mutation)
        }
        CaseName::Scenario(ScenarioKind::DecreaseAllWorse, r) => {
            k.control(output, anchor);
            let start = k.start(CascadeState::Second, &[]);
            let w = k.reduced(r);
            k.part(
                name,
                start,
                Mutation::SetWeight {
                    edge: Kit::<S>::select(output, anchor),
                    weight: w,
                },
            )
        }
        CaseName::Scenario(kind @ (ScenarioKind::IncreaseAllWorse | ScenarioKind::IncreaseLoop), _) => {
            let p1 = k.player("p1", &[C, A]);
            let p2 = k.player("p2", &[B, C]);
            if kind == ScenarioKind::IncreaseLoop {
                k.incline(p1, A);
            }
            k.incline(p2, C);
            k.influence(p1, B, &[])?;
            k.influence(p2, A, &[])?;
            k.control(p1, anchor);
            k.control(output, p2);
            k.dashed(p2, p1);
            let start = k.start(CascadeState::Second, &[(p1, A), (p2, C)]);
            let mutation = Mutation::SetWeight {
                edge: Kit::<S>::select(p2, p1),
                weight: p.c.clone(),
            };
            k.part(name, start, mutation)
        }
        CaseName::Scenario(ScenarioKind::IncreaseAllBetter, _) => {
            let p1 = k.player("p1", &[A]);
            let p2 = k.player("p2", &[A, B]);
            k.incline(p1, A);
            k.incline(p2, A);
            k.influence(p1, C, &[])?;
            k.influence(p2, C, &[])?;
            k.dashed(p1, p2);
            k.control(p2, anchor);
            k.control(output, p2);
            let start = k.start(CascadeState::First, &[(p1, A), (p2, B)]);
            let mutation = Mutation::SetWeight {
                edge: Kit::<S>::select(p1, p2),
                weight: p.c.clone(),
            };
            k.part(name, start, mutation)
        }
    };
    Ok(part)
}

/// Builds one example network with its start state and mutation.
pub fn build_example<S: Scalar>(name: CaseName, p: &CascadeParams<S>) -> Result<ParadoxCase<S>> {
    let mut b = NetworkBuilder::new();
    let part = place_example(&mut b, p, name)?;
    let net = b.build();
    let mut start = StrategyState::refusal(net.num_players());
    for (v, s) in &part.start {
        start.set(*v, *s);
    }
    Ok(ParadoxCase {
        name: name.name(),
        claim: name.claim(),
        net,
        start,
        mutation: part.mutation,
        layouts: vec![part.layout],
        externals: part.externals,
        scope: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_equilibrium;
    use crate::Rational;

    #[test]
    fn names_round_trip() {
        for c in CaseName::ALL {
            assert_eq!(CaseName::parse(&c.name()), Some(c));
        }
        let half = CaseName::Scenario(ScenarioKind::DecreaseLoop, Reduction::HalfGap);
        assert_eq!(CaseName::parse(&half.name()), Some(half));
        assert_eq!(CaseName::parse("inc-loop-half-gap"), None);
        assert_eq!(CaseName::parse("vulnerable-half-gap"), None);
        assert_eq!(CaseName::parse("braess"), None);
    }

    #[test]
    fn player_counts() {
        let p = CascadeParams::<Rational>::minimal();
        let count = |n: CaseName| build_example(n, &p).unwrap().net.num_players();
        assert_eq!(count(CaseName::Paradox(ParadoxKind::Vulnerable)), 32);
        assert_eq!(count(CaseName::Paradox(ParadoxKind::Ineffective)), 31);
        assert_eq!(count(CaseName::Paradox(ParadoxKind::Unsafe)), 33);
        assert_eq!(
            count(CaseName::Scenario(ScenarioKind::DecreaseAllWorse, Reduction::Zero)),
            30
        );
    }

    #[test]
    fn unsafe_external_players() {
        let p = CascadeParams::<Rational>::minimal();
        let case = build_example(CaseName::Paradox(ParadoxKind::Unsafe), &p).unwrap();
        let offers: Vec<Vec<&str>> = case
            .externals
            .iter()
            .map(|v| {
                case.net.players()[v.index()]
                    .available
                    .iter()
                    .map(|t| case.net.product_name(*t).unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(offers, vec![vec!["B", "C"], vec!["A", "C"], vec!["B", "C"]]);
    }

    #[test]
    fn every_start_is_an_equilibrium() {
        let p = CascadeParams::<Rational>::minimal();
        for name in CaseName::ALL {
            let case = build_example(name, &p).unwrap();
            assert!(is_equilibrium(&case.net, &case.start).unwrap(), "{}", case.name);
        }
    }

    #[test]
    fn only_three_products() {
        let p = CascadeParams::<Rational>::minimal();
        for name in CaseName::ALL {
            let case = build_example(name, &p).unwrap();
            assert_eq!(case.net.num_products(), 3, "{}", case.name);
        }
    }
}
