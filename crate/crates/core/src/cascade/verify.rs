//! Machine checks of the cascade's behaviour in isolation.
//!
//! A standalone cascade is wrapped in a [`CascadeHarness`]: the external input
//! is a frozen driver (a stimulus-style pair of single-product players whose
//! head feeds the input anchor), and the output edge ends at an observer that
//! can use every product, so its best response shows what the output rewards.
//! Neither is a cascade player; both are excluded from payoff assertions.

use serde::Serialize;

use super::build::{letters, place_cascade, place_rank, place_stimuli, CascadeLayout, CascadeState, Letter, Rank};
use super::emotional::EmotionalMonitor;
use super::params::{validate_params, CascadeParams};
use crate::dynamics::{unique_chain, Chain, ChainFailure, ExploreLimits};
use crate::error::{Error, Result};
use crate::game::{
    is_equilibrium, payoff_if, payoff_vector, EdgeClass, Move, MoveRule, Network, NetworkBuilder, PlayerId, Strategy,
    StrategyState,
};
use crate::scalar::Scalar;

fn chain_limits<S>(p: &CascadeParams<S>) -> ExploreLimits {
    ExploreLimits::states(64 * (p.n + 1))
}

fn describe_failure<S: Scalar>(f: &ChainFailure<S>) -> String {
    match f {
        ChainFailure::Branching { step, moves, .. } => {
            let list: Vec<String> = moves
                .iter()
                .map(|m| format!("{}->{} (+{})", m.player, m.to.code(), m.gain.display_scalar()))
                .collect();
            format!("{} moves available after step {step}: {}", moves.len(), list.join(", "))
        }
        ChainFailure::Cycle { step, .. } => format!("state repeats at step {step}"),
        ChainFailure::Truncated { steps } => format!("no equilibrium within {steps} steps"),
        ChainFailure::Invalid(e) => e.to_string(),
    }
}

fn add_driver<S: Scalar>(
    b: &mut NetworkBuilder<S>,
    p: &CascadeParams<S>,
    products: &[crate::game::ProductId; 3],
    input: Letter,
    target: PlayerId,
) -> [PlayerId; 2] {
    let t = products[input.index()];
    let head = b.add_player(format!("driver:{input}"), &[(t, p.theta.clone())]);
    let mate = b.add_player(format!("driver:{input}"), &[(t, p.theta.clone())]);
    b.add_edge(head, mate, p.c.clone(), EdgeClass::Control);
    b.add_edge(mate, head, p.c.clone(), EdgeClass::Control);
    b.add_edge(head, target, p.c.clone(), EdgeClass::Control);
    [head, mate]
}

/// Extra players that only receive emotional edges. They live in a separate
/// copy of the network so they never take part in the dynamics; states of
/// the plain network extend to it by appending refusals.
#[derive(Debug, Clone)]
pub struct ProbeNet<S> {
    pub net: Network<S>,
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub id: PlayerId,
    pub available: Vec<Letter>,
    pub ranks: Vec<Letter>,
}

impl<S: Scalar> ProbeNet<S> {
    pub fn extend(&self, s: &StrategyState) -> StrategyState {
        let mut v = s.to_vec();
        v.resize(self.net.num_players(), Strategy::Refusal);
        StrategyState::new(v)
    }

    /// Emotional payoff the probe would collect on product `t`.
    pub fn bonus(&self, s: &StrategyState, probe: &Probe, t: crate::game::ProductId, theta: &S) -> S {
        payoff_if(&self.net, &self.extend(s), probe.id, Strategy::Use(t)).expect("probe state") + theta.clone()
    }
}

// Probes: for each rank, one over both secondaries and one over the first
// secondary; plus one C-only probe under the A- and B-ranks together.
fn add_probes<S: Scalar>(
    mut b: NetworkBuilder<S>,
    layout: &CascadeLayout,
    p: &CascadeParams<S>,
    ranks: &[Letter],
) -> Result<ProbeNet<S>> {
    let mut layout = layout.clone();
    let mut probes = Vec::new();
    let mut plan: Vec<(Vec<Letter>, Vec<Letter>)> = Vec::new();
    for &r in ranks {
        plan.push((r.secondaries().to_vec(), vec![r]));
        plan.push((vec![r.secondaries()[0]], vec![r]));
    }
    if ranks.contains(&Letter::A) && ranks.contains(&Letter::B) {
        plan.push((vec![Letter::C], vec![Letter::A, Letter::B]));
    }
    for (available, by) in plan {
        let offer: Vec<_> = available.iter().map(|l| (layout.product(*l), p.theta.clone())).collect();
        let id = b.add_player("probe", &offer);
        layout.attach_influence(&mut b, id, &by, &p.e)?;
        probes.push(Probe {
            id,
            available,
            ranks: by,
        });
    }
    Ok(ProbeNet { net: b.build(), probes })
}

/// A cascade with a frozen input driver and an output observer.
#[derive(Debug, Clone)]
pub struct CascadeHarness<S> {
    pub net: Network<S>,
    pub layout: CascadeLayout,
    pub params: CascadeParams<S>,
    pub input: Option<Letter>,
    pub driver: Option<[PlayerId; 2]>,
    pub observer: PlayerId,
    pub probe_net: ProbeNet<S>,
}

/// Builds a standalone cascade whose incoming control edge rewards `input`
/// (or is absent when `None`).
pub fn harness<S: Scalar>(p: &CascadeParams<S>, input: Option<Letter>) -> Result<CascadeHarness<S>> {
    let mut b = NetworkBuilder::new();
    let layout = place_cascade(&mut b, p)?;
    let driver = input.map(|l| add_driver(&mut b, p, &layout.products, l, layout.input_anchor));
    let offer: Vec<_> = layout.products.iter().map(|t| (*t, p.theta.clone())).collect();
    let observer = b.add_player("observer", &offer);
    b.add_edge(layout.output_source, observer, p.c.clone(), EdgeClass::Control);
    let probe_net = add_probes(b.clone(), &layout, p, &Letter::ALL)?;
    Ok(CascadeHarness {
        net: b.build(),
        layout,
        params: p.clone(),
        input,
        driver,
        observer,
        probe_net,
    })
}

impl<S: Scalar> CascadeHarness<S> {
    /// Canonical cascade state with the driver on its product and the
    /// observer following the output.
    pub fn state(&self, which: CascadeState) -> StrategyState {
        let mut s = StrategyState::refusal(self.net.num_players());
        self.layout.write_state(which, &mut s);
        if let (Some(d), Some(l)) = (self.driver, self.input) {
            for id in d {
                s.set(id, Strategy::Use(self.layout.product(l)));
            }
        }
        let out = s.get(self.layout.output_source).expect("output source");
        s.set(self.observer, out);
        s
    }

    /// Product the observer is pulled to by the output edge in `s`.
    pub fn output_reward(&self, s: &StrategyState) -> Option<Letter> {
        s.get(self.layout.output_source)
            .and_then(Strategy::product)
            .and_then(|t| self.layout.letter_of(t))
    }

    pub fn cascade_players(&self) -> Vec<PlayerId> {
        self.layout.players()
    }
}

/// Outcome of switching the input of a cascade resting in a canonical state.
#[derive(Debug, Clone, Serialize)]
pub struct FlipReport {
    pub from: CascadeState,
    pub input: Option<Letter>,
    pub unique: bool,
    pub failure: Option<String>,
    pub moves: usize,
    /// Moves by members of the A-, B- and C-rank.
    pub moves_per_rank: [usize; 3],
    pub members_in_order: bool,
    pub outsiders_moved: Vec<PlayerId>,
    pub reached: Option<CascadeState>,
    pub states_checked: usize,
    pub invariant_violations: usize,
    pub probe_violations: usize,
    pub max_imbalance: usize,
}

impl FlipReport {
    pub fn passed(&self, n: usize) -> bool {
        self.unique
            && self.reached == Some(self.from.other())
            && self.moves_per_rank.iter().all(|m| *m == 2 * n)
            && self.members_in_order
            && self.invariant_violations == 0
            && self.probe_violations == 0
    }
}

fn rank_moves_in_order<S>(rank: &Rank, moves: &[Move<S>]) -> (usize, bool) {
    let seq: Vec<PlayerId> = moves
        .iter()
        .map(|m| m.player)
        .filter(|p| rank.members.contains(p))
        .collect();
    let in_order = seq == rank.members || seq.is_empty();
    (seq.len(), in_order)
}

fn max_imbalance(monitor: &EmotionalMonitor, s: &StrategyState, players: &[PlayerId], net_avail: &dyn Fn(PlayerId) -> Vec<usize>) -> usize {
    players
        .iter()
        .map(|v| {
            let counts = monitor.counts(s, *v);
            let vals: Vec<usize> = net_avail(*v).into_iter().map(|t| counts[t]).collect();
            match (vals.iter().min(), vals.iter().max()) {
                (Some(lo), Some(hi)) => hi - lo,
                _ => 0,
            }
        })
        .max()
        .unwrap_or(0)
}

/// Rests the cascade in `from` (an equilibrium under its own input) and
/// replaces the input with `input`; then follows the improvement chain.
pub fn verify_flip<S: Scalar>(
    p: &CascadeParams<S>,
    from: CascadeState,
    input: Option<Letter>,
    rule: MoveRule,
) -> Result<FlipReport> {
    let h = harness(p, input)?;
    let start = h.state(from);
    let result = unique_chain(&h.net, &start, &chain_limits(p), rule);
    let mut report = FlipReport {
        from,
        input,
        unique: result.is_ok(),
        failure: result.as_ref().err().map(describe_failure),
        moves: 0,
        moves_per_rank: [0; 3],
        members_in_order: false,
        outsiders_moved: Vec::new(),
        reached: None,
        states_checked: 0,
        invariant_violations: 0,
        probe_violations: 0,
        max_imbalance: 0,
    };
    let Ok(chain) = result else {
        return Ok(report);
    };
    fill_chain_stats(&h, &chain, &mut report);
    Ok(report)
}

fn fill_chain_stats<S: Scalar>(h: &CascadeHarness<S>, chain: &Chain<S>, report: &mut FlipReport) {
    report.moves = chain.moves.len();
    let mut in_order = true;
    for l in Letter::ALL {
        let (count, ok) = rank_moves_in_order(h.layout.rank(l), &chain.moves);
        report.moves_per_rank[l.index()] = count;
        in_order &= ok;
    }
    report.members_in_order = in_order;
    let humans: Vec<PlayerId> = h.layout.human_ids().collect();
    report.outsiders_moved = chain
        .moves
        .iter()
        .map(|m| m.player)
        .filter(|p| !humans.contains(p))
        .collect();
    report.reached = h.layout.recognize(chain.terminal());

    let monitor = EmotionalMonitor::new(&h.net);
    let probe_monitor = EmotionalMonitor::new(&h.probe_net.net);
    let influenced: Vec<PlayerId> = monitor.influenced().collect();
    let avail = |v: PlayerId| -> Vec<usize> {
        h.probe_net.net.players()[v.index()].available.iter().map(|t| t.index()).collect()
    };
    for s in &chain.states {
        report.states_checked += 1;
        report.invariant_violations += monitor.violations(s).len();
        let ext = h.probe_net.extend(s);
        report.probe_violations += h
            .probe_net
            .probes
            .iter()
            .filter(|pr| !probe_monitor.holds_for(&ext, pr.id))
            .count();
        report.max_imbalance = report.max_imbalance.max(max_imbalance(&monitor, s, &influenced, &avail));
    }
}

/// Outcome of driving one rank in isolation.
#[derive(Debug, Clone, Serialize)]
pub struct RankChainReport {
    pub rank: Letter,
    pub input: Option<Letter>,
    pub start: CascadeState,
    pub expected: CascadeState,
    pub unique: bool,
    pub failure: Option<String>,
    pub moves: usize,
    pub members_in_order: bool,
    pub terminal_matches: bool,
    pub invariant_violations: usize,
}

impl RankChainReport {
    pub fn passed(&self, n: usize) -> bool {
        let expected_moves = if self.start == self.expected { 0 } else { 2 * n };
        self.unique
            && self.terminal_matches
            && self.members_in_order
            && self.moves == expected_moves
            && self.invariant_violations == 0
    }
}

/// Drives a lone rank with main product `rank` from `start` with its first
/// member's incoming control edge rewarding `input` (absent when `None`),
/// and checks that the first member's forced choice spreads along the rank
/// as the only possible chain, with an outside observer of the rank's
/// emotional edges kept in balance throughout.
pub fn verify_rank_chain<S: Scalar>(
    p: &CascadeParams<S>,
    rank: Letter,
    input: Option<Letter>,
    start: CascadeState,
    rule: MoveRule,
) -> Result<RankChainReport> {
    validate_params(p).map_err(Error::InvalidParams)?;
    let mut b = NetworkBuilder::new();
    let products = letters(&mut b);
    let spirits = place_stimuli(&mut b, p, &products);
    let r = place_rank(&mut b, p, &products, &spirits, rank);
    let driver = input.map(|l| add_driver(&mut b, p, &products, l, r.first()));
    let net = b.clone().build();

    // observer of the rank's emotional edges, outside the dynamics
    let alt = rank.secondaries();
    let probe = b.add_player(
        "probe",
        &[(products[alt[0].index()], p.theta.clone()), (products[alt[1].index()], p.theta.clone())],
    );
    for &m in &r.members {
        b.add_edge(m, probe, p.e.clone(), EdgeClass::Emotional);
    }
    let probe_net = b.build();
    let monitor = EmotionalMonitor::new(&probe_net);

    let mut s = StrategyState::refusal(net.num_players());
    for l in Letter::ALL {
        for sp in spirits[l.index()] {
            s.set(sp, Strategy::Use(products[l.index()]));
        }
    }
    if let (Some(d), Some(l)) = (driver, input) {
        for id in d {
            s.set(id, Strategy::Use(products[l.index()]));
        }
    }
    let write_rank = |s: &mut StrategyState, which: CascadeState| {
        for (k, m) in r.members.iter().enumerate() {
            s.set(*m, Strategy::Use(products[r.choice(k, which).index()]));
        }
    };
    write_rank(&mut s, start);

    let expected = if input == Some(alt[0]) {
        CascadeState::Second
    } else {
        CascadeState::First
    };
    let mut target = s.clone();
    write_rank(&mut target, expected);

    let result = unique_chain(&net, &s, &chain_limits(p), rule);
    let mut report = RankChainReport {
        rank,
        input,
        start,
        expected,
        unique: result.is_ok(),
        failure: result.as_ref().err().map(describe_failure),
        moves: 0,
        members_in_order: false,
        terminal_matches: false,
        invariant_violations: 0,
    };
    if let Ok(chain) = result {
        report.moves = chain.moves.len();
        let (count, ordered) = rank_moves_in_order(&r, &chain.moves);
        report.members_in_order = ordered && count == chain.moves.len();
        report.terminal_matches = *chain.terminal() == target;
        for st in &chain.states {
            let mut ext = st.to_vec();
            ext.push(Strategy::Refusal);
            if !monitor.holds_for(&StrategyState::new(ext), probe) {
                report.invariant_violations += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct PlayerGap {
    pub player: PlayerId,
    pub role: String,
    pub first: String,
    pub second: String,
    pub gap: String,
}

/// Second-state minus first-state payoff of every cascade player.
#[derive(Debug, Clone)]
pub struct PayoffGapReport<S> {
    pub bound: S,
    /// (player, worst first-state payoff, second-state payoff, gap)
    pub gaps: Vec<(PlayerId, S, S, S)>,
    pub min_gap: S,
    pub spirit_gains: Vec<S>,
    pub second_is_equilibrium: bool,
    pub first_is_equilibrium: bool,
    pub roles: Vec<String>,
}

impl<S: Scalar> PayoffGapReport<S> {
    pub fn passed(&self) -> bool {
        self.second_is_equilibrium && self.first_is_equilibrium && self.gaps.iter().all(|g| g.3 >= self.bound)
    }

    pub fn rows(&self) -> Vec<PlayerGap> {
        self.gaps
            .iter()
            .zip(&self.roles)
            .map(|((p, f, s, g), role)| PlayerGap {
                player: *p,
                role: role.clone(),
                first: f.display_scalar(),
                second: s.display_scalar(),
                gap: g.display_scalar(),
            })
            .collect()
    }
}

/// Compares the second state (input rewarding A) with the first state under
/// every other input (B, C, or none) and takes each player's smallest gap.
pub fn verify_payoff_gap<S: Scalar>(p: &CascadeParams<S>) -> Result<PayoffGapReport<S>> {
    let hs = harness(p, Some(Letter::A))?;
    let second_state = hs.state(CascadeState::Second);
    let second = payoff_vector(&hs.net, &second_state)?;
    let second_is_equilibrium = is_equilibrium(&hs.net, &second_state)?;

    let mut first_is_equilibrium = true;
    let mut firsts: Vec<Vec<S>> = Vec::new();
    for input in [Some(Letter::B), Some(Letter::C), None] {
        let h = harness(p, input)?;
        let s = h.state(CascadeState::First);
        first_is_equilibrium &= is_equilibrium(&h.net, &s)?;
        firsts.push(payoff_vector(&h.net, &s)?);
    }

    let players = hs.cascade_players();
    let mut gaps = Vec::with_capacity(players.len());
    let mut roles = Vec::with_capacity(players.len());
    for v in &players {
        let k = v.index();
        let worst_first = firsts
            .iter()
            .map(|f| f[k].clone())
            .reduce(|a, b| if b > a { b } else { a })
            .expect("three boundaries");
        let gap = second[k].clone() - worst_first.clone();
        gaps.push((*v, worst_first, second[k].clone(), gap));
        roles.push(hs.layout.role(*v).unwrap_or_default());
    }
    let min_gap = gaps
        .iter()
        .map(|g| g.3.clone())
        .reduce(|a, b| if b < a { b } else { a })
        .expect("cascade has players");
    let spirits: Vec<PlayerId> = hs.layout.spirit_ids().collect();
    let spirit_gains = gaps
        .iter()
        .filter(|g| spirits.contains(&g.0))
        .map(|g| g.3.clone())
        .collect();
    Ok(PayoffGapReport {
        bound: p.gap_bound(),
        gaps,
        min_gap,
        spirit_gains,
        second_is_equilibrium,
        first_is_equilibrium,
        roles,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemCheck {
    pub item: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertiesReport {
    pub items: Vec<ItemCheck>,
    pub flips: Vec<FlipReport>,
}

impl PropertiesReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// Item-by-item checks of the eight structural and behavioural properties
/// a cascade guarantees to its surroundings.
pub fn verify_cascade_properties<S: Scalar>(p: &CascadeParams<S>, rule: MoveRule) -> Result<PropertiesReport> {
    let mut items = Vec::new();
    let ha = harness(p, Some(Letter::A))?;
    let cascade: Vec<PlayerId> = ha.layout.players();
    let inside = |v: PlayerId| cascade.contains(&v);

    // 1. ports
    let ctl_in = ha
        .net
        .edges()
        .iter()
        .filter(|e| e.class == EdgeClass::Control && !inside(e.src) && inside(e.dst))
        .collect::<Vec<_>>();
    let ctl_out = ha
        .net
        .edges()
        .iter()
        .filter(|e| e.class == EdgeClass::Control && inside(e.src) && !inside(e.dst))
        .collect::<Vec<_>>();
    items.push(ItemCheck {
        item: 1,
        title: "one incoming and one outgoing control edge",
        passed: ctl_in.len() == 1
            && ctl_out.len() == 1
            && ctl_in[0].dst == ha.layout.input_anchor
            && ctl_out[0].src == ha.layout.output_source,
        detail: format!("ports (in, out) = ({}, {})", ctl_in.len(), ctl_out.len()),
    });

    // 5 first: the flips supply the states used by items 2 and 8
    let flips = vec![
        verify_flip(p, CascadeState::Second, Some(Letter::C), rule)?,
        verify_flip(p, CascadeState::Second, Some(Letter::B), rule)?,
        verify_flip(p, CascadeState::Second, None, rule)?,
        verify_flip(p, CascadeState::First, Some(Letter::A), rule)?,
    ];

    // 2. inclination sources are spirits, fixed in every state
    let spirits: Vec<PlayerId> = ha.layout.spirit_ids().collect();
    let sources_ok = ha
        .net
        .edges()
        .iter()
        .filter(|e| e.class == EdgeClass::Inclination)
        .all(|e| spirits.contains(&e.src));
    let first = ha.state(CascadeState::First);
    let second = ha.state(CascadeState::Second);
    let spirits_fixed = spirits.iter().all(|s| first.get(*s) == second.get(*s));
    let spirits_never_move = flips.iter().all(|f| f.outsiders_moved.iter().all(|p| !spirits.contains(p)));
    items.push(ItemCheck {
        item: 2,
        title: "inclination sources reward a constant product",
        passed: sources_ok && spirits_fixed && spirits_never_move,
        detail: format!(
            "sources are spirits: {sources_ok}; spirits identical in both states: {spirits_fixed}; spirits never move: {spirits_never_move}"
        ),
    });

    // 3. input A: second state is an equilibrium, output rewards A
    let eq3 = is_equilibrium(&ha.net, &second)?;
    let out3 = ha.output_reward(&second);
    items.push(ItemCheck {
        item: 3,
        title: "input A: second state is an equilibrium, output rewards A",
        passed: eq3 && out3 == Some(Letter::A),
        detail: format!("equilibrium: {eq3}; output rewards {out3:?}"),
    });

    // 4. input B, C or none: first state is an equilibrium, output rewards B
    let mut ok4 = true;
    let mut detail4 = Vec::new();
    for input in [Some(Letter::B), Some(Letter::C), None] {
        let h = harness(p, input)?;
        let s = h.state(CascadeState::First);
        let eq = is_equilibrium(&h.net, &s)?;
        let out = h.output_reward(&s);
        ok4 &= eq && out == Some(Letter::B);
        detail4.push(format!("input {input:?}: equilibrium {eq}, output {out:?}"));
    }
    items.push(ItemCheck {
        item: 4,
        title: "other input: first state is an equilibrium, output rewards B",
        passed: ok4,
        detail: detail4.join("; "),
    });

    let ok5 = flips.iter().all(|f| f.passed(p.n));
    items.push(ItemCheck {
        item: 5,
        title: "switching the input yields the unique chain to the other state",
        passed: ok5,
        detail: flips
            .iter()
            .map(|f| {
                format!(
                    "{:?} with input {:?}: unique {}, reached {:?}, rank moves {:?}",
                    f.from, f.input, f.unique, f.reached, f.moves_per_rank
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
    });

    // 6. second state hands every cascade player emotional payoff; first none
    let monitor = EmotionalMonitor::new(&ha.net);
    let on_own = |s: &StrategyState, v: PlayerId| -> usize {
        match s.get(v) {
            Some(Strategy::Use(t)) => monitor.counts(s, v)[t.index()],
            _ => 0,
        }
    };
    let ok6 = cascade.iter().all(|v| on_own(&second, *v) >= p.n && on_own(&first, *v) == 0);
    items.push(ItemCheck {
        item: 6,
        title: "second state adds emotional payoff for every cascade player",
        passed: ok6,
        detail: format!(
            "min emotional edges on own product in second state: {}",
            cascade.iter().map(|v| on_own(&second, *v)).min().unwrap_or(0)
        ),
    });

    // 7. payoff gap
    let gap = verify_payoff_gap(p)?;
    items.push(ItemCheck {
        item: 7,
        title: "second-state payoffs exceed first-state payoffs by n*e - c - i",
        passed: gap.passed(),
        detail: format!(
            "min gap {} vs bound {}",
            gap.min_gap.display_scalar(),
            gap.bound.display_scalar()
        ),
    });

    // 8. external emotional influence
    let pn = &ha.probe_net;
    let mut ok8 = flips.iter().all(|f| f.probe_violations == 0);
    let mut detail8 = Vec::new();
    for probe in &pn.probes {
        for l in &probe.available {
            let t = ha.layout.product(*l);
            let on = pn.bonus(&second, probe, t, &p.theta);
            let off = pn.bonus(&first, probe, t, &p.theta);
            let expected = S::from_int(probe.ranks.len() as i64) * p.rank_bonus();
            ok8 &= on == expected && off == S::zero();
            detail8.push(format!(
                "probe {:?} under {:?} on {l}: second {} first {}",
                probe.available,
                probe.ranks,
                on.display_scalar(),
                off.display_scalar()
            ));
        }
    }
    items.push(ItemCheck {
        item: 8,
        title: "external influence keeps the invariant, pays n*e per rank in the second state only",
        passed: ok8,
        detail: detail8.join("; "),
    });

    items.sort_by_key(|i| i.item);
    Ok(PropertiesReport { items, flips })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn minimal_cascade_has_every_property() {
        let p = CascadeParams::<Rational>::minimal();
        let r = verify_cascade_properties(&p, MoveRule::BestResponse).unwrap();
        for item in &r.items {
            assert!(item.passed, "item {}: {}", item.item, item.detail);
        }
        for f in &r.flips {
            assert_eq!(f.moves, 6 * p.n + 1, "{f:?}");
        }
    }

    #[test]
    fn rank_follows_its_head() {
        let p = CascadeParams::<Rational>::minimal();
        for rank in Letter::ALL {
            for input in [None, Some(Letter::A), Some(Letter::B), Some(Letter::C)] {
                for start in [CascadeState::First, CascadeState::Second] {
                    let r = verify_rank_chain(&p, rank, input, start, MoveRule::BestResponse).unwrap();
                    assert!(r.passed(p.n), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn spirit_gain_is_two_ranks_of_emotion() {
        let p = CascadeParams::<Rational>::minimal();
        let r = verify_payoff_gap(&p).unwrap();
        assert!(r.passed());
        assert_eq!(r.spirit_gains.len(), 6);
        let two = Rational::from_integer(2) * p.rank_bonus();
        assert!(r.spirit_gains.iter().all(|g| *g == two));
        assert!(r.min_gap >= p.gap_bound());
    }

    #[test]
    fn harness_rejects_infeasible_params() {
        let p = CascadeParams::<Rational>::minimal().with_n(3);
        assert!(matches!(harness(&p, None), Err(Error::InvalidParams(_))));
    }
}
