//! Exhaustive exploration of improvement paths.
//!
//! The paradox definitions quantify over every improvement path from a start
//! state, so the verifiers build the whole reachable graph instead of
//! sampling runs. States are memoized, so a cycle in the graph is exactly an
//! infinite improvement path.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::game::{self, check_state, Move, MoveRule, Network, StrategyState};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreLimits {
    pub max_states: usize,
    pub max_depth: Option<usize>,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits {
            max_states: DEFAULT_MAX_STATES,
            max_depth: None,
        }
    }
}

impl ExploreLimits {
    pub fn states(max_states: usize) -> Self {
        ExploreLimits {
            max_states: max_states.max(1),
            max_depth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc<S> {
    pub mv: Move<S>,
    pub target: usize,
}

/// Reachable part of the improvement relation from one start state.
/// Node 0 is the start.
#[derive(Debug, Clone)]
pub struct ImprovementGraph<S> {
    rule: MoveRule,
    nodes: Vec<StrategyState>,
    index: HashMap<StrategyState, usize>,
    arcs: Vec<Vec<Arc<S>>>,
    expanded: Vec<bool>,
    parent: Vec<Option<(usize, usize)>>,
    sinks: Vec<usize>,
    has_cycle: bool,
    truncated: bool,
}

impl<S: Scalar> ImprovementGraph<S> {
    pub fn rule(&self) -> MoveRule {
        self.rule
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn state(&self, node: usize) -> &StrategyState {
        &self.nodes[node]
    }

    pub fn states(&self) -> &[StrategyState] {
        &self.nodes
    }

    pub fn node_of(&self, s: &StrategyState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn arcs(&self, node: usize) -> &[Arc<S>] {
        &self.arcs[node]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn max_out_degree(&self) -> usize {
        self.arcs.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Reached states with no allowed move: the equilibria among them.
    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn has_cycle(&self) -> bool {
        self.has_cycle
    }

    /// The state budget or depth bound stopped the search early.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Moves along the breadth-first tree from the start to `node`.
    pub fn path_to(&self, node: usize) -> Vec<Move<S>> {
        let mut out = Vec::new();
        let mut cur = node;
        while let Some((p, a)) = self.parent[cur] {
            out.push(self.arcs[p][a].mv.clone());
            cur = p;
        }
        out.reverse();
        out
    }

    /// Some directed cycle, as the node sequence `v0 -> v1 -> ... -> v0`
    /// (closing node not repeated). Prefers cycles found first from the start.
    pub fn cycle_witness(&self) -> Option<Vec<usize>> {
        if !self.has_cycle {
            return None;
        }
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.nodes.len()];
        for root in 0..self.nodes.len() {
            if color[root] != WHITE {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = GREY;
            while let Some(top) = stack.last_mut() {
                let (v, next) = *top;
                if let Some(arc) = self.arcs[v].get(next) {
                    top.1 += 1;
                    let w = arc.target;
                    match color[w] {
                        WHITE => {
                            color[w] = GREY;
                            stack.push((w, 0));
                        }
                        GREY => {
                            let from = stack.iter().position(|(u, _)| *u == w).expect("grey on stack");
                            return Some(stack[from..].iter().map(|(u, _)| *u).collect());
                        }
                        _ => {}
                    }
                } else {
                    color[v] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Breadth-first exploration of all states reachable from `start` by moves
/// allowed under `rule`. Every arc is re-validated with [`game::apply_move`].
pub fn explore<S: Scalar>(
    net: &Network<S>,
    start: &StrategyState,
    limits: &ExploreLimits,
    rule: MoveRule,
) -> Result<ImprovementGraph<S>, GameError> {
    check_state(net, start)?;
    let mut g = ImprovementGraph {
        rule,
        nodes: vec![start.clone()],
        index: HashMap::from([(start.clone(), 0)]),
        arcs: vec![Vec::new()],
        expanded: vec![false],
        parent: vec![None],
        sinks: Vec::new(),
        has_cycle: false,
        truncated: false,
    };
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    let max_states = limits.max_states.max(1);

    'bfs: while let Some(v) = queue.pop_front() {
        let here = g.nodes[v].clone();
        let ms = game::moves(net, &here, rule)?;
        if ms.is_empty() {
            g.expanded[v] = true;
            g.sinks.push(v);
            continue;
        }
        if limits.max_depth.is_some_and(|d| depth[v] >= d) {
            g.truncated = true;
            continue;
        }
        g.expanded[v] = true;
        for m in ms {
            let next = game::apply_move(net, &here, &m)?;
            let target = match g.index.get(&next) {
                Some(&k) => k,
                None => {
                    if g.nodes.len() >= max_states {
                        g.truncated = true;
                        break 'bfs;
                    }
                    let k = g.nodes.len();
                    g.index.insert(next.clone(), k);
                    g.nodes.push(next);
                    g.arcs.push(Vec::new());
                    g.expanded.push(false);
                    g.parent.push(Some((v, g.arcs[v].len())));
                    depth.push(depth[v] + 1);
                    queue.push_back(k);
                    k
                }
            };
            g.arcs[v].push(Arc { mv: m, target });
        }
    }
    g.sinks.sort_unstable();
    g.has_cycle = contains_cycle(&g.arcs);
    Ok(g)
}

// Kahn's algorithm: a cycle exists iff some node never reaches in-degree 0.
fn contains_cycle<S>(arcs: &[Vec<Arc<S>>]) -> bool {
    let mut indeg = vec![0usize; arcs.len()];
    for out in arcs {
        for a in out {
            indeg[a.target] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..arcs.len()).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for a in &arcs[v] {
            indeg[a.target] -= 1;
            if indeg[a.target] == 0 {
                ready.push(a.target);
            }
        }
    }
    removed < arcs.len()
}

/// Shape of the set of maximal improvement paths from the start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathClassification {
    /// Acyclic: every maximal path is finite and ends in one of `sinks`.
    AllFinite { sinks: Vec<usize> },
    /// No reachable sink: every path extends forever.
    AllInfinite { cycle: Vec<usize> },
    /// Some paths stop, some can loop.
    Mixed { sinks: Vec<usize>, cycle: Vec<usize> },
    /// Budget exhausted. Records what was seen so far.
    Unknown { sinks_seen: usize, cycle_seen: bool },
}

impl PathClassification {
    pub fn label(&self) -> &'static str {
        match self {
            PathClassification::AllFinite { .. } => "all-finite",
            PathClassification::AllInfinite { .. } => "all-infinite",
            PathClassification::Mixed { .. } => "mixed",
            PathClassification::Unknown { .. } => "unknown",
        }
    }
}

pub fn classify<S: Scalar>(g: &ImprovementGraph<S>) -> PathClassification {
    if g.truncated {
        return PathClassification::Unknown {
            sinks_seen: g.sinks.len(),
            cycle_seen: g.has_cycle,
        };
    }
    let cycle = g.cycle_witness();
    match (g.sinks.is_empty(), cycle) {
        (_, None) => PathClassification::AllFinite {
            sinks: g.sinks.clone(),
        },
        (true, Some(cycle)) => PathClassification::AllInfinite { cycle },
        (false, Some(cycle)) => PathClassification::Mixed {
            sinks: g.sinks.clone(),
            cycle,
        },
    }
}

/// A forced improvement sequence: exactly one allowed move at every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<S> {
    pub moves: Vec<Move<S>>,
    /// `states[0]` is the start, `states[k + 1]` follows `moves[k]`.
    pub states: Vec<StrategyState>,
}

impl<S> Chain<S> {
    pub fn terminal(&self) -> &StrategyState {
        self.states.last().expect("chain holds its start state")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainFailure<S> {
    /// Some state offers more than one move.
    Branching {
        step: usize,
        state: StrategyState,
        moves: Vec<Move<S>>,
    },
    /// The forced sequence returns to an earlier state.
    Cycle { step: usize, state: StrategyState },
    /// More than `max_states` steps without reaching an equilibrium.
    Truncated { steps: usize },
    Invalid(GameError),
}

impl<S> From<GameError> for ChainFailure<S> {
    fn from(e: GameError) -> Self {
        ChainFailure::Invalid(e)
    }
}

/// Follows the unique allowed move from `start` until an equilibrium.
pub fn unique_chain<S: Scalar>(
    net: &Network<S>,
    start: &StrategyState,
    limits: &ExploreLimits,
    rule: MoveRule,
) -> Result<Chain<S>, ChainFailure<S>> {
    check_state(net, start)?;
    let mut seen = HashSet::from([start.clone()]);
    let mut chain = Chain {
        moves: Vec::new(),
        states: vec![start.clone()],
    };
    let budget = limits.max_depth.unwrap_or(usize::MAX).min(limits.max_states);
    loop {
        let here = chain.terminal().clone();
        let mut ms = game::moves(net, &here, rule)?;
        match ms.len() {
            0 => return Ok(chain),
            1 => {}
            _ => {
                return Err(ChainFailure::Branching {
                    step: chain.moves.len(),
                    state: here,
                    moves: ms,
                })
            }
        }
        if chain.moves.len() >= budget {
            return Err(ChainFailure::Truncated {
                steps: chain.moves.len(),
            });
        }
        let m = ms.pop().expect("one move");
        let next = game::apply_move(net, &here, &m)?;
        if !seen.insert(next.clone()) {
            return Err(ChainFailure::Cycle {
                step: chain.moves.len() + 1,
                state: next,
            });
        }
        chain.moves.push(m);
        chain.states.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{EdgeClass, NetworkBuilder, PlayerId, Strategy};
    use crate::paradox::{build_example, CaseName, ParadoxKind};
    use crate::cascade::CascadeParams;
    use crate::Rational;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn pairs(k: usize) -> Network<Rational> {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        for _ in 0..k {
            let p = b.add_player("s", &[(a, int(1))]);
            let q = b.add_player("s", &[(a, int(1))]);
            b.add_edge(p, q, int(5), EdgeClass::Control);
            b.add_edge(q, p, int(5), EdgeClass::Control);
        }
        b.build()
    }

    fn half(k: usize) -> StrategyState {
        let a = Strategy::Use(crate::game::ProductId(0));
        StrategyState::new((0..k).flat_map(|_| [a, Strategy::Refusal]).collect())
    }

    #[test]
    fn equilibrium_start_is_a_single_sink() {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        b.add_player("x", &[(a, int(1))]);
        let g = explore(&b.build(), &StrategyState::refusal(1), &ExploreLimits::default(), MoveRule::Improvement).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(classify(&g), PathClassification::AllFinite { sinks: vec![0] });

        let g = explore(&pairs(1), &StrategyState::refusal(2), &ExploreLimits::default(), MoveRule::BestResponse).unwrap();
        assert_eq!((g.len(), g.arc_count(), g.sinks()), (1, 0, &[0][..]));
    }

    #[test]
    fn half_adopted_pair_splits_in_two() {
        let net = pairs(1);
        for rule in [MoveRule::Improvement, MoveRule::BestResponse] {
            let g = explore(&net, &half(1), &ExploreLimits::default(), rule).unwrap();
            assert_eq!(g.len(), 3);
            assert_eq!(g.max_out_degree(), 2);
            assert_eq!(g.sinks().len(), 2);
            assert!(!g.has_cycle());
            for &s in g.sinks() {
                let mut here = half(1);
                for m in g.path_to(s) {
                    here = game::apply_move(&net, &here, &m).unwrap();
                }
                assert_eq!(&here, g.state(s));
                assert_eq!(g.node_of(&here), Some(s));
            }
            assert!(matches!(classify(&g), PathClassification::AllFinite { .. }));
        }
    }

    #[test]
    fn truncation_by_states_and_depth() {
        let net = pairs(3);
        let g = explore(&net, &half(3), &ExploreLimits::states(4), MoveRule::Improvement).unwrap();
        assert!(g.truncated());
        assert_eq!(g.len(), 4);
        assert!(matches!(classify(&g), PathClassification::Unknown { .. }));
        let shallow = ExploreLimits {
            max_states: 1000,
            max_depth: Some(1),
        };
        let g = explore(&net, &half(3), &shallow, MoveRule::Improvement).unwrap();
        assert!(g.truncated());
        assert_eq!(g.len(), 7);
        let full = explore(&net, &half(3), &ExploreLimits::default(), MoveRule::Improvement).unwrap();
        assert_eq!(full.len(), 27);
        assert_eq!(full.sinks().len(), 8);
    }

    #[test]
    fn chains_fail_on_branching() {
        let net = pairs(2);
        match unique_chain(&net, &half(2), &ExploreLimits::default(), MoveRule::BestResponse) {
            Err(ChainFailure::Branching { step: 0, moves, .. }) => {
                assert_eq!(moves.len(), 4);
                assert!(moves.iter().any(|m| m.player == PlayerId(1)));
                assert!(moves.iter().any(|m| m.player == PlayerId(3)));
            }
            other => panic!("{other:?}"),
        }
        let c = unique_chain(&net, &StrategyState::refusal(4), &ExploreLimits::default(), MoveRule::BestResponse).unwrap();
        assert!(c.moves.is_empty());
    }

    #[test]
    fn chain_follows_a_forced_path() {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        let p = b.add_player("s0", &[(a, int(1))]);
        let q = b.add_player("s1", &[(a, int(1))]);
        let r = b.add_player("r", &[(a, int(1))]);
        b.add_edge(p, q, int(5), EdgeClass::Control);
        b.add_edge(q, p, int(5), EdgeClass::Control);
        b.add_edge(q, r, int(2), EdgeClass::Control);
        let net = b.build();
        let on = Strategy::Use(a);
        let start = StrategyState::new(vec![on, on, Strategy::Refusal]);
        let c = unique_chain(&net, &start, &ExploreLimits::default(), MoveRule::Improvement).unwrap();
        assert_eq!(c.moves.len(), 1);
        assert_eq!(c.terminal(), &StrategyState::new(vec![on, on, on]));
        let tight = ExploreLimits {
            max_states: 10,
            max_depth: Some(0),
        };
        assert_eq!(
            unique_chain(&net, &start, &tight, MoveRule::Improvement),
            Err(ChainFailure::Truncated { steps: 0 })
        );
    }

    #[test]
    fn cycle_witness_is_a_closed_walk() {
        let case = build_example(CaseName::Paradox(ParadoxKind::Fragile), &CascadeParams::<Rational>::minimal()).unwrap();
        let (net, start) = case.mutation.apply(&case.net, &case.start).unwrap();
        let g = explore(&net, &start, &ExploreLimits::default(), MoveRule::BestResponse).unwrap();
        let cycle = g.cycle_witness().expect("cycle");
        assert!(cycle.len() >= 2);
        for w in cycle.windows(2) {
            assert!(g.arcs(w[0]).iter().any(|a| a.target == w[1]));
        }
        let (first, last) = (cycle[0], *cycle.last().unwrap());
        assert!(g.arcs(last).iter().any(|a| a.target == first) || first == last);
        assert!(matches!(classify(&g), PathClassification::AllInfinite { .. }));
    }
}
