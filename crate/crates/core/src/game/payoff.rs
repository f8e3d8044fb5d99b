use serde::{Deserialize, Serialize};

use super::{Move, Network, PlayerId, Strategy, StrategyState};
use crate::error::GameError;
use crate::scalar::Scalar;

/// Which deviations count as a step of the dynamics.
///
/// `Improvement` is every strictly improving unilateral deviation.
/// `BestResponse` keeps only those that reach the mover's maximal payoff.
/// Both rules have the same fixed points, so equilibria do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveRule {
    Improvement,
    #[default]
    BestResponse,
}

impl MoveRule {
    pub fn name(self) -> &'static str {
        match self {
            MoveRule::Improvement => "improvement",
            MoveRule::BestResponse => "best-response",
        }
    }
}

/// Checks that `s` is a legal position of `net`.
pub fn check_state<S: Scalar>(net: &Network<S>, s: &StrategyState) -> Result<(), GameError> {
    if s.len() != net.num_players() {
        return Err(GameError::StateLength {
            expected: net.num_players(),
            got: s.len(),
        });
    }
    for (k, choice) in s.iter().enumerate() {
        if let Strategy::Use(t) = *choice {
            if !net.players()[k].can_use(t) {
                return Err(GameError::UnavailableStrategy {
                    player: PlayerId::from(k),
                    product: t,
                });
            }
        }
    }
    Ok(())
}

fn check_player<S: Scalar>(net: &Network<S>, s: &StrategyState, i: PlayerId) -> Result<(), GameError> {
    if i.index() >= net.num_players() {
        return Err(GameError::InvalidPlayer(i));
    }
    if s.len() != net.num_players() {
        return Err(GameError::StateLength {
            expected: net.num_players(),
            got: s.len(),
        });
    }
    Ok(())
}

/// Incoming weight per product from neighbours currently using it.
fn tally<S: Scalar>(net: &Network<S>, s: &StrategyState, i: PlayerId) -> Vec<S> {
    let mut acc = vec![S::zero(); net.num_products()];
    for (j, w) in net.incoming(i) {
        if let Strategy::Use(t) = s[j.index()] {
            if let Some(slot) = acc.get_mut(t.index()) {
                *slot = slot.clone() + w.clone();
            }
        }
    }
    acc
}

fn value_of<S: Scalar>(net: &Network<S>, i: PlayerId, tally: &[S], choice: Strategy) -> S {
    match choice {
        Strategy::Refusal => S::zero(),
        Strategy::Use(t) => {
            let theta = net.players()[i.index()]
                .thresholds
                .get(&t)
                .cloned()
                .unwrap_or_else(S::zero);
            tally.get(t.index()).cloned().unwrap_or_else(S::zero) - theta
        }
    }
}

/// Payoff of player `i` in state `s`: zero on refusal, otherwise the summed
/// weight of incoming edges from players on the same product minus the use price.
pub fn payoff<S: Scalar>(net: &Network<S>, s: &StrategyState, i: PlayerId) -> Result<S, GameError> {
    check_player(net, s, i)?;
    let t = tally(net, s, i);
    Ok(value_of(net, i, &t, s[i.index()]))
}

/// Payoff `i` would get by switching to `choice` while everyone else stays.
pub fn payoff_if<S: Scalar>(
    net: &Network<S>,
    s: &StrategyState,
    i: PlayerId,
    choice: Strategy,
) -> Result<S, GameError> {
    check_player(net, s, i)?;
    let t = tally(net, s, i);
    Ok(value_of(net, i, &t, choice))
}

pub fn payoff_vector<S: Scalar>(net: &Network<S>, s: &StrategyState) -> Result<Vec<S>, GameError> {
    if s.len() != net.num_players() {
        return Err(GameError::StateLength {
            expected: net.num_players(),
            got: s.len(),
        });
    }
    Ok(net
        .player_ids()
        .map(|i| {
            let t = tally(net, s, i);
            value_of(net, i, &t, s[i.index()])
        })
        .collect())
}

// Improving deviations of one player, in strategy order (refusal first).
fn player_moves<S: Scalar>(net: &Network<S>, s: &StrategyState, i: PlayerId, rule: MoveRule) -> Vec<Move<S>> {
    let t = tally(net, s, i);
    let current = s[i.index()];
    let base = value_of(net, i, &t, current);
    let options = std::iter::once(Strategy::Refusal)
        .chain(net.players()[i.index()].available.iter().map(|p| Strategy::Use(*p)));
    let mut out: Vec<Move<S>> = options
        .filter(|&alt| alt != current)
        .filter_map(|alt| {
            let gain = value_of(net, i, &t, alt) - base.clone();
            gain.is_positive_value().then_some(Move {
                player: i,
                to: alt,
                gain,
            })
        })
        .collect();
    if rule == MoveRule::BestResponse && out.len() > 1 {
        let best = out
            .iter()
            .map(|m| m.gain.clone())
            .reduce(|a, b| if b > a { b } else { a })
            .expect("non-empty");
        out.retain(|m| m.gain == best);
    }
    out
}

/// All moves allowed by `rule` at `s`, ordered by player, then refusal, then product id.
pub fn moves<S: Scalar>(net: &Network<S>, s: &StrategyState, rule: MoveRule) -> Result<Vec<Move<S>>, GameError> {
    check_state(net, s)?;
    Ok(net
        .player_ids()
        .flat_map(|i| player_moves(net, s, i, rule))
        .collect())
}

/// Every strictly improving unilateral deviation at `s`.
pub fn improving_moves<S: Scalar>(net: &Network<S>, s: &StrategyState) -> Result<Vec<Move<S>>, GameError> {
    moves(net, s, MoveRule::Improvement)
}

/// Improving deviations that reach the mover's best attainable payoff.
pub fn best_response_moves<S: Scalar>(net: &Network<S>, s: &StrategyState) -> Result<Vec<Move<S>>, GameError> {
    moves(net, s, MoveRule::BestResponse)
}

pub fn is_equilibrium<S: Scalar>(net: &Network<S>, s: &StrategyState) -> Result<bool, GameError> {
    check_state(net, s)?;
    Ok(net
        .player_ids()
        .all(|i| player_moves(net, s, i, MoveRule::Improvement).is_empty()))
}

/// Plays `m` at `s`. The move must be improving, with the stated gain.
pub fn apply_move<S: Scalar>(net: &Network<S>, s: &StrategyState, m: &Move<S>) -> Result<StrategyState, GameError> {
    check_state(net, s)?;
    check_player(net, s, m.player)?;
    let t = tally(net, s, m.player);
    let current = s[m.player.index()];
    if let Strategy::Use(p) = m.to {
        if !net.players()[m.player.index()].can_use(p) {
            return Err(GameError::UnavailableStrategy {
                player: m.player,
                product: p,
            });
        }
    }
    let gain = value_of(net, m.player, &t, m.to) - value_of(net, m.player, &t, current);
    if m.to == current || !gain.is_positive_value() || gain != m.gain {
        return Err(GameError::NotImproving { player: m.player });
    }
    Ok(s.with(m.player, m.to))
}

/// `a > b` in the strict sense: every coordinate strictly larger.
pub fn dominates<S: PartialOrd>(a: &[S], b: &[S]) -> Result<bool, GameError> {
    if a.len() != b.len() {
        return Err(GameError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).all(|(x, y)| x > y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{EdgeClass, NetworkBuilder, ProductId};
    use crate::Rational;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn pair() -> (Network<Rational>, ProductId) {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        let p = b.add_player("s0", &[(a, int(1))]);
        let q = b.add_player("s1", &[(a, int(1))]);
        b.add_edge(p, q, int(5), EdgeClass::Control);
        b.add_edge(q, p, int(5), EdgeClass::Control);
        (b.build(), a)
    }

    fn st(v: &[Strategy]) -> StrategyState {
        StrategyState::new(v.to_vec())
    }

    #[test]
    fn stimulus_pair_payoffs() {
        let (net, a) = pair();
        let both = st(&[Strategy::Use(a), Strategy::Use(a)]);
        assert_eq!(payoff_vector(&net, &both).unwrap(), vec![int(4), int(4)]);
        let half = st(&[Strategy::Use(a), Strategy::Refusal]);
        assert_eq!(payoff_vector(&net, &half).unwrap(), vec![int(-1), int(0)]);
        assert_eq!(payoff_vector(&net, &StrategyState::refusal(2)).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn isolated_player_pays_the_price() {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        b.add_player("x", &[(a, int(1))]);
        let net = b.build();
        assert_eq!(payoff(&net, &st(&[Strategy::Use(a)]), PlayerId(0)).unwrap(), int(-1));
    }

    #[test]
    fn half_adopted_pair_has_two_moves() {
        let (net, a) = pair();
        let half = st(&[Strategy::Use(a), Strategy::Refusal]);
        let ms = improving_moves(&net, &half).unwrap();
        assert_eq!(
            ms,
            vec![
                Move {
                    player: PlayerId(0),
                    to: Strategy::Refusal,
                    gain: int(1)
                },
                Move {
                    player: PlayerId(1),
                    to: Strategy::Use(a),
                    gain: int(4)
                },
            ]
        );
        assert!(!is_equilibrium(&net, &half).unwrap());
        assert!(is_equilibrium(&net, &st(&[Strategy::Use(a), Strategy::Use(a)])).unwrap());
        assert!(is_equilibrium(&net, &StrategyState::refusal(2)).unwrap());
    }

    #[test]
    fn best_response_keeps_only_the_best() {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        let c = b.product("B");
        let x = b.add_player("x", &[(a, int(1))]);
        let y = b.add_player("y", &[(c, int(1))]);
        let z = b.add_player("z", &[(a, int(1)), (c, int(1))]);
        b.add_edge(x, z, int(3), EdgeClass::Plain);
        b.add_edge(y, z, int(2), EdgeClass::Plain);
        let net = b.build();
        let s = st(&[Strategy::Use(a), Strategy::Use(c), Strategy::Refusal]);
        let all: Vec<_> = improving_moves(&net, &s).unwrap().into_iter().filter(|m| m.player == z).collect();
        assert_eq!(all.len(), 2);
        let best: Vec<_> = best_response_moves(&net, &s).unwrap().into_iter().filter(|m| m.player == z).collect();
        assert_eq!(best.len(), 1);
        assert_eq!(best[0].to, Strategy::Use(a));
    }

    #[test]
    fn apply_move_checks() {
        let (net, a) = pair();
        let half = st(&[Strategy::Use(a), Strategy::Refusal]);
        let m = Move {
            player: PlayerId(1),
            to: Strategy::Use(a),
            gain: int(4),
        };
        let next = apply_move(&net, &half, &m).unwrap();
        assert_eq!(next, st(&[Strategy::Use(a), Strategy::Use(a)]));
        assert_eq!(next[0], half[0]);
        assert_eq!(apply_move(&net, &next, &m), Err(GameError::NotImproving { player: PlayerId(1) }));
        let wrong_gain = Move { gain: int(3), ..m };
        assert!(apply_move(&net, &half, &wrong_gain).is_err());
    }

    #[test]
    fn state_errors() {
        let (net, _) = pair();
        assert!(matches!(
            payoff(&net, &StrategyState::refusal(3), PlayerId(0)),
            Err(GameError::InvalidPlayer(_)) | Err(GameError::StateLength { .. })
        ));
        assert_eq!(
            payoff(&net, &StrategyState::refusal(2), PlayerId(7)),
            Err(GameError::InvalidPlayer(PlayerId(7)))
        );
        let bad = st(&[Strategy::Use(ProductId(3)), Strategy::Refusal]);
        assert!(matches!(check_state(&net, &bad), Err(GameError::UnavailableStrategy { .. })));
    }

    #[test]
    fn domination_is_strict() {
        assert!(dominates(&[1, 2], &[0, 1]).unwrap());
        assert!(!dominates(&[1, 2], &[1, 1]).unwrap());
        assert!(dominates(&[1], &[0, 0]).is_err());
    }

    #[test]
    fn parallel_edges_add_up() {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        let p = b.add_player("p", &[(a, int(1))]);
        let q = b.add_player("q", &[(a, int(1))]);
        b.add_edge(p, q, Rational::new(1, 3), EdgeClass::Emotional);
        b.add_edge(p, q, Rational::new(2, 3), EdgeClass::Control);
        let net = b.build();
        let both = st(&[Strategy::Use(a), Strategy::Use(a)]);
        assert_eq!(payoff(&net, &both, q).unwrap(), int(0));
        assert_eq!(net.weight(p, q), int(1));
    }
}
