#![allow(dead_code)]

use choice_paradox::game::{Network, Strategy, StrategyState};
use choice_paradox::oracle::{random_networks, RandomSpec};
use choice_paradox::{Rational, Scalar};
use proptest::prelude::*;
use proptest::strategy::Strategy as PropStrategy;

pub fn network(seed: u64) -> Network<Rational> {
    random_networks(seed, 1, &RandomSpec::default()).remove(0)
}

/// Picks, for each player, refusal or one available product by `picks[k]`.
pub fn state_from<S: Scalar>(net: &Network<S>, picks: &[usize]) -> StrategyState {
    StrategyState::new(
        net.players()
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let options: Vec<_> = p.available.iter().copied().collect();
                let pick = picks.get(k).copied().unwrap_or(0) % (options.len() + 1);
                if pick == 0 {
                    Strategy::Refusal
                } else {
                    Strategy::Use(options[pick - 1])
                }
            })
            .collect(),
    )
}

pub fn net_and_state() -> impl PropStrategy<Value = (Network<Rational>, StrategyState)> {
    (any::<u64>(), proptest::collection::vec(0usize..8, 6)).prop_map(|(seed, picks)| {
        let net = network(seed);
        let s = state_from(&net, &picks);
        (net, s)
    })
}
