use std::collections::BTreeSet;

use choice_paradox::cascade::{build_cascade, CascadeParams};
use choice_paradox::game::{EdgeClass, NetworkBuilder, Strategy, StrategyState};
use choice_paradox::oracle::{cross_check, enumerate_equilibria, random_networks, EnumerationBudget, RandomSpec};
use choice_paradox::Rational;

const SEED: u64 = 20_240_601;
const NETWORKS: usize = 50;

#[test]
fn fifty_random_networks_agree() {
    let spec = RandomSpec::default();
    assert!(spec.max_players <= 6 && spec.max_products <= 3);
    let nets = random_networks::<Rational>(SEED, NETWORKS, &spec);
    let mut states = 0;
    for (k, net) in nets.iter().enumerate() {
        let r = cross_check(net, &EnumerationBudget::default()).unwrap();
        assert!(r.passed(), "network {k}: {:?}", r.mismatches);
        states += r.states;
    }
    assert!(states > NETWORKS);
}

#[test]
fn stimulus_pair_equilibria() {
    let mut b = NetworkBuilder::new();
    let a = b.product("A");
    let one = Rational::from_integer(1);
    let p = b.add_player("s0", &[(a, one)]);
    let q = b.add_player("s1", &[(a, one)]);
    b.add_edge(p, q, Rational::from_integer(5), EdgeClass::Control);
    b.add_edge(q, p, Rational::from_integer(5), EdgeClass::Control);
    let eq: BTreeSet<StrategyState> = enumerate_equilibria(&b.build(), &EnumerationBudget::default())
        .unwrap()
        .into_iter()
        .collect();
    let on = Strategy::Use(a);
    let expected = BTreeSet::from([StrategyState::new(vec![on, on]), StrategyState::refusal(2)]);
    assert_eq!(eq, expected);
}

#[test]
fn whole_cascade_is_out_of_budget() {
    let a = build_cascade(&CascadeParams::<Rational>::minimal()).unwrap();
    assert!(enumerate_equilibria(&a.net, &EnumerationBudget::default()).is_err());
}
