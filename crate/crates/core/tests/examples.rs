use std::time::Instant;

use choice_paradox::cascade::CascadeParams;
use choice_paradox::dynamics::{ExploreLimits, PathClassification};
use choice_paradox::game::MoveRule;
use choice_paradox::paradox::{
    build_example, build_very_bad, verify, verify_very_bad, CaseName, ParadoxKind, Reduction, ScenarioKind, Status,
};
use choice_paradox::Rational;

const STATE_CAP: usize = 100_000;

fn params() -> CascadeParams<Rational> {
    CascadeParams::minimal()
}

#[test]
fn every_case_passes() {
    for name in CaseName::ALL {
        let case = build_example(name, &params()).unwrap();
        let r = verify(&case, &ExploreLimits::states(STATE_CAP), MoveRule::BestResponse).unwrap();
        assert!(r.passed(), "{}", r.text());
        assert_eq!(r.max_out_degree, 1, "{}", r.case);
        assert_eq!(r.invariant_violations, 0, "{}", r.case);
    }
}

#[test]
fn half_gap_reduction_changes_nothing() {
    for k in [ScenarioKind::DecreaseAllWorse, ScenarioKind::DecreaseAllBetter, ScenarioKind::DecreaseLoop] {
        let limits = ExploreLimits::states(STATE_CAP);
        let zero = build_example(CaseName::Scenario(k, Reduction::Zero), &params()).unwrap();
        let half = build_example(CaseName::Scenario(k, Reduction::HalfGap), &params()).unwrap();
        let a = verify(&zero, &limits, MoveRule::BestResponse).unwrap();
        let b = verify(&half, &limits, MoveRule::BestResponse).unwrap();
        assert_eq!(a.verdict, Status::Pass);
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.classification.label(), b.classification.label());
        assert_eq!(a.states, b.states);
    }
}

#[test]
fn larger_cascades_still_pass() {
    for kind in ParadoxKind::ALL {
        let case = build_example(CaseName::Paradox(kind), &params().with_n(6)).unwrap();
        let r = verify(&case, &ExploreLimits::states(STATE_CAP), MoveRule::BestResponse).unwrap();
        assert!(r.passed(), "{}", r.text());
    }
}

#[test]
fn very_bad_passes_with_and_without_cross_influence() {
    for cross in [true, false] {
        let r = verify_very_bad(&params(), &ExploreLimits::states(STATE_CAP), MoveRule::BestResponse, cross).unwrap();
        assert!(r.passed(), "cross {cross}: {:?}", r.reports.iter().map(|x| x.text()).collect::<Vec<_>>());
        assert_eq!(r.invariant_violations, 0);
        assert_eq!(r.players, 128);
    }
    let c = build_very_bad(&params(), true).unwrap();
    assert!(c.cases.iter().all(|x| x.scope.is_none()));
}

// Under the literal rule (any strict improvement may be taken) refusing is
// sometimes improving for a rank member between control rewards, so the
// example networks branch.

fn literal(name: CaseName, cap: usize) -> choice_paradox::paradox::ParadoxReport<Rational> {
    let case = build_example(name, &params()).unwrap();
    verify(&case, &ExploreLimits::states(cap), MoveRule::Improvement).unwrap()
}

#[test]
fn literal_rule_keeps_the_all_worse_cases() {
    for name in [
        CaseName::Paradox(ParadoxKind::Vulnerable),
        CaseName::Scenario(ScenarioKind::DecreaseAllWorse, Reduction::Zero),
        CaseName::Scenario(ScenarioKind::IncreaseAllWorse, Reduction::Zero),
    ] {
        let r = literal(name, STATE_CAP);
        assert!(r.passed(), "{}", r.text());
        assert_eq!(r.max_out_degree, 2, "{}", r.case);
    }
}

#[test]
fn literal_rule_refutes_ineffective() {
    let r = literal(CaseName::Paradox(ParadoxKind::Ineffective), STATE_CAP);
    assert_eq!(r.verdict, Status::Fail, "{}", r.text());
    assert!(matches!(r.classification, PathClassification::Unknown { cycle_seen: true, .. }));
    assert_eq!(r.condition("all-paths-finite").unwrap().status, Status::Fail);
    assert!(r.invariant_violations > 0);
}

#[test]
fn literal_rule_with_cross_influence() {
    let start = Instant::now();
    let r = verify_very_bad(&params(), &ExploreLimits::states(STATE_CAP), MoveRule::Improvement, true).unwrap();
    assert!(r.passed(), "{:?}", r.reports.iter().map(|x| x.text()).collect::<Vec<_>>());
    assert_eq!(r.invariant_violations, 0);
    let states: Vec<usize> = r.reports.iter().map(|x| x.states).collect();
    assert_eq!(states, vec![30, 52, 26, 104]);
    println!("literal very-bad: {:?}", start.elapsed());
}
