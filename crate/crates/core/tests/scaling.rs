use choice_paradox::cascade::{build_cascade, verify_flip, verify_payoff_gap, CascadeParams, CascadeState, Letter};
use choice_paradox::game::{payoff_vector, MoveRule};
use choice_paradox::Rational;

#[test]
fn gap_grows_linearly() {
    let base = CascadeParams::<Rational>::minimal();
    let mut offsets = Vec::new();
    for n in [4, 6, 8, 10] {
        let p = base.with_n(n);
        let r = verify_payoff_gap(&p).unwrap();
        assert!(r.passed());
        assert!(r.min_gap >= p.gap_bound());
        offsets.push(r.min_gap - p.rank_bonus());
    }
    assert!(offsets.windows(2).all(|w| w[0] == w[1]), "{offsets:?}");
    assert_eq!(offsets[0], -base.i);
}

#[test]
fn float_cascade_matches_exact() {
    let pf = CascadeParams::<f64>::integral();
    let pr = CascadeParams::<Rational>::integral();
    let af = build_cascade(&pf).unwrap();
    let ar = build_cascade(&pr).unwrap();
    for w in [CascadeState::First, CascadeState::Second] {
        let vf = payoff_vector(&af.net, &af.state(w)).unwrap();
        let vr = payoff_vector(&ar.net, &ar.state(w)).unwrap();
        for (f, r) in vf.iter().zip(&vr) {
            assert_eq!(*f, *r.numer() as f64 / *r.denom() as f64);
        }
    }
    let gap = verify_payoff_gap(&pf).unwrap();
    assert!(gap.passed());
    assert_eq!(gap.bound, 2.0);
    assert_eq!(gap.min_gap, 7.0);
    let flip = verify_flip(&pf, CascadeState::Second, Some(Letter::B), MoveRule::BestResponse).unwrap();
    assert!(flip.passed(pf.n), "{flip:?}");
}
