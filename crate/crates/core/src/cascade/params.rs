use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::Rational;

/// Numeric shape of a cascade: rank half-length `n`, uniform use price and
/// the weights of emotional, inclination and control edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeParams<S = Rational> {
    pub n: usize,
    pub theta: S,
    pub e: S,
    pub i: S,
    pub c: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamViolation {
    /// n = 0 leaves the ranks empty.
    EmptyRanks,
    ThetaNotPositive,
    EmotionalNotPositive,
    InclinationNotAboveEmotional,
    InclinationNotAboveTheta,
    ControlNotAboveInclinationPlusEmotional,
    RanksTooShort,
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            ParamViolation::EmptyRanks => "n >= 1",
            ParamViolation::ThetaNotPositive => "theta > 0",
            ParamViolation::EmotionalNotPositive => "e > 0",
            ParamViolation::InclinationNotAboveEmotional => "i > e",
            ParamViolation::InclinationNotAboveTheta => "i > theta",
            ParamViolation::ControlNotAboveInclinationPlusEmotional => "c > i + e",
            ParamViolation::RanksTooShort => "n * e > c + i",
        };
        write!(f, "violated: {text}")
    }
}

impl<S: Scalar> CascadeParams<S> {
    pub fn new(n: usize, theta: S, e: S, i: S, c: S) -> Self {
        CascadeParams { n, theta, e, i, c }
    }

    /// Smallest feasible cascade (n = 4, 30 players).
    pub fn minimal() -> Self {
        CascadeParams {
            n: 4,
            theta: S::from_ratio(1, 10),
            e: S::from_ratio(1, 4),
            i: S::from_ratio(3, 10),
            c: S::from_ratio(3, 5),
        }
    }

    /// Integer-weighted instance with n = 10 (66 players).
    pub fn integral() -> Self {
        CascadeParams {
            n: 10,
            theta: S::from_int(1),
            e: S::from_int(1),
            i: S::from_int(3),
            c: S::from_int(5),
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        CascadeParams { n, ..self.clone() }
    }

    /// `n * e`: the emotional payoff one rank hands each influenced player.
    pub fn rank_bonus(&self) -> S {
        S::from_int(self.n as i64) * self.e.clone()
    }

    /// Guaranteed per-player advantage of the second state: `n*e - c - i`.
    pub fn gap_bound(&self) -> S {
        self.rank_bonus() - self.c.clone() - self.i.clone()
    }

    /// Total number of players in the cascade: 6 spirits plus 3 ranks of 2n.
    pub fn player_count(&self) -> usize {
        6 * self.n + 6
    }
}

/// Checks every inequality the cascade relies on and names each that fails.
pub fn validate_params<S: Scalar>(p: &CascadeParams<S>) -> Result<(), Vec<ParamViolation>> {
    let zero = S::zero();
    let mut bad = Vec::new();
    if p.n == 0 {
        bad.push(ParamViolation::EmptyRanks);
    }
    if p.theta <= zero {
        bad.push(ParamViolation::ThetaNotPositive);
    }
    if p.e <= zero {
        bad.push(ParamViolation::EmotionalNotPositive);
    }
    if p.i <= p.e {
        bad.push(ParamViolation::InclinationNotAboveEmotional);
    }
    if p.i <= p.theta {
        bad.push(ParamViolation::InclinationNotAboveTheta);
    }
    if p.c <= p.i.clone() + p.e.clone() {
        bad.push(ParamViolation::ControlNotAboveInclinationPlusEmotional);
    }
    if p.rank_bonus() <= p.c.clone() + p.i.clone() {
        bad.push(ParamViolation::RanksTooShort);
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn reference_tuples_are_feasible() {
        assert_eq!(validate_params(&CascadeParams::<Rational>::integral()), Ok(()));
        assert_eq!(validate_params(&CascadeParams::<Rational>::minimal()), Ok(()));
    }

    #[test]
    fn three_per_subtype_is_never_enough() {
        let p = CascadeParams::<Rational>::integral().with_n(3);
        assert_eq!(validate_params(&p), Err(vec![ParamViolation::RanksTooShort]));
        let p = CascadeParams::<Rational>::minimal().with_n(3);
        assert!(validate_params(&p).is_err());
    }

    #[test]
    fn names_every_violation() {
        let p = CascadeParams::new(0, q(0, 1), q(1, 1), q(1, 1), q(2, 1));
        let v = validate_params(&p).unwrap_err();
        assert!(v.contains(&ParamViolation::EmptyRanks));
        assert!(v.contains(&ParamViolation::ThetaNotPositive));
        assert!(v.contains(&ParamViolation::InclinationNotAboveEmotional));
        assert!(v.contains(&ParamViolation::ControlNotAboveInclinationPlusEmotional));
        assert!(v.contains(&ParamViolation::RanksTooShort));
        assert!(!v.contains(&ParamViolation::InclinationNotAboveTheta));
    }

    #[test]
    fn gap_bound_values() {
        assert_eq!(CascadeParams::<Rational>::integral().gap_bound(), q(2, 1));
        assert_eq!(CascadeParams::<Rational>::minimal().gap_bound(), q(1, 10));
        assert_eq!(CascadeParams::<f64>::integral().gap_bound(), 2.0);
    }
}
