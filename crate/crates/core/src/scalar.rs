//! Numeric abstraction for weights, thresholds and payoffs.
//!
//! Everything in the engine is generic over [`Scalar`]. The exact
//! instantiation ([`crate::Rational`]) is the one used for verification;
//! the float instantiations exist for quick experiments where ties are
//! known not to matter.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, Signed};

/// A totally usable ordered field element for payoff arithmetic.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Send + Sync + 'static {
    /// Builds `num / den`. `den` must be non-zero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Parses the textual wire form (`"num/den"` or a bare integer).
    fn parse_scalar(text: &str) -> Option<Self>;

    /// Formats to the textual wire form.
    fn format_scalar(&self) -> String;

    /// Short human-readable form for labels and reports.
    fn display_scalar(&self) -> String {
        self.format_scalar()
    }

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn is_positive_value(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative_value(&self) -> bool {
        *self < Self::zero()
    }
}

fn split_fraction(text: &str) -> Option<(i64, i64)> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) {
        return None;
    }
    let num: i64 = num.parse().ok()?;
    let den: i64 = den.parse().ok()?;
    if den == 0 {
        return None;
    }
    Some((num, den))
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    /// Decimals are rejected so that no value ever passes through a float.
    fn parse_scalar(text: &str) -> Option<Self> {
        split_fraction(text).map(|(n, d)| Ratio::new(n, d))
    }

    fn format_scalar(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn display_scalar(&self) -> String {
        self.to_string()
    }

    fn is_positive_value(&self) -> bool {
        self.is_positive()
    }

    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn parse_scalar(text: &str) -> Option<Self> {
                if let Some((n, d)) = split_fraction(text) {
                    return Some(Self::from_ratio(n, d));
                }
                text.trim().parse::<$t>().ok().filter(|v| v.is_finite())
            }

            fn format_scalar(&self) -> String {
                format!("{}", self)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i64>;

    #[test]
    fn rational_wire_form() {
        assert_eq!(Q::parse_scalar("3/10"), Some(Q::new(3, 10)));
        assert_eq!(Q::parse_scalar("6/20"), Some(Q::new(3, 10)));
        assert_eq!(Q::parse_scalar("5"), Some(Q::from_integer(5)));
        assert_eq!(Q::parse_scalar("-2/4"), Some(Q::new(-1, 2)));
        assert_eq!(Q::new(6, 4).format_scalar(), "3/2");
        assert_eq!(Q::from_integer(5).format_scalar(), "5/1");
    }

    #[test]
    fn rational_rejects_decimals_and_garbage() {
        assert_eq!(Q::parse_scalar("0.1"), None);
        assert_eq!(Q::parse_scalar("1/0"), None);
        assert_eq!(Q::parse_scalar("abc"), None);
        assert_eq!(Q::parse_scalar(""), None);
        assert_eq!(Q::parse_scalar("1/"), None);
    }

    #[test]
    fn float_accepts_both_forms() {
        assert_eq!(f64::parse_scalar("1/4"), Some(0.25));
        assert_eq!(f64::parse_scalar("0.25"), Some(0.25));
        assert_eq!(f32::parse_scalar("NaN"), None);
    }
}
