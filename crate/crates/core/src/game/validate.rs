use std::fmt;

use serde::Serialize;

use super::{Network, PlayerId, ProductId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagnosticKind {
    NegativeWeight { edge: usize },
    SelfLoop { edge: usize },
    DanglingEndpoint { edge: usize },
    DanglingProduct { player: PlayerId, product: ProductId },
    MissingThreshold { player: PlayerId, product: ProductId },
    NonPositiveThreshold { player: PlayerId, product: ProductId },
    StrayThreshold { player: PlayerId, product: ProductId },
    /// Legal, but the player can only ever refuse.
    EmptyAvailability { player: PlayerId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    #[serde(flatten)]
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DiagnosticKind::*;
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match &self.kind {
            NegativeWeight { edge } => write!(f, "{sev}: edge {edge} has a negative weight"),
            SelfLoop { edge } => write!(f, "{sev}: edge {edge} is a self-loop"),
            DanglingEndpoint { edge } => write!(f, "{sev}: edge {edge} references a missing player"),
            DanglingProduct { player, product } => {
                write!(f, "{sev}: player {player} lists unknown product {product}")
            }
            MissingThreshold { player, product } => {
                write!(f, "{sev}: player {player} has no use price for product {product}")
            }
            NonPositiveThreshold { player, product } => write!(
                f,
                "{sev}: non-positive threshold for player {player}, product {product}"
            ),
            StrayThreshold { player, product } => write!(
                f,
                "{sev}: player {player} has a use price for unavailable product {product}"
            ),
            EmptyAvailability { player } => {
                write!(f, "{sev}: player {player} has no available product")
            }
        }
    }
}

impl Diagnostic {
    fn error(kind: DiagnosticKind) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind,
        }
    }
}

/// Lists every broken structural invariant. Only errors make a network
/// unusable; warnings flag legal but degenerate shapes.
pub fn validate_network<S: Scalar>(net: &Network<S>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let players = net.num_players();
    for (k, e) in net.edges().iter().enumerate() {
        if e.weight.is_negative_value() {
            out.push(Diagnostic::error(DiagnosticKind::NegativeWeight { edge: k }));
        }
        if e.src.index() >= players || e.dst.index() >= players {
            out.push(Diagnostic::error(DiagnosticKind::DanglingEndpoint { edge: k }));
        } else if e.src == e.dst {
            out.push(Diagnostic::error(DiagnosticKind::SelfLoop { edge: k }));
        }
    }
    for (k, p) in net.players().iter().enumerate() {
        let player = PlayerId::from(k);
        if p.available.is_empty() {
            out.push(Diagnostic {
                severity: Severity::Warning,
                kind: DiagnosticKind::EmptyAvailability { player },
            });
        }
        for &product in &p.available {
            if product.index() >= net.num_products() {
                out.push(Diagnostic::error(DiagnosticKind::DanglingProduct { player, product }));
            }
            match p.thresholds.get(&product) {
                None => out.push(Diagnostic::error(DiagnosticKind::MissingThreshold { player, product })),
                Some(theta) if !theta.is_positive_value() => out.push(Diagnostic::error(
                    DiagnosticKind::NonPositiveThreshold { player, product },
                )),
                Some(_) => {}
            }
        }
        for product in p.thresholds.keys() {
            if !p.available.contains(product) {
                out.push(Diagnostic::error(DiagnosticKind::StrayThreshold {
                    player,
                    product: *product,
                }));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{build_cascade, CascadeParams};
    use crate::game::{Edge, EdgeClass, NetworkBuilder, Player};
    use crate::Rational;

    #[test]
    fn cascade_is_clean() {
        let a = build_cascade(&CascadeParams::<Rational>::minimal()).unwrap();
        assert_eq!(validate_network(&a.net), vec![]);
    }

    #[test]
    fn zero_threshold_is_reported() {
        let mut b = NetworkBuilder::<Rational>::new();
        let a = b.product("A");
        b.add_player("x", &[(a, Rational::from_integer(0))]);
        let d = validate_network(&b.build());
        assert_eq!(d.len(), 1);
        assert!(d[0].to_string().contains("non-positive threshold"));
    }

    #[test]
    fn structural_errors() {
        let one = Rational::from_integer(1);
        let players = vec![
            Player {
                label: "x".into(),
                available: [ProductId(0), ProductId(4)].into(),
                thresholds: [(ProductId(4), one), (ProductId(2), one)].into(),
            },
            Player {
                label: "y".into(),
                available: Default::default(),
                thresholds: Default::default(),
            },
        ];
        let edge = |s: u32, d: u32, w: i64| Edge {
            src: PlayerId(s),
            dst: PlayerId(d),
            weight: Rational::from_integer(w),
            class: EdgeClass::Plain,
        };
        let net = Network::from_parts(vec!["A".into()], players, vec![edge(0, 0, 1), edge(0, 5, 1), edge(1, 0, -2)]);
        let kinds: Vec<DiagnosticKind> = validate_network(&net).into_iter().map(|d| d.kind).collect();
        let p = PlayerId(0);
        for k in [
            DiagnosticKind::SelfLoop { edge: 0 },
            DiagnosticKind::DanglingEndpoint { edge: 1 },
            DiagnosticKind::NegativeWeight { edge: 2 },
            DiagnosticKind::MissingThreshold { player: p, product: ProductId(0) },
            DiagnosticKind::DanglingProduct { player: p, product: ProductId(4) },
            DiagnosticKind::StrayThreshold { player: p, product: ProductId(2) },
            DiagnosticKind::EmptyAvailability { player: PlayerId(1) },
        ] {
            assert!(kinds.contains(&k), "{k:?} missing from {kinds:?}");
        }
    }
}
