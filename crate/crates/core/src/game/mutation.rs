//! Expansion, contraction and edge-weight changes. Each returns a new network.

use serde::{Deserialize, Serialize};

use super::{EdgeClass, Network, PlayerId, ProductId};
use crate::error::GameError;
use crate::scalar::Scalar;

/// Picks an edge of a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum EdgeSelector {
    /// Position in the network's edge list.
    Index { edge: usize },
    /// The unique edge with these endpoints (and class, when given).
    Endpoints {
        src: PlayerId,
        dst: PlayerId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<EdgeClass>,
    },
}

impl EdgeSelector {
    pub fn resolve<S: Scalar>(&self, net: &Network<S>) -> Result<usize, GameError> {
        match *self {
            EdgeSelector::Index { edge } => {
                if edge < net.edges().len() {
                    Ok(edge)
                } else {
                    Err(GameError::EdgeNotFound)
                }
            }
            EdgeSelector::Endpoints { src, dst, class } => {
                let hits: Vec<usize> = net
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.src == src && e.dst == dst && class.is_none_or(|c| e.class == c))
                    .map(|(k, _)| k)
                    .collect();
                match hits.as_slice() {
                    [] => Err(GameError::EdgeNotFound),
                    [one] => Ok(*one),
                    many => Err(GameError::AmbiguousEdge(many.len())),
                }
            }
        }
    }
}

/// Allows `product` for `player` at use price `threshold`.
pub fn expand<S: Scalar>(
    net: &Network<S>,
    player: PlayerId,
    product: ProductId,
    threshold: S,
) -> Result<Network<S>, GameError> {
    if product.index() >= net.num_products() {
        return Err(GameError::UnknownProduct(product));
    }
    let p = net.player(player).ok_or(GameError::InvalidPlayer(player))?;
    if p.can_use(product) {
        return Err(GameError::AlreadyAvailable { player, product });
    }
    if !threshold.is_positive_value() {
        return Err(GameError::NonPositiveThreshold);
    }
    let mut b = net.to_builder();
    let p = b.player_mut(player).expect("checked above");
    p.available.insert(product);
    p.thresholds.insert(product, threshold);
    Ok(b.build())
}

/// Forbids `product` for `player`. States using it become illegal for the result.
pub fn contract<S: Scalar>(net: &Network<S>, player: PlayerId, product: ProductId) -> Result<Network<S>, GameError> {
    let p = net.player(player).ok_or(GameError::InvalidPlayer(player))?;
    if !p.can_use(product) {
        return Err(GameError::NotAvailable { player, product });
    }
    let mut b = net.to_builder();
    let p = b.player_mut(player).expect("checked above");
    p.available.remove(&product);
    p.thresholds.remove(&product);
    Ok(b.build())
}

pub fn set_edge_weight<S: Scalar>(net: &Network<S>, selector: &EdgeSelector, weight: S) -> Result<Network<S>, GameError> {
    if weight.is_negative_value() {
        return Err(GameError::NegativeWeight);
    }
    let k = selector.resolve(net)?;
    let mut b = net.to_builder();
    b.edge_mut(k).expect("resolved").weight = weight;
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::NetworkBuilder;
    use crate::Rational;

    fn net() -> Network<Rational> {
        let mut b = NetworkBuilder::new();
        let a = b.product("A");
        b.product("B");
        let one = Rational::from_integer(1);
        let p = b.add_player("p", &[(a, one)]);
        let q = b.add_player("q", &[(a, one)]);
        b.add_edge(p, q, one, EdgeClass::Control);
        b.add_edge(q, p, one, EdgeClass::Control);
        b.add_edge(q, p, one, EdgeClass::Emotional);
        b.build()
    }

    #[test]
    fn expand_then_contract_is_identity() {
        let n = net();
        let grown = expand(&n, PlayerId(0), ProductId(1), Rational::new(1, 2)).unwrap();
        assert!(grown.players()[0].can_use(ProductId(1)));
        assert_eq!(grown.edges(), n.edges());
        assert_eq!(contract(&grown, PlayerId(0), ProductId(1)).unwrap(), n);
    }

    #[test]
    fn mutation_errors() {
        let n = net();
        let half = Rational::new(1, 2);
        assert_eq!(
            expand(&n, PlayerId(0), ProductId(0), half),
            Err(GameError::AlreadyAvailable {
                player: PlayerId(0),
                product: ProductId(0)
            })
        );
        assert_eq!(
            expand(&n, PlayerId(0), ProductId(9), half),
            Err(GameError::UnknownProduct(ProductId(9)))
        );
        assert_eq!(
            expand(&n, PlayerId(0), ProductId(1), Rational::from_integer(0)),
            Err(GameError::NonPositiveThreshold)
        );
        assert!(matches!(contract(&n, PlayerId(0), ProductId(1)), Err(GameError::NotAvailable { .. })));
    }

    #[test]
    fn contraction_may_empty_a_player() {
        let n = net();
        let c = contract(&n, PlayerId(1), ProductId(0)).unwrap();
        assert!(c.players()[1].available.is_empty());
        assert!(c.players()[1].thresholds.is_empty());
    }

    #[test]
    fn edge_selection() {
        let n = net();
        let unique = EdgeSelector::Endpoints {
            src: PlayerId(0),
            dst: PlayerId(1),
            class: None,
        };
        let changed = set_edge_weight(&n, &unique, Rational::from_integer(3)).unwrap();
        assert_eq!(changed.weight(PlayerId(0), PlayerId(1)), Rational::from_integer(3));
        let same = set_edge_weight(&n, &unique, Rational::from_integer(1)).unwrap();
        assert_eq!(same, n);
        let both = EdgeSelector::Endpoints {
            src: PlayerId(1),
            dst: PlayerId(0),
            class: None,
        };
        assert_eq!(both.resolve(&n), Err(GameError::AmbiguousEdge(2)));
        let control = EdgeSelector::Endpoints {
            src: PlayerId(1),
            dst: PlayerId(0),
            class: Some(EdgeClass::Control),
        };
        assert_eq!(control.resolve(&n), Ok(1));
        assert_eq!(EdgeSelector::Index { edge: 5 }.resolve(&n), Err(GameError::EdgeNotFound));
        assert_eq!(
            set_edge_weight(&n, &EdgeSelector::Index { edge: 0 }, Rational::from_integer(-1)),
            Err(GameError::NegativeWeight)
        );
    }
}
