use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{PlayerId, ProductId};
use crate::scalar::Scalar;

/// Role of an edge inside a construction. Payoffs only ever look at the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    Control,
    Inclination,
    Emotional,
    Plain,
}

impl EdgeClass {
    pub fn name(self) -> &'static str {
        match self {
            EdgeClass::Control => "control",
            EdgeClass::Inclination => "inclination",
            EdgeClass::Emotional => "emotional",
            EdgeClass::Plain => "plain",
        }
    }
}

/// Directed influence: `dst` gains `weight` whenever `src` plays the same product.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge<S> {
    pub src: PlayerId,
    pub dst: PlayerId,
    pub weight: S,
    pub class: EdgeClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Player<S> {
    pub label: String,
    pub available: BTreeSet<ProductId>,
    pub thresholds: BTreeMap<ProductId, S>,
}

impl<S> Player<S> {
    pub fn can_use(&self, product: ProductId) -> bool {
        self.available.contains(&product)
    }
}

/// An immutable social network: products, players with their available
/// products and use prices, and weighted directed edges.
///
/// Parallel edges are allowed; the effective weight between two players is
/// the sum over all edges joining them.
#[derive(Debug, Clone)]
pub struct Network<S = crate::Rational> {
    products: Vec<String>,
    players: Vec<Player<S>>,
    edges: Vec<Edge<S>>,
    // per destination: (source, aggregated weight), sorted by source
    incoming: Vec<Vec<(PlayerId, S)>>,
}

impl<S: Scalar> Network<S> {
    /// Assembles a network without validating it; see
    /// [`super::validate_network`]. Self-loops and edges with dangling
    /// endpoints are kept in the edge list but never contribute to payoffs.
    pub fn from_parts(products: Vec<String>, players: Vec<Player<S>>, edges: Vec<Edge<S>>) -> Self {
        let incoming = index_incoming(players.len(), &edges);
        Network {
            products,
            players,
            edges,
            incoming,
        }
    }

    pub fn products(&self) -> &[String] {
        &self.products
    }

    pub fn players(&self) -> &[Player<S>] {
        &self.players
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_products(&self) -> usize {
        self.products.len()
    }

    pub fn player(&self, id: PlayerId) -> Option<&Player<S>> {
        self.players.get(id.index())
    }

    pub fn player_ids(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.players.len()).map(PlayerId::from)
    }

    pub fn product_id(&self, name: &str) -> Option<ProductId> {
        self.products.iter().position(|p| p == name).map(ProductId::from)
    }

    pub fn product_name(&self, id: ProductId) -> Option<&str> {
        self.products.get(id.index()).map(String::as_str)
    }

    /// Aggregated incoming weights of `player`, one entry per distinct source.
    pub fn incoming(&self, player: PlayerId) -> &[(PlayerId, S)] {
        &self.incoming[player.index()]
    }

    /// Effective weight of the influence `src -> dst`; zero when absent.
    pub fn weight(&self, src: PlayerId, dst: PlayerId) -> S {
        self.incoming
            .get(dst.index())
            .and_then(|inc| inc.iter().find(|(j, _)| *j == src))
            .map(|(_, w)| w.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn to_builder(&self) -> NetworkBuilder<S> {
        NetworkBuilder {
            products: self.products.clone(),
            players: self.players.clone(),
            edges: self.edges.clone(),
        }
    }
}

impl<S: PartialEq> PartialEq for Network<S> {
    fn eq(&self, other: &Self) -> bool {
        self.products == other.products && self.players == other.players && self.edges == other.edges
    }
}

fn index_incoming<S: Scalar>(players: usize, edges: &[Edge<S>]) -> Vec<Vec<(PlayerId, S)>> {
    let mut acc: Vec<BTreeMap<PlayerId, S>> = vec![BTreeMap::new(); players];
    for e in edges {
        if e.src == e.dst || e.src.index() >= players || e.dst.index() >= players {
            continue;
        }
        let slot = acc[e.dst.index()].entry(e.src).or_insert_with(S::zero);
        *slot = slot.clone() + e.weight.clone();
    }
    acc.into_iter()
        .map(|m| m.into_iter().filter(|(_, w)| !w.is_zero()).collect())
        .collect()
}

/// Incremental construction of a [`Network`]. Used by every generator.
#[derive(Debug, Clone)]
pub struct NetworkBuilder<S = crate::Rational> {
    products: Vec<String>,
    players: Vec<Player<S>>,
    edges: Vec<Edge<S>>,
}

impl<S: Scalar> Default for NetworkBuilder<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> NetworkBuilder<S> {
    pub fn new() -> Self {
        NetworkBuilder {
            products: Vec::new(),
            players: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Returns the id of `name`, registering it on first use.
    pub fn product(&mut self, name: &str) -> ProductId {
        match self.products.iter().position(|p| p == name) {
            Some(k) => ProductId::from(k),
            None => {
                self.products.push(name.to_string());
                ProductId::from(self.products.len() - 1)
            }
        }
    }

    pub fn add_player(&mut self, label: impl Into<String>, offer: &[(ProductId, S)]) -> PlayerId {
        let available = offer.iter().map(|(t, _)| *t).collect();
        let thresholds = offer.iter().cloned().collect();
        self.players.push(Player {
            label: label.into(),
            available,
            thresholds,
        });
        PlayerId::from(self.players.len() - 1)
    }

    /// Adds an edge and returns its index in the final edge list.
    pub fn add_edge(&mut self, src: PlayerId, dst: PlayerId, weight: S, class: EdgeClass) -> usize {
        self.edges.push(Edge {
            src,
            dst,
            weight,
            class,
        });
        self.edges.len() - 1
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player(&self, id: PlayerId) -> Option<&Player<S>> {
        self.players.get(id.index())
    }

    pub fn player_mut(&mut self, id: PlayerId) -> Option<&mut Player<S>> {
        self.players.get_mut(id.index())
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge_mut(&mut self, index: usize) -> Option<&mut Edge<S>> {
        self.edges.get_mut(index)
    }

    pub fn remove_edges(&mut self, mut keep: impl FnMut(&Edge<S>) -> bool) {
        self.edges.retain(|e| keep(e));
    }

    pub fn build(self) -> Network<S> {
        Network::from_parts(self.products, self.players, self.edges)
    }
}
