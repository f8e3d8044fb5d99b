//! The social network game: networks, strategies, payoffs and moves.

mod mutation;
mod network;
mod payoff;
mod validate;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

pub use mutation::{contract, expand, set_edge_weight, EdgeSelector};
pub use network::{Edge, EdgeClass, Network, NetworkBuilder, Player};
pub use payoff::{
    apply_move, best_response_moves, check_state, dominates, improving_moves, is_equilibrium,
    moves, payoff, payoff_if, payoff_vector, MoveRule,
};
pub use validate::{validate_network, Diagnostic, DiagnosticKind, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub u32);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for PlayerId {
    fn from(v: usize) -> Self {
        PlayerId(v as u32)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductId(pub u16);

impl ProductId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ProductId {
    fn from(v: usize) -> Self {
        ProductId(v as u16)
    }
}

impl fmt::Display for ProductId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One player's choice. `Refusal` sorts before every product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Refusal,
    Use(ProductId),
}

impl Strategy {
    /// Wire code: `-1` for refusal, the product index otherwise.
    pub fn code(self) -> i32 {
        match self {
            Strategy::Refusal => -1,
            Strategy::Use(t) => t.0 as i32,
        }
    }

    pub fn from_code(code: i64) -> Option<Self> {
        match code {
            -1 => Some(Strategy::Refusal),
            0..=0xFFFF => Some(Strategy::Use(ProductId(code as u16))),
            _ => None,
        }
    }

    pub fn product(self) -> Option<ProductId> {
        match self {
            Strategy::Refusal => None,
            Strategy::Use(t) => Some(t),
        }
    }
}

impl Serialize for Strategy {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        ser.serialize_i32(self.code())
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let code = i64::deserialize(de)?;
        Strategy::from_code(code)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid strategy code {code}")))
    }
}

/// A position of the game: one strategy per player, indexed by [`PlayerId`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyState(Vec<Strategy>);

impl StrategyState {
    pub fn new(choices: Vec<Strategy>) -> Self {
        StrategyState(choices)
    }

    pub fn refusal(players: usize) -> Self {
        StrategyState(vec![Strategy::Refusal; players])
    }

    pub fn get(&self, player: PlayerId) -> Option<Strategy> {
        self.0.get(player.index()).copied()
    }

    pub fn set(&mut self, player: PlayerId, strategy: Strategy) {
        self.0[player.index()] = strategy;
    }

    /// Same state with `player` switched to `strategy`.
    pub fn with(&self, player: PlayerId, strategy: Strategy) -> Self {
        let mut next = self.clone();
        next.set(player, strategy);
        next
    }

    pub fn into_inner(self) -> Vec<Strategy> {
        self.0
    }

    pub fn codes(&self) -> Vec<i32> {
        self.0.iter().map(|s| s.code()).collect()
    }
}

impl Deref for StrategyState {
    type Target = [Strategy];

    fn deref(&self) -> &[Strategy] {
        &self.0
    }
}

impl fmt::Display for StrategyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s.code())?;
        }
        write!(f, "]")
    }
}

/// A unilateral deviation that strictly raises the mover's payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Move<S> {
    pub player: PlayerId,
    pub to: Strategy,
    pub gain: S,
}
