use thiserror::Error;

use crate::game::{PlayerId, ProductId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("player {0} does not exist")]
    InvalidPlayer(PlayerId),

    #[error("product {0} does not exist")]
    UnknownProduct(ProductId),

    #[error("state has {got} entries, network has {expected} players")]
    StateLength { expected: usize, got: usize },

    #[error("player {player} cannot use product {product}")]
    UnavailableStrategy { player: PlayerId, product: ProductId },

    #[error("move of player {player} is not an improvement")]
    NotImproving { player: PlayerId },

    #[error("product {product} is already available to player {player}")]
    AlreadyAvailable { player: PlayerId, product: ProductId },

    #[error("product {product} is not available to player {player}")]
    NotAvailable { player: PlayerId, product: ProductId },

    #[error("use price must be strictly positive")]
    NonPositiveThreshold,

    #[error("edge weight must be non-negative")]
    NegativeWeight,

    #[error("edge selector matches no edge")]
    EdgeNotFound,

    #[error("edge selector matches {0} edges")]
    AmbiguousEdge(usize),

    #[error("payoff vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Game(#[from] GameError),

    #[error("invalid cascade parameters: {0:?}")]
    InvalidParams(Vec<crate::cascade::ParamViolation>),

    #[error("emotional influence of the {rank}-rank cannot target player {player}: {reason}")]
    InfluencePrecondition {
        rank: String,
        player: PlayerId,
        reason: String,
    },

    #[error("state space of {states} states exceeds the enumeration budget of {budget}")]
    BudgetExceeded { states: u128, budget: u64 },

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
