//! Social network games with product choice.
//!
//! Players sit on a weighted directed graph and each picks one product from
//! the set available to them, or refuses. The crate computes payoffs and
//! improving moves exactly, explores improvement dynamics exhaustively,
//! builds the cascade gadget, and checks the paradoxical networks built from
//! it. Everything is generic over [`Scalar`]; the exact instance is
//! [`Rational`].

pub mod cascade;
pub mod dynamics;
pub mod error;
pub mod dot;
pub mod game;
pub mod io;
pub mod oracle;
pub mod paradox;
pub mod scalar;

pub use error::{Error, GameError, Result};
pub use scalar::Scalar;

/// Exact scalar used by default everywhere.
pub type Rational = num_rational::Ratio<i64>;

pub type ExactNetwork = game::Network<Rational>;
pub type FloatNetwork = game::Network<f64>;
pub type ExactParams = cascade::CascadeParams<Rational>;
