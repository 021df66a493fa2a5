//! Computational coarse geometry at desk scale.
//!
//! The crate computes the set-valued coarse invariant of a pointed space two
//! independent ways and cross-checks them:
//!
//! * as sequential ends, i.e. threads of K-chain-connected components of ball
//!   complements over a growing radius schedule ([`chains`], [`sigma`]);
//! * through the calculus of coarse sequences, the subsequence relation, and
//!   the four-valued metric on the sequence space ([`seq`]).
//!
//! All distances are exact rationals extended with infinity ([`dist`]); there
//! is no floating point anywhere. Spaces are presented by a base point, a
//! distance oracle, and a ball enumerator ([`space`]), with a fixed zoo of
//! concrete spaces behind a declarative JSON schema.

pub mod chains;
pub mod dist;
pub mod lattice;
pub mod maps;
pub mod model;
pub mod point;
pub mod relation;
pub mod seq;
pub mod sigma;
pub mod space;

pub use dist::ExtDist;
pub use model::FiniteModel;
pub use point::Point;
pub use space::Space;

/// Schema version stamped on every JSON artifact the crate reads or writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("certification failure: {0}")]
    Certify(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Error {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
