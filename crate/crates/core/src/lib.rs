//! Exact arithmetic for free groups, group rings and wreath products, with
//! verifiers for generalized Magnus homomorphisms, parallelogram-free
//! subsets of `ℤ≀ℤ` and certified embeddings of finite groups into
//! wreath-product towers.

pub mod embedding;
pub mod error;
pub mod groups;
pub mod magnus;
pub mod metrics;
pub mod parafree;
pub mod ring;
pub mod wreath;

pub use error::{Error, Result};
