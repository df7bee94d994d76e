//! A synchronous congested-clique simulator together with the subgraph
//! detection algorithms and message-routing subroutines that run on it.
//!
//! Every algorithm runs on a [`runtime::Clique`], which enforces the
//! one-word-per-ordered-pair-per-round capacity and keeps a
//! [`runtime::RoundLedger`] of rounds, words and bits. Brute-force oracles in
//! [`graph`] provide the ground truth the detectors are checked against.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod general;
pub mod generate;
pub mod graph;
pub mod local;
pub mod random;
pub mod routing;
pub mod runtime;
pub mod sparse;

pub use error::Error;
pub use graph::{Graph, SubgraphPattern, TriangleCensus, Vertex};
pub use runtime::{Clique, Envelope, RoundLedger, Word};
