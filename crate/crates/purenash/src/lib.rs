//! Pure-strategy Nash equilibria in graphical and colored hypergraphical
//! games, decided by reduction to colored-hypergraph homomorphism.
//!
//! The pipeline: iteratively delete sink players (their equilibria extend
//! greedily), turn the surviving game into a homomorphism instance whose
//! solutions are exactly the equilibria, solve that by dynamic programming
//! over a tree decomposition (or brute force past a width threshold), and
//! map the witness back. Gadget constructions for the reverse direction —
//! encoding homomorphism problems as games — live in [`gadgets`].
//!
//! All utilities are exact rationals; every search order is deterministic,
//! so results are reproducible across runs and across the parallel and
//! serial backends (the `parallel` feature, on by default, uses rayon).

pub mod document;
pub mod error;
pub mod gadgets;
pub mod games;
pub mod generate;
pub mod graphs;
pub mod homomorphism;
pub mod pipeline;
pub mod reduction;
pub mod treewidth;

pub use error::{Error, Result};
