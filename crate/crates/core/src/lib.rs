//! Proper colorings of generalized Kneser graphs `K(n, k, s)` and Kneser
//! hypergraphs `KH(n, r, k, s)` from set systems of large discrepancy,
//! chiefly the row supports of Hadamard matrices.
//!
//! Modules, bottom-up:
//! - [`setsys`]: bit-set subsets, hypergraphs, k-subset enumeration, text I/O
//! - [`hadamard`]: Sylvester / Paley-I matrices and their hypergraphs
//! - [`discrepancy`]: exact (Gray-code) and local-search discrepancy
//! - [`coloring`]: Frankl-set colorings, extraction, propriety checks
//! - [`bounds`]: exact evaluation of the chromatic bounds
//! - [`geometry`]: signed-vector graphs colored through their supports
//!
//! The ground set is 0-based throughout: `[n]` means `{0, …, n−1}`.

pub mod bounds;
pub mod catalog;
pub mod coloring;
pub mod discrepancy;
pub mod error;
pub mod geometry;
pub mod hadamard;
pub mod setsys;

pub use coloring::{ColorLabel, Coloring, KneserColorer, KneserParams, Side, VerifyReport};
pub use discrepancy::{DiscrepancyResult, HalfInt, HeuristicConfig, Mode};
pub use error::{Error, Result};
pub use hadamard::SignMatrix;
pub use setsys::{Hypergraph, Limits, TwoColoring, VertexSet};
