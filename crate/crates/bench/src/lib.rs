//! Fixtures shared by the criterion benches.

use kneserdisc_core::{catalog, coloring, Coloring, Hypergraph, KneserParams};

/// Hadamard hypergraph of order `m`.
pub fn hadamard(m: usize) -> Hypergraph {
    catalog::hadamard(m).expect("catalogued order")
}

/// The Fano coloring of `K(14, 7, 3)`.
pub fn fano_coloring() -> Coloring {
    let params = KneserParams::graph(14, 0, 3).expect("valid parameters");
    coloring::color_kneser(params, &catalog::fano()).expect("Fano certifies s = 3")
}
