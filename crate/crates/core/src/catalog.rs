//! Named instances: the triangle, the Fano plane, complete uniform
//! hypergraphs and Hadamard hypergraphs.

use crate::error::{Error, Result};
use crate::hadamard::hadamard_hypergraph;
use crate::setsys::{enumerate_k_subsets, Hypergraph};

/// `([3], {{0,1},{0,2},{1,2}})`, plain discrepancy 2.
pub fn triangle() -> Hypergraph {
    Hypergraph::from_edge_lists(3, &[&[0, 1], &[0, 2], &[1, 2]]).expect("valid")
}

/// Lines of the Fano plane on points `0..7`, plain discrepancy 3.
pub fn fano() -> Hypergraph {
    Hypergraph::from_edge_lists(
        7,
        &[
            &[0, 1, 2],
            &[0, 3, 4],
            &[0, 5, 6],
            &[1, 3, 5],
            &[1, 4, 6],
            &[2, 3, 6],
            &[2, 4, 5],
        ],
    )
    .expect("valid")
}

/// `([2s+1], C([2s+1], s))`: every s-subset of a (2s+1)-set.
pub fn complete(s: usize) -> Result<Hypergraph> {
    if s == 0 {
        return Err(Error::usage("complete hypergraph needs s ≥ 1"));
    }
    let n = 2 * s + 1;
    Hypergraph::new(n, enumerate_k_subsets(n, s)?.collect())
}

/// Row supports of the normalized order-`m` Hadamard matrix.
pub fn hadamard(m: usize) -> Result<Hypergraph> {
    hadamard_hypergraph(m)
}

/// [`hadamard`] without the all-ones first row.
pub fn hadamard_tail(m: usize) -> Result<Hypergraph> {
    hadamard(m)?.without_edge(0)
}

/// Resolve `triangle`, `fano`, `complete:<s>`, `hadamard:<m>` or
/// `hadamard-tail:<m>`.
pub fn resolve(name: &str) -> Result<Hypergraph> {
    let num = |x: &str| -> Result<usize> {
        x.parse()
            .map_err(|_| Error::usage(format!("catalog entry {name:?}: {x:?} is not a number")))
    };
    match name.split_once(':') {
        None if name == "triangle" => Ok(triangle()),
        None if name == "fano" => Ok(fano()),
        Some(("complete", s)) => complete(num(s)?),
        Some(("hadamard", m)) => hadamard(num(m)?),
        Some(("hadamard-tail", m)) => hadamard_tail(num(m)?),
        _ => Err(Error::usage(format!(
            "unknown catalog entry {name:?}; known: triangle, fano, complete:<s>, hadamard:<m>, hadamard-tail:<m>"
        ))),
    }
}

/// Names accepted by [`resolve`], with example parameters.
pub const NAMES: &[&str] = &["triangle", "fano", "complete:<s>", "hadamard:<m>", "hadamard-tail:<m>"];

/// Instances small enough for exhaustive discrepancy: triangle, Fano,
/// single edges, and Hadamard hypergraphs up to order 16.
pub fn small_catalogue() -> Vec<(String, Hypergraph)> {
    let mut out = vec![("triangle".to_string(), triangle()), ("fano".to_string(), fano())];
    for size in 1..=6usize {
        let all: Vec<usize> = (0..size).collect();
        out.push((
            format!("edge:{size}"),
            Hypergraph::from_edge_lists(size, &[&all]).expect("valid"),
        ));
    }
    for s in 1..=2 {
        out.push((format!("complete:{s}"), complete(s).expect("valid")));
    }
    for m in [2, 4, 8, 12, 16] {
        out.push((format!("hadamard:{m}"), hadamard(m).expect("catalogued")));
    }
    out
}
