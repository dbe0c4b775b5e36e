//! Subsets of a small ground set, hypergraphs over them, and the text
//! formats every other module reads and writes.
//!
//! The ground set is `{0, …, n−1}` (0-based). A [`VertexSet`] stores its
//! members in a single `u128`, so universes are capped at
//! [`MAX_UNIVERSE`] elements.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Hard ceiling imposed by the `u128` bit representation.
pub const MAX_UNIVERSE: usize = 128;

/// Default ceiling on `n` for full k-subset sweeps.
pub const DEFAULT_ENUMERATION_GUARD: usize = 28;

/// Default ceiling on `|V|` for exhaustive 2-coloring searches.
pub const DEFAULT_EXHAUSTIVE_GUARD: usize = 30;

/// Environment variable that overrides both guards (use at your own risk).
pub const GUARD_ENV: &str = "KNESERDISC_GUARD";

/// Size guards for exponential sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub enumeration: usize,
    pub exhaustive: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: DEFAULT_ENUMERATION_GUARD,
            exhaustive: DEFAULT_EXHAUSTIVE_GUARD,
        }
    }
}

impl Limits {
    /// Defaults, with both guards replaced by `KNESERDISC_GUARD` when it is
    /// set to an integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(GUARD_ENV) {
            Ok(raw) => {
                let value: usize = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::usage(format!("{GUARD_ENV} must be an integer, got {raw:?}")))?;
                Ok(Limits {
                    enumeration: value,
                    exhaustive: value.min(63),
                })
            }
            Err(_) => Ok(Limits::default()),
        }
    }

    pub(crate) fn check_enumeration(&self, n: usize) -> Result<()> {
        let limit = self.enumeration.min(MAX_UNIVERSE);
        if n > limit {
            return Err(Error::Capacity {
                what: "k-subset enumeration over n",
                requested: n,
                limit,
                hint: "",
            });
        }
        Ok(())
    }
}

fn universe_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn check_universe(n: usize) -> Result<()> {
    if n == 0 || n > MAX_UNIVERSE {
        return Err(Error::usage(format!(
            "universe size must be in 1..={MAX_UNIVERSE}, got {n}"
        )));
    }
    Ok(())
}

/// A subset of `{0, …, universe_size − 1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    // n − 1, so that n = 128 fits
    universe: u8,
    bits: u128,
}

impl VertexSet {
    pub fn empty(universe_size: usize) -> Result<Self> {
        check_universe(universe_size)?;
        Ok(VertexSet {
            universe: (universe_size - 1) as u8,
            bits: 0,
        })
    }

    pub fn full(universe_size: usize) -> Result<Self> {
        let mut s = Self::empty(universe_size)?;
        s.bits = universe_mask(universe_size);
        Ok(s)
    }

    pub fn from_bits(universe_size: usize, bits: u128) -> Result<Self> {
        check_universe(universe_size)?;
        if bits & !universe_mask(universe_size) != 0 {
            return Err(Error::usage(format!(
                "bit pattern {bits:#x} has members outside a universe of size {universe_size}"
            )));
        }
        Ok(Self::from_bits_unchecked(universe_size, bits))
    }

    pub(crate) fn from_bits_unchecked(universe_size: usize, bits: u128) -> Self {
        debug_assert!((1..=MAX_UNIVERSE).contains(&universe_size));
        debug_assert_eq!(bits & !universe_mask(universe_size), 0);
        VertexSet {
            universe: (universe_size - 1) as u8,
            bits,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe_size: usize, members: I) -> Result<Self> {
        let mut s = Self::empty(universe_size)?;
        for i in members {
            if i >= universe_size {
                return Err(Error::usage(format!(
                    "member {i} outside universe of size {universe_size}"
                )));
            }
            s.bits |= 1u128 << i;
        }
        Ok(s)
    }

    #[inline]
    pub fn universe_size(&self) -> usize {
        self.universe as usize + 1
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe_size() && self.bits >> i & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn complement(&self) -> Self {
        VertexSet {
            universe: self.universe,
            bits: !self.bits & universe_mask(self.universe_size()),
        }
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::usage(format!(
                "universe mismatch: {} vs {}",
                self.universe_size(),
                other.universe_size()
            )));
        }
        Ok(())
    }

    /// `|a ∩ b|`. Both sets must live in the same universe.
    pub fn intersection_size(&self, other: &Self) -> Result<usize> {
        self.same_universe(other)?;
        Ok(self.meet(other))
    }

    /// Unchecked `|a ∩ b|` for inner loops.
    #[inline]
    pub(crate) fn meet(&self, other: &Self) -> usize {
        (self.bits & other.bits).count_ones() as usize
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(VertexSet {
            universe: self.universe,
            bits: self.bits | other.bits,
        })
    }

    /// Re-home the set in a universe of size `n ≥` its largest member + 1.
    pub fn with_universe(&self, n: usize) -> Result<Self> {
        Self::from_bits(n, self.bits)
    }

    /// `n`-character 0/1 string; character `i` is `1` iff `i` is a member.
    pub fn to_bitstring(&self) -> String {
        (0..self.universe_size())
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        let mut set = Self::empty(s.chars().count())?;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => set.bits |= 1u128 << i,
                '0' => {}
                other => return Err(Error::usage(format!("bad bitstring character {other:?}"))),
            }
        }
        Ok(set)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (j, i) in self.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.universe_size())
    }
}

/// A hypergraph with an ordered edge list. Edge order is part of the
/// identity: colorings built from it are labelled by edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    universe: usize,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    pub fn new(universe_size: usize, edges: Vec<VertexSet>) -> Result<Self> {
        check_universe(universe_size)?;
        for (i, e) in edges.iter().enumerate() {
            if e.universe_size() != universe_size {
                return Err(Error::usage(format!(
                    "edge {i} lives in a universe of size {}, expected {universe_size}",
                    e.universe_size()
                )));
            }
            if e.is_empty() {
                return Err(Error::usage(format!("edge {i} is empty")));
            }
        }
        Ok(Hypergraph {
            universe: universe_size,
            edges,
        })
    }

    /// Convenience constructor from index lists.
    pub fn from_edge_lists(universe_size: usize, edges: &[&[usize]]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|e| VertexSet::from_indices(universe_size, e.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe_size, edges)
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Same hypergraph with edge `i` removed.
    pub fn without_edge(&self, i: usize) -> Result<Self> {
        if i >= self.edges.len() {
            return Err(Error::usage(format!("no edge {i}")));
        }
        let mut edges = self.edges.clone();
        edges.remove(i);
        Ok(Hypergraph {
            universe: self.universe,
            edges,
        })
    }

    /// Append an edge (must share the universe and be non-empty).
    pub fn with_edge(&self, edge: VertexSet) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Self::new(self.universe, edges)
    }

    /// Embed into a ground set of size `n ≥ |V|`. `map[i]` is the image of
    /// vertex `i`; `None` is the identity embedding.
    pub fn embed(&self, n: usize, map: Option<&[usize]>) -> Result<Self> {
        if n < self.universe {
            return Err(Error::usage(format!(
                "cannot embed a hypergraph on {} vertices into a ground set of size {n}",
                self.universe
            )));
        }
        let edges = match map {
            None => self
                .edges
                .iter()
                .map(|e| e.with_universe(n))
                .collect::<Result<Vec<_>>>()?,
            Some(map) => {
                if map.len() != self.universe {
                    return Err(Error::usage("embedding map length differs from universe size"));
                }
                let mut seen = VertexSet::empty(n)?;
                for &x in map {
                    if x >= n || seen.contains(x) {
                        return Err(Error::usage("embedding map is not injective into the ground set"));
                    }
                    seen.bits |= 1u128 << x;
                }
                self.edges
                    .iter()
                    .map(|e| VertexSet::from_indices(n, e.iter().map(|i| map[i])))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Hypergraph::new(n, edges)
    }

    /// Parse the line-oriented hypergraph format: first significant line is
    /// the universe size, then one edge per line as strictly increasing
    /// 0-based indices. `#` starts a comment line; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut universe: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(n) = universe else {
                let n: usize = line
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("expected universe size, got {line:?}")))?;
                if n == 0 || n > MAX_UNIVERSE {
                    return Err(Error::parse(
                        line_no,
                        format!("universe size must be in 1..={MAX_UNIVERSE}"),
                    ));
                }
                universe = Some(n);
                continue;
            };
            let mut bits = 0u128;
            let mut prev: Option<usize> = None;
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad vertex index {tok:?}")))?;
                if v >= n {
                    return Err(Error::parse(
                        line_no,
                        format!("vertex {v} out of range for universe size {n}"),
                    ));
                }
                if prev.is_some_and(|p| p >= v) {
                    return Err(Error::parse(line_no, "indices must be strictly increasing"));
                }
                prev = Some(v);
                bits |= 1u128 << v;
            }
            if bits == 0 {
                return Err(Error::parse(line_no, "empty edge"));
            }
            edges.push(VertexSet::from_bits_unchecked(n, bits));
        }
        let n = universe.ok_or_else(|| Error::parse(1, "missing universe size"))?;
        Hypergraph::new(n, edges)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.universe);
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|i| i.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A 2-coloring of the ground set: members of `blue` are blue, the rest red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoColoring {
    blue: VertexSet,
}

impl TwoColoring {
    pub fn new(blue: VertexSet) -> Self {
        TwoColoring { blue }
    }

    pub fn from_bits(universe_size: usize, bits: u128) -> Result<Self> {
        Ok(TwoColoring {
            blue: VertexSet::from_bits(universe_size, bits)?,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.blue.universe_size()
    }

    pub fn blue(&self) -> &VertexSet {
        &self.blue
    }

    pub fn red(&self) -> VertexSet {
        self.blue.complement()
    }

    /// `(blue(e), red(e))` for an edge over the same universe.
    pub fn split(&self, edge: &VertexSet) -> (usize, usize) {
        let b = self.blue.meet(edge);
        (b, edge.len() - b)
    }
}

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` as a `u128`, `None` on overflow.
pub(crate) fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Colexicographic k-subsets of `{0, …, n−1}`, i.e. bit patterns in
/// increasing numeric order.
#[derive(Debug, Clone)]
pub struct KSubsets {
    n: usize,
    next: Option<u128>,
    remaining: u128,
}

impl Iterator for KSubsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.next?;
        self.remaining -= 1;
        self.next = if self.remaining == 0 {
            None
        } else {
            Some(gosper_next(cur))
        };
        Some(VertexSet::from_bits_unchecked(self.n, cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

// Next larger integer with the same popcount. Callers stop before the
// pattern would leave the universe.
#[inline]
fn gosper_next(x: u128) -> u128 {
    if x == 0 {
        return 0;
    }
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

/// Stream every k-subset of `{0, …, n−1}` in colex order, guarded by the
/// default enumeration limit.
pub fn enumerate_k_subsets(n: usize, k: usize) -> Result<KSubsets> {
    enumerate_k_subsets_with(n, k, &Limits::default())
}

pub fn enumerate_k_subsets_with(n: usize, k: usize, limits: &Limits) -> Result<KSubsets> {
    check_universe(n)?;
    if k > n {
        return Err(Error::usage(format!("k = {k} exceeds n = {n}")));
    }
    limits.check_enumeration(n)?;
    k_subset_range(n, k, 0, binomial_u128(n, k).expect("guarded"))
}

/// Colex rank of a set: `Σ C(x_i, i+1)` over its sorted members.
pub fn colex_rank(set: &VertexSet) -> u128 {
    set.iter()
        .enumerate()
        .map(|(i, x)| binomial_u128(x, i + 1).expect("rank within u128"))
        .sum()
}

/// Inverse of [`colex_rank`].
pub fn colex_unrank(n: usize, k: usize, mut rank: u128) -> Result<VertexSet> {
    let total = binomial_u128(n, k).ok_or_else(|| Error::usage("C(n, k) overflows u128"))?;
    if rank >= total {
        return Err(Error::usage(format!("rank {rank} ≥ C({n},{k}) = {total}")));
    }
    let mut bits = 0u128;
    let mut hi = n;
    for i in (1..=k).rev() {
        // largest x < hi with C(x, i) ≤ rank
        let mut x = hi - 1;
        while binomial_u128(x, i).expect("bounded") > rank {
            x -= 1;
        }
        rank -= binomial_u128(x, i).expect("bounded");
        bits |= 1u128 << x;
        hi = x;
    }
    Ok(VertexSet::from_bits_unchecked(n, bits))
}

/// The `len` k-subsets starting at colex rank `start`. Parallel sweeps
/// split the index range into such chunks.
pub fn k_subset_range(n: usize, k: usize, start: u128, len: u128) -> Result<KSubsets> {
    check_universe(n)?;
    let total = binomial_u128(n, k).ok_or_else(|| Error::usage("C(n, k) overflows u128"))?;
    if start.checked_add(len).is_none_or(|end| end > total) {
        return Err(Error::usage("subset range exceeds C(n, k)"));
    }
    let next = if len == 0 {
        None
    } else {
        Some(colex_unrank(n, k, start)?.bits())
    };
    Ok(KSubsets {
        n,
        next,
        remaining: len,
    })
}
