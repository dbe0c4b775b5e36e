//! Frankl-set colorings of generalized Kneser graphs `K(n, k, s)` and
//! hypergraphs `KH(n, r, k, s)` built from a hypergraph with large shifted
//! discrepancy, the reverse extraction, and exhaustive propriety checks.
//!
//! A vertex `A` (a k-subset of `[n]`) gets the label `(e, 1)` when it
//! leans heavily into edge `e`, or `(e, 2)` when it leans into the
//! complement `ē`. Edges are scanned in list order, all side-1 tests before
//! any side-2 test, so labels are reproducible. Thresholds are compared with
//! denominators cleared; nothing here uses floating point.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::setsys::{binomial_u128, enumerate_k_subsets_with, Hypergraph, Limits, VertexSet, MAX_UNIVERSE};

/// `K(n, k, s)` for `r = 2`, `KH(n, r, k, s)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KneserParams {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub r: usize,
}

impl KneserParams {
    pub fn new(n: usize, k: usize, s: usize, r: usize) -> Result<Self> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::usage(format!("n must be in 1..={MAX_UNIVERSE}, got {n}")));
        }
        if k == 0 || k > n {
            return Err(Error::usage(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
        }
        if s == 0 {
            return Err(Error::usage("s must be at least 1"));
        }
        if r < 2 {
            return Err(Error::usage(format!("uniformity r must be at least 2, got {r}")));
        }
        Ok(KneserParams { n, k, s, r })
    }

    /// `K(n, n/2 − t, s)`; `n` must be even.
    pub fn graph(n: usize, t: usize, s: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::usage(format!("K(n, n/2 − t, s) needs even n, got {n}")));
        }
        if t >= n / 2 {
            return Err(Error::usage(format!("t = {t} leaves no vertices (n/2 = {})", n / 2)));
        }
        Self::new(n, n / 2 - t, s, 2)
    }

    /// `KH(n, r, n/r − t, s)`; `r` must divide `n`.
    pub fn hyper(n: usize, r: usize, t: usize, s: usize) -> Result<Self> {
        if r < 2 || !n.is_multiple_of(r) {
            return Err(Error::usage(format!(
                "KH(n, r, n/r − t, s) needs r ≥ 2 dividing n (n = {n}, r = {r})"
            )));
        }
        if t >= n / r {
            return Err(Error::usage(format!("t = {t} leaves no vertices (n/r = {})", n / r)));
        }
        Self::new(n, n / r - t, s, r)
    }

    /// `t = n/r − k` when it is a nonnegative integer.
    pub fn shift(&self) -> Option<usize> {
        (self.n.is_multiple_of(self.r) && self.n / self.r >= self.k).then(|| self.n / self.r - self.k)
    }

    fn check_guard(&self, limits: &Limits) -> Result<()> {
        limits.check_enumeration(self.n)
    }

    fn vertex_count(&self) -> u128 {
        binomial_u128(self.n, self.k).expect("n ≤ 128 keeps C(n, k) within u128")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// leans into the edge
    One,
    /// leans into the complement
    Two,
}

impl Side {
    fn number(self) -> u8 {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }
}

/// The color `1_e` or `2_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorLabel {
    pub edge: usize,
    pub side: Side,
}

impl ColorLabel {
    pub fn new(edge: usize, side: Side) -> Self {
        ColorLabel { edge, side }
    }
}

impl fmt::Display for ColorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}.{}", self.edge, self.side.number())
    }
}

impl FromStr for ColorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::usage(format!("bad color label {s:?}, expected e<idx>.<1|2>"));
        let body = s.strip_prefix('e').ok_or_else(bad)?;
        let (idx, side) = body.split_once('.').ok_or_else(bad)?;
        let edge = idx.parse().map_err(|_| bad())?;
        let side = match side {
            "1" => Side::One,
            "2" => Side::Two,
            _ => return Err(bad()),
        };
        Ok(ColorLabel { edge, side })
    }
}

/// Which threshold family assigns labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// `2|A ∩ f| ≥ |f| + s`
    Graph,
    /// `2r|A ∩ f| > 2|f| + r(r−1)(s−1)`
    Hyper,
}

/// Labels single vertices; reusable when the vertex set is too large to
/// enumerate.
#[derive(Debug, Clone)]
pub struct KneserColorer {
    params: KneserParams,
    rule: Rule,
    // (edge, complement) over [n], in edge order
    sides: Vec<(VertexSet, VertexSet)>,
}

impl KneserColorer {
    /// Coloring from the graph construction; `h` is embedded by `map`
    /// (identity when `None`).
    pub fn graph(params: KneserParams, h: &Hypergraph, map: Option<&[usize]>) -> Result<Self> {
        if params.r != 2 {
            return Err(Error::usage(format!(
                "graph coloring needs r = 2, got r = {}",
                params.r
            )));
        }
        Self::build(params, h, map, Rule::Graph)
    }

    /// Coloring from the r-uniform hypergraph construction.
    pub fn hyper(params: KneserParams, h: &Hypergraph, map: Option<&[usize]>) -> Result<Self> {
        Self::build(params, h, map, Rule::Hyper)
    }

    fn build(params: KneserParams, h: &Hypergraph, map: Option<&[usize]>, rule: Rule) -> Result<Self> {
        let embedded = h.embed(params.n, map)?;
        let sides = embedded.edges().iter().map(|e| (*e, e.complement())).collect();
        Ok(KneserColorer { params, rule, sides })
    }

    pub fn params(&self) -> KneserParams {
        self.params
    }

    /// Edges of the embedded hypergraph.
    pub fn edges(&self) -> impl Iterator<Item = &VertexSet> {
        self.sides.iter().map(|(e, _)| e)
    }

    #[inline]
    fn heavy(&self, a: &VertexSet, f: &VertexSet) -> bool {
        let x = a.meet(f);
        let KneserParams { s, r, .. } = self.params;
        match self.rule {
            Rule::Graph => 2 * x >= f.len() + s,
            Rule::Hyper => 2 * r * x > 2 * f.len() + r * (r - 1) * (s - 1),
        }
    }

    /// First `(e, 1)`, else first `(e, 2)`; [`Error::Uncolorable`] if none.
    pub fn label(&self, a: &VertexSet) -> Result<ColorLabel> {
        if a.universe_size() != self.params.n || a.len() != self.params.k {
            return Err(Error::usage(format!(
                "vertex {a} is not a {}-subset of [{}]",
                self.params.k, self.params.n
            )));
        }
        if let Some(i) = self.sides.iter().position(|(e, _)| self.heavy(a, e)) {
            return Ok(ColorLabel::new(i, Side::One));
        }
        if let Some(i) = self.sides.iter().position(|(_, c)| self.heavy(a, c)) {
            return Ok(ColorLabel::new(i, Side::Two));
        }
        Err(Error::Uncolorable { vertex: *a })
    }

    /// The Frankl-set generator of a label: the edge or its complement.
    pub fn generator(&self, label: ColorLabel) -> Option<VertexSet> {
        self.sides.get(label.edge).map(|(e, c)| match label.side {
            Side::One => *e,
            Side::Two => *c,
        })
    }

    /// Label every k-subset, in colex order.
    pub fn color_all(&self, limits: &Limits) -> Result<Coloring> {
        self.params.check_guard(limits)?;
        let vertices: Vec<VertexSet> = enumerate_k_subsets_with(self.params.n, self.params.k, limits)?.collect();
        let labels: Vec<Result<ColorLabel>> = vertices.par_iter().map(|a| self.label(a)).collect();
        let labels = labels.into_iter().collect::<Result<Vec<_>>>()?;
        let hypergraph = Hypergraph::new(self.params.n, self.edges().copied().collect())?;
        Ok(Coloring {
            params: self.params,
            hypergraph: Some(hypergraph),
            vertices,
            labels,
        })
    }
}

/// Labels for the vertices of a Kneser graph or hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub params: KneserParams,
    /// The hypergraph embedded in `[n]`, when known (absent for colorings
    /// read back from a file).
    pub hypergraph: Option<Hypergraph>,
    pub vertices: Vec<VertexSet>,
    pub labels: Vec<ColorLabel>,
}

impl Coloring {
    pub fn colors_used(&self) -> usize {
        self.labels.iter().collect::<BTreeSet<_>>().len()
    }

    /// Vertex indices per label, labels ascending.
    pub fn classes(&self) -> BTreeMap<ColorLabel, Vec<usize>> {
        let mut out: BTreeMap<ColorLabel, Vec<usize>> = BTreeMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            out.entry(*l).or_default().push(i);
        }
        out
    }

    pub fn label_of(&self, v: &VertexSet) -> Option<ColorLabel> {
        self.vertices.iter().position(|x| x == v).map(|i| self.labels[i])
    }

    /// Generators of the used colors (edge for side 1, complement for side
    /// 2), in label order.
    pub fn generators(&self) -> Result<Vec<VertexSet>> {
        let h = self
            .hypergraph
            .as_ref()
            .ok_or_else(|| Error::usage("coloring carries no hypergraph"))?;
        self.classes()
            .keys()
            .map(|l| {
                let e = h
                    .edges()
                    .get(l.edge)
                    .ok_or_else(|| Error::usage(format!("label {l} names a missing edge")))?;
                Ok(match l.side {
                    Side::One => *e,
                    Side::Two => e.complement(),
                })
            })
            .collect()
    }

    /// Header `n k s r colors_used`, then `<bitstring> e<idx>.<side>` per
    /// vertex in stored order.
    pub fn serialize(&self) -> String {
        let p = self.params;
        let mut out = format!("{} {} {} {} {}\n", p.n, p.k, p.s, p.r, self.colors_used());
        for (v, l) in self.vertices.iter().zip(&self.labels) {
            out.push_str(&v.to_bitstring());
            out.push(' ');
            out.push_str(&l.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(hline, "header must be `n k s r colors_used`"))?;
        let [n, k, s, r, declared] = nums[..] else {
            return Err(Error::parse(hline, "header must be `n k s r colors_used`"));
        };
        let params = KneserParams::new(n, k, s, r).map_err(|e| Error::parse(hline, e.to_string()))?;
        let mut vertices = Vec::new();
        let mut labels = Vec::new();
        for (no, line) in lines {
            let (bits, label) = line
                .split_once(' ')
                .ok_or_else(|| Error::parse(no, "expected `<bitstring> <label>`"))?;
            let v = VertexSet::from_bitstring(bits).map_err(|e| Error::parse(no, e.to_string()))?;
            if v.universe_size() != n {
                return Err(Error::parse(
                    no,
                    format!("bitstring has length {}, expected {n}", v.universe_size()),
                ));
            }
            vertices.push(v);
            labels.push(
                label
                    .trim()
                    .parse()
                    .map_err(|e: Error| Error::parse(no, e.to_string()))?,
            );
        }
        let coloring = Coloring {
            params,
            hypergraph: None,
            vertices,
            labels,
        };
        if coloring.colors_used() != declared {
            return Err(Error::parse(
                hline,
                format!(
                    "header declares {declared} colors, body uses {}",
                    coloring.colors_used()
                ),
            ));
        }
        Ok(coloring)
    }
}

/// All k-subsets `v` of `[n]` with `2|v ∩ A| ≥ |A| + s`.
pub fn frankl_set(n: usize, k: usize, s: usize, a: &VertexSet) -> Result<Vec<VertexSet>> {
    frankl_set_with(n, k, s, a, &Limits::default())
}

pub fn frankl_set_with(n: usize, k: usize, s: usize, a: &VertexSet, limits: &Limits) -> Result<Vec<VertexSet>> {
    if a.len() < s {
        return Err(Error::usage(format!("|A| = {} is smaller than s = {s}", a.len())));
    }
    if a.universe_size() != n {
        return Err(Error::usage(format!(
            "A lives in a universe of size {}, expected {n}",
            a.universe_size()
        )));
    }
    Ok(enumerate_k_subsets_with(n, k, limits)?
        .filter(|v| 2 * v.meet(a) >= a.len() + s)
        .collect())
}

/// Color `K(n, k, s)` from `h` (`params.r` must be 2).
pub fn color_kneser(params: KneserParams, h: &Hypergraph) -> Result<Coloring> {
    KneserColorer::graph(params, h, None)?.color_all(&Limits::default())
}

/// Color `KH(n, r, k, s)` from `h`.
pub fn color_kneser_hypergraph(params: KneserParams, h: &Hypergraph) -> Result<Coloring> {
    KneserColorer::hyper(params, h, None)?.color_all(&Limits::default())
}

/// Dense re-indexing of a set family: vertices are the union (ascending),
/// edges the members in order. Returns the hypergraph and `map`, where
/// `map[i]` is the original element behind new vertex `i`.
pub fn extract_hypergraph(family: &[VertexSet]) -> Result<(Hypergraph, Vec<usize>)> {
    let first = family.first().ok_or_else(|| Error::usage("empty family"))?;
    let mut union = *first;
    for a in &family[1..] {
        union = union.union(a)?;
    }
    let map: Vec<usize> = union.iter().collect();
    if map.is_empty() {
        return Err(Error::usage("family has no elements"));
    }
    let index: HashMap<usize, usize> = map.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let edges = family
        .iter()
        .map(|a| VertexSet::from_indices(map.len(), a.iter().map(|x| index[&x])))
        .collect::<Result<Vec<_>>>()?;
    Ok((Hypergraph::new(map.len(), edges)?, map))
}

/// Vertices sharing a label that span an edge of the Kneser (hyper)graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub label: ColorLabel,
    pub vertices: Vec<VertexSet>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "label={} vertices={}", self.label, vs.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub vertices: usize,
    pub expected_vertices: u128,
    /// Why the assignment is not total, if it is not.
    pub totality: Option<String>,
    pub colors_used: usize,
    /// Pairs (or pair tests inside tuple search) examined.
    pub checked: u64,
    pub violation: Option<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.totality.is_none() && self.violation.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pass={} vertices={} colors_used={} checked={}",
            self.passed(),
            self.vertices,
            self.colors_used,
            self.checked
        )?;
        if let Some(t) = &self.totality {
            write!(f, " totality=\"{t}\"")?;
        }
        if let Some(v) = &self.violation {
            write!(f, " violation: {v}")?;
        }
        Ok(())
    }
}

/// Every k-subset appears once, with the right size and universe.
pub(crate) fn totality(n: usize, k: usize, vertices: &[VertexSet]) -> Option<String> {
    let expected = binomial_u128(n, k).expect("bounded");
    if let Some(bad) = vertices.iter().find(|v| v.universe_size() != n || v.len() != k) {
        return Some(format!("{bad} is not a {k}-subset of [{n}]"));
    }
    let mut bits: Vec<u128> = vertices.iter().map(|v| v.bits()).collect();
    bits.sort_unstable();
    if let Some(w) = bits.windows(2).find(|w| w[0] == w[1]) {
        return Some(format!(
            "vertex {} appears more than once",
            VertexSet::from_bits_unchecked(n, w[0])
        ));
    }
    if bits.len() as u128 != expected {
        return Some(format!("{} of {expected} vertices colored", bits.len()));
    }
    None
}

/// Totality plus independence of every color class.
pub fn verify_proper(coloring: &Coloring) -> Result<VerifyReport> {
    verify_proper_with(coloring, &Limits::default())
}

pub fn verify_proper_with(coloring: &Coloring, limits: &Limits) -> Result<VerifyReport> {
    let p = coloring.params;
    p.check_guard(limits)?;
    if coloring.vertices.len() != coloring.labels.len() {
        return Err(Error::usage("vertex and label lists differ in length"));
    }
    let totality = totality(p.n, p.k, &coloring.vertices);
    let (checked, violation) = if p.r == 2 && p.s == 1 && 2 * p.k == p.n && totality.is_none() {
        check_matching(coloring)
    } else {
        let (checked, found) = check_classes(&coloring.vertices, &coloring.labels, |a, b| a.meet(b) < p.s, p.r);
        let violation = found.map(|(label, tuple)| Violation {
            label,
            vertices: tuple.into_iter().map(|i| coloring.vertices[i]).collect(),
        });
        (checked, violation)
    };
    Ok(VerifyReport {
        vertices: coloring.vertices.len(),
        expected_vertices: p.vertex_count(),
        totality,
        colors_used: coloring.colors_used(),
        checked,
        violation,
    })
}

// K(2k, k, 1) is a perfect matching: each vertex is adjacent only to its
// complement.
fn check_matching(coloring: &Coloring) -> (u64, Option<Violation>) {
    let index: HashMap<u128, usize> = coloring
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.bits(), i))
        .collect();
    let violation = coloring.vertices.par_iter().enumerate().find_map_first(|(i, v)| {
        let j = index[&v.complement().bits()];
        (i < j && coloring.labels[i] == coloring.labels[j]).then(|| Violation {
            label: coloring.labels[i],
            vertices: vec![*v, coloring.vertices[j]],
        })
    });
    (coloring.vertices.len() as u64 / 2, violation)
}

/// Search each color class for `r` items that are pairwise adjacent under
/// `adjacent`. Returns pairs tested and the first offending tuple (item
/// indices) in label order.
pub(crate) fn check_classes<T, F>(
    items: &[T],
    labels: &[ColorLabel],
    adjacent: F,
    r: usize,
) -> (u64, Option<(ColorLabel, Vec<usize>)>)
where
    T: Sync,
    F: Fn(&T, &T) -> bool + Sync,
{
    let mut classes: BTreeMap<ColorLabel, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        classes.entry(*l).or_default().push(i);
    }
    let mut checked = 0u64;
    for (label, members) in classes {
        let (count, found) = find_clique(items, &members, &adjacent, r);
        checked += count;
        if let Some(tuple) = found {
            return (checked, Some((label, tuple)));
        }
    }
    (checked, None)
}

fn find_clique<T, F>(items: &[T], members: &[usize], adjacent: &F, r: usize) -> (u64, Option<Vec<usize>>)
where
    T: Sync,
    F: Fn(&T, &T) -> bool + Sync,
{
    let c = members.len() as u64;
    let pairs = c * c.saturating_sub(1) / 2;
    if r == 2 {
        let found = members.par_iter().enumerate().find_map_first(|(a, &i)| {
            members[a + 1..]
                .iter()
                .find(|&&j| adjacent(&items[i], &items[j]))
                .map(|&j| vec![i, j])
        });
        return (pairs, found);
    }
    // forward adjacency lists, positions within `members`
    let forward: Vec<Vec<usize>> = (0..members.len())
        .into_par_iter()
        .map(|a| {
            (a + 1..members.len())
                .filter(|&b| adjacent(&items[members[a]], &items[members[b]]))
                .collect()
        })
        .collect();
    let mut stack = Vec::with_capacity(r);
    for a in 0..members.len() {
        stack.clear();
        stack.push(a);
        if extend(&forward, &forward[a], r, &mut stack) {
            return (pairs, Some(stack.iter().map(|&x| members[x]).collect()));
        }
    }
    (pairs, None)
}

// Extend `stack` (a clique) to size r using candidates adjacent to all of it.
fn extend(forward: &[Vec<usize>], candidates: &[usize], r: usize, stack: &mut Vec<usize>) -> bool {
    if stack.len() == r {
        return true;
    }
    for (pos, &b) in candidates.iter().enumerate() {
        let next: Vec<usize> = candidates[pos + 1..]
            .iter()
            .copied()
            .filter(|x| forward[b].binary_search(x).is_ok())
            .collect();
        if next.len() + stack.len() + 1 < r {
            continue;
        }
        stack.push(b);
        if extend(forward, &next, r, stack) {
            return true;
        }
        stack.pop();
    }
    false
}
