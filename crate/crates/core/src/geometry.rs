//! Signed-vector graphs. Vertices are the `{0, ±1}`-vectors of `R^n` with
//! exactly `k` entries `+1` and `l` entries `−1`; two are adjacent when
//! their scalar product is below a threshold. A coloring is obtained by
//! coloring supports as vertices of a plain Kneser graph: supports that
//! meet in `q` coordinates have scalar product at least `q − 4l`.

use std::collections::HashMap;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{check_classes, ColorLabel, KneserColorer, KneserParams};
use crate::error::{Error, Result};
use crate::setsys::{binomial_u128, enumerate_k_subsets_with, Hypergraph, Limits, VertexSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedVector {
    plus: VertexSet,
    minus: VertexSet,
}

impl SignedVector {
    pub fn new(plus: VertexSet, minus: VertexSet) -> Result<Self> {
        if plus.universe_size() != minus.universe_size() {
            return Err(Error::usage("plus and minus parts live in different dimensions"));
        }
        if plus.meet(&minus) != 0 {
            return Err(Error::usage("a coordinate cannot be both +1 and −1"));
        }
        Ok(SignedVector { plus, minus })
    }

    pub fn dimension(&self) -> usize {
        self.plus.universe_size()
    }

    pub fn plus(&self) -> &VertexSet {
        &self.plus
    }

    pub fn minus(&self) -> &VertexSet {
        &self.minus
    }

    /// Coordinates that are nonzero.
    pub fn support(&self) -> VertexSet {
        self.plus.union(&self.minus).expect("same universe")
    }

    /// n characters over `0`, `+`, `-`.
    pub fn to_signstring(&self) -> String {
        (0..self.dimension())
            .map(|i| {
                if self.plus.contains(i) {
                    '+'
                } else if self.minus.contains(i) {
                    '-'
                } else {
                    '0'
                }
            })
            .collect()
    }

    pub fn from_signstring(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let pick =
            |ch: char| VertexSet::from_indices(n, s.chars().enumerate().filter(|&(_, c)| c == ch).map(|(i, _)| i));
        if let Some(bad) = s.chars().find(|c| !matches!(c, '0' | '+' | '-')) {
            return Err(Error::usage(format!("bad sign character {bad:?}")));
        }
        Self::new(pick('+')?, pick('-')?)
    }
}

impl fmt::Display for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_signstring())
    }
}

impl fmt::Debug for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedVector({self})")
    }
}

/// `(u, v)` for `{0, ±1}` vectors.
pub fn scalar_product(u: &SignedVector, v: &SignedVector) -> Result<i64> {
    if u.dimension() != v.dimension() {
        return Err(Error::usage(format!(
            "dimension mismatch: {} vs {}",
            u.dimension(),
            v.dimension()
        )));
    }
    Ok(product(u, v))
}

#[inline]
fn product(u: &SignedVector, v: &SignedVector) -> i64 {
    let same = u.plus.meet(&v.plus) + u.minus.meet(&v.minus);
    let opposite = u.plus.meet(&v.minus) + u.minus.meet(&v.plus);
    same as i64 - opposite as i64
}

/// Every vector with `k` plus and `l` minus entries: supports in colex
/// order, then minus positions within the support in colex order.
pub fn enumerate_signed(n: usize, k: usize, l: usize) -> Result<Vec<SignedVector>> {
    enumerate_signed_with(n, k, l, &Limits::default())
}

pub fn enumerate_signed_with(n: usize, k: usize, l: usize, limits: &Limits) -> Result<Vec<SignedVector>> {
    if k + l > n {
        return Err(Error::usage(format!("k + l = {} exceeds n = {n}", k + l)));
    }
    if k + l == 0 {
        let zero = VertexSet::empty(n)?;
        return Ok(vec![SignedVector {
            plus: zero,
            minus: zero,
        }]);
    }
    let within: Vec<VertexSet> = enumerate_k_subsets_with(k + l, l, limits)?.collect();
    let mut out = Vec::new();
    for support in enumerate_k_subsets_with(n, k + l, limits)? {
        let positions: Vec<usize> = support.iter().collect();
        for pick in &within {
            let minus = VertexSet::from_indices(n, pick.iter().map(|i| positions[i]))?;
            let plus = VertexSet::from_bits(n, support.bits() & !minus.bits())?;
            out.push(SignedVector { plus, minus });
        }
    }
    Ok(out)
}

/// Colors `V_{n/2−l−t, l}` by coloring supports in `K(n, n/2 − t, 2l + s)`.
#[derive(Debug, Clone)]
pub struct SignedColorer {
    pub n: usize,
    pub l: usize,
    pub t: usize,
    pub s: usize,
    support: KneserColorer,
}

impl SignedColorer {
    pub fn new(n: usize, l: usize, t: usize, s: usize, h: &Hypergraph) -> Result<Self> {
        if !n.is_multiple_of(2) || l + t >= n / 2 {
            return Err(Error::usage(format!(
                "need even n and l + t < n/2 (n = {n}, l = {l}, t = {t})"
            )));
        }
        let params = KneserParams::graph(n, t, 2 * l + s)?;
        Ok(SignedColorer {
            n,
            l,
            t,
            s,
            support: KneserColorer::graph(params, h, None)?,
        })
    }

    /// Number of `+1` entries.
    pub fn plus_count(&self) -> usize {
        self.n / 2 - self.l - self.t
    }

    /// Adjacent iff the scalar product is below this.
    pub fn threshold(&self) -> i64 {
        self.s as i64 - 2 * self.l as i64
    }

    pub fn label(&self, v: &SignedVector) -> Result<ColorLabel> {
        if v.dimension() != self.n || v.plus.len() != self.plus_count() || v.minus.len() != self.l {
            return Err(Error::usage(format!(
                "{v} is not in V_{{{},{}}}",
                self.plus_count(),
                self.l
            )));
        }
        self.support.label(&v.support())
    }

    pub fn color_all(&self, limits: &Limits) -> Result<SignedColoring> {
        let vectors = enumerate_signed_with(self.n, self.plus_count(), self.l, limits)?;
        let labels = vectors.iter().map(|v| self.label(v)).collect::<Result<Vec<_>>>()?;
        Ok(SignedColoring {
            n: self.n,
            l: self.l,
            t: self.t,
            s: self.s,
            vectors,
            labels,
        })
    }

    /// A uniformly random vertex.
    pub fn random_vertex<R: Rng>(&self, rng: &mut R) -> SignedVector {
        let support: Vec<usize> = index::sample(rng, self.n, self.n / 2 - self.t).into_vec();
        random_signs(rng, self.n, &support, self.l)
    }
}

fn random_signs<R: Rng>(rng: &mut R, n: usize, support: &[usize], l: usize) -> SignedVector {
    let minus_pos = index::sample(rng, support.len(), l);
    let minus = VertexSet::from_indices(n, minus_pos.iter().map(|i| support[i])).expect("in range");
    let plus = VertexSet::from_indices(n, support.iter().copied())
        .expect("in range")
        .bits()
        & !minus.bits();
    SignedVector {
        plus: VertexSet::from_bits(n, plus).expect("in range"),
        minus,
    }
}

/// Color `V_{n/2−l−t, l}` through supports; errors as the Kneser colorer.
pub fn color_signed(n: usize, l: usize, t: usize, s: usize, h: &Hypergraph) -> Result<SignedColoring> {
    SignedColorer::new(n, l, t, s, h)?.color_all(&Limits::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedColoring {
    pub n: usize,
    pub l: usize,
    pub t: usize,
    pub s: usize,
    pub vectors: Vec<SignedVector>,
    pub labels: Vec<ColorLabel>,
}

impl SignedColoring {
    pub fn colors_used(&self) -> usize {
        self.labels.iter().collect::<std::collections::BTreeSet<_>>().len()
    }

    pub fn plus_count(&self) -> usize {
        self.n / 2 - self.l - self.t
    }

    /// Header `n k s r colors_used` (`k` = plus count, `r` = 2), then
    /// `<signstring> e<idx>.<side>` per vector.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {} {} 2 {}\n", self.n, self.plus_count(), self.s, self.colors_used());
        for (v, lab) in self.vectors.iter().zip(&self.labels) {
            out.push_str(&v.to_signstring());
            out.push(' ');
            out.push_str(&lab.to_string());
            out.push('\n');
        }
        out
    }

    /// Inverse of [`serialize`](Self::serialize); `l` and `t` are read off
    /// the vectors.
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
        let [n, k, s, _r, declared] = nums[..] else {
            return Err(Error::parse(hline, "header must be `n k s r colors_used`"));
        };
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for (no, line) in lines {
            let (signs, label) = line
                .split_once(' ')
                .ok_or_else(|| Error::parse(no, "expected `<signstring> <label>`"))?;
            let v = SignedVector::from_signstring(signs).map_err(|e| Error::parse(no, e.to_string()))?;
            if v.dimension() != n {
                return Err(Error::parse(
                    no,
                    format!("vector has dimension {}, expected {n}", v.dimension()),
                ));
            }
            vectors.push(v);
            labels.push(
                label
                    .trim()
                    .parse()
                    .map_err(|e: Error| Error::parse(no, e.to_string()))?,
            );
        }
        let l = vectors.first().map_or(0, |v| v.minus.len());
        if n % 2 != 0 || k + l > n / 2 {
            return Err(Error::parse(hline, "need even n and k + l ≤ n/2"));
        }
        let coloring = SignedColoring {
            n,
            l,
            t: n / 2 - k - l,
            s,
            vectors,
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedViolation {
    pub label: ColorLabel,
    pub pair: (SignedVector, SignedVector),
    pub product: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedVerifyReport {
    pub vectors: usize,
    pub totality: Option<String>,
    pub colors_used: usize,
    pub checked: u64,
    pub violation: Option<SignedViolation>,
}

impl SignedVerifyReport {
    pub fn passed(&self) -> bool {
        self.totality.is_none() && self.violation.is_none()
    }
}

impl fmt::Display for SignedVerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pass={} vertices={} colors_used={} checked={}",
            self.passed(),
            self.vectors,
            self.colors_used,
            self.checked
        )?;
        if let Some(t) = &self.totality {
            write!(f, " totality=\"{t}\"")?;
        }
        if let Some(v) = &self.violation {
            write!(
                f,
                " violation: label={} vertices={} {} product={}",
                v.label, v.pair.0, v.pair.1, v.product
            )?;
        }
        Ok(())
    }
}

/// Totality over `V_{n/2−l−t, l}` and no same-label pair with scalar
/// product below `s − 2l`.
pub fn verify_signed(coloring: &SignedColoring) -> Result<SignedVerifyReport> {
    verify_signed_with(coloring, &Limits::default())
}

pub fn verify_signed_with(c: &SignedColoring, limits: &Limits) -> Result<SignedVerifyReport> {
    limits.check_enumeration(c.n)?;
    if c.vectors.len() != c.labels.len() {
        return Err(Error::usage("vector and label lists differ in length"));
    }
    let (k, l) = (c.plus_count(), c.l);
    let totality = signed_totality(c.n, k, l, &c.vectors);
    let threshold = c.s as i64 - 2 * l as i64;
    let (checked, found) = check_classes(&c.vectors, &c.labels, |u, v| product(u, v) < threshold, 2);
    let violation = found.map(|(label, pair)| {
        let (u, v) = (c.vectors[pair[0]], c.vectors[pair[1]]);
        SignedViolation {
            label,
            pair: (u, v),
            product: product(&u, &v),
        }
    });
    Ok(SignedVerifyReport {
        vectors: c.vectors.len(),
        totality,
        colors_used: c.colors_used(),
        checked,
        violation,
    })
}

fn signed_totality(n: usize, k: usize, l: usize, vectors: &[SignedVector]) -> Option<String> {
    if let Some(bad) = vectors
        .iter()
        .find(|v| v.dimension() != n || v.plus.len() != k || v.minus.len() != l)
    {
        return Some(format!("{bad} is not in V_{{{k},{l}}}"));
    }
    let mut seen: HashMap<(u128, u128), ()> = HashMap::with_capacity(vectors.len());
    for v in vectors {
        if seen.insert((v.plus.bits(), v.minus.bits()), ()).is_some() {
            return Some(format!("{v} appears more than once"));
        }
    }
    let expected = binomial_u128(n, k + l).and_then(|a| a.checked_mul(binomial_u128(k + l, l)?));
    match expected {
        Some(e) if e == vectors.len() as u128 => None,
        Some(e) => Some(format!("{} of {e} vectors colored", vectors.len())),
        None => Some("vertex count overflows".into()),
    }
}

/// Budget for [`sample_verify_signed`].
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    /// Random vertices labelled up front; same-label pairs are drawn from
    /// this pool.
    pub pool: usize,
    /// Same-label pairs to test.
    pub pairs: usize,
    /// Constructed adjacent pairs to test for distinct labels.
    pub adversarial: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub pairs_checked: u64,
    pub adjacent_found: u64,
    pub adversarial_checked: u64,
    pub violation: Option<SignedViolation>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Randomized propriety check for dimensions too large to enumerate.
/// Draws same-label pairs from a labelled pool and, separately, builds
/// pairs whose supports barely overlap (the only way to be adjacent) and
/// checks their labels differ.
pub fn sample_verify_signed(colorer: &SignedColorer, cfg: SampleConfig) -> Result<SampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let threshold = colorer.threshold();
    let mut report = SampleReport {
        pairs_checked: 0,
        adjacent_found: 0,
        adversarial_checked: 0,
        violation: None,
    };

    let pool: Vec<SignedVector> = (0..cfg.pool).map(|_| colorer.random_vertex(&mut rng)).collect();
    let labels = pool.iter().map(|v| colorer.label(v)).collect::<Result<Vec<_>>>()?;
    let mut buckets: HashMap<ColorLabel, Vec<usize>> = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        buckets.entry(*l).or_default().push(i);
    }
    if pool.len() >= 2 {
        let mut drawn = 0;
        while drawn < cfg.pairs {
            let i = rng.random_range(0..pool.len());
            let bucket = &buckets[&labels[i]];
            if bucket.len() < 2 {
                continue;
            }
            let j = bucket[rng.random_range(0..bucket.len())];
            if j == i {
                continue;
            }
            drawn += 1;
            report.pairs_checked += 1;
            let p = product(&pool[i], &pool[j]);
            if p < threshold {
                report.adjacent_found += 1;
                report.violation.get_or_insert(SignedViolation {
                    label: labels[i],
                    pair: (pool[i], pool[j]),
                    product: p,
                });
            }
        }
    }

    // u overlaps v in q coordinates, all of opposite sign, so (u, v) = −q
    let (n, l) = (colorer.n, colorer.l);
    let support_size = n / 2 - colorer.t;
    let q_low = (2 * l + 1).saturating_sub(colorer.s);
    let q_high = (2 * l).min(support_size);
    for _ in 0..cfg.adversarial {
        if q_low > q_high {
            break;
        }
        let v = colorer.random_vertex(&mut rng);
        let q = rng.random_range(q_low..=q_high);
        if support_size - q > n - support_size {
            continue;
        }
        let a = rng.random_range(q.saturating_sub(l)..=q.min(l));
        let v_plus: Vec<usize> = v.plus.iter().collect();
        let v_minus: Vec<usize> = v.minus.iter().collect();
        if a > v_plus.len() || q - a > v_minus.len() || l - a > support_size - q {
            continue;
        }
        let flip_minus: Vec<usize> = index::sample(&mut rng, v_plus.len(), a)
            .iter()
            .map(|i| v_plus[i])
            .collect();
        let flip_plus: Vec<usize> = index::sample(&mut rng, v_minus.len(), q - a)
            .iter()
            .map(|i| v_minus[i])
            .collect();
        let outside: Vec<usize> = v.support().complement().iter().collect();
        let fresh: Vec<usize> = index::sample(&mut rng, outside.len(), support_size - q)
            .iter()
            .map(|i| outside[i])
            .collect();
        let extra_minus: Vec<usize> = index::sample(&mut rng, fresh.len(), l - a)
            .iter()
            .map(|i| fresh[i])
            .collect();
        let minus = VertexSet::from_indices(n, flip_minus.iter().chain(&extra_minus).copied())?;
        let all = VertexSet::from_indices(n, flip_minus.iter().chain(&flip_plus).chain(&fresh).copied())?;
        let u = SignedVector {
            plus: VertexSet::from_bits(n, all.bits() & !minus.bits())?,
            minus,
        };
        let p = product(&u, &v);
        if p >= threshold {
            continue;
        }
        report.adjacent_found += 1;
        report.adversarial_checked += 1;
        let (lu, lv) = (colorer.label(&u)?, colorer.label(&v)?);
        if lu == lv {
            report.violation.get_or_insert(SignedViolation {
                label: lu,
                pair: (u, v),
                product: p,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::coloring::{color_kneser, Side};
    use crate::setsys::enumerate_k_subsets;

    fn sv(s: &str) -> SignedVector {
        SignedVector::from_signstring(s).unwrap()
    }

    #[test]
    fn scalar_product_examples() {
        let v = sv("+-0+0");
        assert_eq!(scalar_product(&v, &v).unwrap(), 3);
        assert_eq!(scalar_product(&sv("+-"), &sv("-+")).unwrap(), -2);
        assert!(scalar_product(&sv("+-"), &sv("+-0")).is_err());
        assert!(SignedVector::from_signstring("+x").is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_signed(3, 1, 1).unwrap().len(), 6);
        let plain = enumerate_signed(4, 2, 0).unwrap();
        let subsets: Vec<_> = enumerate_k_subsets(4, 2).unwrap().collect();
        assert_eq!(plain.iter().map(|v| *v.plus()).collect::<Vec<_>>(), subsets);
        let all = enumerate_signed(8, 3, 1).unwrap();
        assert_eq!(all.len(), 280);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 280);
        assert!(enumerate_signed(3, 2, 2).is_err());
        assert!(matches!(enumerate_signed(30, 1, 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn support_intersection_bounds_product() {
        for (k, l) in [(2usize, 1usize), (3, 1), (2, 2), (1, 3)] {
            let vs = enumerate_signed(8, k, l).unwrap();
            for u in &vs {
                for v in &vs {
                    let q = u.support().meet(&v.support()) as i64;
                    let p = scalar_product(u, v).unwrap();
                    assert!(q - 4 * l as i64 <= p && p <= q, "{u} {v}");
                }
            }
        }
    }

    #[test]
    fn l0_matches_plain_coloring() {
        let h = catalog::hadamard(4).unwrap();
        let signed = color_signed(8, 0, 0, 1, &h).unwrap();
        let plain = color_kneser(KneserParams::graph(8, 0, 1).unwrap(), &h).unwrap();
        assert_eq!(signed.labels, plain.labels);
        assert_eq!(
            signed.vectors.iter().map(|v| *v.plus()).collect::<Vec<_>>(),
            plain.vertices
        );
    }

    #[test]
    fn exhaustive_n12_with_fano() {
        // Fano has discrepancy 3 = 2l + s for l = 1, s = 1
        let c = color_signed(12, 1, 0, 1, &catalog::fano()).unwrap();
        assert_eq!(c.vectors.len(), 924 * 6);
        assert!(c.colors_used() <= 14);
        let rep = verify_signed(&c).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn labels_factor_through_support() {
        let colorer = SignedColorer::new(12, 1, 0, 1, &catalog::fano()).unwrap();
        let c = colorer.color_all(&Limits::default()).unwrap();
        let mut by_support: HashMap<u128, ColorLabel> = HashMap::new();
        for (v, l) in c.vectors.iter().zip(&c.labels) {
            assert_eq!(*by_support.entry(v.support().bits()).or_insert(*l), *l);
        }
    }

    #[test]
    fn single_color_v11_fails() {
        let vectors = enumerate_signed(4, 1, 1).unwrap();
        let c = SignedColoring {
            n: 4,
            l: 1,
            t: 0,
            s: 1,
            labels: vec![ColorLabel::new(0, Side::One); vectors.len()],
            vectors,
        };
        let rep = verify_signed(&c).unwrap();
        let v = rep.violation.unwrap();
        assert!(v.product < -1);
    }

    #[test]
    fn text_round_trip() {
        let c = color_signed(12, 1, 0, 1, &catalog::fano()).unwrap();
        let back = SignedColoring::parse(&c.serialize()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn sampled_check_on_small_instance() {
        let colorer = SignedColorer::new(12, 1, 0, 1, &catalog::fano()).unwrap();
        let rep = sample_verify_signed(
            &colorer,
            SampleConfig {
                pool: 500,
                pairs: 5000,
                adversarial: 2000,
                seed: 3,
            },
        )
        .unwrap();
        assert!(rep.passed());
        assert!(rep.adversarial_checked > 100);
    }

    #[test]
    fn sampled_check_catches_a_bad_hypergraph() {
        // a single small edge cannot certify the signed coloring
        let h = Hypergraph::from_edge_lists(12, &[&(0..12).collect::<Vec<_>>()]).unwrap();
        let colorer = SignedColorer::new(12, 1, 0, 1, &h).unwrap();
        let result = sample_verify_signed(
            &colorer,
            SampleConfig {
                pool: 200,
                pairs: 1000,
                adversarial: 1000,
                seed: 1,
            },
        );
        assert!(result.is_err() || !result.unwrap().passed());
    }
}
