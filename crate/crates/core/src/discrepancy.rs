//! Plain, t-shifted and w-shifted r-centered discrepancy of a hypergraph.
//!
//! Every mode scores an edge `e` under a 2-coloring as
//! `|(r−1)·blue(e) − red(e) + w|`; plain is `r = 2, w = 0` and t-shifted is
//! `r = 2, w = t`. The shift may be a half-integer, so scores are carried
//! doubled as integers ([`HalfInt`]) and never touch floating point.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::setsys::{Hypergraph, Limits, TwoColoring, VertexSet};

/// An exact multiple of 1/2, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(x: i64) -> Self {
        HalfInt(2 * x)
    }

    pub fn from_doubled(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `self ≥ √x / 2`, decided exactly by squaring.
    pub fn at_least_half_sqrt(self, x: u64) -> bool {
        self.0 >= 0 && (self.0 as i128) * (self.0 as i128) >= x as i128
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            let sign = if self.0 < 0 { "-" } else { "" };
            write!(f, "{sign}{}.5", self.0.abs() / 2)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `7`, `-3`, `3.5`, `7/2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::usage(format!("{s:?} is not an integer or half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            };
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let neg = whole.trim_start().starts_with('-');
            let w: i64 = whole.parse().map_err(|_| bad())?;
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            return Ok(HalfInt(2 * w + if neg { -half } else { half }));
        }
        Ok(HalfInt(2 * s.trim().parse::<i64>().map_err(|_| bad())?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `|blue(e) − red(e)|`
    Plain,
    /// `|blue(e) − red(e) + t|`
    Shifted(i64),
    /// `|(r−1)·blue(e) − red(e) + w|`
    Centered { r: u32, w: HalfInt },
}

impl Mode {
    fn kernel(self) -> Result<Kernel> {
        let (coef, w2) = match self {
            Mode::Plain => (1, 0),
            Mode::Shifted(t) => (1, 2 * t),
            Mode::Centered { r, w } => {
                if r < 2 {
                    return Err(Error::usage(format!("centered mode needs r ≥ 2, got {r}")));
                }
                (r as i64 - 1, w.doubled())
            }
        };
        Ok(Kernel { coef, w2 })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Plain => f.write_str("plain"),
            Mode::Shifted(t) => write!(f, "shifted:{t}"),
            Mode::Centered { r, w } => write!(f, "centered:{r}:{w}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// `plain`, `shifted:<t>`, or `centered:<r>:<w>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::usage(format!("bad mode {s:?}; expected plain | shifted:t | centered:r:w"));
        match parts.as_slice() {
            ["plain"] => Ok(Mode::Plain),
            ["shifted", t] => Ok(Mode::Shifted(t.parse().map_err(|_| bad())?)),
            ["centered", r, w] => {
                let r: u32 = r.parse().map_err(|_| bad())?;
                if r < 2 {
                    return Err(Error::usage("centered mode needs r ≥ 2"));
                }
                Ok(Mode::Centered { r, w: w.parse()? })
            }
            _ => Err(bad()),
        }
    }
}

// Doubled edge score: |2·(coef·b − (|e| − b)) + w2| = |2(coef+1)·b − 2|e| + w2|.
#[derive(Debug, Clone, Copy)]
struct Kernel {
    coef: i64,
    w2: i64,
}

impl Kernel {
    #[inline]
    fn score(&self, blue: i64, size: i64) -> i64 {
        (2 * (self.coef + 1) * blue - 2 * size + self.w2).abs()
    }
}

/// Minimum over colorings, with one coloring attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyResult {
    pub value: HalfInt,
    pub witness: TwoColoring,
    pub mode: Mode,
}

impl DiscrepancyResult {
    /// Witness as an n-character 0/1 string (1 = blue).
    pub fn witness_bitstring(&self) -> String {
        self.witness.blue().to_bitstring()
    }
}

impl fmt::Display for DiscrepancyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "value={} witness={}", self.value, self.witness_bitstring())
    }
}

/// Max over edges of the mode's per-edge quantity (0 for no edges).
pub fn coloring_score(h: &Hypergraph, c: &TwoColoring, mode: Mode) -> Result<HalfInt> {
    if c.universe_size() != h.universe_size() {
        return Err(Error::usage(format!(
            "coloring universe {} differs from hypergraph universe {}",
            c.universe_size(),
            h.universe_size()
        )));
    }
    let k = mode.kernel()?;
    let worst = h
        .edges()
        .iter()
        .map(|e| {
            let (b, _) = c.split(e);
            k.score(b as i64, e.len() as i64)
        })
        .max()
        .unwrap_or(0);
    Ok(HalfInt(worst))
}

/// Exhaustive minimum over all `2^|V|` colorings under the default guard.
pub fn exact_discrepancy(h: &Hypergraph, mode: Mode) -> Result<DiscrepancyResult> {
    exact_discrepancy_with(h, mode, &Limits::default())
}

/// Gray-code sweep: consecutive colorings differ in one vertex, so only
/// the edges through that vertex change their blue counts. The coloring
/// space is split on the top bits for parallel workers; the reduction
/// keeps the smallest `(score, blue mask)` so the witness is the least
/// optimal blue set in bitmask order regardless of scheduling.
pub fn exact_discrepancy_with(h: &Hypergraph, mode: Mode, limits: &Limits) -> Result<DiscrepancyResult> {
    let kernel = mode.kernel()?;
    let nv = h.universe_size();
    let limit = limits.exhaustive.min(63);
    if nv > limit {
        return Err(Error::Capacity {
            what: "exhaustive discrepancy over |V|",
            requested: nv,
            limit,
            hint: "; use heuristic_discrepancy instead",
        });
    }
    let sizes: Vec<i64> = h.edges().iter().map(|e| e.len() as i64).collect();
    let masks: Vec<u64> = h.edges().iter().map(|e| e.bits() as u64).collect();
    let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); nv];
    for (j, e) in h.edges().iter().enumerate() {
        for v in e.iter() {
            incidence[v].push(j as u32);
        }
    }

    let hi = nv.saturating_sub(12).min(16);
    let low = nv - hi;
    let (score, mask) = (0u64..1 << hi)
        .into_par_iter()
        .map(|prefix| {
            let mut blue: u64 = prefix << low;
            let mut counts: Vec<i64> = masks.iter().map(|&m| (m & blue).count_ones() as i64).collect();
            let eval = |counts: &[i64], cap: i64| -> i64 {
                let mut worst = 0;
                for (&b, &sz) in counts.iter().zip(&sizes) {
                    worst = worst.max(kernel.score(b, sz));
                    if worst > cap {
                        break;
                    }
                }
                worst
            };
            let mut best = (eval(&counts, i64::MAX), blue);
            for step in 1u64..1 << low {
                let v = step.trailing_zeros() as usize;
                let bit = 1u64 << v;
                let delta = if blue & bit == 0 { 1 } else { -1 };
                blue ^= bit;
                for &j in &incidence[v] {
                    counts[j as usize] += delta;
                }
                let s = eval(&counts, best.0);
                if (s, blue) < best {
                    best = (s, blue);
                }
            }
            best
        })
        .min()
        .expect("at least one chunk");

    Ok(DiscrepancyResult {
        value: HalfInt(score),
        witness: TwoColoring::from_bits(nv, mask as u128)?,
        mode,
    })
}

/// Search budget for [`heuristic_discrepancy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicConfig {
    pub seed: u64,
    pub restarts: usize,
    pub steps: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            seed: 0,
            restarts: 64,
            steps: 512,
        }
    }
}

/// Random-restart single-flip local search. Upper-bounds the exact value;
/// deterministic for a fixed config (each restart owns a seeded stream).
pub fn heuristic_discrepancy(h: &Hypergraph, mode: Mode, cfg: HeuristicConfig) -> Result<DiscrepancyResult> {
    let kernel = mode.kernel()?;
    let nv = h.universe_size();
    if h.num_edges() == 0 {
        return Ok(DiscrepancyResult {
            value: HalfInt::ZERO,
            witness: TwoColoring::new(VertexSet::empty(nv)?),
            mode,
        });
    }
    let sizes: Vec<i64> = h.edges().iter().map(|e| e.len() as i64).collect();
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (j, e) in h.edges().iter().enumerate() {
        for v in e.iter() {
            incidence[v].push(j);
        }
    }
    let search = LocalSearch {
        h,
        kernel,
        sizes: &sizes,
        incidence: &incidence,
        steps: cfg.steps,
    };
    let (score, mask) = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let seed = cfg.seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            search.run(&mut ChaCha8Rng::seed_from_u64(seed))
        })
        .min()
        .expect("at least one restart");
    Ok(DiscrepancyResult {
        value: HalfInt(score),
        witness: TwoColoring::from_bits(nv, mask)?,
        mode,
    })
}

struct LocalSearch<'a> {
    h: &'a Hypergraph,
    kernel: Kernel,
    sizes: &'a [i64],
    incidence: &'a [Vec<usize>],
    steps: usize,
}

impl LocalSearch<'_> {
    // (max edge score, number of edges at the max)
    fn objective(&self, counts: &[i64]) -> (i64, usize) {
        let mut worst = 0;
        let mut at = 0;
        for (&b, &sz) in counts.iter().zip(self.sizes) {
            let s = self.kernel.score(b, sz);
            if s > worst {
                worst = s;
                at = 1;
            } else if s == worst {
                at += 1;
            }
        }
        (worst, at)
    }

    fn run(&self, rng: &mut ChaCha8Rng) -> (i64, u128) {
        let nv = self.h.universe_size();
        let mut blue: u128 = 0;
        for v in 0..nv {
            if rng.random_bool(0.5) {
                blue |= 1 << v;
            }
        }
        let mut counts: Vec<i64> = self
            .h
            .edges()
            .iter()
            .map(|e| (e.bits() & blue).count_ones() as i64)
            .collect();
        let mut current = self.objective(&counts);
        let mut best = (current.0, blue);
        let mut last_flip = usize::MAX;
        let mut candidates = Vec::with_capacity(nv);

        for _ in 0..self.steps {
            if best.0 == 0 {
                break;
            }
            candidates.clear();
            let mut best_obj = (i64::MAX, usize::MAX);
            for v in 0..nv {
                if v == last_flip {
                    continue;
                }
                let delta = if blue >> v & 1 == 0 { 1 } else { -1 };
                for &j in &self.incidence[v] {
                    counts[j] += delta;
                }
                let obj = self.objective(&counts);
                for &j in &self.incidence[v] {
                    counts[j] -= delta;
                }
                if obj < best_obj {
                    best_obj = obj;
                    candidates.clear();
                }
                if obj == best_obj {
                    candidates.push(v);
                }
            }
            if candidates.is_empty() || best_obj > current {
                break;
            }
            let v = candidates[rng.random_range(0..candidates.len())];
            let delta = if blue >> v & 1 == 0 { 1 } else { -1 };
            blue ^= 1 << v;
            for &j in &self.incidence[v] {
                counts[j] += delta;
            }
            current = best_obj;
            last_flip = v;
            if (current.0, blue) < best {
                best = (current.0, blue);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn coloring(n: usize, blue: &[usize]) -> TwoColoring {
        TwoColoring::new(VertexSet::from_indices(n, blue.iter().copied()).unwrap())
    }

    #[test]
    fn half_int_text() {
        assert_eq!("3".parse::<HalfInt>().unwrap(), HalfInt::from_int(3));
        assert_eq!("3.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(7));
        assert_eq!("7/2".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(7));
        assert_eq!("-1.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(-3));
        assert_eq!("-0.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(-1));
        assert!("0.25".parse::<HalfInt>().is_err());
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_doubled(7).to_string(), "3.5");
        assert_eq!(HalfInt::from_doubled(-1).to_string(), "-0.5");
        assert_eq!(HalfInt::from_doubled(-4).to_string(), "-2");
    }

    #[test]
    fn half_sqrt_comparison_is_exact() {
        // √15 / 2 ≈ 1.936: 2 clears it, 1.5 does not
        assert!(HalfInt::from_int(2).at_least_half_sqrt(15));
        assert!(!HalfInt::from_doubled(3).at_least_half_sqrt(15));
        // boundary: 1.5 = √9 / 2
        assert!(HalfInt::from_doubled(3).at_least_half_sqrt(9));
        assert!(!HalfInt::from_doubled(-4).at_least_half_sqrt(1));
    }

    #[test]
    fn mode_text() {
        for m in [
            Mode::Plain,
            Mode::Shifted(-2),
            Mode::Centered {
                r: 3,
                w: HalfInt::from_doubled(3),
            },
        ] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("centered:1:0".parse::<Mode>().is_err());
        assert!("shifted".parse::<Mode>().is_err());
    }

    #[test]
    fn score_examples() {
        let tri = catalog::triangle();
        assert_eq!(
            coloring_score(&tri, &coloring(3, &[0, 1, 2]), Mode::Plain).unwrap(),
            HalfInt::from_int(2)
        );
        let edge = Hypergraph::from_edge_lists(2, &[&[0, 1]]).unwrap();
        assert_eq!(
            coloring_score(&edge, &coloring(2, &[0]), Mode::Shifted(1)).unwrap(),
            HalfInt::from_int(1)
        );
        let half = Mode::Centered {
            r: 3,
            w: HalfInt::from_doubled(3),
        };
        // 2·1 − 1 + 1.5
        assert_eq!(
            coloring_score(&edge, &coloring(2, &[0]), half).unwrap(),
            HalfInt::from_doubled(5)
        );
    }

    #[test]
    fn score_errors() {
        let tri = catalog::triangle();
        assert!(matches!(
            coloring_score(&tri, &coloring(4, &[0]), Mode::Plain),
            Err(Error::Usage(_))
        ));
        let bad = Mode::Centered { r: 1, w: HalfInt::ZERO };
        assert!(coloring_score(&tri, &coloring(3, &[0]), bad).is_err());
    }

    #[test]
    fn exact_examples() {
        let tri = exact_discrepancy(&catalog::triangle(), Mode::Plain).unwrap();
        assert_eq!(tri.value, HalfInt::from_int(2));
        // least optimal blue set: every coloring is optimal, so the empty one
        assert_eq!(tri.witness_bitstring(), "000");

        let fano = exact_discrepancy(&catalog::fano(), Mode::Plain).unwrap();
        assert_eq!(fano.value, HalfInt::from_int(3));

        for k in 1..=5 {
            let all: Vec<usize> = (0..2 * k).collect();
            let single = Hypergraph::from_edge_lists(2 * k, &[&all]).unwrap();
            assert_eq!(exact_discrepancy(&single, Mode::Plain).unwrap().value, HalfInt::ZERO);
        }
    }

    #[test]
    fn exact_witness_reproduces_value() {
        for (name, h) in catalog::small_catalogue() {
            for mode in [Mode::Plain, Mode::Shifted(1), Mode::Shifted(-2)] {
                let r = exact_discrepancy(&h, mode).unwrap();
                assert_eq!(coloring_score(&h, &r.witness, mode).unwrap(), r.value, "{name} {mode}");
            }
        }
    }

    // Brute force without Gray code or chunking.
    fn naive(h: &Hypergraph, mode: Mode) -> (HalfInt, u128) {
        let n = h.universe_size();
        (0u128..1 << n)
            .map(|b| {
                let c = TwoColoring::from_bits(n, b).unwrap();
                (coloring_score(h, &c, mode).unwrap(), b)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn exact_matches_naive_including_chunked_sweeps() {
        // 14 vertices forces two top-bit chunks
        let h = catalog::hadamard(16)
            .unwrap()
            .edges()
            .iter()
            .map(|e| VertexSet::from_bits(14, e.bits() & 0x3fff).unwrap())
            .filter(|e| !e.is_empty())
            .collect::<Vec<_>>();
        let h = Hypergraph::new(14, h).unwrap();
        for mode in [Mode::Plain, Mode::Shifted(3)] {
            let r = exact_discrepancy(&h, mode).unwrap();
            let (v, b) = naive(&h, mode);
            assert_eq!((r.value, r.witness.blue().bits()), (v, b), "{mode}");
        }
    }

    #[test]
    fn exact_guard() {
        let big = Hypergraph::from_edge_lists(31, &[&[0, 30]]).unwrap();
        assert!(matches!(
            exact_discrepancy(&big, Mode::Plain),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn empty_edge_list() {
        let h = Hypergraph::new(4, vec![]).unwrap();
        assert_eq!(exact_discrepancy(&h, Mode::Plain).unwrap().value, HalfInt::ZERO);
        let r = heuristic_discrepancy(&h, Mode::Plain, HeuristicConfig::default()).unwrap();
        assert_eq!(r.value, HalfInt::ZERO);
    }

    #[test]
    fn heuristic_reaches_optimum_on_catalogue() {
        for (name, h) in catalog::small_catalogue() {
            for mode in [Mode::Plain, Mode::Shifted(1), Mode::Shifted(2)] {
                let exact = exact_discrepancy(&h, mode).unwrap();
                let heur = heuristic_discrepancy(&h, mode, HeuristicConfig::default()).unwrap();
                assert_eq!(coloring_score(&h, &heur.witness, mode).unwrap(), heur.value);
                assert_eq!(heur.value, exact.value, "{name} {mode}");
            }
        }
    }

    #[test]
    fn heuristic_is_deterministic() {
        let h = catalog::hadamard(16).unwrap();
        let cfg = HeuristicConfig {
            seed: 7,
            restarts: 8,
            steps: 64,
        };
        let a = heuristic_discrepancy(&h, Mode::Plain, cfg).unwrap();
        let b = heuristic_discrepancy(&h, Mode::Plain, cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.value.at_least_half_sqrt(15));
    }

    #[test]
    fn adding_an_edge_never_lowers_discrepancy() {
        let fano = catalog::fano();
        let base = exact_discrepancy(&fano, Mode::Plain).unwrap().value;
        let extra = VertexSet::from_indices(7, [0, 6]).unwrap();
        let more = exact_discrepancy(&fano.with_edge(extra).unwrap(), Mode::Plain)
            .unwrap()
            .value;
        assert!(more >= base);
    }

    proptest! {
        #[test]
        fn mode_reductions(
            n in 1usize..=20,
            raw_edges in proptest::collection::vec(any::<u128>(), 1..8),
            blue in any::<u128>(),
            t in -5i64..=5,
        ) {
            let mask = (1u128 << n) - 1;
            let edges: Vec<_> = raw_edges.into_iter().map(|b| b & mask).filter(|&b| b != 0)
                .map(|b| VertexSet::from_bits(n, b).unwrap()).collect();
            let h = Hypergraph::new(n, edges).unwrap();
            let c = TwoColoring::from_bits(n, blue & mask).unwrap();
            let plain = coloring_score(&h, &c, Mode::Plain).unwrap();
            prop_assert_eq!(coloring_score(&h, &c, Mode::Shifted(0)).unwrap(), plain);
            prop_assert_eq!(
                coloring_score(&h, &c, Mode::Centered { r: 2, w: HalfInt::ZERO }).unwrap(),
                plain
            );
            prop_assert_eq!(
                coloring_score(&h, &c, Mode::Centered { r: 2, w: HalfInt::from_int(t) }).unwrap(),
                coloring_score(&h, &c, Mode::Shifted(t)).unwrap()
            );
            for e in h.edges() {
                let (b, r) = c.split(e);
                let q = (b as i64 - r as i64 + t).abs();
                prop_assert_eq!(q.rem_euclid(2), (e.len() as i64 + t).rem_euclid(2));
            }
        }
    }
}
