//! Acceptance criteria, one PASS/FAIL line each. Independent oracles in
//! this file re-derive every checked quantity by brute force.

use std::collections::{HashMap, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kneserdisc_core::bounds::{f_lower, frankl_set_size, ratio_lower, spencer_upper};
use kneserdisc_core::coloring::{color_kneser, color_kneser_hypergraph, extract_hypergraph, frankl_set, verify_proper};
use kneserdisc_core::discrepancy::{coloring_score, exact_discrepancy, heuristic_discrepancy};
use kneserdisc_core::geometry::{enumerate_signed, sample_verify_signed, SampleConfig, SignedColorer};
use kneserdisc_core::{
    catalog, Coloring, HalfInt, HeuristicConfig, Hypergraph, KneserParams, Mode, TwoColoring, VertexSet,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let criteria: &[Criterion] = &[
        ("1 triangle K(12,6,2) <= 6 colors", triangle),
        ("2 fano disc = 3, K(14,7,3) <= 14 colors", fano),
        ("3 hadamard shifted disc >= sqrt(m-1)/2", hadamard_certificate),
        ("4 K(20,10,1) from m=8 <= 16 colors", end_to_end),
        ("5 extraction round-trip disc >= 2", extraction),
        ("6 KH(12,3,4,1) from m=4 <= 8 colors", hyper),
        ("7 signed n=64 l=1 s=1 m=64 sampled", signed),
        ("8 bounds arithmetic", bounds),
        ("9 discrepancy properties", properties),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome =
            panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(&p))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn masks(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Same-label pairs must meet in at least `s` points; returns pairs checked.
fn oracle_graph(c: &Coloring, s: usize) -> Result<u64, String> {
    let mut checked = 0;
    for i in 0..c.vertices.len() {
        for j in i + 1..c.vertices.len() {
            if c.labels[i] == c.labels[j] {
                checked += 1;
                let meet = (c.vertices[i].bits() & c.vertices[j].bits()).count_ones() as usize;
                ensure!(
                    meet >= s,
                    "{} and {} share {} but meet in {meet}",
                    c.vertices[i],
                    c.vertices[j],
                    c.labels[i]
                );
            }
        }
    }
    Ok(checked)
}

fn distinct_labels(c: &Coloring) -> usize {
    c.labels.iter().collect::<HashSet<_>>().len()
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kneserdisc"))
        .args(args)
        .output()
        .map_err(e)?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn triangle_file() -> Result<(tempfile::TempDir, String), String> {
    let dir = tempfile::tempdir().map_err(e)?;
    let path = dir.path().join("triangle.col").to_string_lossy().into_owned();
    let (code, _) = run_cli(&[
        "color",
        "graph",
        "--n",
        "12",
        "--s",
        "2",
        "--hypergraph",
        "catalog:triangle",
        "--out",
        &path,
    ])?;
    ensure!(code == 0, "color exited {code}");
    Ok((dir, path))
}

fn triangle() -> Outcome {
    let (_dir, path) = triangle_file()?;
    let (code, report) = run_cli(&["verify", &path])?;
    ensure!(code == 0, "verify exited {code}: {report}");
    let c = Coloring::parse(&std::fs::read_to_string(&path).map_err(e)?).map_err(e)?;
    let all: HashSet<u128> = c.vertices.iter().map(|v| v.bits()).collect();
    ensure!(
        all.len() == 924 && masks(12, 6).iter().all(|&m| all.contains(&(m as u128))),
        "coloring is not total"
    );
    let colors = distinct_labels(&c);
    ensure!(colors <= 6, "{colors} colors");
    let pairs = oracle_graph(&c, 2)?;
    Ok(format!(
        "vertices=924 colors={colors} same_label_pairs={pairs} verify=\"{}\"",
        report.trim()
    ))
}

fn fano() -> Outcome {
    let h = catalog::fano();
    let disc = exact_discrepancy(&h, Mode::Plain).map_err(e)?.value;
    // brute force over the 2^7 colorings
    let lines: Vec<u32> = h.edges().iter().map(|x| x.bits() as u32).collect();
    let brute = (0u32..128)
        .map(|blue| {
            lines
                .iter()
                .map(|&l| (2 * (blue & l).count_ones() as i64 - l.count_ones() as i64).abs())
                .max()
                .unwrap()
        })
        .min()
        .unwrap();
    ensure!(disc == HalfInt::from_int(3) && brute == 3, "disc={disc} brute={brute}");
    let c = color_kneser(KneserParams::graph(14, 0, 3).map_err(e)?, &h).map_err(e)?;
    ensure!(c.vertices.len() == 3432, "{} vertices", c.vertices.len());
    let colors = distinct_labels(&c);
    ensure!(colors <= 14, "{colors} colors");
    let report = verify_proper(&c).map_err(e)?;
    ensure!(report.passed(), "{report}");
    let pairs = oracle_graph(&c, 3)?;
    Ok(format!("disc=3 vertices=3432 colors={colors} same_label_pairs={pairs}"))
}

/// `min over colorings of max over edges |b − r + t|`, by plain loops.
fn brute_shifted(h: &Hypergraph, t: i64) -> i64 {
    let edges: Vec<u32> = h.edges().iter().map(|x| x.bits() as u32).collect();
    (0u32..1 << h.universe_size())
        .map(|blue| {
            edges
                .iter()
                .map(|&x| (2 * (blue & x).count_ones() as i64 - x.count_ones() as i64 + t).abs())
                .max()
                .unwrap()
        })
        .min()
        .unwrap()
}

fn hadamard_certificate() -> Outcome {
    let mut seen = Vec::new();
    for m in [4usize, 8, 12, 16] {
        let h = catalog::hadamard(m).map_err(e)?;
        for t in 0..=m / 4 {
            let v = exact_discrepancy(&h, Mode::Shifted(t as i64)).map_err(e)?.value;
            ensure!(v.is_integer(), "m={m} t={t}: non-integer {v}");
            let brute = brute_shifted(&h, t as i64);
            ensure!(v.doubled() == 2 * brute, "m={m} t={t}: exact {v} vs brute {brute}");
            // v ≥ √(m−1)/2  ⇔  4v² ≥ m − 1
            ensure!(
                4 * brute * brute >= m as i64 - 1,
                "m={m} t={t}: disc {brute} below sqrt(m-1)/2"
            );
            ensure!(
                v.at_least_half_sqrt(m as u64 - 1),
                "library comparison disagrees at m={m} t={t}"
            );
            seen.push(format!("{m}/{t}:{brute}"));
        }
    }
    Ok(format!("m/t:disc {}", seen.join(" ")))
}

fn end_to_end() -> Outcome {
    let h = catalog::hadamard(8).map_err(e)?;
    let c = color_kneser(KneserParams::graph(20, 0, 1).map_err(e)?, &h).map_err(e)?;
    ensure!(c.vertices.len() == 184_756, "{} vertices", c.vertices.len());
    let colors = distinct_labels(&c);
    ensure!(colors <= 16, "{colors} colors");
    let report = verify_proper(&c).map_err(e)?;
    ensure!(report.passed(), "{report}");
    let full = (1u128 << 20) - 1;
    let label: HashMap<u128, _> = c
        .vertices
        .iter()
        .map(|v| v.bits())
        .zip(c.labels.iter().copied())
        .collect();
    for (v, l) in &label {
        ensure!(label[&(full ^ v)] != *l, "{v:#x} and its complement share {l}");
    }
    Ok(format!(
        "vertices=184756 colors={colors} complementary_pairs={}",
        label.len() / 2
    ))
}

fn extraction() -> Outcome {
    let (_dir, path) = triangle_file()?;
    let mut c = Coloring::parse(&std::fs::read_to_string(&path).map_err(e)?).map_err(e)?;
    c.hypergraph = Some(catalog::triangle().embed(12, None).map_err(e)?);
    let family = c.generators().map_err(e)?;
    // every vertex lies in the Frankl set of its generator
    for (v, l) in c.vertices.iter().zip(&c.labels) {
        let a = family[c.classes().keys().position(|k| k == l).unwrap()];
        let meet = (v.bits() & a.bits()).count_ones() as usize;
        ensure!(2 * meet >= a.len() + 2, "{v} not in I_{a}");
    }
    let (x, _) = extract_hypergraph(&family).map_err(e)?;
    let disc = exact_discrepancy(&x, Mode::Plain).map_err(e)?.value;
    let brute = brute_shifted(&x, 0);
    ensure!(disc.doubled() == 2 * brute && brute >= 2, "disc={disc} brute={brute}");
    let colors = c.colors_used() as u64;
    ensure!(colors >= f_lower(2), "{colors} colors below f_lower(2)");
    Ok(format!(
        "family={} vertices={} disc={brute} colors={colors} f_lower={}",
        family.len(),
        x.universe_size(),
        f_lower(2)
    ))
}

fn hyper() -> Outcome {
    let h = catalog::hadamard(4).map_err(e)?;
    let c = color_kneser_hypergraph(KneserParams::hyper(12, 3, 0, 1).map_err(e)?, &h).map_err(e)?;
    ensure!(c.vertices.len() == 495, "{} vertices", c.vertices.len());
    let colors = distinct_labels(&c);
    ensure!(colors <= 8, "{colors} colors");
    let report = verify_proper(&c).map_err(e)?;
    ensure!(report.passed(), "{report}");
    // every partition of [12] into three 4-sets is a hyperedge
    let label: HashMap<u32, _> = c
        .vertices
        .iter()
        .map(|v| v.bits() as u32)
        .zip(c.labels.iter().copied())
        .collect();
    let mut triples = 0;
    for a in masks(12, 4).into_iter().filter(|a| a & 1 == 1) {
        let rest = 0xfff & !a;
        for b in masks(12, 4)
            .into_iter()
            .filter(|b| b & rest == *b && b.trailing_zeros() == rest.trailing_zeros())
        {
            let d = rest & !b;
            triples += 1;
            ensure!(
                !(label[&a] == label[&b] && label[&b] == label[&d]),
                "{a:#x} {b:#x} {d:#x} share {}",
                label[&a]
            );
        }
    }
    ensure!(triples == 5775, "{triples} partitions");
    Ok(format!("vertices=495 colors={colors} disjoint_triples={triples}"))
}

fn signed() -> Outcome {
    let h = catalog::hadamard(64).map_err(e)?;
    let colorer = SignedColorer::new(64, 1, 0, 1, &h).map_err(e)?;
    let report = sample_verify_signed(
        &colorer,
        SampleConfig {
            pool: 4096,
            pairs: 1_000_000,
            adversarial: 100_000,
            seed: 7,
        },
    )
    .map_err(e)?;
    ensure!(report.pairs_checked == 1_000_000, "{} pairs", report.pairs_checked);
    ensure!(report.passed(), "violation {:?}", report.violation);

    // (u, v) ≥ q − 4l for every pair in V_{k,l} at n = 8
    let n = 8;
    let mut pairs = 0u64;
    for l in 0..=2usize {
        for k in 0..=n - l {
            let vs = enumerate_signed(n, k, l).map_err(e)?;
            ensure!(
                vs.len() as u128 == binom(8, (k + l) as u64) * binom((k + l) as u64, l as u64),
                "count at k={k} l={l}"
            );
            let signs: Vec<[i64; 8]> = vs
                .iter()
                .map(|v| {
                    let s = v.to_string();
                    let mut out = [0; 8];
                    for (i, ch) in s.chars().enumerate() {
                        out[i] = match ch {
                            '+' => 1,
                            '-' => -1,
                            _ => 0,
                        };
                    }
                    out
                })
                .collect();
            for x in &signs {
                for y in &signs {
                    let dot: i64 = (0..n).map(|i| x[i] * y[i]).sum();
                    let q = (0..n).filter(|&i| x[i] != 0 && y[i] != 0).count() as i64;
                    ensure!(dot >= q - 4 * l as i64, "{x:?} {y:?} product {dot} < {q} - 4l");
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!(
        "same_label_pairs={} adversarial_adjacent={} n8_pairs={pairs}",
        report.pairs_checked, report.adversarial_checked
    ))
}

fn bounds() -> Outcome {
    let r = ratio_lower(18, 2).map_err(e)?;
    let (num, den) = (binom(18, 9), binom(18, 6));
    ensure!(num == 48620 && den == 18564, "oracle binomials {num}/{den}");
    ensure!(
        r.value.numer() * BigInt::from(18564) == r.value.denom() * BigInt::from(48620),
        "ratio_lower(18,2) = {}",
        r.value
    );
    ensure!(f_lower(24) == 4, "f_lower(24) = {}", f_lower(24));
    ensure!(
        spencer_upper(144) == 144.0,
        "spencer_upper(144) = {}",
        spencer_upper(144)
    );
    let mut cases = 0;
    for n in 0..=12usize {
        let subsets: Vec<u32> = (0u32..1 << n).collect();
        for k in 0..=n {
            for a in 0..=n {
                let am: u32 = (1 << a) - 1;
                let aset = VertexSet::from_indices(n.max(1), 0..a).map_err(e)?;
                for s in 0..=a {
                    let formula = frankl_set_size(n as u64, k as u64, s as u64, a as u64).map_err(e)?;
                    let brute = subsets
                        .iter()
                        .filter(|v| v.count_ones() as usize == k && 2 * (*v & am).count_ones() as usize >= a + s)
                        .count();
                    ensure!(formula == brute.into(), "n={n} k={k} s={s} a={a}: {formula} vs {brute}");
                    if n >= 1 {
                        let listed = frankl_set(n, k, s, &aset).map_err(e)?.len();
                        ensure!(
                            listed == brute,
                            "n={n} k={k} s={s} a={a}: enumeration {listed} vs {brute}"
                        );
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!(
        "ratio_lower={} f_lower(24)=4 spencer_upper(144)=144 frankl_cases={cases}",
        r.value
    ))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let n = rng.random_range(1..=12usize);
        let edges: Vec<VertexSet> = (0..rng.random_range(1..=8))
            .map(|_| VertexSet::from_bits(n, rng.random_range(1u128..1 << n)).unwrap())
            .collect();
        let h = Hypergraph::new(n, edges).map_err(e)?;
        let c = TwoColoring::from_bits(n, rng.random_range(0u128..1 << n)).map_err(e)?;
        let t = rng.random_range(-3i64..=3);
        let plain = coloring_score(&h, &c, Mode::Plain).map_err(e)?;
        let shifted0 = coloring_score(&h, &c, Mode::Shifted(0)).map_err(e)?;
        let shifted = coloring_score(&h, &c, Mode::Shifted(t)).map_err(e)?;
        let centered = coloring_score(
            &h,
            &c,
            Mode::Centered {
                r: 2,
                w: HalfInt::from_int(t),
            },
        )
        .map_err(e)?;
        let direct = h
            .edges()
            .iter()
            .map(|x| {
                let b = (x.bits() & c.blue().bits()).count_ones() as i64;
                (2 * b - x.len() as i64 + t).abs()
            })
            .max()
            .unwrap();
        ensure!(
            plain == shifted0,
            "trial {trial}: plain {plain} vs shifted:0 {shifted0}"
        );
        ensure!(
            shifted == centered,
            "trial {trial}: shifted {shifted} vs centered {centered}"
        );
        ensure!(
            shifted.doubled() == 2 * direct,
            "trial {trial}: shifted {shifted} vs direct {direct}"
        );
    }

    let catalogue = catalog::small_catalogue();
    let mut compared = 0;
    for (name, h) in &catalogue {
        for t in 0..=2i64 {
            let mode = Mode::Shifted(t);
            let exact = exact_discrepancy(h, mode).map_err(e)?;
            let heur = heuristic_discrepancy(h, mode, HeuristicConfig::default()).map_err(e)?;
            ensure!(
                exact.value.doubled() == 2 * brute_shifted(h, t),
                "{name} t={t}: exact disagrees with brute force"
            );
            ensure!(
                heur.value == exact.value,
                "{name} t={t}: heuristic {} vs exact {}",
                heur.value,
                exact.value
            );
            let replay = coloring_score(h, &heur.witness, mode).map_err(e)?;
            ensure!(replay == heur.value, "{name} t={t}: heuristic witness scores {replay}");
            compared += 1;

            // per-edge parity and the parity floor of the optimum
            let mut floor = 0;
            for x in h.edges() {
                let single = Hypergraph::new(h.universe_size(), vec![*x]).map_err(e)?;
                let parity = (x.len() as i64 + t).rem_euclid(2);
                floor = floor.max(parity);
                for blue in [0u128, 0b1011, u128::MAX >> (128 - h.universe_size())] {
                    let c = TwoColoring::from_bits(h.universe_size(), blue & (u128::MAX >> (128 - h.universe_size())))
                        .map_err(e)?;
                    let v = coloring_score(&single, &c, mode).map_err(e)?;
                    ensure!(
                        v.is_integer() && (v.doubled() / 2).rem_euclid(2) == parity,
                        "{name} t={t}: parity of {v} on {x}"
                    );
                }
            }
            ensure!(exact.value.doubled() >= 2 * floor, "{name} t={t}: below parity floor");
        }
    }
    Ok(format!(
        "random_pairs=1000 catalogue_runs={compared} instances={}",
        catalogue.len()
    ))
}
