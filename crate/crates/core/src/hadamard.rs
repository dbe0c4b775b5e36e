//! Hadamard matrices: Sylvester and Paley-I constructions, certification,
//! normalization, and the row-support hypergraph.
//!
//! Row `i` of a normalized matrix contributes the edge `{j : h_ij = +1}`.
//! Edge 0 is the whole universe and every later edge has size `m/2`.

use std::fmt;

use crate::bounds::prime_power_decomposition;
use crate::error::{Error, Result};
use crate::setsys::{Hypergraph, VertexSet, MAX_UNIVERSE};

/// Square ±1 matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct SignMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::usage("matrix order must be positive"));
        }
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(Error::usage(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&x| x != 1 && x != -1) {
                return Err(Error::usage(format!("row {i} contains {bad}, entries must be ±1")));
            }
            entries.extend(row);
        }
        Ok(SignMatrix { order, entries })
    }

    fn from_fn(order: usize, f: impl Fn(usize, usize) -> i8) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        SignMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn negate_row(&mut self, i: usize) {
        let m = self.order;
        for x in &mut self.entries[i * m..(i + 1) * m] {
            *x = -*x;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        let m = self.order;
        for i in 0..m {
            self.entries[i * m + j] = -self.entries[i * m + j];
        }
    }

    /// Flip the sign of a single entry.
    pub fn flip(&mut self, i: usize, j: usize) {
        let m = self.order;
        self.entries[i * m + j] = -self.entries[i * m + j];
    }

    /// First row and first column are all `+1`.
    pub fn is_normalized(&self) -> bool {
        (0..self.order).all(|k| self.get(0, k) == 1 && self.get(k, 0) == 1)
    }

    /// Text form: the order on line 1, then one row per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut order: Option<usize> = None;
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(m) = order else {
                let m = line
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("expected matrix order, got {line:?}")))?;
                order = Some(m);
                continue;
            };
            let row = line
                .split_whitespace()
                .map(|t| match t {
                    "1" | "+1" => Ok(1i8),
                    "-1" => Ok(-1i8),
                    other => Err(Error::parse(line_no, format!("entry {other:?} is not ±1"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != m {
                return Err(Error::parse(
                    line_no,
                    format!("expected {m} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        let m = order.ok_or_else(|| Error::parse(1, "missing matrix order"))?;
        if rows.len() != m {
            return Err(Error::parse(
                text.lines().count(),
                format!("expected {m} rows, found {}", rows.len()),
            ));
        }
        Self::from_rows(rows)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for i in 0..self.order {
            let row: Vec<&str> = self.row(i).iter().map(|&x| if x == 1 { "1" } else { "-1" }).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix({})", self.order)?;
        for i in 0..self.order {
            let row: String = self.row(i).iter().map(|&x| if x == 1 { '+' } else { '-' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Sylvester matrix of order `m` (a power of two): `[[H, H], [H, −H]]`.
pub fn sylvester(m: usize) -> Result<SignMatrix> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::UnsupportedOrder {
            order: m,
            reason: "Sylvester construction needs a power of two".into(),
        });
    }
    // Entry (i, j) of the 2^k Sylvester matrix is (−1)^popcount(i & j).
    Ok(SignMatrix::from_fn(m, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }))
}

/// Paley-I matrix of order `m = q + 1`, `q ≡ 3 (mod 4)` a prime power.
pub fn paley(m: usize) -> Result<SignMatrix> {
    let unsupported = |reason: &str| Error::UnsupportedOrder {
        order: m,
        reason: reason.into(),
    };
    if m < 4 {
        return Err(unsupported("Paley-I needs m = q + 1 with q ≥ 3"));
    }
    let q = m - 1;
    if q % 4 != 3 {
        return Err(unsupported("Paley-I needs q = m − 1 ≡ 3 (mod 4)"));
    }
    let (p, a) = prime_power_decomposition(q as u64).ok_or_else(|| unsupported("m − 1 is not a prime power"))?;
    let field = FiniteField::new(p as u32, a);
    let chi = field.quadratic_character();
    // H = I + S with S = [[0, 1ᵀ], [−1, Q]], Q_ij = χ(x_i − x_j).
    Ok(SignMatrix::from_fn(m, |i, j| match (i, j) {
        _ if i == j => 1,
        (0, _) => 1,
        (_, 0) => -1,
        _ => chi[field.sub(i as u32 - 1, j as u32 - 1) as usize],
    }))
}

/// Sylvester when `m` is a power of two, else Paley-I.
pub fn construct(m: usize) -> Result<SignMatrix> {
    if m.is_power_of_two() {
        sylvester(m)
    } else {
        paley(m).map_err(|_| Error::UnsupportedOrder {
            order: m,
            reason: "neither a power of two nor q + 1 with q ≡ 3 (mod 4) a prime power".into(),
        })
    }
}

/// Whether [`construct`] supports order `m`.
pub fn is_catalogued(m: usize) -> bool {
    m.is_power_of_two() || (m >= 4 && (m - 1) % 4 == 3 && prime_power_decomposition((m - 1) as u64).is_some())
}

/// Orders `≤ max` that [`construct`] can build, ascending.
pub fn catalogue_orders(max: usize) -> Vec<usize> {
    (1..=max).filter(|&m| is_catalogued(m)).collect()
}

/// Powers of two `≤ max`.
pub fn sylvester_orders(max: usize) -> Vec<usize> {
    (0..usize::BITS)
        .map(|k| 1usize << k)
        .take_while(|&m| m <= max)
        .collect()
}

/// `M·Mᵀ = m·I` in exact integer arithmetic.
pub fn verify_hadamard(mat: &SignMatrix) -> bool {
    let m = mat.order;
    for i in 0..m {
        let ri = mat.row(i);
        for k in i..m {
            let dot: i64 = ri.iter().zip(mat.row(k)).map(|(&a, &b)| (a * b) as i64).sum();
            let want = if i == k { m as i64 } else { 0 };
            if dot != want {
                return false;
            }
        }
    }
    true
}

/// Negate each column whose first entry is −1, then each row whose first
/// entry is −1.
pub fn normalize(mat: &SignMatrix) -> Result<SignMatrix> {
    if !verify_hadamard(mat) {
        return Err(Error::Certification("input is not a Hadamard matrix".into()));
    }
    let mut out = mat.clone();
    for j in 0..out.order {
        if out.get(0, j) == -1 {
            out.negate_col(j);
        }
    }
    for i in 0..out.order {
        if out.get(i, 0) == -1 {
            out.negate_row(i);
        }
    }
    debug_assert!(out.is_normalized());
    Ok(out)
}

/// Edge `i` is `{j : h_ij = +1}`, the support of row `i` of `(H + J)/2`.
pub fn to_hypergraph(mat: &SignMatrix) -> Result<Hypergraph> {
    if !mat.is_normalized() {
        return Err(Error::usage("to_hypergraph needs a normalized matrix"));
    }
    let m = mat.order;
    if m > MAX_UNIVERSE {
        return Err(Error::Capacity {
            what: "Hadamard hypergraph universe",
            requested: m,
            limit: MAX_UNIVERSE,
            hint: "",
        });
    }
    if !verify_hadamard(mat) {
        return Err(Error::Certification("input is not a Hadamard matrix".into()));
    }
    let edges = (0..m)
        .map(|i| {
            VertexSet::from_indices(
                m,
                mat.row(i).iter().enumerate().filter(|(_, &x)| x == 1).map(|(j, _)| j),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Hypergraph::new(m, edges)
}

/// Normalized catalogue matrix of order `m`, as a hypergraph.
pub fn hadamard_hypergraph(m: usize) -> Result<Hypergraph> {
    to_hypergraph(&normalize(&construct(m)?)?)
}

/// GF(p^a) with elements encoded as base-p digit vectors packed into `u32`.
struct FiniteField {
    p: u32,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

impl FiniteField {
    fn new(p: u32, a: u32) -> Self {
        let q = p.pow(a);
        let digits = |x: u32| -> Vec<u32> {
            let mut x = x;
            (0..a)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let pack = |ds: &[u32]| ds.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        let modulus = irreducible(p, a);

        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for x in 0..q {
            let dx = digits(x);
            for y in 0..q {
                let dy = digits(y);
                let sum: Vec<u32> = dx.iter().zip(&dy).map(|(u, v)| (u + v) % p).collect();
                add[(x * q + y) as usize] = pack(&sum);
                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0u32; (2 * a) as usize];
                for (i, u) in dx.iter().enumerate() {
                    for (j, v) in dy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u * v) % p;
                    }
                }
                for deg in (a as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    for (k, mk) in modulus.iter().enumerate().take(a as usize) {
                        let idx = deg - a as usize + k;
                        prod[idx] = (prod[idx] + (p - c) * mk) % p;
                    }
                    prod[deg] = 0;
                }
                mul[(x * q + y) as usize] = pack(&prod[..a as usize]);
            }
        }
        let neg = (0..q)
            .map(|x| {
                (0..q)
                    .find(|&y| add[(x * q + y) as usize] == 0)
                    .expect("additive inverse")
            })
            .collect();
        FiniteField { p, q, add, mul, neg }
    }

    fn sub(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + self.neg[y as usize]) as usize]
    }

    /// χ(x): 0 at 0, +1 on nonzero squares, −1 otherwise.
    fn quadratic_character(&self) -> Vec<i8> {
        let mut chi = vec![-1i8; self.q as usize];
        chi[0] = 0;
        for x in 1..self.q {
            chi[self.mul[(x * self.q + x) as usize] as usize] = 1;
        }
        debug_assert!(self.p > 2);
        chi
    }
}

/// Coefficients `c_0..c_a` (monic, `c_a = 1`) of an irreducible polynomial
/// of degree `a` over GF(p), found by trial division.
fn irreducible(p: u32, a: u32) -> Vec<u32> {
    if a == 1 {
        return vec![0, 1];
    }
    let a = a as usize;
    let total = p.pow(a as u32);
    (0..total)
        .map(|code| {
            let mut c = code;
            let mut coeffs: Vec<u32> = (0..a)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            coeffs.push(1);
            coeffs
        })
        .find(|f| {
            (1..=a / 2).all(|d| {
                (0..p.pow(d as u32)).all(|code| {
                    let mut c = code;
                    let mut g: Vec<u32> = (0..d)
                        .map(|_| {
                            let x = c % p;
                            c /= p;
                            x
                        })
                        .collect();
                    g.push(1);
                    !divides(&g, f, p)
                })
            })
        })
        .expect("an irreducible polynomial exists for every degree")
}

// Monic g divides f over GF(p).
fn divides(g: &[u32], f: &[u32], p: u32) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    for deg in (dg..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for (k, gk) in g.iter().enumerate() {
            let idx = deg - dg + k;
            r[idx] = (r[idx] + (p - c) * gk) % p;
        }
    }
    r.iter().all(|&x| x == 0)
}
