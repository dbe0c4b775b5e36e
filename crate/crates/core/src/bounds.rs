//! Closed-form chromatic and discrepancy bounds, evaluated exactly where
//! the quantities are rational.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hadamard;
use crate::setsys::binomial;

/// `Some((p, a))` when `q = p^a` with `p` prime and `a ≥ 1`.
pub fn prime_power_decomposition(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // no factor up to √q: q is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut a = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power_decomposition(q).is_some()
}

/// Smallest integer `≥ s²/144`.
pub fn f_lower(s: u64) -> u64 {
    (s * s).div_ceil(144)
}

/// `12·√|E|`.
pub fn spencer_upper(num_edges: u64) -> f64 {
    12.0 * (num_edges as f64).sqrt()
}

/// `K·√(|V|·ln(|E|/|V|))`, or `None` when `|E| ≤ |V|` (the bound needs
/// `|V| < |E|`).
pub fn alon_spencer_upper(num_vertices: u64, num_edges: u64, k: f64) -> Option<f64> {
    if num_vertices == 0 || num_edges <= num_vertices {
        return None;
    }
    Some(alon_spencer_upper_real(num_vertices as f64, num_edges as f64, k))
}

/// Real-argument form of [`alon_spencer_upper`] (no applicability check).
pub fn alon_spencer_upper_real(num_vertices: f64, num_edges: f64, k: f64) -> f64 {
    k * (num_vertices * (num_edges / num_vertices).ln()).sqrt()
}

/// `n·e^{s²/(K²n)}`: the color count obtained by inverting the Alon–Spencer
/// bound at discrepancy `s`. The text states it as an upper bound on `q`
/// although the argument yields `q ≥`; reported as a formula only.
pub fn alon_spencer_color_formula(n: u64, s: u64, k: f64) -> f64 {
    let n = n as f64;
    let s = s as f64;
    n * (s * s / (k * k * n)).exp()
}

/// A value together with whether the bound's hypotheses held.
#[derive(Debug, Clone, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub applicable: bool,
    pub reason: String,
}

/// `C(n, n/2) / C(n, n/2 − s − 1)`, the ratio `|V(J)| / α(J)` under the
/// Frankl–Wilson bound on `J(n, n/2, s)`. Applicable iff `s ≤ n/4` and
/// `n/2 − s` is a prime power.
pub fn ratio_lower(n: u64, s: u64) -> Result<Flagged<BigRational>> {
    if !n.is_multiple_of(2) {
        return Err(Error::usage(format!("ratio_lower needs even n, got {n}")));
    }
    if s == 0 || s + 1 > n / 2 {
        return Err(Error::usage(format!("ratio_lower needs 1 ≤ s ≤ n/2 − 1, got s = {s}")));
    }
    let num = BigInt::from(binomial(n, n / 2));
    let den = BigInt::from(binomial(n, n / 2 - s - 1));
    let value = BigRational::new(num, den);
    let base = n / 2 - s;
    let (applicable, reason) = if 4 * s > n {
        (false, format!("s = {s} exceeds n/4"))
    } else if !is_prime_power(base) {
        (false, format!("n/2 - s = {base} is not a prime power"))
    } else {
        (true, format!("n/2 - s = {base} is a prime power and s <= n/4"))
    };
    Ok(Flagged {
        value,
        applicable,
        reason,
    })
}

/// `|I_A|` for `|A| = a`: `Σ_{i ≥ ⌈(a+s)/2⌉} C(a, i)·C(n − a, k − i)`.
pub fn frankl_set_size(n: u64, k: u64, s: u64, a: u64) -> Result<BigUint> {
    if a < s {
        return Err(Error::usage(format!("|A| = {a} is smaller than s = {s}")));
    }
    if a > n || k > n {
        return Err(Error::usage(format!("need a, k ≤ n (a = {a}, k = {k}, n = {n})")));
    }
    let lo = (a + s).div_ceil(2);
    Ok((lo..=a.min(k)).map(|i| binomial(a, i) * binomial(n - a, k - i)).sum())
}

/// `(a*, |I_A|)` maximizing the Frankl-set size over `a = s..=n`; ties go to
/// the smallest `a`.
pub fn max_frankl_set_size(n: u64, k: u64, s: u64) -> Result<(u64, BigUint)> {
    if s > n {
        return Err(Error::usage(format!("s = {s} exceeds n = {n}")));
    }
    let mut best: Option<(u64, BigUint)> = None;
    for a in s..=n {
        let size = frankl_set_size(n, k, s, a)?;
        if best.as_ref().is_none_or(|(_, b)| size > *b) {
            best = Some((a, size));
        }
    }
    Ok(best.expect("range s..=n is nonempty"))
}

/// The fractional-cover bound on `χ_F(K(n, k, s))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalBound {
    /// Largest Frankl set, standing in for `α(K)`.
    pub alpha_hat: BigUint,
    pub a_star: u64,
    /// `C(n, k) / α̂`.
    pub tau_star: BigRational,
    /// `τ*·(1 + ln α̂)`.
    pub value: f64,
}

/// `(C(n, k)/α̂)·(1 + ln α̂)` with `α̂` from [`max_frankl_set_size`]. The
/// Frankl maximum is only a lower estimate of `α(K)` in general.
pub fn fractional_upper(n: u64, k: u64, s: u64) -> Result<FractionalBound> {
    let (a_star, alpha_hat) = max_frankl_set_size(n, k, s)?;
    if alpha_hat.is_zero() {
        return Err(Error::usage(format!(
            "no nonempty Frankl set for n = {n}, k = {k}, s = {s}"
        )));
    }
    let tau_star = BigRational::new(BigInt::from(binomial(n, k)), BigInt::from(alpha_hat.clone()));
    let tau = tau_star.to_f64().expect("finite");
    let ln_alpha = alpha_hat.to_f64().expect("finite").ln();
    Ok(FractionalBound {
        alpha_hat,
        a_star,
        tau_star,
        value: tau * (1.0 + ln_alpha),
    })
}

/// Smallest catalogued `m > bound`.
fn smallest_order_above(bound: u64, catalogue: &[usize]) -> Result<usize> {
    catalogue
        .iter()
        .copied()
        .filter(|&m| m as u64 > bound)
        .min()
        .ok_or(Error::Capacity {
            what: "Hadamard order",
            requested: bound as usize + 1,
            limit: catalogue.iter().copied().max().unwrap_or(0),
            hint: " (no catalogued order is large enough)",
        })
}

/// `(m, 2m)` for the smallest catalogued `m > 4(s + t)²`.
pub fn hadamard_color_count(s: u64, t: u64, catalogue: &[usize]) -> Result<(usize, usize)> {
    if s == 0 {
        return Err(Error::usage("s must be at least 1"));
    }
    let m = smallest_order_above(4 * (s + t) * (s + t), catalogue)?;
    Ok((m, 2 * m))
}

/// `(m, 2m)` for the smallest catalogued `m > (r(r−1)(s−1) + rt)²`.
pub fn hyper_color_count(r: u64, s: u64, t: u64, catalogue: &[usize]) -> Result<(usize, usize)> {
    if s == 0 || r < 2 {
        return Err(Error::usage("need s ≥ 1 and r ≥ 2"));
    }
    let base = r * (r - 1) * (s - 1) + r * t;
    let m = smallest_order_above(base * base, catalogue)?;
    Ok((m, 2 * m))
}

/// `(m, 2m)` for the smallest catalogued `m > 4(s + 2l + t)²`.
pub fn signed_color_count(s: u64, l: u64, t: u64, catalogue: &[usize]) -> Result<(usize, usize)> {
    hadamard_color_count(s + 2 * l, t, catalogue)
}

/// `s + 2 ≤ χ(J(n, n/2, s)) ≤ 2·C(2s+1, s+1)`.
pub fn johnson_sandwich(s: u64) -> (u64, BigUint) {
    (s + 2, binomial(2 * s + 1, s + 1) * 2u32)
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Integer(BigUint),
    Exact(BigRational),
    Real(f64),
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Integer(x) => write!(f, "{x}"),
            BoundValue::Exact(x) => write!(f, "{x}"),
            BoundValue::Real(x) => write!(f, "{x:.6}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub name: String,
    pub params: Vec<(&'static str, String)>,
    pub value: BoundValue,
    pub applicable: bool,
    pub reason: String,
}

impl fmt::Display for BoundEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(
            f,
            "name={}({}) value={} applicable={} reason={}",
            self.name,
            params.join(","),
            self.value,
            self.applicable,
            self.reason
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Parameters for [`bound_report`]. `t` defaults to `n/2 − k`.
#[derive(Debug, Clone, Copy)]
pub struct ReportParams {
    pub n: u64,
    pub k: u64,
    pub s: u64,
    pub t: Option<u64>,
    /// The unspecified Alon–Spencer constant; related entries are skipped
    /// without it.
    pub alon_spencer_k: Option<f64>,
}

/// Every bound that applies to `K(n, k, s)`.
pub fn bound_report(p: ReportParams) -> Result<BoundReport> {
    let ReportParams { n, k, s, .. } = p;
    if s == 0 || k == 0 || k > n {
        return Err(Error::usage(format!(
            "need s ≥ 1 and 1 ≤ k ≤ n (n = {n}, k = {k}, s = {s})"
        )));
    }
    let t = match p.t {
        Some(t) => t,
        None if 2 * k <= n && n % 2 == 0 => n / 2 - k,
        None => return Err(Error::usage("k = n/2 − t needs n even and k ≤ n/2, or an explicit t")),
    };
    let nks = || vec![("n", n.to_string()), ("k", k.to_string()), ("s", s.to_string())];
    let shape_ok = 2 * (k + t) == n;
    let mut entries = Vec::new();

    entries.push(BoundEntry {
        name: "f_lower".into(),
        params: vec![("s", s.to_string())],
        value: BoundValue::Integer(f_lower(s).into()),
        applicable: shape_ok && s + t <= n / 2,
        reason: "chi_F >= s^2/144 for K(n, n/2-t, s)".into(),
    });

    let catalogue = hadamard::catalogue_orders(crate::setsys::MAX_UNIVERSE);
    match hadamard_color_count(s, t, &catalogue) {
        Ok((m, colors)) => {
            entries.push(BoundEntry {
                name: "hadamard_colors".into(),
                params: vec![("s", s.to_string()), ("t", t.to_string()), ("m", m.to_string())],
                value: BoundValue::Integer(colors.into()),
                applicable: shape_ok && n >= m as u64,
                reason: if n >= m as u64 {
                    format!("m = {m} > 4(s+t)^2 and n >= m")
                } else {
                    format!("needs n >= m = {m}")
                },
            });
            entries.push(BoundEntry {
                name: "spencer_upper".into(),
                params: vec![("edges", m.to_string())],
                value: BoundValue::Real(spencer_upper(m as u64)),
                applicable: true,
                reason: "disc(H) <= 12 sqrt|E| for the order-m Hadamard hypergraph".into(),
            });
            if let Some(kc) = p.alon_spencer_k {
                let edges = colors as u64;
                let value = alon_spencer_upper(n, edges, kc);
                entries.push(BoundEntry {
                    name: "alon_spencer_upper".into(),
                    params: vec![("V", n.to_string()), ("E", edges.to_string()), ("K", kc.to_string())],
                    value: BoundValue::Real(value.unwrap_or(f64::NAN)),
                    applicable: value.is_some(),
                    reason: if value.is_some() {
                        "K sqrt(|V| ln(|E|/|V|)) on the generating family of the Hadamard coloring".into()
                    } else {
                        "requires |V| < |E|".into()
                    },
                });
            }
        }
        Err(e) => entries.push(BoundEntry {
            name: "hadamard_colors".into(),
            params: vec![("s", s.to_string()), ("t", t.to_string())],
            value: BoundValue::Real(f64::NAN),
            applicable: false,
            reason: e.to_string(),
        }),
    }

    let (lo, hi) = johnson_sandwich(s);
    let johnson_ok = 2 * k == n && 2 * s < n;
    entries.push(BoundEntry {
        name: "johnson_lower".into(),
        params: vec![("n", n.to_string()), ("s", s.to_string())],
        value: BoundValue::Integer(lo.into()),
        applicable: johnson_ok,
        reason: "chi(J(n, n/2, s)) >= s + 2".into(),
    });
    entries.push(BoundEntry {
        name: "johnson_upper".into(),
        params: vec![("n", n.to_string()), ("s", s.to_string())],
        value: BoundValue::Integer(hi),
        applicable: johnson_ok,
        reason: "chi(J(n, n/2, s)) <= 2 C(2s+1, s+1)".into(),
    });

    if n % 2 == 0 && s < n / 2 {
        let r = ratio_lower(n, s)?;
        entries.push(BoundEntry {
            name: "ratio_lower".into(),
            params: vec![("n", n.to_string()), ("s", s.to_string())],
            value: BoundValue::Exact(r.value),
            applicable: r.applicable,
            reason: r.reason,
        });
    }

    if s <= n {
        let frac = fractional_upper(n, k, s)?;
        entries.push(BoundEntry {
            name: "frankl_max".into(),
            params: {
                let mut v = nks();
                v.push(("a", frac.a_star.to_string()));
                v
            },
            value: BoundValue::Integer(frac.alpha_hat.clone()),
            applicable: true,
            reason: "largest |I_A| over |A|; lower estimate of alpha(K)".into(),
        });
        entries.push(BoundEntry {
            name: "tau_star".into(),
            params: nks(),
            value: BoundValue::Exact(frac.tau_star.clone()),
            applicable: true,
            reason: "C(n,k)/alpha_hat".into(),
        });
        entries.push(BoundEntry {
            name: "fractional_upper".into(),
            params: nks(),
            value: BoundValue::Real(frac.value),
            applicable: true,
            reason: "tau* (1 + ln alpha_hat); alpha_hat is the Frankl maximum, not a proven alpha(K)".into(),
        });
    }

    if let Some(kc) = p.alon_spencer_k {
        entries.push(BoundEntry {
            name: "alon_spencer_colors".into(),
            params: vec![("n", n.to_string()), ("s", s.to_string()), ("K", kc.to_string())],
            value: BoundValue::Real(alon_spencer_color_formula(n, s, kc)),
            applicable: false,
            reason: "n e^{s^2/(K^2 n)}; stated as q <= but the argument gives q >=, formula only".into(),
        });
    }

    Ok(BoundReport { entries })
}
