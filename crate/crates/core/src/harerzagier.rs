//! Genus counts of pairings (Harer–Zagier numbers) and the inequalities used
//! to control high moments.
//!
//! `ε_g(n)` is the number of fixed-point-free involutions `α` of `[2n]` with
//! `2g = |α| + |α⁻¹π| − 2n + 1`, `π` the full cycle.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmoments::f_factor;
use crate::permgroup::{enumerate, factorial, full_cycle, genus, EnumerationRange, GenusKind, Permutation};
use crate::scalar::{binomial, catalan, exact_sqrt, to_f64, ExactScalar};

/// Largest `n` for direct enumeration of pairings of `[2n]`.
pub const PAIRING_CEILING: usize = 8;
/// Largest degree for enumeration of fixed-point-free permutations.
pub const STRATUM_CEILING: usize = 10;

static EPSILON: Mutex<Vec<Vec<BigInt>>> = Mutex::new(Vec::new());

/// `ε_g(n)` from the recursion
/// `(n+1)ε_g(n) = 2(2n−1)ε_g(n−1) + (2n−1)(n−1)(2n−3)ε_{g−1}(n−2)`.
pub fn hz_epsilon(g: usize, n: usize) -> BigInt {
    let mut memo = EPSILON.lock().expect("epsilon memo");
    fill(&mut memo, g, n);
    memo[g][n].clone()
}

fn fill(memo: &mut Vec<Vec<BigInt>>, g: usize, n: usize) {
    let have_n = memo.first().map_or(0, |row| row.len());
    if memo.len() > g && have_n > n {
        return;
    }
    let rows = memo.len().max(g + 1);
    let cols = have_n.max(n + 1);
    let mut table = vec![vec![BigInt::zero(); cols]; rows];
    for (gg, row) in table.iter_mut().enumerate().take(1) {
        debug_assert_eq!(gg, 0);
        for (k, e) in row.iter_mut().enumerate() {
            *e = catalan(k as u64);
        }
    }
    for gg in 1..rows {
        for k in 0..cols {
            let k_i = k as i64;
            let mut acc = BigInt::zero();
            if k >= 1 {
                acc += BigInt::from(2 * (2 * k_i - 1)) * &table[gg][k - 1];
            }
            if k >= 2 {
                acc += BigInt::from((2 * k_i - 1) * (k_i - 1) * (2 * k_i - 3)) * &table[gg - 1][k - 2];
            }
            let (q, r) = acc.div_rem(&BigInt::from(k_i + 1));
            debug_assert!(r.is_zero(), "recursion not integral at g={gg}, n={k}");
            table[gg][k] = q;
        }
    }
    *memo = table;
}

/// Genus of a fixed-point-free involution of `[2n]`.
pub fn involution_genus(alpha: &Permutation) -> usize {
    let p = alpha.degree();
    let pi = full_cycle(p).expect("positive degree");
    let d = alpha.inverse().compose(&pi).expect("same degree").length();
    // 2g = |α| + |α⁻¹π| − p + 1 with |α| = p/2.
    (p / 2 + d + 1 - p) / 2
}

/// All perfect matchings of `[2n]` as involutions.
pub fn pairings(n: usize) -> Vec<Permutation> {
    fn rec(free: &mut Vec<usize>, images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if free.is_empty() {
            out.push(Permutation::from_images(images.clone()).expect("involution"));
            return;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free.remove(idx);
            images[a] = b;
            images[b] = a;
            rec(free, images, out);
            free.insert(idx, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    let mut free: Vec<usize> = (0..2 * n).collect();
    let mut images = vec![0; 2 * n];
    if n == 0 {
        return vec![Permutation::identity(0)];
    }
    rec(&mut free, &mut images, &mut out);
    out
}

/// Direct stratification of the pairings of `[2n]` by genus.
pub fn enumerate_involutions_by_genus(n: usize) -> Result<BTreeMap<usize, u64>> {
    if n > PAIRING_CEILING {
        return Err(Error::CeilingExceeded { what: "pairing enumeration", requested: n, ceiling: PAIRING_CEILING });
    }
    if n == 0 {
        return Ok([(0, 1)].into_iter().collect());
    }
    let mut out = BTreeMap::new();
    for alpha in pairings(n) {
        *out.entry(involution_genus(&alpha)).or_insert(0) += 1;
    }
    Ok(out)
}

/// `h = g⁽¹⁾ + g⁽²⁾` for `α ∈ S_p`.
pub fn total_genus(alpha: &Permutation) -> usize {
    genus(alpha, GenusKind::First) + genus(alpha, GenusKind::Second)
}

/// `|T_{p,h}|` for every `h`: fixed-point-free `α ∈ S_p` sorted by total genus.
pub fn genus_strata(p: usize) -> Result<BTreeMap<usize, u64>> {
    if p > STRATUM_CEILING {
        return Err(Error::CeilingExceeded { what: "stratum enumeration", requested: p, ceiling: STRATUM_CEILING });
    }
    if p == 0 {
        return Err(Error::ZeroDegree);
    }
    let firsts: Vec<usize> = (1..p).collect();
    let partial: Vec<BTreeMap<usize, u64>> = firsts
        .par_iter()
        .map(|&first| {
            let mut local = BTreeMap::new();
            // Lexicographic ranks are grouped by the image of 0.
            let block = factorial(p - 1);
            let range = EnumerationRange::new(p, first as u64 * block, (first as u64 + 1) * block).expect("in range");
            for alpha in enumerate(range) {
                if alpha.fixed_point_count() == 0 {
                    *local.entry(total_genus(&alpha)).or_insert(0) += 1;
                }
            }
            local
        })
        .collect();
    let mut out = BTreeMap::new();
    for local in partial {
        for (h, c) in local {
            *out.entry(h).or_insert(0) += c;
        }
    }
    Ok(out)
}

pub fn stratum_count(p: usize, h: usize) -> Result<u64> {
    Ok(genus_strata(p)?.get(&h).copied().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumBound {
    pub p: usize,
    pub h: usize,
    pub count: u64,
    pub holds: bool,
}

/// Checks `|T_{p,h}| ≤ 4^{p/2−1} p^{12h+5}`. For odd `p` both sides are
/// squared so the comparison stays in integers.
pub fn cardinarity_check(p: usize, h: usize, count: u64) -> bool {
    let c = BigInt::from(count);
    let pp = BigInt::from(p);
    let e = (12 * h + 5) as u32;
    if p.is_multiple_of(2) {
        if p < 2 {
            return c.is_zero();
        }
        c <= BigInt::from(4u32).pow((p / 2 - 1) as u32) * pp.pow(e)
    } else if p < 2 {
        // 4^{-1/2} · 1 = 1/2
        &c * 2 <= BigInt::one()
    } else {
        &c * &c <= BigInt::from(4u32).pow((p - 2) as u32) * pp.pow(2 * e)
    }
}

pub fn cardinarity_suite(p: usize) -> Result<Vec<StratumBound>> {
    Ok(genus_strata(p)?
        .into_iter()
        .map(|(h, count)| StratumBound { p, h, count, holds: cardinarity_check(p, h, count) })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Identity1Outcome {
    pub lhs: ExactScalar,
    pub rhs: f64,
    pub holds: bool,
}

/// `Σ_k C(p,k) C(k,t) (−1)^{p−k} F(D,k)` against `C(p,t) (p/√D)^{p−t}`.
pub fn identity1_check(p: usize, t: usize, d: u64) -> Result<Identity1Outcome> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("D must be at least 2, got {d}")));
    }
    if t > p {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds p = {p}")));
    }
    let mut lhs = ExactScalar::zero();
    for k in t..=p {
        let coeff = binomial(p as u64, k as u64) * binomial(k as u64, t as u64);
        let term = ExactScalar::from_integer(coeff) * f_factor(d, k)?;
        if (p - k).is_multiple_of(2) {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let e = (p - t) as u32;
    let bin = binomial(p as u64, t as u64);
    let pp = BigInt::from(p);
    let holds = if let Some(s) = exact_sqrt(d) {
        let rhs = ExactScalar::new(bin.clone() * pp.clone().pow(e), BigInt::from(s).pow(e));
        lhs <= rhs
    } else if e.is_multiple_of(2) {
        let rhs = ExactScalar::new(bin.clone() * pp.clone().pow(e), BigInt::from(d).pow(e / 2));
        lhs <= rhs
    } else if !lhs.is_positive() {
        true
    } else {
        to_f64(&lhs) <= rhs_f64(&bin, p, d, e) * (1.0 + 1e-12)
    };
    let rhs = rhs_f64(&bin, p, d, e);
    Ok(Identity1Outcome { lhs, rhs, holds })
}

fn rhs_f64(bin: &BigInt, p: usize, d: u64, e: u32) -> f64 {
    bin.to_f64().unwrap_or(f64::INFINITY) * (p as f64 / (d as f64).sqrt()).powi(e as i32)
}

/// `ε_g(n) ≤ 4^{n−1} n^{3g}`, meaningful for `n ≥ 1`.
pub fn hzcor_check(g: usize, n: usize) -> bool {
    if n == 0 {
        // 4^{-1}: only a zero count fits.
        return hz_epsilon(g, 0) * 4 <= BigInt::one();
    }
    hz_epsilon(g, n) <= BigInt::from(4u32).pow((n - 1) as u32) * BigInt::from(n).pow((3 * g) as u32)
}
