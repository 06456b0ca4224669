//! Exact expected moments of `mn·ρ^Γ` at finite `(l, m, n)`.
//!
//! For a permutation `τ` with cycle lengths `θ₁, …, θ_ℓ`,
//!
//! ```text
//! E Π_i tr[(mn ρ^Γ)^{θ_i}] = F(lmn, p) Σ_{α ∈ S_p} l^{-|α|} m^{p-|τα|} n^{p-|τ⁻¹α|},
//! F(D, p) = Π_{i<p} D / (D + i).
//! ```
//!
//! The sum only depends on `α` through the triple `(|α|, |τα|, |τ⁻¹α|)`, so
//! the factorial enumeration is done once per `τ` into a [`ClassCountTable`]
//! and every `(l, m, n)` is then evaluated from the table.

mod cache;
mod table;

pub use cache::TableCache;
pub use table::{consecutive_cycles, ClassCountTable, DEFAULT_CEILING, FORMAT_VERSION};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::Permutation;
use crate::scalar::{binomial, ExactScalar};

/// Cycle type `θ₁, …, θ_ℓ` of the product of traces `Π tr[(mnρ^Γ)^{θ_i}]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedMomentSpec {
    cycle_type: Vec<usize>,
}

impl MixedMomentSpec {
    pub fn new(cycle_type: Vec<usize>) -> Result<Self> {
        if cycle_type.is_empty() || cycle_type.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "cycle type must be a nonempty list of positive integers, got {cycle_type:?}"
            )));
        }
        Ok(Self { cycle_type })
    }

    pub fn cycle_type(&self) -> &[usize] {
        &self.cycle_type
    }

    pub fn total(&self) -> usize {
        self.cycle_type.iter().sum()
    }

    /// `(1…θ₁)(θ₁+1…θ₁+θ₂)…`; for `(p, p)` this is `π̂`.
    pub fn representative(&self) -> Permutation {
        consecutive_cycles(&self.cycle_type)
    }
}

fn check_dims(l: u64, m: u64, n: u64) -> Result<()> {
    for (v, name) in [(l, "l"), (m, "m"), (n, "n")] {
        if v == 0 {
            return Err(Error::ZeroDimension(name));
        }
    }
    Ok(())
}

/// `F(D, p) = Π_{i=0}^{p-1} D / (D + i)`.
pub fn f_factor(d: u64, p: usize) -> Result<ExactScalar> {
    if d == 0 {
        return Err(Error::ZeroDimension("D"));
    }
    let d = BigInt::from(d);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..p {
        num *= &d;
        den *= &d + i;
    }
    Ok(ExactScalar::new(num, den))
}

/// `Σ count · l^{-a} m^{p-offset-b} n^{p-offset-c}` over the table, exactly.
fn table_sum(table: &ClassCountTable, l: u64, m: u64, n: u64, offset: usize) -> ExactScalar {
    let p = table.p();
    let (l, m, n) = (BigInt::from(l), BigInt::from(m), BigInt::from(n));
    // Scale by l^{p-1} to stay in integers.
    let mut total = BigInt::zero();
    for (&(a, b, c), &count) in table.entries() {
        total += BigInt::from(count)
            * num_traits::pow(l.clone(), p - 1 - a)
            * num_traits::pow(m.clone(), p - offset - b)
            * num_traits::pow(n.clone(), p - offset - c);
    }
    ExactScalar::new(total, num_traits::pow(l, p - 1))
}

/// `E Z^{(p)} = E (1/mn) tr[(mn ρ^Γ)^p]`.
pub fn expected_moment(l: u64, m: u64, n: u64, p: usize) -> Result<ExactScalar> {
    expected_moment_with(TableCache::global(), l, m, n, p)
}

pub fn expected_moment_with(cache: &TableCache, l: u64, m: u64, n: u64, p: usize) -> Result<ExactScalar> {
    check_dims(l, m, n)?;
    if p == 0 {
        return Ok(ExactScalar::one());
    }
    let (table, _) = cache.full_cycle_table(p)?;
    expected_moment_from_table(&table, l, m, n)
}

/// Evaluates `E Z^{(p)}` from an already built full-cycle table.
pub fn expected_moment_from_table(table: &ClassCountTable, l: u64, m: u64, n: u64) -> Result<ExactScalar> {
    check_dims(l, m, n)?;
    if !table.is_full_cycle() {
        return Err(Error::InvalidParameter("expected a full-cycle table".into()));
    }
    Ok(f_factor(l * m * n, table.p())? * table_sum(table, l, m, n, 1))
}

/// `E Π_i tr[(mn ρ^Γ)^{θ_i}]`.
pub fn expected_mixed_moment(l: u64, m: u64, n: u64, spec: &MixedMomentSpec) -> Result<ExactScalar> {
    expected_mixed_moment_with(TableCache::global(), l, m, n, spec)
}

pub fn expected_mixed_moment_with(
    cache: &TableCache,
    l: u64,
    m: u64,
    n: u64,
    spec: &MixedMomentSpec,
) -> Result<ExactScalar> {
    check_dims(l, m, n)?;
    let (table, _) = cache.table_for_cycle_type(spec.cycle_type())?;
    Ok(f_factor(l * m * n, spec.total())? * table_sum(&table, l, m, n, 0))
}

/// `Var Z^{(p)} = (mn)^{-2} E[tr((mnρ^Γ)^p)²] − (E Z^{(p)})²`, through `π̂`.
pub fn variance(l: u64, m: u64, n: u64, p: usize) -> Result<ExactScalar> {
    variance_with(TableCache::global(), l, m, n, p)
}

pub fn variance_with(cache: &TableCache, l: u64, m: u64, n: u64, p: usize) -> Result<ExactScalar> {
    check_dims(l, m, n)?;
    if p == 0 {
        return Ok(ExactScalar::zero());
    }
    let second = expected_mixed_moment_with(cache, l, m, n, &MixedMomentSpec::new(vec![p, p])?)?;
    let mn = ExactScalar::from_integer(BigInt::from(m * n));
    let mean = expected_moment_with(cache, l, m, n, p)?;
    Ok(second / (&mn * &mn) - &mean * &mean)
}

/// `(1/mn) E tr[(mn ρ^Γ − I)^p]` by binomial expansion.
pub fn centered_moment(l: u64, m: u64, n: u64, p: usize) -> Result<ExactScalar> {
    centered_moment_with(TableCache::global(), l, m, n, p)
}

pub fn centered_moment_with(cache: &TableCache, l: u64, m: u64, n: u64, p: usize) -> Result<ExactScalar> {
    check_dims(l, m, n)?;
    let mut total = ExactScalar::zero();
    for k in 0..=p {
        let term = ExactScalar::from_integer(binomial(p as u64, k as u64)) * expected_moment_with(cache, l, m, n, k)?;
        if (p - k).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Upper bound `2p⁵(2√a + √a·p/(mn))^p` on the normalized centered moment,
/// available only when `m ≥ n` and `2p¹² max{1, a} ≤ n²` with `a = mn/l`.
pub fn high_moment_bound(l: u64, m: u64, n: u64, p: usize) -> Option<f64> {
    if l == 0 || m == 0 || n == 0 || m < n {
        return None;
    }
    let a = (m * n) as f64 / l as f64;
    let pf = p as f64;
    if 2.0 * pf.powi(12) * a.max(1.0) > (n as f64).powi(2) {
        return None;
    }
    let root = a.sqrt();
    Some(2.0 * pf.powi(5) * (2.0 * root + root * pf / (m * n) as f64).powi(p as i32))
}

/// One stratum of the moment sum grouped by `(|α|, g⁽¹⁾(α), g⁽²⁾(α))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusStratum {
    pub length: usize,
    pub g1: usize,
    pub g2: usize,
    pub count: u64,
    /// `count · (mn/l)^{|α|} m^{-2g1} n^{-2g2}`, without the `F` prefactor.
    pub term: ExactScalar,
}

/// The moment sum regrouped by genus; `F(lmn, p) · Σ term = E Z^{(p)}`.
pub fn genus_expansion(l: u64, m: u64, n: u64, p: usize) -> Result<Vec<GenusStratum>> {
    check_dims(l, m, n)?;
    let (table, _) = TableCache::global().full_cycle_table(p)?;
    Ok(genus_expansion_from_table(&table, l, m, n))
}

pub fn genus_expansion_from_table(table: &ClassCountTable, l: u64, m: u64, n: u64) -> Vec<GenusStratum> {
    let p = table.p();
    let ratio = ExactScalar::new(BigInt::from(m * n), BigInt::from(l));
    let (mq, nq) = (ExactScalar::from_integer(m.into()), ExactScalar::from_integer(n.into()));
    table
        .entries()
        .iter()
        .map(|(&(a, b, c), &count)| {
            // |πα| = dist(α, π⁻¹) and |π⁻¹α| = dist(α, π).
            let g1 = (a + b + 1 - p) / 2;
            let g2 = (a + c + 1 - p) / 2;
            let term = ExactScalar::from_integer(count.into())
                * num_traits::pow(ratio.clone(), a)
                / (num_traits::pow(mq.clone(), 2 * g1) * num_traits::pow(nq.clone(), 2 * g2));
            GenusStratum { length: a, g1, g2, count, term }
        })
        .collect()
}
