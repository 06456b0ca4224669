//! Meanders as pairs of noncrossing pair partitions, their loop counts, and
//! meander polynomials.
//!
//! Bridges are the points `1, …, 2q` on the river. The upper and lower arc
//! systems are elements of `NC_2(2q)`; a configuration's loop count is
//! computed both by walking the loops and through the permutation
//! `π⁻¹(τ₁ ⊕ τ₂)` on `[2q]`, where `τ₁, τ₂ ∈ NC(q)` are recovered from the arc
//! systems by undoing the fattening map.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpartitions::{biane_inverse, biane_t, enumerate_nc2, NoncrossingPartition, SetPartition};
use crate::permgroup::Permutation;
use crate::scalar::{catalan, powi, ExactScalar};

/// Default largest order for exhaustive tallies (`Cat_8² ≈ 2·10⁶` pairs).
pub const DEFAULT_CEILING: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanderConfig {
    q: usize,
    upper: NoncrossingPartition,
    lower: NoncrossingPartition,
}

impl MeanderConfig {
    pub fn new(upper: NoncrossingPartition, lower: NoncrossingPartition) -> Result<Self> {
        if upper.degree() != lower.degree() || !upper.degree().is_multiple_of(2) {
            return Err(Error::MalformedPairPartition(format!(
                "degrees {} and {} must agree and be even",
                upper.degree(),
                lower.degree()
            )));
        }
        for side in [&upper, &lower] {
            if side.block_sizes().any(|s| s != 2) {
                return Err(Error::MalformedPairPartition(format!("{side} has a block of size other than 2")));
            }
        }
        Ok(Self { q: upper.degree() / 2, upper, lower })
    }

    /// From 1-based pair lists.
    pub fn from_pairs(q: usize, upper: &[&[usize]], lower: &[&[usize]]) -> Result<Self> {
        let side = |pairs: &[&[usize]]| -> Result<NoncrossingPartition> {
            let part = SetPartition::from_one_based(2 * q, pairs)
                .map_err(|e| Error::MalformedPairPartition(e.to_string()))?;
            NoncrossingPartition::try_from(part).map_err(|e| Error::MalformedPairPartition(e.to_string()))
        };
        Self::new(side(upper)?, side(lower)?)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn upper(&self) -> &NoncrossingPartition {
        &self.upper
    }

    pub fn lower(&self) -> &NoncrossingPartition {
        &self.lower
    }

    /// Both arc systems reflected by `i ↦ 2q + 1 − i`.
    pub fn reflected(&self) -> Self {
        let n = 2 * self.q;
        let flip = |t: &NoncrossingPartition| {
            let blocks = t.blocks().iter().map(|b| b.iter().map(|&x| n - 1 - x).collect()).collect();
            NoncrossingPartition::try_from(SetPartition::new(n, blocks).expect("valid")).expect("noncrossing")
        };
        Self { q: self.q, upper: flip(&self.upper), lower: flip(&self.lower) }
    }

    /// Number of closed loops.
    pub fn components(&self) -> usize {
        let by_walk = components_by_tracing(self);
        debug_assert_eq!(by_walk, components_by_permutation(self));
        by_walk
    }
}

fn partner_table(t: &SetPartition) -> Vec<usize> {
    let mut partner = vec![0; t.degree()];
    for b in t.blocks() {
        partner[b[0]] = b[1];
        partner[b[1]] = b[0];
    }
    partner
}

/// Walks each loop: upper arc, then lower arc, until it returns.
pub fn components_by_tracing(cfg: &MeanderConfig) -> usize {
    let n = 2 * cfg.q;
    let up = partner_table(&cfg.upper);
    let down = partner_table(&cfg.lower);
    let mut seen = vec![false; n];
    let mut loops = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut x = start;
        loop {
            seen[x] = true;
            let y = up[x];
            seen[y] = true;
            x = down[y];
            if x == start {
                break;
            }
        }
    }
    loops
}

/// Fattening `NC(q) → NC_2(2q)`: each point `i` becomes `i₋ = 2i−1` and
/// `i₊ = 2i`, and `i₊` is joined to `j₋` whenever the cyclic successor of `i`
/// in its block is `j`.
pub fn fatten(t: &NoncrossingPartition) -> NoncrossingPartition {
    let q = t.degree();
    let succ = biane_t(t);
    let blocks = (0..q).map(|i| vec![2 * i + 1, 2 * succ.image(i)]).collect();
    NoncrossingPartition::try_from(SetPartition::new(2 * q, blocks).expect("perfect matching"))
        .expect("fattening is noncrossing")
}

/// Inverse of [`fatten`].
pub fn unfatten(sigma: &NoncrossingPartition) -> Result<NoncrossingPartition> {
    let n = sigma.degree();
    if !n.is_multiple_of(2) || sigma.block_sizes().any(|s| s != 2) {
        return Err(Error::MalformedPairPartition(sigma.to_string()));
    }
    let q = n / 2;
    let mut images = vec![usize::MAX; q];
    for b in sigma.blocks() {
        let (plus, minus) = if b[0] % 2 == 1 { (b[0], b[1]) } else { (b[1], b[0]) };
        if plus % 2 != 1 || minus % 2 != 0 {
            return Err(Error::MalformedPairPartition(format!("{sigma}: arc joins equal parities")));
        }
        images[plus / 2] = minus / 2;
    }
    let succ = Permutation::from_images(images).map_err(|e| Error::MalformedPairPartition(e.to_string()))?;
    biane_inverse(&succ)
}

/// Rotates an arc system one bridge to the left (`i ↦ i − 1 mod 2q`).
fn rotate_left(t: &NoncrossingPartition) -> NoncrossingPartition {
    let n = t.degree();
    let blocks = t.blocks().iter().map(|b| b.iter().map(|&x| (x + n - 1) % n).collect()).collect();
    NoncrossingPartition::try_from(SetPartition::new(n, blocks).expect("valid")).expect("rotation keeps noncrossing")
}

/// `#[π⁻¹(τ₁ ⊕ τ₂)]` with `τ₁` on the odd and `τ₂` on the even positions.
///
/// The lower arcs are read one bridge to the left before unfattening, which
/// glues `1₋` to `2q₊` and closes the strip into a loop.
pub fn components_by_permutation(cfg: &MeanderConfig) -> usize {
    let q = cfg.q;
    let t1 = biane_t(&unfatten(&cfg.upper).expect("valid upper arcs"));
    let t2 = biane_t(&unfatten(&rotate_left(&cfg.lower)).expect("valid lower arcs"));
    let n = 2 * q;
    let mut images = vec![0; n];
    for i in 0..q {
        // 0-based 2i is the odd 1-based position 2i+1.
        images[2 * i] = (2 * t1.image(i) + n - 1) % n;
        images[2 * i + 1] = 2 * t2.image(i);
    }
    Permutation::from_images(images).expect("bijection").cycle_count()
}

/// `M_q^{(k)}` for `k = 1..q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanderTally {
    pub order: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl MeanderTally {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `Σ_k x^k M_q^{(k)}`.
    pub fn evaluate(&self, x: &ExactScalar) -> ExactScalar {
        self.counts
            .iter()
            .map(|(&k, &c)| ExactScalar::from_integer(BigInt::from(c)) * powi(x, k as i64))
            .fold(ExactScalar::zero(), |a, b| a + b)
    }
}

pub fn meander_tally(q: usize) -> Result<MeanderTally> {
    meander_tally_with_ceiling(q, DEFAULT_CEILING)
}

pub fn meander_tally_with_ceiling(q: usize, ceiling: usize) -> Result<MeanderTally> {
    if q == 0 {
        return Err(Error::InvalidParameter("meander order must be at least 1".into()));
    }
    if q > ceiling {
        return Err(Error::CeilingExceeded { what: "meander order", requested: q, ceiling });
    }
    let arcs: Vec<Vec<usize>> = enumerate_nc2(q).iter().map(|t| partner_table(t)).collect();
    let n = 2 * q;
    let per_upper: Vec<Vec<u64>> = arcs
        .par_iter()
        .map(|up| {
            let mut local = vec![0u64; q + 1];
            let mut seen = vec![false; n];
            for down in &arcs {
                seen.iter_mut().for_each(|s| *s = false);
                let mut loops = 0;
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    loops += 1;
                    let mut x = start;
                    loop {
                        seen[x] = true;
                        let y = up[x];
                        seen[y] = true;
                        x = down[y];
                        if x == start {
                            break;
                        }
                    }
                }
                local[loops] += 1;
            }
            local
        })
        .collect();
    let mut counts = BTreeMap::new();
    for local in per_upper {
        for (k, c) in local.into_iter().enumerate() {
            if c > 0 {
                *counts.entry(k).or_insert(0) += c;
            }
        }
    }
    let tally = MeanderTally { order: q, counts };
    debug_assert_eq!(BigInt::from(tally.total()), catalan(q as u64) * catalan(q as u64));
    Ok(tally)
}

/// `M_q(x) = Σ_k x^k M_q^{(k)}`.
pub fn meander_polynomial(q: usize, x: &ExactScalar) -> Result<ExactScalar> {
    Ok(meander_tally(q)?.evaluate(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpartitions::enumerate_nc;
    use crate::scalar::int;
    use num_traits::ToPrimitive;

    fn all_configs(q: usize) -> Vec<MeanderConfig> {
        let sides = enumerate_nc2(q);
        let mut out = Vec::new();
        for u in &sides {
            for l in &sides {
                out.push(MeanderConfig::new(u.clone(), l.clone()).unwrap());
            }
        }
        out
    }

    #[test]
    fn figure_configuration_has_two_loops() {
        let cfg = MeanderConfig::from_pairs(
            4,
            &[&[1, 2], &[3, 4], &[5, 8], &[6, 7]],
            &[&[1, 6], &[2, 5], &[3, 4], &[7, 8]],
        )
        .unwrap();
        assert_eq!(components_by_tracing(&cfg), 2);
        assert_eq!(components_by_permutation(&cfg), 2);
    }

    #[test]
    fn small_examples() {
        let one = MeanderConfig::from_pairs(2, &[&[1, 2], &[3, 4]], &[&[1, 4], &[2, 3]]).unwrap();
        assert_eq!(one.components(), 1);
        for q in 1..=5 {
            for t in enumerate_nc2(q) {
                let cfg = MeanderConfig::new(t.clone(), t).unwrap();
                assert_eq!(cfg.components(), q);
            }
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(MeanderConfig::from_pairs(2, &[&[1, 3], &[2, 4]], &[&[1, 2], &[3, 4]]).is_err());
        assert!(MeanderConfig::from_pairs(2, &[&[1, 2, 3, 4]], &[&[1, 2], &[3, 4]]).is_err());
        let a = enumerate_nc2(1).remove(0);
        let b = enumerate_nc2(2).remove(0);
        assert!(MeanderConfig::new(a, b).is_err());
    }

    #[test]
    fn tally_examples() {
        let t1 = meander_tally(1).unwrap();
        assert_eq!(t1.counts, [(1, 1)].into_iter().collect());
        let t2 = meander_tally(2).unwrap();
        assert_eq!(t2.counts, [(1, 2), (2, 2)].into_iter().collect());
        let t3 = meander_tally(3).unwrap();
        assert_eq!(t3.counts, [(1, 8), (2, 12), (3, 5)].into_iter().collect());
        assert!(meander_tally(9).is_err());
        assert!(meander_tally(0).is_err());
    }

    #[test]
    fn polynomial_examples() {
        let x = int(7);
        assert_eq!(meander_polynomial(1, &x).unwrap(), x.clone());
        assert_eq!(meander_polynomial(2, &x).unwrap(), int(2) * &x + int(2) * &x * &x);
        assert_eq!(meander_polynomial(3, &int(1)).unwrap(), int(25));
    }

    #[test]
    fn fattening_is_a_bijection() {
        for q in 0..=7 {
            let ncs = enumerate_nc(q, None);
            let mut images: Vec<_> = ncs.iter().map(fatten).collect();
            for (t, s) in ncs.iter().zip(&images) {
                assert_eq!(&unfatten(s).unwrap(), t);
            }
            images.sort();
            images.dedup();
            assert_eq!(images, enumerate_nc2(q));
        }
        // {1,3,4}{2} ∈ NC(4): 1₊–3₋, 3₊–4₋, 4₊–1₋, 2₊–2₋.
        let t = NoncrossingPartition::try_from(SetPartition::from_one_based(4, &[&[1, 3, 4], &[2]]).unwrap()).unwrap();
        let want = SetPartition::from_one_based(8, &[&[2, 5], &[6, 7], &[8, 1], &[4, 3]]).unwrap();
        assert_eq!(fatten(&t).into_inner(), want);
    }

    #[test]
    fn loop_count_routes_agree_exhaustively() {
        for q in 1..=6 {
            for cfg in all_configs(q) {
                let walk = components_by_tracing(&cfg);
                assert_eq!(walk, components_by_permutation(&cfg), "{cfg:?}");
                assert_eq!(walk, components_by_tracing(&cfg.reflected()));
            }
        }
    }

    #[test]
    fn tally_invariants() {
        for q in 1..=6 {
            let t = meander_tally(q).unwrap();
            let cat = catalan(q as u64).to_u64().unwrap();
            assert_eq!(t.total(), cat * cat);
            assert_eq!(t.get(q), cat);
            let connected = all_configs(q).iter().filter(|c| components_by_tracing(c) == 1).count() as u64;
            assert_eq!(t.get(1), connected);
        }
    }
}
