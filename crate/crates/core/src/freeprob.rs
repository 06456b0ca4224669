//! Moment–cumulant calculus over noncrossing partitions and the limit laws
//! of the different dimension regimes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmoments::TableCache;
use crate::ncpartitions::{biane_t, enumerate_nc};
use crate::permgroup::Permutation;
use crate::scalar::{int, powi, to_f64, ExactScalar};

/// Free cumulants `k_1, k_2, …` (stored from index 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CumulantSequence {
    k: Vec<ExactScalar>,
}

impl CumulantSequence {
    /// `values[0]` is `k_1`.
    pub fn new(values: Vec<ExactScalar>) -> Self {
        Self { k: values }
    }

    pub fn get(&self, p: usize) -> Option<&ExactScalar> {
        p.checked_sub(1).and_then(|i| self.k.get(i))
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn values(&self) -> &[ExactScalar] {
        &self.k
    }
}

/// Moments `m_0, m_1, …`; `m_0 = 1` for probability measures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSequence {
    m: Vec<ExactScalar>,
}

impl MomentSequence {
    /// `values[0]` is `m_0`.
    pub fn new(values: Vec<ExactScalar>) -> Self {
        Self { m: values }
    }

    pub fn get(&self, p: usize) -> Option<&ExactScalar> {
        self.m.get(p)
    }

    /// Highest available order.
    pub fn order(&self) -> usize {
        self.m.len().saturating_sub(1)
    }

    pub fn values(&self) -> &[ExactScalar] {
        &self.m
    }
}

/// The named laws and limit regimes, with exact parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// Semicircle with the given mean and variance `σ²`.
    Semicircle { mean: ExactScalar, variance: ExactScalar },
    /// Free Poisson with rate `λ` and jump size `α`.
    FreePoisson { rate: ExactScalar, jump: ExactScalar },
    /// `X − Y` for free `X ~ ν_{x,1}`, `Y ~ ν_{y,1}`.
    FreeDifference { x: ExactScalar, y: ExactScalar },
    /// `l = 1`, `m/n → c`: rescaled law of `lm·ρ^Γ`.
    PureStateLimit { c: ExactScalar },
    /// `mn/l → a`: law of `mn·ρ^Γ`.
    Regime1 { a: ExactScalar },
    /// `l = l₀` fixed, `m/n → c`: law of `lm·ρ^Γ`.
    LFixed { l: ExactScalar, c: ExactScalar },
    /// `m = m₀` fixed, `l/n → b`: law of `ml·ρ^Γ`.
    MFixed { b: ExactScalar, m: ExactScalar },
}

impl DistributionSpec {
    fn validate(&self) -> Result<()> {
        match self {
            Self::Semicircle { variance, .. } if variance.is_negative() => {
                Err(Error::InvalidParameter("semicircle variance must be nonnegative".into()))
            }
            Self::FreePoisson { rate, .. } if rate.is_negative() => {
                Err(Error::InvalidParameter("free Poisson rate must be nonnegative".into()))
            }
            Self::Regime1 { a } if a.is_negative() => {
                Err(Error::InvalidParameter("a = mn/l must be nonnegative".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Semicircle { .. } => "semicircle",
            Self::FreePoisson { .. } => "free_poisson",
            Self::FreeDifference { .. } => "free_difference",
            Self::PureStateLimit { .. } => "pure_state_limit",
            Self::Regime1 { .. } => "regime1",
            Self::LFixed { .. } => "l_fixed",
            Self::MFixed { .. } => "m_fixed",
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Semicircle { mean, variance } => write!(f, "semicircle(M={mean}, σ²={variance})"),
            Self::FreePoisson { rate, jump } => write!(f, "free_poisson(λ={rate}, α={jump})"),
            Self::FreeDifference { x, y } => write!(f, "free_difference(x={x}, y={y})"),
            Self::PureStateLimit { c } => write!(f, "pure_state_limit(c={c})"),
            Self::Regime1 { a } => write!(f, "regime1(a={a})"),
            Self::LFixed { l, c } => write!(f, "l_fixed(l={l}, c={c})"),
            Self::MFixed { b, m } => write!(f, "m_fixed(b={b}, m={m})"),
        }
    }
}

/// Truncated power series product, keeping terms up to `z^order`.
fn series_mul(a: &[ExactScalar], b: &[ExactScalar], order: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `[z^{n-s}] M(z)^s` for all `1 ≤ s ≤ n`, given `m_0..m_{n-1}`.
///
/// Splitting a noncrossing partition at the block of its first point, of
/// size `s`, leaves `s` independent gaps; this coefficient counts them with
/// moment weights.
fn gap_weights(moments: &[ExactScalar], n: usize) -> Vec<ExactScalar> {
    let order = n.saturating_sub(1);
    let series: Vec<ExactScalar> = moments.iter().take(order + 1).cloned().collect();
    let mut power = vec![ExactScalar::one()];
    let mut out = vec![ExactScalar::zero(); n + 1];
    for s in 1..=n {
        power = series_mul(&power, &series, order);
        out[s] = power.get(n - s).cloned().unwrap_or_else(ExactScalar::zero);
    }
    out
}

/// `m_p = Σ_{τ ∈ NC(p)} Π_{b ∈ τ} k_{|b|}` for `p ≤ max_order`.
pub fn moments_from_cumulants(k: &CumulantSequence, max_order: usize) -> Result<MomentSequence> {
    if k.len() < max_order {
        return Err(Error::InsufficientCumulants { needed: max_order, available: k.len() });
    }
    let mut m = vec![ExactScalar::one()];
    for n in 1..=max_order {
        let w = gap_weights(&m, n);
        let mut total = ExactScalar::zero();
        for s in 1..=n {
            total += &k.k[s - 1] * &w[s];
        }
        m.push(total);
    }
    Ok(MomentSequence { m })
}

/// Inverse of [`moments_from_cumulants`]; the system is triangular.
pub fn cumulants_from_moments(m: &MomentSequence, max_order: usize) -> Result<CumulantSequence> {
    if m.order() < max_order {
        return Err(Error::InvalidParameter(format!(
            "need moments up to order {max_order}, have {}",
            m.order()
        )));
    }
    let mut k: Vec<ExactScalar> = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        // With m_0 = 1 the gap weight of the one-block term is 1.
        let w = gap_weights(&m.m, n);
        let mut rest = ExactScalar::zero();
        for s in 1..n {
            rest += &k[s - 1] * &w[s];
        }
        k.push((&m.m[n] - rest) / &w[n]);
    }
    Ok(CumulantSequence { k })
}

/// Free cumulants `k_1..k_P` of the named laws.
pub fn named_cumulants(spec: &DistributionSpec, max_order: usize) -> Result<CumulantSequence> {
    spec.validate()?;
    let k = (1..=max_order)
        .map(|r| -> Result<ExactScalar> {
            Ok(match spec {
                DistributionSpec::Semicircle { mean, variance } => match r {
                    1 => mean.clone(),
                    2 => variance.clone(),
                    _ => ExactScalar::zero(),
                },
                DistributionSpec::Regime1 { a } => match r {
                    1 => ExactScalar::one(),
                    2 => a.clone(),
                    _ => ExactScalar::zero(),
                },
                DistributionSpec::FreePoisson { rate, jump } => rate * powi(jump, r as i64),
                DistributionSpec::FreeDifference { x, y } => {
                    if r % 2 == 0 {
                        x + y
                    } else {
                        x - y
                    }
                }
                DistributionSpec::MFixed { b, m } => {
                    if r % 2 == 0 {
                        b * m
                    } else {
                        b.clone()
                    }
                }
                other => return Err(Error::UnsupportedDistribution(other.to_string())),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CumulantSequence { k })
}

/// The free-difference law whose cumulants equal those of `m_fixed(b, m)`:
/// rates `b(m ± 1)/2`.
pub fn m_fixed_as_free_difference(b: &ExactScalar, m: &ExactScalar) -> DistributionSpec {
    let half = ExactScalar::new(1.into(), 2.into());
    DistributionSpec::FreeDifference {
        x: b * (m + ExactScalar::one()) * &half,
        y: b * (m - ExactScalar::one()) * &half,
    }
}

/// The `p`-th limit moment of a regime or named law, in exact arithmetic.
pub fn limit_moment(spec: &DistributionSpec, p: usize) -> Result<ExactScalar> {
    spec.validate()?;
    if p == 0 {
        return Ok(ExactScalar::one());
    }
    match spec {
        DistributionSpec::Regime1 { a } => Ok(enumerate_nc(p, Some(&[1, 2]))
            .iter()
            .map(|t| powi(a, (p - t.block_count()) as i64))
            .sum()),
        DistributionSpec::MFixed { b, m } => Ok(enumerate_nc(p, None)
            .iter()
            .map(|t| powi(b, t.block_count() as i64) * powi(m, t.even_block_count() as i64))
            .sum()),
        DistributionSpec::LFixed { l, c } => l_fixed_moment(l, c, p),
        DistributionSpec::PureStateLimit { c } => l_fixed_moment(&ExactScalar::one(), c, p),
        DistributionSpec::Semicircle { .. }
        | DistributionSpec::FreePoisson { .. }
        | DistributionSpec::FreeDifference { .. } => {
            let k = named_cumulants(spec, p)?;
            Ok(moments_from_cumulants(&k, p)?.m.pop().expect("order p"))
        }
    }
}

/// Sum of `l^{#α} c^{#(πα)-1}` over the geodesic `π⁻¹ → α → π` (zero for
/// odd `p`). Left multiplication by `π` maps this geodesic onto the interval
/// `[id, π²]`, and `π²` splits into the cycles on even and odd positions, so
/// `πα = t(τ₁) ⊕ t(τ₂)` with `τ₁, τ₂ ∈ NC(p/2)`.
pub fn l_fixed_moment(l: &ExactScalar, c: &ExactScalar, p: usize) -> Result<ExactScalar> {
    if p % 2 == 1 {
        return Ok(ExactScalar::zero());
    }
    if p == 0 {
        return Ok(ExactScalar::one());
    }
    let q = p / 2;
    let halves: Vec<(Permutation, usize)> =
        enumerate_nc(q, None).iter().map(|t| (biane_t(t), t.block_count())).collect();
    // (#α, #τ₁ + #τ₂) → count
    let mut classes: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut alpha = vec![0usize; p];
    for (t1, b1) in &halves {
        for (t2, b2) in &halves {
            for i in 0..q {
                alpha[2 * i] = (2 * t1.image(i) + p - 1) % p;
                alpha[2 * i + 1] = 2 * t2.image(i);
            }
            *classes.entry((cycle_count(&alpha), b1 + b2)).or_insert(0) += 1;
        }
    }
    Ok(classes
        .into_iter()
        .map(|((cycles, blocks), count)| int(count as i64) * powi(l, cycles as i64) * powi(c, blocks as i64 - 1))
        .sum())
}

fn cycle_count(images: &[usize]) -> usize {
    let mut seen = vec![false; images.len()];
    let mut cycles = 0;
    for start in 0..images.len() {
        if !seen[start] {
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = images[x];
            }
        }
    }
    cycles
}

/// Same sum read off the class-count table: `α` is on the geodesic iff
/// `|πα| + |π⁻¹α| = |π²|`.
pub fn l_fixed_moment_from_table(l: &ExactScalar, c: &ExactScalar, p: usize, cache: &TableCache) -> Result<ExactScalar> {
    if p % 2 == 1 {
        return Ok(ExactScalar::zero());
    }
    if p == 0 {
        return Ok(ExactScalar::one());
    }
    let (table, _) = cache.full_cycle_table(p)?;
    let pi_squared_length = p - 2;
    let mut total = ExactScalar::zero();
    for (&(a, b, c_len), &count) in table.entries() {
        if b + c_len != pi_squared_length {
            continue;
        }
        total += int(count as i64) * powi(l, (p - a) as i64) * powi(c, (p - b - 1) as i64);
    }
    Ok(total)
}

/// An atom `(location, mass)` of a limit law.
pub type Atom = (f64, f64);

/// Regime 1 is the semicircle of mean 1 and variance `a`.
fn as_semicircle(spec: &DistributionSpec) -> Option<DistributionSpec> {
    match spec {
        DistributionSpec::Regime1 { a } => Some(DistributionSpec::Semicircle { mean: int(1), variance: a.clone() }),
        _ => None,
    }
}

/// Density of the absolutely continuous part of a semicircle (including regime 1) or free Poisson law.
pub fn density(spec: &DistributionSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    if let Some(sc) = as_semicircle(spec) {
        return density(&sc, x);
    }
    match spec {
        DistributionSpec::Semicircle { mean, variance } => {
            let (mean, var) = (to_f64(mean), to_f64(variance));
            let d = x - mean;
            let inside = 4.0 * var - d * d;
            if var <= 0.0 || inside <= 0.0 {
                return Ok(0.0);
            }
            Ok(inside.sqrt() / (2.0 * std::f64::consts::PI * var))
        }
        DistributionSpec::FreePoisson { rate, jump } => {
            let (lambda, alpha) = (to_f64(rate), to_f64(jump));
            if alpha == 0.0 || x == 0.0 {
                return Ok(0.0);
            }
            let d = x - alpha * (1.0 + lambda);
            let inside = 4.0 * lambda * alpha * alpha - d * d;
            if inside <= 0.0 {
                return Ok(0.0);
            }
            Ok(inside.sqrt() / (2.0 * std::f64::consts::PI * (alpha * x).abs()))
        }
        other => Err(Error::UnsupportedDistribution(other.to_string())),
    }
}

/// Support interval of the continuous part.
pub fn support(spec: &DistributionSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    if let Some(sc) = as_semicircle(spec) {
        return support(&sc);
    }
    match spec {
        DistributionSpec::Semicircle { mean, variance } => {
            let (mean, sigma) = (to_f64(mean), to_f64(variance).sqrt());
            Ok((mean - 2.0 * sigma, mean + 2.0 * sigma))
        }
        DistributionSpec::FreePoisson { rate, jump } => {
            let (lambda, alpha) = (to_f64(rate), to_f64(jump));
            let lo = alpha * (1.0 - lambda.sqrt()).powi(2);
            let hi = alpha * (1.0 + lambda.sqrt()).powi(2);
            Ok((lo.min(hi), lo.max(hi)))
        }
        other => Err(Error::UnsupportedDistribution(other.to_string())),
    }
}

/// Point masses of the law: `(1 − λ)δ_0` for free Poisson with `λ < 1`.
pub fn atoms(spec: &DistributionSpec) -> Result<Vec<Atom>> {
    spec.validate()?;
    if let Some(sc) = as_semicircle(spec) {
        return atoms(&sc);
    }
    match spec {
        DistributionSpec::Semicircle { variance, .. } if !variance.is_zero() => Ok(Vec::new()),
        DistributionSpec::Semicircle { mean, .. } => Ok(vec![(to_f64(mean), 1.0)]),
        DistributionSpec::FreePoisson { rate, .. } => {
            let lambda = to_f64(rate);
            Ok(if lambda < 1.0 { vec![(0.0, 1.0 - lambda)] } else { Vec::new() })
        }
        other => Err(Error::UnsupportedDistribution(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{catalan, ratio};
    use proptest::prelude::*;

    fn ks(values: &[i64]) -> CumulantSequence {
        CumulantSequence::new(values.iter().map(|&v| int(v)).collect())
    }

    /// Direct sum over `NC(p)`, independent of the gap recursion.
    fn moment_by_enumeration(k: &CumulantSequence, p: usize) -> ExactScalar {
        enumerate_nc(p, None)
            .iter()
            .map(|t| t.block_sizes().map(|s| k.get(s).unwrap().clone()).product::<ExactScalar>())
            .sum()
    }

    #[test]
    fn low_order_moment_formulas() {
        let (k1, k2, k3, k4) = (int(2), int(3), int(5), int(7));
        let k = CumulantSequence::new(vec![k1.clone(), k2.clone(), k3.clone(), k4.clone()]);
        let m = moments_from_cumulants(&k, 4).unwrap();
        assert_eq!(m.get(2).unwrap(), &(&k2 + &k1 * &k1));
        let m4 = &k4
            + int(4) * &k1 * &k3
            + int(2) * &k2 * &k2
            + int(6) * &k1 * &k1 * &k2
            + &k1 * &k1 * &k1 * &k1;
        assert_eq!(m.get(4).unwrap(), &m4);
    }

    #[test]
    fn recursion_matches_enumeration() {
        let k = ks(&[1, -2, 3, 5, -1, 4, 2, 6, -3]);
        let m = moments_from_cumulants(&k, 9).unwrap();
        for p in 0..=9 {
            assert_eq!(m.get(p).unwrap(), &moment_by_enumeration(&k, p), "p = {p}");
        }
    }

    #[test]
    fn zero_and_point_mass() {
        let m = moments_from_cumulants(&ks(&[0; 6]), 6).unwrap();
        assert!(m.values()[1..].iter().all(Zero::is_zero));
        let ones = MomentSequence::new(vec![int(1); 8]);
        let k = cumulants_from_moments(&ones, 7).unwrap();
        assert_eq!(k.get(1).unwrap(), &int(1));
        assert!(k.values()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn catalan_moments_have_unit_cumulants() {
        let m = MomentSequence::new((0..=10).map(|p| ExactScalar::from_integer(catalan(p))).collect());
        let k = cumulants_from_moments(&m, 10).unwrap();
        assert!(k.values().iter().all(|x| x == &int(1)));
    }

    #[test]
    fn insufficient_cumulants() {
        assert!(matches!(
            moments_from_cumulants(&ks(&[1, 2]), 3),
            Err(Error::InsufficientCumulants { needed: 3, available: 2 })
        ));
    }

    #[test]
    fn limit_moment_examples() {
        let a = ratio(3, 7);
        let r1 = limit_moment(&DistributionSpec::Regime1 { a: a.clone() }, 4).unwrap();
        assert_eq!(r1, int(1) + int(6) * &a + int(2) * &a * &a);

        let (l, c) = (int(3), ratio(2, 5));
        let lf = DistributionSpec::LFixed { l: l.clone(), c: c.clone() };
        assert_eq!(limit_moment(&lf, 2).unwrap(), &l * &c);
        assert_eq!(limit_moment(&lf, 3).unwrap(), int(0));

        let lf1 = DistributionSpec::LFixed { l: l.clone(), c: int(1) };
        assert_eq!(limit_moment(&lf1, 4).unwrap(), int(2) * &l + int(2) * &l * &l);

        let (b, m0) = (ratio(1, 2), int(3));
        let mf = DistributionSpec::MFixed { b: b.clone(), m: m0.clone() };
        assert_eq!(limit_moment(&mf, 2).unwrap(), &b * &b + &b * &m0);

        for spec in [r1_spec(), lf, mf, DistributionSpec::PureStateLimit { c: int(2) }] {
            assert_eq!(limit_moment(&spec, 0).unwrap(), int(1));
        }
    }

    fn r1_spec() -> DistributionSpec {
        DistributionSpec::Regime1 { a: int(1) }
    }

    #[test]
    fn named_cumulant_examples() {
        let fp = named_cumulants(&DistributionSpec::FreePoisson { rate: int(1), jump: int(1) }, 6).unwrap();
        assert!(fp.values().iter().all(|x| x == &int(1)));
        let sc = named_cumulants(&DistributionSpec::Semicircle { mean: int(1), variance: ratio(1, 3) }, 4).unwrap();
        assert_eq!(sc.values(), &[int(1), ratio(1, 3), int(0), int(0)]);
        let (b, m) = (int(2), int(3));
        let direct = named_cumulants(&DistributionSpec::MFixed { b: b.clone(), m: m.clone() }, 8).unwrap();
        let diff = named_cumulants(&m_fixed_as_free_difference(&b, &m), 8).unwrap();
        assert_eq!(direct, diff);
        assert!(named_cumulants(&DistributionSpec::PureStateLimit { c: int(1) }, 3).is_err());
    }

    #[test]
    fn regime_limits_match_cumulant_routes() {
        for a in [int(0), ratio(1, 2), int(1), int(3)] {
            let spec = DistributionSpec::Regime1 { a: a.clone() };
            let sc = DistributionSpec::Semicircle { mean: int(1), variance: a.clone() };
            let m = moments_from_cumulants(&named_cumulants(&sc, 10).unwrap(), 10).unwrap();
            for p in 0..=10 {
                assert_eq!(&limit_moment(&spec, p).unwrap(), m.get(p).unwrap());
            }
        }
    }

    #[test]
    fn pure_state_even_moments_factor() {
        for c in [int(1), int(2), ratio(1, 3)] {
            let spec = DistributionSpec::PureStateLimit { c: c.clone() };
            for q in 0..=4usize {
                let nc_sum: ExactScalar =
                    enumerate_nc(q, None).iter().map(|t| powi(&c, t.block_count() as i64)).sum();
                let lhs = if q == 0 { int(1) } else { &c * limit_moment(&spec, 2 * q).unwrap() };
                let rhs = if q == 0 { int(1) } else { &nc_sum * &nc_sum };
                assert_eq!(lhs, rhs, "c = {c}, q = {q}");
            }
        }
    }

    #[test]
    fn l_fixed_routes_agree() {
        let cache = TableCache::in_memory();
        for (l, c) in [(int(1), int(1)), (int(3), ratio(2, 5)), (ratio(1, 2), int(4))] {
            for p in 0..=10 {
                assert_eq!(
                    l_fixed_moment(&l, &c, p).unwrap(),
                    l_fixed_moment_from_table(&l, &c, p, &cache).unwrap(),
                    "l={l} c={c} p={p}"
                );
            }
        }
    }

    #[test]
    fn densities() {
        let sc = DistributionSpec::Semicircle { mean: int(1), variance: ratio(1, 4) };
        assert_eq!(support(&sc).unwrap(), (0.0, 2.0));
        assert_eq!(density(&sc, -0.1).unwrap(), 0.0);
        assert_eq!(density(&sc, 2.1).unwrap(), 0.0);
        assert!(density(&sc, 1.0).unwrap() > 0.0);

        let fp = DistributionSpec::FreePoisson { rate: ratio(1, 2), jump: int(1) };
        assert_eq!(atoms(&fp).unwrap(), vec![(0.0, 0.5)]);
        assert!(atoms(&DistributionSpec::FreePoisson { rate: int(2), jump: int(1) }).unwrap().is_empty());
        let r1 = DistributionSpec::Regime1 { a: ratio(1, 4) };
        assert_eq!(support(&r1).unwrap(), (0.0, 2.0));
        assert_eq!(density(&r1, 0.7).unwrap(), density(&sc, 0.7).unwrap());
        assert!(density(&DistributionSpec::FreeDifference { x: int(2), y: int(1) }, 0.0).is_err());
    }

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            let x = lo + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn semicircle_second_moment_by_quadrature() {
        let sc = DistributionSpec::Semicircle { mean: int(0), variance: int(1) };
        // Substitute x = 2 sin θ to remove the square-root endpoint singularity.
        let integrand = |theta: f64| {
            let x = 2.0 * theta.sin();
            x * x * density(&sc, x).unwrap() * 2.0 * theta.cos()
        };
        let half = std::f64::consts::FRAC_PI_2;
        let m2 = simpson(integrand, -half, half, 2000);
        assert!((m2 - 1.0).abs() < 1e-6, "m2 = {m2}");
    }

    #[test]
    fn free_poisson_mass_and_mean_by_quadrature() {
        // λ = 1/2: continuous part carries mass 1/2, total mean λα = 1/2.
        let fp = DistributionSpec::FreePoisson { rate: ratio(1, 2), jump: int(1) };
        let (lo, hi) = support(&fp).unwrap();
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        let fp_ref = &fp;
        let f = |power: i32| {
            move |theta: f64| {
                let x = mid + rad * theta.sin();
                x.powi(power) * density(fp_ref, x).unwrap() * rad * theta.cos()
            }
        };
        let half = std::f64::consts::FRAC_PI_2;
        let mass = simpson(f(0), -half, half, 4000) + atoms(&fp).unwrap()[0].1;
        let mean = simpson(f(1), -half, half, 4000);
        assert!((mass - 1.0).abs() < 1e-6, "mass = {mass}");
        assert!((mean - 0.5).abs() < 1e-6, "mean = {mean}");
    }

    proptest! {
        #[test]
        fn transforms_are_mutually_inverse(values in prop::collection::vec((-20i64..20, 1i64..6), 10)) {
            let k = CumulantSequence::new(values.iter().map(|&(n, d)| ratio(n, d)).collect());
            let m = moments_from_cumulants(&k, 10).unwrap();
            let back = cumulants_from_moments(&m, 10).unwrap();
            prop_assert_eq!(back, k);
        }
    }
}
