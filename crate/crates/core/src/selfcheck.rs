//! Cross-route consistency checks, runnable from the command line.
//!
//! Each check compares two independent computations of the same quantity at
//! small sizes and reports a single pass/fail line.

use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactmoments::{expected_moment_with, ClassCountTable, TableCache};
use crate::freeprob::{
    cumulants_from_moments, l_fixed_moment, l_fixed_moment_from_table, limit_moment, moments_from_cumulants, CumulantSequence, DistributionSpec,
};
use crate::harerzagier::{enumerate_involutions_by_genus, hz_epsilon, identity1_check};
use crate::meanders::{components_by_permutation, components_by_tracing, meander_tally, MeanderConfig};
use crate::ncpartitions::{biane_inverse, biane_t, enumerate_nc, enumerate_nc2};
use crate::permgroup::{all_permutations, full_cycle, on_geodesic, Permutation};
use crate::scalar::{catalan, int, powi, ratio, ExactScalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

type Check = fn(&TableCache) -> Result<std::result::Result<(), String>>;

const CHECKS: &[(&str, Check)] = &[
    ("nc_counts_are_catalan", nc_counts),
    ("biane_map_hits_geodesic", biane_geodesic),
    ("class_table_matches_naive_sum", table_vs_naive),
    ("hand_moments", hand_moments),
    ("moment_cumulant_roundtrip", cumulant_roundtrip),
    ("meander_loop_routes_agree", meander_routes),
    ("meander_equals_l_fixed_limit", meander_vs_limit),
    ("l_fixed_geodesic_equals_table", l_fixed_routes),
    ("pure_state_square_identity", pure_state_square),
    ("m_fixed_equals_cumulant_route", m_fixed_route),
    ("harer_zagier_matches_enumeration", hz_vs_enumeration),
    ("identity1_grid", identity1_grid),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check; errors inside a check count as failures.
pub fn run_all(cache: &TableCache) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(cache) {
                Ok(Ok(())) => (true, String::new()),
                Ok(Err(why)) => (false, why),
                Err(e) => (false, e.to_string()),
            };
            CheckOutcome { name: (*name).to_string(), passed, detail, elapsed_ms: start.elapsed().as_millis() }
        })
        .collect()
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn nc_counts(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for p in 0..=10 {
        let got = enumerate_nc(p, None).len();
        if BigInt::from(got) != catalan(p as u64) {
            return Ok(Err(format!("|NC({p})| = {got}")));
        }
    }
    Ok(Ok(()))
}

fn biane_geodesic(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for p in 1..=6 {
        let id = Permutation::identity(p);
        let pi = full_cycle(p)?;
        let mut images: Vec<Permutation> = enumerate_nc(p, None).iter().map(biane_t).collect();
        images.sort_by(|a, b| a.images().cmp(b.images()));
        let mut geo = Vec::new();
        for a in all_permutations(p) {
            if on_geodesic(&id, &a, &pi)? {
                geo.push(a);
            }
        }
        if images != geo {
            return Ok(Err(format!("geodesic set differs at p={p}")));
        }
        for a in &geo {
            if biane_t(&biane_inverse(a)?) != *a {
                return Ok(Err(format!("inverse fails at {a}")));
            }
        }
    }
    Ok(Ok(()))
}

fn table_vs_naive(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for p in 1..=6 {
        let fast = ClassCountTable::build(p, None)?;
        let slow = ClassCountTable::count_range(&[p], crate::permgroup::EnumerationRange::full(p)?)?;
        if fast != slow {
            return Ok(Err(format!("tables differ at p={p}")));
        }
    }
    Ok(Ok(()))
}

fn hand_moments(cache: &TableCache) -> Result<std::result::Result<(), String>> {
    let two = expected_moment_with(cache, 2, 2, 2, 2)?;
    let three = expected_moment_with(cache, 2, 2, 2, 3)?;
    Ok(ensure(two == ratio(8, 3) && three == ratio(32, 5), || format!("got {two} and {three}")))
}

fn cumulant_roundtrip(_: &TableCache) -> Result<std::result::Result<(), String>> {
    let k = CumulantSequence::new((1..=9).map(|r| ratio(r * r - 3, r + 1)).collect());
    let m = moments_from_cumulants(&k, 9)?;
    let back = cumulants_from_moments(&m, 9)?;
    Ok(ensure(back == k, || "roundtrip changed the cumulants".into()))
}

fn meander_routes(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for q in 1..=5 {
        let sides = enumerate_nc2(q);
        for u in &sides {
            for l in &sides {
                let cfg = MeanderConfig::new(u.clone(), l.clone())?;
                if components_by_tracing(&cfg) != components_by_permutation(&cfg) {
                    return Ok(Err(format!("routes disagree on {cfg:?}")));
                }
            }
        }
    }
    Ok(Ok(()))
}

fn meander_vs_limit(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for q in 1..=4 {
        let tally = meander_tally(q)?;
        for l in 1..=3 {
            let l = int(l);
            let spec = DistributionSpec::LFixed { l: l.clone(), c: int(1) };
            let lim = limit_moment(&spec, 2 * q)?;
            if lim != tally.evaluate(&l) {
                return Ok(Err(format!("q={q}, l={l}: {lim} vs {}", tally.evaluate(&l))));
            }
        }
    }
    Ok(Ok(()))
}

fn l_fixed_routes(cache: &TableCache) -> Result<std::result::Result<(), String>> {
    for p in 0..=8 {
        for (l, c) in [(int(2), int(1)), (ratio(1, 3), int(5))] {
            let direct = l_fixed_moment(&l, &c, p)?;
            let via_table = l_fixed_moment_from_table(&l, &c, p, cache)?;
            if direct != via_table {
                return Ok(Err(format!("p={p}, l={l}, c={c}: {direct} vs {via_table}")));
            }
        }
    }
    Ok(Ok(()))
}

fn pure_state_square(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for c in [int(1), int(2), ratio(1, 3)] {
        let spec = DistributionSpec::PureStateLimit { c: c.clone() };
        for q in 1..=4 {
            let lhs = &c * limit_moment(&spec, 2 * q)?;
            let s: ExactScalar = enumerate_nc(q, None).iter().map(|t| powi(&c, t.block_count() as i64)).sum();
            if lhs != &s * &s {
                return Ok(Err(format!("c={c}, q={q}")));
            }
            if limit_moment(&spec, 2 * q - 1)? != int(0) {
                return Ok(Err(format!("odd moment nonzero at c={c}, p={}", 2 * q - 1)));
            }
        }
    }
    Ok(Ok(()))
}

fn m_fixed_route(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for (b, m0) in [(int(1), int(1)), (int(2), int(3)), (ratio(1, 2), int(4))] {
        let k = CumulantSequence::new(
            (1..=8).map(|r| if r % 2 == 0 { &b * &m0 } else { b.clone() }).collect(),
        );
        let via_k = moments_from_cumulants(&k, 8)?;
        let spec = DistributionSpec::MFixed { b: b.clone(), m: m0.clone() };
        for p in 1..=8 {
            if Some(&limit_moment(&spec, p)?) != via_k.get(p) {
                return Ok(Err(format!("b={b}, m={m0}, p={p}")));
            }
        }
    }
    Ok(Ok(()))
}

fn hz_vs_enumeration(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for n in 0..=6 {
        let e = enumerate_involutions_by_genus(n)?;
        for g in 0..=n {
            if BigInt::from(e.get(&g).copied().unwrap_or(0)) != hz_epsilon(g, n) {
                return Ok(Err(format!("g={g}, n={n}")));
            }
        }
    }
    Ok(Ok(()))
}

fn identity1_grid(_: &TableCache) -> Result<std::result::Result<(), String>> {
    for p in 0..=8 {
        for t in 0..=p {
            for d in [4, 16, 64, 256] {
                if !identity1_check(p, t, d)?.holds {
                    return Ok(Err(format!("p={p}, t={t}, D={d}")));
                }
            }
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let cache = TableCache::in_memory();
        let out = run_all(&cache);
        assert_eq!(out.len(), check_names().len());
        for o in out {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }
}
