//! Wishart sampling, partial transposes, and Monte Carlo estimators.
//!
//! Sample `s` of a run with seed `σ` draws from ChaCha8 seeded with `σ` on
//! stream `s`, so estimates do not depend on how many workers rayon uses.
//! Per-sample statistics are collected in sample order before reduction.

mod matrix;

use std::fmt::Write as _;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use matrix::{empirical_spectrum, jacobi_spectrum, partial_transpose, ComplexMatrix};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Reproducible random source addressed by `(seed, stream)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform on `(0, 1]`.
    fn open_unit(&mut self) -> f64 {
        1.0 - self.rng.gen::<f64>()
    }

    /// Complex Gaussian with independent `N(0, 1/2)` parts (Box–Muller).
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let r = (-self.open_unit().ln()).sqrt();
        let theta = std::f64::consts::TAU * self.rng.gen::<f64>();
        Complex64::from_polar(r, theta)
    }
}

/// `rows × cols` matrix with i.i.d. standard complex Gaussian entries.
pub fn sample_ginibre(rows: usize, cols: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::ZeroDimension("Ginibre matrix"));
    }
    let data = (0..rows * cols).map(|_| rng.complex_gaussian()).collect();
    ComplexMatrix::from_rows(rows, cols, data)
}

/// `W = GG*` for `G` of size `mn × l`.
pub fn sample_wishart(l: usize, m: usize, n: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    Ok(sample_ginibre(m * n, l, rng)?.gram())
}

/// `ρ = W / tr W`.
pub fn random_state(l: usize, m: usize, n: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if l == 0 || m == 0 || n == 0 {
        return Err(Error::ZeroDimension("l, m and n"));
    }
    loop {
        let mut w = sample_wishart(l, m, n, rng)?;
        let tr = w.trace().re;
        if tr > 0.0 {
            w.scale(1.0 / tr);
            return Ok(w);
        }
    }
}

/// `(1/mn) tr[(mnρ^Γ)^p]` for `p = 1..=max_p`. The first entry is exactly 1
/// since `ρ` is normalized.
pub fn moment_statistics(rho: &ComplexMatrix, m: usize, n: usize, max_p: usize) -> Result<Vec<f64>> {
    let d = (m * n) as f64;
    let mut x = partial_transpose(rho, m, n)?;
    x.scale(d);
    power_traces(&x, max_p, d)
}

fn power_traces(x: &ComplexMatrix, max_p: usize, norm: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(max_p);
    let mut power = x.clone();
    for p in 1..=max_p {
        if p > 1 {
            power = power.matmul(x)?;
        }
        out.push(power.trace().re / norm);
    }
    if let Some(first) = out.first_mut() {
        *first = 1.0;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub statistic: String,
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    fn from_values(statistic: String, n: u64, seed: u64, values: &[f64]) -> Self {
        let (mean, var) = mean_and_variance(values);
        Self { statistic, n, mean, stderr: (var / values.len() as f64).sqrt(), samples: values.len(), seed }
    }

    /// `|mean − target| ≤ k·stderr`.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Sample mean and unbiased sample variance.
fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, if values.len() > 1 { ss / (n - 1.0) } else { 0.0 })
}

/// Unbiased variance with the large-sample standard error
/// `√((μ₄ − s⁴)/N)`.
fn variance_estimate(statistic: String, n: u64, seed: u64, values: &[f64]) -> McEstimate {
    let count = values.len() as f64;
    let (mean, var) = mean_and_variance(values);
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / count;
    let se = ((m4 - var * var).max(0.0) / count).sqrt();
    McEstimate { statistic, n, mean: var, stderr: se, samples: values.len(), seed }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
    }
    Ok(())
}

/// Per-sample values of `Z^{(1)}, …, Z^{(max_p)}`, in sample order.
pub fn sample_moments(l: usize, m: usize, n: usize, max_p: usize, samples: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if l == 0 || m == 0 || n == 0 {
        return Err(Error::ZeroDimension("l, m and n"));
    }
    (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = RngStream::new(seed, s);
            let rho = random_state(l, m, n, &mut rng)?;
            moment_statistics(&rho, m, n, max_p)
        })
        .collect()
}

/// Mean and variance estimates of `Z^{(p)}` for every `p ≤ max_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRun {
    pub means: Vec<McEstimate>,
    pub variances: Vec<McEstimate>,
}

pub fn mc_moment_run(l: usize, m: usize, n: usize, max_p: usize, samples: usize, seed: u64) -> Result<MomentRun> {
    check_samples(samples)?;
    let rows = sample_moments(l, m, n, max_p, samples, seed)?;
    let mut means = Vec::with_capacity(max_p);
    let mut variances = Vec::with_capacity(max_p);
    for p in 1..=max_p {
        let column: Vec<f64> = rows.iter().map(|r| r[p - 1]).collect();
        let label = format!("Z{p}[l={l},m={m},n={n}]");
        means.push(McEstimate::from_values(label.clone(), n as u64, seed, &column));
        variances.push(variance_estimate(format!("Var {label}"), n as u64, seed, &column));
    }
    Ok(MomentRun { means, variances })
}

/// Estimate of `E Z^{(p)}`.
pub fn mc_expected_moment(l: usize, m: usize, n: usize, p: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if p == 0 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    Ok(mc_moment_run(l, m, n, p, samples, seed)?.means.pop().expect("p ≥ 1"))
}

/// Estimate of `Var Z^{(p)}`.
pub fn mc_variance(l: usize, m: usize, n: usize, p: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if p == 0 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    Ok(mc_moment_run(l, m, n, p, samples, seed)?.variances.pop().expect("p ≥ 1"))
}

/// Sample means of the extreme eigenvalues of `mnρ^Γ` at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub min: McEstimate,
    pub max: McEstimate,
    /// Limits `1 − 2√a` and `1 + 2√a`.
    pub predicted: (f64, f64),
}

/// `l = ⌈n²/a⌉`.
pub fn environment_dimension(a: &ExactScalar, n: usize) -> Result<usize> {
    if *a <= ExactScalar::zero() {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    let ratio = ExactScalar::from_integer((n * n).into()) / a;
    let (q, r) = ratio.numer().div_rem(ratio.denom());
    let l = if r.is_zero() { q } else { q + 1u32 };
    l.to_usize()
        .filter(|&l| l > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("environment dimension for n={n} out of range")))
}

/// For each `n`, `m = n` and `l = ⌈n²/a⌉`: extreme eigenvalues of `mnρ^Γ`.
pub fn extreme_eigenvalue_experiment(a: &ExactScalar, n_list: &[usize], samples: usize, seed: u64) -> Result<Vec<EdgeSummary>> {
    check_samples(samples)?;
    let root = crate::scalar::to_f64(a).sqrt();
    n_list
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::ZeroDimension("n"));
            }
            let l = environment_dimension(a, n)?;
            let m = n;
            let extremes: Vec<(f64, f64)> = (0..samples as u64)
                .into_par_iter()
                .map(|s| {
                    let mut rng = RngStream::new(seed, s);
                    let rho = random_state(l, m, n, &mut rng)?;
                    let mut x = partial_transpose(&rho, m, n)?;
                    x.scale((m * n) as f64);
                    let ev = empirical_spectrum(&x)?;
                    Ok((ev[0], ev[ev.len() - 1]))
                })
                .collect::<Result<_>>()?;
            let mins: Vec<f64> = extremes.iter().map(|e| e.0).collect();
            let maxs: Vec<f64> = extremes.iter().map(|e| e.1).collect();
            Ok(EdgeSummary {
                l,
                m,
                n,
                min: McEstimate::from_values("lambda_min".into(), n as u64, seed, &mins),
                max: McEstimate::from_values("lambda_max".into(), n as u64, seed, &maxs),
                predicted: (1.0 - 2.0 * root, 1.0 + 2.0 * root),
            })
        })
        .collect()
}

/// `(1/n²) tr[((GG*)^Γ)^{2q}]` with `G` of size `n² × l` and entries of
/// variance `1/(2n)` per real part; converges to the meander polynomial
/// `M_q(l)` as `n` grows.
pub fn meander_mc_estimate(l: usize, n: usize, q: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    if l == 0 || n == 0 {
        return Err(Error::ZeroDimension("l and n"));
    }
    if q == 0 {
        return Err(Error::InvalidParameter("meander order must be at least 1".into()));
    }
    let norm = (n * n) as f64;
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = RngStream::new(seed, s);
            let mut g = sample_ginibre(n * n, l, &mut rng)?;
            g.scale(1.0 / (n as f64).sqrt());
            let x = partial_transpose(&g.gram(), n, n)?;
            let sq = x.matmul(&x)?;
            let mut power = sq.clone();
            for _ in 1..q {
                power = power.matmul(&sq)?;
            }
            Ok(power.trace().re / norm)
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_values(format!("meander[q={q},l={l}]"), n as u64, seed, &values))
}

/// Pooled eigenvalue histogram of `mnρ^Γ` over `samples` draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn density(&self, bin: usize) -> f64 {
        let w = self.edges[bin + 1] - self.edges[bin];
        self.counts[bin] as f64 / (self.total as f64 * w)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lo,hi,count,density\n");
        for b in 0..self.counts.len() {
            let _ = writeln!(s, "{},{},{},{}", self.edges[b], self.edges[b + 1], self.counts[b], self.density(b));
        }
        s
    }
}

pub fn spectrum_histogram(l: usize, m: usize, n: usize, samples: usize, bins: usize, seed: u64) -> Result<Histogram> {
    check_samples(samples)?;
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    let spectra: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = RngStream::new(seed, s);
            let rho = random_state(l, m, n, &mut rng)?;
            let mut x = partial_transpose(&rho, m, n)?;
            x.scale((m * n) as f64);
            empirical_spectrum(&x)
        })
        .collect::<Result<_>>()?;
    let lo = spectra.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
    let hi = spectra.iter().map(|v| v[v.len() - 1]).fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::EPSILON);
    let edges: Vec<f64> = (0..=bins).map(|b| lo + width * b as f64).collect();
    let mut counts = vec![0u64; bins];
    for v in spectra.iter().flatten() {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = counts.iter().sum();
    Ok(Histogram { edges, counts, total })
}

/// CSV with header `statistic,n,mean,stderr,samples,seed`.
pub fn estimates_to_csv<'a>(rows: impl IntoIterator<Item = &'a McEstimate>) -> String {
    let mut s = String::from("statistic,n,mean,stderr,samples,seed\n");
    for e in rows {
        let _ = writeln!(s, "{},{},{},{},{},{}", csv_field(&e.statistic), e.n, e.mean, e.stderr, e.samples, e.seed);
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
