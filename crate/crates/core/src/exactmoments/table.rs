use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::permgroup::{enumerate, factorial, EnumerationRange, Permutation};

/// Default largest degree the enumeration kernel accepts (`12! ≈ 4.8·10⁸`).
pub const DEFAULT_CEILING: usize = 12;

/// Hard limit of the kernel's fixed-size buffers.
const KERNEL_MAX: usize = 16;

pub const FORMAT_VERSION: &str = "v1";
const HEADER_PREFIX: &str = "ptmoments-classtable";

/// Counts of `α ∈ S_p` by `(|α|, |τα|, |τ⁻¹α|)` for a fixed `τ`; with `τ = π`
/// this is the kernel of every expected-moment evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCountTable {
    p: usize,
    cycle_type: Vec<usize>,
    entries: BTreeMap<(usize, usize, usize), u64>,
}

impl ClassCountTable {
    /// Table for the full cycle `π = (1 … p)`.
    pub fn build(p: usize, threads: Option<usize>) -> Result<Self> {
        Self::build_with_ceiling(p, threads, DEFAULT_CEILING)
    }

    pub fn build_with_ceiling(p: usize, threads: Option<usize>, ceiling: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroDegree);
        }
        Self::build_for_cycle_type(&[p], threads, ceiling)
    }

    /// Table for the representative `(1…θ₁)(θ₁+1…θ₁+θ₂)…` of a cycle type.
    pub fn build_for_cycle_type(cycle_type: &[usize], threads: Option<usize>, ceiling: usize) -> Result<Self> {
        if cycle_type.contains(&0) {
            return Err(Error::InvalidParameter("cycle lengths must be positive".into()));
        }
        let p: usize = cycle_type.iter().sum();
        if p == 0 {
            return Err(Error::ZeroDegree);
        }
        let limit = ceiling.min(KERNEL_MAX);
        if p > limit {
            return Err(Error::CeilingExceeded { what: "degree", requested: p, ceiling: limit });
        }
        let tau = consecutive_cycles(cycle_type);
        let counts = match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
                .install(|| count_all(&tau)),
            None => count_all(&tau),
        };
        Ok(Self::from_dense(p, cycle_type.to_vec(), &counts))
    }

    /// Counts over one rank range of `S_p` only, by plain iteration. Summing
    /// the tables of a partition of `[0, p!)` gives the full table.
    pub fn count_range(cycle_type: &[usize], range: EnumerationRange) -> Result<Self> {
        let p: usize = cycle_type.iter().sum();
        if range.p != p {
            return Err(Error::DegreeMismatch { left: range.p, right: p });
        }
        let tau = consecutive_cycles(cycle_type);
        let tau_inv = tau.inverse();
        let mut entries = BTreeMap::new();
        for alpha in enumerate(range) {
            let key = (
                alpha.length(),
                tau.compose(&alpha)?.length(),
                tau_inv.compose(&alpha)?.length(),
            );
            *entries.entry(key).or_insert(0) += 1;
        }
        Ok(Self { p, cycle_type: cycle_type.to_vec(), entries })
    }

    fn from_dense(p: usize, cycle_type: Vec<usize>, counts: &[u64]) -> Self {
        let mut entries = BTreeMap::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    let n = counts[(a * p + b) * p + c];
                    if n > 0 {
                        entries.insert((a, b, c), n);
                    }
                }
            }
        }
        Self { p, cycle_type, entries }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn cycle_type(&self) -> &[usize] {
        &self.cycle_type
    }

    pub fn is_full_cycle(&self) -> bool {
        self.cycle_type.len() == 1
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize, usize), u64> {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.entries.get(&(a, b, c)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Adds the counts of another table over the same `τ`.
    pub fn merge(&mut self, other: &ClassCountTable) -> Result<()> {
        if self.cycle_type != other.cycle_type {
            return Err(Error::InvalidParameter("merging tables of different cycle types".into()));
        }
        for (k, v) in &other.entries {
            *self.entries.entry(*k).or_insert(0) += v;
        }
        Ok(())
    }

    /// The line-oriented cache format; only defined for full-cycle tables.
    pub fn to_text(&self) -> Result<String> {
        if !self.is_full_cycle() {
            return Err(Error::CacheFormat("only full-cycle tables are cached".into()));
        }
        let mut s = format!("{HEADER_PREFIX} {FORMAT_VERSION} p={}\n", self.p);
        for (&(a, b, c), n) in &self.entries {
            writeln!(s, "{a},{b},{c},{n}").expect("write to String");
        }
        writeln!(s, "total={}", self.total()).expect("write to String");
        Ok(s)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::CacheFormat(msg);
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
        let p: usize = header
            .strip_prefix(&format!("{HEADER_PREFIX} {FORMAT_VERSION} p="))
            .and_then(|rest| rest.parse().ok())
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        if p == 0 || p > crate::permgroup::MAX_RANKED_DEGREE {
            return Err(bad(format!("unsupported degree {p}")));
        }
        let mut entries = BTreeMap::new();
        let mut last_key = None;
        let mut footer = None;
        for line in lines {
            if let Some(total) = line.strip_prefix("total=") {
                footer = Some(total.parse::<u64>().map_err(|_| bad(format!("bad footer {line:?}")))?);
                continue;
            }
            if footer.is_some() {
                return Err(bad("content after footer".into()));
            }
            let fields: Vec<u64> = line
                .split(',')
                .map(|f| f.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("bad line {line:?}")))?;
            let [a, b, c, n] = fields[..] else {
                return Err(bad(format!("bad line {line:?}")));
            };
            let key = (a as usize, b as usize, c as usize);
            if key.0 >= p || key.1 >= p || key.2 >= p || n == 0 {
                return Err(bad(format!("entry out of range {line:?}")));
            }
            if last_key.is_some_and(|k| k >= key) {
                return Err(bad("keys not in lexicographic order".into()));
            }
            last_key = Some(key);
            entries.insert(key, n);
        }
        let table = Self { p, cycle_type: vec![p], entries };
        let total = footer.ok_or_else(|| bad("missing footer".into()))?;
        if total != table.total() || total != factorial(p) {
            return Err(bad(format!("total {total} does not match p! = {}", factorial(p))));
        }
        Ok(table)
    }
}

/// `(1…θ₁)(θ₁+1…θ₁+θ₂)…` as a permutation.
pub fn consecutive_cycles(cycle_type: &[usize]) -> Permutation {
    let p: usize = cycle_type.iter().sum();
    let mut images = vec![0; p];
    let mut offset = 0;
    for &len in cycle_type {
        for k in 0..len {
            images[offset + k] = offset + (k + 1) % len;
        }
        offset += len;
    }
    Permutation::from_images_unchecked(images)
}

/// Incremental cycle counting for a permutation assembled one arrow at a time.
///
/// The arrows placed so far form disjoint paths and closed cycles. Each open
/// path is tracked by its endpoints; adding `i → j` either closes the path
/// that starts at `j` and ends at `i`, or concatenates two paths.
#[derive(Clone, Copy)]
struct PathTracker {
    start_of_end: [u8; KERNEL_MAX],
    end_of_start: [u8; KERNEL_MAX],
}

impl PathTracker {
    fn new(p: usize) -> Self {
        let mut t = Self { start_of_end: [0; KERNEL_MAX], end_of_start: [0; KERNEL_MAX] };
        for x in 0..p {
            t.start_of_end[x] = x as u8;
            t.end_of_start[x] = x as u8;
        }
        t
    }

    /// Returns `None` when a cycle closed, otherwise the undo record.
    #[inline(always)]
    fn link(&mut self, i: u8, j: u8) -> Option<(u8, u8)> {
        let s = self.start_of_end[i as usize];
        if s == j {
            return None;
        }
        let e = self.end_of_start[j as usize];
        self.start_of_end[e as usize] = s;
        self.end_of_start[s as usize] = e;
        Some((s, e))
    }

    #[inline(always)]
    fn unlink(&mut self, i: u8, j: u8, undo: Option<(u8, u8)>) {
        if let Some((s, e)) = undo {
            self.start_of_end[e as usize] = j;
            self.end_of_start[s as usize] = i;
        }
    }
}

struct Kernel {
    p: usize,
    tau: [u8; KERNEL_MAX],
    tau_inv: [u8; KERNEL_MAX],
    alpha: PathTracker,
    forward: PathTracker,
    backward: PathTracker,
    counts: Vec<u64>,
}

impl Kernel {
    fn new(tau: &Permutation) -> Self {
        let p = tau.degree();
        let mut t = [0u8; KERNEL_MAX];
        let mut ti = [0u8; KERNEL_MAX];
        for i in 0..p {
            t[i] = tau.image(i) as u8;
            ti[tau.image(i)] = i as u8;
        }
        Self {
            p,
            tau: t,
            tau_inv: ti,
            alpha: PathTracker::new(p),
            forward: PathTracker::new(p),
            backward: PathTracker::new(p),
            counts: vec![0; p * p * p],
        }
    }

    /// Places `α(i) = j` and recurses; `closed` holds the cycles closed so far
    /// in `α`, `τα` and `τ⁻¹α`.
    fn descend(&mut self, i: usize, available: u32, closed: [usize; 3]) {
        let p = self.p;
        if i + 1 == p {
            // One value left: the final arrow closes a cycle in each permutation.
            let idx = ((p - closed[0] - 1) * p + (p - closed[1] - 1)) * p + (p - closed[2] - 1);
            self.counts[idx] += 1;
            return;
        }
        let mut bits = available;
        while bits != 0 {
            let j = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            let iu = i as u8;
            let (fj, bj) = (self.tau[j as usize], self.tau_inv[j as usize]);
            let ua = self.alpha.link(iu, j);
            let uf = self.forward.link(iu, fj);
            let ub = self.backward.link(iu, bj);
            let next = [
                closed[0] + ua.is_none() as usize,
                closed[1] + uf.is_none() as usize,
                closed[2] + ub.is_none() as usize,
            ];
            self.descend(i + 1, available & !(1 << j), next);
            self.backward.unlink(iu, bj, ub);
            self.forward.unlink(iu, fj, uf);
            self.alpha.unlink(iu, j, ua);
        }
    }

    /// Runs the subtree below a fixed prefix `α(0..k) = prefix`.
    fn run_prefix(mut self, prefix: &[u8]) -> Vec<u64> {
        let mut closed = [0usize; 3];
        let mut available: u32 = (1u32 << self.p) - 1;
        for (i, &j) in prefix.iter().enumerate() {
            let iu = i as u8;
            closed[0] += self.alpha.link(iu, j).is_none() as usize;
            closed[1] += self.forward.link(iu, self.tau[j as usize]).is_none() as usize;
            closed[2] += self.backward.link(iu, self.tau_inv[j as usize]).is_none() as usize;
            available &= !(1 << j);
        }
        self.descend(prefix.len(), available, closed);
        self.counts
    }
}

/// Lexicographic prefixes of length `k`; each spans a contiguous rank range
/// of length `(p-k)!`.
fn prefixes(p: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for pre in &out {
            for j in 0..p as u8 {
                if !pre.contains(&j) {
                    let mut v = pre.clone();
                    v.push(j);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

fn count_all(tau: &Permutation) -> Vec<u64> {
    let p = tau.degree();
    let depth = match p {
        0..=4 => 0,
        5..=8 => 1,
        _ => 2,
    };
    prefixes(p, depth)
        .par_iter()
        .map(|pre| Kernel::new(tau).run_prefix(pre))
        .reduce(
            || vec![0u64; p * p * p],
            |mut acc, part| {
                for (a, b) in acc.iter_mut().zip(part) {
                    *a += b;
                }
                acc
            },
        )
}
