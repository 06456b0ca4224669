//! Permutations of `[p]`, the Cayley-graph metric on `S_p`, geodesic
//! predicates and the two genus functions.
//!
//! Points are stored 0-based; `Display` prints 1-based cycle notation.
//! Products follow `(a·b)(i) = a(b(i))` everywhere in the crate.

use std::fmt;

use crate::error::{Error, Result};

/// Largest degree whose order `p!` fits in a `u64`.
pub const MAX_RANKED_DEGREE: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(p: usize) -> Self {
        Self { images: (0..p).collect() }
    }

    /// Builds a permutation from 0-based one-line notation.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let p = images.len();
        let mut seen = vec![false; p];
        for &x in &images {
            if x >= p || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation of degree `p` from 1-based disjoint cycles.
    pub fn from_cycles(p: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..p).collect();
        let mut seen = vec![false; p];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > p || seen[x - 1] {
                    return Err(Error::InvalidPermutation(format!("cycles {cycles:?} in S_{p}")));
                }
                seen[x - 1] = true;
                images[x - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self · other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_degrees(self, other)?;
        Ok(Self {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    /// Number of orbits, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let p = self.degree();
        let mut seen = vec![false; p];
        let mut count = 0;
        for start in 0..p {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        count
    }

    /// Minimal number of transpositions needed to write the permutation.
    pub fn length(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    /// `|self⁻¹ · other|`.
    pub fn distance(&self, other: &Permutation) -> Result<usize> {
        Ok(self.inverse().compose(other)?.length())
    }

    /// Cycles in 0-based labels, each starting at its smallest element,
    /// ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let p = self.degree();
        let mut seen = vec![false; p];
        let mut out = Vec::new();
        for start in 0..p {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &j)| *i == j).count()
    }

    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| self.images[j] == i)
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> Permutation {
        let mut out = Self::identity(self.degree());
        for _ in 0..k {
            out = self.compose(&out).expect("same degree");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            let labels: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            let sep = if self.degree() >= 10 { "," } else { "" };
            write!(f, "({})", labels.join(sep))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

fn check_degrees(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch { left: a.degree(), right: b.degree() });
    }
    Ok(())
}

/// The canonical cycle `(1, 2, …, p)`.
pub fn full_cycle(p: usize) -> Result<Permutation> {
    if p == 0 {
        return Err(Error::ZeroDegree);
    }
    Ok(Permutation { images: (0..p).map(|i| (i + 1) % p).collect() })
}

/// Whether `b` lies on a geodesic from `a` to `c` in the Cayley graph.
pub fn on_geodesic(a: &Permutation, b: &Permutation, c: &Permutation) -> Result<bool> {
    check_degrees(a, b)?;
    check_degrees(b, c)?;
    Ok(a.distance(b)? + b.distance(c)? == a.distance(c)?)
}

/// Selects one of the two genus functions on `S_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusKind {
    /// Measured against the geodesic `id → π⁻¹`.
    First,
    /// Measured against the geodesic `id → π`.
    Second,
}

impl GenusKind {
    pub fn from_index(which: u8) -> Option<Self> {
        match which {
            1 => Some(Self::First),
            2 => Some(Self::Second),
            _ => None,
        }
    }
}

/// Half the excess of the path `id → α → π^{∓1}` over the direct distance.
pub fn genus(alpha: &Permutation, which: GenusKind) -> usize {
    let p = alpha.degree();
    let pi = full_cycle(p.max(1)).expect("p >= 1");
    let target = match which {
        GenusKind::First => pi.inverse(),
        GenusKind::Second => pi,
    };
    let excess = alpha.length() + alpha.distance(&target).expect("same degree") - target.length();
    debug_assert!(excess.is_multiple_of(2));
    excess / 2
}

/// `p!` for `p ≤ 20`.
pub fn factorial(p: usize) -> u64 {
    assert!(p <= MAX_RANKED_DEGREE, "{p}! overflows u64");
    (1..=p as u64).product()
}

/// Half-open range of lexicographic ranks in `S_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationRange {
    pub p: usize,
    pub start: u64,
    pub end: u64,
}

impl EnumerationRange {
    pub fn new(p: usize, start: u64, end: u64) -> Result<Self> {
        if p > MAX_RANKED_DEGREE {
            return Err(Error::CeilingExceeded { what: "degree", requested: p, ceiling: MAX_RANKED_DEGREE });
        }
        let order = factorial(p);
        if start > end || end > order {
            return Err(Error::RankOutOfBounds { p, start, end, order });
        }
        Ok(Self { p, start, end })
    }

    pub fn full(p: usize) -> Result<Self> {
        if p > MAX_RANKED_DEGREE {
            return Err(Error::CeilingExceeded { what: "degree", requested: p, ceiling: MAX_RANKED_DEGREE });
        }
        Self::new(p, 0, factorial(p))
    }

    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// Splits into at most `parts` contiguous, nearly equal ranges.
    pub fn split(&self, parts: usize) -> Vec<EnumerationRange> {
        let parts = parts.max(1) as u64;
        let len = self.len();
        (0..parts)
            .map(|k| {
                let s = self.start + len * k / parts;
                let e = self.start + len * (k + 1) / parts;
                EnumerationRange { p: self.p, start: s, end: e }
            })
            .filter(|r| !r.is_empty())
            .collect()
    }
}

/// Permutation of lexicographic rank `rank` in one-line notation.
pub fn unrank(p: usize, mut rank: u64) -> Result<Permutation> {
    let order = factorial(p);
    if rank >= order.max(1) {
        return Err(Error::RankOutOfBounds { p, start: rank, end: rank + 1, order });
    }
    let mut pool: Vec<usize> = (0..p).collect();
    let mut images = Vec::with_capacity(p);
    for k in (0..p).rev() {
        let block = factorial(k);
        let idx = (rank / block) as usize;
        rank %= block;
        images.push(pool.remove(idx));
    }
    Ok(Permutation { images })
}

/// Lexicographic rank of a permutation.
pub fn rank(perm: &Permutation) -> u64 {
    let p = perm.degree();
    let mut r = 0u64;
    for i in 0..p {
        let smaller = perm.images[i + 1..].iter().filter(|&&x| x < perm.images[i]).count() as u64;
        r += smaller * factorial(p - 1 - i);
    }
    r
}

/// Advances `a` to its lexicographic successor; returns false at the last one.
pub fn next_lexicographic(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Iterator over the permutations of an [`EnumerationRange`].
pub struct PermutationIter {
    current: Vec<usize>,
    remaining: u64,
}

impl Iterator for PermutationIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let out = Permutation { images: self.current.clone() };
        self.remaining -= 1;
        if self.remaining > 0 {
            next_lexicographic(&mut self.current);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

pub fn enumerate(range: EnumerationRange) -> PermutationIter {
    let current = if range.is_empty() {
        Vec::new()
    } else {
        unrank(range.p, range.start).expect("validated range").images
    };
    PermutationIter { current, remaining: range.len() }
}

/// All of `S_p` in lexicographic order.
pub fn all_permutations(p: usize) -> PermutationIter {
    enumerate(EnumerationRange::full(p).expect("p within ranked ceiling"))
}
