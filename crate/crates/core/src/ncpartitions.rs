//! Set partitions of `[p]`, the noncrossing condition, size-restricted
//! families such as `NC_{1,2}(p)` and `NC_2(2q)`, and the bijection between
//! `NC(p)` and the geodesic `id → π`.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::permgroup::{full_cycle, on_geodesic, Permutation};

/// A partition of `{0, …, p-1}`. Blocks are sorted, and ordered by their
/// smallest element, so equal partitions compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    p: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(p: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; p];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= p {
                    return Err(Error::InvalidPartition(format!("element {} outside [{p}]", x + 1)));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {} repeated", x + 1)));
                }
                seen[x] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {} not covered", missing + 1)));
        }
        Ok(Self::canonical(p, blocks))
    }

    /// Builds a partition from 1-based blocks.
    pub fn from_one_based(p: usize, blocks: &[&[usize]]) -> Result<Self> {
        if blocks.iter().flat_map(|b| b.iter()).any(|&x| x == 0) {
            return Err(Error::InvalidPartition("labels are 1-based".into()));
        }
        Self::new(p, blocks.iter().map(|b| b.iter().map(|x| x - 1).collect()).collect())
    }

    fn canonical(p: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Self { p, blocks }
    }

    pub fn singletons(p: usize) -> Self {
        Self { p, blocks: (0..p).map(|i| vec![i]).collect() }
    }

    pub fn single_block(p: usize) -> Self {
        let blocks = if p == 0 { Vec::new() } else { vec![(0..p).collect()] };
        Self { p, blocks }
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of blocks of even cardinality.
    pub fn even_block_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() % 2 == 0).count()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    pub fn is_noncrossing(&self) -> bool {
        let mut label = vec![0usize; self.p];
        for (k, block) in self.blocks.iter().enumerate() {
            for &x in block {
                label[x] = k;
            }
        }
        // A crossing a < b < c < d exists iff some pair of blocks interleaves;
        // checking consecutive elements of each block against other blocks suffices.
        for block in &self.blocks {
            for w in block.windows(2) {
                let (a, c) = (w[0], w[1]);
                let inside = &label[a + 1..c];
                for &other in inside {
                    let other_block = &self.blocks[other];
                    if other_block.iter().any(|&d| d < a || d > c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Transports the partition along the order isomorphism `[p] → labels`,
    /// producing a partition of `[degree]` restricted to `labels`' blocks.
    /// Points outside `labels` are not covered, so the result is a raw block list.
    pub fn relabel(&self, labels: &[usize]) -> Vec<Vec<usize>> {
        assert_eq!(labels.len(), self.p, "label set must have p elements");
        self.blocks.iter().map(|b| b.iter().map(|&x| labels[x]).collect()).collect()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            let labels: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition{self}")
    }
}

/// A [`SetPartition`] known to be noncrossing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NoncrossingPartition(SetPartition);

impl NoncrossingPartition {
    pub fn into_inner(self) -> SetPartition {
        self.0
    }
}

impl TryFrom<SetPartition> for NoncrossingPartition {
    type Error = Error;

    fn try_from(value: SetPartition) -> Result<Self> {
        if value.is_noncrossing() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidPartition(format!("{value} is crossing")))
        }
    }
}

impl Deref for NoncrossingPartition {
    type Target = SetPartition;

    fn deref(&self) -> &SetPartition {
        &self.0
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Every element of `NC(p)`, optionally keeping only partitions whose block
/// sizes all lie in `allowed_sizes`.
///
/// The block of the first point splits the rest of the interval into gaps
/// that are partitioned independently, so the work is proportional to the
/// output rather than to the Bell number.
pub fn enumerate_nc(p: usize, allowed_sizes: Option<&[usize]>) -> Vec<NoncrossingPartition> {
    let allowed = |s: usize| allowed_sizes.is_none_or(|a| a.contains(&s));
    let mut out = Vec::new();
    for blocks in nc_interval(0, p, &allowed) {
        out.push(NoncrossingPartition(SetPartition::canonical(p, blocks)));
    }
    out.sort();
    out
}

/// `NC` over an arbitrary ordered label set, as raw block lists in those labels.
pub fn enumerate_nc_on(labels: &[usize], allowed_sizes: Option<&[usize]>) -> Vec<Vec<Vec<usize>>> {
    enumerate_nc(labels.len(), allowed_sizes)
        .iter()
        .map(|t| t.relabel(labels))
        .collect()
}

/// Noncrossing pair partitions of `[2q]`.
pub fn enumerate_nc2(q: usize) -> Vec<NoncrossingPartition> {
    enumerate_nc(2 * q, Some(&[2]))
}

fn nc_interval(lo: usize, hi: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Vec<Vec<usize>>> {
    if lo >= hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // Choose the block of `lo` as lo = b0 < b1 < … < bk; each gap is recursive.
    let mut block = vec![lo];
    extend_first_block(&mut block, hi, allowed, &mut out);
    out
}

fn extend_first_block(
    block: &mut Vec<usize>,
    hi: usize,
    allowed: &dyn Fn(usize) -> bool,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let last = *block.last().expect("nonempty");
    // Close the block here: the remainder after `last` is free.
    if allowed(block.len()) {
        let mut gaps: Vec<Vec<Vec<Vec<usize>>>> = Vec::with_capacity(block.len());
        for w in block.windows(2) {
            gaps.push(nc_interval(w[0] + 1, w[1], allowed));
        }
        gaps.push(nc_interval(last + 1, hi, allowed));
        if gaps.iter().all(|g| !g.is_empty()) {
            let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block.clone()]];
            for gap in gaps {
                let mut next = Vec::with_capacity(partial.len() * gap.len());
                for left in &partial {
                    for right in &gap {
                        let mut merged = left.clone();
                        merged.extend(right.iter().cloned());
                        next.push(merged);
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
    }
    for next in last + 1..hi {
        block.push(next);
        extend_first_block(block, hi, allowed, out);
        block.pop();
    }
}

/// Sends each point to the next point of its block in cyclic order.
pub fn biane_t(t: &NoncrossingPartition) -> Permutation {
    cyclic_successor(t)
}

pub(crate) fn cyclic_successor(t: &SetPartition) -> Permutation {
    let mut images = vec![0; t.degree()];
    for block in t.blocks() {
        for (k, &x) in block.iter().enumerate() {
            images[x] = block[(k + 1) % block.len()];
        }
    }
    Permutation::from_images_unchecked(images)
}

/// Inverse of [`biane_t`]; refuses permutations off the geodesic `id → π`.
pub fn biane_inverse(s: &Permutation) -> Result<NoncrossingPartition> {
    let p = s.degree();
    if p == 0 {
        return Ok(NoncrossingPartition(SetPartition::singletons(0)));
    }
    let id = Permutation::identity(p);
    if !on_geodesic(&id, s, &full_cycle(p)?)? {
        return Err(Error::NotOnGeodesic(s.to_string()));
    }
    let part = SetPartition::canonical(p, s.cycles());
    let nc = NoncrossingPartition::try_from(part)?;
    debug_assert_eq!(&biane_t(&nc), s);
    Ok(nc)
}
