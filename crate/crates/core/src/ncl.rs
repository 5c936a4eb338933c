//! Noncrossing, interval and noncrossing linked partitions of `{1..n}`.
//!
//! A noncrossing linked partition is a family of pairwise noncrossing,
//! nearly disjoint blocks covering `{1..n}`: two blocks may share a single
//! element, which is then the minimum of exactly one of them (and both have
//! size at least two). Plain noncrossing partitions are the families with no
//! shared elements; interval partitions additionally require every block to
//! be an interval.
//!
//! The module provides validation with a defect diagnosis, deterministic
//! enumeration, two partial orders, the generated noncrossing partition and
//! the unlinking, renumbered restrictions, the `S`/`K` element-wise
//! encodings with decoders, the bijection with `NC(n-1)` on the fiber over
//! `1_n`, the decomposition along the block containing 1, and counting
//! formulas (Catalan and large Schroder numbers).

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};

use crate::{Error, PartitionDefect, Result};

/// Which family a partition is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Noncrossing linked partitions.
    Ncl,
    /// Noncrossing partitions (all elements singly covered).
    Nc,
    /// Interval partitions.
    Ip,
}

/// Enumeration guard: the largest ground set `enumerate` accepts.
pub const ENUMERATION_GUARD: usize = 12;

/// A validated partition, canonically ordered: each block strictly
/// increasing, blocks sorted by minimum (minima are pairwise distinct).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.blocks {
            write!(f, "(")?;
            for (i, e) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn crossing(e: &[usize], f: &[usize]) -> bool {
    // e and f cross iff some f-element and a later e-element interleave
    // strictly between min(e) and max(f), or symmetrically.
    let interleaved = |a: &[usize], b: &[usize]| -> bool {
        let a_min = a[0];
        let b_max = *b.last().unwrap();
        b.iter()
            .any(|&x| x > a_min && a.iter().any(|&y| y > x && y < b_max))
    };
    interleaved(e, f) || interleaved(f, e)
}

fn nearly_disjoint(e: &[usize], f: &[usize]) -> Option<usize> {
    // Returns a witness element when the pair fails to be nearly disjoint.
    for &x in e {
        if f.binary_search(&x).is_ok() {
            let case_a = x == e[0] && e.len() > 1 && x != f[0];
            let case_b = x != e[0] && x == f[0] && f.len() > 1;
            if !(case_a || case_b) {
                return Some(x);
            }
        }
    }
    None
}

fn is_interval(b: &[usize]) -> bool {
    *b.last().unwrap() - b[0] + 1 == b.len()
}

impl Partition {
    /// Validate a family of blocks as a partition of `{1..n}` in the given
    /// family, canonicalizing block and element order. Duplicate blocks
    /// collapse (a partition is a set of blocks).
    pub fn validate(n: usize, blocks: &[Vec<usize>], family: Family) -> Result<Partition> {
        if n == 0 {
            return Err(Error::InvalidPartition(PartitionDefect::CoverageGap {
                element: 1,
            }));
        }
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition(PartitionDefect::EmptyBlock));
            }
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            if b[0] < 1 || *b.last().unwrap() > n {
                let element = if b[0] < 1 { b[0] } else { *b.last().unwrap() };
                return Err(Error::InvalidPartition(PartitionDefect::OutOfRange {
                    element,
                }));
            }
            canon.push(b);
        }
        canon.sort();
        canon.dedup();

        let mut cover = vec![0usize; n + 1];
        for b in &canon {
            for &x in b {
                cover[x] += 1;
            }
        }
        for x in 1..=n {
            if cover[x] == 0 {
                return Err(Error::InvalidPartition(PartitionDefect::CoverageGap {
                    element: x,
                }));
            }
            if cover[x] > 2 {
                return Err(Error::InvalidPartition(PartitionDefect::TripleCover {
                    element: x,
                }));
            }
            if cover[x] == 2 && family != Family::Ncl {
                return Err(Error::InvalidPartition(PartitionDefect::SharedElement {
                    element: x,
                }));
            }
        }

        for i in 0..canon.len() {
            for j in i + 1..canon.len() {
                if crossing(&canon[i], &canon[j]) {
                    return Err(Error::InvalidPartition(PartitionDefect::Crossing {
                        first: canon[i].clone(),
                        second: canon[j].clone(),
                    }));
                }
                if let Some(element) = nearly_disjoint(&canon[i], &canon[j]) {
                    return Err(Error::InvalidPartition(
                        PartitionDefect::NotNearlyDisjoint {
                            element,
                            first: canon[i].clone(),
                            second: canon[j].clone(),
                        },
                    ));
                }
            }
        }

        if family == Family::Ip {
            for b in &canon {
                if !is_interval(b) {
                    return Err(Error::InvalidPartition(PartitionDefect::NotInterval {
                        block: b.clone(),
                    }));
                }
            }
        }

        canon.sort_by_key(|b| b[0]);
        Ok(Partition { n, blocks: canon })
    }

    /// Construction bypassing validation, for internally generated
    /// partitions known to be valid; checked in debug builds.
    pub(crate) fn from_valid(n: usize, mut blocks: Vec<Vec<usize>>) -> Partition {
        blocks.sort_by_key(|b| b[0]);
        let p = Partition { n, blocks };
        debug_assert!(
            Partition::validate(p.n, &p.blocks, Family::Ncl)
                .map(|q| q == p)
                .unwrap_or(false),
            "internal partition invalid: {p:?}"
        );
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The one-block partition `1_n`.
    pub fn full(n: usize) -> Partition {
        Partition::from_valid(n, vec![(1..=n).collect()])
    }

    /// The all-singletons partition `0_n`.
    pub fn singletons(n: usize) -> Partition {
        Partition::from_valid(n, (1..=n).map(|x| vec![x]).collect())
    }

    /// How many blocks cover `x`.
    pub fn cover_count(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.binary_search(&x).is_ok())
            .count()
    }

    pub fn is_singly_covered(&self, x: usize) -> bool {
        self.cover_count(x) == 1
    }

    pub fn is_doubly_covered(&self, x: usize) -> bool {
        self.cover_count(x) == 2
    }

    /// All elements singly covered, i.e. an ordinary noncrossing partition.
    pub fn is_nc(&self) -> bool {
        (1..=self.n).all(|x| self.is_singly_covered(x))
    }

    pub fn is_interval_partition(&self) -> bool {
        self.is_nc() && self.blocks.iter().all(|b| is_interval(b))
    }

    /// Index of the block whose minimum is `x`, if any.
    fn block_with_min(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b[0] == x)
    }

    /// Blockwise order: every block of `self` is contained in a block of
    /// `other`.
    pub fn le_blockwise(&self, other: &Partition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self.blocks.iter().all(|e| {
            other
                .blocks
                .iter()
                .any(|f| e.iter().all(|x| f.binary_search(x).is_ok()))
        }))
    }

    /// The second order: compares the generated noncrossing partitions
    /// first, and the unlinkings on ties.
    pub fn le_nc_order(&self, other: &Partition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let self_hat = self.generated_nc();
        let other_hat = other.generated_nc();
        if !self_hat.le_blockwise(&other_hat)? {
            return Ok(false);
        }
        if self_hat != other_hat {
            return Ok(true);
        }
        self.unlinking().le_blockwise(&other.unlinking())
    }

    /// The smallest noncrossing partition lying above: unite intersecting
    /// blocks until a fixed point.
    pub fn generated_nc(&self) -> Partition {
        let mut sets: Vec<Vec<usize>> = self.blocks.clone();
        loop {
            let mut merged = false;
            'outer: for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    if sets[i].iter().any(|x| sets[j].binary_search(x).is_ok()) {
                        let b = sets.remove(j);
                        let mut a = std::mem::take(&mut sets[i]);
                        a.extend(b);
                        a.sort_unstable();
                        a.dedup();
                        sets[i] = a;
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                return Partition::from_valid(self.n, sets);
            }
        }
    }

    /// The unlinking: drop the minimum from every block whose minimum is
    /// doubly covered. The result is a noncrossing partition below `self`.
    pub fn unlinking(&self) -> Partition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                if self.is_doubly_covered(b[0]) {
                    b[1..].to_vec()
                } else {
                    b.clone()
                }
            })
            .collect();
        Partition::from_valid(self.n, blocks)
    }

    /// Does `1` and `n` lie in the same block of the generated noncrossing
    /// partition?
    pub fn is_nclo(&self) -> bool {
        let hat = self.generated_nc();
        hat.blocks
            .iter()
            .any(|b| b[0] == 1 && *b.last().unwrap() == self.n)
    }

    /// Right translation union: `self` followed by `other` shifted.
    pub fn oplus(&self, other: &Partition) -> Partition {
        let mut blocks = self.blocks.clone();
        for b in &other.blocks {
            blocks.push(b.iter().map(|&x| x + self.n).collect());
        }
        Partition::from_valid(self.n + other.n, blocks)
    }

    /// Does `j` split the partition: every block inside or disjoint from it?
    pub fn is_split_by(&self, j: &[usize]) -> bool {
        self.blocks.iter().all(|b| {
            let inside = b.iter().filter(|x| j.contains(x)).count();
            inside == 0 || inside == b.len()
        })
    }
}

/// The renumbered restriction of a block family to a nonempty subset `xs`
/// of the ground set: intersect every block with `xs`, renumber through the
/// order isomorphism `xs -> {1..|xs|}`, drop empties, collapse duplicates.
///
/// The result is returned as raw blocks: a restriction of a noncrossing
/// linked partition need not itself be one.
pub fn restrict_renumber(blocks: &[Vec<usize>], xs: &[usize]) -> Result<Vec<Vec<usize>>> {
    if xs.is_empty() {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: 0,
        });
    }
    let rank: BTreeMap<usize, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for b in blocks {
        let restricted: Vec<usize> = b.iter().filter_map(|x| rank.get(x).copied()).collect();
        if !restricted.is_empty() {
            out.push(restricted);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Restriction of a partition to `xs`, validated in the given family.
pub fn restrict_partition(p: &Partition, xs: &[usize], family: Family) -> Result<Partition> {
    let blocks = restrict_renumber(p.blocks(), xs)?;
    Partition::validate(xs.len(), &blocks, family)
}

fn range_vec(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Noncrossing partitions of an ordered point set, recursively: the block of
/// the first point is chosen freely among the remaining points, and the gaps
/// it cuts are partitioned independently.
fn nc_families(points: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    let first = points[0];
    let rest = &points[1..];
    let mut out = Vec::new();
    for mask in 0u64..(1 << rest.len()) {
        let mut block = vec![first];
        let mut gaps: Vec<Vec<usize>> = Vec::new();
        let mut gap: Vec<usize> = Vec::new();
        for (i, &p) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                block.push(p);
                gaps.push(std::mem::take(&mut gap));
            } else {
                gap.push(p);
            }
        }
        gaps.push(gap);
        // Cartesian product of the gap partitions.
        let mut partials: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for g in gaps {
            let sub = nc_families(&g);
            let mut next = Vec::with_capacity(partials.len() * sub.len());
            for partial in &partials {
                for s in &sub {
                    let mut combined = partial.clone();
                    combined.extend(s.iter().cloned());
                    next.push(combined);
                }
            }
            partials = next;
        }
        out.extend(partials);
    }
    out
}

/// The fiber over `1_m`: partitions whose generated noncrossing partition
/// is the full block. Built from `NC(m-1)` through the inverse bijection
/// (add `min(B) - 1` to every block after shifting).
fn ncl1_families(m: usize) -> Vec<Vec<Vec<usize>>> {
    if m == 1 {
        return vec![vec![vec![1]]];
    }
    nc_families(&range_vec(1, m - 1))
        .into_iter()
        .map(|tau| {
            tau.iter()
                .map(|b| {
                    let shifted: Vec<usize> = b.iter().map(|&x| x + 1).collect();
                    let mut blk = vec![shifted[0] - 1];
                    blk.extend(shifted);
                    blk
                })
                .collect()
        })
        .collect()
}

fn enumerate_unsorted(n: usize, family: Family) -> Result<Vec<Partition>> {
    if n == 0 || n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n,
            max: ENUMERATION_GUARD,
        });
    }
    let out = match family {
        Family::Nc => nc_families(&range_vec(1, n))
            .into_iter()
            .map(|blocks| Partition::from_valid(n, blocks))
            .collect(),
        Family::Ip => {
            let mut out = Vec::new();
            for parts in crate::mfs::compositions(n) {
                let mut blocks = Vec::with_capacity(parts.len());
                let mut start = 1;
                for p in parts {
                    blocks.push(range_vec(start, start + p - 1));
                    start += p;
                }
                out.push(Partition::from_valid(n, blocks));
            }
            out
        }
        Family::Ncl => {
            // One partition per choice of a noncrossing partition sigma and,
            // for each block B of sigma, a member of the fiber over the full
            // block of {1..|B|}, embedded along the order isomorphism onto B.
            let mut fiber_cache: BTreeMap<usize, Vec<Vec<Vec<usize>>>> = BTreeMap::new();
            let mut out = Vec::new();
            for sigma in nc_families(&range_vec(1, n)) {
                for b in &sigma {
                    let m = b.len();
                    fiber_cache.entry(m).or_insert_with(|| ncl1_families(m));
                }
                let choices: Vec<&Vec<Vec<Vec<usize>>>> =
                    sigma.iter().map(|b| &fiber_cache[&b.len()]).collect();
                let mut odometer = vec![0usize; sigma.len()];
                loop {
                    let mut blocks: Vec<Vec<usize>> = Vec::new();
                    for (slot, b) in sigma.iter().enumerate() {
                        for w in &choices[slot][odometer[slot]] {
                            blocks.push(w.iter().map(|&x| b[x - 1]).collect());
                        }
                    }
                    out.push(Partition::from_valid(n, blocks));
                    let mut pos = sigma.len();
                    let mut done = true;
                    while pos > 0 {
                        pos -= 1;
                        odometer[pos] += 1;
                        if odometer[pos] < choices[pos].len() {
                            done = false;
                            break;
                        }
                        odometer[pos] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
            out
        }
    };
    Ok(out)
}

/// Complete, duplicate-free enumeration in a deterministic order
/// (lexicographic on the canonical block lists). Guarded at
/// [`ENUMERATION_GUARD`].
pub fn enumerate(n: usize, family: Family) -> Result<Vec<Partition>> {
    let mut out = enumerate_unsorted(n, family)?;
    out.sort();
    Ok(out)
}

/// `|NCL(n)|` without materializing the enumeration: the sum over
/// noncrossing partitions of products of Catalan numbers.
pub fn ncl_count(n: usize) -> Result<BigInt> {
    if n == 0 || n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n,
            max: ENUMERATION_GUARD,
        });
    }
    let cats = catalan_numbers(n);
    let mut total = BigInt::zero();
    for sigma in nc_families(&range_vec(1, n)) {
        let mut prod = BigInt::one();
        for b in &sigma {
            prod *= &cats[b.len() - 1];
        }
        total += prod;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Encodings
// ---------------------------------------------------------------------------

/// One entry of the `S` encoding: a nonnegative integer, plain or starred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SEntry {
    Plain(usize),
    Starred(usize),
}

/// Element-wise encoding determining a noncrossing linked partition:
/// `0*` off the minima, `|F| - 1` at a singly covered minimum of `F`,
/// starred at a doubly covered one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SEncoding {
    pub values: Vec<SEntry>,
}

pub fn s_encode(p: &Partition) -> SEncoding {
    let values = (1..=p.n())
        .map(|j| match p.block_with_min(j) {
            None => SEntry::Starred(0),
            Some(idx) => {
                let size = p.blocks()[idx].len();
                if p.is_singly_covered(j) {
                    SEntry::Plain(size - 1)
                } else {
                    SEntry::Starred(size - 1)
                }
            }
        })
        .collect();
    SEncoding { values }
}

fn s_decode_blocks(s: &[SEntry]) -> Option<Vec<Vec<usize>>> {
    let n = s.len();
    if n == 0 {
        return Some(vec![]);
    }
    // Peel the rightmost position that is not 0*: its block is an interval.
    let m = (1..=n).rev().find(|&j| s[j - 1] != SEntry::Starred(0))?;
    match s[m - 1] {
        SEntry::Plain(k) => {
            if m + k > n {
                return None;
            }
            let mut rest: Vec<SEntry> = Vec::with_capacity(n - k - 1);
            rest.extend_from_slice(&s[..m - 1]);
            rest.extend_from_slice(&s[m + k..]);
            let inner = s_decode_blocks(&rest)?;
            let remap = |x: usize| if x < m { x } else { x + k + 1 };
            let mut blocks: Vec<Vec<usize>> = inner
                .iter()
                .map(|b| b.iter().map(|&x| remap(x)).collect())
                .collect();
            blocks.push((m..=m + k).collect());
            Some(blocks)
        }
        SEntry::Starred(k) => {
            // k >= 1 by the choice of m.
            if m + k > n {
                return None;
            }
            let mut rest: Vec<SEntry> = Vec::with_capacity(n - k);
            rest.extend_from_slice(&s[..m - 1]);
            rest.push(SEntry::Starred(0));
            rest.extend_from_slice(&s[m + k..]);
            let inner = s_decode_blocks(&rest)?;
            let remap = |x: usize| if x <= m { x } else { x + k };
            let mut blocks: Vec<Vec<usize>> = inner
                .iter()
                .map(|b| b.iter().map(|&x| remap(x)).collect())
                .collect();
            blocks.push((m..=m + k).collect());
            Some(blocks)
        }
    }
}

/// Decode an `S` encoding; `NoPreimage` when no partition encodes to it.
pub fn s_decode(s: &SEncoding) -> Result<Partition> {
    let blocks = s_decode_blocks(&s.values).ok_or(Error::NoPreimage)?;
    let p =
        Partition::validate(s.values.len(), &blocks, Family::Ncl).map_err(|_| Error::NoPreimage)?;
    if &s_encode(&p) == s {
        Ok(p)
    } else {
        Err(Error::NoPreimage)
    }
}

/// Element-wise encoding of a noncrossing partition: `|F| - 1` at block
/// minima and `-1` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KEncoding {
    pub values: Vec<i64>,
}

pub fn k_encode(p: &Partition) -> KEncoding {
    assert!(p.is_nc(), "K encoding is defined on noncrossing partitions");
    let values = (1..=p.n())
        .map(|j| match p.block_with_min(j) {
            Some(idx) => p.blocks()[idx].len() as i64 - 1,
            None => -1,
        })
        .collect();
    KEncoding { values }
}

fn k_decode_blocks(k: &[i64]) -> Option<Vec<Vec<usize>>> {
    let n = k.len();
    if n == 0 {
        return Some(vec![]);
    }
    let m = (1..=n).rev().find(|&j| k[j - 1] >= 0)?;
    let size = k[m - 1] as usize;
    if m + size > n {
        return None;
    }
    let mut rest: Vec<i64> = Vec::with_capacity(n - size - 1);
    rest.extend_from_slice(&k[..m - 1]);
    rest.extend_from_slice(&k[m + size..]);
    let inner = k_decode_blocks(&rest)?;
    let remap = |x: usize| if x < m { x } else { x + size + 1 };
    let mut blocks: Vec<Vec<usize>> = inner
        .iter()
        .map(|b| b.iter().map(|&x| remap(x)).collect())
        .collect();
    blocks.push((m..=m + size).collect());
    Some(blocks)
}

/// Decode a `K` encoding into a noncrossing partition.
pub fn k_decode(k: &KEncoding) -> Result<Partition> {
    let blocks = k_decode_blocks(&k.values).ok_or(Error::NoPreimage)?;
    let p =
        Partition::validate(k.values.len(), &blocks, Family::Nc).map_err(|_| Error::NoPreimage)?;
    if &k_encode(&p) == k {
        Ok(p)
    } else {
        Err(Error::NoPreimage)
    }
}

// ---------------------------------------------------------------------------
// Fiber bijection and decomposition along the block containing 1
// ---------------------------------------------------------------------------

/// Is the generated noncrossing partition the full block?
pub fn is_ncl1(p: &Partition) -> bool {
    p.generated_nc() == Partition::full(p.n())
}

/// Forward direction of the fiber bijection: the renumbered restriction of
/// the unlinking to `{2..n}`, an element of `NC(n-1)`.
pub fn ncl1_to_nc(p: &Partition) -> Result<Partition> {
    if p.n() < 2 || !is_ncl1(p) {
        return Err(Error::NoPreimage);
    }
    restrict_partition(&p.unlinking(), &range_vec(2, p.n()), Family::Nc)
}

/// Inverse direction: from `tau` in `NC(n-1)`, shift right and attach
/// `min(B) - 1` to every block.
pub fn nc_to_ncl1(tau: &Partition) -> Result<Partition> {
    if !tau.is_nc() {
        return Err(Error::InvalidPartition(PartitionDefect::SharedElement {
            element: (1..=tau.n())
                .find(|&x| !tau.is_singly_covered(x))
                .unwrap_or(1),
        }));
    }
    let blocks = tau
        .blocks()
        .iter()
        .map(|b| {
            let shifted: Vec<usize> = b.iter().map(|&x| x + 1).collect();
            let mut blk = vec![shifted[0] - 1];
            blk.extend(shifted);
            blk
        })
        .collect::<Vec<_>>();
    Partition::validate(tau.n() + 1, &blocks, Family::Ncl)
}

/// Result of decomposing along the block containing 1: a closed partition
/// (1 and n linked through the generated partition) yields inner parts
/// only; an open one carries a trailing remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DcParts {
    Closed(Vec<Partition>),
    Open(Vec<Partition>, Partition),
}

/// Decompose along the block `F` containing 1: between consecutive
/// anchors of `F` the partition restricts to independent parts, each again
/// a noncrossing linked partition.
pub fn decompose_dc(p: &Partition) -> Result<DcParts> {
    if p.n() < 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: p.n(),
        });
    }
    let f_idx = p.block_with_min(1).expect("1 is singly covered");
    let f = p.blocks()[f_idx].clone();
    let hat = p.generated_nc();
    let fhat_idx = hat.block_with_min(1).expect("1 is singly covered");
    let fhat = &hat.blocks()[fhat_idx];
    let k = f.len() - 1;
    // r(j) = max { i in F-hat : i < l_j }, r(k+1) = max(F-hat)
    let mut r = Vec::with_capacity(k + 1);
    for j in 1..=k {
        let lj = f[j];
        let below = fhat
            .iter()
            .copied()
            .filter(|&i| i < lj)
            .max()
            .expect("1 < l_j");
        r.push(below);
    }
    r.push(*fhat.last().unwrap());
    let mut parts = Vec::with_capacity(k);
    for j in 1..=k {
        let lj = f[j];
        let range = range_vec(r[j - 1] + 1, r[j]);
        let blocks: Vec<Vec<usize>> = if p.is_doubly_covered(lj) {
            let without_f: Vec<Vec<usize>> = p
                .blocks()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != f_idx)
                .map(|(_, b)| b.clone())
                .collect();
            restrict_renumber(&without_f, &range)?
        } else {
            restrict_renumber(p.blocks(), &range)?
        };
        parts.push(Partition::validate(range.len(), &blocks, Family::Ncl)?);
    }
    if p.is_nclo() {
        Ok(DcParts::Closed(parts))
    } else {
        let range = range_vec(r[k] + 1, p.n());
        let sigma = restrict_partition(p, &range, Family::Ncl)?;
        Ok(DcParts::Open(parts, sigma))
    }
}

fn compose_closed(parts: &[Partition]) -> Result<Partition> {
    if parts.is_empty() {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: 0,
        });
    }
    let n = 1 + parts.iter().map(|p| p.n()).sum::<usize>();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut f = vec![1usize];
    let mut offset = 1; // r_j for the current part
    for part in parts {
        let hat = part.generated_nc();
        let e_idx = hat
            .blocks()
            .iter()
            .position(|b| b.binary_search(&part.n()).is_ok())
            .expect("last point is covered");
        let e = &hat.blocks()[e_idx];
        let lj = offset + e[0];
        f.push(lj);
        for b in part.blocks() {
            if e.len() == 1 && b == e {
                continue; // the singleton anchor dissolves into F
            }
            blocks.push(b.iter().map(|&x| x + offset).collect());
        }
        offset += part.n();
    }
    blocks.push(f);
    Partition::validate(n, &blocks, Family::Ncl)
}

/// Inverse of [`decompose_dc`].
pub fn compose_dc(parts: &DcParts) -> Result<Partition> {
    match parts {
        DcParts::Closed(inner) => compose_closed(inner),
        DcParts::Open(inner, sigma) => {
            let head = if inner.is_empty() {
                Partition::full(1)
            } else {
                compose_closed(inner)?
            };
            Ok(head.oplus(sigma))
        }
    }
}

// ---------------------------------------------------------------------------
// Counting formulas
// ---------------------------------------------------------------------------

/// Catalan numbers `c_0..=c_n`, with `c_k = binom(2k, k-1) / k` for
/// `k >= 1` and `c_0 = 1`.
pub fn catalan_numbers(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for k in 1..=n {
        out.push(binomial(2 * k, k - 1) / BigInt::from(k));
    }
    out
}

/// Large Schroder numbers `r_0..=r_n` via the convolution recurrence
/// `r_n = r_{n-1} + sum_{k=0}^{n-1} r_k r_{n-1-k}`.
pub fn schroder_numbers(n: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut next = out[m - 1].clone();
        for k in 0..m {
            next += &out[k] * &out[m - 1 - k];
        }
        out.push(next);
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// For each noncrossing partition `sigma` of `{1..n}`, the size of the fiber
/// of partitions generating it: the product of Catalan numbers
/// `c_{|B| - 1}` over the blocks. The fiber sizes total `|NCL(n)|`.
pub fn ncl_fiber_counts(n: usize) -> Result<Vec<(Partition, BigInt)>> {
    if n == 0 || n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n,
            max: ENUMERATION_GUARD,
        });
    }
    let cats = catalan_numbers(n);
    let mut out: Vec<(Partition, BigInt)> = enumerate(n, Family::Nc)?
        .into_iter()
        .map(|sigma| {
            let mut prod = BigInt::one();
            for b in sigma.blocks() {
                prod *= &cats[b.len() - 1];
            }
            (sigma, prod)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
