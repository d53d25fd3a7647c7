//! Partitions viewed as Young diagrams, their arm/leg statistics, and the
//! enumerators used by the census and the fermionic sums.
//!
//! A partition `λ = (λ₁ ≥ λ₂ ≥ … ≥ λ_k ≥ 1)` embeds as the box set
//! `{(i, j) : 0 ≤ i < k, 0 ≤ j < λ_{i+1}}`, so part `λ_{i+1}` is the length of
//! column `i`. Under this convention `c₀(λ) = λ₁` and `r₀(λ) = l(λ)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Builds a partition, rejecting sequences that are not weakly
    /// decreasing or that contain zero.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return param(format!("partition {parts:?} has a zero part"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return param(format!("partition {parts:?} is not weakly decreasing"));
        }
        Ok(Self { parts })
    }

    /// Sorts arbitrary positive parts into a partition; zeros are dropped.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, zero for the empty partition.
    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// Length of column `i` of the diagram: `λ_{i+1}`, zero beyond the last part.
    pub fn column_len(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Length of row `j`: the number of parts exceeding `j`.
    pub fn row_len(&self, j: u32) -> u32 {
        // parts are sorted, so this is a partition point
        self.parts.partition_point(|&p| p > j) as u32
    }

    pub fn contains(&self, s: BoxCoord) -> bool {
        s.j < self.column_len(s.i as usize)
    }

    /// Boxes of the diagram, column by column.
    pub fn boxes(&self) -> impl Iterator<Item = BoxCoord> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| BoxCoord { i: i as u32, j }))
    }

    /// The conjugate partition (rows become columns).
    pub fn conjugate(&self) -> Self {
        let parts = (0..self.largest()).map(|j| self.row_len(j)).collect();
        Self { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// A lattice point `(i, j)`: `i` is the column index, `j` the row index.
/// Points outside a diagram are legal probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxCoord {
    pub i: u32,
    pub j: u32,
}

impl BoxCoord {
    pub fn new(i: u32, j: u32) -> Self {
        Self { i, j }
    }
}

/// Arm and leg of `s` relative to `host`:
/// `a = c_i(host) − j − 1`, `l = r_j(host) − i − 1`.
///
/// Both are nonnegative exactly when `s` lies in the diagram.
pub fn arm_leg(host: &Partition, s: BoxCoord) -> (i64, i64) {
    let a = host.column_len(s.i as usize) as i64 - s.j as i64 - 1;
    let l = host.row_len(s.j) as i64 - s.i as i64 - 1;
    (a, l)
}

/// Optional restrictions for [`enumerate_partitions`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartitionConstraints {
    pub distinct: bool,
    pub max_part: Option<u32>,
    pub max_length: Option<usize>,
}

impl PartitionConstraints {
    pub fn distinct() -> Self {
        Self { distinct: true, ..Self::default() }
    }

    pub fn boxed(max_part: u32, max_length: usize) -> Self {
        Self { distinct: false, max_part: Some(max_part), max_length: Some(max_length) }
    }
}

/// All partitions of `n` meeting `constraints`, in ascending lexicographic
/// order of their part sequences.
pub fn enumerate_partitions(n: u32, constraints: PartitionConstraints) -> Vec<Partition> {
    let mut out = Vec::new();
    let max_len = constraints.max_length.unwrap_or(usize::MAX);
    let cap = constraints.max_part.unwrap_or(n).min(n);
    let mut current = Vec::new();
    fill_partitions(n, cap, max_len, constraints.distinct, &mut current, &mut out);
    out
}

/// Recursion producing parts in ascending lexicographic order: the first
/// part runs upwards, and each tail is itself produced in that order.
fn fill_partitions(
    rest: u32,
    cap: u32,
    slots: usize,
    distinct: bool,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if rest == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in 1..=cap.min(rest) {
        let next_cap = if distinct { p - 1 } else { p };
        // the remaining slots must be able to absorb what is left
        if (slots as u64 - 1).saturating_mul(next_cap as u64).saturating_add(p as u64) < rest as u64 {
            continue;
        }
        current.push(p);
        fill_partitions(rest - p, next_cap, slots - 1, distinct, current, out);
        current.pop();
    }
}

/// All partitions of `n` (no constraints), convenience wrapper.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    enumerate_partitions(n, PartitionConstraints::default())
}

/// An `r`-tuple of distinct-part partitions, a member of `S(r, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct STuple {
    entries: Vec<Partition>,
}

impl STuple {
    pub fn entries(&self) -> &[Partition] {
        &self.entries
    }

    pub fn size(&self) -> u32 {
        self.entries.iter().map(Partition::size).sum()
    }
}

/// Membership test for `S(r, m)`: every entry has distinct parts and
/// `λ^{(i)}_1 ≤ l(λ^{(i+1)}) + δ_{i,m}` for `1 ≤ i ≤ r − 1` (one-based `i`).
pub fn is_s_tuple(entries: &[Partition], m: usize) -> bool {
    entries.iter().all(Partition::has_distinct_parts)
        && entries.windows(2).enumerate().all(|(k, w)| {
            let i = k + 1;
            let slack = u32::from(i == m);
            w[0].largest() <= w[1].len() as u32 + slack
        })
}

/// Members of `S(r, m)` of total size `n`, ordered by the size composition
/// and then lexicographically slot by slot.
pub fn enumerate_s_tuples(r: usize, m: usize, n: u32) -> Result<Vec<STuple>> {
    if r == 0 {
        return param("rank r must be at least 1");
    }
    if m > r {
        return param(format!("marker m = {m} must satisfy 0 ≤ m ≤ r = {r}"));
    }
    let by_size: Vec<Vec<Partition>> =
        (0..=n).map(|k| enumerate_partitions(k, PartitionConstraints::distinct())).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Partition> = Vec::with_capacity(r);
    extend_s_tuples(r, m, n, &by_size, &mut chosen, &mut out);
    Ok(out)
}

fn extend_s_tuples(
    r: usize,
    m: usize,
    rest: u32,
    by_size: &[Vec<Partition>],
    chosen: &mut Vec<Partition>,
    out: &mut Vec<STuple>,
) {
    let slot = chosen.len();
    if slot + 1 == r {
        for lam in &by_size[rest as usize] {
            if admissible_after(chosen, lam, m) {
                chosen.push(lam.clone());
                out.push(STuple { entries: chosen.clone() });
                chosen.pop();
            }
        }
        return;
    }
    for size in 0..=rest {
        for lam in &by_size[size as usize] {
            if admissible_after(chosen, lam, m) {
                chosen.push(lam.clone());
                extend_s_tuples(r, m, rest - size, by_size, chosen, out);
                chosen.pop();
            }
        }
    }
}

fn admissible_after(chosen: &[Partition], next: &Partition, m: usize) -> bool {
    match chosen.last() {
        None => true,
        Some(prev) => {
            let i = chosen.len();
            prev.largest() <= next.len() as u32 + u32::from(i == m)
        }
    }
}

/// `#S(r, m)_n` for `n = 0..=max_n`.
pub fn s_tuple_counts(r: usize, m: usize, max_n: u32) -> Result<Vec<u64>> {
    (0..=max_n).map(|n| enumerate_s_tuples(r, m, n).map(|v| v.len() as u64)).collect()
}
