//! Torus-fixed points of `M(r, n)`, their tangent weights, and the
//! Białynicki-Birula cell dimensions for a one-parameter subtorus
//! `T^w_{α,β} = (t^α, t^β, t^{w₁}, …, t^{w_r})`.
//!
//! Fixed points are `r`-tuples of Young diagrams. A cell dimension is the
//! number of tangent weights that vanish on the subtorus and are positive
//! for the generic refinement `v₁ ≫ … ≫ v_r ≫ γ ≫ 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::partitions::{arm_leg, partitions_of, Partition};
use crate::qseries::{BivariateSeries, Polynomial, TruncatedSeries};

/// An `r`-tuple of Young diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FixedPoint {
    diagrams: Vec<Partition>,
}

impl FixedPoint {
    pub fn new(diagrams: Vec<Partition>) -> Result<Self> {
        if diagrams.is_empty() {
            return param("a fixed point needs at least one diagram (r ≥ 1)");
        }
        Ok(Self { diagrams })
    }

    pub fn diagrams(&self) -> &[Partition] {
        &self.diagrams
    }

    pub fn rank(&self) -> usize {
        self.diagrams.len()
    }

    pub fn size(&self) -> u32 {
        self.diagrams.iter().map(Partition::size).sum()
    }
}

/// The subtorus `(t^α, t^β, t^{w₁}, …, t^{w_r})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cocharacter {
    alpha: i64,
    beta: i64,
    w: Vec<i64>,
}

impl Cocharacter {
    /// Validates `α, β ≥ 1`, `gcd(α, β) = 1` and `r ≥ 1`.
    pub fn new(alpha: i64, beta: i64, w: Vec<i64>) -> Result<Self> {
        if alpha < 1 || beta < 1 {
            return param(format!("α and β must be at least 1, got α={alpha}, β={beta}"));
        }
        if alpha.gcd(&beta) != 1 {
            return param(format!("α={alpha} and β={beta} are not coprime"));
        }
        if w.is_empty() {
            return param("weight vector must have at least one entry");
        }
        Ok(Self { alpha, beta, w })
    }

    /// `α = β = 1` with `w = (1,…,1,0,…,0)`, `m` leading ones.
    pub fn ow(r: usize, m: usize) -> Result<Self> {
        if r == 0 || m > r {
            return param(format!("ow(m) needs 0 ≤ m ≤ r and r ≥ 1, got r={r}, m={m}"));
        }
        let w = (0..r).map(|i| i64::from(i < m)).collect();
        Self::new(1, 1, w)
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn w(&self) -> &[i64] {
        &self.w
    }

    pub fn rank(&self) -> usize {
        self.w.len()
    }
}

/// The character `e_j e_i^{-1} t₁^{k1} t₂^{k2}`; `i` and `j` are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TangentWeight {
    pub i: usize,
    pub j: usize,
    pub k1: i64,
    pub k2: i64,
}

/// The `2rn` weights of the tangent space at `fp`, block by block over
/// ordered pairs `(i, j)`.
pub fn tangent_weights(fp: &FixedPoint) -> Vec<TangentWeight> {
    let d = &fp.diagrams;
    let mut out = Vec::with_capacity(2 * d.len() * fp.size() as usize);
    for i in 0..d.len() {
        for j in 0..d.len() {
            for s in d[i].boxes() {
                let (a, _) = arm_leg(&d[i], s);
                let (_, l) = arm_leg(&d[j], s);
                out.push(TangentWeight { i, j, k1: -l, k2: a + 1 });
            }
            for s in d[j].boxes() {
                let (_, l) = arm_leg(&d[i], s);
                let (a, _) = arm_leg(&d[j], s);
                out.push(TangentWeight { i, j, k1: l + 1, k2: -a });
            }
        }
    }
    out
}

/// Exponent of `t` after restricting the weight to the subtorus:
/// `w_j − w_i + α·k1 + β·k2`.
pub fn weight_pairing(wt: &TangentWeight, c: &Cocharacter) -> Result<i64> {
    let r = c.w.len();
    if wt.i >= r || wt.j >= r {
        return param(format!("weight indices ({}, {}) out of range for rank {r}", wt.i, wt.j));
    }
    Ok(c.w[wt.j] - c.w[wt.i] + c.alpha * wt.k1 + c.beta * wt.k2)
}

/// Sign of the weight under `v₁ ≫ … ≫ v_r ≫ γ ≫ 1`.
pub fn refinement_sign(wt: &TangentWeight) -> i8 {
    use std::cmp::Ordering::*;
    match wt.j.cmp(&wt.i) {
        Less => 1,
        Greater => -1,
        Equal => {
            let key = if wt.k2 != 0 { wt.k2 } else { wt.k1 };
            if key > 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// Number of weights with zero pairing and positive refinement sign.
pub fn cell_dimension(fp: &FixedPoint, c: &Cocharacter) -> u32 {
    let d = &fp.diagrams;
    assert_eq!(d.len(), c.w.len(), "fixed point rank differs from cocharacter rank");
    let mut count = 0;
    for i in 0..d.len() {
        for j in 0..d.len() {
            let shift = c.w[j] - c.w[i];
            for s in d[i].boxes() {
                let wt = TangentWeight {
                    i,
                    j,
                    k1: -(d[j].row_len(s.j) as i64 - s.i as i64 - 1),
                    k2: d[i].column_len(s.i as usize) as i64 - s.j as i64,
                };
                if shift + c.alpha * wt.k1 + c.beta * wt.k2 == 0 && refinement_sign(&wt) > 0 {
                    count += 1;
                }
            }
            for s in d[j].boxes() {
                let wt = TangentWeight {
                    i,
                    j,
                    k1: d[i].row_len(s.j) as i64 - s.i as i64,
                    k2: -(d[j].column_len(s.i as usize) as i64 - s.j as i64 - 1),
                };
                if shift + c.alpha * wt.k1 + c.beta * wt.k2 == 0 && refinement_sign(&wt) > 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Sufficient condition for the fixed locus to be compact:
/// `max w − min w < α + β`.
pub fn is_compact_regime(c: &Cocharacter) -> bool {
    let max = c.w.iter().max().copied().unwrap_or(0);
    let min = c.w.iter().min().copied().unwrap_or(0);
    max - min < c.alpha + c.beta
}

fn require_compact(c: &Cocharacter) -> Result<()> {
    if is_compact_regime(c) {
        Ok(())
    } else {
        let max = c.w.iter().max().unwrap();
        let min = c.w.iter().min().unwrap();
        Err(Error::Refused(format!(
            "non-compact regime: max w − min w = {} is not < α + β = {}",
            max - min,
            c.alpha + c.beta
        )))
    }
}

/// All fixed points of size `n` in rank `r`: size compositions in
/// lexicographic order, then partitions slot by slot.
pub fn fixed_points(r: usize, n: u32) -> Vec<FixedPoint> {
    if r == 0 {
        return Vec::new();
    }
    let table: Vec<Vec<Partition>> = (0..=n).map(partitions_of).collect();
    let mut out = Vec::new();
    let mut sizes = vec![0u32; r];
    compositions(n, 0, &mut sizes, &mut |sizes| {
        let mut current: Vec<Partition> = Vec::with_capacity(r);
        product(&table, sizes, &mut current, &mut out);
    });
    out
}

fn compositions(rest: u32, slot: usize, sizes: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if slot + 1 == sizes.len() {
        sizes[slot] = rest;
        f(sizes);
        return;
    }
    for k in 0..=rest {
        sizes[slot] = k;
        compositions(rest - k, slot + 1, sizes, f);
    }
}

fn product(table: &[Vec<Partition>], sizes: &[u32], current: &mut Vec<Partition>, out: &mut Vec<FixedPoint>) {
    let k = current.len();
    if k == sizes.len() {
        out.push(FixedPoint { diagrams: current.clone() });
        return;
    }
    for p in &table[sizes[k] as usize] {
        current.push(p.clone());
        product(table, sizes, current, out);
        current.pop();
    }
}

/// Number of `r`-tuples of partitions of total size `n`, without
/// enumerating them.
pub fn fixed_point_count(r: usize, n: u32) -> u64 {
    let p: Vec<u64> = (0..=n).map(|k| partitions_of(k).len() as u64).collect();
    let mut acc = vec![0u64; n as usize + 1];
    acc[0] = 1;
    for _ in 0..r {
        let mut next = vec![0u64; n as usize + 1];
        for (a, &x) in acc.iter().enumerate() {
            for (b, &y) in p.iter().enumerate().take(n as usize + 1 - a) {
                next[a + b] += x * y;
            }
        }
        acc = next;
    }
    acc[n as usize]
}

/// Sorted cell dimensions of every fixed point of size `n`.
pub fn dimension_multiset(c: &Cocharacter, n: u32) -> Vec<u32> {
    let mut dims: Vec<u32> =
        fixed_points(c.rank(), n).par_iter().map(|fp| cell_dimension(fp, c)).collect();
    dims.sort_unstable();
    dims
}

/// Somewhere to keep dimension multisets between calls.
pub trait DimensionStore: Sync {
    fn get_or_compute(&self, c: &Cocharacter, n: u32, compute: &(dyn Fn() -> Vec<u32> + Sync)) -> Vec<u32>;
}

/// Always recomputes.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoCache;

impl DimensionStore for NoCache {
    fn get_or_compute(&self, _c: &Cocharacter, _n: u32, compute: &(dyn Fn() -> Vec<u32> + Sync)) -> Vec<u32> {
        compute()
    }
}

fn check_rank(r: usize, c: &Cocharacter) -> Result<()> {
    if r != c.rank() {
        return param(format!("rank r={r} but the weight vector has {} entries", c.rank()));
    }
    Ok(())
}

fn multisets(c: &Cocharacter, max_n: u32, store: &dyn DimensionStore) -> Vec<Vec<u32>> {
    (0..=max_n)
        .into_par_iter()
        .map(|n| store.get_or_compute(c, n, &|| dimension_multiset(c, n)))
        .collect()
}

/// `Σ_n #{fixed points of size n with cell dimension 0} q^n`.
pub fn h0_series(r: usize, c: &Cocharacter, order: usize) -> Result<TruncatedSeries> {
    h0_series_with(r, c, order, &NoCache)
}

pub fn h0_series_with(r: usize, c: &Cocharacter, order: usize, store: &dyn DimensionStore) -> Result<TruncatedSeries> {
    check_rank(r, c)?;
    require_compact(c)?;
    let counts = multisets(c, order as u32, store)
        .into_iter()
        .map(|dims| dims.iter().filter(|&&d| d == 0).count() as u64);
    Ok(TruncatedSeries::from_coeffs(counts, order))
}

/// `Σ_n (Σ_p q^{dim C_p}) t^n` over fixed points of size `n`.
pub fn poincare_series(r: usize, c: &Cocharacter, t_order: usize) -> Result<BivariateSeries> {
    poincare_series_with(r, c, t_order, &NoCache)
}

pub fn poincare_series_with(
    r: usize,
    c: &Cocharacter,
    t_order: usize,
    store: &dyn DimensionStore,
) -> Result<BivariateSeries> {
    check_rank(r, c)?;
    require_compact(c)?;
    let polys = multisets(c, t_order as u32, store).iter().map(|dims| dims_to_poly(dims)).collect();
    Ok(BivariateSeries::from_polys(polys, t_order))
}

fn dims_to_poly(dims: &[u32]) -> Polynomial {
    Polynomial::from_coeffs(histogram(dims).into_iter().map(BigInt::from).collect())
}

fn histogram(dims: &[u32]) -> Vec<u64> {
    let top = dims.iter().max().map_or(0, |&d| d as usize + 1);
    let mut h = vec![0u64; top];
    for &d in dims {
        h[d as usize] += 1;
    }
    h
}

/// One row of a census: the fixed points of a single size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub dimensions: Vec<u32>,
    pub h0: u64,
    /// Coefficients of the Poincaré polynomial by `q`-degree.
    pub poincare: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub r: usize,
    pub alpha: i64,
    pub beta: i64,
    pub w: Vec<i64>,
    pub rows: Vec<CensusRow>,
}

/// Dimension multisets, `h₀` and Poincaré coefficients for `n ≤ max_n`.
pub fn census(c: &Cocharacter, max_n: u32, store: &dyn DimensionStore) -> Result<Census> {
    require_compact(c)?;
    let rows = multisets(c, max_n, store)
        .into_iter()
        .enumerate()
        .map(|(n, dims)| CensusRow {
            n: n as u32,
            h0: dims.iter().filter(|&&d| d == 0).count() as u64,
            poincare: histogram(&dims),
            dimensions: dims,
        })
        .collect();
    Ok(Census { r: c.rank(), alpha: c.alpha, beta: c.beta, w: c.w.clone(), rows })
}

impl Census {
    /// `n,dimension,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,dimension,count\n");
        for row in &self.rows {
            for (d, &k) in row.poincare.iter().enumerate() {
                if k > 0 {
                    out.push_str(&format!("{},{d},{k}\n", row.n));
                }
            }
        }
        out
    }
}
