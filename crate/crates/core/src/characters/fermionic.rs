//! Multi-sums over weakly decreasing tuples `λ₁ ≥ … ≥ λ_k ≥ 0` weighted by
//! `1/(q)_λ`.

use num_bigint::BigInt;

use crate::error::{domain, param, Result};
use crate::qseries::{minus_q_infinity, InversePochhammerTable, Polynomial, TruncatedSeries};

fn tri(v: u64) -> u64 {
    v * (v + 1) / 2
}

/// Visits every weakly decreasing tuple of length `len` with
/// `Σ cost(i, λ_i) ≤ budget`. `cost(i, ·)` must be nondecreasing and
/// unbounded.
pub(crate) fn for_each_decreasing(len: usize, budget: u64, cost: &dyn Fn(usize, u64) -> u64, f: &mut dyn FnMut(&[u64])) {
    let mut lam = Vec::with_capacity(len);
    walk(len, budget, None, cost, &mut lam, f);
}

fn walk(
    len: usize,
    left: u64,
    cap: Option<u64>,
    cost: &dyn Fn(usize, u64) -> u64,
    lam: &mut Vec<u64>,
    f: &mut dyn FnMut(&[u64]),
) {
    let i = lam.len();
    if i == len {
        f(lam);
        return;
    }
    let mut v = 0u64;
    loop {
        if cap.is_some_and(|c| v > c) {
            break;
        }
        let c = cost(i, v);
        if c > left {
            break;
        }
        lam.push(v);
        walk(len, left - c, Some(v), cost, lam, f);
        lam.pop();
        v += 1;
    }
}

/// `Σ_λ numerator(λ)/(q)_λ` through `q^order`, where `numerator(λ)` has no
/// term below `Σ cost(i, λ_i)`.
pub(crate) fn decreasing_sum(
    len: usize,
    order: usize,
    cost: &dyn Fn(usize, u64) -> u64,
    numerator: &dyn Fn(&[u64]) -> Polynomial,
) -> TruncatedSeries {
    let table = InversePochhammerTable::new(order, order);
    let mut acc = TruncatedSeries::zero(order);
    for_each_decreasing(len, order as u64, cost, &mut |lam| {
        let num = numerator(lam).truncated(order);
        if num.is_zero() {
            return;
        }
        let mut inv = TruncatedSeries::one(order);
        for i in 0..lam.len() {
            let d = lam[i] - lam.get(i + 1).copied().unwrap_or(0);
            if d > 0 {
                inv = &inv * table.get((d as usize).min(order));
            }
        }
        acc = &acc + &(&num.to_series(order) * &inv);
    });
    acc
}

/// `q^e` as a polynomial.
fn mono(e: u64) -> Polynomial {
    Polynomial::monomial(e as usize, 1)
}

/// `(−q)_n = ∏_{t=1}^{n} (1 + q^t)`, truncated.
fn minus_q_poch(n: u64, cap: usize) -> Polynomial {
    let mut acc = Polynomial::one();
    for t in 1..=n as usize {
        if t > cap {
            break;
        }
        acc = (&acc * &Polynomial::from_coeffs(binomial_coeffs(t))).truncated(cap);
    }
    acc
}

fn binomial_coeffs(t: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); t + 1];
    v[0] += 1;
    v[t] += 1;
    v
}

/// `1 + Σ_{i<m} q^{Σ_{j≤i}(x(j) + 1)}` where `x(j)` gives a one-based index
/// into `lam`; index 0 means `q^∞` and kills the term and all later ones.
fn tail_factor(lam: &[u64], m: usize, index: impl Fn(usize) -> usize) -> Polynomial {
    let mut acc = Polynomial::one();
    let mut e = 0u64;
    for i in 0..m {
        let k = index(i);
        if k == 0 {
            break;
        }
        e += lam[k - 1] + 1;
        acc = &acc + &mono(e);
    }
    acc
}

fn check_rank_marker(r: usize, m: usize) -> Result<()> {
    if r == 0 || m > r {
        return param(format!("need r ≥ 1 and 0 ≤ m ≤ r, got r={r}, m={m}"));
    }
    Ok(())
}

/// `Σ_{ρ₁≥…≥ρ_r} q^{Σ ρ_i(ρ_i+1)/2}/(q)_ρ · (1 + Σ_{i<m} q^{Σ_{j≤i}(ρ_{r−m+j}+1)})`.
///
/// `m = r` is accepted: the first extra term refers to `ρ₀ = ∞`, so the
/// sum equals the `m = 0` sum.
pub fn fermionic_rho_sum(r: usize, m: usize, order: usize) -> Result<TruncatedSeries> {
    check_rank_marker(r, m)?;
    let cost = |_: usize, v: u64| tri(v);
    Ok(decreasing_sum(r, order, &cost, &|lam| {
        let base: u64 = lam.iter().map(|&v| tri(v)).sum();
        tail_factor(lam, m, |i| r - m + i).shift(base as usize)
    }))
}

/// The same sum with the extra factor `1 + Σ_{i<m′} q^{Σ_{j≤i}(λ_{r−1−2j}+1)}`,
/// `m′ = min(m, r − m)`.
pub fn fermionic_alt_sum(r: usize, m: usize, order: usize) -> Result<TruncatedSeries> {
    check_rank_marker(r, m)?;
    let mp = m.min(r - m);
    let cost = |_: usize, v: u64| tri(v);
    Ok(decreasing_sum(r, order, &cost, &|lam| {
        let base: u64 = lam.iter().map(|&v| tri(v)).sum();
        // indices r−1−2j for j ≤ i; all ≥ 1 because i < m′ ≤ r/2
        let mut acc = Polynomial::one();
        let mut e = 0u64;
        for i in 0..mp {
            e += lam[r - 2 - 2 * i] + 1;
            acc = &acc + &mono(e);
        }
        acc.shift(base as usize)
    }))
}

fn check_half(k: usize, m: usize) -> Result<()> {
    if m > k {
        return param(format!("need 0 ≤ m ≤ k, got k={k}, m={m}"));
    }
    Ok(())
}

/// `(−q)_∞ Σ_{λ₁≥…≥λ_k} q^{Σ(λ_i² + λ_i)}/(q)_λ · (1 + Σ_{i<m} q^{Σ_{j≤i}(λ_{k−j}+1)})`.
pub fn reduced_sum_odd(k: usize, m: usize, order: usize) -> Result<TruncatedSeries> {
    check_half(k, m)?;
    let cost = |_: usize, v: u64| v * v + v;
    let inner = decreasing_sum(k, order, &cost, &|lam| {
        let base: u64 = lam.iter().map(|&v| v * v + v).sum();
        tail_factor(lam, m, |i| k - i).shift(base as usize)
    });
    Ok(&minus_q_infinity(order) * &inner)
}

/// `Σ_{λ₁≥…≥λ_k} (−q)_{λ₁} q^{T(λ₁) + Σ_{i≥2}(λ_i² + λ_i)}/(q)_λ · (1 + Σ_{i<m} q^{Σ_{j≤i}(λ_{k−j}+1)})`.
pub fn reduced_sum_even(k: usize, m: usize, order: usize) -> Result<TruncatedSeries> {
    if k == 0 {
        return param("k must be at least 1");
    }
    check_half(k, m)?;
    let cost = |i: usize, v: u64| if i == 0 { tri(v) } else { v * v + v };
    Ok(decreasing_sum(k, order, &cost, &|lam| {
        let base: u64 = tri(lam[0]) + lam[1..].iter().map(|&v| v * v + v).sum::<u64>();
        let f = tail_factor(lam, m, |i| k - i).shift(base as usize);
        &f * &minus_q_poch(lam[0], order)
    }))
}

/// `J_{k,i}(0, q^e, q) = Σ_{λ₁≥…≥λ_{k−1}} q^{e|λ| + Σλ_j² + Σ_{j≥i} λ_j}/(q)_λ`.
pub fn andrews_j(k: usize, i: usize, e: u64, order: usize) -> Result<TruncatedSeries> {
    if k == 0 || i == 0 || i > k {
        return param(format!("need 1 ≤ i ≤ k, got k={k}, i={i}"));
    }
    let weight = |j: usize, v: u64| v * v + e * v + if j + 1 >= i { v } else { 0 };
    Ok(decreasing_sum(k - 1, order, &weight, &|lam| {
        let total: u64 = lam.iter().enumerate().map(|(j, &v)| weight(j, v)).sum();
        mono(total)
    }))
}

/// `E_{k+1,i}(q^e, q) = Σ_{λ₁≥…≥λ_k} q^{T(λ₁) + Σ_{j≥2}λ_j² + Σ_{j≥i}λ_j}
/// (−1/a)_{λ₁} a^{λ₁}/(q)_λ` with `a = q^e`.
///
/// `(−1/a)_n aⁿ = ∏_{t<n}(q^e + q^t)`, which has negative exponents for
/// `e < −1`; those are rejected.
pub fn corteel_e(k: usize, i: usize, e: i64, order: usize) -> Result<TruncatedSeries> {
    if k == 0 || i == 0 || i > k + 1 {
        return param(format!("need k ≥ 1 and 1 ≤ i ≤ k+1, got k={k}, i={i}"));
    }
    if e < -1 {
        return domain(format!("a = q^{e} produces negative exponents (need e ≥ −1)"));
    }
    // q^e + q^t = q^{min(e,t)} (1 + q^{|e−t|})
    let offset = |n: u64| -> i64 { (0..n as i64).map(|t| t.min(e)).sum() };
    let linear = |j: usize, v: u64| if j + 1 >= i { v } else { 0 };
    let cost = |j: usize, v: u64| {
        let quad = if j == 0 { (tri(v) as i64 + offset(v)) as u64 } else { v * v };
        quad + linear(j, v)
    };
    Ok(decreasing_sum(k, order, &cost, &|lam| {
        let total: u64 = lam.iter().enumerate().map(|(j, &v)| cost(j, v)).sum();
        let mut f = Polynomial::one();
        for t in 0..lam[0] as i64 {
            let gap = (e - t).unsigned_abs() as usize;
            let mut c = vec![BigInt::from(0); gap + 1];
            c[0] += 1;
            c[gap] += 1;
            f = (&f * &Polynomial::from_coeffs(c)).truncated(order);
        }
        f.shift(total as usize)
    }))
}
