use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{param, Result};
use crate::qseries::{euler_product, gordon_product, minus_q_infinity, TruncatedSeries};

/// `(p, p′, r, s)` of a normalized Virasoro character `χ̄^{p,p′}_{r,s}`.
///
/// Construction checks `1 < p < p′`, `1 ≤ r < p` and `1 ≤ s < p′`;
/// coprimality is not required so the sum formula can be evaluated on
/// non-minimal labels, see [`MinimalModelLabel::is_coprime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MinimalModelLabel {
    pub p: i64,
    pub pp: i64,
    pub r: i64,
    pub s: i64,
}

impl MinimalModelLabel {
    pub fn new(p: i64, pp: i64, r: i64, s: i64) -> Result<Self> {
        if !(1 < p && p < pp) {
            return param(format!("need 1 < p < p′, got p={p}, p′={pp}"));
        }
        if !(1 <= r && r < p) {
            return param(format!("row r={r} outside 1 ≤ r < p={p}"));
        }
        if !(1 <= s && s < pp) {
            return param(format!("column s={s} outside 1 ≤ s < p′={pp}"));
        }
        Ok(Self { p, pp, r, s })
    }

    /// Minimal models exist only for coprime `(p, p′)`.
    pub fn is_coprime(&self) -> bool {
        self.p.gcd(&self.pp) == 1
    }

    /// The label `(p, p′, p − r, p′ − s)` with the same character.
    pub fn reflected(&self) -> Self {
        Self { r: self.p - self.r, s: self.pp - self.s, ..*self }
    }
}

/// `Δ = ((p′r − ps)² − (p′ − p)²) / (4pp′)`.
pub fn conformal_dimension(label: &MinimalModelLabel) -> BigRational {
    let MinimalModelLabel { p, pp, r, s } = *label;
    let num = BigInt::from(pp * r - p * s).pow(2) - BigInt::from(pp - p).pow(2);
    BigRational::new(num, BigInt::from(4 * p * pp))
}

/// `(1/(q)_∞) Σ_{λ∈ℤ} (q^{λ²pp′ + λ(p′r − ps)} − q^{(λp + r)(λp′ + s)})`.
///
/// Both exponents are increasing in `λ ≥ 0` and in `−λ ≥ 1`, so each
/// direction stops at the first `λ` where both exceed the order.
pub fn virasoro_char(label: &MinimalModelLabel, order: usize) -> TruncatedSeries {
    let MinimalModelLabel { p, pp, r, s } = *label;
    let n = order as i64;
    let mut num = vec![BigInt::from(0); order + 1];
    for dir in [1i64, -1] {
        let mut lam = if dir > 0 { 0 } else { -1 };
        loop {
            let e1 = lam * lam * p * pp + lam * (pp * r - p * s);
            let e2 = (lam * p + r) * (lam * pp + s);
            if e1 > n && e2 > n {
                break;
            }
            if e1 <= n {
                num[e1 as usize] += 1;
            }
            if e2 <= n {
                num[e2 as usize] -= 1;
            }
            lam += dir;
        }
    }
    let num = TruncatedSeries::from_coeffs(num, order);
    &num * &euler_product(order).invert().expect("(q)_∞ is a unit")
}

/// `∏(1 + q^n) · ∏_{n ≢ 0, ±(m+1) mod r+2} (1 − q^n)^{-1}`.
pub fn theorem1_rhs(r: usize, m: usize, order: usize) -> Result<TruncatedSeries> {
    if r == 0 || m > r {
        return param(format!("need r ≥ 1 and 0 ≤ m ≤ r, got r={r}, m={m}"));
    }
    Ok(&minus_q_infinity(order) * &gordon_product(r as u64 + 2, m as u64 + 1, order))
}

/// `(−q)_∞ · χ̄^{2, r+2}_{1, m+1}`.
pub fn theorem1_char_rhs(r: usize, m: usize, order: usize) -> Result<TruncatedSeries> {
    if r == 0 || m > r {
        return param(format!("need r ≥ 1 and 0 ≤ m ≤ r, got r={r}, m={m}"));
    }
    let label = MinimalModelLabel::new(2, r as i64 + 2, 1, m as i64 + 1)?;
    Ok(&minus_q_infinity(order) * &virasoro_char(&label, order))
}

/// The `s = 2` character `χ^{p,p′}_{a₁,b₁} = (q)_∞^{-1} χ̄^{p,p′}_{a₁+1,b₁+1}`.
pub fn ffjmm_char_s2(p: i64, pp: i64, a1: i64, b1: i64, order: usize) -> Result<TruncatedSeries> {
    if !(pp > p && p > 1) {
        return param(format!("need p′ > p > 1, got p={p}, p′={pp}"));
    }
    if p.gcd(&pp) != 1 {
        return param(format!("p={p} and p′={pp} are not coprime"));
    }
    if !(0 <= a1 && a1 <= p - 2 && 0 <= b1 && b1 <= pp - 2) {
        return param(format!("need 0 ≤ a₁ ≤ p−2 and 0 ≤ b₁ ≤ p′−2, got a₁={a1}, b₁={b1}"));
    }
    Ok(s2_reduction(&MinimalModelLabel::new(p, pp, a1 + 1, b1 + 1)?, order))
}

/// `(q)_∞^{-1} χ̄` for any label, coprime or not.
pub(crate) fn s2_reduction(label: &MinimalModelLabel, order: usize) -> TruncatedSeries {
    let inv = euler_product(order).invert().expect("(q)_∞ is a unit");
    &inv * &virasoro_char(label, order)
}
