//! The functionals `A[P]` and `A₂[P]` that integrate a polynomial in
//! `x₁, …, x_r, q` against a fermionic weight after substituting
//! `x_i = q^{λ_i}`, and the polynomial identities they annihilate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{param, Result};
use crate::qseries::{Polynomial, TruncatedSeries};

use super::fermionic::decreasing_sum;

/// A polynomial in `x₁, …, x_r` and `q` with integer coefficients, keyed by
/// `(x-exponents, q-exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    rank: usize,
    terms: BTreeMap<(Vec<u32>, u32), BigInt>,
}

impl SparsePoly {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(rank, 1, vec![0; rank], 0)
    }

    fn monomial(rank: usize, c: impl Into<BigInt>, x: Vec<u32>, q: u32) -> Self {
        let mut s = Self::zero(rank);
        s.insert(x, q, c.into());
        s
    }

    /// `x_i` with `x_{<1} = 0` and `x_{>r} = 1`.
    pub fn x(rank: usize, i: i64) -> Self {
        if i < 1 {
            return Self::zero(rank);
        }
        if i as usize > rank {
            return Self::one(rank);
        }
        let mut e = vec![0; rank];
        e[i as usize - 1] = 1;
        Self::monomial(rank, 1, e, 0)
    }

    /// `c·q^k`.
    pub fn q_pow(rank: usize, k: u32, c: i64) -> Self {
        Self::monomial(rank, c, vec![0; rank], k)
    }

    /// `∏_{i ∈ indices} x_i` under the same boundary conventions.
    pub fn x_product(rank: usize, indices: impl IntoIterator<Item = i64>) -> Self {
        indices.into_iter().fold(Self::one(rank), |acc, i| &acc * &Self::x(rank, i))
    }

    /// Builds from `(coefficient, x-exponents, q-exponent)` triples.
    pub fn from_terms(rank: usize, terms: &[(i64, Vec<u32>, u32)]) -> Result<Self> {
        let mut s = Self::zero(rank);
        for (c, x, q) in terms {
            if x.len() != rank {
                return param(format!("exponent vector {x:?} has length {} but the rank is {rank}", x.len()));
            }
            s.insert(x.clone(), *q, BigInt::from(*c));
        }
        Ok(s)
    }

    fn insert(&mut self, x: Vec<u32>, q: u32, c: BigInt) {
        let slot = self.terms.entry((x, q)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32, &BigInt)> {
        self.terms.iter().map(|((x, q), c)| (x.as_slice(), *q, c))
    }

    /// True when no term involves `x_i` (one-based).
    pub fn free_of(&self, i: usize) -> bool {
        self.terms.keys().all(|(x, _)| x[i - 1] == 0)
    }

    /// `P(q^{λ₁}, …, q^{λ_r}, q)`.
    pub fn substitute(&self, lam: &[u64]) -> Polynomial {
        let mut coeffs: BTreeMap<usize, BigInt> = BTreeMap::new();
        for ((x, q), c) in &self.terms {
            let e = *q as u64 + x.iter().zip(lam).map(|(&a, &l)| a as u64 * l).sum::<u64>();
            *coeffs.entry(e as usize).or_insert_with(BigInt::zero) += c;
        }
        let top = coeffs.keys().next_back().map_or(0, |&k| k + 1);
        let mut v = vec![BigInt::zero(); top];
        for (k, c) in coeffs {
            v[k] = c;
        }
        Polynomial::from_coeffs(v)
    }
}

fn merge(a: &SparsePoly, b: &SparsePoly, sign: i8) -> SparsePoly {
    assert_eq!(a.rank, b.rank, "rank mismatch");
    let mut out = a.clone();
    for ((x, q), c) in &b.terms {
        let c = if sign < 0 { -c } else { c.clone() };
        out.insert(x.clone(), *q, c);
    }
    out
}

impl Add<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        merge(self, rhs, 1)
    }
}

impl Sub<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        merge(self, rhs, -1)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        merge(&SparsePoly::zero(self.rank), self, -1)
    }
}

impl Mul<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut out = SparsePoly::zero(self.rank);
        for ((xa, qa), ca) in &self.terms {
            for ((xb, qb), cb) in &rhs.terms {
                let x = xa.iter().zip(xb).map(|(a, b)| a + b).collect();
                out.insert(x, qa + qb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((x, q), c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mut factors = Vec::new();
            if *q > 0 {
                factors.push(if *q == 1 { "q".to_string() } else { format!("q^{q}") });
            }
            for (i, &e) in x.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            let mag = c.abs();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn check_rank(rank: usize, p: &SparsePoly) -> Result<()> {
    if p.rank != rank {
        return param(format!("polynomial has rank {} but the functional has rank {rank}", p.rank));
    }
    Ok(())
}

/// `A[P] = Σ_{λ₁≥…≥λ_r} q^{Σ λ_i(λ_i+1)/2}/(q)_λ · P(q^λ, q)`.
pub fn approx_functional(rank: usize, p: &SparsePoly, order: usize) -> Result<TruncatedSeries> {
    check_rank(rank, p)?;
    let cost = |_: usize, v: u64| v * (v + 1) / 2;
    Ok(decreasing_sum(rank, order, &cost, &|lam| {
        let base: u64 = lam.iter().map(|&v| v * (v + 1) / 2).sum();
        p.substitute(lam).shift(base as usize)
    }))
}

/// `A₂[P] = Σ_{λ₁≥…≥λ_k} (−q)_{λ₁} q^{(λ₁² − λ₁)/2 + Σ_{i≥2} λ_i²}/(q)_λ · P(q^λ, q)`.
pub fn approx2_functional(rank: usize, p: &SparsePoly, order: usize) -> Result<TruncatedSeries> {
    check_rank(rank, p)?;
    if rank == 0 {
        return param("rank must be at least 1");
    }
    let cost = |i: usize, v: u64| if i == 0 { v * v.saturating_sub(1) / 2 } else { v * v };
    Ok(decreasing_sum(rank, order, &cost, &|lam| {
        let base: u64 = lam.iter().enumerate().map(|(i, &v)| cost(i, v)).sum();
        let mut poch = Polynomial::one();
        for t in 1..=lam[0] as usize {
            if t > order {
                break;
            }
            poch = (&poch * &(&Polynomial::one() + &Polynomial::monomial(t, 1))).truncated(order);
        }
        &(p.substitute(lam).shift(base as usize)) * &poch
    }))
}

/// Which functional a lemma instance is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    Approx,
    Approx2,
}

/// `lhs ≈ rhs` (or `≈₂`) for a concrete choice of parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaInstance {
    pub label: String,
    pub functional: Functional,
    pub rank: usize,
    pub lhs: SparsePoly,
    pub rhs: SparsePoly,
}

impl LemmaInstance {
    /// The functional applied to `lhs − rhs`; zero when the lemma holds.
    pub fn defect(&self, order: usize) -> Result<TruncatedSeries> {
        let d = &self.lhs - &self.rhs;
        match self.functional {
            Functional::Approx => approx_functional(self.rank, &d, order),
            Functional::Approx2 => approx2_functional(self.rank, &d, order),
        }
    }
}

fn x(r: usize, i: i64) -> SparsePoly {
    SparsePoly::x(r, i)
}

fn q(r: usize, k: u32) -> SparsePoly {
    SparsePoly::q_pow(r, k, 1)
}

fn one(r: usize) -> SparsePoly {
    SparsePoly::one(r)
}

fn xs(r: usize, range: impl IntoIterator<Item = i64>) -> SparsePoly {
    SparsePoly::x_product(r, range)
}

fn require_free(p: &SparsePoly, vars: impl IntoIterator<Item = usize>, what: &str) -> Result<()> {
    for v in vars {
        if v >= 1 && v <= p.rank && !p.free_of(v) {
            return param(format!("P must not depend on x{v} ({what})"));
        }
    }
    Ok(())
}

/// `x_s(1 + q x_{s+1}) P ≈ x_{s+1}(1 + q x_{s−1}) P`, `P` free of `x_s`.
pub fn shift_lemma(r: usize, s: usize, p: &SparsePoly) -> Result<LemmaInstance> {
    if !(1 <= s && s <= r) {
        return param(format!("need 1 ≤ s ≤ r, got s={s}, r={r}"));
    }
    check_rank(r, p)?;
    require_free(p, [s], "shift lemma")?;
    let s = s as i64;
    let lhs = &(&x(r, s) * &(&one(r) + &(&q(r, 1) * &x(r, s + 1)))) * p;
    let rhs = &(&x(r, s + 1) * &(&one(r) + &(&q(r, 1) * &x(r, s - 1)))) * p;
    Ok(LemmaInstance { label: format!("shift r={r} s={s}"), functional: Functional::Approx, rank: r, lhs, rhs })
}

/// `Σ_{i<n} q^i ∏_{j≤i} x_{idx(j)}`.
fn chain_sum(r: usize, n: usize, idx: impl Fn(i64) -> i64) -> SparsePoly {
    let mut acc = SparsePoly::zero(r);
    for i in 0..n as i64 {
        let term = &q(r, i as u32) * &xs(r, (0..=i).map(&idx));
        acc = &acc + &term;
    }
    acc
}

/// `(Σ_{i<s} q^i ∏_{j≤i} x_{l−s+j}) P ≈ (Σ_{i<min(s,l−s)} q^i ∏_{j≤i} x_{l−1−2j}) P`
/// for `0 ≤ s ≤ l − 1`, `l ≤ r`, `P` depending only on `x_{≥l}`.
pub fn main_transformation(r: usize, l: usize, s: usize, p: &SparsePoly) -> Result<LemmaInstance> {
    if !(l <= r && s + 1 <= l) {
        return param(format!("need 0 ≤ s ≤ l−1 and l ≤ r, got l={l}, s={s}, r={r}"));
    }
    check_rank(r, p)?;
    require_free(p, 1..l, "main transformation")?;
    let (li, si) = (l as i64, s as i64);
    let lhs = &chain_sum(r, s, |j| li - si + j) * p;
    let rhs = &chain_sum(r, s.min(l - s), |j| li - 1 - 2 * j) * p;
    Ok(LemmaInstance {
        label: format!("transformation r={r} l={l} s={s}"),
        functional: Functional::Approx,
        rank: r,
        lhs,
        rhs,
    })
}

/// `(1 + q x_l) ∏_{i≤s} x_{l−1−2i} P ≈ (1 + q x_{l−2s−2}) ∏_{i≤s} x_{l−2i} P`
/// for `l ≤ r`, `0 ≤ s ≤ (l − 2)/2`.
pub fn second_transformation(r: usize, l: usize, s: usize, p: &SparsePoly) -> Result<LemmaInstance> {
    if !(l <= r && l >= 2 && 2 * s + 2 <= l) {
        return param(format!("need l ≤ r and 0 ≤ s ≤ (l−2)/2, got l={l}, s={s}, r={r}"));
    }
    check_rank(r, p)?;
    require_free(p, 1..l, "second transformation")?;
    let (li, si) = (l as i64, s as i64);
    let lhs = &(&(&one(r) + &(&q(r, 1) * &x(r, li))) * &xs(r, (0..=si).map(|i| li - 1 - 2 * i))) * p;
    let rhs = &(&(&one(r) + &(&q(r, 1) * &x(r, li - 2 * si - 2))) * &xs(r, (0..=si).map(|i| li - 2 * i))) * p;
    Ok(LemmaInstance {
        label: format!("second transformation r={r} l={l} s={s}"),
        functional: Functional::Approx,
        rank: r,
        lhs,
        rhs,
    })
}

/// For `s ≥ 2`: `x_s(1 + q x_s x_{s+1}) P ≈₂ x_{s+1}(1 + q x_{s−1} x_s) P`, `P`
/// free of `x_s`; for `s = 1`: `x₁(1 + x₂ + q x₁ x₂) P ≈₂ x₂ P`, `P` depending
/// only on `x_{≥2}`.
pub fn shift2_lemma(k: usize, s: usize, p: &SparsePoly) -> Result<LemmaInstance> {
    if !(1 <= s && s <= k) {
        return param(format!("need 1 ≤ s ≤ k, got s={s}, k={k}"));
    }
    check_rank(k, p)?;
    let si = s as i64;
    let (lhs, rhs) = if s >= 2 {
        require_free(p, [s], "≈₂ shift lemma")?;
        let lhs = &x(k, si) * &(&one(k) + &(&q(k, 1) * &(&x(k, si) * &x(k, si + 1))));
        let rhs = &x(k, si + 1) * &(&one(k) + &(&q(k, 1) * &(&x(k, si - 1) * &x(k, si))));
        (lhs, rhs)
    } else {
        require_free(p, [1], "≈₂ shift lemma")?;
        let lhs = &x(k, 1) * &(&(&one(k) + &x(k, 2)) + &(&q(k, 1) * &(&x(k, 1) * &x(k, 2))));
        (lhs, x(k, 2))
    };
    Ok(LemmaInstance {
        label: format!("shift2 k={k} s={s}"),
        functional: Functional::Approx2,
        rank: k,
        lhs: &lhs * p,
        rhs: &rhs * p,
    })
}

/// Squares of `x_i` for `i` in the range.
fn squares(k: usize, range: impl IntoIterator<Item = i64>) -> SparsePoly {
    range.into_iter().fold(one(k), |acc, i| &acc * &(&x(k, i) * &x(k, i)))
}

/// The two-index family for `1 ≤ s < l ≤ k + 1`:
/// `(x_l − x_s) ∏_{s<i≤l} x_i ∏_{i>l} x_i² ≈₂ q(x_{l−1} − x_{s−1}) ∏_{s≤i<l} x_i ∏_{i≥l} x_i²`
/// for `s ≥ 2`, and
/// `(x_l − x₁) ∏_{2≤i≤l} x_i ∏_{i>l} x_i² ≈₂ (1 + q x_{l−1}) ∏_{i<l} x_i ∏_{i≥l} x_i²`
/// for `s = 1`.
pub fn transformation2(k: usize, s: usize, l: usize) -> Result<LemmaInstance> {
    if !(1 <= s && s < l && l <= k + 1) {
        return param(format!("need 1 ≤ s < l ≤ k+1, got s={s}, l={l}, k={k}"));
    }
    let (si, li, ki) = (s as i64, l as i64, k as i64);
    let lhs = &(&(&x(k, li) - &x(k, si)) * &xs(k, si + 1..=li)) * &squares(k, li + 1..=ki);
    let rhs = if s >= 2 {
        &(&(&q(k, 1) * &(&x(k, li - 1) - &x(k, si - 1))) * &xs(k, si..li)) * &squares(k, li..=ki)
    } else {
        &(&(&one(k) + &(&q(k, 1) * &x(k, li - 1))) * &xs(k, 1..li)) * &squares(k, li..=ki)
    };
    Ok(LemmaInstance {
        label: format!("two-index k={k} s={s} l={l}"),
        functional: Functional::Approx2,
        rank: k,
        lhs,
        rhs,
    })
}

/// `(1 − x_s) ∏_{i>s} x_i ≈₂ q^{s−1}(1 + q x_{k−s+1}) ∏_{i≤k−s+1} x_i ∏_{i≥k−s+2} x_i²`.
pub fn trans3(k: usize, s: usize) -> Result<LemmaInstance> {
    if !(1 <= s && s <= k) {
        return param(format!("need 1 ≤ s ≤ k, got s={s}, k={k}"));
    }
    let (si, ki) = (s as i64, k as i64);
    let lhs = &(&one(k) - &x(k, si)) * &xs(k, si + 1..=ki);
    let rhs = &(&(&q(k, s as u32 - 1) * &(&one(k) + &(&q(k, 1) * &x(k, ki - si + 1)))) * &xs(k, 1..=ki - si + 1))
        * &squares(k, ki - si + 2..=ki);
    Ok(LemmaInstance { label: format!("telescoping k={k} s={s}"), functional: Functional::Approx2, rank: k, lhs, rhs })
}

/// `∏_{i>m} x_i ≈₂ (2 Σ_{i<m} q^i ∏_{j>k−i} x_j + q^m ∏_{i>k−m} x_i) ∏_i x_i`.
pub fn transformation3(k: usize, m: usize) -> Result<LemmaInstance> {
    if k == 0 || m > k {
        return param(format!("need k ≥ 1 and 0 ≤ m ≤ k, got k={k}, m={m}"));
    }
    Ok(LemmaInstance {
        label: format!("product k={k} m={m}"),
        functional: Functional::Approx2,
        rank: k,
        lhs: xs(k, m as i64 + 1..=k as i64),
        rhs: transformation3_rhs(k, m),
    })
}

/// The right-hand side of [`transformation3`], which is also the integrand
/// of the weighted even-rank sum.
pub fn transformation3_rhs(k: usize, m: usize) -> SparsePoly {
    let ki = k as i64;
    let mut inner = SparsePoly::zero(k);
    for i in 0..m as i64 {
        let t = &SparsePoly::q_pow(k, i as u32, 2) * &xs(k, ki - i + 1..=ki);
        inner = &inner + &t;
    }
    inner = &inner + &(&q(k, m as u32) * &xs(k, ki - m as i64 + 1..=ki));
    &inner * &xs(k, 1..=ki)
}

/// `∏_i x_i · (1 + Σ_{i<m} q^{i+1} ∏_{j≤i} x_{k−j})`, whose `A₂` is the
/// even-rank reduced sum.
pub fn reduced_even_integrand(k: usize, m: usize) -> SparsePoly {
    let ki = k as i64;
    let mut f = one(k);
    for i in 0..m as i64 {
        f = &f + &(&q(k, i as u32 + 1) * &xs(k, (0..=i).map(|j| ki - j)));
    }
    &f * &xs(k, 1..=ki)
}

/// Every instance of the `≈` lemmas with rank at most `max_r`, each with
/// `P = 1` and with `P` a product of the admissible variables.
pub fn approx_lemma_instances(max_r: usize) -> Vec<LemmaInstance> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        for s in 1..=r {
            let others = xs(r, (1..=r as i64).filter(|&i| i != s as i64));
            for p in [one(r), others] {
                out.push(shift_lemma(r, s, &p).expect("valid parameters"));
            }
        }
        for l in 1..=r {
            let upper = xs(r, l as i64..=r as i64);
            for s in 0..l {
                for p in [one(r), upper.clone()] {
                    out.push(main_transformation(r, l, s, &p).expect("valid parameters"));
                }
            }
            if l >= 2 {
                for s in 0..=(l - 2) / 2 {
                    for p in [one(r), upper.clone()] {
                        out.push(second_transformation(r, l, s, &p).expect("valid parameters"));
                    }
                }
            }
        }
    }
    out
}

/// Every instance of the `≈₂` lemmas with rank at most `max_k`.
pub fn approx2_lemma_instances(max_k: usize) -> Vec<LemmaInstance> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for s in 1..=k {
            let free = if s >= 2 {
                xs(k, (1..=k as i64).filter(|&i| i != s as i64))
            } else {
                xs(k, 2..=k as i64)
            };
            for p in [one(k), free] {
                out.push(shift2_lemma(k, s, &p).expect("valid parameters"));
            }
            out.push(trans3(k, s).expect("valid parameters"));
        }
        for l in 2..=k + 1 {
            for s in 1..l {
                out.push(transformation2(k, s, l).expect("valid parameters"));
            }
        }
        for m in 0..=k {
            out.push(transformation3(k, m).expect("valid parameters"));
        }
    }
    out
}


#[cfg(test)]
mod sweep {
    use super::*;

    #[test]
    fn every_lemma_instance_vanishes() {
        let mut failed = Vec::new();
        for inst in approx_lemma_instances(4).into_iter().chain(approx2_lemma_instances(3)) {
            let d = inst.defect(10).unwrap();
            if !d.is_zero() {
                failed.push(format!("{}: {} [{} vs {}]", inst.label, d, inst.lhs, inst.rhs));
            }
        }
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
