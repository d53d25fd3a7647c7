use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

use super::poly::Polynomial;
use super::series::{big_to_json, TruncatedSeries};

/// A power series in `t` whose coefficients are polynomials in `q`, known
/// exactly through `t^t_order`.
///
/// `q_cap`, when set, means only the `q`-degrees `≤ q_cap` are meaningful
/// (and stored); it arises when a truncated univariate series is promoted,
/// or when the caller asks for a cap to bound memory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivariateSeries {
    coeffs: Vec<Polynomial>,
    q_cap: Option<usize>,
}

fn min_cap(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl BivariateSeries {
    pub fn zero(t_order: usize) -> Self {
        Self { coeffs: vec![Polynomial::zero(); t_order + 1], q_cap: None }
    }

    pub fn one(t_order: usize) -> Self {
        let mut s = Self::zero(t_order);
        s.coeffs[0] = Polynomial::one();
        s
    }

    /// `q^a t^b` (zero when `b` exceeds the order).
    pub fn monomial(q_exp: usize, t_exp: usize, t_order: usize) -> Self {
        let mut s = Self::zero(t_order);
        if t_exp <= t_order {
            s.coeffs[t_exp] = Polynomial::monomial(q_exp, 1);
        }
        s
    }

    pub fn from_polys(mut coeffs: Vec<Polynomial>, t_order: usize) -> Self {
        coeffs.resize(t_order + 1, Polynomial::zero());
        coeffs.truncate(t_order + 1);
        Self { coeffs, q_cap: None }
    }

    /// A series in `q` alone, placed at `t^0`; its truncation order becomes
    /// the `q`-cap.
    pub fn from_q_series(s: &TruncatedSeries, t_order: usize) -> Self {
        let mut out = Self::zero(t_order);
        out.coeffs[0] = Polynomial::from_coeffs(s.coeffs().to_vec());
        out.q_cap = Some(s.order());
        out
    }

    pub fn with_q_cap(mut self, cap: Option<usize>) -> Self {
        self.q_cap = min_cap(self.q_cap, cap);
        if let Some(c) = self.q_cap {
            for p in &mut self.coeffs {
                *p = p.truncated(c);
            }
        }
        self
    }

    pub fn t_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn q_cap(&self) -> Option<usize> {
        self.q_cap
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// The `q`-polynomial multiplying `t^k` (zero beyond the order).
    pub fn t_coeff(&self, k: usize) -> Polynomial {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Coefficients at `q = 1`, as a series in `t`.
    pub fn at_q_equals_one(&self) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs.iter().map(Polynomial::eval_at_one), self.t_order())
    }

    pub fn truncate_t(&self, t_order: usize) -> Self {
        let n = t_order.min(self.t_order());
        Self { coeffs: self.coeffs[..=n].to_vec(), q_cap: self.q_cap }
    }

    /// Multiplicative inverse. The `t^0` coefficient must be `±1`, or, when
    /// a `q`-cap is present, a polynomial with constant term `±1` (inverted
    /// as a series up to the cap).
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        let c0 = a0.coeff(0);
        if !(c0.is_one() || (-&c0).is_one()) {
            return domain(format!("cannot invert: t^0 coefficient {a0} does not have a unit constant term"));
        }
        let inv0 = match (a0.degree(), self.q_cap) {
            (Some(0), _) => Polynomial::from_coeffs(vec![c0.clone()]),
            (_, Some(cap)) => {
                Polynomial::from_coeffs(a0.to_series(cap).invert()?.into_coeffs())
            }
            (_, None) => {
                return domain(format!(
                    "cannot invert: t^0 coefficient {a0} is not a unit polynomial and no q-cap is set"
                ))
            }
        };
        let cap = self.q_cap;
        let clip = |p: Polynomial| match cap {
            Some(c) => p.truncated(c),
            None => p,
        };
        let n = self.t_order();
        let mut inv = vec![Polynomial::zero(); n + 1];
        inv[0] = inv0.clone();
        for d in 1..=n {
            let mut acc = Polynomial::zero();
            for k in 1..=d {
                if !self.coeffs[k].is_zero() && !inv[d - k].is_zero() {
                    acc = &acc + &clip(&self.coeffs[k] * &inv[d - k]);
                }
            }
            inv[d] = clip(-&(&acc * &inv0));
        }
        Ok(Self { coeffs: inv, q_cap: cap })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = Self::one(self.t_order()).with_q_cap(self.q_cap);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// In place: multiply by `(1 − c·q^a t^b)^{±1}` (`b ≥ 1`).
    pub(crate) fn apply_binomial(&mut self, q_exp: usize, t_exp: usize, c: &BigInt, inverse: bool) {
        assert!(t_exp >= 1);
        let n = self.t_order();
        let factor = Polynomial::monomial(q_exp, c.clone());
        let cap = self.q_cap;
        let clip = |p: Polynomial| match cap {
            Some(cc) => p.truncated(cc),
            None => p,
        };
        if inverse {
            for d in t_exp..=n {
                let t = clip(&self.coeffs[d - t_exp] * &factor);
                self.coeffs[d] = &self.coeffs[d] + &t;
            }
        } else {
            for d in (t_exp..=n).rev() {
                let t = clip(&self.coeffs[d - t_exp] * &factor);
                self.coeffs[d] = &self.coeffs[d] - &t;
            }
        }
    }

    /// `t_degree,q_degree,coefficient` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_degree,q_degree,coefficient\n");
        for (t, p) in self.coeffs.iter().enumerate() {
            for (q, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push_str(&format!("{t},{q},{c}\n"));
                }
            }
        }
        out
    }
}

fn binop(a: &BivariateSeries, b: &BivariateSeries, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> BivariateSeries {
    let n = a.t_order().min(b.t_order());
    let coeffs = (0..=n).map(|d| f(&a.coeffs[d], &b.coeffs[d])).collect();
    BivariateSeries { coeffs, q_cap: None }.with_q_cap(min_cap(a.q_cap, b.q_cap))
}

impl Add<&BivariateSeries> for &BivariateSeries {
    type Output = BivariateSeries;
    fn add(self, rhs: &BivariateSeries) -> BivariateSeries {
        binop(self, rhs, |x, y| x + y)
    }
}

impl Sub<&BivariateSeries> for &BivariateSeries {
    type Output = BivariateSeries;
    fn sub(self, rhs: &BivariateSeries) -> BivariateSeries {
        binop(self, rhs, |x, y| x - y)
    }
}

impl Mul<&BivariateSeries> for &BivariateSeries {
    type Output = BivariateSeries;
    fn mul(self, rhs: &BivariateSeries) -> BivariateSeries {
        let n = self.t_order().min(rhs.t_order());
        let cap = min_cap(self.q_cap, rhs.q_cap);
        let mut coeffs = vec![Polynomial::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let mut p = &self.coeffs[i] * &rhs.coeffs[j];
                if let Some(c) = cap {
                    p = p.truncated(c);
                }
                coeffs[i + j] = &coeffs[i + j] + &p;
            }
        }
        BivariateSeries { coeffs, q_cap: cap }
    }
}

impl fmt::Display for BivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({p})")?,
                1 => write!(f, "({p})t")?,
                _ => write!(f, "({p})t^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.t_order() + 1)
    }
}

impl Serialize for BivariateSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<Vec<serde_json::Value>> =
            self.coeffs.iter().map(|p| p.coeffs().iter().map(big_to_json).collect()).collect();
        let mut st = serializer.serialize_struct("BivariateSeries", 3)?;
        st.serialize_field("t_order", &self.t_order())?;
        st.serialize_field("q_cap", &self.q_cap)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Which way a factor enters a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMode {
    /// `(1 − X)^{-1}`
    Reciprocal,
    /// `(1 + X)`
    Plus,
    /// `(1 − X)`
    Minus,
}

/// A family `∏_{n ≥ 1} f(q^{q_exp} t^{t_step·n + t_offset})^{power}` where
/// `f` is fixed by `mode`, optionally restricted to `t`-exponents whose
/// residue modulo `modulus` is not in `excluded`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorFamily {
    pub t_step: u64,
    pub t_offset: i64,
    pub q_exp: usize,
    pub mode: FactorMode,
    pub power: u32,
    pub exclude: Option<(u64, Vec<u64>)>,
}

impl FactorFamily {
    /// `∏_{n≥1} (1 − q^{q_exp} t^{t_step·n + t_offset})^{-1}`.
    pub fn reciprocal(t_step: u64, t_offset: i64, q_exp: usize) -> Self {
        Self { t_step, t_offset, q_exp, mode: FactorMode::Reciprocal, power: 1, exclude: None }
    }

    pub fn minus(t_step: u64, t_offset: i64, q_exp: usize) -> Self {
        Self { mode: FactorMode::Minus, ..Self::reciprocal(t_step, t_offset, q_exp) }
    }

    pub fn power(mut self, power: u32) -> Self {
        self.power = power;
        self
    }

    /// Skips `t`-exponents `i` with `i mod modulus ∈ residues`.
    pub fn excluding(mut self, modulus: u64, residues: Vec<u64>) -> Self {
        self.exclude = Some((modulus, residues));
        self
    }
}

/// Expands a product of factor families through `t^t_order`.
pub fn bivariate_product(factors: &[FactorFamily], t_order: usize) -> Result<BivariateSeries> {
    let mut acc = BivariateSeries::one(t_order);
    for fam in factors {
        if fam.t_step == 0 || fam.t_step as i64 + fam.t_offset < 1 {
            return domain(format!(
                "factor family t^({}n{:+}) has a t-exponent below 1 at n = 1",
                fam.t_step, fam.t_offset
            ));
        }
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        for n in 1.. {
            let e = fam.t_step as i64 * n + fam.t_offset;
            if e as usize > t_order {
                break;
            }
            if let Some((modulus, res)) = &fam.exclude {
                if res.contains(&(e as u64 % modulus)) {
                    continue;
                }
            }
            for _ in 0..fam.power {
                match fam.mode {
                    FactorMode::Reciprocal => acc.apply_binomial(fam.q_exp, e as usize, &one, true),
                    FactorMode::Minus => acc.apply_binomial(fam.q_exp, e as usize, &one, false),
                    FactorMode::Plus => acc.apply_binomial(fam.q_exp, e as usize, &minus_one, false),
                }
            }
        }
    }
    Ok(acc)
}
