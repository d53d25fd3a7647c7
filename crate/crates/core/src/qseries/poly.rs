use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::series::TruncatedSeries;

/// An exact polynomial in `q` with integer coefficients, trimmed so the
/// leading coefficient is nonzero (the zero polynomial is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { coeffs: vec![BigInt::one()] }
    }

    pub fn monomial(k: usize, c: impl Into<BigInt>) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs.iter().cloned(), order)
    }

    /// Keeps only the terms of degree `≤ cap`.
    pub fn truncated(&self, cap: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(cap + 1).cloned().collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn to_i64s(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| i64::try_from(c).expect("coefficient exceeds i64")).collect()
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|d| self.coeff(d) + rhs.coeff(d)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|d| self.coeff(d) - rhs.coeff(d)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            match (d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{d}")?,
                (_, false) => write!(f, "{mag}q^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_trims() {
        let a = Polynomial::from_i64s(&[1, 1]);
        let b = Polynomial::from_i64s(&[1, -1]);
        assert_eq!(&a * &b, Polynomial::from_i64s(&[1, 0, -1]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(Polynomial::from_i64s(&[2, 2, 1]).to_string(), "2 + 2q + q^2");
        assert_eq!(a.shift(2), Polynomial::from_i64s(&[0, 0, 1, 1]));
    }
}
