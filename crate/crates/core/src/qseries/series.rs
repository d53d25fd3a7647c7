use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Result};

use super::poly::Polynomial;

/// A power series in `q` known exactly through `q^order`.
///
/// Binary operations between series of different orders truncate to the
/// smaller order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    // invariant: coeffs.len() == order + 1
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, BigInt::one(), order)
    }

    /// `c·q^k`, or the zero series when `k > order`.
    pub fn monomial(k: usize, c: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c.into();
        }
        s
    }

    /// Takes the given coefficients, padding with zeros or dropping the
    /// ones beyond `order`.
    pub fn from_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>, order: usize) -> Self {
        let mut v: Vec<BigInt> = coeffs.into_iter().take(order + 1).map(Into::into).collect();
        v.resize(order + 1, BigInt::zero());
        Self { coeffs: v }
    }

    pub fn from_i64s(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().copied(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients as `i64`, panicking on overflow. Test and display helper.
    pub fn to_i64s(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| i64::try_from(c).expect("coefficient exceeds i64")).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().cloned(), order.min(self.order()))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for d in k..=n {
            out.coeffs[d] = self.coeffs[d - k].clone();
        }
        out
    }

    /// Substitutes `q ↦ q^c` (`c ≥ 1`).
    pub fn dilate(&self, c: usize) -> Self {
        assert!(c >= 1, "dilation factor must be positive");
        let n = self.order();
        let mut out = Self::zero(n);
        for (d, v) in self.coeffs.iter().enumerate() {
            if d * c > n {
                break;
            }
            out.coeffs[d * c] = v.clone();
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    /// In place: `self ← self · (1 − c·q^k)`, `k ≥ 1`.
    pub fn mul_binomial(&mut self, k: usize, c: &BigInt) {
        assert!(k >= 1);
        let n = self.order();
        for d in (k..=n).rev() {
            let t = &self.coeffs[d - k] * c;
            self.coeffs[d] -= t;
        }
    }

    /// In place: `self ← self / (1 − c·q^k)`, `k ≥ 1`.
    pub fn div_binomial(&mut self, k: usize, c: &BigInt) {
        assert!(k >= 1);
        let n = self.order();
        for d in k..=n {
            let t = &self.coeffs[d - k] * c;
            self.coeffs[d] += t;
        }
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return domain(format!("cannot invert a series with constant term {c0}"));
        }
        let n = self.order();
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = c0.clone();
        for d in 1..=n {
            let mut acc = BigInt::zero();
            for k in 1..=d {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &inv[d - k];
                }
            }
            // c0 is ±1, so dividing by it is multiplying by it
            inv[d] = -(acc * c0);
        }
        Ok(Self { coeffs: inv })
    }

    /// Integer power; negative exponents go through [`Self::invert`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Value at `q = 1` of the truncation (sum of the known coefficients).
    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `degree,coefficient` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,coefficient\n");
        for (d, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{d},{c}\n"));
        }
        out
    }
}

impl From<&Polynomial> for TruncatedSeries {
    fn from(p: &Polynomial) -> Self {
        p.to_series(p.degree().unwrap_or(0))
    }
}

fn mul_into(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Mul<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: mul_into(&self.coeffs, &rhs.coeffs, n) }
    }
}

impl Add<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|d| &self.coeffs[d] + &rhs.coeffs[d]).collect() }
    }
}

impl Sub<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|d| &self.coeffs[d] - &rhs.coeffs[d]).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries { (&self).$m(&rhs) }
        }
        impl $tr<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: &TruncatedSeries) -> TruncatedSeries { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
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
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// JSON numbers that keep arbitrary-precision integers intact.
pub(crate) fn big_to_json(c: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(c.to_string().parse().expect("integer literal is a JSON number"))
}

pub(crate) fn json_to_big(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(big_to_json).collect();
        let mut st = serializer.serialize_struct("TruncatedSeries", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            order: usize,
            coeffs: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "expected {} coefficients for order {}, found {}",
                raw.order + 1,
                raw.order,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|v| json_to_big(v).ok_or_else(|| serde::de::Error::custom("coefficient is not an integer")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64s(c, n)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&s(&[1, 1], 2) * &s(&[1, -1], 2), s(&[1, 0, -1], 2));
        assert_eq!(&s(&[1, 1, 1], 2) * &s(&[1, 1, 1], 2), s(&[1, 2, 3], 2));
        let a = s(&[3, -1, 4, 1, 5], 4);
        assert_eq!(&a * &TruncatedSeries::one(4), a);
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = s(&[1, 1, 1, 1], 3);
        let b = s(&[1, 1], 1);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!((&a * &b).order(), 1);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(s(&[1, -1], 5).invert().unwrap(), s(&[1, 1, 1, 1, 1, 1], 5));
        assert_eq!(TruncatedSeries::one(3).invert().unwrap(), TruncatedSeries::one(3));
        let d = &s(&[1, -1], 4) * &s(&[1, 0, -1], 4);
        assert_eq!(d.invert().unwrap(), s(&[1, 1, 2, 2, 3], 4));
        assert_eq!(s(&[-1, 1], 3).invert().unwrap(), s(&[-1, -1, -1, -1], 3));
        assert!(matches!(s(&[2, 1], 3).invert(), Err(crate::Error::Domain(_))));
        assert!(s(&[0, 1], 3).invert().is_err());
    }

    #[test]
    fn in_place_binomials_agree_with_mul() {
        let a = s(&[1, 2, 0, -3, 5, 1], 5);
        let mut b = a.clone();
        b.mul_binomial(2, &BigInt::from(1));
        assert_eq!(b, &a * &s(&[1, 0, -1], 5));
        b.div_binomial(2, &BigInt::from(1));
        assert_eq!(b, a);
    }

    #[test]
    fn display_and_csv() {
        assert_eq!(s(&[1, -1, 0, 2], 3).to_string(), "1 - q + 2q^3 + O(q^4)");
        assert_eq!(s(&[0, 1], 1).to_csv(), "degree,coefficient\n0,0\n1,1\n");
    }

    #[test]
    fn json_round_trip_keeps_big_coefficients() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let a = TruncatedSeries::from_coeffs(vec![BigInt::one(), big], 1);
        let txt = serde_json::to_string(&a).unwrap();
        assert_eq!(txt, r#"{"order":1,"coeffs":[1,123456789012345678901234567890]}"#);
        let back: TruncatedSeries = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"order":2,"coeffs":[1]}"#).is_err());
    }

    fn series(n: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-20i64..20, n + 1).prop_map(move |v| TruncatedSeries::from_i64s(&v, n))
    }

    proptest! {
        #[test]
        fn ring_laws(a in series(8), b in series(8), c in series(8)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn invert_is_two_sided(mut a in series(10), sign in prop::bool::ANY) {
            a.coeffs[0] = if sign { BigInt::one() } else { -BigInt::one() };
            let inv = a.invert().unwrap();
            prop_assert_eq!(&a * &inv, TruncatedSeries::one(10));
            prop_assert_eq!(&inv * &a, TruncatedSeries::one(10));
        }
    }
}
