//! Infinite q-products, q-Pochhammer symbols and Gaussian polynomials.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{domain, param, Result};

use super::bivariate::FactorMode;
use super::poly::Polynomial;
use super::series::TruncatedSeries;

/// `∏_{n ≥ 1, n mod modulus ∈ allowed} f(q^{scale·n})` through `q^order`,
/// with `f` chosen by `mode`.
pub fn residue_product(
    modulus: u64,
    allowed: &[u64],
    mode: FactorMode,
    scale: u64,
    order: usize,
) -> Result<TruncatedSeries> {
    if modulus == 0 {
        return param("modulus must be at least 1");
    }
    if scale == 0 {
        return param("scale must be a positive integer");
    }
    if let Some(bad) = allowed.iter().find(|&&a| a >= modulus) {
        return param(format!("residue {bad} is not reduced modulo {modulus}"));
    }
    let mut acc = TruncatedSeries::one(order);
    let one = BigInt::one();
    let minus_one = -BigInt::one();
    for n in 1..=order as u64 {
        let k = (scale * n) as usize;
        if k > order {
            break;
        }
        if !allowed.contains(&(n % modulus)) {
            continue;
        }
        match mode {
            FactorMode::Reciprocal => acc.div_binomial(k, &one),
            FactorMode::Minus => acc.mul_binomial(k, &one),
            FactorMode::Plus => acc.mul_binomial(k, &minus_one),
        }
    }
    Ok(acc)
}

/// Residues `n mod modulus` for which `n ≢ 0, ±i`. Used by every
/// Gordon–Andrews style product.
pub fn residues_avoiding(modulus: u64, i: u64) -> Vec<u64> {
    let i = i % modulus;
    let neg = (modulus - i) % modulus;
    (0..modulus).filter(|&a| a != 0 && a != i && a != neg).collect()
}

/// `∏_{n ≥ 1, n ≢ 0, ±i (mod modulus)} (1 − q^n)^{-1}`.
pub fn gordon_product(modulus: u64, i: u64, order: usize) -> TruncatedSeries {
    residue_product(modulus, &residues_avoiding(modulus, i), FactorMode::Reciprocal, 1, order)
        .expect("residues are reduced")
}

/// `(−q)_∞ = ∏_{n≥1} (1 + q^n)`.
pub fn minus_q_infinity(order: usize) -> TruncatedSeries {
    residue_product(1, &[0], FactorMode::Plus, 1, order).expect("valid residue set")
}

/// `(q)_∞ = ∏_{n≥1} (1 − q^n)`.
pub fn euler_product(order: usize) -> TruncatedSeries {
    residue_product(1, &[0], FactorMode::Minus, 1, order).expect("valid residue set")
}

/// The q-Pochhammer symbol `(a)_n = ∏_{t<n} (1 − a q^t)` with
/// `a = sign·q^{base_exponent}`; `n = None` is the infinite product.
///
/// Every factor exponent `base_exponent + t` must be at least 1.
pub fn pochhammer(base_exponent: i64, sign: i8, n: Option<usize>, order: usize) -> Result<TruncatedSeries> {
    if sign != 1 && sign != -1 {
        return param(format!("sign must be ±1, got {sign}"));
    }
    if base_exponent < 1 && n != Some(0) {
        return domain(format!(
            "factor exponent {base_exponent} is not positive; the product is not a unit power series"
        ));
    }
    let c = BigInt::from(sign);
    let mut acc = TruncatedSeries::one(order);
    let mut t = 0usize;
    loop {
        if n.is_some_and(|n| t >= n) {
            break;
        }
        let k = base_exponent as usize + t;
        if k > order {
            break;
        }
        acc.mul_binomial(k, &c);
        t += 1;
    }
    Ok(acc)
}

/// Gaussian polynomial `[M, N]_q`; zero unless `M ≥ N ≥ 0`.
///
/// Built from the recursion `[M, N] = [M−1, N] + q^{M−N}[M−1, N−1]`, which
/// keeps everything in exact integer polynomials.
pub fn q_binomial(m: i64, n: i64) -> Polynomial {
    if !(m >= n && n >= 0) {
        return Polynomial::zero();
    }
    let (m, n) = (m as usize, n as usize);
    // row[j] = [i, j] for the current i
    let mut row: Vec<Polynomial> = vec![Polynomial::one()];
    for i in 1..=m {
        let mut next = Vec::with_capacity((i + 1).min(n + 1));
        for j in 0..=i.min(n) {
            let keep = if j < row.len() && j < i { row[j].clone() } else { Polynomial::zero() };
            let step = if j >= 1 { row[j - 1].shift(i - j) } else { Polynomial::zero() };
            next.push(&keep + &step);
        }
        row = next;
    }
    row[n].clone()
}

/// `(q)_λ = (q)_{λ₁−λ₂} ⋯ (q)_{λ_{s−1}−λ_s} (q)_{λ_s}` for a weakly
/// decreasing nonnegative vector.
pub fn q_poch_lambda(lambda: &[u64], order: usize) -> Result<TruncatedSeries> {
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return domain(format!("{lambda:?} is not weakly decreasing"));
    }
    let mut acc = TruncatedSeries::one(order);
    for d in poch_lambda_steps(lambda) {
        acc = &acc * &pochhammer(1, 1, Some(d as usize), order)?;
    }
    Ok(acc)
}

/// The lengths `λ₁−λ₂, …, λ_{s−1}−λ_s, λ_s` entering `(q)_λ`.
pub(crate) fn poch_lambda_steps(lambda: &[u64]) -> impl Iterator<Item = u64> + '_ {
    (0..lambda.len()).map(move |i| lambda[i] - lambda.get(i + 1).copied().unwrap_or(0))
}

/// Reciprocals `1/(q)_d` for `d = 0..=max_d`, truncated at `order`.
#[derive(Debug, Clone)]
pub struct InversePochhammerTable {
    table: Vec<TruncatedSeries>,
}

impl InversePochhammerTable {
    pub fn new(max_d: usize, order: usize) -> Self {
        let one = BigInt::one();
        let mut table = Vec::with_capacity(max_d + 1);
        let mut cur = TruncatedSeries::one(order);
        table.push(cur.clone());
        for d in 1..=max_d {
            if d <= order {
                cur.div_binomial(d, &one);
            }
            table.push(cur.clone());
        }
        Self { table }
    }

    pub fn get(&self, d: usize) -> &TruncatedSeries {
        &self.table[d]
    }

    /// `1/(q)_λ` for a weakly decreasing vector.
    pub fn inverse_lambda(&self, lambda: &[u64], order: usize) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(order);
        for d in poch_lambda_steps(lambda) {
            if d > 0 {
                acc = &acc * self.get(d as usize);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, PartitionConstraints};

    fn s(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64s(c, n)
    }

    #[test]
    fn residue_product_examples() {
        assert_eq!(residue_product(4, &[1, 3], FactorMode::Reciprocal, 1, 3).unwrap(), s(&[1, 1, 1, 2], 3));
        assert_eq!(residue_product(1, &[0], FactorMode::Plus, 1, 5).unwrap(), s(&[1, 1, 1, 2, 2, 3], 5));
        assert_eq!(residue_product(4, &[2], FactorMode::Reciprocal, 1, 4).unwrap(), s(&[1, 0, 1, 0, 1], 4));
        assert!(residue_product(4, &[4], FactorMode::Plus, 1, 4).is_err());
        // scale: ∏(1 − q^{2n})
        assert_eq!(residue_product(1, &[0], FactorMode::Minus, 2, 6).unwrap(), s(&[1, 0, -1, 0, -1, 0, 0], 6));
    }

    #[test]
    fn euler_identity_to_order_30() {
        let distinct = residue_product(1, &[0], FactorMode::Plus, 1, 30).unwrap();
        let odd = residue_product(2, &[1], FactorMode::Minus, 1, 30).unwrap();
        assert_eq!(distinct, odd.invert().unwrap());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(1, 1, Some(2), 5).unwrap(), s(&[1, -1, -1, 1], 5));
        assert_eq!(pochhammer(1, -1, None, 4).unwrap(), s(&[1, 1, 1, 2, 2], 4));
        assert_eq!(pochhammer(2, -1, Some(1), 3).unwrap(), s(&[1, 0, 1], 3));
        assert!(pochhammer(0, 1, Some(2), 3).is_err());
        assert_eq!(pochhammer(0, 1, Some(0), 3).unwrap(), TruncatedSeries::one(3));
    }

    #[test]
    fn q_binomial_examples() {
        assert_eq!(q_binomial(4, 2), Polynomial::from_i64s(&[1, 1, 2, 1, 1]));
        for m in 0..6 {
            assert_eq!(q_binomial(m, 0), Polynomial::one());
        }
        assert!(q_binomial(3, 5).is_zero());
        assert!(q_binomial(3, -1).is_zero());
    }

    #[test]
    fn q_binomial_recursion() {
        for m in 1..=12i64 {
            for n in 0..=m {
                let lhs = q_binomial(m, n);
                let rhs = &q_binomial(m - 1, n) + &q_binomial(m - 1, n - 1).shift((m - n) as usize);
                assert_eq!(lhs, rhs, "[{m},{n}]");
                if lhs.degree().is_some() {
                    assert_eq!(lhs.degree(), Some((n * (m - n)) as usize));
                }
            }
        }
    }

    #[test]
    fn q_binomial_matches_quotient_definition() {
        for m in 0..=8i64 {
            for n in 0..=m {
                let order = 20;
                let num = pochhammer(1, 1, Some(m as usize), order).unwrap();
                let den = &pochhammer(1, 1, Some(n as usize), order).unwrap()
                    * &pochhammer(1, 1, Some((m - n) as usize), order).unwrap();
                let quotient = &num * &den.invert().unwrap();
                assert_eq!(quotient, q_binomial(m, n).to_series(order));
            }
        }
    }

    #[test]
    fn q_binomial_counts_partitions_in_a_box() {
        for big_m in 0..=6u32 {
            for big_n in 0..=6usize {
                let poly = q_binomial((big_m as usize + big_n) as i64, big_n as i64);
                for n in 0..=(big_m * big_n as u32) {
                    let count =
                        enumerate_partitions(n, PartitionConstraints::boxed(big_m, big_n)).len() as i64;
                    assert_eq!(poly.coeff(n as usize), count.into(), "M={big_m} N={big_n} n={n}");
                }
            }
        }
    }

    #[test]
    fn q_poch_lambda_examples() {
        assert_eq!(q_poch_lambda(&[1, 0], 4).unwrap(), s(&[1, -1], 4));
        assert_eq!(q_poch_lambda(&[2, 1], 4).unwrap(), s(&[1, -2, 1], 4));
        assert_eq!(q_poch_lambda(&[0, 0, 0], 4).unwrap(), TruncatedSeries::one(4));
        assert!(q_poch_lambda(&[1, 2], 4).is_err());
    }

    #[test]
    fn inverse_table_inverts_q_poch_lambda() {
        let table = InversePochhammerTable::new(6, 12);
        for lam in [[3u64, 1, 0], [4, 4, 2], [6, 3, 3]] {
            let prod = &q_poch_lambda(&lam, 12).unwrap() * &table.inverse_lambda(&lam, 12);
            assert_eq!(prod, TruncatedSeries::one(12));
        }
    }

    #[test]
    fn gordon_residues() {
        assert_eq!(residues_avoiding(5, 2), vec![1, 4]);
        assert_eq!(residues_avoiding(4, 1), vec![2]);
        assert_eq!(residues_avoiding(3, 1), Vec::<u64>::new());
        assert_eq!(residues_avoiding(4, 2), vec![1, 3]);
    }
}
