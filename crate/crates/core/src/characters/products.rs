use crate::error::{param, Result};
use crate::qseries::{bivariate_product, BivariateSeries, FactorFamily};

/// Conjectured generating series of Poincaré polynomials for `r = 2`,
/// `α = β = 1`, `w = (0, 0)` (`m = 0`) or `w = (0, 1)` (`m = 1`).
///
/// `m = 0`: `∏_{4∤i} 1/((1−t^i)(1−qt^i)) · ∏_i 1/((1−qt^{4i})(1−q²t^{4i}))`.
///
/// `m = 1`: `∏_n (1−t^{4n−2}) / ((1−t^{2n−1})²(1−qt^{4n−2})²(1−q²t^{4n−2})(1−qt^{4n})²)`.
pub fn conjecture2_rhs(m: usize, t_order: usize) -> Result<BivariateSeries> {
    let factors = match m {
        0 => vec![
            FactorFamily::reciprocal(1, 0, 0).excluding(4, vec![0]),
            FactorFamily::reciprocal(1, 0, 1).excluding(4, vec![0]),
            FactorFamily::reciprocal(4, 0, 1),
            FactorFamily::reciprocal(4, 0, 2),
        ],
        1 => vec![
            FactorFamily::minus(4, -2, 0),
            FactorFamily::reciprocal(2, -1, 0).power(2),
            FactorFamily::reciprocal(4, -2, 1).power(2),
            FactorFamily::reciprocal(4, -2, 2),
            FactorFamily::reciprocal(4, 0, 1).power(2),
        ],
        _ => return param(format!("the rank-2 product is stated for m ∈ {{0, 1}}, got m={m}")),
    };
    bivariate_product(&factors, t_order)
}

/// `∏_{(α+β)∤i} 1/(1−t^i) · ∏_i 1/(1−qt^{(α+β)i})`, the rank-1 series.
pub fn old_conjecture_rhs(alpha: i64, beta: i64, t_order: usize) -> Result<BivariateSeries> {
    if alpha < 1 || beta < 1 {
        return param(format!("α and β must be at least 1, got α={alpha}, β={beta}"));
    }
    let n = (alpha + beta) as u64;
    bivariate_product(
        &[FactorFamily::reciprocal(1, 0, 0).excluding(n, vec![0]), FactorFamily::reciprocal(n, 0, 1)],
        t_order,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::Polynomial;

    #[test]
    fn leading_coefficients() {
        let s = conjecture2_rhs(0, 2).unwrap();
        assert_eq!(s.t_coeff(1), Polynomial::from_i64s(&[1, 1]));
        assert_eq!(s.t_coeff(2), Polynomial::from_i64s(&[2, 2, 1]));
        assert_eq!(old_conjecture_rhs(1, 2, 3).unwrap().t_coeff(3), Polynomial::from_i64s(&[2, 1]));
        assert!(conjecture2_rhs(2, 2).is_err());
    }
}
