//! Exact truncated power series in `q`, series in `t` with polynomial
//! coefficients in `q`, and the q-hypergeometric building blocks.
//!
//! No floating point is used anywhere; coefficients are arbitrary-precision
//! integers.

mod bivariate;
mod poly;
mod products;
mod series;

pub use bivariate::{bivariate_product, BivariateSeries, FactorFamily, FactorMode};
pub use poly::Polynomial;
pub use products::{
    euler_product, gordon_product, minus_q_infinity, pochhammer, q_binomial, q_poch_lambda,
    residue_product, residues_avoiding, InversePochhammerTable,
};
pub use series::TruncatedSeries;

pub(crate) use series::big_to_json;

/// `a · b`, named for parity with the other series operations.
pub fn mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    a * b
}

pub fn invert(a: &TruncatedSeries) -> crate::Result<TruncatedSeries> {
    a.invert()
}
