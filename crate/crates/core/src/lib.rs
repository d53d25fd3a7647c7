//! Torus-fixed loci of moduli spaces of framed torsion-free sheaves on the
//! projective plane, studied through Young-diagram combinatorics.
//!
//! The crate enumerates fixed points of one-parameter subtori, counts the
//! zero-dimensional Białynicki-Birula cells and assembles Poincaré series,
//! and checks the generating-function identities that relate those counts
//! to Rogers–Ramanujan–Gordon products and Virasoro characters. Every series
//! is an exact-integer power series truncated at an explicit order.
//!
//! Modules:
//! - [`partitions`]: partitions, arm/leg statistics and constrained enumerators.
//! - [`qseries`]: truncated univariate and bivariate series and q-products.
//! - [`census`]: tangent weights, cell dimensions, h0 and Poincaré series.
//! - [`characters`]: Virasoro characters, fermionic sums, J/E functions.
//! - [`identities`]: named identity checks and reports.
//! - [`specdsl`]: a small expression language for series.
//! - [`cli`]: the command-line front end and the on-disk census cache.

pub mod census;
pub mod characters;
pub mod cli;
pub mod error;
pub mod identities;
pub mod partitions;
pub mod qseries;
pub mod specdsl;

pub use error::{Error, Result};
