//! Named identity checks. Each case builds two series independently and
//! compares them coefficient by coefficient up to a common order.

mod chars_file;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::census::{h0_series_with, poincare_series_with, Cocharacter, DimensionStore, NoCache};
use crate::characters::{
    self, andrews_j, approx2_functional, approx2_lemma_instances, approx_functional, approx_lemma_instances,
    conjecture1_label, corteel_e, fermionic_alt_sum, fermionic_rho_sum, reduced_sum_even, reduced_sum_odd,
    theorem1_char_rhs, theorem1_rhs, Functional, LemmaInstance, MinimalModelLabel,
};
use crate::error::{param, Error, Result};
use crate::partitions::s_tuple_counts;
use crate::qseries::{big_to_json, euler_product, gordon_product, minus_q_infinity, BivariateSeries, TruncatedSeries};

pub use chars_file::{parse_character_file, CharacterData};

/// A univariate or bivariate series under comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesValue {
    Uni(TruncatedSeries),
    Bi(BivariateSeries),
}

impl SeriesValue {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SeriesValue::Uni(s) => serde_json::to_value(s),
            SeriesValue::Bi(s) => serde_json::to_value(s),
        }
        .expect("series serialize")
    }

    pub fn to_csv(&self) -> String {
        match self {
            SeriesValue::Uni(s) => s.to_csv(),
            SeriesValue::Bi(s) => s.to_csv(),
        }
    }
}

impl fmt::Display for SeriesValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesValue::Uni(s) => s.fmt(f),
            SeriesValue::Bi(s) => s.fmt(f),
        }
    }
}

/// A parameter value: an integer or an integer vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Vector(Vec<i64>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Vector(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Int,
    Vector,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    /// `None` means the parameter is required.
    pub default: Option<i64>,
    pub constraint: &'static str,
}

/// Metadata for one catalog entry.
#[derive(Debug, Clone, Serialize)]
pub struct IdentitySchema {
    pub name: &'static str,
    pub summary: &'static str,
    pub anchor: &'static str,
    pub params: Vec<ParamSpec>,
    pub bivariate: bool,
}

fn int(name: &'static str, constraint: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Int, default: None, constraint }
}

fn int_default(name: &'static str, default: i64, constraint: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Int, default: Some(default), constraint }
}

fn vector(name: &'static str, constraint: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Vector, default: None, constraint }
}

/// The list of identities, in a fixed order.
pub fn catalog() -> Vec<IdentitySchema> {
    vec![
        IdentitySchema {
            name: "THM1",
            summary: "zero-cell count under (1,1,ow(m)) vs (−q)_∞ times the product over n ≢ 0, ±(m+1) mod r+2",
            anchor: "main theorem: generating function of h0 for the (1,1,ow(m)) fixed locus",
            params: vec![int("r", "r ≥ 1"), int("m", "0 ≤ m ≤ r")],
            bivariate: false,
        },
        IdentitySchema {
            name: "THM1-CHAR",
            summary: "zero-cell count vs (−q)_∞ · χ̄^{2,r+2}_{1,m+1}",
            anchor: "Virasoro characters: the product side equals a normalized character",
            params: vec![int("r", "r ≥ 1"), int("m", "0 ≤ m ≤ r")],
            bivariate: false,
        },
        IdentitySchema {
            name: "FERM-RHO",
            summary: "#S(r,m)_n vs the ρ-fermionic sum",
            anchor: "fermionic expressions: S(r,m) count as a sum over ρ₁ ≥ … ≥ ρ_r",
            params: vec![int("r", "r ≥ 1"), int("m", "0 ≤ m ≤ r")],
            bivariate: false,
        },
        IdentitySchema {
            name: "FERM-ALT",
            summary: "ρ-fermionic sum vs the alternating-index sum with m′ = min(m, r−m)",
            anchor: "fermionic expressions: the transformation to indices r−1−2j",
            params: vec![int("r", "r ≥ 1"), int("m", "0 ≤ m ≤ r")],
            bivariate: false,
        },
        IdentitySchema {
            name: "REDUCE-ODD",
            summary: "ρ-fermionic sum for r = 2k+1 vs (−q)_∞ times the k-fold sum",
            anchor: "odd rank: summing out λ₁, λ₃, …, λ_{2k+1}",
            params: vec![int("k", "k ≥ 0"), int("m", "0 ≤ m ≤ 2k+1")],
            bivariate: false,
        },
        IdentitySchema {
            name: "REDUCE-EVEN",
            summary: "ρ-fermionic sum for r = 2k vs the k-fold sum weighted by (−q)_{λ₁}",
            anchor: "even rank: reduction to a k-fold sum",
            params: vec![int("k", "k ≥ 1"), int("m", "0 ≤ m ≤ 2k")],
            bivariate: false,
        },
        IdentitySchema {
            name: "GORDON-J",
            summary: "J_{k+1,m+1}(0,1,q) vs the product over n ≢ 0, ±(m+1) mod 2k+3",
            anchor: "odd rank: Andrews–Gordon product for J_{k,i}",
            params: vec![int("k", "k ≥ 0"), int("m", "0 ≤ m ≤ k")],
            bivariate: false,
        },
        IdentitySchema {
            name: "J-RECURSION",
            summary: "J_{k,i}(x) − J_{k,i−1}(x) vs (xq)^{i−1} J_{k,k−i+1}(xq), x = q^e",
            anchor: "odd rank: difference equation of J_{k,i}",
            params: vec![int("k", "k ≥ 1"), int("i", "1 ≤ i ≤ k"), int_default("e", 0, "e ≥ 0")],
            bivariate: false,
        },
        IdentitySchema {
            name: "CORTEEL-E",
            summary: "E_{k+1,m+1}(1/q) from its sum form vs its stated product form",
            anchor: "even rank: sum and product forms of E_{k+1,m+1}(a,q) at a = 1/q",
            params: vec![int("k", "k ≥ 1"), int("m", "0 ≤ m ≤ k")],
            bivariate: false,
        },
        IdentitySchema {
            name: "CORTEEL-LEMMA",
            summary: "weighted even-rank sum (2Σ… + q^m …) vs the sum form of E_{k+1,m+1}(1/q)",
            anchor: "even rank: the ≈₂ product transformation",
            params: vec![int("k", "k ≥ 1"), int("m", "0 ≤ m ≤ k")],
            bivariate: false,
        },
        IdentitySchema {
            name: "APPROX-LEMMAS",
            summary: "the ≈ functional annihilates LHS − RHS of the shift lemma and both transformations",
            anchor: "fermionic expressions: the ≈ relation and its lemmas",
            params: vec![int("r", "maximal rank, r ≥ 1")],
            bivariate: false,
        },
        IdentitySchema {
            name: "APPROX2-LEMMAS",
            summary: "the ≈₂ functional annihilates LHS − RHS of the ≈₂ lemmas",
            anchor: "even rank: the ≈₂ relation and its lemmas",
            params: vec![int("k", "maximal rank, k ≥ 1")],
            bivariate: false,
        },
        IdentitySchema {
            name: "CONJ1",
            summary: "zero-cell count under (α,β,w) vs (q^{α+β})_∞ · χ^{α+β,α+β+r}_{0̄,ā″}",
            anchor: "conjecture for arbitrary α, β",
            params: vec![int("alpha", "α ≥ 1"), int("beta", "β ≥ 1, gcd(α,β) = 1"), vector("w", "0 ≤ w_i < α+β")],
            bivariate: false,
        },
        IdentitySchema {
            name: "CONJ2-M0",
            summary: "Poincaré series for r=2, (1,1,(0,0)) vs the conjectured product",
            anchor: "Betti numbers conjecture, w = (0,0)",
            params: vec![],
            bivariate: true,
        },
        IdentitySchema {
            name: "CONJ2-M1",
            summary: "Poincaré series for r=2, (1,1,(0,1)) vs the conjectured product",
            anchor: "Betti numbers conjecture, w = (0,1)",
            params: vec![],
            bivariate: true,
        },
        IdentitySchema {
            name: "OLDCONJ",
            summary: "Poincaré series for r=1, (α,β,(0)) vs ∏_{(α+β)∤i}(1−t^i)^{-1} ∏(1−qt^{(α+β)i})^{-1}",
            anchor: "Betti numbers conjecture for rank one",
            params: vec![int("alpha", "α ≥ 1"), int("beta", "β ≥ 1, gcd(α,β) = 1")],
            bivariate: true,
        },
    ]
}

pub fn schema(name: &str) -> Result<IdentitySchema> {
    catalog()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Parameter(format!("unknown identity {name:?}")))
}

/// A named identity with validated parameters and a truncation order
/// (the `t`-order for bivariate identities).
#[derive(Debug, Clone)]
pub struct IdentityCase {
    name: String,
    params: BTreeMap<String, ParamValue>,
    order: usize,
    character: Option<CharacterData>,
}

impl IdentityCase {
    /// Validates parameter names and kinds against the catalog and fills
    /// in defaults.
    pub fn new(name: &str, params: BTreeMap<String, ParamValue>, order: usize) -> Result<Self> {
        let schema = schema(name)?;
        for key in params.keys() {
            if !schema.params.iter().any(|p| p.name == key) {
                return param(format!("{name} has no parameter {key:?}"));
            }
        }
        let mut full = BTreeMap::new();
        for spec in &schema.params {
            let v = match (params.get(spec.name), spec.default) {
                (Some(v), _) => v.clone(),
                (None, Some(d)) => ParamValue::Int(d),
                (None, None) => return param(format!("{name} requires parameter {}", spec.name)),
            };
            let kind_ok = matches!(
                (&v, spec.kind),
                (ParamValue::Int(_), ParamKind::Int) | (ParamValue::Vector(_), ParamKind::Vector)
            );
            if !kind_ok {
                return param(format!("parameter {} of {name} must be {:?}", spec.name, spec.kind));
            }
            full.insert(spec.name.to_string(), v);
        }
        Ok(Self { name: name.to_string(), params: full, order, character: None })
    }

    /// Shorthand for integer-only parameters.
    pub fn with_ints(name: &str, params: &[(&str, i64)], order: usize) -> Result<Self> {
        let map = params.iter().map(|(k, v)| (k.to_string(), ParamValue::Int(*v))).collect();
        Self::new(name, map, order)
    }

    pub fn with_character(mut self, data: CharacterData) -> Self {
        self.character = Some(data);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, ParamValue> {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn int(&self, key: &str) -> i64 {
        match self.params.get(key) {
            Some(ParamValue::Int(v)) => *v,
            _ => unreachable!("validated parameter {key}"),
        }
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let v = self.int(key);
        usize::try_from(v).or_else(|_| param(format!("parameter {key} must be nonnegative, got {v}")))
    }

    fn vector(&self, key: &str) -> &[i64] {
        match self.params.get(key) {
            Some(ParamValue::Vector(v)) => v,
            _ => unreachable!("validated parameter {key}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Equal,
    Mismatch,
    Refused,
}

fn ser_big<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    big_to_json(v).serialize(s)
}

/// Lowest differing coefficient; `degree` is `[q]` or `[t, q]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub degree: Vec<usize>,
    #[serde(serialize_with = "ser_big")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigInt,
}

/// Outcome of one identity check. Everything except `runtime_ms` is a
/// deterministic function of the case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub identity: String,
    pub params: BTreeMap<String, ParamValue>,
    pub order: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_series: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Report {
    pub fn without_runtime(mut self) -> Self {
        self.runtime_ms = None;
        self
    }
}

/// First coefficient where the two series differ, up to their common order.
pub fn first_difference(lhs: &SeriesValue, rhs: &SeriesValue) -> Result<Option<Mismatch>> {
    match (lhs, rhs) {
        (SeriesValue::Uni(a), SeriesValue::Uni(b)) => {
            let n = a.order().min(b.order());
            Ok((0..=n)
                .find(|&d| a.coeff(d) != b.coeff(d))
                .map(|d| Mismatch { degree: vec![d], lhs: a.coeff(d), rhs: b.coeff(d) }))
        }
        (SeriesValue::Bi(a), SeriesValue::Bi(b)) => {
            let n = a.t_order().min(b.t_order());
            let cap = match (a.q_cap(), b.q_cap()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            for t in 0..=n {
                let (pa, pb) = (a.t_coeff(t), b.t_coeff(t));
                let top = pa.coeffs().len().max(pb.coeffs().len());
                let top = cap.map_or(top, |c| top.min(c + 1));
                if let Some(q) = (0..top).find(|&q| pa.coeff(q) != pb.coeff(q)) {
                    return Ok(Some(Mismatch { degree: vec![t, q], lhs: pa.coeff(q), rhs: pb.coeff(q) }));
                }
            }
            Ok(None)
        }
        _ => param("cannot compare a univariate series with a bivariate one"),
    }
}

/// Compares two series under a free-form label.
pub fn compare(lhs: &SeriesValue, rhs: &SeriesValue, label: &str) -> Result<Report> {
    let first = first_difference(lhs, rhs)?;
    let order = match (lhs, rhs) {
        (SeriesValue::Uni(a), SeriesValue::Uni(b)) => a.order().min(b.order()),
        (SeriesValue::Bi(a), SeriesValue::Bi(b)) => a.t_order().min(b.t_order()),
        _ => unreachable!("kinds checked above"),
    };
    Ok(Report {
        identity: label.to_string(),
        params: BTreeMap::new(),
        order,
        status: if first.is_some() { Status::Mismatch } else { Status::Equal },
        first_mismatch: first,
        anchor: "user comparison".to_string(),
        note: None,
        reason: None,
        lhs_series: None,
        runtime_ms: None,
    })
}

/// Both sides of a case, or a refusal with whatever was computable.
enum Sides {
    Pair { lhs: SeriesValue, rhs: SeriesValue, note: Option<String> },
    Families { pairs: Vec<(String, SeriesValue, SeriesValue)> },
    Refused { reason: String, lhs: Option<SeriesValue> },
}

const EVEN_RANK_NOTE: &str = "for even r with 0 < m < r the product form is an identity under test; \
     the character form (THM1-CHAR) and the census are computed independently";

fn uni(s: TruncatedSeries) -> SeriesValue {
    SeriesValue::Uni(s)
}

fn check_marker(r: usize, m: usize) -> Result<()> {
    if r == 0 || m > r {
        return param(format!("need r ≥ 1 and 0 ≤ m ≤ r, got r={r}, m={m}"));
    }
    Ok(())
}

fn gordon_or_zero(modulus: u64, i: u64, order: usize) -> TruncatedSeries {
    if i == 0 {
        TruncatedSeries::zero(order)
    } else {
        gordon_product(modulus, i, order)
    }
}

fn lemma_pairs(instances: Vec<LemmaInstance>, order: usize) -> Result<Vec<(String, SeriesValue, SeriesValue)>> {
    instances
        .into_par_iter()
        .map(|inst| {
            let f = match inst.functional {
                Functional::Approx => approx_functional,
                Functional::Approx2 => approx2_functional,
            };
            let lhs = f(inst.rank, &inst.lhs, order)?;
            let rhs = f(inst.rank, &inst.rhs, order)?;
            Ok((inst.label, uni(lhs), uni(rhs)))
        })
        .collect()
}

fn build(case: &IdentityCase, store: &dyn DimensionStore) -> Result<Sides> {
    let n = case.order;
    let pair = |lhs, rhs| Sides::Pair { lhs: uni(lhs), rhs: uni(rhs), note: None };
    Ok(match case.name.as_str() {
        "THM1" => {
            let (r, m) = (case.usize("r")?, case.usize("m")?);
            check_marker(r, m)?;
            let lhs = h0_series_with(r, &Cocharacter::ow(r, m)?, n, store)?;
            let note = (r % 2 == 0 && m != 0 && m != r).then(|| EVEN_RANK_NOTE.to_string());
            Sides::Pair { lhs: uni(lhs), rhs: uni(theorem1_rhs(r, m, n)?), note }
        }
        "THM1-CHAR" => {
            let (r, m) = (case.usize("r")?, case.usize("m")?);
            check_marker(r, m)?;
            let lhs = h0_series_with(r, &Cocharacter::ow(r, m)?, n, store)?;
            let note = (r % 2 == 0)
                .then(|| format!("label (2,{}) is not coprime; the character sum is evaluated as a formula", r + 2));
            Sides::Pair { lhs: uni(lhs), rhs: uni(theorem1_char_rhs(r, m, n)?), note }
        }
        "FERM-RHO" => {
            let (r, m) = (case.usize("r")?, case.usize("m")?);
            check_marker(r, m)?;
            let counts = TruncatedSeries::from_coeffs(s_tuple_counts(r, m, n as u32)?, n);
            pair(counts, fermionic_rho_sum(r, m, n)?)
        }
        "FERM-ALT" => {
            let (r, m) = (case.usize("r")?, case.usize("m")?);
            pair(fermionic_rho_sum(r, m, n)?, fermionic_alt_sum(r, m, n)?)
        }
        "REDUCE-ODD" => {
            let (k, m) = (case.usize("k")?, case.usize("m")?);
            let r = 2 * k + 1;
            check_marker(r, m)?;
            pair(fermionic_rho_sum(r, m, n)?, reduced_sum_odd(k, m.min(r - m), n)?)
        }
        "REDUCE-EVEN" => {
            let (k, m) = (case.usize("k")?, case.usize("m")?);
            let r = 2 * k;
            check_marker(r, m)?;
            pair(fermionic_rho_sum(r, m, n)?, reduced_sum_even(k, m.min(r - m), n)?)
        }
        "GORDON-J" => {
            let (k, m) = (case.usize("k")?, case.usize("m")?);
            if m > k {
                return param(format!("need 0 ≤ m ≤ k, got k={k}, m={m}"));
            }
            pair(andrews_j(k + 1, m + 1, 0, n)?, gordon_product(2 * k as u64 + 3, m as u64 + 1, n))
        }
        "J-RECURSION" => {
            let (k, i, e) = (case.usize("k")?, case.usize("i")?, case.usize("e")? as u64);
            if k == 0 || i == 0 || i > k {
                return param(format!("need 1 ≤ i ≤ k, got k={k}, i={i}"));
            }
            let prev = if i == 1 { TruncatedSeries::zero(n) } else { andrews_j(k, i - 1, e, n)? };
            let lhs = &andrews_j(k, i, e, n)? - &prev;
            let rhs = andrews_j(k, k - i + 1, e + 1, n)?.shift(((e + 1) * (i as u64 - 1)) as usize);
            pair(lhs, rhs)
        }
        "CORTEEL-E" => {
            let (k, m) = (case.usize("k")?, case.usize("m")?);
            if k == 0 || m > k {
                return param(format!("need k ≥ 1 and 0 ≤ m ≤ k, got k={k}, m={m}"));
            }
            let modulus = 2 * k as u64 + 2;
            let products = &gordon_product(modulus, m as u64 + 1, n) + &gordon_or_zero(modulus, m as u64, n);
            Sides::Pair {
                lhs: uni(corteel_e(k, m + 1, -1, n)?),
                rhs: uni(&minus_q_infinity(n) * &products),
                note: Some("product form at a = 1/q is transcribed as stated, with the second product \
                            omitted for m = 0; see CORTEEL-LEMMA for the sum-side check"
                    .to_string()),
            }
        }
        "CORTEEL-LEMMA" => {
            let (k, m) = (case.usize("k")?, case.usize("m")?);
            if k == 0 || m > k {
                return param(format!("need k ≥ 1 and 0 ≤ m ≤ k, got k={k}, m={m}"));
            }
            let lhs = approx2_functional(k, &characters::transformation3_rhs(k, m), n)?;
            pair(lhs, corteel_e(k, m + 1, -1, n)?)
        }
        "APPROX-LEMMAS" => {
            let r = case.usize("r")?;
            if r == 0 {
                return param("r must be at least 1");
            }
            Sides::Families { pairs: lemma_pairs(approx_lemma_instances(r), n)? }
        }
        "APPROX2-LEMMAS" => {
            let k = case.usize("k")?;
            if k == 0 {
                return param("k must be at least 1");
            }
            Sides::Families { pairs: lemma_pairs(approx2_lemma_instances(k), n)? }
        }
        "CONJ1" => conjecture1_sides(case, store)?,
        "CONJ2-M0" | "CONJ2-M1" => {
            let (m, w) = if case.name == "CONJ2-M0" { (0, vec![0, 0]) } else { (1, vec![0, 1]) };
            let lhs = poincare_series_with(2, &Cocharacter::new(1, 1, w)?, n, store)?;
            Sides::Pair { lhs: SeriesValue::Bi(lhs), rhs: SeriesValue::Bi(characters::conjecture2_rhs(m, n)?), note: None }
        }
        "OLDCONJ" => {
            let (a, b) = (case.int("alpha"), case.int("beta"));
            let lhs = poincare_series_with(1, &Cocharacter::new(a, b, vec![0])?, n, store)?;
            Sides::Pair {
                lhs: SeriesValue::Bi(lhs),
                rhs: SeriesValue::Bi(characters::old_conjecture_rhs(a, b, n)?),
                note: None,
            }
        }
        other => return param(format!("unknown identity {other:?}")),
    })
}

fn conjecture1_sides(case: &IdentityCase, store: &dyn DimensionStore) -> Result<Sides> {
    let n = case.order;
    let c = Cocharacter::new(case.int("alpha"), case.int("beta"), case.vector("w").to_vec())?;
    let label = conjecture1_label(&c)?;
    let lhs = h0_series_with(c.rank(), &c, n, store)?;
    let p = label.p;
    let eta = euler_product(n).dilate(p as usize);
    if p == 2 {
        let b1 = label.bbar[0];
        let vir = MinimalModelLabel::new(2, label.pp, 1, b1 + 1)?;
        let rhs = &eta * &characters::s2_reduction(&vir, n);
        let mut note = format!("χ^{{2,{}}}_{{0,{b1}}} = (q)_∞^{{-1}} χ̄^{{2,{}}}_{{1,{}}}", label.pp, label.pp, b1 + 1);
        if !vir.is_coprime() {
            note.push_str("; label is not coprime, the character sum is evaluated as a formula");
        }
        return Ok(Sides::Pair { lhs: uni(lhs), rhs: uni(rhs), note: Some(note) });
    }
    match &case.character {
        None => Ok(Sides::Refused { reason: "character data required".to_string(), lhs: Some(uni(lhs)) }),
        Some(data) => {
            data.check_against(&label)?;
            let rhs = &eta * &data.series;
            Ok(Sides::Pair {
                lhs: uni(lhs),
                rhs: uni(rhs),
                note: Some(format!("character data source: {}", data.source)),
            })
        }
    }
}

/// Evaluates a case without a dimension cache.
pub fn run_case(case: &IdentityCase) -> Result<Report> {
    run_case_with(case, &NoCache)
}

/// Evaluates a case. Refusals become reports with status `refused`;
/// parameter and domain errors are returned as errors.
pub fn run_case_with(case: &IdentityCase, store: &dyn DimensionStore) -> Result<Report> {
    let start = Instant::now();
    let schema = schema(&case.name)?;
    let mut report = Report {
        identity: case.name.clone(),
        params: case.params.clone(),
        order: case.order,
        status: Status::Equal,
        first_mismatch: None,
        anchor: schema.anchor.to_string(),
        note: None,
        reason: None,
        lhs_series: None,
        runtime_ms: None,
    };
    let sides = match build(case, store) {
        Ok(s) => s,
        Err(Error::Refused(reason)) => Sides::Refused { reason, lhs: None },
        Err(e) => return Err(e),
    };
    match sides {
        Sides::Pair { lhs, rhs, note } => {
            report.first_mismatch = first_difference(&lhs, &rhs)?;
            report.note = note;
        }
        Sides::Families { pairs } => {
            for (label, lhs, rhs) in pairs {
                if let Some(m) = first_difference(&lhs, &rhs)? {
                    report.first_mismatch = Some(m);
                    report.note = Some(format!("first failing instance: {label}"));
                    break;
                }
            }
        }
        Sides::Refused { reason, lhs } => {
            report.status = Status::Refused;
            report.reason = Some(reason);
            report.lhs_series = lhs.map(|s| s.to_json());
        }
    }
    if report.status != Status::Refused && report.first_mismatch.is_some() {
        report.status = Status::Mismatch;
    }
    report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Every case that is computable without imported data, at `order`.
pub fn default_cases(order: usize) -> Vec<IdentityCase> {
    let mut out = Vec::new();
    let mut add = |name: &str, params: &[(&str, i64)]| {
        out.push(IdentityCase::with_ints(name, params, order).expect("catalog parameters"));
    };
    for r in 1..=3 {
        for m in 0..=r {
            add("THM1", &[("r", r), ("m", m)]);
            add("THM1-CHAR", &[("r", r), ("m", m)]);
        }
    }
    for r in 1..=4 {
        for m in 0..=r {
            add("FERM-RHO", &[("r", r), ("m", m)]);
            add("FERM-ALT", &[("r", r), ("m", m)]);
        }
    }
    for k in 0..=2 {
        for m in 0..=2 * k + 1 {
            add("REDUCE-ODD", &[("k", k), ("m", m)]);
        }
    }
    for k in 1..=2 {
        for m in 0..=2 * k {
            add("REDUCE-EVEN", &[("k", k), ("m", m)]);
        }
    }
    for k in 0..=3 {
        for m in 0..=k {
            add("GORDON-J", &[("k", k), ("m", m)]);
        }
    }
    for k in 1..=4 {
        for i in 1..=k {
            add("J-RECURSION", &[("k", k), ("i", i)]);
        }
    }
    for k in 1..=2 {
        for m in 0..=k {
            add("CORTEEL-E", &[("k", k), ("m", m)]);
            add("CORTEEL-LEMMA", &[("k", k), ("m", m)]);
        }
    }
    add("APPROX-LEMMAS", &[("r", 4)]);
    add("APPROX2-LEMMAS", &[("k", 3)]);
    for r in 1..=3usize {
        for m in 0..=r {
            let w = (0..r).map(|i| i64::from(i < m)).collect();
            let params = BTreeMap::from([
                ("alpha".to_string(), ParamValue::Int(1)),
                ("beta".to_string(), ParamValue::Int(1)),
                ("w".to_string(), ParamValue::Vector(w)),
            ]);
            out.push(IdentityCase::new("CONJ1", params, order).expect("catalog parameters"));
        }
    }
    out.push(IdentityCase::with_ints("CONJ2-M0", &[], order).expect("catalog parameters"));
    out.push(IdentityCase::with_ints("CONJ2-M1", &[], order).expect("catalog parameters"));
    for (a, b) in [(1, 2), (1, 3), (2, 3)] {
        out.push(IdentityCase::with_ints("OLDCONJ", &[("alpha", a), ("beta", b)], order).expect("catalog parameters"));
    }
    out
}

/// Runs cases in parallel; reports come back in input order.
pub fn run_all(cases: &[IdentityCase], store: &dyn DimensionStore) -> Vec<Result<Report>> {
    cases.par_iter().map(|c| run_case_with(c, store)).collect()
}
