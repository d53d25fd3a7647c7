use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::census::Cocharacter;
use crate::error::{param, Result};

/// `(p, p′, ā, b̄)` labelling a character `χ^{p,p′}_{ā,b̄}` with
/// `ā, b̄ ∈ ℤ_{≥0}^{s−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FfjmmLabel {
    pub p: i64,
    pub pp: i64,
    pub abar: Vec<i64>,
    pub bbar: Vec<i64>,
}

impl FfjmmLabel {
    /// Checks `p ≠ p′`, nonnegative entries of equal length, and
    /// `p − 1 − Σ(a_i + 1) ≥ 0`, `p′ − 1 − Σ(b_i + 1) ≥ 0`.
    pub fn new(p: i64, pp: i64, abar: Vec<i64>, bbar: Vec<i64>) -> Result<Self> {
        if p < 0 || pp < 0 || p == pp {
            return param(format!("need nonnegative p ≠ p′, got p={p}, p′={pp}"));
        }
        if abar.len() != bbar.len() {
            return param(format!("ā has {} entries but b̄ has {}", abar.len(), bbar.len()));
        }
        if abar.iter().chain(&bbar).any(|&v| v < 0) {
            return param("label vectors must have nonnegative entries");
        }
        let label = Self { p, pp, abar, bbar };
        if !label.is_admissible() {
            return param(format!(
                "label is not admissible: p−1−Σ(a+1) = {}, p′−1−Σ(b+1) = {}",
                label.slack_a(),
                label.slack_b()
            ));
        }
        Ok(label)
    }

    /// Number of tensor factors `s`.
    pub fn s(&self) -> usize {
        self.abar.len() + 1
    }

    fn slack_a(&self) -> i64 {
        self.p - 1 - self.abar.iter().map(|a| a + 1).sum::<i64>()
    }

    fn slack_b(&self) -> i64 {
        self.pp - 1 - self.bbar.iter().map(|b| b + 1).sum::<i64>()
    }

    pub fn is_admissible(&self) -> bool {
        self.slack_a() >= 0 && self.slack_b() >= 0
    }

    /// Applies `τ` to both vectors.
    pub fn tau(&self) -> Self {
        Self { abar: tau(&self.abar, self.p), bbar: tau(&self.bbar, self.pp), ..self.clone() }
    }

    /// Applies `σ` to both vectors.
    pub fn sigma(&self) -> Self {
        Self { abar: sigma(&self.abar, self.p), bbar: sigma(&self.bbar, self.pp), ..self.clone() }
    }

    /// Every label reachable by `τ` and `σ`; characters agree on the orbit.
    pub fn orbit(&self) -> BTreeSet<(Vec<i64>, Vec<i64>)> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(l) = stack.pop() {
            if seen.insert((l.abar.clone(), l.bbar.clone())) {
                stack.push(l.tau());
                stack.push(l.sigma());
            }
        }
        seen
    }
}

/// `c̄` extended by `c_s = m − s − Σ c_i`.
fn extend(cbar: &[i64], m: i64) -> Vec<i64> {
    let s = cbar.len() as i64 + 1;
    let mut ext = cbar.to_vec();
    ext.push(m - s - cbar.iter().sum::<i64>());
    ext
}

pub fn tau(cbar: &[i64], m: i64) -> Vec<i64> {
    extend(cbar, m)[1..].to_vec()
}

pub fn sigma(cbar: &[i64], m: i64) -> Vec<i64> {
    let ext = extend(cbar, m);
    ext[1..].iter().rev().copied().collect()
}

/// `(τ(c̄, m), σ(c̄, m))` with `τ_i = c_{i+1}` and `σ_i = c_{s+1−i}`.
pub fn tau_sigma(cbar: &[i64], m: i64) -> (Vec<i64>, Vec<i64>) {
    (tau(cbar, m), sigma(cbar, m))
}

/// Multiplicative inverse of `a` modulo `n` (`gcd(a, n) = 1`).
pub(crate) fn inverse_mod(a: i64, n: i64) -> i64 {
    let e = a.extended_gcd(&n);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(n)
}

fn occupation(c: &Cocharacter) -> Result<Vec<i64>> {
    let n = c.alpha() + c.beta();
    let mut a = vec![0i64; n as usize];
    for &w in c.w() {
        if !(0 <= w && w < n) {
            return param(format!("weights must satisfy 0 ≤ w_i < α+β = {n}, got {w}"));
        }
        a[w as usize] += 1;
    }
    Ok(a)
}

fn relabel(c: &Cocharacter, mult: i64) -> Result<FfjmmLabel> {
    let n = c.alpha() + c.beta();
    let a = occupation(c)?;
    let a_prime: Vec<i64> = (0..n).map(|i| a[(mult * i).rem_euclid(n) as usize]).collect();
    let b = a_prime[..n as usize - 1].to_vec();
    FfjmmLabel::new(n, n + c.rank() as i64, vec![0; n as usize - 1], b)
}

/// `(α+β, α+β+r, 0̄, ā″)` where `a_i = #{j : w_j = i}`,
/// `a′_i = a_{α′i mod (α+β)}` with `α′α ≡ 1`, and `ā″` drops the last entry.
pub fn conjecture1_label(c: &Cocharacter) -> Result<FfjmmLabel> {
    let n = c.alpha() + c.beta();
    relabel(c, inverse_mod(c.alpha(), n))
}

/// The same construction with `β′ = β^{-1} mod (α+β)` in place of `α′`.
pub fn conjecture1_label_beta(c: &Cocharacter) -> Result<FfjmmLabel> {
    let n = c.alpha() + c.beta();
    relabel(c, inverse_mod(c.beta(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tau_sigma_example() {
        assert_eq!(tau_sigma(&[1, 2], 10), (vec![2, 4], vec![4, 2]));
    }

    #[test]
    fn label_examples() {
        for r in 1..=4usize {
            for m in 0..=r {
                let l = conjecture1_label(&Cocharacter::ow(r, m).unwrap()).unwrap();
                assert_eq!((l.p, l.pp, l.bbar.clone()), (2, 2 + r as i64, vec![(r - m) as i64]));
            }
        }
        let l = conjecture1_label(&Cocharacter::new(1, 2, vec![0]).unwrap()).unwrap();
        assert_eq!((l.p, l.pp, l.abar, l.bbar), (3, 4, vec![0, 0], vec![1, 0]));
        let l = conjecture1_label(&Cocharacter::new(2, 3, vec![0]).unwrap()).unwrap();
        assert_eq!((l.p, l.pp, l.bbar), (5, 6, vec![1, 0, 0, 0]));
        assert!(conjecture1_label(&Cocharacter::new(1, 1, vec![2]).unwrap()).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(FfjmmLabel::new(3, 4, vec![0, 0], vec![1, 0]).is_ok());
        assert!(FfjmmLabel::new(3, 4, vec![1, 0], vec![0, 0]).is_err());
        assert!(FfjmmLabel::new(3, 3, vec![0], vec![0]).is_err());
    }

    fn cocharacters() -> impl Strategy<Value = Cocharacter> {
        (1i64..6, 1i64..6, 1usize..5)
            .prop_filter("coprime", |(a, b, _)| a.gcd(b) == 1)
            .prop_flat_map(|(a, b, r)| {
                proptest::collection::vec(0..a + b, r).prop_map(move |w| Cocharacter::new(a, b, w).unwrap())
            })
    }

    proptest! {
        #[test]
        fn sigma_is_an_involution(c in proptest::collection::vec(-5i64..6, 0..5), m in -10i64..20) {
            prop_assert_eq!(sigma(&sigma(&c, m), m), c);
        }

        #[test]
        fn tau_has_period_s(c in proptest::collection::vec(-5i64..6, 0..5), m in -10i64..20) {
            let mut v = c.clone();
            for _ in 0..=c.len() {
                v = tau(&v, m);
            }
            prop_assert_eq!(v, c);
        }

        #[test]
        fn conjecture1_labels_are_admissible(c in cocharacters()) {
            let l = conjecture1_label(&c).unwrap();
            prop_assert!(l.is_admissible());
            prop_assert_eq!(l.pp - 1 - l.bbar.iter().map(|b| b + 1).sum::<i64>(), c.rank() as i64 - l.bbar.iter().sum::<i64>());
        }

        #[test]
        fn beta_variant_is_tau_inverse_of_sigma(c in cocharacters()) {
            let l = conjecture1_label(&c).unwrap();
            let lb = conjecture1_label_beta(&c).unwrap();
            let mut expected = l.sigma();
            for _ in 0..l.s() - 1 {
                expected = expected.tau();
            }
            prop_assert_eq!(&lb, &expected);
            prop_assert!(l.orbit().contains(&(lb.abar.clone(), lb.bbar.clone())));
        }
    }
}
