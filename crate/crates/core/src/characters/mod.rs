//! Virasoro characters, residue-class products, fermionic multi-sums,
//! Andrews `J` and Corteel `E` functions, the `≈`/`≈₂` functionals, and the
//! `s = 2` character and label machinery.

mod fermionic;
mod functionals;
mod labels;
mod products;
mod virasoro;

pub use fermionic::{
    andrews_j, corteel_e, fermionic_alt_sum, fermionic_rho_sum, reduced_sum_even, reduced_sum_odd,
};
pub use functionals::{
    approx2_functional, approx2_lemma_instances, approx_functional, approx_lemma_instances,
    main_transformation, reduced_even_integrand, second_transformation, shift2_lemma, shift_lemma,
    trans3, transformation2, transformation3, transformation3_rhs, Functional, LemmaInstance, SparsePoly,
};
pub use labels::{conjecture1_label, conjecture1_label_beta, sigma, tau, tau_sigma, FfjmmLabel};
pub use products::{conjecture2_rhs, old_conjecture_rhs};
pub use virasoro::{
    conformal_dimension, ffjmm_char_s2, theorem1_char_rhs, theorem1_rhs, virasoro_char, MinimalModelLabel,
};

pub(crate) use virasoro::s2_reduction;
