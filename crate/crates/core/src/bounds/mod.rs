//! Floating/interval numerics: certified characteristic roots, Binet-type
//! evaluation with exact integer rounding, the modulus-gap check, and the
//! absolute-bound chain for odd orders above 500.

mod bigfloat;
mod binet;
mod cascade;
mod roots;

pub use bigfloat::{Bf, Cf};
pub use binet::{binet_eval, binet_eval_adaptive, binet_eval_with_roots, f_k_eval, BinetEval};
pub use cascade::{
    k_upper_bound_cascade, lambda_bounds, n_bound_for_k, root_ratio_gap_check, solve_n_bound,
};
pub use roots::{char_roots, CertifiedRoot, ModulusClass, RootSet};
