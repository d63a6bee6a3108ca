//! Exact arithmetic for the k-step Fibonacci sequence at negative indices
//! (H_n = F_{-n}), its zero sets and multiplicities, the identity families
//! that govern it, and the analytic bound pipeline that rules out zeros
//! beyond the proven set for odd orders above 500.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod report;
pub mod sequence;
pub mod verify;
pub mod zeros;

pub use bounds::{
    binet_eval, binet_eval_adaptive, char_roots, f_k_eval, k_upper_bound_cascade, lambda_bounds,
    n_bound_for_k, root_ratio_gap_check, solve_n_bound, BinetEval, CertifiedRoot, RootSet,
};
pub use combinatorics::{binomial, kummer_carries, nu2, nu2_psi, psi, PsiArgs, Valuation2};
pub use error::{Error, Result};
pub use report::{
    to_canonical_json, CascadeReport, CascadeStep, LambdaBounds, Status, VerificationReport,
    Violation, ZeroReport, SCHEMA,
};
pub use sequence::{
    ClosedFormExpansion, ClosedFormTerm, IndexDecomposition, MatrixCoords, SequenceParams,
};
pub use zeros::{
    divisibility_witness, expected_zero_set, lower_bound_n, parity_sign_check, zero_multiplicity,
    zero_report, zero_report_from_scan, zero_scan, zero_set_enumerate, DivisibilityWitness,
    ZeroScan, ZeroSetA,
};
