//! The complex quantum plane: normal-ordered polynomials in `θ, θ̄` with
//! `θ̄θ = q⁻¹ θθ̄`, weighted pairings, the Bargmann-type projection onto
//! holomorphic polynomials, and truncated Toeplitz operators.
//!
//! Every computation is generic over [`Scalar`]: [`Exact`] (Gaussian rationals)
//! or [`Float`] (`Complex64`).

pub mod bargmann;
pub mod cli;
pub mod error;
pub mod expr;
pub mod pairing;
pub mod qalgebra;
pub mod scalar;
pub mod serial;
pub mod toeplitz;
pub mod weights;

pub use bargmann::{embed, phi, phi_exact, project_k, projection_matrix, FockVector, TruncationDim};
pub use error::{Error, Result};
pub use expr::parse_element;
pub use pairing::{
    definiteness_probe, epsilon, gram, inner, nondegeneracy_scan, sector_of, verify_witness,
    DefinitenessReport, DegeneracyReport, ScanEntry, SectorIndex, Verdict,
};
pub use qalgebra::{lincomb, mul, mul_monomials, star, star_antihom_probe, DeformationParameter, Element, Monomial};
pub use scalar::{parse_scalar, Backend, Exact, Float, Scalar};
pub use serial::{element_from_json, element_from_json_str, element_to_json};
pub use toeplitz::{
    adjoint, apply, ccr_residual, compactness_probe, compose, norm_bound_monomial, q_commutator,
    toeplitz, toeplitz_monomial, CompactVerdict, NormBound, NormVerdict, SurdEntry, TruncatedOperator,
};
pub use weights::{ccr_weights, deformed_factorial, deformed_int, ExtensionPolicy, WeightSequence};
