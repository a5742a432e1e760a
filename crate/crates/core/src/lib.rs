//! Smooth min/max entropies and finite-n information-spectrum quantities for
//! finite-dimensional quantum states.
//!
//! The crate is layered bottom-up:
//!
//! - [`operator`]: dense Hermitian operators, spectral projectors, distances.
//! - [`entropy`]: von Neumann and (conditional) min/max entropies.
//! - [`spectrum`]: exact type-class spectra of i.i.d. states `rho^(x)n`.
//! - [`smoothing`]: the epsilon-ball, exact classical smoothing and the
//!   explicit smoothing constructions (projection, additive bound, projector bound).
//! - [`oracle`]: a barrier-method reference maximizer for conditional `H_min^eps`.
//! - [`rates`]: finite-n spectral trace functionals and rate brackets.
//! - [`random`]: seeded Ginibre-style random states.
//!
//! All logarithms are base 2 and all trace distances are unhalved.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod operator;
pub mod oracle;
pub mod random;
pub mod rates;
pub mod smoothing;
pub mod spectrum;

pub use entropy::{h_max, h_max_unconditional, h_min, h_min_unconditional, von_neumann_entropy, EntropyValue};
pub use error::{Error, Result};
pub use operator::{
    check_lemma1, check_lemma2, fidelity, gentle_project, partial_trace, purify, spectral_decompose,
    spectral_projector, trace_distance, BipartiteState, HermitianOperator, OperatorJson, Projector, QuantumState,
    Relation, Subsystem, Tolerances, TOL,
};
pub use smoothing::{Method, SmoothingResult};
pub use spectrum::{iid_spectrum, spectral_trace_gamma, WeightedSpectrum};
