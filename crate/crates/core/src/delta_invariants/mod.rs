//! Certified upper bounds for Δ invariants as finite unions of simplicial
//! cones, the transfer formulas, and the no-line test.

mod cone;
mod feasibility;
mod tameness;

use thiserror::Error;

pub use cone::{
    heisenberg_delta_bound, induced_transfer, min_twice_membership, pullback, union, DeltaBound,
    SimplicialCone,
};
pub use feasibility::{
    fourier_motzkin, nonnegative_dependency, separating_functional, simplex, Feasibility, Method,
    FM_CAP,
};
pub use tameness::{
    contains_line, is_line_witness, tameness_certificate, CentralAction, PairVerdict,
    TamenessCertificate,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone generators are linearly dependent")]
    DependentGenerators,
    #[error("union of no bounds")]
    EmptyUnion,
    #[error("dual map is not injective")]
    NotInjective,
    #[error("transfer map is singular")]
    Singular,
    #[error("bound contains a line through {witness:?}")]
    LineFound { witness: Vec<String> },
    #[error("central action of `{0}` is not unimodular")]
    NotUnimodular(String),
    #[error("certificate does not match bound: {0}")]
    CertificateMismatch(String),
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] crate::exact_linalg::LinalgError),
}
