//! Finitely generated torsion-free class-2 nilpotent groups given by
//! commutator structure constants, their subdirect decomposition into
//! generalized Heisenberg groups, and the character-space data attached to
//! each Heisenberg factor.

mod class_two;
mod decompose;
mod heisenberg;

use thiserror::Error;

use crate::exact_linalg::LinalgError;
use crate::symplectic::SymplecticError;

pub use class_two::{ClassTwoData, Commutator};
pub use decompose::{
    decompose_subdirect, Factor, FactorDecomposition, FiniteFactor, SubdirectCertificate,
};
pub use heisenberg::{
    commutation_form_rho, finite_index_symplectic_subgroup, symplectic_basis_lift, CommutationRho,
    HeisenbergGroup, HeisenbergLift, SymplecticSubgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilpotentError {
    #[error("commutator pair ({i}, {j}) is not 1 <= i < j <= {n}")]
    InvalidPair { i: usize, j: usize, n: usize },
    #[error("commutator pair ({i}, {j}) listed twice")]
    DuplicatePair { i: usize, j: usize },
    #[error("commutator vector has length {found}, center rank is {expected}")]
    CenterLength { expected: usize, found: usize },
    #[error("commutators given but the center has rank 0")]
    CommutatorsWithoutCenter,
    #[error(
        "declared center is not the whole center: generator combination {witness:?} is central"
    )]
    CenterNotExact { witness: Vec<num_bigint::BigInt> },
    #[error("invariants must be positive with m_i | m_(i+1)")]
    InvalidInvariants,
    #[error("operation needs a Heisenberg group of rank at least 1")]
    RankZero,
    #[error("basis is not symplectic for the commutation form")]
    NotSymplectic,
    #[error("factor projection must be {rows}x{cols}")]
    ProjectionShape { rows: usize, cols: usize },
    #[error("dual embedding of a factor is not injective")]
    DualEmbeddingNotInjective,
    #[error("projection kernels intersect nontrivially")]
    KernelsIntersect,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
