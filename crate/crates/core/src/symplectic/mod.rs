//! Symplectic spaces over Q, the integer symplectic normal form, and the
//! avoidance machinery producing symplectic bases whose associated subspaces
//! miss a finite family of subspaces.

mod avoidance;
mod normal_form;
mod space;

use thiserror::Error;

use crate::exact_linalg::LinalgError;

pub use avoidance::{
    associated_subspaces, avoid_vector, complete_symplectic_basis, k_mu, lagrangian_avoiding,
    scaled_basis, simultaneous_complement_basis, ternary_choices, AssociatedFamily,
    ComplementBasis, LatticeWalk, MAX_SCALE,
};
pub use normal_form::{block_form, integer_symplectic_normal_form, IntegerSymplecticForm};
pub use space::{standard_gram, SymplecticBasis, SymplecticSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("form is not skew-symmetric")]
    NotSkew,
    #[error("form is degenerate")]
    Degenerate,
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("vectors do not form a symplectic basis")]
    NotSymplecticBasis,
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("subspace of dimension {dim} exceeds the bound {bound}")]
    DimensionTooLarge { dim: usize, bound: usize },
    #[error("a listed subspace contains the whole search space")]
    CannotAvoid,
    #[error("mu must lie in [0, 1]")]
    MuOutOfRange,
    #[error("span(e_i) meets a member of the family")]
    LagrangianMeetsFamily,
    #[error("no scale p <= {0} separates the associated subspaces from the family")]
    NoScaleFound(u64),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
