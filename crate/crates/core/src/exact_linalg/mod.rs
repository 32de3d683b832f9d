//! Exact integer and rational linear algebra: dense matrices, Smith normal
//! form, canonical subspaces and kernels. No floating point anywhere.

pub mod json;
mod matrix;
mod snf;
mod subspace;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub(crate) use matrix::rref_in_place;
pub use matrix::{
    dot_rat, int_vec, is_zero_vec, primitive_int, primitive_integer, rank_int, rat, rat_frac,
    rat_vec, to_rat_vec, IntMatrix, RatMatrix, RatVector,
};
pub use snf::{is_primitive_sublattice, saturated_basis, smith_normal_form, SmithForm};
pub use subspace::{kernel, normalized_line, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("subspace basis is not in canonical echelon form")]
    NotCanonical,
}

#[derive(Serialize, Deserialize)]
struct IntMatrixRepr {
    rows: usize,
    cols: usize,
    #[serde(with = "json::int_rows")]
    entries: Vec<Vec<num_bigint::BigInt>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntMatrixRepr {
            rows: self.nrows(),
            cols: self.ncols(),
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = IntMatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows {
            return Err(serde::de::Error::custom("row count does not match entries"));
        }
        IntMatrix::from_rows(r.entries, Some(r.cols)).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RatMatrixRepr {
    rows: usize,
    cols: usize,
    #[serde(with = "json::rat_rows")]
    entries: Vec<Vec<num_rational::BigRational>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatMatrixRepr {
            rows: self.nrows(),
            cols: self.ncols(),
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RatMatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows {
            return Err(serde::de::Error::custom("row count does not match entries"));
        }
        RatMatrix::from_rows(r.entries, Some(r.cols)).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    #[serde(with = "json::int_rows")]
    basis: Vec<Vec<num_bigint::BigInt>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient_dim(),
            basis: self.basis().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SubspaceRepr::deserialize(d)?;
        Subspace::from_canonical_basis(r.ambient_dim, r.basis).map_err(serde::de::Error::custom)
    }
}
