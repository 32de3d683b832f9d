use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{primitive_integer, rank_int, rref_in_place, to_rat_vec};
use super::{LinalgError, RatMatrix, RatVector};

/// A rational subspace of `Q^n`, stored canonically: reduced row echelon
/// form with pivots leftmost, each row scaled to a primitive integer vector
/// with positive pivot. Equal subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                (0..ambient_dim)
                    .map(|j| BigInt::from((i == j) as i32))
                    .collect()
            })
            .collect();
        Subspace { ambient_dim, basis }
    }

    pub fn from_spanning(ambient_dim: usize, vectors: &[RatVector]) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        let mut rows = vectors.to_vec();
        rref_in_place(&mut rows, ambient_dim);
        Ok(Subspace {
            ambient_dim,
            basis: rows.iter().map(|r| primitive_integer(r)).collect(),
        })
    }

    pub fn from_int_spanning(
        ambient_dim: usize,
        vectors: &[Vec<BigInt>],
    ) -> Result<Self, LinalgError> {
        let rat: Vec<RatVector> = vectors.iter().map(|v| to_rat_vec(v)).collect();
        Self::from_spanning(ambient_dim, &rat)
    }

    /// Rebuilds from stored rows, rejecting anything that is not already canonical.
    pub fn from_canonical_basis(
        ambient_dim: usize,
        basis: Vec<Vec<BigInt>>,
    ) -> Result<Self, LinalgError> {
        let s = Self::from_int_spanning(ambient_dim, &basis)?;
        if s.basis != basis {
            return Err(LinalgError::NotCanonical);
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_rat(&self) -> Vec<RatVector> {
        self.basis.iter().map(|r| to_rat_vec(r)).collect()
    }

    fn check_ambient(&self, n: usize) -> Result<(), LinalgError> {
        if n != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains(&self, v: &[BigRational]) -> Result<bool, LinalgError> {
        self.check_ambient(v.len())?;
        let mut w = v.to_vec();
        for row in &self.basis {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            if w[p].is_zero() {
                continue;
            }
            let f = &w[p] / BigRational::from_integer(row[p].clone());
            for (wj, rj) in w.iter_mut().zip(row) {
                *wj -= &f * rj;
            }
        }
        Ok(w.iter().all(Zero::is_zero))
    }

    pub fn contains_int(&self, v: &[BigInt]) -> Result<bool, LinalgError> {
        self.contains(&to_rat_vec(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other.ambient_dim)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::from_int_spanning(self.ambient_dim, &rows)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        let m = RatMatrix::from_rows(self.basis_rat(), Some(self.ambient_dim))
            .expect("basis rows have ambient length");
        kernel(&m)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other.ambient_dim)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let perp = self
            .orthogonal_complement()
            .sum(&other.orthogonal_complement())?;
        Ok(perp.orthogonal_complement())
    }

    /// `self ∩ other = {0}`, decided by a rank computation.
    pub fn meets_trivially(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other.ambient_dim)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(rank_int(&rows) == self.dim() + other.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other.ambient_dim)?;
        for row in &self.basis {
            if !other.contains_int(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, map: &RatMatrix) -> Result<Subspace, LinalgError> {
        self.check_ambient(map.ncols())?;
        let imgs = self
            .basis_rat()
            .iter()
            .map(|v| map.mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        Subspace::from_spanning(map.nrows(), &imgs)
    }
}

/// Kernel `{v : a v = 0}` as a canonical subspace.
pub fn kernel(a: &RatMatrix) -> Subspace {
    let n = a.ncols();
    let mut rows = a.to_rows();
    let pivots = rref_in_place(&mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<RatVector> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::from_integer(BigInt::from(1));
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Subspace::from_spanning(n, &vectors).expect("kernel vectors have ambient length")
}

/// Canonical sign-normal form for a nonzero integer ray: primitive with the
/// first nonzero entry positive.
pub fn normalized_line(v: &[BigInt]) -> Vec<BigInt> {
    let p = super::primitive_int(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => p.iter().map(|y| -y).collect(),
        _ => p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{int_vec, rat_vec};

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        let v: Vec<RatVector> = vs.iter().map(|x| rat_vec(x)).collect();
        Subspace::from_spanning(n, &v).unwrap()
    }

    #[test]
    fn spanning_examples() {
        let s = span(2, &[&[2, 0], &[4, 0]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis(), &[int_vec(&[1, 0])]);
        assert_eq!(span(2, &[]).dim(), 0);
        assert!(span(2, &[&[1, 1], &[1, -1]]).is_full());
        assert!(matches!(
            Subspace::from_spanning(2, &[rat_vec(&[1, 2, 3])]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn canonical_rows_are_primitive() {
        let s = span(3, &[&[2, 1, 0], &[0, 1, 3]]);
        // RREF over Q: (1,0,-3/2), (0,1,3)
        assert_eq!(s.basis(), &[int_vec(&[2, 0, -3]), int_vec(&[0, 1, 3])]);
    }

    #[test]
    fn intersection_examples() {
        let u = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let v = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(u.intersect(&v).unwrap(), span(3, &[&[0, 1, 0]]));
        assert_eq!(u.intersect(&u).unwrap(), u);
        let a = span(2, &[&[1, 0]]);
        let b = span(2, &[&[1, 1]]);
        assert!(a.intersect(&b).unwrap().is_zero());
        assert!(a.meets_trivially(&b).unwrap());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&RatMatrix::identity(3)).is_zero());
        assert!(kernel(&RatMatrix::zeros(2, 2)).is_full());
        assert_eq!(
            kernel(&RatMatrix::from_i64(&[&[1, 1]])),
            span(2, &[&[1, -1]])
        );
    }

    #[test]
    fn membership() {
        let s = span(3, &[&[1, 2, 3]]);
        assert!(s.contains_int(&int_vec(&[-2, -4, -6])).unwrap());
        assert!(!s.contains_int(&int_vec(&[1, 2, 4])).unwrap());
        assert!(s.contains_int(&int_vec(&[0, 0, 0])).unwrap());
        assert!(s.contains_int(&int_vec(&[1, 2])).is_err());
    }

    #[test]
    fn non_canonical_basis_rejected() {
        assert!(Subspace::from_canonical_basis(2, vec![int_vec(&[2, 0])]).is_err());
        assert!(Subspace::from_canonical_basis(2, vec![int_vec(&[1, 0])]).is_ok());
    }
}
