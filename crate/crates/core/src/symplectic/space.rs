use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SymplecticError;
use crate::exact_linalg::{dot_rat, kernel, IntMatrix, RatMatrix, RatVector, Subspace};

/// Even-dimensional rational space with a nondegenerate skew form
/// `β(u, v) = uᵀ G v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    gram: RatMatrix,
}

impl SymplecticSpace {
    pub fn new(gram: RatMatrix) -> Result<Self, SymplecticError> {
        if !gram.is_skew_symmetric() {
            return Err(SymplecticError::NotSkew);
        }
        if !gram.nrows().is_multiple_of(2) {
            return Err(SymplecticError::OddDimension(gram.nrows()));
        }
        if gram.determinant()?.is_zero() {
            return Err(SymplecticError::Degenerate);
        }
        Ok(SymplecticSpace { gram })
    }

    pub fn from_integer(gram: &IntMatrix) -> Result<Self, SymplecticError> {
        Self::new(gram.to_rat())
    }

    /// Standard form `J` in the ordering `e_1, f_1, ..., e_k, f_k`.
    pub fn standard(k: usize) -> Self {
        SymplecticSpace {
            gram: standard_gram(k),
        }
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    /// Half the dimension.
    pub fn rank(&self) -> usize {
        self.dim() / 2
    }

    pub fn form(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        let gv = self.gram.mul_vec(v).expect("vector in ambient space");
        dot_rat(u, &gv)
    }

    /// `U^⊥ = {v : β(v, u) = 0 for all u ∈ U}`.
    pub fn annihilator(&self, u: &Subspace) -> Result<Subspace, SymplecticError> {
        if u.ambient_dim() != self.dim() {
            return Err(SymplecticError::Linalg(
                crate::exact_linalg::LinalgError::DimensionMismatch {
                    expected: self.dim(),
                    found: u.ambient_dim(),
                },
            ));
        }
        let rows = u
            .basis_rat()
            .iter()
            .map(|b| self.gram.mul_vec(b))
            .collect::<Result<Vec<_>, _>>()?;
        let m = RatMatrix::from_rows(rows, Some(self.dim()))?;
        Ok(kernel(&m))
    }

    pub fn is_isotropic(&self, u: &Subspace) -> bool {
        let b = u.basis_rat();
        b.iter()
            .all(|x| b.iter().all(|y| self.form(x, y).is_zero()))
    }

    pub fn is_lagrangian(&self, u: &Subspace) -> bool {
        u.dim() == self.rank() && self.is_isotropic(u)
    }

    /// Gram matrix of a list of vectors.
    pub fn gram_of(&self, vectors: &[RatVector]) -> RatMatrix {
        let rows = vectors
            .iter()
            .map(|a| vectors.iter().map(|b| self.form(a, b)).collect())
            .collect();
        RatMatrix::from_rows(rows, Some(vectors.len())).expect("square by construction")
    }
}

pub fn standard_gram(k: usize) -> RatMatrix {
    let mut j = RatMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        j[(2 * i, 2 * i + 1)] = BigRational::one();
        j[(2 * i + 1, 2 * i)] = -BigRational::one();
    }
    j
}

/// Ordered basis `e_1, f_1, ..., e_k, f_k` with `β(e_i, f_j) = δ_ij` and all
/// other pairings zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    vectors: Vec<RatVector>,
}

impl SymplecticBasis {
    pub fn new(space: &SymplecticSpace, vectors: Vec<RatVector>) -> Result<Self, SymplecticError> {
        if vectors.len() != space.dim() || vectors.iter().any(|v| v.len() != space.dim()) {
            return Err(SymplecticError::NotSymplecticBasis);
        }
        if space.gram_of(&vectors) != standard_gram(space.rank()) {
            return Err(SymplecticError::NotSymplecticBasis);
        }
        Ok(SymplecticBasis { vectors })
    }

    pub fn from_pairs(
        space: &SymplecticSpace,
        pairs: Vec<(RatVector, RatVector)>,
    ) -> Result<Self, SymplecticError> {
        let vectors = pairs.into_iter().flat_map(|(e, f)| [e, f]).collect();
        Self::new(space, vectors)
    }

    pub fn rank(&self) -> usize {
        self.vectors.len() / 2
    }

    pub fn e(&self, i: usize) -> &RatVector {
        &self.vectors[2 * i]
    }

    pub fn f(&self, i: usize) -> &RatVector {
        &self.vectors[2 * i + 1]
    }

    pub fn vectors(&self) -> &[RatVector] {
        &self.vectors
    }

    /// `span(e_1, ..., e_k)`.
    pub fn lagrangian(&self) -> Subspace {
        let es: Vec<RatVector> = (0..self.rank()).map(|i| self.e(i).clone()).collect();
        Subspace::from_spanning(self.vectors.len(), &es).expect("basis vectors share ambient")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{rat_vec, RatMatrix};

    fn line(v: &[i64]) -> Subspace {
        Subspace::from_spanning(v.len(), &[rat_vec(v)]).unwrap()
    }

    #[test]
    fn annihilator_of_diagonal_line_is_itself() {
        let s = SymplecticSpace::standard(1);
        let u = line(&[1, 1]);
        // β(v, e+f) = v_e - v_f = 0  ⇒  v ∈ span(1,1)
        assert_eq!(s.annihilator(&u).unwrap(), u);
    }

    #[test]
    fn annihilator_extremes() {
        let s = SymplecticSpace::standard(2);
        assert!(s.annihilator(&Subspace::zero(4)).unwrap().is_full());
        assert!(s.annihilator(&Subspace::full(4)).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_forms() {
        let sym = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(matches!(
            SymplecticSpace::new(sym),
            Err(SymplecticError::NotSkew)
        ));
        let zero = RatMatrix::zeros(2, 2);
        assert!(matches!(
            SymplecticSpace::new(zero),
            Err(SymplecticError::Degenerate)
        ));
        let odd = RatMatrix::zeros(3, 3);
        assert!(matches!(
            SymplecticSpace::new(odd),
            Err(SymplecticError::OddDimension(3))
        ));
    }

    #[test]
    fn basis_validation() {
        let s = SymplecticSpace::standard(1);
        assert!(SymplecticBasis::new(&s, vec![rat_vec(&[1, 0]), rat_vec(&[0, 1])]).is_ok());
        assert!(SymplecticBasis::new(&s, vec![rat_vec(&[0, 1]), rat_vec(&[1, 0])]).is_err());
        assert!(SymplecticBasis::new(&s, vec![rat_vec(&[1, 0]), rat_vec(&[2, 1])]).is_ok());
    }
}
