use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::NilpotentError;
use crate::exact_linalg::{json, kernel, IntMatrix, RatMatrix, Subspace};

/// `[g_i, g_j] = z^z` for one pair `i < j`; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commutator {
    pub i: usize,
    pub j: usize,
    #[serde(with = "json::int_vec")]
    pub z: Vec<BigInt>,
}

/// A torsion-free class-2 group generated by `g_1..g_n` and central
/// `z_1..z_r`; pairs not listed commute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTwoData {
    pub n: usize,
    pub r: usize,
    #[serde(default)]
    pub comm: Vec<Commutator>,
}

/// Commutation form on `Z^n` with values in `Z^r`, one `n x n` skew matrix per
/// central coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CommutationForm {
    pub n: usize,
    pub omega: Vec<IntMatrix>,
}

impl CommutationForm {
    pub fn r(&self) -> usize {
        self.omega.len()
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().all(|w| w.is_zero())
    }

    /// Lattice `{a : ω(a, ·) = 0}`, as a canonical rational basis.
    pub fn radical(&self) -> Subspace {
        let n = self.n;
        let rows: Vec<Vec<BigInt>> = self
            .omega
            .iter()
            .flat_map(|w| (0..n).map(move |j| w.column(j)))
            .collect();
        if rows.is_empty() {
            return Subspace::full(n);
        }
        let m = IntMatrix::from_rows(rows, Some(n))
            .expect("columns of a square matrix")
            .to_rat();
        kernel(&m)
    }

    /// `r x (n choose 2)` matrix whose columns are the vectors `c_ij`, `i < j`.
    pub fn pair_matrix(&self) -> IntMatrix {
        let mut cols = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                cols.push(
                    self.omega
                        .iter()
                        .map(|w| w[(i, j)].clone())
                        .collect::<Vec<_>>(),
                );
            }
        }
        let mut m = IntMatrix::zeros(self.r(), cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (s, x) in col.iter().enumerate() {
                m[(s, c)] = x.clone();
            }
        }
        m
    }
}

impl ClassTwoData {
    pub fn num_generators(&self) -> usize {
        self.n + self.r
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.n)
            .map(|i| format!("g{i}"))
            .chain((1..=self.r).map(|s| format!("z{s}")))
            .collect()
    }

    /// Structural checks only: indices, lengths, duplicates.
    fn check_entries(&self) -> Result<(), NilpotentError> {
        if self.r == 0 && !self.comm.is_empty() {
            return Err(NilpotentError::CommutatorsWithoutCenter);
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.comm {
            if c.i == 0 || c.i >= c.j || c.j > self.n {
                return Err(NilpotentError::InvalidPair {
                    i: c.i,
                    j: c.j,
                    n: self.n,
                });
            }
            if c.z.len() != self.r {
                return Err(NilpotentError::CenterLength {
                    expected: self.r,
                    found: c.z.len(),
                });
            }
            if !seen.insert((c.i, c.j)) {
                return Err(NilpotentError::DuplicatePair { i: c.i, j: c.j });
            }
        }
        Ok(())
    }

    pub(crate) fn form(&self) -> CommutationForm {
        let mut omega = vec![IntMatrix::zeros(self.n, self.n); self.r];
        for c in &self.comm {
            for (s, x) in c.z.iter().enumerate() {
                omega[s][(c.i - 1, c.j - 1)] = x.clone();
                omega[s][(c.j - 1, c.i - 1)] = -x;
            }
        }
        CommutationForm { n: self.n, omega }
    }

    /// Checks the entries and that the declared center is exact: no nonzero
    /// combination of the `g_i` commutes with everything, unless the group is
    /// abelian.
    pub fn validate(&self) -> Result<(), NilpotentError> {
        self.check_entries()?;
        let form = self.form();
        if form.is_zero() {
            return Ok(());
        }
        let rad = form.radical();
        if let Some(w) = rad.basis().first() {
            return Err(NilpotentError::CenterNotExact { witness: w.clone() });
        }
        Ok(())
    }

    /// `Q*` inside `Q^{n+r}` (values on `g_1..g_n, z_1..z_r`): characters
    /// vanishing on every commutator.
    pub fn dual_space(&self) -> Subspace {
        let n = self.num_generators();
        let rows: Vec<_> = self
            .comm
            .iter()
            .filter(|c| c.z.iter().any(|x| !x.is_zero()))
            .map(|c| {
                let mut v = vec![BigInt::zero(); n];
                for (s, x) in c.z.iter().enumerate() {
                    v[self.n + s] = x.clone();
                }
                v
            })
            .collect();
        if rows.is_empty() {
            return Subspace::full(n);
        }
        kernel(
            &RatMatrix::from_rows(
                rows.iter()
                    .map(|r| crate::exact_linalg::to_rat_vec(r))
                    .collect(),
                Some(n),
            )
            .expect("rows of length n"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int_vec;

    fn data(n: usize, r: usize, comm: &[(usize, usize, &[i64])]) -> ClassTwoData {
        ClassTwoData {
            n,
            r,
            comm: comm
                .iter()
                .map(|(i, j, z)| Commutator {
                    i: *i,
                    j: *j,
                    z: int_vec(z),
                })
                .collect(),
        }
    }

    #[test]
    fn heisenberg_is_valid() {
        assert!(data(2, 1, &[(1, 2, &[1])]).validate().is_ok());
    }

    #[test]
    fn extra_central_generator_is_valid() {
        assert!(data(2, 2, &[(1, 2, &[1, 0])]).validate().is_ok());
    }

    #[test]
    fn abelian_is_valid() {
        assert!(data(1, 1, &[]).validate().is_ok());
    }

    #[test]
    fn central_generator_combination_rejected() {
        // g_3 commutes with g_1 and g_2.
        let d = data(3, 1, &[(1, 2, &[1])]);
        match d.validate() {
            Err(NilpotentError::CenterNotExact { witness }) => {
                assert_eq!(witness, int_vec(&[0, 0, 1]))
            }
            other => panic!("{other:?}"),
        }
        // [g1,g3] = z and [g2,g3] = z^-1, so g1 g2 is central.
        let d = data(3, 1, &[(1, 3, &[1]), (2, 3, &[-1])]);
        assert!(matches!(
            d.validate(),
            Err(NilpotentError::CenterNotExact { .. })
        ));
    }

    #[test]
    fn malformed_entries_rejected() {
        assert!(matches!(
            data(2, 0, &[(1, 2, &[])]).validate(),
            Err(NilpotentError::CommutatorsWithoutCenter)
        ));
        assert!(matches!(
            data(2, 1, &[(2, 1, &[1])]).validate(),
            Err(NilpotentError::InvalidPair { .. })
        ));
        assert!(matches!(
            data(2, 1, &[(1, 2, &[1, 1])]).validate(),
            Err(NilpotentError::CenterLength { .. })
        ));
        assert!(matches!(
            data(2, 1, &[(1, 2, &[1]), (1, 2, &[2])]).validate(),
            Err(NilpotentError::DuplicatePair { .. })
        ));
    }

    #[test]
    fn dual_space_kills_commutators() {
        let d = data(2, 2, &[(1, 2, &[1, 0])]);
        let q = d.dual_space();
        assert_eq!(q.dim(), 3);
        assert!(!q.contains_int(&int_vec(&[0, 0, 1, 0])).unwrap());
        assert!(q.contains_int(&int_vec(&[1, 1, 0, 1])).unwrap());
    }
}
