use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::NilpotentError;
use crate::exact_linalg::{json, IntMatrix, RatMatrix};
use crate::symplectic::{
    block_form, integer_symplectic_normal_form, SymplecticBasis, SymplecticSpace,
};

/// Generalized Heisenberg group of rank `k` with `[x_i, y_j] = z^{δ_ij m_i}`;
/// rank 0 is the infinite cyclic group `<z>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeisenbergGroup {
    rank: usize,
    #[serde(with = "json::int_vec")]
    invariants: Vec<BigInt>,
}

impl HeisenbergGroup {
    pub fn new(invariants: Vec<BigInt>) -> Result<Self, NilpotentError> {
        if invariants.iter().any(|m| !m.is_positive()) {
            return Err(NilpotentError::InvalidInvariants);
        }
        if invariants.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(NilpotentError::InvalidInvariants);
        }
        Ok(HeisenbergGroup {
            rank: invariants.len(),
            invariants,
        })
    }

    pub fn cyclic() -> Self {
        HeisenbergGroup {
            rank: 0,
            invariants: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank == 0
    }

    /// Exponents of `[u, v]` for `u, v` in `H/Z` coordinates `(x_1, y_1, ..., x_k, y_k)`.
    pub fn commutator_form(&self) -> IntMatrix {
        block_form(&self.invariants)
    }

    pub fn generator_names(&self) -> Vec<String> {
        let k = self.rank;
        (1..=k)
            .map(|i| format!("x{i}"))
            .chain((1..=k).map(|i| format!("y{i}")))
            .chain(std::iter::once("z".to_string()))
            .collect()
    }

    /// Dimension of `Hom(H, Q)`: `2k`, or 1 for the cyclic group.
    pub fn dual_dim(&self) -> usize {
        if self.rank == 0 {
            1
        } else {
            2 * self.rank
        }
    }
}

/// Heisenberg group read off a nondegenerate integer commutation form, with
/// `x_i, y_i` the columns `2i, 2i+1` of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergLift {
    pub group: HeisenbergGroup,
    pub t: IntMatrix,
}

pub fn symplectic_basis_lift(b: &IntMatrix) -> Result<HeisenbergLift, NilpotentError> {
    let f = integer_symplectic_normal_form(b)?;
    let group = HeisenbergGroup::new(f.invariants)?;
    Ok(HeisenbergLift { group, t: f.t })
}

/// The embedding `ρ: H/Z → H^#`, `ρ(h)[h'] = (h, h')`, and the form `β` it
/// induces on `H^#` (coordinates dual to `x_1, y_1, ..., x_k, y_k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationRho {
    pub space: SymplecticSpace,
    /// Columns are `ρ(x_1), ρ(y_1), ...`.
    pub rho: IntMatrix,
}

impl CommutationRho {
    /// `ρ^{-1}(v)` when `v` lies in the lattice `ρ(H/Z)`.
    pub fn preimage(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let x = self.rho.to_rat().solve_unique(v)?;
        x.iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

pub fn commutation_form_rho(h: &HeisenbergGroup) -> Result<CommutationRho, NilpotentError> {
    if h.is_cyclic() {
        return Err(NilpotentError::RankZero);
    }
    let b = h.commutator_form();
    let rho = b.transpose();
    // β(ρa, ρb) = aᵀ B b with ρ = Bᵀ forces Gram = (Bᵀ)^{-1}.
    let gram = rho.to_rat().inverse().expect("invariants are nonzero");
    let space = SymplecticSpace::new(gram)?;
    Ok(CommutationRho { space, rho })
}

/// Finite-index subgroup `P = <D, z>` of `H` whose symplectic basis `D`
/// realizes a scaled symplectic basis `C` of `H^#`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSubgroup {
    pub j: BigInt,
    pub group: HeisenbergGroup,
    /// Rows `x'_1, y'_1, ...` in `H/Z` coordinates, with
    /// `ρ(x'_i) = j c'_i` and `ρ(y'_i) = -j c_i`.
    pub generators: IntMatrix,
}

impl SymplecticSubgroup {
    /// `ι*: H* → P*`, restriction of characters; rows are the generators.
    pub fn restriction(&self) -> RatMatrix {
        self.generators.to_rat()
    }
}

/// Least `j > 0` with `j C ⊆ ρ(H/Z)`, and the lift `D` of the scaled basis.
pub fn finite_index_symplectic_subgroup(
    h: &HeisenbergGroup,
    rho: &CommutationRho,
    c: &SymplecticBasis,
) -> Result<SymplecticSubgroup, NilpotentError> {
    let k = h.rank();
    if c.rank() != k || rho.space.gram_of(c.vectors()) != crate::symplectic::standard_gram(k) {
        return Err(NilpotentError::NotSymplectic);
    }
    let mut j = BigInt::one();
    for v in c.vectors() {
        for (idx, x) in v.iter().enumerate() {
            let scaled = x / BigRational::from_integer(h.invariants()[idx / 2].clone());
            j = j.lcm(scaled.denom());
        }
    }
    let jq = BigRational::from_integer(j.clone());
    let mut rows = Vec::with_capacity(2 * k);
    for i in 0..k {
        let x_img: Vec<BigRational> = c.f(i).iter().map(|a| &jq * a).collect();
        let y_img: Vec<BigRational> = c.e(i).iter().map(|a| -(&jq * a)).collect();
        for img in [x_img, y_img] {
            rows.push(rho.preimage(&img).ok_or_else(|| {
                NilpotentError::Internal("scaled basis outside ρ-lattice".into())
            })?);
        }
    }
    let generators = IntMatrix::from_rows(rows, Some(2 * k))?;
    let jj = &j * &j;
    let group = HeisenbergGroup::new(vec![jj; k])?;
    let cf = generators
        .mul(&h.commutator_form())?
        .mul(&generators.transpose())?;
    if cf != group.commutator_form() {
        return Err(NilpotentError::Internal(
            "lifted generators fail the commutator relations".into(),
        ));
    }
    Ok(SymplecticSubgroup {
        j,
        group,
        generators,
    })
}
