use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::DeltaError;
use crate::exact_linalg::{
    json, primitive_int, primitive_integer, rank_int, to_rat_vec, RatMatrix, RatVector, Subspace,
};
use crate::symplectic::ternary_choices;

/// Nonnegative rational combinations of linearly independent primitive
/// integer generators, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplicialCone {
    #[serde(with = "json::int_rows")]
    generators: Vec<Vec<BigInt>>,
    pub tag: String,
}

impl SimplicialCone {
    pub fn new(
        ambient_dim: usize,
        generators: Vec<Vec<BigInt>>,
        tag: impl Into<String>,
    ) -> Result<Self, DeltaError> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_dim) {
            return Err(DeltaError::DimensionMismatch {
                expected: ambient_dim,
                found: g.len(),
            });
        }
        if rank_int(&generators) != generators.len() {
            return Err(DeltaError::DependentGenerators);
        }
        let mut gens: Vec<Vec<BigInt>> = generators.iter().map(|g| primitive_int(g)).collect();
        gens.sort();
        Ok(SimplicialCone {
            generators: gens,
            tag: tag.into(),
        })
    }

    pub fn from_rational(
        ambient_dim: usize,
        generators: &[RatVector],
        tag: impl Into<String>,
    ) -> Result<Self, DeltaError> {
        Self::new(
            ambient_dim,
            generators.iter().map(|g| primitive_integer(g)).collect(),
            tag,
        )
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn span(&self, ambient_dim: usize) -> Subspace {
        Subspace::from_int_spanning(ambient_dim, &self.generators)
            .expect("generators in ambient space")
    }

    /// Coefficients of `v` on the generators, if `v` lies in their span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<RatVector> {
        if self.generators.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let cols: Vec<RatVector> = self.generators.iter().map(|g| to_rat_vec(g)).collect();
        RatMatrix::from_columns(&cols, v.len())
            .ok()?
            .solve_unique(v)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v)
            .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    }

    /// Image under `map`; fails if the images become dependent.
    pub fn map(&self, map: &RatMatrix) -> Result<SimplicialCone, DeltaError> {
        let imgs = self
            .generators
            .iter()
            .map(|g| map.mul_vec(&to_rat_vec(g)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rational(map.nrows(), &imgs, self.tag.clone())
    }
}

/// Finite union of simplicial cones bounding a Δ set; no cones means `{0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBound {
    pub ambient_dim: usize,
    pub cones: Vec<SimplicialCone>,
}

impl DeltaBound {
    pub fn origin(ambient_dim: usize) -> Self {
        DeltaBound {
            ambient_dim,
            cones: Vec::new(),
        }
    }

    pub fn is_origin(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        v.iter().all(|x| x.is_zero()) || self.cones.iter().any(|c| c.contains(v))
    }

    /// Distinct spans of the cones, in cone order.
    pub fn spans(&self) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = Vec::new();
        for c in &self.cones {
            let s = c.span(self.ambient_dim);
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

/// Concatenation with repeated cones (same generators) dropped.
pub fn union(bounds: &[DeltaBound]) -> Result<DeltaBound, DeltaError> {
    let Some(first) = bounds.first() else {
        return Err(DeltaError::EmptyUnion);
    };
    let n = first.ambient_dim;
    let mut cones: Vec<SimplicialCone> = Vec::new();
    for b in bounds {
        if b.ambient_dim != n {
            return Err(DeltaError::DimensionMismatch {
                expected: n,
                found: b.ambient_dim,
            });
        }
        for c in &b.cones {
            if !cones.iter().any(|d| d.generators == c.generators) {
                cones.push(c.clone());
            }
        }
    }
    Ok(DeltaBound {
        ambient_dim: n,
        cones,
    })
}

/// `π*(Δ)` for an injective `π*`.
pub fn pullback(bound: &DeltaBound, pi_star: &RatMatrix) -> Result<DeltaBound, DeltaError> {
    if pi_star.ncols() != bound.ambient_dim {
        return Err(DeltaError::DimensionMismatch {
            expected: pi_star.ncols(),
            found: bound.ambient_dim,
        });
    }
    if pi_star.rank() != pi_star.ncols() {
        return Err(DeltaError::NotInjective);
    }
    let cones = bound
        .cones
        .iter()
        .map(|c| c.map(pi_star))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DeltaBound {
        ambient_dim: pi_star.nrows(),
        cones,
    })
}

/// `(ι*)^{-1}(Δ)` for an isomorphism `ι*: H* → P*`.
pub fn induced_transfer(
    bound: &DeltaBound,
    iota_star: &RatMatrix,
) -> Result<DeltaBound, DeltaError> {
    if !iota_star.is_square() || iota_star.nrows() != bound.ambient_dim {
        return Err(DeltaError::DimensionMismatch {
            expected: bound.ambient_dim,
            found: iota_star.nrows(),
        });
    }
    let inv = iota_star.inverse().ok_or(DeltaError::Singular)?;
    let cones = bound
        .cones
        .iter()
        .map(|c| c.map(&inv))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DeltaBound {
        ambient_dim: bound.ambient_dim,
        cones,
    })
}

/// `λ_i ∈ {χ_i, ψ_i, φ_i}` as a vector in the dual coordinates
/// `(χ_1, ψ_1, ..., χ_k, ψ_k)`.
fn lambda(k: usize, i: usize, choice: u8) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); 2 * k];
    match choice {
        0 => v[2 * i] = 1.into(),
        1 => v[2 * i + 1] = 1.into(),
        _ => {
            v[2 * i] = (-1).into();
            v[2 * i + 1] = (-1).into();
        }
    }
    v
}

/// The `3^k` cones on `{λ_1, ..., λ_k}`, `λ_i ∈ {χ_i, ψ_i, φ_i = -χ_i - ψ_i}`;
/// `{0}` in the one-dimensional dual of the cyclic group when `k = 0`.
pub fn heisenberg_delta_bound(k: usize, tag: &str) -> DeltaBound {
    if k == 0 {
        return DeltaBound::origin(1);
    }
    let cones = ternary_choices(k)
        .iter()
        .map(|ch| {
            let gens = ch
                .iter()
                .enumerate()
                .map(|(i, &c)| lambda(k, i, c))
                .collect();
            SimplicialCone::new(2 * k, gens, tag).expect("λ_i involve disjoint coordinates")
        })
        .collect();
    DeltaBound {
        ambient_dim: 2 * k,
        cones,
    }
}

/// For each `i`, `min{0, χ(x_i), χ(y_i)}` is attained at least twice;
/// `chi` holds the values `(χ(x_1), χ(y_1), ..., χ(x_k), χ(y_k))`.
pub fn min_twice_membership(chi: &[BigRational]) -> bool {
    chi.chunks(2).all(|pair| {
        let vals = [BigRational::zero(), pair[0].clone(), pair[1].clone()];
        let min = vals.iter().min().expect("three values").clone();
        vals.iter().filter(|v| **v == min).count() >= 2
    })
}
