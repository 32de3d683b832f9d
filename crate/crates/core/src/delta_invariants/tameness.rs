use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cone::{DeltaBound, SimplicialCone};
use super::feasibility::{nonnegative_dependency, separating_functional, Method};
use super::DeltaError;
use crate::exact_linalg::{dot_rat, json, to_rat_vec, IntMatrix, RatVector};

fn pair_columns(a: &SimplicialCone, b: &SimplicialCone) -> Vec<RatVector> {
    a.generators()
        .iter()
        .chain(b.generators())
        .map(|g| to_rat_vec(g))
        .collect()
}

/// `v ∈ a` with `-v ∈ b`, if `a ∩ (-b) ≠ {0}`.
fn opposite_point(a: &SimplicialCone, b: &SimplicialCone) -> (Method, Option<RatVector>) {
    let cols = pair_columns(a, b);
    let f = nonnegative_dependency(&cols);
    let witness = f.solution.map(|x| {
        let k = a.generators().len();
        let d = cols[0].len();
        // Independence of a's generators makes this nonzero.
        (0..d)
            .map(|r| (0..k).map(|t| &x[t] * &cols[t][r]).sum())
            .collect()
    });
    (f.method, witness)
}

/// A nonzero `v` with `v` and `-v` both in the bound, if one exists.
pub fn contains_line(bound: &DeltaBound) -> Option<RatVector> {
    for a in &bound.cones {
        for b in &bound.cones {
            if let (_, Some(v)) = opposite_point(a, b) {
                return Some(v);
            }
        }
    }
    None
}

/// Verdict on the ordered pair `(cones[first], cones[second])`: a functional
/// positive on every generator of both cones, so `C ∩ (-C') = {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub first: usize,
    pub second: usize,
    pub method: Method,
    #[serde(with = "json::int_vec")]
    pub separator: Vec<BigInt>,
}

/// Unimodular action of a central generator on the module generators' lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralAction {
    pub generator: String,
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
}

impl CentralAction {
    pub fn new(generator: impl Into<String>, matrix: IntMatrix) -> Result<Self, DeltaError> {
        let generator = generator.into();
        let inverse = matrix
            .integer_inverse()
            .ok_or_else(|| DeltaError::NotUnimodular(generator.clone()))?;
        Ok(CentralAction {
            generator,
            matrix,
            inverse,
        })
    }

    pub fn verify(&self) -> Result<(), DeltaError> {
        let n = self.matrix.nrows();
        let ok = self.matrix.is_square()
            && self
                .matrix
                .mul(&self.inverse)
                .is_ok_and(|p| p == IntMatrix::identity(n))
            && self
                .inverse
                .mul(&self.matrix)
                .is_ok_and(|p| p == IntMatrix::identity(n));
        ok.then_some(())
            .ok_or_else(|| DeltaError::NotUnimodular(self.generator.clone()))
    }
}

/// No line in the bound, witnessed pair by pair, plus the central actions
/// whose unimodularity keeps the module's ℤ-span finitely generated over the
/// derived subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamenessCertificate {
    pub pairs: Vec<PairVerdict>,
    pub central_actions: Vec<CentralAction>,
}

pub fn tameness_certificate(
    bound: &DeltaBound,
    central_actions: Vec<(String, IntMatrix)>,
) -> Result<TamenessCertificate, DeltaError> {
    let mut pairs = Vec::new();
    for (i, a) in bound.cones.iter().enumerate() {
        for (j, b) in bound.cones.iter().enumerate() {
            let (method, witness) = opposite_point(a, b);
            if let Some(v) = witness {
                return Err(line_found(&v));
            }
            let separator = separating_functional(&pair_columns(a, b)).ok_or_else(|| {
                DeltaError::Internal(format!("no separator for infeasible pair ({i}, {j})"))
            })?;
            pairs.push(PairVerdict {
                first: i,
                second: j,
                method,
                separator,
            });
        }
    }
    let central_actions = central_actions
        .into_iter()
        .map(|(g, m)| CentralAction::new(g, m))
        .collect::<Result<_, _>>()?;
    Ok(TamenessCertificate {
        pairs,
        central_actions,
    })
}

fn line_found(v: &[BigRational]) -> DeltaError {
    DeltaError::LineFound {
        witness: v.iter().map(|x| x.to_string()).collect(),
    }
}

fn mismatch(bound: &DeltaBound, detail: String) -> DeltaError {
    match contains_line(bound) {
        Some(v) => line_found(&v),
        None => DeltaError::CertificateMismatch(detail),
    }
}

impl TamenessCertificate {
    /// Replays every verdict against `bound` without searching. On any
    /// mismatch the whole bound is searched so the error carries a concrete line
    /// when one exists.
    pub fn verify(&self, bound: &DeltaBound) -> Result<(), DeltaError> {
        let n = bound.cones.len();
        if self.pairs.len() != n * n {
            return Err(mismatch(
                bound,
                format!("{} pair verdicts for {} cones", self.pairs.len(), n),
            ));
        }
        for (idx, p) in self.pairs.iter().enumerate() {
            if (p.first, p.second) != (idx / n.max(1), idx % n.max(1)) {
                return Err(DeltaError::CertificateMismatch(format!(
                    "pair verdict {idx} out of order"
                )));
            }
            let (a, b) = (&bound.cones[p.first], &bound.cones[p.second]);
            let w = to_rat_vec(&p.separator);
            let separates = w.len() == bound.ambient_dim
                && a.generators()
                    .iter()
                    .chain(b.generators())
                    .all(|g| dot_rat(&w, &to_rat_vec(g)).is_positive());
            if !separates {
                return Err(mismatch(
                    bound,
                    format!(
                        "separator of pair ({}, {}) is not positive on both cones",
                        p.first, p.second
                    ),
                ));
            }
        }
        self.central_actions
            .iter()
            .try_for_each(CentralAction::verify)
    }
}

/// `v ≠ 0` with both `v` and `-v` in the bound.
pub fn is_line_witness(bound: &DeltaBound, v: &[BigRational]) -> bool {
    let neg: RatVector = v.iter().map(|x| -x.clone()).collect();
    v.iter().any(|x| !x.is_zero()) && bound.contains(v) && bound.contains(&neg)
}
