use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::class_two::{ClassTwoData, CommutationForm};
use super::heisenberg::{symplectic_basis_lift, HeisenbergGroup};
use super::NilpotentError;
use crate::exact_linalg::{
    is_primitive_sublattice, rank_int, saturated_basis, smith_normal_form, IntMatrix, RatMatrix,
    Subspace,
};

/// Finite factor supplied by the caller; it only contributes `Δ = {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFactor {
    pub name: String,
    pub order: u64,
}

/// A factor `Q → Q_i` of a subdirect decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub group: HeisenbergGroup,
    /// Images of the input generators in the factor's abelianization
    /// coordinates: `x_1, y_1, ..., x_k, y_k`, or `z` for rank 0.
    pub projection: IntMatrix,
    /// Path of quotients leading to this factor, e.g. `"1.2"`.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub trace: String,
}

impl Factor {
    /// `π*` on characters, as a matrix acting on the factor dual coordinates.
    pub fn dual_embedding(&self) -> RatMatrix {
        self.projection.transpose().to_rat()
    }

    pub fn check(&self, generators: usize) -> Result<(), NilpotentError> {
        let rows = self.group.dual_dim();
        if self.projection.nrows() != rows || self.projection.ncols() != generators {
            return Err(NilpotentError::ProjectionShape {
                rows,
                cols: generators,
            });
        }
        if self.projection.rank() != rows {
            return Err(NilpotentError::DualEmbeddingNotInjective);
        }
        Ok(())
    }
}

/// Linear images of `Q/Z(Q)` and `Z(Q)` in every factor; the projection
/// kernels meet trivially iff both stacks are injective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdirectCertificate {
    pub quotient_rank: usize,
    pub center_rank: usize,
    pub quotient_maps: Vec<IntMatrix>,
    pub center_maps: Vec<IntMatrix>,
}

impl SubdirectCertificate {
    pub fn verify(&self) -> Result<(), NilpotentError> {
        let stack = |maps: &[IntMatrix], cols: usize| -> Vec<Vec<BigInt>> {
            maps.iter()
                .flat_map(|m| m.to_rows())
                .filter(|r| r.len() == cols)
                .collect()
        };
        let q = stack(&self.quotient_maps, self.quotient_rank);
        let z = stack(&self.center_maps, self.center_rank);
        if rank_int(&q) != self.quotient_rank || rank_int(&z) != self.center_rank {
            return Err(NilpotentError::KernelsIntersect);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDecomposition {
    pub generators: Vec<String>,
    pub dual_space: Subspace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_factor: Option<FiniteFactor>,
    pub factors: Vec<Factor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SubdirectCertificate>,
}

impl FactorDecomposition {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn check(&self) -> Result<(), NilpotentError> {
        for f in &self.factors {
            f.check(self.num_generators())?;
        }
        if let Some(c) = &self.certificate {
            c.verify()?;
        }
        Ok(())
    }
}

/// A quotient of the normalized root group, with the linear map taking root
/// coordinates `(a, c)` to the quotient's `(a, c)` coordinates.
struct Node {
    form: CommutationForm,
    map: IntMatrix,
    trace: String,
}

struct Terminal {
    group: HeisenbergGroup,
    /// Root `(a, c)` → factor `(H/Z coordinates, z)`.
    map: IntMatrix,
    trace: String,
}

/// Standard basis vectors, taken in order, completing a saturated lattice to
/// a basis of `Z^n`, so that factor coordinates follow the input generators.
fn coordinate_complement(radical: &[Vec<BigInt>], n: usize) -> Option<Vec<Vec<BigInt>>> {
    let mut rows = radical.to_vec();
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::from(1);
        rows.push(e.clone());
        if rank_int(&rows) == rows.len() && is_primitive_sublattice(&rows, n) {
            out.push(e);
        } else {
            rows.pop();
        }
    }
    (rows.len() == n).then_some(out)
}

/// Moves the radical of the form into the center: returns the new form and
/// the coordinate change `(a, c) ↦ (a', c, a_rad)`.
fn fold_radical(form: &CommutationForm) -> (CommutationForm, IntMatrix) {
    let (n, r) = (form.n, form.r());
    let rad = form.radical();
    let d = rad.dim();
    if d == 0 {
        return (form.clone(), IntMatrix::identity(n + r));
    }
    let (_, w) = saturated_basis(rad.basis(), n);
    let radical: Vec<Vec<BigInt>> = (0..d).map(|i| w.row(i).to_vec()).collect();
    let complement = coordinate_complement(&radical, n)
        .unwrap_or_else(|| (d..n).map(|i| w.row(i).to_vec()).collect());
    // Columns of t: complement vectors first, radical vectors last.
    let mut t = IntMatrix::zeros(n, n);
    for (col, v) in complement.iter().chain(&radical).enumerate() {
        for row in 0..n {
            t[(row, col)] = v[row].clone();
        }
    }
    let t_inv = t
        .integer_inverse()
        .expect("completion of a saturated basis is unimodular");
    let n2 = n - d;
    let omega = form
        .omega
        .iter()
        .map(|w| {
            let full = t.transpose().mul(w).unwrap().mul(&t).unwrap();
            let mut m = IntMatrix::zeros(n2, n2);
            for i in 0..n2 {
                for j in 0..n2 {
                    m[(i, j)] = full[(i, j)].clone();
                }
            }
            m
        })
        .chain((0..d).map(|_| IntMatrix::zeros(n2, n2)))
        .collect();
    let mut map = IntMatrix::zeros(n + r, n + r);
    for i in 0..n2 {
        for j in 0..n {
            map[(i, j)] = t_inv[(i, j)].clone();
        }
    }
    for s in 0..r {
        map[(n2 + s, n + s)] = BigInt::from(1);
    }
    for l in 0..d {
        for j in 0..n {
            map[(n2 + r + l, j)] = t_inv[(n2 + l, j)].clone();
        }
    }
    (CommutationForm { n: n2, omega }, map)
}

fn split(node: Node, out: &mut Vec<Terminal>) -> Result<(), NilpotentError> {
    let (form, fold) = fold_radical(&node.form);
    let map = fold.mul(&node.map)?;
    let (n, r) = (form.n, form.r());
    match r {
        0 => Ok(()),
        1 if n == 0 => {
            out.push(Terminal {
                group: HeisenbergGroup::cyclic(),
                map,
                trace: node.trace,
            });
            Ok(())
        }
        1 => {
            let lift = symplectic_basis_lift(&form.omega[0])?;
            let t_inv = lift
                .t
                .integer_inverse()
                .expect("symplectic normal form transform is unimodular");
            let mut change = IntMatrix::zeros(n + 1, n + 1);
            for i in 0..n {
                for j in 0..n {
                    change[(i, j)] = t_inv[(i, j)].clone();
                }
            }
            change[(n, n)] = BigInt::from(1);
            out.push(Terminal {
                group: lift.group,
                map: change.mul(&map)?,
                trace: node.trace,
            });
            Ok(())
        }
        _ => {
            let snf = smith_normal_form(&form.pair_matrix());
            let u = &snf.u;
            let u_inv = u
                .integer_inverse()
                .expect("Smith row transform is unimodular");
            let omega: Vec<IntMatrix> = (0..r)
                .map(|s| {
                    let mut acc = IntMatrix::zeros(n, n);
                    for (t, w) in form.omega.iter().enumerate() {
                        let c = &u[(s, t)];
                        if c.is_zero() {
                            continue;
                        }
                        for i in 0..n {
                            for j in 0..n {
                                acc[(i, j)] += c * &w[(i, j)];
                            }
                        }
                    }
                    acc
                })
                .collect();
            for (i, w) in omega.into_iter().enumerate() {
                // N_i: the other center coordinates, a direct summand of Z.
                let summand: Vec<Vec<BigInt>> = (0..r)
                    .filter(|&l| l != i)
                    .map(|l| u_inv.column(l))
                    .collect();
                if !is_primitive_sublattice(&summand, r) {
                    return Err(NilpotentError::Internal(
                        "center summand not saturated".into(),
                    ));
                }
                let mut q = IntMatrix::zeros(n + 1, n + r);
                for a in 0..n {
                    q[(a, a)] = BigInt::from(1);
                }
                for t in 0..r {
                    q[(n, n + t)] = u[(i, t)].clone();
                }
                let trace = if node.trace.is_empty() {
                    format!("{}", i + 1)
                } else {
                    format!("{}.{}", node.trace, i + 1)
                };
                split(
                    Node {
                        form: CommutationForm { n, omega: vec![w] },
                        map: q.mul(&map)?,
                        trace,
                    },
                    out,
                )?;
            }
            Ok(())
        }
    }
}

/// Subdirect decomposition into generalized Heisenberg groups: quotients by
/// corank-one central summands, recursively, until the center is cyclic.
pub fn decompose_subdirect(data: &ClassTwoData) -> Result<FactorDecomposition, NilpotentError> {
    data.validate()?;
    let total = data.num_generators();
    let (root, root_map) = fold_radical(&data.form());
    let (n0, r0) = (root.n, root.r());
    let mut terminals = Vec::new();
    split(
        Node {
            form: root,
            map: IntMatrix::identity(n0 + r0),
            trace: String::new(),
        },
        &mut terminals,
    )?;
    let mut seen = std::collections::BTreeSet::new();
    terminals.retain(|t| seen.insert(format!("{:?}|{:?}", t.group, t.map.to_rows())));

    let mut factors = Vec::new();
    let mut quotient_maps = Vec::new();
    let mut center_maps = Vec::new();
    for t in terminals {
        let rows = t.map.nrows();
        let k2 = rows - 1;
        for i in 0..k2 {
            if (n0..n0 + r0).any(|j| !t.map[(i, j)].is_zero()) {
                return Err(NilpotentError::Internal(
                    "central element with non-central image".into(),
                ));
            }
        }
        let sub = |rs: std::ops::Range<usize>, cs: std::ops::Range<usize>| {
            let rows = rs
                .map(|i| cs.clone().map(|j| t.map[(i, j)].clone()).collect())
                .collect();
            IntMatrix::from_rows(rows, Some(cs.len())).expect("rectangular")
        };
        quotient_maps.push(sub(0..k2, 0..n0));
        center_maps.push(sub(k2..rows, n0..n0 + r0));
        let ab_rows = if t.group.is_cyclic() { 0..1 } else { 0..k2 };
        let projection = sub(ab_rows, 0..n0 + r0).mul(&root_map)?;
        factors.push(Factor {
            group: t.group,
            projection,
            trace: t.trace,
        });
    }
    let certificate = SubdirectCertificate {
        quotient_rank: n0,
        center_rank: r0,
        quotient_maps,
        center_maps,
    };
    certificate.verify()?;
    let out = FactorDecomposition {
        generators: data.generator_names(),
        dual_space: data.dual_space(),
        finite_factor: None,
        factors,
        certificate: Some(certificate),
    };
    debug_assert_eq!(total, out.num_generators());
    out.check()?;
    Ok(out)
}
