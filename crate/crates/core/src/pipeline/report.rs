use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::problem::Options;
use crate::delta_invariants::{DeltaBound, TamenessCertificate};
use crate::exact_linalg::{json, IntMatrix, Subspace};
use crate::heisenberg_modules::{
    AnnihilatorCertificate, FinitePresentation, FittingCertificate, RelationCertificate,
};
use crate::nilpotent_groups::FactorDecomposition;

/// A member of Ω in the dual of the input group, with the factor that added it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaEntry {
    pub factor: String,
    pub subspace: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFactorItem {
    pub name: String,
    pub order: u64,
    pub bound: DeltaBound,
}

/// Everything computed for one Heisenberg factor of rank `k ≥ 1`. Vectors of
/// `H^#` are in coordinates dual to `x_1, y_1, ..., x_k, y_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisenbergStep {
    /// Number of Ω members present when the factor was processed.
    pub omega_before: usize,
    pub omega_hat: Vec<Subspace>,
    pub lagrangian: Subspace,
    /// Symplectic basis `e_1, f_1, ...` completing the Lagrangian.
    #[serde(with = "json::rat_rows")]
    pub base: Vec<Vec<BigRational>>,
    pub p: u64,
    /// The chosen basis `C`: `e_i, p e_i + f_i`.
    #[serde(with = "json::rat_rows")]
    pub basis: Vec<Vec<BigRational>>,
    #[serde(with = "json::int")]
    pub j: BigInt,
    #[serde(with = "json::int_vec")]
    pub subgroup_invariants: Vec<BigInt>,
    /// Rows `x'_1, y'_1, ...` of the subgroup `P` in `H/Z` coordinates.
    pub subgroup_generators: IntMatrix,
    pub module_digest: String,
    pub relations: RelationCertificate,
    pub annihilators: AnnihilatorCertificate,
    pub presentation: FinitePresentation,
    pub relators_checked: usize,
    /// `Δ(P; B)` on the dual basis of `P`'s generators.
    pub bound_p: DeltaBound,
    /// Transferred to `H`.
    pub bound_h: DeltaBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    /// Position in `decomposition.factors`.
    pub index: usize,
    pub tag: String,
    pub rank: usize,
    #[serde(with = "json::int_vec")]
    pub invariants: Vec<BigInt>,
    /// Bound pulled back to the input group.
    pub bound: DeltaBound,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heisenberg: Option<HeisenbergStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub schema: u32,
    pub options: Options,
    pub decomposition: FactorDecomposition,
    /// No Heisenberg factor of positive rank: every extension is polycyclic.
    pub polycyclic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_factor: Option<FiniteFactorItem>,
    /// Factors in processing order: cyclic first, then by ascending rank.
    pub factors: Vec<FactorReport>,
    pub omega: Vec<OmegaEntry>,
    pub final_bound: DeltaBound,
    pub tameness: TamenessCertificate,
    pub fitting: FittingCertificate,
}

fn vec_text<T: std::fmt::Display>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", items.join(", "))
}

fn bound_text(out: &mut String, b: &DeltaBound) {
    if b.is_origin() {
        let _ = writeln!(out, "    {{0}}");
    }
    for c in &b.cones {
        let gens: Vec<String> = c.generators().iter().map(|g| vec_text(g)).collect();
        let _ = writeln!(out, "    cone[{}] {}", c.tag, gens.join(" "));
    }
}

impl SynthesisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text narrative with presentations in word notation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.decomposition;
        let _ = writeln!(out, "Input generators: {}", d.generators.join(", "));
        let _ = writeln!(out, "Factors: {}", d.factors.len());
        if let Some(f) = &self.finite_factor {
            let _ = writeln!(
                out,
                "Finite factor {} of order {}: bound {{0}}",
                f.name, f.order
            );
        }
        if self.polycyclic {
            let _ = writeln!(
                out,
                "No Heisenberg factor of positive rank: the extension is polycyclic."
            );
        }
        for f in &self.factors {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "Factor {} (rank {}, invariants {})",
                f.tag,
                f.rank,
                vec_text(&f.invariants)
            );
            if let Some(h) = &f.heisenberg {
                let _ = writeln!(out, "  Omega-hat members: {}", h.omega_hat.len());
                let basis: Vec<String> = h.basis.iter().map(|v| vec_text(v)).collect();
                let _ = writeln!(out, "  basis C (p = {}): {}", h.p, basis.join(" "));
                let _ = writeln!(
                    out,
                    "  scale j = {}, subgroup invariants {}",
                    h.j,
                    vec_text(&h.subgroup_invariants)
                );
                let _ = writeln!(out, "  module digest {}", h.module_digest);
                let _ = writeln!(out, "  presentation of stage {}:", h.presentation.stage);
                for line in h.presentation.to_text().lines() {
                    let _ = writeln!(out, "    {line}");
                }
            }
            let _ = writeln!(out, "  bound in the input dual:");
            bound_text(&mut out, &f.bound);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "Omega: {} subspaces", self.omega.len());
        let _ = writeln!(out, "Final bound: {} cones", self.final_bound.cones.len());
        bound_text(&mut out, &self.final_bound);
        let _ = writeln!(
            out,
            "Line test: {} ordered cone pairs separated",
            self.tameness.pairs.len()
        );
        for a in &self.tameness.central_actions {
            let _ = writeln!(
                out,
                "Central action {}: {:?}",
                a.generator,
                a.matrix.to_rows()
            );
        }
        let _ = writeln!(
            out,
            "Fitting: trace {}, det {}, discriminant {}, resultants for n = 1..{} all nonzero: {}",
            self.fitting.trace,
            self.fitting.determinant,
            self.fitting.discriminant,
            self.fitting.resultants.len(),
            self.fitting.holds()
        );
        out
    }
}
