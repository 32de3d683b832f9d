use sha2::{Digest, Sha256};

use super::problem::{ProblemSpec, SCHEMA_VERSION};
use super::report::{FactorReport, FiniteFactorItem, HeisenbergStep, OmegaEntry, SynthesisReport};
use super::PipelineError;
use crate::delta_invariants::{
    contains_line, heisenberg_delta_bound, induced_transfer, pullback, tameness_certificate, union,
    DeltaBound,
};
use crate::exact_linalg::{IntMatrix, RatMatrix, Subspace};
use crate::heisenberg_modules::{
    build_module, central_matrix, check_relators_in_model, fitting_certificate, presentation_of_gk,
    verify_annihilators, verify_group_relations, HeisenbergModule, Letter, ModuleElem,
};
use crate::nilpotent_groups::{
    commutation_form_rho, finite_index_symplectic_subgroup, Factor, FactorDecomposition,
};
use crate::symplectic::{
    associated_subspaces, complete_symplectic_basis, lagrangian_avoiding,
    simultaneous_complement_basis,
};

/// Cyclic factors in input order, then the Heisenberg factors by ascending
/// rank with ties kept in input order.
pub fn processing_order(d: &FactorDecomposition) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.factors.len()).collect();
    order.sort_by_key(|&i| d.factors[i].group.rank());
    order
}

pub(crate) fn tag(index: usize) -> String {
    format!("Q{}", index + 1)
}

/// `Ω̂ = {(π*)^{-1}(W ∩ im π*)}` with zero members dropped and repeats merged.
pub fn omega_hat(omega: &[Subspace], pi_star: &RatMatrix) -> Result<Vec<Subspace>, PipelineError> {
    let dim = pi_star.ncols();
    let image = Subspace::full(dim).image(pi_star)?;
    let mut out: Vec<Subspace> = Vec::new();
    for w in omega {
        let meet = w.intersect(&image)?;
        if meet.is_zero() {
            continue;
        }
        let pre = meet
            .basis_rat()
            .iter()
            .map(|v| pi_star.solve_unique(v))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                PipelineError::certificate("omega-hat", "vector of W ∩ im π* has no preimage")
            })?;
        let s = Subspace::from_spanning(dim, &pre)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// SHA-256 of the action of every group generator on `a_1, a_2`.
pub fn module_digest(module: &HeisenbergModule) -> String {
    let k = module.rank();
    let mut text = format!(
        "rank {k}\ninvariants {:?}\nM {:?}\n",
        module.group().invariants(),
        central_matrix().to_rows()
    );
    let letters = (0..k)
        .map(Letter::X)
        .chain((0..k).map(Letter::Y))
        .chain(std::iter::once(Letter::Z));
    for l in letters {
        for idx in 0..2 {
            let img = module
                .act(&ModuleElem::basis(k, idx), l, false)
                .expect("generators act on the basis");
            text.push_str(&format!("a{} {} = {}\n", idx + 1, l, img));
        }
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

struct Step {
    heisenberg: HeisenbergStep,
    bound: DeltaBound,
}

fn heisenberg_step(
    factor: &Factor,
    index: usize,
    omega: &[OmegaEntry],
    degree: u32,
) -> Result<Step, PipelineError> {
    let h = &factor.group;
    let pi_star = factor.dual_embedding();
    let spaces: Vec<Subspace> = omega.iter().map(|e| e.subspace.clone()).collect();
    let hat = omega_hat(&spaces, &pi_star)?;
    let rho = commutation_form_rho(h)?;
    let l = lagrangian_avoiding(&rho.space, &hat)?;
    let base = complete_symplectic_basis(&rho.space, &l)?;
    let cb = simultaneous_complement_basis(&rho.space, &base, &hat)?;
    let sub = finite_index_symplectic_subgroup(h, &rho, &cb.basis)?;

    let module = build_module(&sub.group);
    let relations = verify_group_relations(&module, degree)?;
    let annihilators = verify_annihilators(&module)?;
    let presentation = presentation_of_gk(&sub.group);
    let relators_checked = check_relators_in_model(&module, &presentation)?;

    let t = tag(index);
    let bound_p = heisenberg_delta_bound(h.rank(), &t);
    let bound_h = induced_transfer(&bound_p, &sub.restriction())?;
    let assoc = associated_subspaces(&cb.basis);
    let spans = bound_h.spans();
    if spans.len() != assoc.subspaces.len() || spans.iter().any(|s| !assoc.subspaces.contains(s)) {
        return Err(PipelineError::certificate(
            "transfer",
            format!("{t}: transferred cones do not span the associated subspaces of C"),
        ));
    }
    let bound = pullback(&bound_h, &pi_star)?;
    Ok(Step {
        heisenberg: HeisenbergStep {
            omega_before: omega.len(),
            omega_hat: hat,
            lagrangian: l,
            base: base.vectors().to_vec(),
            p: cb.p,
            basis: cb.basis.vectors().to_vec(),
            j: sub.j.clone(),
            subgroup_invariants: sub.group.invariants().to_vec(),
            subgroup_generators: sub.generators.clone(),
            module_digest: module_digest(&module),
            relations,
            annihilators,
            presentation,
            relators_checked,
            bound_p,
            bound_h,
        },
        bound,
    })
}

/// Central generators of the Heisenberg factors, each acting by `M` on the
/// lattice spanned by `a_1, a_2`.
pub(crate) fn central_actions(report_factors: &[FactorReport]) -> Vec<(String, IntMatrix)> {
    report_factors
        .iter()
        .filter(|f| f.heisenberg.is_some())
        .map(|f| (format!("{}.z", f.tag), central_matrix()))
        .collect()
}

fn line_check(bound: &DeltaBound, stage: &str) -> Result<(), PipelineError> {
    match contains_line(bound) {
        Some(v) => Err(PipelineError::certificate(
            format!("no line after {stage}"),
            format!("{:?}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        )),
        None => Ok(()),
    }
}

pub fn run_pipeline(spec: &ProblemSpec) -> Result<SynthesisReport, PipelineError> {
    let decomposition = spec.decomposition()?;
    let n = decomposition.num_generators();
    let origin = DeltaBound::origin(n);
    let finite_factor = decomposition
        .finite_factor
        .as_ref()
        .map(|f| FiniteFactorItem {
            name: f.name.clone(),
            order: f.order,
            bound: origin.clone(),
        });

    let mut omega: Vec<OmegaEntry> = Vec::new();
    let mut current = origin.clone();
    let mut factors = Vec::new();
    for index in processing_order(&decomposition) {
        let f = &decomposition.factors[index];
        let t = tag(index);
        let (bound, heisenberg) = if f.group.is_cyclic() {
            (origin.clone(), None)
        } else {
            let step = heisenberg_step(f, index, &omega, spec.options.degree)?;
            (step.bound, Some(step.heisenberg))
        };
        current = union(&[current, bound.clone()])?;
        line_check(&current, &t)?;
        for s in bound.spans() {
            if !omega.iter().any(|e| e.subspace == s) {
                omega.push(OmegaEntry {
                    factor: t.clone(),
                    subspace: s,
                });
            }
        }
        factors.push(FactorReport {
            index,
            tag: t,
            rank: f.group.rank(),
            invariants: f.group.invariants().to_vec(),
            bound,
            heisenberg,
        });
    }

    let tameness = tameness_certificate(&current, central_actions(&factors))?;
    let fitting = fitting_certificate(spec.options.n_max);
    if !fitting.holds() {
        return Err(PipelineError::certificate(
            "fitting",
            "a resultant vanishes",
        ));
    }
    Ok(SynthesisReport {
        schema: SCHEMA_VERSION,
        options: spec.options.clone(),
        polycyclic: factors.iter().all(|f| f.heisenberg.is_none()),
        decomposition,
        finite_factor,
        factors,
        omega,
        final_bound: current,
        tameness,
        fitting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat_vec;

    fn spec(text: &str) -> ProblemSpec {
        ProblemSpec::from_json(text).unwrap()
    }

    #[test]
    fn heisenberg_run() {
        let r = run_pipeline(&spec(
            r#"{"schema": 1, "class_two": {"n": 2, "r": 1, "comm": [{"i": 1, "j": 2, "z": [1]}]}}"#,
        ))
        .unwrap();
        assert_eq!(r.factors.len(), 1);
        let h = r.factors[0].heisenberg.as_ref().unwrap();
        assert_eq!(h.p, 1);
        assert!(h.omega_hat.is_empty());
        assert_eq!(r.final_bound.cones.len(), 3);
        assert!(!r.polycyclic);
        assert_eq!(r.omega.len(), 3);
    }

    #[test]
    fn abelian_run_is_polycyclic() {
        let r = run_pipeline(&spec(r#"{"schema": 1, "class_two": {"n": 2, "r": 0}}"#)).unwrap();
        assert!(r.polycyclic);
        assert!(r.final_bound.is_origin());
        assert!(r.omega.is_empty());
        assert!(r.tameness.central_actions.is_empty());
    }

    #[test]
    fn overlap_run() {
        let r = run_pipeline(&spec(
            r#"{"schema": 1, "class_two": {"n": 3, "r": 2,
                "comm": [{"i": 1, "j": 2, "z": [1, 0]}, {"i": 1, "j": 3, "z": [0, 1]}]}}"#,
        ))
        .unwrap();
        let hs: Vec<&HeisenbergStep> = r
            .factors
            .iter()
            .filter_map(|f| f.heisenberg.as_ref())
            .collect();
        assert_eq!(hs.len(), 2);
        assert!(hs[0].omega_hat.is_empty());
        assert_eq!(hs[1].omega_hat.len(), 1);
        assert_eq!(hs[1].omega_hat[0].dim(), 1);
        assert_eq!(r.final_bound.cones.len(), 6);
        assert_eq!(contains_line(&r.final_bound), None);
    }

    #[test]
    fn omega_hat_drops_trivial_meets() {
        let pi = RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]);
        let w1 = Subspace::from_spanning(3, &[rat_vec(&[0, 0, 1])]).unwrap();
        let w2 = Subspace::from_spanning(3, &[rat_vec(&[1, 0, 1]), rat_vec(&[0, 0, 1])]).unwrap();
        let hat = omega_hat(&[w1, w2], &pi).unwrap();
        assert_eq!(
            hat,
            vec![Subspace::from_spanning(2, &[rat_vec(&[1, 0])]).unwrap()]
        );
    }
}
