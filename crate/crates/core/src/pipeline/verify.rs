use super::problem::SCHEMA_VERSION;
use super::report::{FactorReport, HeisenbergStep, OmegaEntry, SynthesisReport};
use super::synth::{central_actions, module_digest, omega_hat, processing_order, tag};
use super::PipelineError;
use crate::delta_invariants::{
    contains_line, heisenberg_delta_bound, induced_transfer, pullback, union, DeltaBound,
    DeltaError,
};
use crate::heisenberg_modules::{
    build_module, check_relators_in_model, fitting_certificate, presentation_of_gk,
    verify_annihilators, verify_group_relations,
};
use crate::nilpotent_groups::{commutation_form_rho, finite_index_symplectic_subgroup, Factor};
use crate::symplectic::{associated_subspaces, scaled_basis, SymplecticBasis};

fn fail(check: &str, witness: impl Into<String>) -> PipelineError {
    PipelineError::certificate(check, witness)
}

fn ensure(ok: bool, check: &str, witness: impl FnOnce() -> String) -> Result<(), PipelineError> {
    if ok {
        Ok(())
    } else {
        Err(fail(check, witness()))
    }
}

fn cone_text(b: &DeltaBound, i: usize) -> String {
    b.cones.get(i).map_or("nothing".into(), |c| {
        format!(
            "{:?}",
            c.generators()
                .iter()
                .map(|g| g.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        )
    })
}

/// Equality of a stored bound with its replayed value; the witness names the
/// first differing cone and any line the stored bound contains.
fn same_bound(check: &str, found: &DeltaBound, expected: &DeltaBound) -> Result<(), PipelineError> {
    if found == expected {
        return Ok(());
    }
    let n = found.cones.len().max(expected.cones.len());
    let i = (0..n)
        .find(|&i| found.cones.get(i) != expected.cones.get(i))
        .unwrap_or(0);
    let mut witness = format!(
        "cone {i}: stored {}, replayed {}",
        cone_text(found, i),
        cone_text(expected, i)
    );
    if found.ambient_dim != expected.ambient_dim {
        witness = format!(
            "ambient dimension {} != {}",
            found.ambient_dim, expected.ambient_dim
        );
    }
    if let Some(v) = contains_line(found) {
        witness.push_str(&format!(
            "; stored bound contains the line through {:?}",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        ));
    }
    Err(fail(check, witness))
}

fn replay_heisenberg(
    f: &FactorReport,
    factor: &Factor,
    h: &HeisenbergStep,
    omega: &[OmegaEntry],
    degree: u32,
    checks: &mut Vec<String>,
) -> Result<DeltaBound, PipelineError> {
    let t = &f.tag;
    let group = &factor.group;
    let pi_star = factor.dual_embedding();
    ensure(h.omega_before == omega.len(), "omega bookkeeping", || {
        format!(
            "{t}: omega_before {} but {} members accumulated",
            h.omega_before,
            omega.len()
        )
    })?;
    let spaces: Vec<_> = omega.iter().map(|e| e.subspace.clone()).collect();
    let hat = omega_hat(&spaces, &pi_star)?;
    ensure(hat == h.omega_hat, "omega-hat", || {
        format!("{t}: stored {:?}, replayed {:?}", h.omega_hat, hat)
    })?;

    let rho = commutation_form_rho(group)?;
    let base = SymplecticBasis::new(&rho.space, h.base.clone())
        .map_err(|e| fail("symplectic basis", format!("{t}: base: {e}")))?;
    ensure(base.lagrangian() == h.lagrangian, "lagrangian", || {
        format!("{t}: span(e_i) differs from the stored Lagrangian")
    })?;
    for (w, s) in hat.iter().enumerate() {
        ensure(
            h.lagrangian.meets_trivially(s)?,
            "lagrangian avoids omega-hat",
            || format!("{t}: Lagrangian meets omega-hat member {w}"),
        )?;
    }
    let c = scaled_basis(&rho.space, &base, h.p)
        .map_err(|e| fail("complement basis", format!("{t}: {e}")))?;
    ensure(
        c.vectors() == h.basis.as_slice(),
        "complement basis",
        || format!("{t}: C is not {{e_i, p e_i + f_i}} for p = {}", h.p),
    )?;
    let assoc = associated_subspaces(&c);
    for (a, s) in assoc.subspaces.iter().enumerate() {
        for (w, m) in hat.iter().enumerate() {
            ensure(
                s.meets_trivially(m)?,
                "associated subspaces avoid omega-hat",
                || {
                    format!(
                        "{t}: associated subspace {:?} meets omega-hat member {w}",
                        assoc.choices[a]
                    )
                },
            )?;
        }
    }
    checks.push(format!(
        "{t}: basis C avoids {} omega-hat members",
        hat.len()
    ));

    let sub = finite_index_symplectic_subgroup(group, &rho, &c)?;
    ensure(
        sub.j == h.j
            && sub.group.invariants() == h.subgroup_invariants.as_slice()
            && sub.generators == h.subgroup_generators,
        "subgroup",
        || format!("{t}: stored j = {}, replayed j = {}", h.j, sub.j),
    )?;

    let module = build_module(&sub.group);
    let digest = module_digest(&module);
    ensure(digest == h.module_digest, "module digest", || {
        format!("{t}: stored {}, replayed {digest}", h.module_digest)
    })?;
    let relations = verify_group_relations(&module, degree)?;
    ensure(relations == h.relations, "group relations", || {
        format!("{t}: relation certificate differs")
    })?;
    let annihilators = verify_annihilators(&module)?;
    ensure(annihilators == h.annihilators, "annihilators", || {
        format!("{t}: annihilator certificate differs")
    })?;
    let count = check_relators_in_model(&module, &h.presentation)
        .map_err(|e| fail("relators", format!("{t}: {e}")))?;
    let expected = presentation_of_gk(&sub.group);
    if h.presentation != expected {
        let i = (0..h.presentation.relators.len().max(expected.relators.len()))
            .find(|&i| h.presentation.relators.get(i) != expected.relators.get(i));
        let witness = match i {
            Some(i) => format!(
                "{t}: relator {i} is {}, expected {}",
                h.presentation
                    .relators
                    .get(i)
                    .map_or("missing".into(), |r| r.word.to_string()),
                expected
                    .relators
                    .get(i)
                    .map_or("nothing".into(), |r| r.word.to_string())
            ),
            None => format!("{t}: generators or schedule differ"),
        };
        return Err(fail("presentation", witness));
    }
    ensure(count == h.relators_checked, "relators", || {
        format!("{t}: {count} relators, {} recorded", h.relators_checked)
    })?;
    checks.push(format!(
        "{t}: module relations, annihilators and {count} relators hold"
    ));

    same_bound(
        "subgroup bound",
        &h.bound_p,
        &heisenberg_delta_bound(group.rank(), t),
    )?;
    let bound_h = induced_transfer(&h.bound_p, &sub.restriction())?;
    same_bound("transferred bound", &h.bound_h, &bound_h)?;
    let spans = bound_h.spans();
    ensure(
        spans.len() == assoc.subspaces.len() && spans.iter().all(|s| assoc.subspaces.contains(s)),
        "transfer",
        || format!("{t}: transferred cones do not span the associated subspaces"),
    )?;
    let bound = pullback(&bound_h, &pi_star)?;
    same_bound("pulled-back bound", &f.bound, &bound)?;
    Ok(bound)
}

/// Replays every certificate in the report without repeating any search.
/// Returns a description of each check passed.
pub fn verify_report(r: &SynthesisReport) -> Result<Vec<String>, PipelineError> {
    let mut checks = Vec::new();
    ensure(r.schema == SCHEMA_VERSION, "schema", || {
        format!("schema {}", r.schema)
    })?;

    // The headline certificate first, so a tampered final bound reports its line.
    r.tameness.verify(&r.final_bound).map_err(|e| match e {
        DeltaError::LineFound { witness } => fail(
            "no line",
            format!("final bound contains the line through {witness:?}"),
        ),
        e => fail("tameness", e.to_string()),
    })?;
    checks.push(format!(
        "final bound: {} ordered cone pairs separated",
        r.tameness.pairs.len()
    ));

    let d = &r.decomposition;
    d.check()
        .map_err(|e| fail("decomposition", e.to_string()))?;
    checks.push(format!("decomposition: {} factors", d.factors.len()));
    let n = d.num_generators();
    let origin = DeltaBound::origin(n);
    match (&r.finite_factor, &d.finite_factor) {
        (None, None) => {}
        (Some(item), Some(f))
            if item.name == f.name && item.order == f.order && item.bound == origin => {}
        _ => {
            return Err(fail(
                "finite factor",
                "line item does not match the decomposition",
            ))
        }
    }

    let order: Vec<usize> = r.factors.iter().map(|f| f.index).collect();
    let expected = processing_order(d);
    ensure(order == expected, "factor order", || {
        format!("stored {order:?}, expected {expected:?}")
    })?;

    let mut omega: Vec<OmegaEntry> = Vec::new();
    let mut current = origin.clone();
    for f in &r.factors {
        let factor = &d.factors[f.index];
        ensure(
            f.tag == tag(f.index)
                && f.rank == factor.group.rank()
                && f.invariants == factor.group.invariants(),
            "factor data",
            || {
                format!(
                    "{}: rank or invariants differ from the decomposition",
                    f.tag
                )
            },
        )?;
        let bound = match (&f.heisenberg, factor.group.is_cyclic()) {
            (None, true) => {
                same_bound("cyclic bound", &f.bound, &origin)?;
                origin.clone()
            }
            (Some(h), false) => {
                replay_heisenberg(f, factor, h, &omega, r.options.degree, &mut checks)?
            }
            _ => {
                return Err(fail(
                    "factor data",
                    format!("{}: Heisenberg data does not match the rank", f.tag),
                ))
            }
        };
        current = union(&[current, bound.clone()])?;
        if let Some(v) = contains_line(&current) {
            return Err(fail(
                "no line",
                format!(
                    "after {}: line through {:?}",
                    f.tag,
                    v.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                ),
            ));
        }
        for s in bound.spans() {
            if !omega.iter().any(|e| e.subspace == s) {
                omega.push(OmegaEntry {
                    factor: f.tag.clone(),
                    subspace: s,
                });
            }
        }
    }
    ensure(omega == r.omega, "omega", || {
        format!("{} members replayed, {} stored", omega.len(), r.omega.len())
    })?;
    same_bound("final bound", &r.final_bound, &current)?;

    let actions: Vec<_> = r
        .tameness
        .central_actions
        .iter()
        .map(|a| (a.generator.clone(), a.matrix.clone()))
        .collect();
    ensure(
        actions == central_actions(&r.factors),
        "central actions",
        || "stored central actions differ from the Heisenberg factors".into(),
    )?;
    checks.push(format!("{} central actions unimodular", actions.len()));

    let fitting = fitting_certificate(r.options.n_max);
    ensure(fitting == r.fitting && fitting.holds(), "fitting", || {
        let bad = r
            .fitting
            .resultants
            .iter()
            .zip(&fitting.resultants)
            .position(|(a, b)| a != b);
        match bad {
            Some(i) => format!(
                "resultant at n = {}: stored {}, replayed {}",
                i + 1,
                r.fitting.resultants[i],
                fitting.resultants[i]
            ),
            None => "stored Fitting data differs".into(),
        }
    })?;
    checks.push(format!(
        "fitting: resultants nonzero for n = 1..{}",
        fitting.resultants.len()
    ));
    Ok(checks)
}
