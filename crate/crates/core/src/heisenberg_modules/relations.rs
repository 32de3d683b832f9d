use serde::{Deserialize, Serialize};

use super::laurent::Laurent;
use super::module::{GroupWord, HeisenbergModule, Letter, ModuleElem};
use super::ModuleError;

pub const DEFAULT_DEGREE: u32 = 3;

/// Operator identities checked for one relation family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: String,
    pub identities: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCertificate {
    pub rank: usize,
    pub degree: u32,
    pub test_elements: usize,
    pub families: Vec<FamilyCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorCertificate {
    pub rank: usize,
    /// `a · (1 + x_i - y_i)` for each generator `a` and index `i`, all zero.
    pub checked: Vec<String>,
}

/// Exponent vectors in `Z^k` with `Σ|e_i| ≤ degree`, in lexicographic order.
pub fn monomials(k: usize, degree: u32) -> Vec<Vec<i64>> {
    fn rec(k: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for e in -budget..=budget {
            prefix.push(e);
            rec(k, budget - e.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, degree as i64, &mut Vec::new(), &mut out);
    out
}

/// `{a_1, a_2} × {x^e : Σ|e_i| ≤ d}`.
pub fn test_elements(module: &HeisenbergModule, degree: u32) -> Vec<ModuleElem> {
    let k = module.rank();
    let mut out = Vec::new();
    for idx in 0..2 {
        for e in monomials(k, degree) {
            let mut v = ModuleElem::zero(k);
            v.p[idx] = Laurent::monomial(k, e, 1.into());
            out.push(v);
        }
    }
    out
}

/// The defining relations of `H` as pairs of words `u = v`.
fn relation_families(module: &HeisenbergModule) -> Vec<(String, Vec<(GroupWord, GroupWord)>)> {
    let k = module.rank();
    let m = module.group().invariants();
    let w = |ls: &[(Letter, i64)]| ls.to_vec();
    let (x, y, z) = (Letter::X, Letter::Y, Letter::Z);
    let pairs = |f: &dyn Fn(usize, usize) -> Option<(GroupWord, GroupWord)>| {
        let mut v = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if let Some(p) = f(i, j) {
                    v.push(p);
                }
            }
        }
        v
    };
    vec![
        (
            "x_i x_j = x_j x_i".into(),
            pairs(&|i, j| {
                (i < j).then(|| (w(&[(x(i), 1), (x(j), 1)]), w(&[(x(j), 1), (x(i), 1)])))
            }),
        ),
        (
            "x_i z = z x_i".into(),
            (0..k)
                .map(|i| (w(&[(x(i), 1), (z, 1)]), w(&[(z, 1), (x(i), 1)])))
                .collect(),
        ),
        (
            "y_j z = z y_j".into(),
            (0..k)
                .map(|j| (w(&[(y(j), 1), (z, 1)]), w(&[(z, 1), (y(j), 1)])))
                .collect(),
        ),
        (
            "y_j y_l = y_l y_j".into(),
            pairs(&|j, l| {
                (j < l).then(|| (w(&[(y(j), 1), (y(l), 1)]), w(&[(y(l), 1), (y(j), 1)])))
            }),
        ),
        (
            "x_i y_j = y_j x_i".into(),
            pairs(&|i, j| {
                (i != j).then(|| (w(&[(x(i), 1), (y(j), 1)]), w(&[(y(j), 1), (x(i), 1)])))
            }),
        ),
        (
            "x_i y_i = y_i x_i z^m_i".into(),
            (0..k)
                .map(|i| {
                    let mi = i64::try_from(&m[i]).expect("invariant fits in i64");
                    (
                        w(&[(x(i), 1), (y(i), 1)]),
                        w(&[(y(i), 1), (x(i), 1), (z, mi)]),
                    )
                })
                .collect(),
        ),
        (
            "y_j y_j^-1 = 1".into(),
            (0..k)
                .map(|j| (w(&[(y(j), 1), (y(j), -1)]), vec![]))
                .collect(),
        ),
    ]
}

/// Checks every defining relation of `H` as an exact operator identity on
/// the test elements of degree at most `degree`.
pub fn verify_group_relations(
    module: &HeisenbergModule,
    degree: u32,
) -> Result<RelationCertificate, ModuleError> {
    let elems = test_elements(module, degree);
    let mut families = Vec::new();
    for (name, rels) in relation_families(module) {
        let mut evaluations = 0;
        for (lhs, rhs) in &rels {
            for v in &elems {
                let a = module.apply_word(v, lhs)?;
                let b = module.apply_word(v, rhs)?;
                evaluations += 1;
                if a != b {
                    return Err(ModuleError::RelationFails {
                        family: name.clone(),
                        element: v.to_string(),
                        lhs: a.to_string(),
                        rhs: b.to_string(),
                    });
                }
            }
        }
        families.push(FamilyCheck {
            family: name,
            identities: rels.len(),
            evaluations,
        });
    }
    Ok(RelationCertificate {
        rank: module.rank(),
        degree,
        test_elements: elems.len(),
        families,
    })
}

/// `a · (1 + x_i - y_i) = 0` for `a ∈ {a_1, a_2}` and every `i`.
pub fn verify_annihilators(
    module: &HeisenbergModule,
) -> Result<AnnihilatorCertificate, ModuleError> {
    let mut checked = Vec::new();
    for idx in 0..2 {
        let a = module.generator(idx);
        for i in 0..module.rank() {
            let terms = [
                (1, vec![]),
                (1, vec![(Letter::X(i), 1)]),
                (-1, vec![(Letter::Y(i), 1)]),
            ];
            let r = module.apply_ring(&a, &terms)?;
            let label = format!("a{} * (1 + x{} - y{})", idx + 1, i + 1, i + 1);
            if !r.is_zero() {
                return Err(ModuleError::NonzeroResidue(label, r.to_string()));
            }
            checked.push(label);
        }
    }
    Ok(AnnihilatorCertificate {
        rank: module.rank(),
        checked,
    })
}
