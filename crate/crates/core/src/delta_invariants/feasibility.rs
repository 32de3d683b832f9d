//! Exact feasibility of `A x = 0, Σ x = 1, x ≥ 0` over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_linalg::{dot_rat, primitive_integer, to_rat_vec, RatVector};

/// Largest intermediate system Fourier–Motzkin may build before giving up.
pub const FM_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FourierMotzkin,
    Simplex,
}

/// Outcome of a feasibility query; `solution` satisfies the system exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub solution: Option<RatVector>,
    pub method: Method,
}

/// `Σ_j c_j y_j + c_0 ≥ 0`, stored as `(c, c_0)`.
#[derive(Clone, Debug)]
struct Ineq {
    c: RatVector,
    c0: BigRational,
}

fn check(columns: &[RatVector], x: &[BigRational]) -> bool {
    if x.iter().any(|v| v.is_negative()) || x.iter().sum::<BigRational>() != BigRational::one() {
        return false;
    }
    let d = columns.first().map_or(0, |c| c.len());
    (0..d).all(|r| {
        columns
            .iter()
            .zip(x)
            .map(|(c, v)| &c[r] * v)
            .sum::<BigRational>()
            .is_zero()
    })
}

/// Equality rows `A x = 0` and `Σ x = 1` as `[A | 0; 1ᵀ | 1]`.
fn equality_rows(columns: &[RatVector]) -> Vec<RatVector> {
    let m = columns.len();
    let d = columns.first().map_or(0, |c| c.len());
    let mut rows: Vec<RatVector> = (0..d)
        .map(|r| {
            let mut row: RatVector = columns.iter().map(|c| c[r].clone()).collect();
            row.push(BigRational::zero());
            row
        })
        .collect();
    let mut ones = vec![BigRational::one(); m];
    ones.push(BigRational::one());
    rows.push(ones);
    rows
}

/// Fourier–Motzkin: `None` when the intermediate systems exceed [`FM_CAP`].
pub fn fourier_motzkin(columns: &[RatVector]) -> Option<Option<RatVector>> {
    let m = columns.len();
    if m == 0 {
        return Some(None);
    }
    // Solve the equalities for pivot variables in terms of the free ones.
    let mut rows = equality_rows(columns);
    let pivots = crate::exact_linalg::rref_in_place(&mut rows, m + 1);
    if pivots.contains(&m) {
        return Some(None);
    }
    let free: Vec<usize> = (0..m).filter(|j| !pivots.contains(j)).collect();
    // x_p = rhs - Σ_f row[f] y_f for each pivot p; x_f = y_f.
    let expr = |j: usize| -> Ineq {
        if let Some(pos) = pivots.iter().position(|&p| p == j) {
            let row = &rows[pos];
            Ineq {
                c: free.iter().map(|&f| -row[f].clone()).collect(),
                c0: row[m].clone(),
            }
        } else {
            let mut c = vec![BigRational::zero(); free.len()];
            c[free.iter().position(|&f| f == j).expect("free variable")] = BigRational::one();
            Ineq {
                c,
                c0: BigRational::zero(),
            }
        }
    };
    let mut system: Vec<Ineq> = (0..m).map(expr).collect();
    let mut stages = Vec::with_capacity(free.len());
    for t in (0..free.len()).rev() {
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for q in &system {
            if q.c[t].is_positive() {
                pos.push(q.clone());
            } else if q.c[t].is_negative() {
                neg.push(q.clone());
            } else {
                next.push(q.clone());
            }
        }
        if next.len() + pos.len() * neg.len() > FM_CAP {
            return None;
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (-n.c[t].clone(), p.c[t].clone());
                next.push(Ineq {
                    c: p.c.iter().zip(&n.c).map(|(x, y)| x * &a + y * &b).collect(),
                    c0: &p.c0 * &a + &n.c0 * &b,
                });
            }
        }
        stages.push(system);
        system = next;
    }
    if system.iter().any(|q| q.c0.is_negative()) {
        return Some(None);
    }
    // Back-substitute from the first free variable eliminated last.
    let mut y = vec![BigRational::zero(); free.len()];
    for (t, stage) in (0..free.len()).zip(stages.iter().rev()) {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for q in stage {
            let rest: BigRational =
                q.c0.clone() + (0..t).map(|s| &q.c[s] * &y[s]).sum::<BigRational>();
            if q.c[t].is_zero() {
                continue;
            }
            let bound = -rest / &q.c[t];
            if q.c[t].is_positive() {
                lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
            }
        }
        y[t] = lower.or(upper).unwrap_or_else(BigRational::zero);
    }
    let x: RatVector = (0..m)
        .map(|j| {
            let e = expr(j);
            e.c0 + e.c.iter().zip(&y).map(|(a, b)| a * b).sum::<BigRational>()
        })
        .collect();
    debug_assert!(check(columns, &x));
    Some(Some(x))
}

/// Phase-one simplex with Bland's rule on `[A; 1ᵀ] x = [0; 1]`. On
/// infeasibility returns the Farkas vector `y` with `yᵀ[A; 1ᵀ] ≥ 0` and
/// `yᵀ[0; 1] < 0`, read off the optimal reduced costs.
fn phase_one(columns: &[RatVector]) -> Result<RatVector, RatVector> {
    let m = columns.len();
    let rows = equality_rows(columns);
    let nr = rows.len();
    // Tableau columns: m originals, nr artificials, rhs.
    let width = m + nr + 1;
    let mut tab: Vec<RatVector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r[..m].to_vec();
            row.extend((0..nr).map(|a| {
                if a == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row.push(r[m].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..m + nr).collect();
    // Objective: minimize Σ artificials, i.e. reduced costs -Σ rows on originals.
    let mut obj: RatVector = (0..width)
        .map(|j| {
            if (m..m + nr).contains(&j) {
                BigRational::zero()
            } else {
                -tab.iter().map(|r| r[j].clone()).sum::<BigRational>()
            }
        })
        .collect();
    while let Some(enter) = (0..m + nr).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (li, _) = leave.expect("phase-one objective is bounded below");
        let piv = tab[li][enter].clone();
        for v in tab[li].iter_mut() {
            *v /= &piv;
        }
        let prow = tab[li].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != li && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
        basis[li] = enter;
    }
    if !obj[width - 1].is_zero() {
        // Reduced cost of artificial i is 1 - y_i for the phase-one dual y.
        return Err((0..nr).map(|i| &obj[m + i] - BigRational::one()).collect());
    }
    let mut x = vec![BigRational::zero(); m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            x[b] = tab[i][width - 1].clone();
        }
    }
    debug_assert!(check(columns, &x));
    Ok(x)
}

pub fn simplex(columns: &[RatVector]) -> Option<RatVector> {
    if columns.is_empty() {
        return None;
    }
    phase_one(columns).ok()
}

/// Primitive integer `w` with `w · col > 0` for every column, when the
/// columns admit no nonnegative dependency.
pub fn separating_functional(columns: &[RatVector]) -> Option<Vec<BigInt>> {
    let d = columns.first()?.len();
    let y = phase_one(columns).err()?;
    let w = primitive_integer(&y[..d]);
    columns
        .iter()
        .all(|c| dot_rat(&to_rat_vec(&w), c).is_positive())
        .then_some(w)
}

/// Nonnegative `x` with `Σ x = 1` and `Σ x_j col_j = 0`, trying
/// Fourier–Motzkin first.
pub fn nonnegative_dependency(columns: &[RatVector]) -> Feasibility {
    match fourier_motzkin(columns) {
        Some(solution) => Feasibility {
            solution,
            method: Method::FourierMotzkin,
        },
        None => Feasibility {
            solution: simplex(columns),
            method: Method::Simplex,
        },
    }
}
