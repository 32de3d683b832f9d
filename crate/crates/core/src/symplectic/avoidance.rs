//! Lagrangian subspaces avoiding a finite family of subspaces, and symplectic
//! bases whose associated subspaces all meet the family trivially.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{SymplecticBasis, SymplecticError, SymplecticSpace};
use crate::exact_linalg::{
    primitive_integer, rank_int, to_rat_vec, RatMatrix, RatVector, Subspace,
};

/// Upper bound on the scale search in [`simultaneous_complement_basis`].
pub const MAX_SCALE: u64 = 1 << 16;

/// Integer points of `Z^n \ {0}` by increasing max-norm height; within a
/// height, colexicographic (last coordinate most significant) with the
/// coordinate values ordered `0, 1, -1, 2, -2, ...`.
#[derive(Clone, Debug)]
pub struct LatticeWalk {
    n: usize,
    height: i64,
    counter: Vec<usize>,
    exhausted_height: bool,
}

impl LatticeWalk {
    pub fn new(n: usize) -> Self {
        LatticeWalk {
            n,
            height: 1,
            counter: vec![0; n],
            exhausted_height: false,
        }
    }

    fn value(idx: usize) -> i64 {
        let i = idx as i64;
        if i % 2 == 1 {
            (i + 1) / 2
        } else {
            -(i / 2)
        }
    }

    /// Advances the mixed-radix counter; false once it wraps.
    fn step(&mut self) -> bool {
        let radix = (2 * self.height + 1) as usize;
        for c in self.counter.iter_mut() {
            *c += 1;
            if *c < radix {
                return true;
            }
            *c = 0;
        }
        false
    }
}

impl Iterator for LatticeWalk {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.n == 0 {
            return None;
        }
        loop {
            if self.exhausted_height {
                self.height += 1;
                self.counter = vec![0; self.n];
                self.exhausted_height = false;
            }
            if !self.step() {
                self.exhausted_height = true;
                continue;
            }
            let point: Vec<i64> = self.counter.iter().map(|&c| Self::value(c)).collect();
            if point.iter().map(|x| x.abs()).max() == Some(self.height) {
                return Some(point);
            }
        }
    }
}

/// First walk point (as coefficients on `span_basis`) whose vector lies in
/// none of `avoid`.
pub(crate) fn avoid_in_span(
    span_basis: &[Vec<BigInt>],
    dim: usize,
    avoid: &[Subspace],
) -> Result<Vec<BigInt>, SymplecticError> {
    let span = Subspace::from_int_spanning(dim, span_basis)?;
    for w in avoid {
        if span.is_subspace_of(w)? {
            return Err(SymplecticError::CannotAvoid);
        }
    }
    for coeffs in LatticeWalk::new(span_basis.len()) {
        let mut v = vec![BigInt::zero(); dim];
        for (c, b) in coeffs.iter().zip(span_basis) {
            if *c == 0 {
                continue;
            }
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += bi * BigInt::from(*c);
            }
        }
        let mut outside = true;
        for w in avoid {
            if w.contains_int(&v)? {
                outside = false;
                break;
            }
        }
        if outside {
            return Ok(v);
        }
    }
    Err(SymplecticError::CannotAvoid)
}

/// Deterministic integer vector of `Q^n` outside every listed proper subspace.
pub fn avoid_vector(
    ambient_dim: usize,
    proper_subspaces: &[Subspace],
) -> Result<RatVector, SymplecticError> {
    for w in proper_subspaces {
        if w.ambient_dim() != ambient_dim {
            return Err(crate::exact_linalg::LinalgError::DimensionMismatch {
                expected: ambient_dim,
                found: w.ambient_dim(),
            }
            .into());
        }
        if w.is_full() {
            return Err(SymplecticError::CannotAvoid);
        }
    }
    let basis = Subspace::full(ambient_dim).basis().to_vec();
    avoid_in_span(&basis, ambient_dim, proper_subspaces).map(|v| to_rat_vec(&v))
}

fn check_family(space: &SymplecticSpace, omega: &[Subspace]) -> Result<(), SymplecticError> {
    let k = space.rank();
    for w in omega {
        if w.ambient_dim() != space.dim() {
            return Err(crate::exact_linalg::LinalgError::DimensionMismatch {
                expected: space.dim(),
                found: w.ambient_dim(),
            }
            .into());
        }
        if w.dim() > k {
            return Err(SymplecticError::DimensionTooLarge {
                dim: w.dim(),
                bound: k,
            });
        }
    }
    Ok(())
}

/// Lagrangian `L` with `L ∩ W = {0}` for every `W ∈ Ω`, built one isotropic
/// vector at a time: each new vector lies in the current `I^⊥` and avoids
/// every reduced `Ŵ` and `Ŵ^⊥` in the quotient `I^⊥ / I`.
pub fn lagrangian_avoiding(
    space: &SymplecticSpace,
    omega: &[Subspace],
) -> Result<Subspace, SymplecticError> {
    check_family(space, omega)?;
    let n = space.dim();
    let mut iso = Subspace::zero(n);
    // Lifted reductions Ŵ ⊇ iso; members equal to iso are no longer constraints.
    let mut family: Vec<Subspace> = omega.iter().filter(|w| !w.is_zero()).cloned().collect();
    for _ in 0..space.rank() {
        let perp = space.annihilator(&iso)?;
        let mut avoid = vec![iso.clone()];
        for w in &family {
            avoid.push(w.clone());
            avoid.push(space.annihilator(w)?);
        }
        let u = avoid_in_span(perp.basis(), n, &avoid)?;
        iso = iso.sum(&Subspace::from_int_spanning(n, &[u])?)?;
        let new_perp = space.annihilator(&iso)?;
        let mut next = Vec::with_capacity(family.len());
        for w in &family {
            let reduced = w.intersect(&new_perp)?.sum(&iso)?;
            if reduced != iso {
                next.push(reduced);
            }
        }
        family = next;
    }
    debug_assert!(space.is_lagrangian(&iso));
    for w in omega {
        if !iso.meets_trivially(w)? {
            return Err(SymplecticError::Internal(
                "Lagrangian meets a family member".into(),
            ));
        }
    }
    Ok(iso)
}

/// Extends the canonical basis `e_i` of a Lagrangian `L` to a symplectic
/// basis, taking the `f_i` in a Lagrangian complement of `L`.
pub fn complete_symplectic_basis(
    space: &SymplecticSpace,
    l: &Subspace,
) -> Result<SymplecticBasis, SymplecticError> {
    if !space.is_lagrangian(l) {
        return Err(SymplecticError::NotLagrangian);
    }
    let k = space.rank();
    let m = lagrangian_avoiding(space, std::slice::from_ref(l))?;
    let es = l.basis_rat();
    let ms = m.basis_rat();
    let pairing = RatMatrix::from_rows(
        es.iter()
            .map(|e| ms.iter().map(|x| space.form(e, x)).collect())
            .collect(),
        Some(k),
    )?;
    let inv = pairing.inverse().ok_or(SymplecticError::Degenerate)?;
    let mut vectors = Vec::with_capacity(2 * k);
    for (j, e) in es.into_iter().enumerate() {
        let mut f = vec![BigRational::zero(); space.dim()];
        for (l_idx, mv) in ms.iter().enumerate() {
            let c = &inv[(l_idx, j)];
            if c.is_zero() {
                continue;
            }
            for (fi, mi) in f.iter_mut().zip(mv) {
                *fi += c * mi;
            }
        }
        vectors.push(e);
        vectors.push(f);
    }
    SymplecticBasis::new(space, vectors)
}

/// `K_μ = span((1-μ_i) e_i + μ_i f_i)`.
pub fn k_mu(basis: &SymplecticBasis, mu: &[BigRational]) -> Result<Subspace, SymplecticError> {
    let k = basis.rank();
    if mu.len() != k {
        return Err(SymplecticError::Linalg(
            crate::exact_linalg::LinalgError::DimensionMismatch {
                expected: k,
                found: mu.len(),
            },
        ));
    }
    let one = BigRational::one();
    if mu.iter().any(|m| m.is_negative() || *m > one) {
        return Err(SymplecticError::MuOutOfRange);
    }
    let vectors: Vec<RatVector> = (0..k)
        .map(|i| {
            basis
                .e(i)
                .iter()
                .zip(basis.f(i))
                .map(|(e, f)| (&one - &mu[i]) * e + &mu[i] * f)
                .collect()
        })
        .collect();
    Ok(Subspace::from_spanning(2 * k, &vectors)?)
}

/// All `3^k` choice tuples in `{0, 1, 2}^k`, first index most significant.
pub fn ternary_choices(k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..3u8).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// The `3^k` subspaces spanned by one of `{e_i, f_i, e_i + f_i}` per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedFamily {
    pub base: SymplecticBasis,
    pub choices: Vec<Vec<u8>>,
    pub subspaces: Vec<Subspace>,
}

fn choice_vector(basis: &SymplecticBasis, i: usize, choice: u8) -> RatVector {
    match choice {
        0 => basis.e(i).clone(),
        1 => basis.f(i).clone(),
        _ => basis
            .e(i)
            .iter()
            .zip(basis.f(i))
            .map(|(a, b)| a + b)
            .collect(),
    }
}

pub fn associated_subspaces(basis: &SymplecticBasis) -> AssociatedFamily {
    let k = basis.rank();
    let choices = ternary_choices(k);
    let subspaces = choices
        .iter()
        .map(|ch| {
            let vs: Vec<RatVector> = ch
                .iter()
                .enumerate()
                .map(|(i, &c)| choice_vector(basis, i, c))
                .collect();
            Subspace::from_spanning(2 * k, &vs).expect("basis vectors share ambient")
        })
        .collect();
    AssociatedFamily {
        base: basis.clone(),
        choices,
        subspaces,
    }
}

/// Symplectic basis `{e_i, p e_i + f_i}` together with the scale `p` found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementBasis {
    pub basis: SymplecticBasis,
    pub p: u64,
}

/// `{e_i, p·e_i + f_i}` for the given scale.
pub fn scaled_basis(
    space: &SymplecticSpace,
    base: &SymplecticBasis,
    p: u64,
) -> Result<SymplecticBasis, SymplecticError> {
    let pq = BigRational::from_integer(BigInt::from(p));
    let pairs = (0..base.rank())
        .map(|i| {
            let f_hat = base
                .e(i)
                .iter()
                .zip(base.f(i))
                .map(|(e, f)| &pq * e + f)
                .collect();
            (base.e(i).clone(), f_hat)
        })
        .collect();
    SymplecticBasis::from_pairs(space, pairs)
}

/// Smallest `p ≥ 1` such that every associated subspace of `{e_i, p e_i + f_i}`
/// meets each member of `Ω` trivially; `span(e_i)` must already avoid `Ω`.
pub fn simultaneous_complement_basis(
    space: &SymplecticSpace,
    base: &SymplecticBasis,
    omega: &[Subspace],
) -> Result<ComplementBasis, SymplecticError> {
    check_family(space, omega)?;
    if base.vectors().len() != space.dim()
        || space.gram_of(base.vectors()) != super::standard_gram(space.rank())
    {
        return Err(SymplecticError::NotSymplecticBasis);
    }
    let l = base.lagrangian();
    for w in omega {
        if !l.meets_trivially(w)? {
            return Err(SymplecticError::LagrangianMeetsFamily);
        }
    }
    let k = base.rank();
    let omega: Vec<&Subspace> = omega.iter().filter(|w| !w.is_zero()).collect();
    let es: Vec<Vec<BigInt>> = (0..k).map(|i| primitive_integer(base.e(i))).collect();
    let choices = ternary_choices(k);
    for p in 1..=MAX_SCALE {
        // Associated vectors are e_i, p e_i + f_i and (p+1) e_i + f_i.
        let cand: Vec<[Vec<BigInt>; 3]> = (0..k)
            .map(|i| {
                let line = |s: u64| {
                    let s = BigRational::from_integer(BigInt::from(s));
                    let v: RatVector = base
                        .e(i)
                        .iter()
                        .zip(base.f(i))
                        .map(|(e, f)| &s * e + f)
                        .collect();
                    primitive_integer(&v)
                };
                [es[i].clone(), line(p), line(p + 1)]
            })
            .collect();
        let ok = choices.iter().all(|ch| {
            omega.iter().all(|w| {
                let mut rows: Vec<Vec<BigInt>> = ch
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| cand[i][c as usize].clone())
                    .collect();
                rows.extend(w.basis().iter().cloned());
                rank_int(&rows) == k + w.dim()
            })
        });
        if ok {
            return Ok(ComplementBasis {
                basis: scaled_basis(space, base, p)?,
                p,
            });
        }
    }
    Err(SymplecticError::NoScaleFound(MAX_SCALE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{rat_frac, rat_vec};

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        let v: Vec<RatVector> = vs.iter().map(|x| rat_vec(x)).collect();
        Subspace::from_spanning(n, &v).unwrap()
    }

    #[test]
    fn walk_order() {
        let first: Vec<Vec<i64>> = LatticeWalk::new(2).take(9).collect();
        assert_eq!(
            first,
            vec![
                vec![1, 0],
                vec![-1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![-1, 1],
                vec![0, -1],
                vec![1, -1],
                vec![-1, -1],
                vec![2, 0],
            ]
        );
    }

    #[test]
    fn avoid_vector_examples() {
        assert_eq!(
            avoid_vector(2, &[span(2, &[&[1, 0]])]).unwrap(),
            rat_vec(&[0, 1])
        );
        let three = [
            span(2, &[&[1, 0]]),
            span(2, &[&[0, 1]]),
            span(2, &[&[1, 1]]),
        ];
        let v = avoid_vector(2, &three).unwrap();
        assert_eq!(v, rat_vec(&[-1, 1]));
        for w in &three {
            assert!(!w.contains(&v).unwrap());
        }
        assert_eq!(avoid_vector(1, &[]).unwrap(), rat_vec(&[1]));
        assert!(matches!(
            avoid_vector(2, &[Subspace::full(2)]),
            Err(SymplecticError::CannotAvoid)
        ));
    }

    #[test]
    fn lagrangian_examples() {
        let s = SymplecticSpace::standard(1);
        let l = lagrangian_avoiding(&s, &[span(2, &[&[1, 1]])]).unwrap();
        assert_eq!(l, span(2, &[&[1, 0]]));
        assert_eq!(lagrangian_avoiding(&s, &[]).unwrap(), span(2, &[&[1, 0]]));

        let s2 = SymplecticSpace::standard(2);
        let w = span(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let l = lagrangian_avoiding(&s2, std::slice::from_ref(&w)).unwrap();
        assert!(s2.is_lagrangian(&l));
        assert!(l.intersect(&w).unwrap().is_zero());
    }

    #[test]
    fn oversized_member_rejected() {
        let s = SymplecticSpace::standard(1);
        assert!(matches!(
            lagrangian_avoiding(&s, &[Subspace::full(2)]),
            Err(SymplecticError::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn k_mu_examples() {
        let s = SymplecticSpace::standard(2);
        let b = SymplecticBasis::new(&s, Subspace::full(4).basis_rat()).unwrap();
        let z = [rat(0), rat(0)];
        assert_eq!(k_mu(&b, &z).unwrap(), b.lagrangian());
        let o = [rat(1), rat(1)];
        assert_eq!(
            k_mu(&b, &o).unwrap(),
            span(4, &[&[0, 1, 0, 0], &[0, 0, 0, 1]])
        );
        let s1 = SymplecticSpace::standard(1);
        let b1 = SymplecticBasis::new(&s1, Subspace::full(2).basis_rat()).unwrap();
        assert_eq!(k_mu(&b1, &[rat_frac(1, 2)]).unwrap(), span(2, &[&[1, 1]]));
        assert!(matches!(
            k_mu(&b1, &[rat(2)]),
            Err(SymplecticError::MuOutOfRange)
        ));
    }

    fn rat(n: i64) -> BigRational {
        crate::exact_linalg::rat(n)
    }

    #[test]
    fn complement_basis_single_line() {
        let s = SymplecticSpace::standard(1);
        let omega = [span(2, &[&[1, 1]])];
        let l = lagrangian_avoiding(&s, &omega).unwrap();
        let base = complete_symplectic_basis(&s, &l).unwrap();
        assert_eq!(base.vectors(), &[rat_vec(&[1, 0]), rat_vec(&[0, 1])]);
        let out = simultaneous_complement_basis(&s, &base, &omega).unwrap();
        // p = 1 gives f̂ = e + f ∈ W; p = 2 gives the lines e, 2e+f, 3e+f.
        assert_eq!(out.p, 2);
        assert_eq!(out.basis.f(0), &rat_vec(&[2, 1]));
        let fam = associated_subspaces(&out.basis);
        assert_eq!(
            fam.subspaces,
            vec![
                span(2, &[&[1, 0]]),
                span(2, &[&[2, 1]]),
                span(2, &[&[3, 1]])
            ]
        );
    }

    #[test]
    fn complement_basis_empty_family() {
        let s = SymplecticSpace::standard(2);
        let l = lagrangian_avoiding(&s, &[]).unwrap();
        let base = complete_symplectic_basis(&s, &l).unwrap();
        let out = simultaneous_complement_basis(&s, &base, &[]).unwrap();
        assert_eq!(out.p, 1);
        for i in 0..2 {
            let expect: RatVector = base
                .e(i)
                .iter()
                .zip(base.f(i))
                .map(|(a, b)| a + b)
                .collect();
            assert_eq!(out.basis.f(i), &expect);
        }
    }

    #[test]
    fn complement_basis_two_planes() {
        let s = SymplecticSpace::standard(2);
        let omega = [span(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]])];
        let l = lagrangian_avoiding(&s, &omega).unwrap();
        let base = complete_symplectic_basis(&s, &l).unwrap();
        let out = simultaneous_complement_basis(&s, &base, &omega).unwrap();
        assert!(out.p <= 4, "p = {}", out.p);
        let fam = associated_subspaces(&out.basis);
        assert_eq!(fam.subspaces.len(), 9);
        for a in &fam.subspaces {
            assert_eq!(a.dim(), 2);
            assert!(a.meets_trivially(&omega[0]).unwrap());
        }
    }

    #[test]
    fn lagrangian_meeting_family_rejected() {
        let s = SymplecticSpace::standard(1);
        let base = SymplecticBasis::new(&s, Subspace::full(2).basis_rat()).unwrap();
        let omega = [span(2, &[&[1, 0]])];
        assert!(matches!(
            simultaneous_complement_basis(&s, &base, &omega),
            Err(SymplecticError::LagrangianMeetsFamily)
        ));
    }

    #[test]
    fn associated_members_are_k_mu() {
        let s = SymplecticSpace::standard(2);
        let b = SymplecticBasis::new(&s, Subspace::full(4).basis_rat()).unwrap();
        let fam = associated_subspaces(&b);
        let mus = [rat(0), rat(1), rat_frac(1, 2)];
        for (ch, sub) in fam.choices.iter().zip(&fam.subspaces) {
            let mu: Vec<BigRational> = ch.iter().map(|&c| mus[c as usize].clone()).collect();
            assert_eq!(&k_mu(&b, &mu).unwrap(), sub);
        }
    }
}
