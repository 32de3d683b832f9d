use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::SymplecticError;
use crate::exact_linalg::IntMatrix;

/// `tᵀ B t = diag([[0, m_1], [-m_1, 0]], ...)` with `0 < m_1 | m_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSymplecticForm {
    pub t: IntMatrix,
    pub invariants: Vec<BigInt>,
}

/// Skew matrix whose only nonzero entries are the `±m_i` blocks.
pub fn block_form(invariants: &[BigInt]) -> IntMatrix {
    let k = invariants.len();
    let mut b = IntMatrix::zeros(2 * k, 2 * k);
    for (i, m) in invariants.iter().enumerate() {
        b[(2 * i, 2 * i + 1)] = m.clone();
        b[(2 * i + 1, 2 * i)] = -m;
    }
    b
}

/// Working state: the form `a` in the basis given by the columns of `t`.
struct Congruence {
    a: IntMatrix,
    t: IntMatrix,
}

impl Congruence {
    fn swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.a.swap_cols(i, j);
        self.t.swap_cols(i, j);
    }

    fn negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.a.negate_col(i);
        self.t.negate_col(i);
    }

    /// v_dst += q · v_src
    fn add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        self.a.add_col_multiple(dst, src, q);
        self.a.add_row_multiple(dst, src, q);
        self.t.add_col_multiple(dst, src, q);
    }

    fn smallest_upper(&self, from: usize) -> Option<(usize, usize)> {
        let n = self.a.nrows();
        let mut best: Option<(usize, usize)> = None;
        for i in from..n {
            for j in i + 1..n {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

pub fn integer_symplectic_normal_form(
    b: &IntMatrix,
) -> Result<IntegerSymplecticForm, SymplecticError> {
    if !b.is_skew_symmetric() {
        return Err(SymplecticError::NotSkew);
    }
    let n = b.nrows();
    if !n.is_multiple_of(2) {
        return Err(SymplecticError::OddDimension(n));
    }
    if b.determinant()?.is_zero() {
        return Err(SymplecticError::Degenerate);
    }
    let mut w = Congruence {
        a: b.clone(),
        t: IntMatrix::identity(n),
    };
    for pair in 0..n / 2 {
        let (p, q) = (2 * pair, 2 * pair + 1);
        loop {
            let (i, j) = w.smallest_upper(p).ok_or(SymplecticError::Degenerate)?;
            w.swap(i, p);
            w.swap(j, q);
            let d = w.a[(p, q)].clone();

            let mut clean = true;
            for l in q + 1..n {
                let c = -(&w.a[(p, l)] / &d);
                w.add(l, q, &c);
                let c = &w.a[(q, l)] / &d;
                w.add(l, p, &c);
                clean &= w.a[(p, l)].is_zero() && w.a[(q, l)].is_zero();
            }
            if !clean {
                continue;
            }
            let offending =
                (q + 1..n).find(|&i| (i + 1..n).any(|j| !(&w.a[(i, j)] % &d).is_zero()));
            match offending {
                Some(i) => w.add(p, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(p, q)].is_negative() {
            w.negate(q);
        }
    }
    let invariants: Vec<BigInt> = (0..n / 2)
        .map(|i| w.a[(2 * i, 2 * i + 1)].clone())
        .collect();
    debug_assert_eq!(w.a, block_form(&invariants));
    Ok(IntegerSymplecticForm { t: w.t, invariants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int_vec;

    fn check(b: &IntMatrix) -> IntegerSymplecticForm {
        let f = integer_symplectic_normal_form(b).unwrap();
        let congruent = f.t.transpose().mul(b).unwrap().mul(&f.t).unwrap();
        assert_eq!(congruent, block_form(&f.invariants));
        assert!(f.t.is_unimodular());
        for w in f.invariants.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(f.invariants.iter().all(|m| m.is_positive()));
        f
    }

    #[test]
    fn already_normal() {
        let b = IntMatrix::from_i64(&[&[0, 2], &[-2, 0]]);
        let f = check(&b);
        assert_eq!(f.t, IntMatrix::identity(2));
        assert_eq!(f.invariants, int_vec(&[2]));
    }

    #[test]
    fn two_blocks() {
        let b = IntMatrix::block_diagonal(&[
            IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]),
            IntMatrix::from_i64(&[&[0, 3], &[-3, 0]]),
        ]);
        assert_eq!(check(&b).invariants, int_vec(&[1, 3]));
    }

    #[test]
    fn blocks_two_and_three_merge() {
        // gcd/lcm behaviour: blocks 2 and 3 normalize to 1 and 6.
        let b = IntMatrix::block_diagonal(&[
            IntMatrix::from_i64(&[&[0, 2], &[-2, 0]]),
            IntMatrix::from_i64(&[&[0, 3], &[-3, 0]]),
        ]);
        assert_eq!(check(&b).invariants, int_vec(&[1, 6]));
    }

    #[test]
    fn sign_normalization_negates_partner() {
        let b = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let f = check(&b);
        assert_eq!(f.invariants, int_vec(&[1]));
        assert_eq!(f.t, IntMatrix::from_i64(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn errors() {
        let odd = IntMatrix::zeros(3, 3);
        assert!(integer_symplectic_normal_form(&odd).is_err());
        let degenerate =
            IntMatrix::from_i64(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert!(matches!(
            integer_symplectic_normal_form(&degenerate),
            Err(SymplecticError::Degenerate)
        ));
        let not_skew = IntMatrix::from_i64(&[&[1, 1], &[-1, 0]]);
        assert!(matches!(
            integer_symplectic_normal_form(&not_skew),
            Err(SymplecticError::NotSkew)
        ));
    }
}
