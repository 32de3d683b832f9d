use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `u * a * v = d` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_0 | d_1 | ...`, including trailing zeros.
    pub fn invariants(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Position of the smallest nonzero |entry| in the trailing block starting at
/// `(t, t)`, ties broken in row-major order.
fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.nrows() {
        for j in t..d.ncols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Divisibility: fold any offending row into the pivot row and re-reduce.
            let pivot = d[(t, t)].clone();
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offending {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Unimodular matrix whose first `rank` rows are a basis of the saturation
/// `Z^n ∩ span_Q(rows)`; the remaining rows complete it to a basis of `Z^n`.
pub fn saturated_basis(rows: &[Vec<BigInt>], n: usize) -> (usize, IntMatrix) {
    let a = IntMatrix::from_rows(rows.to_vec(), Some(n)).expect("rows of equal length");
    let snf = smith_normal_form(&a);
    let w = snf
        .v
        .integer_inverse()
        .expect("column transform of Smith form is unimodular");
    (snf.rank(), w)
}

/// True when the rows span a direct summand of `Z^n` (all invariant factors 0 or 1).
pub fn is_primitive_sublattice(rows: &[Vec<BigInt>], n: usize) -> bool {
    if rows.is_empty() {
        return true;
    }
    let a = IntMatrix::from_rows(rows.to_vec(), Some(n)).expect("rows of equal length");
    smith_normal_form(&a)
        .invariants()
        .iter()
        .all(|d| d.is_zero() || d.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int_vec;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        let prod = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let inv = s.invariants();
        for w in inv.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        s
    }

    // Independent oracle: for a square matrix the product d_1 ... d_i equals the
    // gcd of all i x i minors. For 2 x 2 the first invariant is the gcd of the
    // entries and the product is |det|.
    fn minors_oracle_2x2(a: &IntMatrix) -> (BigInt, BigInt) {
        use num_integer::Integer;
        let g = a
            .to_rows()
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, x| g.gcd(x));
        (g, a.determinant().unwrap().abs())
    }

    #[test]
    fn diag_two_three() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = check(&a);
        let (g, det) = minors_oracle_2x2(&a);
        assert_eq!(s.invariants(), vec![g.clone(), &det / &g]);
        assert_eq!(s.invariants(), int_vec(&[1, 6]));
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        let s = check(&a);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn rotation() {
        let a = IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let s = check(&a);
        assert_eq!(s.invariants(), int_vec(&[1, 1]));
    }

    #[test]
    fn rectangular() {
        let a = IntMatrix::from_i64(&[&[4, 6, 8], &[6, 9, 12]]);
        let s = check(&a);
        assert_eq!(s.invariants(), int_vec(&[1, 0]));
    }

    #[test]
    fn saturation_recovers_missing_vector() {
        // (2,0,1) and (0,2,1) span a sublattice of index 2 in its saturation.
        let rows = vec![int_vec(&[2, 0, 1]), int_vec(&[0, 2, 1])];
        assert!(!is_primitive_sublattice(&rows, 3));
        let (rank, w) = saturated_basis(&rows, 3);
        assert_eq!(rank, 2);
        assert!(w.is_unimodular());
        let sat: Vec<Vec<BigInt>> = (0..rank).map(|i| w.row(i).to_vec()).collect();
        assert!(is_primitive_sublattice(&sat, 3));
        let mut all = sat.clone();
        all.push(int_vec(&[1, 1, 1]));
        assert_eq!(crate::exact_linalg::rank_int(&all), 2);
    }
}
