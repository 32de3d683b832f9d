use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::module::central_matrix;
use crate::exact_linalg::json;

/// Evidence that no nontrivial power of `z` acts nilpotently: the
/// characteristic polynomial `t^2 - 3t + 1` of `M` shares no root with any
/// `t^n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittingCertificate {
    #[serde(with = "json::int")]
    pub trace: BigInt,
    #[serde(with = "json::int")]
    pub determinant: BigInt,
    #[serde(with = "json::int")]
    pub discriminant: BigInt,
    pub discriminant_is_square: bool,
    #[serde(with = "json::int")]
    pub value_at_one: BigInt,
    #[serde(with = "json::int")]
    pub value_at_minus_one: BigInt,
    /// `Res(t^2 - 3t + 1, t^n - 1)` for `n = 1..=n_max`.
    #[serde(with = "json::int_vec")]
    pub resultants: Vec<BigInt>,
}

impl FittingCertificate {
    /// Every resultant nonzero; and since the discriminant is not a square
    /// and `±1` are not roots, the eigenvalues are irrational reals, so not
    /// roots of unity for any `n`.
    pub fn holds(&self) -> bool {
        self.resultants.iter().all(|r| !r.is_zero())
            && !self.discriminant_is_square
            && self.discriminant.is_positive()
            && !self.value_at_one.is_zero()
            && !self.value_at_minus_one.is_zero()
    }
}

/// `Res(f, t^n - 1) = Π_{f(λ)=0} (λ^n - 1) = det^n - s_n + 1` where
/// `s_n = λ_1^n + λ_2^n` obeys `s_n = tr·s_{n-1} - det·s_{n-2}`.
pub fn resultants_with_cyclotomic(trace: &BigInt, det: &BigInt, n_max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n_max);
    let (mut s_prev, mut s) = (BigInt::from(2), trace.clone());
    let mut det_pow = det.clone();
    for _ in 1..=n_max {
        out.push(&det_pow - &s + 1);
        let next = trace * &s - det * &s_prev;
        s_prev = std::mem::replace(&mut s, next);
        det_pow *= det;
    }
    out
}

pub fn fitting_certificate(n_max: usize) -> FittingCertificate {
    let m = central_matrix();
    let trace = &m[(0, 0)] + &m[(1, 1)];
    let determinant = m.determinant().expect("square");
    let discriminant = &trace * &trace - BigInt::from(4) * &determinant;
    let discriminant_is_square = !discriminant.is_negative() && {
        let r = discriminant.sqrt();
        &r * &r == discriminant
    };
    let f = |t: i64| BigInt::from(t * t) - &trace * t + &determinant;
    FittingCertificate {
        value_at_one: f(1),
        value_at_minus_one: f(-1),
        resultants: resultants_with_cyclotomic(&trace, &determinant, n_max),
        trace,
        determinant,
        discriminant,
        discriminant_is_square,
    }
}
