use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Laurent polynomial in `x_1..x_k` with integer coefficients; terms keyed by
/// exponent vector, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent {
    vars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl Laurent {
    pub fn zero(vars: usize) -> Self {
        Laurent {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::monomial(vars, vec![0; vars], BigInt::one())
    }

    pub fn monomial(vars: usize, exponents: Vec<i64>, coeff: BigInt) -> Self {
        assert_eq!(exponents.len(), vars, "exponent vector length");
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(vars, e, BigInt::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[i64]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exponents: Vec<i64>, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exponents.clone())
            .or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Laurent {
        let mut out = Self::zero(self.vars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), &(x * c));
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    /// Multiplication by `x_i^power`.
    pub fn shift(&self, i: usize, power: i64) -> Laurent {
        Laurent {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[i] += power;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Exact quotient by `1 + x_i`, if it exists.
    pub fn div_one_plus(&self, i: usize) -> Option<Laurent> {
        // Group by the exponents of the other variables; divide each
        // univariate slice from its lowest degree upward.
        let mut slices: BTreeMap<Vec<i64>, BTreeMap<i64, BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = rest[i];
            rest[i] = 0;
            slices.entry(rest).or_default().insert(d, c.clone());
        }
        let mut out = Self::zero(self.vars);
        for (rest, slice) in slices {
            let lo = *slice.keys().next().expect("nonempty slice");
            let hi = *slice.keys().next_back().expect("nonempty slice");
            let mut prev = BigInt::zero();
            for d in lo..hi {
                let q = slice.get(&d).cloned().unwrap_or_default() - &prev;
                let mut e = rest.clone();
                e[i] = d;
                out.add_term(e, &q);
                prev = q;
            }
            if slice[&hi] != prev {
                return None;
            }
        }
        Some(out)
    }

    /// Largest `Σ|e_i|` over the support.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|x| x.abs()).sum())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != 0)
                .map(|(i, p)| {
                    if *p == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, p)
                    }
                })
                .collect();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{c}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
