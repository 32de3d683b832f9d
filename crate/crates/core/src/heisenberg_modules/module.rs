use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::laurent::Laurent;
use super::ModuleError;
use crate::exact_linalg::IntMatrix;
use crate::nilpotent_groups::HeisenbergGroup;

/// `a_1^z = a_1 a_2`, `a_2^z = a_1 a_2^2`.
pub fn central_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 1], &[1, 2]])
}

fn central_inverse() -> IntMatrix {
    IntMatrix::from_i64(&[&[2, -1], &[-1, 1]])
}

/// `p_1 a_1 + p_2 a_2` with Laurent coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleElem {
    pub p: [Laurent; 2],
}

impl ModuleElem {
    pub fn zero(vars: usize) -> Self {
        ModuleElem {
            p: [Laurent::zero(vars), Laurent::zero(vars)],
        }
    }

    /// `a_1` (index 0) or `a_2` (index 1).
    pub fn basis(vars: usize, index: usize) -> Self {
        let mut e = Self::zero(vars);
        e.p[index] = Laurent::one(vars);
        e
    }

    pub fn from_pair(p1: Laurent, p2: Laurent) -> Self {
        ModuleElem { p: [p1, p2] }
    }

    pub fn is_zero(&self) -> bool {
        self.p[0].is_zero() && self.p[1].is_zero()
    }

    pub fn add(&self, o: &ModuleElem) -> ModuleElem {
        ModuleElem::from_pair(self.p[0].add(&o.p[0]), self.p[1].add(&o.p[1]))
    }

    pub fn sub(&self, o: &ModuleElem) -> ModuleElem {
        ModuleElem::from_pair(self.p[0].sub(&o.p[0]), self.p[1].sub(&o.p[1]))
    }

    fn map_coeffs(&self, f: impl Fn(&Laurent) -> Laurent) -> ModuleElem {
        ModuleElem::from_pair(f(&self.p[0]), f(&self.p[1]))
    }

    /// Right multiplication of the coefficient row by an integer 2x2 matrix.
    fn times(&self, m: &IntMatrix) -> ModuleElem {
        let col = |j: usize| {
            self.p[0]
                .scale(&m[(0, j)])
                .add(&self.p[1].scale(&m[(1, j)]))
        };
        ModuleElem::from_pair(col(0), col(1))
    }
}

impl fmt::Display for ModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p[0], self.p[1])
    }
}

/// A generator letter of `H` with exponent `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X(usize),
    Y(usize),
    Z,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X(i) => write!(f, "x{}", i + 1),
            Letter::Y(i) => write!(f, "y{}", i + 1),
            Letter::Z => write!(f, "z"),
        }
    }
}

/// Word over `x_i^±, y_j^±, z^±`, acting left to right.
pub type GroupWord = Vec<(Letter, i64)>;

/// Parses `"x1 y1^-1 z^2"`; bare `x`/`y` mean index 1.
pub fn parse_group_word(text: &str, rank: usize) -> Result<GroupWord, ModuleError> {
    let mut word = Vec::new();
    for tok in text.split_whitespace() {
        let (name, power) = match tok.split_once('^') {
            Some((n, p)) => (
                n,
                p.parse::<i64>()
                    .map_err(|_| ModuleError::UnknownGenerator(tok.into()))?,
            ),
            None => (tok, 1),
        };
        let index = |rest: &str| -> Result<usize, ModuleError> {
            let i = if rest.is_empty() {
                1
            } else {
                rest.parse()
                    .map_err(|_| ModuleError::UnknownGenerator(tok.into()))?
            };
            if i == 0 || i > rank {
                return Err(ModuleError::UnknownGenerator(tok.into()));
            }
            Ok(i - 1)
        };
        let letter = if name == "z" {
            Letter::Z
        } else if let Some(rest) = name.strip_prefix('x') {
            Letter::X(index(rest)?)
        } else if let Some(rest) = name.strip_prefix('y') {
            Letter::Y(index(rest)?)
        } else {
            return Err(ModuleError::UnknownGenerator(tok.into()));
        };
        word.push((letter, power));
    }
    Ok(word)
}

/// Free `Z[x_1^±, ..., x_k^±]`-module on `a_1, a_2` with the action of `H`:
/// `x_i` multiplies by `x_i`, `z` acts by `M` on coefficients, and `y_j`
/// substitutes `x_j ↦ x_j M^{m_j}` then multiplies by `1 + x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergModule {
    group: HeisenbergGroup,
}

pub fn build_module(h: &HeisenbergGroup) -> HeisenbergModule {
    HeisenbergModule { group: h.clone() }
}

impl HeisenbergModule {
    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn generator(&self, index: usize) -> ModuleElem {
        ModuleElem::basis(self.rank(), index)
    }

    fn matrix_power(&self, power: &BigInt) -> IntMatrix {
        let (base, mut e) = if power < &BigInt::zero() {
            (central_inverse(), -power)
        } else {
            (central_matrix(), power.clone())
        };
        let mut acc = IntMatrix::identity(2);
        let mut sq = base;
        let two = BigInt::from(2);
        while !e.is_zero() {
            if (&e % &two).is_one() {
                acc = acc.mul(&sq).expect("2x2");
            }
            sq = sq.mul(&sq).expect("2x2");
            e /= &two;
        }
        acc
    }

    /// `x^e c ↦ x^e (c M^{e_j m_j})` on every term.
    fn substitute(&self, v: &ModuleElem, j: usize, sign: i64) -> ModuleElem {
        let k = self.rank();
        let mj = &self.group.invariants()[j];
        let mut out = ModuleElem::zero(k);
        let mut exps: Vec<&Vec<i64>> = v.p[0]
            .terms()
            .map(|(e, _)| e)
            .chain(v.p[1].terms().map(|(e, _)| e))
            .collect();
        exps.sort();
        exps.dedup();
        for e in exps {
            let c = [v.p[0].coeff(e), v.p[1].coeff(e)];
            let m = self.matrix_power(&(mj * BigInt::from(e[j] * sign)));
            for col in 0..2 {
                let x = &c[0] * &m[(0, col)] + &c[1] * &m[(1, col)];
                out.p[col].add_term(e.clone(), &x);
            }
        }
        out
    }

    fn check_letter(&self, l: Letter) -> Result<(), ModuleError> {
        match l {
            Letter::X(i) | Letter::Y(i) if i >= self.rank() => {
                Err(ModuleError::UnknownGenerator(l.to_string()))
            }
            _ => Ok(()),
        }
    }

    /// `v · l^{±1}`.
    pub fn act(&self, v: &ModuleElem, l: Letter, inverse: bool) -> Result<ModuleElem, ModuleError> {
        self.check_letter(l)?;
        let s = if inverse { -1 } else { 1 };
        Ok(match l {
            Letter::X(i) => v.map_coeffs(|p| p.shift(i, s)),
            Letter::Z => v.times(&if inverse {
                central_inverse()
            } else {
                central_matrix()
            }),
            Letter::Y(j) if !inverse => {
                let one_plus = Laurent::one(self.rank()).add(&Laurent::var(self.rank(), j));
                self.substitute(v, j, 1).map_coeffs(|p| p.mul(&one_plus))
            }
            Letter::Y(j) => {
                let q0 = v.p[0].div_one_plus(j);
                let q1 = v.p[1].div_one_plus(j);
                match (q0, q1) {
                    (Some(a), Some(b)) => self.substitute(&ModuleElem::from_pair(a, b), j, -1),
                    _ => return Err(ModuleError::NotInImage(v.to_string(), l.to_string())),
                }
            }
        })
    }

    pub fn apply_word(&self, v: &ModuleElem, word: &GroupWord) -> Result<ModuleElem, ModuleError> {
        let mut cur = v.clone();
        for &(l, p) in word {
            for _ in 0..p.unsigned_abs() {
                cur = self.act(&cur, l, p < 0)?;
            }
        }
        Ok(cur)
    }

    /// `v · (Σ c_w w)` for a group-ring element given as signed words.
    pub fn apply_ring(
        &self,
        v: &ModuleElem,
        terms: &[(i64, GroupWord)],
    ) -> Result<ModuleElem, ModuleError> {
        let mut acc = ModuleElem::zero(self.rank());
        for (c, w) in terms {
            let img = self.apply_word(v, w)?;
            let c = BigInt::from(*c);
            acc = acc.add(&img.map_coeffs(|p| p.scale(&c)));
        }
        Ok(acc)
    }
}
