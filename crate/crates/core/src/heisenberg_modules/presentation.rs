use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::module::{HeisenbergModule, Letter, ModuleElem};
use super::relations::monomials;
use super::ModuleError;
use crate::nilpotent_groups::HeisenbergGroup;

/// Reduced word over named generators; each syllable is `(name, power)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<(String, i64)>);

impl Word {
    pub fn gen(name: &str) -> Word {
        Word(vec![(name.to_string(), 1)])
    }

    pub fn pow(name: &str, p: i64) -> Word {
        Word(vec![(name.to_string(), p)]).reduced()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|(g, p)| (g.clone(), -p)).collect())
    }

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().cloned()).collect()).reduced()
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Self::concat(&[&u.inverse(), &v.inverse(), u, v])
    }

    /// `u^v = v^-1 u v`.
    pub fn conjugate(u: &Word, v: &Word) -> Word {
        Self::concat(&[&v.inverse(), u, v])
    }

    /// Free reduction: merge adjacent syllables, drop zero powers.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<(String, i64)> = Vec::new();
        for (g, p) in &self.0 {
            if *p == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, q)) if h == g => {
                    *q += p;
                    if *q == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g.clone(), *p)),
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|(_, p)| *p != 0) && self.0.windows(2).all(|w| w[0].0 != w[1].0)
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.0.iter().any(|(g, _)| g == name)
    }

    pub fn parse(text: &str) -> Result<Word, ModuleError> {
        let mut syl = Vec::new();
        for tok in text.split_whitespace() {
            let (name, p) = match tok.split_once('^') {
                Some((n, p)) => (
                    n,
                    p.parse::<i64>()
                        .map_err(|_| ModuleError::BadWord(tok.into()))?,
                ),
                None => (tok, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ModuleError::BadWord(tok.into()));
            }
            syl.push((name.to_string(), p));
        }
        Ok(Word(syl))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, p)| {
                if *p == 1 {
                    g.clone()
                } else {
                    format!("{g}^{p}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        if s == "1" {
            return Ok(Word(Vec::new()));
        }
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relator {
    /// `pres1`, `pres2` or `pres3`.
    pub family: String,
    pub word: Word,
}

/// Presentation data of the tower stage `G_r`: generators `x_1..x_k`,
/// `y_1..y_r`, `z`, `a_1`, `a_2`. The `[a', a^w]` relators are emitted only
/// for `w` in `pres1_schedule`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePresentation {
    pub stage: usize,
    pub generators: Vec<String>,
    pub pres1_schedule: Vec<Vec<i64>>,
    pub relators: Vec<Relator>,
}

impl FinitePresentation {
    pub fn to_text(&self) -> String {
        let mut s = format!("< {} |\n", self.generators.join(", "));
        for r in &self.relators {
            s.push_str(&format!("  {}    [{}]\n", r.word, r.family));
        }
        s.push_str(">\n");
        s
    }
}

fn x(i: usize) -> String {
    format!("x{}", i + 1)
}

fn y(i: usize) -> String {
    format!("y{}", i + 1)
}

fn monomial_word(e: &[i64]) -> Word {
    Word(e.iter().enumerate().map(|(i, p)| (x(i), *p)).collect()).reduced()
}

/// Presentation data of `G_r` for `0 ≤ r ≤ k`.
pub fn tower_stage(h: &HeisenbergGroup, r: usize) -> FinitePresentation {
    let k = h.rank();
    assert!(r <= k, "stage beyond rank");
    let mut generators: Vec<String> = (0..k).map(x).collect();
    generators.extend((0..r).map(y));
    generators.extend(["z", "a1", "a2"].map(String::from));
    let (z, a1, a2) = (Word::gen("z"), Word::gen("a1"), Word::gen("a2"));
    let basis = [&a1, &a2];
    let mut rel = Vec::new();
    let mut push = |family: &str, word: Word| {
        rel.push(Relator {
            family: family.into(),
            word,
        })
    };

    for i in 0..k {
        for j in i + 1..k {
            push(
                "pres1",
                Word::commutator(&Word::gen(&x(i)), &Word::gen(&x(j))),
            );
        }
    }
    let schedule = monomials(k, k as u32)
        .into_iter()
        .filter(|e| e.iter().all(|p| p.abs() <= 1))
        .collect::<Vec<_>>();
    for e in &schedule {
        let w = monomial_word(e);
        if w.0.is_empty() {
            push("pres1", Word::commutator(&a1, &a2));
            continue;
        }
        for a in basis {
            for b in basis {
                push("pres1", Word::commutator(b, &Word::conjugate(a, &w)));
            }
        }
    }

    for i in 0..k {
        push("pres2", Word::commutator(&Word::gen(&x(i)), &z));
    }
    push(
        "pres2",
        Word::concat(&[
            &Word::conjugate(&a1, &z),
            &Word::concat(&[&a1, &a2]).inverse(),
        ]),
    );
    push(
        "pres2",
        Word::concat(&[
            &Word::conjugate(&a2, &z),
            &Word::concat(&[&a1, &Word::pow("a2", 2)]).inverse(),
        ]),
    );

    for j in 0..r {
        let yj = Word::gen(&y(j));
        for i in 0..k {
            let s = if i == j {
                -i64::try_from(&h.invariants()[i]).expect("invariant fits in i64")
            } else {
                0
            };
            push(
                "pres3",
                Word::concat(&[
                    &Word::commutator(&Word::gen(&x(i)), &yj),
                    &Word::pow("z", s),
                ]),
            );
        }
        push("pres3", Word::commutator(&yj, &z));
        for l in 0..j {
            push("pres3", Word::commutator(&Word::gen(&y(l)), &yj));
        }
        for a in basis {
            let rhs = Word::concat(&[a, &Word::conjugate(a, &Word::gen(&x(j)))]);
            push(
                "pres3",
                Word::concat(&[&Word::conjugate(a, &yj), &rhs.inverse()]),
            );
        }
    }
    FinitePresentation {
        stage: r,
        generators,
        pres1_schedule: schedule,
        relators: rel,
    }
}

/// Presentation data of `G_k`.
pub fn presentation_of_gk(h: &HeisenbergGroup) -> FinitePresentation {
    tower_stage(h, h.rank())
}

/// Element `x^a y^b z^c` of `H` in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GroupElem {
    a: Vec<i64>,
    b: Vec<i64>,
    c: BigInt,
}

impl GroupElem {
    fn one(k: usize) -> Self {
        GroupElem {
            a: vec![0; k],
            b: vec![0; k],
            c: BigInt::zero(),
        }
    }

    fn is_one(&self) -> bool {
        self.a.iter().chain(&self.b).all(|x| *x == 0) && self.c.is_zero()
    }

    /// Right multiplication by one letter; `y^b x^a' = x^a' y^b z^{-m a' b}`.
    fn times(&mut self, l: Letter, p: i64, m: &[BigInt]) {
        match l {
            Letter::X(i) => {
                let mut shift = BigInt::zero();
                shift -= &m[i] * BigInt::from(self.b[i]) * BigInt::from(p);
                self.c += shift;
                self.a[i] += p;
            }
            Letter::Y(i) => self.b[i] += p,
            Letter::Z => self.c += BigInt::from(p),
        }
    }
}

/// Evaluates every relator in the split extension `A ⋊ H`, with
/// `(h, v)(h', v') = (h h', v·h' + v')`; each must give `(1, 0)`.
pub fn check_relators_in_model(
    module: &HeisenbergModule,
    pres: &FinitePresentation,
) -> Result<usize, ModuleError> {
    let k = module.rank();
    let m = module.group().invariants();
    let letter = |name: &str| -> Option<Letter> {
        if name == "z" {
            return Some(Letter::Z);
        }
        let (head, idx) = name.split_at(1);
        let i: usize = idx.parse().ok()?;
        match head {
            "x" if (1..=k).contains(&i) => Some(Letter::X(i - 1)),
            "y" if (1..=pres.stage).contains(&i) => Some(Letter::Y(i - 1)),
            _ => None,
        }
    };
    for r in &pres.relators {
        let mut h = GroupElem::one(k);
        let mut v = ModuleElem::zero(k);
        for (g, p) in &r.word.0 {
            match g.as_str() {
                "a1" | "a2" => {
                    let a = module.generator(if g == "a1" { 0 } else { 1 });
                    for _ in 0..p.unsigned_abs() {
                        v = if *p > 0 { v.add(&a) } else { v.sub(&a) };
                    }
                }
                _ => {
                    let l = letter(g).ok_or_else(|| ModuleError::UnknownGenerator(g.clone()))?;
                    v = module.apply_word(&v, &vec![(l, *p)])?;
                    h.times(l, *p, m);
                }
            }
        }
        if !h.is_one() || !v.is_zero() {
            return Err(ModuleError::RelatorFails(r.word.to_string()));
        }
    }
    Ok(pres.relators.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int_vec;
    use crate::heisenberg_modules::build_module;

    fn heis(m: &[i64]) -> HeisenbergGroup {
        HeisenbergGroup::new(int_vec(m)).unwrap()
    }

    fn words(p: &FinitePresentation) -> Vec<String> {
        p.relators.iter().map(|r| r.word.to_string()).collect()
    }

    #[test]
    fn rank_zero() {
        let p = presentation_of_gk(&heis(&[]));
        assert_eq!(p.generators, vec!["z", "a1", "a2"]);
        assert_eq!(
            words(&p),
            vec![
                "a1^-1 a2^-1 a1 a2",
                "z^-1 a1 z a2^-1 a1^-1",
                "z^-1 a2 z a2^-2 a1^-1"
            ]
        );
    }

    #[test]
    fn rank_one_contains_commutator_relator() {
        let p = presentation_of_gk(&heis(&[1]));
        assert!(words(&p).contains(&"x1^-1 y1^-1 x1 y1 z^-1".to_string()));
        assert_eq!(p.generators, vec!["x1", "y1", "z", "a1", "a2"]);
    }

    #[test]
    fn rank_two_relators() {
        let w = words(&presentation_of_gk(&heis(&[1, 2])));
        assert!(w.contains(&"x1^-1 x2^-1 x1 x2".to_string()));
        assert!(w.contains(&"x2^-1 y2^-1 x2 y2 z^-2".to_string()));
        assert!(w.contains(&"x1^-1 y2^-1 x1 y2".to_string()));
    }

    #[test]
    fn relators_are_reduced_and_hold_in_model() {
        for m in [&[][..], &[1], &[2], &[1, 2], &[1, 1, 3]] {
            let h = heis(m);
            let md = build_module(&h);
            for r in 0..=h.rank() {
                let p = tower_stage(&h, r);
                assert!(p.relators.iter().all(|x| x.word.is_reduced()));
                assert_eq!(check_relators_in_model(&md, &p).unwrap(), p.relators.len());
            }
        }
    }

    #[test]
    fn model_rejects_wrong_relator() {
        let h = heis(&[2]);
        let mut p = presentation_of_gk(&h);
        p.relators.push(Relator {
            family: "pres3".into(),
            word: Word::parse("x1^-1 y1^-1 x1 y1 z^-1").unwrap(),
        });
        assert!(matches!(
            check_relators_in_model(&build_module(&h), &p),
            Err(ModuleError::RelatorFails(_))
        ));
    }

    #[test]
    fn word_text_round_trip() {
        let w = Word::parse("a1 z^-2 x1").unwrap();
        assert_eq!(w.to_string(), "a1 z^-2 x1");
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
        assert_eq!(Word::parse("a a^-1").unwrap().reduced(), Word(vec![]));
        assert!(Word::parse("a^x").is_err());
    }
}
