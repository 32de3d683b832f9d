//! JSON encodings for exact numbers: integers as JSON numbers when they fit
//! in an `i64` and as decimal strings otherwise; rationals as integers or
//! `"p/q"` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub struct IntRef<'a>(pub &'a BigInt);

impl Serialize for IntRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub struct IntOwned(pub BigInt);

impl<'de> Deserialize<'de> for IntOwned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = IntOwned;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<IntOwned, E> {
                Ok(IntOwned(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<IntOwned, E> {
                Ok(IntOwned(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<IntOwned, E> {
                BigInt::from_str(v)
                    .map(IntOwned)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub struct RatRef<'a>(pub &'a BigRational);

impl Serialize for RatRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.denom().is_one() {
            IntRef(self.0.numer()).serialize(s)
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

pub struct RatOwned(pub BigRational);

pub fn parse_rational(v: &str) -> Option<BigRational> {
    match v.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => BigInt::from_str(v.trim())
            .ok()
            .map(BigRational::from_integer),
    }
}

impl<'de> Deserialize<'de> for RatOwned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatOwned;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a \"p/q\" rational string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RatOwned, E> {
                Ok(RatOwned(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RatOwned, E> {
                Ok(RatOwned(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RatOwned, E> {
                parse_rational(v)
                    .map(RatOwned)
                    .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        IntRef(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        IntOwned::deserialize(d).map(|x| x.0)
    }
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(IntRef))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntOwned>::deserialize(d).map(|v| v.into_iter().map(|x| x.0).collect())
    }
}

pub mod int_rows {
    use super::*;

    struct Row<'a>(&'a [BigInt]);

    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.0.iter().map(IntRef))
        }
    }

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| Row(r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<IntOwned>>::deserialize(d).map(|v| {
            v.into_iter()
                .map(|r| r.into_iter().map(|x| x.0).collect())
                .collect()
        })
    }
}

pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(RatRef))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<RatOwned>::deserialize(d).map(|v| v.into_iter().map(|x| x.0).collect())
    }
}

pub mod rat_rows {
    use super::*;

    struct Row<'a>(&'a [BigRational]);

    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.0.iter().map(RatRef))
        }
    }

    pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| Row(r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        Vec::<Vec<RatOwned>>::deserialize(d).map(|v| {
            v.into_iter()
                .map(|r| r.into_iter().map(|x| x.0).collect())
                .collect()
        })
    }
}
