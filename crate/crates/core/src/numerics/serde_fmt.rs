//! Serde adapters for the text forms used in JSON transcripts.
//!
//! Rationals travel as `"p/q"` strings. Integers travel either as JSON
//! numbers of arbitrary length or as decimal strings, depending on the field.

use num_bigint::{BigInt, BigUint};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rat, rat_to_string, BigRat};

pub mod rat_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(D::Error::custom)
    }
}

pub mod rat_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rat_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRat>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rat(t).map_err(D::Error::custom))
            .collect()
    }
}

pub mod uint_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(D::Error::custom))
            .collect()
    }
}

fn to_number<E: serde::ser::Error>(digits: String) -> Result<serde_json::Number, E> {
    digits.parse().map_err(E::custom)
}

pub mod int_num {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_number::<S::Error>(n.to_string())?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string().parse().map_err(D::Error::custom)
    }
}

pub mod uint_vec_num {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|n| to_number::<S::Error>(n.to_string()))
            .collect::<Result<Vec<_>, _>>()?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<serde_json::Number>::deserialize(d)?
            .iter()
            .map(|n| n.to_string().parse().map_err(D::Error::custom))
            .collect()
    }
}
