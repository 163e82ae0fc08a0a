//! JSON helpers: big-integer coefficients as plain numbers when they fit.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer coefficient; serialized as a JSON number, or as a decimal string
/// when it does not fit in 64 bits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff(pub BigInt);

/// Ring element in report form: element token -> coefficient.
pub type TokenMap = BTreeMap<String, Coeff>;

impl From<BigInt> for Coeff {
    fn from(x: BigInt) -> Self {
        Coeff(x)
    }
}

impl From<i64> for Coeff {
    fn from(x: i64) -> Self {
        Coeff(BigInt::from(x))
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct CoeffVisitor;

impl Visitor<'_> for CoeffVisitor {
    type Value = Coeff;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Coeff, E> {
        Ok(Coeff(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Coeff, E> {
        Ok(Coeff(BigInt::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Coeff, E> {
        v.trim()
            .parse::<BigInt>()
            .map(Coeff)
            .map_err(|_| E::custom(format!("bad integer `{v}`")))
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Coeff, D::Error> {
        d.deserialize_any(CoeffVisitor)
    }
}
