//! JSON cannot carry ±∞; these helpers write them as the strings "inf" and
//! "-inf".

use serde::{Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Text(String),
}

pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if *x == f64::INFINITY {
        s.serialize_str("inf")
    } else if *x == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else {
        s.serialize_f64(*x)
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    match Repr::deserialize(d)? {
        Repr::Num(x) => Ok(x),
        Repr::Text(t) => match t.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {other:?}"
            ))),
        },
    }
}
