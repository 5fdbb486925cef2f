//! Serde helpers for exact numbers.
//!
//! Big integers are written as plain JSON numbers of any length (serde_json is
//! built with `arbitrary_precision`). Rationals are written as strings of the
//! form `"p"` or `"p/q"`.

use std::fmt::Display;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number<T: Display, E: serde::ser::Error>(value: &T) -> Result<Number, E> {
    value.to_string().parse::<Number>().map_err(E::custom)
}

fn from_number<T: FromStr, E: serde::de::Error>(n: &Number) -> Result<T, E>
where
    T::Err: Display,
{
    n.to_string().parse::<T>().map_err(E::custom)
}

/// A single integer as a JSON number.
pub mod integer {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        to_number::<T, S::Error>(value)?.serialize(s)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        from_number(&Number::deserialize(d)?)
    }
}

/// A list of integers as JSON numbers.
pub mod integer_vec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&to_number::<T, S::Error>(v)?)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<Number>::deserialize(d)?
            .iter()
            .map(from_number)
            .collect()
    }
}

/// A single exact value written as a string (used for rationals).
pub mod string {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse::<T>().map_err(D::Error::custom)
    }
}

/// A list of exact values written as strings (used for rationals).
pub mod string_vec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse::<T>().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{Deserialize, Serialize};

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Sample {
        #[serde(with = "super::integer")]
        one: BigInt,
        #[serde(with = "super::integer_vec")]
        many: Vec<BigInt>,
        #[serde(with = "super::string_vec")]
        ratios: Vec<BigRational>,
    }

    #[test]
    fn big_values_survive_json() {
        let huge: BigInt = "-123456789012345678901234567890123456789012345678901234567890"
            .parse()
            .unwrap();
        let s = Sample {
            one: huge.clone(),
            many: vec![huge.clone(), BigInt::from(7)],
            ratios: vec![
                BigRational::new(BigInt::from(1), BigInt::from(120)),
                BigRational::from_integer(BigInt::from(-4)),
            ],
        };
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(&huge.to_string()));
        assert!(text.contains("\"1/120\""));
        assert!(text.contains("\"-4\""));
        let back: Sample = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
