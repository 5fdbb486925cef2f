//! Linear recurrences in the number of columns: transfer matrices,
//! characteristic and minimal recurrences, backward evaluation, reciprocity,
//! and the closed form for domino tilings.

mod bm;
mod kasteleyn;
mod reciprocity;
mod transfer;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bm::berlekamp_massey;
pub use kasteleyn::{kasteleyn, kasteleyn_with_ceiling, DEFAULT_PRECISION_CEILING};
pub use reciprocity::{
    power_recurrence, power_recurrence_with, tiling_sequence, verify_reciprocity, BackwardAgreement,
    PowerReport, ReciprocityReport, ReciprocityRow, HELD_OUT_TERMS,
};
pub use transfer::{
    char_poly_recurrence, characteristic_polynomial, TransferMatrix, CHARPOLY_STATE_CAP,
    DEFAULT_STATE_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// `a(n) = c_1 a(n-1) + ... + c_r a(n-r)` with `r` seed values starting at
/// index `seed_index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RecurrenceDocument", into = "RecurrenceDocument")]
pub struct Recurrence {
    coeffs: Vec<BigRational>,
    seed: Vec<BigRational>,
    seed_index: i64,
}

#[derive(Serialize, Deserialize)]
struct RecurrenceDocument {
    order: usize,
    #[serde(with = "crate::json::string_vec")]
    coeffs: Vec<BigRational>,
    seed_index: i64,
    #[serde(with = "crate::json::string_vec")]
    seed: Vec<BigRational>,
}

impl From<Recurrence> for RecurrenceDocument {
    fn from(r: Recurrence) -> Self {
        RecurrenceDocument {
            order: r.order(),
            coeffs: r.coeffs,
            seed_index: r.seed_index,
            seed: r.seed,
        }
    }
}

impl TryFrom<RecurrenceDocument> for Recurrence {
    type Error = String;

    fn try_from(d: RecurrenceDocument) -> std::result::Result<Self, String> {
        if d.order != d.coeffs.len() {
            return Err(format!("order {} but {} coefficients", d.order, d.coeffs.len()));
        }
        Recurrence::new(d.coeffs, d.seed, d.seed_index).map_err(|e| e.to_string())
    }
}

impl Recurrence {
    pub fn new(coeffs: Vec<BigRational>, seed: Vec<BigRational>, seed_index: i64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("recurrence order must be at least 1".into()));
        }
        if seed.len() != coeffs.len() {
            return Err(Error::InvalidParameter(format!(
                "order {} recurrence needs {} seed values, got {}",
                coeffs.len(),
                coeffs.len(),
                seed.len()
            )));
        }
        Ok(Recurrence { coeffs, seed, seed_index })
    }

    /// Integer coefficients and seed, for convenience.
    pub fn from_integers(coeffs: &[i64], seed: &[i64], seed_index: i64) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        Self::new(conv(coeffs), conv(seed), seed_index)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_1, ..., c_r`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn seed(&self) -> &[BigRational] {
        &self.seed
    }

    pub fn seed_index(&self) -> i64 {
        self.seed_index
    }

    /// Whether the recurrence can be run backwards (`c_r != 0`).
    pub fn reversible(&self) -> bool {
        !self.coeffs.last().expect("order >= 1").is_zero()
    }

    /// `count` values past the seed (forward) or before it (backward, listed
    /// in order of decreasing index).
    pub fn extend(&self, direction: Direction, count: usize) -> Result<Vec<BigRational>> {
        let r = self.order();
        let mut window = self.seed.clone();
        let mut out = Vec::with_capacity(count);
        match direction {
            Direction::Forward => {
                for _ in 0..count {
                    let next: BigRational = self
                        .coeffs
                        .iter()
                        .zip(window.iter().rev())
                        .map(|(c, a)| c * a)
                        .sum();
                    window.remove(0);
                    window.push(next.clone());
                    out.push(next);
                }
            }
            Direction::Backward => {
                if !self.reversible() {
                    return Err(Error::BackwardUndefined);
                }
                let last = &self.coeffs[r - 1];
                for _ in 0..count {
                    // a(n) = sum_{i<r} c_i a(n-i) + c_r a(n-r), solved for a(n-r)
                    let n_val = &window[r - 1];
                    let partial: BigRational = (1..r)
                        .map(|i| &self.coeffs[i - 1] * &window[r - 1 - i])
                        .sum();
                    let prev = (n_val - partial) / last;
                    window.pop();
                    window.insert(0, prev.clone());
                    out.push(prev);
                }
            }
        }
        Ok(out)
    }

    /// Values at every index in `from..=to`, running backward as needed.
    pub fn values(&self, from: i64, to: i64) -> Result<Vec<BigRational>> {
        if from > to {
            return Ok(Vec::new());
        }
        let start = self.seed_index;
        let end = start + self.order() as i64 - 1;
        let mut all: Vec<BigRational> = Vec::new();
        if from < start {
            let mut back = self.extend(Direction::Backward, (start - from) as usize)?;
            back.reverse();
            all.extend(back);
        }
        all.extend(self.seed.iter().cloned());
        if to > end {
            all.extend(self.extend(Direction::Forward, (to - end) as usize)?);
        }
        let base = from.min(start);
        Ok(all[(from - base) as usize..=(to - base) as usize].to_vec())
    }

    pub fn value_at(&self, n: i64) -> Result<BigRational> {
        Ok(self.values(n, n)?.pop().expect("one value"))
    }

    /// Whether the recurrence reproduces `seq[i]` (at index `start + i`) for
    /// every index from `start + r` on; returns the first failing index.
    pub fn first_mismatch(&self, seq: &[BigRational], start: i64) -> Result<Option<i64>> {
        if seq.is_empty() {
            return Ok(None);
        }
        let predicted = self.values(start, start + seq.len() as i64 - 1)?;
        Ok(predicted
            .iter()
            .zip(seq)
            .position(|(p, s)| p != s)
            .map(|i| start + i as i64))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a(n) =")?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                f.write_str(if c.is_negative() { " -" } else { " " })?;
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "a(n-{})", i + 1)?;
        }
        if first {
            f.write_str(" 0")?;
        }
        Ok(())
    }
}

/// Integer sequence as rationals.
pub(crate) fn rationals<I: Into<BigInt> + Clone>(seq: &[I]) -> Vec<BigRational> {
    seq.iter()
        .map(|x| BigRational::from_integer(x.clone().into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn fibonacci_backward() {
        let r = Recurrence::from_integers(&[1, 1], &[1, 1], 0).unwrap();
        assert_eq!(r.extend(Direction::Backward, 3).unwrap(), ints(&[0, 1, -1]));
        assert_eq!(r.extend(Direction::Forward, 4).unwrap(), ints(&[2, 3, 5, 8]));
        assert_eq!(r.values(-3, 3).unwrap(), ints(&[-1, 1, 0, 1, 1, 2, 3]));
        assert_eq!(r.value_at(-2).unwrap(), ints(&[1])[0]);
    }

    #[test]
    fn constant_backward() {
        let r = Recurrence::from_integers(&[1], &[1], 0).unwrap();
        assert_eq!(r.extend(Direction::Backward, 4).unwrap(), ints(&[1, 1, 1, 1]));
    }

    #[test]
    fn zero_trailing_coefficient_blocks_backward() {
        let r = Recurrence::from_integers(&[2, 0], &[1, 2], 0).unwrap();
        assert!(matches!(r.extend(Direction::Backward, 1), Err(Error::BackwardUndefined)));
        assert!(r.extend(Direction::Forward, 2).is_ok());
    }

    #[test]
    fn display() {
        let r = Recurrence::from_integers(&[0, 4, 0, -1], &[1, 0, 3, 0], 0).unwrap();
        assert_eq!(r.to_string(), "a(n) = 4*a(n-2) - a(n-4)");
        let r = Recurrence::from_integers(&[-1, 1], &[1, 1], 0).unwrap();
        assert_eq!(r.to_string(), "a(n) = -a(n-1) + a(n-2)");
        let half = Recurrence::new(
            vec![BigRational::new(BigInt::from(1), BigInt::from(2))],
            ints(&[4]),
            3,
        )
        .unwrap();
        assert_eq!(half.to_string(), "a(n) = 1/2*a(n-1)");
        assert_eq!(half.value_at(5).unwrap(), ints(&[1])[0]);
    }

    #[test]
    fn json_round_trip() {
        let r = Recurrence::new(
            vec![BigRational::new(BigInt::from(-3), BigInt::from(7)), BigRational::one()],
            ints(&[5, -2]),
            -4,
        )
        .unwrap();
        let text = r.to_json();
        assert!(text.contains("\"-3/7\""));
        assert!(text.contains("\"order\": 2"));
        assert_eq!(Recurrence::from_json(&text).unwrap(), r);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Recurrence::new(vec![], vec![], 0).is_err());
        assert!(Recurrence::from_integers(&[1, 1], &[1], 0).is_err());
        assert!(Recurrence::from_json(r#"{"order":3,"coeffs":["1"],"seed_index":0,"seed":["1"]}"#).is_err());
    }
}
