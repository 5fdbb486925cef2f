//! Closed-form count of domino tilings, evaluated in binary floating point.
//!
//! `T(m, n, 1)` is the product over `j = 1..=ceil(m/2)` of `f_j(n)`, where
//! `f(n) = 2 a_j f(n-1) + f(n-2)`, `f(0) = 1`, `f(-1) = 0` and
//! `a_j = cos(j pi / (m+1))`.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Default precision ceiling in bits.
pub const DEFAULT_PRECISION_CEILING: usize = 4096;

const START_PRECISION: usize = 128;

/// Extra bits demanded beyond the size of the rounded result, so that the
/// accumulated rounding error cannot reach the integer being read off.
const GUARD_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

pub fn kasteleyn(m: usize, n: usize) -> Result<BigUint> {
    kasteleyn_with_ceiling(m, n, DEFAULT_PRECISION_CEILING)
}

/// Like [`kasteleyn`] with an explicit precision ceiling.
pub fn kasteleyn_with_ceiling(m: usize, n: usize, ceiling: usize) -> Result<BigUint> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "board dimensions must be positive, got {m}x{n}"
        )));
    }
    let mut consts = Consts::new().map_err(|e| Error::InvalidParameter(format!("{e:?}")))?;
    let mut p = START_PRECISION;
    while p <= ceiling {
        if let Some(value) = evaluate(m, n, p, &mut consts) {
            return Ok(value);
        }
        p *= 2;
    }
    Err(Error::PrecisionCeiling { ceiling })
}

/// The rounded product at precision `p`, if it is close enough to an integer
/// and `p` leaves the guard bits free.
fn evaluate(m: usize, n: usize, p: usize, consts: &mut Consts) -> Option<BigUint> {
    let pi = consts.pi(p, RM);
    let denom = BigFloat::from_word((m + 1) as Word, p);
    let two = BigFloat::from_word(2, p);
    let mut product = BigFloat::from_word(1, p);
    for j in 1..=m.div_ceil(2) {
        let angle = pi.mul(&BigFloat::from_word(j as Word, p), p, RM).div(&denom, p, RM);
        let twice_a = angle.cos(p, RM, consts).mul(&two, p, RM);
        let (mut prev, mut cur) = (BigFloat::from_word(0, p), BigFloat::from_word(1, p));
        for _ in 0..n {
            let next = twice_a.mul(&cur, p, RM).add(&prev, p, RM);
            prev = cur;
            cur = next;
        }
        product = product.mul(&cur, p, RM);
    }
    let rounded = product.round(0, RM);
    let residual = product.sub(&rounded, p, RM).abs();
    if residual.is_nan() || residual.cmp(&BigFloat::from_f64(0.25, p)) != Some(-1) {
        return None;
    }
    let value = to_biguint(&rounded)?;
    (p >= value.bits() as usize + GUARD_BITS).then_some(value)
}

/// Exact conversion of a nonnegative integral float.
fn to_biguint(x: &BigFloat) -> Option<BigUint> {
    if x.is_zero() {
        return Some(BigUint::default());
    }
    let (words, _, sign, exponent, _) = x.as_raw_parts()?;
    if sign == Sign::Neg {
        // tiny negative products round to -0 or -1; only -0 is meaningful
        return None;
    }
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    let mantissa = BigUint::from_bytes_le(&bytes);
    let width = (words.len() * Word::BITS as usize) as i64;
    let exponent = i64::from(exponent);
    Some(if exponent >= width {
        mantissa << (exponent - width) as usize
    } else {
        mantissa >> (width - exponent) as usize
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_boards() {
        assert_eq!(kasteleyn(2, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(kasteleyn(3, 4).unwrap(), BigUint::from(11u32));
        assert_eq!(kasteleyn(3, 3).unwrap(), BigUint::from(0u32));
        assert_eq!(kasteleyn(1, 1).unwrap(), BigUint::from(0u32));
        assert_eq!(kasteleyn(1, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(kasteleyn(8, 8).unwrap(), BigUint::from(12_988_816u32));
    }

    #[test]
    fn large_values_are_exact() {
        let seq = crate::counting::grid_sequence(4, 1, crate::counting::Mode::All, 60).unwrap();
        assert_eq!(kasteleyn(4, 60).unwrap(), seq[60]);
    }

    #[test]
    fn ceiling_is_enforced() {
        assert!(matches!(
            kasteleyn_with_ceiling(8, 8, 64),
            Err(Error::PrecisionCeiling { ceiling: 64 })
        ));
    }

    #[test]
    fn integral_floats_convert_exactly() {
        let x = BigFloat::from_word(1 << 40, 128).mul(&BigFloat::from_word(12345, 128), 128, RM);
        assert_eq!(to_biguint(&x).unwrap(), BigUint::from(12345u64 << 40));
        assert_eq!(to_biguint(&BigFloat::from_word(7, 64)).unwrap(), BigUint::from(7u32));
    }
}
