//! Berlekamp-Massey over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Recurrence;
use crate::error::{Error, Result};

/// Shortest linear recurrence generating `seq` as `c_1..c_L` for
/// `a(n) = sum c_i a(n-i)`; empty for the all-zero sequence.
fn shortest(seq: &[BigRational]) -> Vec<BigRational> {
    // connection polynomial C(x) = 1 - c_1 x - ... - c_L x^L
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last_d = BigRational::one();
    for n in 0..seq.len() {
        let d: BigRational = (0..=len)
            .filter(|&i| i < c.len() && i <= n)
            .map(|i| &c[i] * &seq[n - i])
            .sum();
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &d / &last_d;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] -= &factor * bi;
        }
        if 2 * len <= n {
            b = std::mem::replace(&mut c, next);
            len = n + 1 - len;
            last_d = d;
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    c.resize(len + 1, BigRational::zero());
    c[1..].iter().map(|x| -x).collect()
}

/// Minimal recurrence fitting every term of `seq` (indexed from `start`).
///
/// The result is only accepted when `seq` has at least `2L + 2` terms for the
/// order `L` found, and when a re-run on the first 75% of the terms predicts
/// the remaining 25% exactly.
pub fn berlekamp_massey(seq: &[BigRational], start: i64) -> Result<Recurrence> {
    let coeffs = shortest(seq);
    let len = seq.len();
    if len < 2 * coeffs.len() + 2 {
        return Err(Error::InconsistentSequence {
            len,
            max_order: len.saturating_sub(2) / 2,
        });
    }
    let rec = to_recurrence(coeffs, seq, start);

    let prefix = (3 * len).div_ceil(4);
    let early = to_recurrence(shortest(&seq[..prefix]), seq, start);
    if early.first_mismatch(seq, start)?.is_some() {
        return Err(Error::InconsistentSequence {
            len,
            max_order: prefix.saturating_sub(2) / 2,
        });
    }
    debug_assert!(rec.first_mismatch(seq, start)?.is_none());
    Ok(rec)
}

fn to_recurrence(coeffs: Vec<BigRational>, seq: &[BigRational], start: i64) -> Recurrence {
    // the zero sequence satisfies a(n) = 0 * a(n-1)
    let coeffs = if coeffs.is_empty() { vec![BigRational::zero()] } else { coeffs };
    let seed = seq[..coeffs.len()].to_vec();
    Recurrence::new(coeffs, seed, start).expect("shape is consistent")
}
