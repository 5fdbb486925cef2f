//! Reciprocity of tiling counts under `n -> -n - 2`, for the counts and for
//! their powers.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use super::{berlekamp_massey, char_poly_recurrence, rationals, Recurrence, TransferMatrix, CHARPOLY_STATE_CAP};
use crate::counting::{grid_sequence, Mode};
use crate::error::{Error, Result};

/// Terms past the fitting window checked by [`power_recurrence_with`].
pub const HELD_OUT_TERMS: usize = 9;

/// `T(m, n, 1)` for `n = 0..len`.
pub fn tiling_sequence(m: usize, len: usize) -> Result<Vec<BigUint>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    grid_sequence(m, 1, Mode::All, len - 1)
}

fn default_length(m: usize) -> usize {
    4 * (1usize << m) + 4
}

fn sign_of(odd: bool) -> i8 {
    if odd {
        -1
    } else {
        1
    }
}

fn signed(sign: i8, x: &BigRational) -> BigRational {
    if sign < 0 {
        -x
    } else {
        x.clone()
    }
}

/// Whether backward values from the characteristic-polynomial recurrence
/// agree with those from the minimal one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackwardAgreement {
    Agree,
    Disagree,
    /// The characteristic polynomial has zero constant term.
    Undefined,
    /// The transfer matrix is above [`CHARPOLY_STATE_CAP`].
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityRow {
    pub n: u32,
    /// `T(m, n, 1)`.
    #[serde(with = "crate::json::integer")]
    pub forward: BigInt,
    /// `T(m, -n-2, 1)` from the backward recurrence.
    #[serde(with = "crate::json::string")]
    pub backward: BigRational,
    /// `(-1)^(l n)` with `l = ceil(m/2)`.
    pub sign: i8,
    /// Sign from the case split: `(-1)^n` when `m = 2 mod 4`, else 1.
    pub case_sign: i8,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub m: usize,
    pub ell: usize,
    pub recurrence: Recurrence,
    pub rows: Vec<ReciprocityRow>,
    /// For odd `m`: every odd `n` gives zero, forward and backward.
    pub odd_zero: Option<bool>,
    pub char_poly: BackwardAgreement,
}

impl ReciprocityReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
            && self.odd_zero != Some(false)
            && self.char_poly != BackwardAgreement::Disagree
    }
}

/// Checks `T(m,n,1) = (-1)^(l n) T(m,-n-2,1)` for `n = 0..=n_max`, with the
/// negative-index values obtained by running the minimal recurrence backward.
pub fn verify_reciprocity(m: usize, n_max: u32) -> Result<ReciprocityReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("rows must be positive".into()));
    }
    let ell = m.div_ceil(2);
    let len = default_length(m).max(n_max as usize + 1);
    let seq = rationals(&tiling_sequence(m, len)?);
    let rec = berlekamp_massey(&seq, 0)?;
    let lowest = -(i64::from(n_max) + 2);
    // index -n-2 sits at position (n_max - n) of `back`
    let back = rec.values(lowest, -1)?;

    let rows: Vec<ReciprocityRow> = (0..=n_max)
        .map(|n| {
            let forward = seq[n as usize].numer().clone();
            let backward = back[(n_max - n) as usize].clone();
            let sign = sign_of(ell % 2 == 1 && n % 2 == 1);
            let case_sign = sign_of(m % 4 == 2 && n % 2 == 1);
            let lhs = BigRational::from_integer(forward.clone());
            let pass = lhs == signed(sign, &backward) && lhs == signed(case_sign, &backward);
            ReciprocityRow { n, forward, backward, sign, case_sign, pass }
        })
        .collect();

    let odd_zero = (m % 2 == 1).then(|| {
        rows.iter()
            .filter(|r| r.n % 2 == 1)
            .all(|r| r.forward.is_zero() && r.backward.is_zero())
    });

    let char_poly = if (1usize << m.min(usize::BITS as usize - 1)) > CHARPOLY_STATE_CAP {
        BackwardAgreement::Skipped
    } else {
        let full = char_poly_recurrence(&TransferMatrix::new(m, 1)?)?;
        if !full.reversible() {
            BackwardAgreement::Undefined
        } else if full.values(lowest, -1)? == back {
            BackwardAgreement::Agree
        } else {
            BackwardAgreement::Disagree
        }
    };

    Ok(ReciprocityReport { m, ell, recurrence: rec, rows, odd_zero, char_poly })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeldOutTerm {
    pub n: usize,
    #[serde(with = "crate::json::string")]
    pub predicted: BigRational,
    #[serde(with = "crate::json::integer")]
    pub actual: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRow {
    pub n: u32,
    /// `T(m, n, 1)^t`.
    #[serde(with = "crate::json::integer")]
    pub forward: BigInt,
    /// Value at `-n-2` of the power recurrence run backward.
    #[serde(with = "crate::json::string")]
    pub backward: BigRational,
    /// `(-1)^(t l n)`.
    pub sign: i8,
    /// `backward` equals the `t`-th power of the base backward value.
    pub matches_base: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerReport {
    pub m: usize,
    pub t: u32,
    pub ell: usize,
    pub base_order: usize,
    /// Number of leading terms the recurrence was fitted on.
    pub fit_len: usize,
    pub recurrence: Recurrence,
    pub held_out: Vec<HeldOutTerm>,
    pub rows: Vec<PowerRow>,
}

impl PowerReport {
    pub fn all_pass(&self) -> bool {
        self.held_out.iter().all(|h| BigRational::from_integer(h.actual.clone()) == h.predicted)
            && self.rows.iter().all(|r| r.pass && r.matches_base)
    }
}

/// Minimal recurrence of `(T(m,n,1)^t)_n` and its reciprocity check, with the
/// default fitting length.
pub fn power_recurrence(m: usize, t: u32, n_max: u32) -> Result<PowerReport> {
    power_recurrence_with(m, t, n_max, None)
}

/// As [`power_recurrence`], fitting on the first `fit_len` terms when given.
///
/// The default length is `4 B + 4` with `B = C(r + t - 1, t)`, the number of
/// degree-`t` monomials in the `r` roots of the base recurrence, which bounds
/// the order of the power sequence.
pub fn power_recurrence_with(m: usize, t: u32, n_max: u32, fit_len: Option<usize>) -> Result<PowerReport> {
    if m == 0 || t == 0 {
        return Err(Error::InvalidParameter("rows and power must be positive".into()));
    }
    let ell = m.div_ceil(2);
    let base_len = default_length(m).max(n_max as usize + 1);
    let base_seq = rationals(&tiling_sequence(m, base_len)?);
    let base = berlekamp_massey(&base_seq, 0)?;
    let base_order = base.order();
    let bound: BigUint = binomial(BigUint::from(base_order + t as usize - 1), BigUint::from(t));
    let default_fit = usize::try_from(bound)
        .ok()
        .and_then(|b| b.checked_mul(4))
        .map(|b| b + 4)
        .ok_or_else(|| Error::InvalidParameter("power sequence too long to fit".into()))?;
    let fit_len = fit_len.unwrap_or(default_fit);

    let total = fit_len + HELD_OUT_TERMS;
    let powers: Vec<BigInt> = tiling_sequence(m, total.max(n_max as usize + 1))?
        .into_iter()
        .map(|x| BigInt::from(x).pow(t))
        .collect();
    let rec = berlekamp_massey(&rationals(&powers[..fit_len]), 0)?;

    let predicted = rec.values(fit_len as i64, (total - 1) as i64)?;
    let held_out = predicted
        .into_iter()
        .enumerate()
        .map(|(i, p)| HeldOutTerm { n: fit_len + i, predicted: p, actual: powers[fit_len + i].clone() })
        .collect();

    let lowest = -(i64::from(n_max) + 2);
    let back = rec.values(lowest, -1)?;
    let base_back = base.values(lowest, -1)?;
    let rows = (0..=n_max)
        .map(|n| {
            let forward = powers[n as usize].clone();
            let backward = back[(n_max - n) as usize].clone();
            let sign = sign_of((t as usize * ell * n as usize) % 2 == 1);
            let matches_base = backward == base_back[(n_max - n) as usize].clone().pow(t as i32);
            let pass = BigRational::from_integer(forward.clone()) == signed(sign, &backward);
            PowerRow { n, forward, backward, sign, matches_base, pass }
        })
        .collect();

    Ok(PowerReport { m, t, ell, base_order, fit_len, recurrence: rec, held_out, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn two_rows() {
        let rep = verify_reciprocity(2, 5).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.rows.len(), 6);
        assert_eq!(rep.rows[1].backward, r(-1));
        assert_eq!(rep.rows[1].sign, -1);
        assert_eq!(rep.recurrence.to_string(), "a(n) = a(n-1) + a(n-2)");
    }

    #[test]
    fn three_rows() {
        let rep = verify_reciprocity(3, 6).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.recurrence.to_string(), "a(n) = 4*a(n-2) - a(n-4)");
        assert_eq!(rep.rows[2].backward, r(3));
        assert_eq!(rep.odd_zero, Some(true));
        assert_eq!(rep.rows[2].case_sign, 1);
    }

    #[test]
    fn four_rows_have_no_sign() {
        let rep = verify_reciprocity(4, 8).unwrap();
        assert!(rep.all_pass());
        assert!(rep.rows.iter().all(|r| r.sign == 1));
    }

    #[test]
    fn squares_of_two_rows() {
        let rep = power_recurrence(2, 2, 8).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.recurrence.to_string(), "a(n) = 2*a(n-1) + 2*a(n-2) - a(n-3)");
        let base = power_recurrence(2, 1, 4).unwrap();
        assert_eq!(base.recurrence.order(), 2);
    }

    #[test]
    fn explicit_fit_window() {
        let rep = power_recurrence_with(2, 2, 8, Some(12)).unwrap();
        assert_eq!(rep.held_out.first().unwrap().n, 12);
        assert_eq!(rep.held_out.last().unwrap().n, 20);
        assert!(rep.all_pass());
    }
}
