//! Transfer matrix on column profiles and its characteristic polynomial.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::Recurrence;
use crate::counting::{for_each_successor, ProfileSpace};
use crate::error::{Error, Result};

/// Default cap on the number of profiles of a transfer matrix.
pub const DEFAULT_STATE_CAP: usize = 100_000;

/// Largest state count for which the characteristic polynomial is computed.
/// The division-free method costs about `N^2` sparse products of size `N`.
pub const CHARPOLY_STATE_CAP: usize = 256;

/// 0/1 adjacency between profiles, stored as sorted successor lists. States
/// are numbered by their base-`(t+1)` value, so state 0 is the zero profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    rows: usize,
    t: u32,
    successors: Vec<Vec<u32>>,
}

impl TransferMatrix {
    pub fn new(rows: usize, t: u32) -> Result<Self> {
        Self::with_cap(rows, t, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(rows: usize, t: u32, cap: usize) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidParameter("rows must be positive".into()));
        }
        let space = ProfileSpace { rows, t };
        let states = space.size();
        if states > cap as u128 {
            return Err(Error::StateCap { states, cap });
        }
        let mut digits = vec![0u32; rows];
        let successors = (0..states as u64)
            .map(|code| {
                space.decode(code, &mut digits);
                let mut next = Vec::new();
                for_each_successor(&digits, t, 0, 0, |w| next.push(w as u32));
                next.sort_unstable();
                next
            })
            .collect();
        Ok(TransferMatrix { rows, t, successors })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn sum(&self) -> u32 {
        self.t
    }

    pub fn states(&self) -> usize {
        self.successors.len()
    }

    /// State number of a profile (entry 0 most significant).
    pub fn state_of(&self, profile: &[u32]) -> usize {
        ProfileSpace { rows: self.rows, t: self.t }.encode(profile) as usize
    }

    pub fn profile_of(&self, state: usize) -> Vec<u32> {
        let mut digits = vec![0; self.rows];
        ProfileSpace { rows: self.rows, t: self.t }.decode(state as u64, &mut digits);
        digits
    }

    pub fn successors(&self, state: usize) -> &[u32] {
        &self.successors[state]
    }

    pub fn entry(&self, u: usize, w: usize) -> bool {
        self.successors[u].binary_search(&(w as u32)).is_ok()
    }

    pub fn transitions(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.states())
            .map(|u| (0..self.states()).map(|w| u8::from(self.entry(u, w))).collect())
            .collect()
    }

    /// `(A^n)_{0,0}` for `n = 0..=n_max`.
    pub fn closed_walks(&self, n_max: usize) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.states()];
        v[0] = BigUint::from(1u32);
        let mut out = vec![v[0].clone()];
        for _ in 0..n_max {
            let mut next = vec![BigUint::zero(); self.states()];
            for (u, count) in v.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for &w in &self.successors[u] {
                    next[w as usize] += count;
                }
            }
            v = next;
            out.push(v[0].clone());
        }
        out
    }
}

/// Characteristic polynomial `det(xI - A)` as `[1, p_1, ..., p_N]` (highest
/// degree first), by Berkowitz's division-free algorithm.
pub fn characteristic_polynomial(a: &TransferMatrix) -> Result<Vec<BigInt>> {
    let n = a.states();
    if n > CHARPOLY_STATE_CAP {
        return Err(Error::StateCap { states: n as u128, cap: CHARPOLY_STATE_CAP });
    }
    let entry = |u: usize, w: usize| -> BigInt { BigInt::from(u8::from(a.entry(u, w))) };

    let mut poly = vec![BigInt::from(1)];
    for k in 0..n {
        // Leading k x k block B, column c = A[0..k][k], row r = A[k][0..k].
        // Toeplitz column: 1, -a_kk, -r c, -r B c, ..., -r B^{k-1} c.
        let mut column = vec![BigInt::from(1), -entry(k, k)];
        let mut v: Vec<BigInt> = (0..k).map(|i| entry(i, k)).collect();
        for _ in 0..k {
            let rv: BigInt = a.successors[k]
                .iter()
                .take_while(|&&w| (w as usize) < k)
                .map(|&w| &v[w as usize])
                .sum();
            column.push(-rv);
            let mut next = vec![BigInt::zero(); k];
            for (i, slot) in next.iter_mut().enumerate() {
                for &w in a.successors[i].iter().take_while(|&&w| (w as usize) < k) {
                    *slot += &v[w as usize];
                }
            }
            v = next;
        }
        // poly_{k+1} = T * poly_k, T lower-triangular Toeplitz (k+2) x (k+1)
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, p) in poly.iter().enumerate() {
                if i >= j && !column[i - j].is_zero() {
                    *slot += &column[i - j] * p;
                }
            }
        }
        poly = next;
    }
    Ok(poly)
}

/// Recurrence of order `N = (t+1)^m` read off the characteristic polynomial,
/// seeded with `(A^n)_{0,0}` for `n < N` and checked on the next six terms.
pub fn char_poly_recurrence(a: &TransferMatrix) -> Result<Recurrence> {
    let p = characteristic_polynomial(a)?;
    let n = a.states();
    let coeffs: Vec<BigRational> = p[1..].iter().map(|x| BigRational::from_integer(-x)).collect();
    let walks = a.closed_walks(n + 5);
    let seq = super::rationals(&walks);
    let rec = Recurrence::new(coeffs, seq[..n].to_vec(), 0)?;
    if let Some(index) = rec.first_mismatch(&seq, 0)? {
        return Err(Error::Reproduction { index });
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_grid, Mode};

    #[test]
    fn single_row() {
        let a = TransferMatrix::new(1, 1).unwrap();
        assert_eq!(a.to_dense(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(a.state_of(&[1]), 1);
        assert_eq!(a.profile_of(1), vec![1]);
        let walks = a.closed_walks(5);
        let want: Vec<BigUint> = [1u32, 0, 1, 0, 1, 0].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(walks, want);
        assert_eq!(
            characteristic_polynomial(&a).unwrap(),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(-1)]
        );
        assert_eq!(char_poly_recurrence(&a).unwrap().to_string(), "a(n) = a(n-2)");
    }

    #[test]
    fn walks_match_the_sweep() {
        for m in 1..=2 {
            for t in 0..=2 {
                let a = TransferMatrix::new(m, t).unwrap();
                assert_eq!(a.states(), (t as usize + 1).pow(m as u32));
                let walks = a.closed_walks(6);
                for (n, w) in walks.iter().enumerate().skip(1) {
                    assert_eq!(w, &count_grid(m, n, t, Mode::All).unwrap().value, "m={m} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn two_rows_order_four() {
        let a = TransferMatrix::new(2, 1).unwrap();
        let rec = char_poly_recurrence(&a).unwrap();
        assert_eq!(rec.order(), 4);
    }

    /// Cofactor expansion of det(xI - A) evaluated at small integers.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        for (m, t) in [(2, 1), (1, 3), (3, 1)] {
            let a = TransferMatrix::new(m, t).unwrap();
            let p = characteristic_polynomial(&a).unwrap();
            let dense = a.to_dense();
            for x in -2i64..=2 {
                let shifted: Vec<Vec<BigInt>> = dense
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, &e)| BigInt::from(if i == j { x } else { 0 } - i64::from(e)))
                            .collect()
                    })
                    .collect();
                let value = p.iter().fold(BigInt::zero(), |acc, c| acc * x + c);
                assert_eq!(value, det(&shifted), "m={m} t={t} x={x}");
            }
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(TransferMatrix::with_cap(3, 9, 999), Err(Error::StateCap { states: 1000, cap: 999 })));
        let big = TransferMatrix::new(3, 9).unwrap();
        assert!(matches!(characteristic_polynomial(&big), Err(Error::StateCap { .. })));
    }
}
