//! Column-by-column counting over boundary profiles.
//!
//! A profile is the vector of the `m` horizontal labels crossing a column
//! boundary. Given the profile `u` entering a column and `w` leaving it, the
//! vertical labels of the column are forced top to bottom: `p_0 = 0`,
//! `p_{j+1} = t - u_j - w_j - p_j`, and the pair is compatible iff every
//! interior `p_j` is at least the lower bound and `p_m = 0`.
//!
//! Profiles are coded as base-`(t+1)` numbers with entry 0 most significant,
//! so the zero profile has code 0.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Above this many possible profiles the counts are kept in a hash map
/// instead of a dense vector.
const DENSE_LIMIT: u128 = 1 << 22;

/// Below this many live profiles a column step runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 2048;

/// Exact counter cell. `u128` is tried first and the sweep is redone with
/// `BigUint` if it overflows.
pub(crate) trait Accumulator: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Adds `other` in place; false on overflow.
    fn try_add(&mut self, other: &Self) -> bool;
    fn into_big(self) -> BigUint;
}

impl Accumulator for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn try_add(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Accumulator for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_add(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Shape of the profile space for `rows` rows and sum `t`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ProfileSpace {
    pub rows: usize,
    pub t: u32,
}

impl ProfileSpace {
    pub fn base(&self) -> u64 {
        u64::from(self.t) + 1
    }

    /// `(t+1)^rows`, saturating well above any usable size.
    pub fn size(&self) -> u128 {
        let base = u128::from(self.base());
        let mut n: u128 = 1;
        for _ in 0..self.rows {
            n = n.saturating_mul(base);
            if n > u128::from(u64::MAX) {
                return n;
            }
        }
        n
    }

    pub fn decode(&self, mut code: u64, digits: &mut [u32]) {
        let base = self.base();
        for d in digits.iter_mut().rev() {
            *d = (code % base) as u32;
            code /= base;
        }
    }

    pub fn encode(&self, digits: &[u32]) -> u64 {
        digits.iter().fold(0, |acc, &d| acc * self.base() + u64::from(d))
    }
}

/// Calls `f` with the code of every profile that may follow `u`.
///
/// `lo_vertical` bounds the forced vertical labels, `lo_horizontal` the entries
/// of the outgoing profile.
pub(crate) fn for_each_successor(
    u: &[u32],
    t: u32,
    lo_vertical: u32,
    lo_horizontal: u32,
    mut f: impl FnMut(u64),
) {
    fn rec(
        u: &[u32],
        j: usize,
        above: i64,
        code: u64,
        ctx: (i64, i64, i64, u64),
        f: &mut impl FnMut(u64),
    ) {
        let (t, lo_v, lo_h, base) = ctx;
        let avail = t - i64::from(u[j]) - above;
        if j + 1 == u.len() {
            if avail >= lo_h {
                f(code * base + avail as u64);
            }
            return;
        }
        // below = avail - w must be a legal vertical label and leave the next
        // vertex room for its own outgoing label.
        let room_below = t - i64::from(u[j + 1]) - lo_h;
        let w_min = lo_h.max(avail - room_below);
        let w_max = avail - lo_v;
        for w in w_min..=w_max {
            rec(u, j + 1, avail - w, code * base + w as u64, ctx, f);
        }
    }

    if u.is_empty() {
        return;
    }
    let ctx = (
        i64::from(t),
        i64::from(lo_vertical),
        i64::from(lo_horizontal),
        u64::from(t) + 1,
    );
    rec(u, 0, 0, 0, ctx, &mut f);
}

/// Whether the column entered by `u` can be closed by the zero profile.
pub(crate) fn closes(u: &[u32], t: u32, lo_vertical: u32) -> bool {
    let t = i64::from(t);
    let mut above = 0i64;
    for (j, &x) in u.iter().enumerate() {
        let below = t - i64::from(x) - above;
        if j + 1 == u.len() {
            return below == 0;
        }
        if below < i64::from(lo_vertical) {
            return false;
        }
        above = below;
    }
    true
}

enum Store<A> {
    Dense(Vec<A>),
    Sparse(HashMap<u64, A>),
}

impl<A: Accumulator> Store<A> {
    fn new(space: &ProfileSpace) -> Self {
        let size = space.size();
        if size <= DENSE_LIMIT {
            Store::Dense(vec![A::zero(); size as usize])
        } else {
            Store::Sparse(HashMap::new())
        }
    }

    fn add(&mut self, code: u64, value: &A) -> bool {
        match self {
            Store::Dense(v) => v[code as usize].try_add(value),
            Store::Sparse(map) => map.entry(code).or_insert_with(A::zero).try_add(value),
        }
    }

    fn merge(mut self, other: Self) -> Option<Self> {
        for (code, value) in other.into_entries() {
            if !self.add(code, &value) {
                return None;
            }
        }
        Some(self)
    }

    fn into_entries(self) -> Vec<(u64, A)> {
        match self {
            Store::Dense(v) => v
                .into_iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| (i as u64, a))
                .collect(),
            Store::Sparse(map) => {
                let mut entries: Vec<_> = map.into_iter().filter(|(_, a)| !a.is_zero()).collect();
                entries.sort_unstable_by_key(|(code, _)| *code);
                entries
            }
        }
    }
}

/// Lower bounds used by a sweep.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bounds {
    pub vertical: u32,
    pub horizontal: u32,
}

fn step<A: Accumulator>(
    entries: &[(u64, A)],
    space: &ProfileSpace,
    bounds: Bounds,
    parallel: bool,
) -> Option<Vec<(u64, A)>> {
    let work = |chunk: &[(u64, A)]| -> Option<Store<A>> {
        let mut out = Store::new(space);
        let mut digits = vec![0u32; space.rows];
        let mut ok = true;
        for (code, count) in chunk {
            space.decode(*code, &mut digits);
            for_each_successor(&digits, space.t, bounds.vertical, bounds.horizontal, |w| {
                ok &= out.add(w, count);
            });
            if !ok {
                return None;
            }
        }
        Some(out)
    };

    let store = if parallel && entries.len() >= PARALLEL_THRESHOLD {
        let chunk = entries.len().div_ceil(4 * rayon::current_num_threads()).max(256);
        entries
            .par_chunks(chunk)
            .map(work)
            .reduce(
                || Some(Store::new(space)),
                |a, b| match (a, b) {
                    (Some(a), Some(b)) => a.merge(b),
                    _ => None,
                },
            )?
    } else {
        work(entries)?
    };
    Some(store.into_entries())
}

/// `T(rows, n, t)` for `n = 0..=n_max`, or `None` if `A` overflowed.
pub(crate) fn sweep<A: Accumulator>(
    space: ProfileSpace,
    bounds: Bounds,
    n_max: usize,
    parallel: bool,
) -> Option<Vec<A>> {
    let mut out = vec![A::one()];
    let mut entries = vec![(0u64, A::one())];
    let mut digits = vec![0u32; space.rows];
    for n in 1..=n_max {
        let mut closed = A::zero();
        for (code, count) in &entries {
            space.decode(*code, &mut digits);
            if closes(&digits, space.t, bounds.vertical) && !closed.try_add(count) {
                return None;
            }
        }
        out.push(closed);
        if n < n_max {
            entries = step(&entries, &space, bounds, parallel)?;
        }
    }
    Some(out)
}

/// Runs [`sweep`] in `u128`, falling back to `BigUint` on overflow.
pub(crate) fn sweep_exact(space: ProfileSpace, bounds: Bounds, n_max: usize) -> Vec<BigUint> {
    match sweep::<u128>(space, bounds, n_max, true) {
        Some(v) => v.into_iter().map(Accumulator::into_big).collect(),
        None => sweep::<BigUint>(space, bounds, n_max, true).expect("BigUint never overflows"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn successors(u: &[u32], t: u32, lo_v: u32, lo_h: u32) -> Vec<Vec<u32>> {
        let space = ProfileSpace { rows: u.len(), t };
        let mut out = Vec::new();
        for_each_successor(u, t, lo_v, lo_h, |code| {
            let mut d = vec![0; u.len()];
            space.decode(code, &mut d);
            out.push(d);
        });
        out
    }

    /// Direct check of the telescoping rule for a pair of profiles.
    fn compatible(u: &[u32], w: &[u32], t: u32, lo_v: u32) -> bool {
        let mut above = 0i64;
        for j in 0..u.len() {
            let below = i64::from(t) - i64::from(u[j]) - i64::from(w[j]) - above;
            if j + 1 == u.len() {
                return below == 0;
            }
            if below < i64::from(lo_v) {
                return false;
            }
            above = below;
        }
        unreachable!()
    }

    #[test]
    fn pruned_generation_matches_exhaustive_pairs() {
        for rows in 1..=3usize {
            for t in 0..=3u32 {
                for (lo_v, lo_h) in [(0, 0), (1, 1), (1, 0)] {
                    let space = ProfileSpace { rows, t };
                    let mut digits = vec![0; rows];
                    let mut w = vec![0; rows];
                    for code in 0..space.size() as u64 {
                        space.decode(code, &mut digits);
                        let mut got = successors(&digits, t, lo_v, lo_h);
                        got.sort();
                        let mut want = Vec::new();
                        for wc in 0..space.size() as u64 {
                            space.decode(wc, &mut w);
                            if w.iter().all(|&x| x >= lo_h) && compatible(&digits, &w, t, lo_v) {
                                want.push(w.clone());
                            }
                        }
                        assert_eq!(got, want, "rows={rows} t={t} u={digits:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn encode_decode() {
        let space = ProfileSpace { rows: 3, t: 4 };
        let mut d = [0; 3];
        space.decode(space.encode(&[1, 4, 2]), &mut d);
        assert_eq!(d, [1, 4, 2]);
        assert_eq!(space.encode(&[0, 0, 1]), 1);
        assert_eq!(space.encode(&[1, 0, 0]), 25);
    }

    #[test]
    fn bigint_fallback_agrees_with_u128() {
        let space = ProfileSpace { rows: 3, t: 2 };
        let bounds = Bounds { vertical: 0, horizontal: 0 };
        let small = sweep::<u128>(space, bounds, 12, false).unwrap();
        let big = sweep::<BigUint>(space, bounds, 12, true).unwrap();
        assert_eq!(small.into_iter().map(BigUint::from).collect::<Vec<_>>(), big);
    }

    #[test]
    fn overflow_is_detected() {
        // T(2,n,1) is a Fibonacci number; F(190) > 2^128.
        let space = ProfileSpace { rows: 2, t: 1 };
        let bounds = Bounds { vertical: 0, horizontal: 0 };
        assert!(sweep::<u128>(space, bounds, 200, false).is_none());
        let exact = sweep_exact(space, bounds, 200);
        assert_eq!(&exact[198] + &exact[199], exact[200]);
    }

    #[test]
    fn sparse_and_dense_stores_agree() {
        let space = ProfileSpace { rows: 2, t: 3 };
        let mut dense: Store<u128> = Store::Dense(vec![0; 16]);
        let mut sparse: Store<u128> = Store::Sparse(HashMap::new());
        for (code, v) in [(3u64, 2u128), (7, 1), (3, 5)] {
            assert!(dense.add(code, &v));
            assert!(sparse.add(code, &v));
        }
        assert_eq!(dense.into_entries(), sparse.into_entries());
        assert_eq!(space.size(), 16);
    }
}
