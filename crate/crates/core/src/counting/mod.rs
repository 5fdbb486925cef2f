//! Exact counts `T(m, n, t)` of magic labellings, all or interior only.
//!
//! Grids go through the column-profile sweep in [`profile`]; any bipartite
//! graph (tori included) can go through the depth-first [`search`], which also
//! serves as an independent check of the sweep.

mod profile;
mod search;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Topology};
use crate::labelling::MagicLabelling;

pub(crate) use profile::{for_each_successor, ProfileSpace};

/// Default cap on [`enumerate`].
pub const DEFAULT_ENUMERATE_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every magic labelling.
    All,
    /// Labellings with every edge label at least 1.
    Interior,
}

impl Mode {
    fn lower_bound(self) -> u32 {
        match self {
            Mode::All => 0,
            Mode::Interior => 1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::All => "all",
            Mode::Interior => "interior",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Mode::All),
            "interior" => Ok(Mode::Interior),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    #[serde(with = "crate::json::integer")]
    pub value: BigUint,
    pub mode: Mode,
    pub rows: usize,
    pub cols: usize,
    pub sum: u32,
    pub topology: Topology,
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `T(rows, n, t)` for `n = 0..=n_max` with `rows` fixed, from a single sweep
/// whose profiles have length `rows`.
pub fn grid_sequence(rows: usize, t: u32, mode: Mode, n_max: usize) -> Result<Vec<BigUint>> {
    if rows == 0 {
        return Err(Error::InvalidParameter("rows must be positive".into()));
    }
    let lo = mode.lower_bound();
    let space = ProfileSpace { rows, t };
    if space.size() > u128::from(u64::MAX) {
        return Err(Error::StateCap { states: space.size(), cap: u64::MAX as usize });
    }
    Ok(profile::sweep_exact(
        space,
        profile::Bounds { vertical: lo, horizontal: lo },
        n_max,
    ))
}

/// Same as [`grid_sequence`] but for a single board, sweeping along the longer
/// side so profiles stay short.
fn grid_count(rows: usize, cols: usize, t: u32, mode: Mode) -> Result<BigUint> {
    let (short, long) = if rows <= cols { (rows, cols) } else { (cols, rows) };
    Ok(grid_sequence(short, t, mode, long)?.pop().expect("sequence is nonempty"))
}

/// Number of magic labellings of sum `t` of the `rows x cols` grid.
pub fn count_grid(rows: usize, cols: usize, t: u32, mode: Mode) -> Result<CountResult> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid dimensions must be positive, got {rows}x{cols}"
        )));
    }
    Ok(CountResult {
        value: grid_count(rows, cols, t, mode)?,
        mode,
        rows,
        cols,
        sum: t,
        topology: Topology::Grid,
    })
}

/// Number of magic labellings of any bipartite graph by exhaustive search.
pub fn count_generic(g: &Graph, t: u32, mode: Mode) -> Result<CountResult> {
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let mut count: u128 = 0;
    search::Search::new(g, t, mode.lower_bound()).run(&mut |_| {
        count += 1;
        true
    });
    Ok(CountResult {
        value: BigUint::from(count),
        mode,
        rows: g.rows(),
        cols: g.cols(),
        sum: t,
        topology: g.topology(),
    })
}

/// Counts through the sweep for grids and the search for tori.
pub fn count(g: &Graph, t: u32, mode: Mode) -> Result<BigUint> {
    match g.topology() {
        Topology::Grid => grid_count(g.rows(), g.cols(), t, mode),
        Topology::Torus => Ok(count_generic(g, t, mode)?.value),
    }
}

/// Every magic labelling of sum `t`, sorted lexicographically by label vector.
///
/// Fails with [`Error::CapExceeded`] once more than `limit` are found.
pub fn enumerate(g: &Arc<Graph>, t: u32, mode: Mode, limit: usize) -> Result<Vec<MagicLabelling>> {
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut over = false;
    search::Search::new(g, t, mode.lower_bound()).run(&mut |labels| {
        if found.len() == limit {
            over = true;
            return false;
        }
        found.push(labels.to_vec());
        true
    });
    if over {
        return Err(Error::CapExceeded { limit, found: found.len() + 1 });
    }
    found.sort_unstable();
    found
        .into_iter()
        .map(|labels| MagicLabelling::new(g.clone(), t, labels))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelling::{gorenstein_witness, WitnessCase};

    fn grid(m: usize, n: usize, t: u32, mode: Mode) -> u64 {
        count_grid(m, n, t, mode).unwrap().value.try_into().unwrap()
    }

    #[test]
    fn three_by_four_small_dilates() {
        assert_eq!(grid(3, 4, 0, Mode::All), 1);
        assert_eq!(grid(3, 4, 1, Mode::All), 11);
        assert_eq!(grid(3, 4, 2, Mode::All), 57);
        assert_eq!(grid(3, 4, 4, Mode::Interior), 0);
        assert_eq!(grid(3, 4, 5, Mode::Interior), 1);
    }

    #[test]
    fn two_by_n_has_a_single_interior_point_at_three() {
        for n in 3..=9 {
            assert_eq!(grid(2, n, 3, Mode::Interior), 1, "n={n}");
            assert_eq!(grid(2, n, 2, Mode::Interior), 0, "n={n}");
        }
    }

    #[test]
    fn odd_boards_only_have_the_zero_labelling() {
        for t in 1..=4 {
            assert_eq!(grid(1, 3, t, Mode::All), 0);
            assert_eq!(grid(3, 5, t, Mode::All), 0);
        }
        assert_eq!(grid(3, 5, 0, Mode::All), 1);
        assert_eq!(grid(1, 1, 0, Mode::All), 1);
        assert_eq!(grid(1, 1, 2, Mode::All), 0);
    }

    #[test]
    fn zero_sum_interior() {
        assert_eq!(grid(2, 3, 0, Mode::Interior), 0);
        assert_eq!(grid(2, 3, 0, Mode::All), 1);
    }

    #[test]
    fn fibonacci_row() {
        let seq = grid_sequence(2, 1, Mode::All, 10).unwrap();
        let want = [1u32, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        assert_eq!(seq, want.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>());
    }

    #[test]
    fn generic_torus_counts() {
        let g = Graph::torus(4, 4).unwrap();
        assert!(count_generic(&g, 4, Mode::Interior).unwrap().value >= BigUint::from(1u32));
        assert!(matches!(
            count_generic(&Graph::torus(2, 3).unwrap(), 1, Mode::All),
            Err(Error::NotBipartite)
        ));
    }

    #[test]
    fn generic_agrees_with_sweep_on_a_grid() {
        let g = Graph::grid(3, 4).unwrap();
        assert_eq!(
            count_generic(&g, 3, Mode::All).unwrap().value,
            count_grid(3, 4, 3, Mode::All).unwrap().value
        );
    }

    #[test]
    fn enumerate_small_cases() {
        let g = Arc::new(Graph::grid(2, 2).unwrap());
        let all = enumerate(&g, 1, Mode::All, 10).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all[0].labels() < all[1].labels());

        let g = Arc::new(Graph::grid(3, 6).unwrap());
        let interior = enumerate(&g, 5, Mode::Interior, 10).unwrap();
        assert_eq!(interior, vec![gorenstein_witness(WitnessCase::ThreeByN5, 3, 6).unwrap()]);

        let g = Arc::new(Graph::grid(4, 4).unwrap());
        let interior = enumerate(&g, 4, Mode::Interior, 10).unwrap();
        assert_eq!(interior, vec![gorenstein_witness(WitnessCase::FourByFour4, 4, 4).unwrap()]);
    }

    #[test]
    fn enumerate_cap() {
        let g = Arc::new(Graph::grid(3, 4).unwrap());
        match enumerate(&g, 2, Mode::All, 10) {
            Err(Error::CapExceeded { limit: 10, found: 11 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("interior".parse::<Mode>().unwrap(), Mode::Interior);
        assert!("inner".parse::<Mode>().is_err());
    }
}
