//! The acceptance suite: fifteen end-to-end checks with fixed time budgets.
//!
//! Each check returns a one-line summary on success or a reason on failure.
//! A check also fails when it runs past its budget. The h-vector transform is
//! taken from [`Hooks`] so that tests can substitute a broken one and watch
//! the dependent checks fail.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::counting::{count_grid, enumerate, grid_sequence, Mode};
use crate::decompose::decompose;
use crate::ehrhart::{
    self, dimension, ehrhart_polynomial, ehrhart_polynomial_with, gorenstein_check, is_unimodal,
    EhrhartData, GorensteinMode, HVectorFn,
};
use crate::graph::{Graph, Topology};
use crate::labelling::{check_column_differences, gorenstein_witness, MagicLabelling, WitnessCase};
use crate::recurrence::{
    char_poly_recurrence, kasteleyn, power_recurrence, power_recurrence_with, rationals,
    verify_reciprocity, TransferMatrix,
};

type Check = fn(&Hooks) -> Result<String, String>;

/// Replaceable pieces of the pipeline.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub h_vector: HVectorFn,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { h_vector: ehrhart::h_vector }
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    check: Check,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    /// `PASS  3 name: detail`, optionally followed by the timing.
    pub fn line(&self, timings: bool) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {:>2} {}: {}", self.id, self.name, self.detail);
        if timings {
            s.push_str(&format!(
                " [{:.2}s of {}s]",
                self.elapsed.as_secs_f64(),
                self.budget.as_secs()
            ));
        }
        s
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, budget, check| Criterion { id, name, budget, check };
    vec![
        c(1, "ehrhart polynomial of grid(3,4)", secs(5), ehrhart_three_by_four as Check),
        c(2, "h-vector of grid(4,5)", secs(600), hvector_four_by_five),
        c(3, "gorenstein catalog", secs(900), gorenstein_catalog),
        c(4, "unique interior points", secs(60), unique_interior_points),
        c(5, "non-gorenstein evidence", secs(60), non_gorenstein_evidence),
        c(6, "closed form for tilings", secs(30), closed_form),
        c(7, "tiling reciprocity", secs(60), tiling_reciprocity),
        c(8, "transfer matrix", secs(30), transfer_matrix),
        c(9, "power sequences", secs(30), power_sequences),
        c(10, "decomposition round trip", secs(120), decomposition_round_trip),
        c(11, "torus gorenstein", secs(600), torus_gorenstein),
        c(12, "dimension formulas", secs(120), dimension_formulas),
        c(13, "column identities on 3 x n", secs(60), column_identities),
        c(14, "ehrhart reciprocity", secs(60), ehrhart_reciprocity),
        c(15, "unimodal h-vectors", secs(900), unimodal_h_vectors),
    ]
}

pub fn run_criterion(c: &Criterion, hooks: &Hooks) -> Outcome {
    let start = Instant::now();
    let result = (c.check)(hooks);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e),
    };
    if passed && elapsed > c.budget {
        passed = false;
        detail = format!("over budget: {detail}");
    }
    Outcome { id: c.id, name: c.name, passed, detail, elapsed, budget: c.budget }
}

/// Runs the selected criteria (all when `only` is empty) in order.
pub fn run(hooks: &Hooks, only: &[u32]) -> Vec<Outcome> {
    criteria()
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(|c| run_criterion(c, hooks))
        .collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(h: &[BigInt]) -> String {
    let parts: Vec<String> = h.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn polynomial_product(factors: &[Vec<i64>]) -> Vec<BigInt> {
    factors.iter().fold(vec![BigInt::one()], |acc, f| {
        let mut out = vec![BigInt::zero(); acc.len() + f.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, &b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    })
}

fn ehrhart_three_by_four(hooks: &Hooks) -> Result<String, String> {
    let e = ehrhart_polynomial_with(3, 4, Topology::Grid, hooks.h_vector).map_err(err)?;
    // (t+1)(t+2)(t+3)(t+4)(t^2+5t+5) / 120, constant term first
    let numer = polynomial_product(&[vec![1, 1], vec![2, 1], vec![3, 1], vec![4, 1], vec![5, 5, 1]]);
    let want: Vec<BigRational> = numer
        .into_iter()
        .map(|c| BigRational::new(c, BigInt::from(120)))
        .collect();
    ensure(e.polynomial.coeffs() == want.as_slice(), || {
        format!("polynomial {} differs from the factored form", e.polynomial)
    })?;
    ensure(e.h_vector == ints(&[1, 4, 1]), || format!("h = {}", show(&e.h_vector)))?;
    Ok(format!("h = {}, {}", show(&e.h_vector), e.series()))
}

fn hvector_four_by_five(hooks: &Hooks) -> Result<String, String> {
    let e = ehrhart_polynomial_with(4, 5, Topology::Grid, hooks.h_vector).map_err(err)?;
    let want = ints(&[1, 82, 1339, 7356, 16432, 15578, 5919, 760, 21]);
    ensure(e.dimension == 12, || format!("dimension {}", e.dimension))?;
    ensure(e.h_vector == want, || format!("h = {}", show(&e.h_vector)))?;
    Ok(format!("h = {}", show(&e.h_vector)))
}

/// Expected Gorenstein index on the catalog, `Some(1)` for points, `None`
/// when not Gorenstein.
fn expected_index(m: usize, n: usize) -> Option<u32> {
    match (m, n) {
        (1, _) => Some(1),
        (2, 2) => Some(2),
        (2, _) => Some(3),
        (3, _) => Some(5),
        (4, 4) => Some(4),
        _ => None,
    }
}

fn catalog() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=4 {
        for n in m..=6 {
            if (m * n) % 2 == 0 {
                out.push((m, n));
            }
        }
    }
    out
}

fn catalog_data(hooks: &Hooks, m: usize, n: usize) -> Result<EhrhartData, String> {
    ehrhart_polynomial_with(m, n, Topology::Grid, hooks.h_vector).map_err(|e| format!("grid({m},{n}): {e}"))
}

fn gorenstein_catalog(hooks: &Hooks) -> Result<String, String> {
    let mut seen = Vec::new();
    for (m, n) in catalog() {
        let e = catalog_data(hooks, m, n)?;
        let by_h = &e.gorenstein;
        let want = expected_index(m, n);
        ensure(by_h.point == (m == 1), || format!("grid({m},{n}): point flag {}", by_h.point))?;
        ensure(by_h.verdict == want.is_some() && by_h.index == want, || {
            format!("grid({m},{n}): h-vector {} gives {}", show(&e.h_vector), by_h.summary())
        })?;
        let by_f = gorenstein_check(m, n, Topology::Grid, GorensteinMode::Functional, 7).map_err(err)?;
        ensure((by_f.verdict, by_f.index) == (by_h.verdict, by_h.index), || {
            format!("grid({m},{n}): functional says {}, h-vector says {}", by_f.summary(), by_h.summary())
        })?;
        seen.push(format!("({m},{n}) {}", by_h.summary()));
    }
    Ok(seen.join("; "))
}

fn unique_interior_points(_: &Hooks) -> Result<String, String> {
    for (m, n, t, case) in [
        (2, 5, 3, WitnessCase::TwoByN3),
        (3, 6, 5, WitnessCase::ThreeByN5),
        (4, 4, 4, WitnessCase::FourByFour4),
    ] {
        let g = Arc::new(Graph::grid(m, n).map_err(err)?);
        let found = enumerate(&g, t, Mode::Interior, 16).map_err(err)?;
        let witness = gorenstein_witness(case, m, n).map_err(err)?;
        ensure(found.len() == 1, || format!("grid({m},{n}) t={t}: {} interior points", found.len()))?;
        ensure(found[0] == witness, || format!("grid({m},{n}) t={t}: interior point differs from {case}"))?;
    }
    Ok("grid(2,5) t=3, grid(3,6) t=5, grid(4,4) t=4 each have exactly the witness".into())
}

fn non_gorenstein_evidence(_: &Hooks) -> Result<String, String> {
    let interior = count_grid(4, 6, 5, Mode::Interior).map_err(err)?.value;
    let tilings = count_grid(4, 6, 1, Mode::All).map_err(err)?.value;
    ensure(interior > tilings, || format!("grid(4,6): L°(5) = {interior}, L(1) = {tilings}"))?;

    let a = gorenstein_witness(WitnessCase::EvenOdd5, 4, 5).map_err(err)?;
    let b = gorenstein_witness(WitnessCase::EvenOdd5Flipped, 4, 5).map_err(err)?;
    for w in [&a, &b] {
        let report = w.validate();
        ensure(report.is_magic && report.is_interior && w.sum() == 5, || {
            "grid(4,5): witness is not an interior point of sum 5".to_string()
        })?;
    }
    ensure(a != b, || "grid(4,5): witness and its mirror image coincide".into())?;
    Ok(format!("grid(4,6): L°(5) = {interior} > L(1) = {tilings}; grid(4,5): two distinct interior points at t=5"))
}

fn closed_form(_: &Hooks) -> Result<String, String> {
    for m in 1..=8 {
        for n in 1..=8 {
            let closed = kasteleyn(m, n).map_err(err)?;
            let counted = count_grid(m, n, 1, Mode::All).map_err(err)?.value;
            ensure(closed == counted, || format!("{m}x{n}: closed form {closed}, count {counted}"))?;
        }
    }
    Ok("64 boards agree, 8x8 gives 12988816".into())
}

fn tiling_reciprocity(_: &Hooks) -> Result<String, String> {
    let mut orders = Vec::new();
    for m in 2..=6 {
        let report = verify_reciprocity(m, 10).map_err(err)?;
        for row in &report.rows {
            let case = if m % 4 == 2 && row.n % 2 == 1 { -1 } else { 1 };
            let general = if (m.div_ceil(2) * row.n as usize) % 2 == 1 { -1 } else { 1 };
            ensure(row.case_sign == case && row.sign == general, || format!("m={m} n={}: sign bookkeeping", row.n))?;
            ensure(row.pass, || {
                format!("m={m} n={}: T = {}, backward = {}", row.n, row.forward, row.backward)
            })?;
        }
        ensure(report.all_pass(), || format!("m={m}: {:?} / {:?}", report.odd_zero, report.char_poly))?;
        orders.push(format!("m={m} order {}", report.recurrence.order()));
    }
    Ok(orders.join(", "))
}

fn transfer_matrix(_: &Hooks) -> Result<String, String> {
    for m in 1..=2usize {
        for t in 0..=2u32 {
            let a = TransferMatrix::new(m, t).map_err(err)?;
            let walks = a.closed_walks(6);
            for (n, walk) in walks.iter().enumerate().skip(1) {
                let counted = count_grid(m, n, t, Mode::All).map_err(err)?.value;
                ensure(*walk == counted, || format!("m={m} t={t} n={n}: walk {walk} vs {counted}"))?;
            }
            let rec = char_poly_recurrence(&a).map_err(err)?;
            let order = (t as usize + 1).pow(m as u32);
            ensure(rec.order() == order, || format!("m={m} t={t}: order {}", rec.order()))?;
            let seq = rationals(&grid_sequence(m, t, Mode::All, order + 4).map_err(err)?);
            let predicted = rec.values(order as i64, order as i64 + 4).map_err(err)?;
            ensure(predicted == seq[order..], || format!("m={m} t={t}: held-out terms differ"))?;
        }
    }
    Ok("walk counts match for m <= 2, t <= 2, n <= 6; orders (t+1)^m".into())
}

fn power_sequences(_: &Hooks) -> Result<String, String> {
    let squares = power_recurrence_with(2, 2, 8, Some(12)).map_err(err)?;
    ensure(squares.recurrence.order() == 3, || format!("order {}", squares.recurrence.order()))?;
    let range: Vec<usize> = squares.held_out.iter().map(|h| h.n).collect();
    ensure(range == (12..=20).collect::<Vec<_>>(), || format!("held out {range:?}"))?;
    for h in &squares.held_out {
        ensure(h.predicted == BigRational::from_integer(h.actual.clone()), || {
            format!("n={}: predicted {}, actual {}", h.n, h.predicted, h.actual)
        })?;
    }
    for m in [2, 3] {
        for t in [2, 3] {
            let report = power_recurrence(m, t, 8).map_err(err)?;
            ensure(report.all_pass(), || format!("m={m} t={t}: power reciprocity fails"))?;
        }
    }
    Ok(format!("squares: {}", squares.recurrence))
}

fn decomposition_round_trip(_: &Hooks) -> Result<String, String> {
    let mut total = 0;
    for (m, n, t_max) in [(3, 4, 3), (2, 6, 4)] {
        let g = Arc::new(Graph::grid(m, n).map_err(err)?);
        for t in 0..=t_max {
            for l in enumerate(&g, t, Mode::All, 1_000_000).map_err(err)? {
                let d = decompose(&l).map_err(err)?;
                ensure(d.layers().len() == t as usize, || format!("{} layers for t={t}", d.layers().len()))?;
                for layer in d.layers() {
                    let single = MagicLabelling::from_matching(g.clone(), layer).map_err(err)?;
                    ensure(single.is_magic(), || "layer is not a perfect matching".into())?;
                }
                ensure(d.resum() == l.labels(), || "layers do not add up to the labelling".into())?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} labellings"))
}

fn torus_gorenstein(_: &Hooks) -> Result<String, String> {
    for (m, n, k, t_max) in [(2, 4, 3, 8), (4, 4, 4, 6)] {
        let r = gorenstein_check(m, n, Topology::Torus, GorensteinMode::Functional, t_max).map_err(err)?;
        ensure(r.first_interior == Some(k), || format!("torus({m},{n}): first interior at {:?}", r.first_interior))?;
        ensure(r.checks.iter().map(|c| c.t).eq(k..=t_max), || format!("torus({m},{n}): window"))?;
        for c in &r.checks {
            ensure(c.holds(), || format!("torus({m},{n}) t={}: L° = {}, L(t-{k}) = {}", c.t, c.interior, c.shifted))?;
        }
        ensure(r.verdict && r.index == Some(k), || format!("torus({m},{n}): {}", r.summary()))?;
    }
    Ok("torus(2,4) index 3 on t=3..8, torus(4,4) index 4 on t=4..6".into())
}

fn dimension_formulas(_: &Hooks) -> Result<String, String> {
    let cases = [
        (2, 3, Topology::Grid, 2),
        (3, 4, Topology::Grid, 6),
        (4, 4, Topology::Grid, 9),
        (2, 3, Topology::Torus, 3),
        (2, 4, Topology::Torus, 5),
        (4, 4, Topology::Torus, 17),
        (4, 3, Topology::Torus, 12),
    ];
    let mut seen = Vec::new();
    for (m, n, topo, want) in cases {
        let g = Graph::build(m, n, topo).map_err(err)?;
        let d = dimension(&g).map_err(err)?;
        ensure(d == want, || format!("{}: rank {d}, expected {want}", g.name()))?;
        seen.push(format!("{} {d}", g.name()));
    }
    Ok(seen.join(", "))
}

fn column_identities(_: &Hooks) -> Result<String, String> {
    let mut total = 0;
    for (n, t_max) in [(4, 3), (6, 2)] {
        let g = Arc::new(Graph::grid(3, n).map_err(err)?);
        for t in 0..=t_max {
            for l in enumerate(&g, t, Mode::All, 1_000_000).map_err(err)? {
                ensure(check_column_differences(&l).map_err(err)?, || format!("grid(3,{n}) t={t}: {:?}", l.labels()))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} labellings"))
}

fn ehrhart_reciprocity(_: &Hooks) -> Result<String, String> {
    for (m, n) in [(2, 4), (3, 4)] {
        let e = ehrhart_polynomial(m, n, Topology::Grid).map_err(err)?;
        for t in 1..=8u32 {
            let interior = count_grid(m, n, t, Mode::Interior).map_err(err)?.value;
            let reflected = e.reciprocal(i64::from(t));
            ensure(reflected == BigRational::from_integer(interior.clone().into()), || {
                format!("grid({m},{n}) t={t}: (-1)^d L(-t) = {reflected}, interior = {interior}")
            })?;
        }
    }
    Ok("grid(2,4) and grid(3,4) for t = 1..8".into())
}

fn unimodal_h_vectors(hooks: &Hooks) -> Result<String, String> {
    let mut seen = Vec::new();
    for (m, n) in catalog() {
        if expected_index(m, n).is_none() {
            continue;
        }
        let e = catalog_data(hooks, m, n)?;
        ensure(is_unimodal(&e.h_vector), || format!("grid({m},{n}): h = {}", show(&e.h_vector)))?;
        seen.push(format!("grid({m},{n})"));
    }
    let torus = ehrhart_polynomial_with(2, 4, Topology::Torus, hooks.h_vector).map_err(err)?;
    ensure(is_unimodal(&torus.h_vector), || format!("torus(2,4): h = {}", show(&torus.h_vector)))?;
    Ok(format!("{} grids, torus(2,4) h = {}", seen.len(), show(&torus.h_vector)))
}

/// A deliberately wrong h-vector transform (swaps `h_0` and `h_1`), for
/// checking that the suite notices.
pub fn broken_h_vector(counts: &[BigUint], d: usize) -> crate::Result<Vec<BigInt>> {
    let mut h = ehrhart::h_vector(counts, d)?;
    if h.len() > 1 {
        h.swap(0, 1);
    }
    Ok(h)
}
