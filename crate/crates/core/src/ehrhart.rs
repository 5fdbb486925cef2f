//! Ehrhart polynomials, h-vectors and Gorenstein checks for perfect matching
//! polytopes of grids and tori.
//!
//! For a bipartite graph the lattice points of the `t`-th dilate of the
//! perfect matching polytope are exactly the magic labellings of sum `t`, and
//! its relative interior points are the labellings with every label at least 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{count, Mode};
use crate::error::{Error, Result};
use crate::graph::{Graph, Topology};

/// Tori are only interpolated when the dimension is at most this; beyond it
/// the `d + 3` generic counts are not practical and the functional check is
/// used instead.
pub const TORUS_HVECTOR_MAX_DIM: usize = 8;

/// Signature of the h-vector transform, so callers can substitute it.
pub type HVectorFn = fn(&[BigUint], usize) -> Result<Vec<BigInt>>;

/// Dimension predicted by the case analysis for grids and tori, or `None`
/// when the polytope is empty.
pub fn dimension_formula(rows: usize, cols: usize, topology: Topology) -> Option<usize> {
    if (rows * cols) % 2 == 1 {
        return None;
    }
    match topology {
        Topology::Grid => Some((rows - 1) * (cols - 1)),
        Topology::Torus => {
            let (a, b) = (rows.min(cols), rows.max(cols));
            Some(match (a, b) {
                (1, 2) => 0,
                (1, _) => 1,
                // With both wraps dropped this is the 4-cycle.
                (2, 2) => 1,
                (2, k) if k % 2 == 0 => k + 1,
                (2, k) => k,
                _ if rows.is_multiple_of(2) && cols.is_multiple_of(2) => rows * cols + 1,
                _ => rows * cols,
            })
        }
    }
}

/// Incremental row echelon form over the rationals.
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[pivot].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Affine rank of the perfect matching incidence vectors of `g`.
///
/// Matchings are streamed and the scan stops once the rank reaches the bound
/// `E - V + 1` (bipartite) or `E - V` (otherwise) that the vertex equations
/// impose on a connected graph.
pub fn matching_affine_rank(g: &Graph) -> Result<usize> {
    let bound = (g.num_edges() + usize::from(g.is_bipartite())).saturating_sub(g.num_vertices());
    let mut base: Option<Vec<usize>> = None;
    let mut echelon = Echelon::new();
    g.for_each_perfect_matching(|m| {
        match &base {
            None => base = Some(m.to_vec()),
            Some(b) => {
                let mut v = vec![BigRational::zero(); g.num_edges()];
                for &e in m {
                    v[e] += BigRational::one();
                }
                for &e in b {
                    v[e] -= BigRational::one();
                }
                echelon.insert(v);
            }
        }
        echelon.rank() < bound
    });
    if base.is_none() {
        return Err(Error::EmptyPolytope(g.name()));
    }
    Ok(echelon.rank())
}

/// Dimension of the perfect matching polytope of `g`: the affine rank of its
/// matchings, checked against [`dimension_formula`].
pub fn dimension(g: &Graph) -> Result<usize> {
    let rank = matching_affine_rank(g)?;
    match dimension_formula(g.rows(), g.cols(), g.topology()) {
        Some(formula) if formula != rank => Err(Error::DimensionMismatch { rank, formula }),
        _ => Ok(rank),
    }
}

/// `E - V + 1 - b` for matching covered graphs, where `b` counts bricks.
/// The non-bipartite tori built here have a single brick. Returns `None` when
/// some edge lies in no perfect matching.
pub fn edmonds_dimension(g: &Graph) -> Option<usize> {
    let mut used = vec![false; g.num_edges()];
    let mut missing = g.num_edges();
    g.for_each_perfect_matching(|m| {
        for &e in m {
            if !used[e] {
                used[e] = true;
                missing -= 1;
            }
        }
        missing > 0
    });
    if missing > 0 {
        return None;
    }
    let bricks = usize::from(!g.is_bipartite());
    Some(g.num_edges() + 1 - g.num_vertices() - bricks)
}

/// Polynomial with exact rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolynomialRepr", try_from = "PolynomialRepr")]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    #[serde(with = "crate::json::integer_vec")]
    coeffs_num: Vec<BigInt>,
    #[serde(with = "crate::json::integer_vec")]
    coeffs_den: Vec<BigInt>,
}

impl From<Polynomial> for PolynomialRepr {
    fn from(p: Polynomial) -> Self {
        PolynomialRepr {
            coeffs_num: p.coeffs.iter().map(|c| c.numer().clone()).collect(),
            coeffs_den: p.coeffs.iter().map(|c| c.denom().clone()).collect(),
        }
    }
}

impl TryFrom<PolynomialRepr> for Polynomial {
    type Error = String;

    fn try_from(r: PolynomialRepr) -> std::result::Result<Self, String> {
        if r.coeffs_num.len() != r.coeffs_den.len() {
            return Err("coeffs_num and coeffs_den differ in length".into());
        }
        if r.coeffs_den.iter().any(Zero::is_zero) {
            return Err("zero denominator".into());
        }
        Ok(Polynomial::new(
            r.coeffs_num
                .into_iter()
                .zip(r.coeffs_den)
                .map(|(n, d)| BigRational::new(n, d))
                .collect(),
        ))
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Polynomial { coeffs }
    }

    /// The unique polynomial of degree below `values.len()` taking `values[t]`
    /// at `t = 0, 1, ...`, from Newton forward differences.
    pub fn interpolate(values: &[BigInt]) -> Self {
        let mut diffs = values.to_vec();
        let mut coeffs = vec![BigRational::zero(); values.len()];
        // falling factorial t(t-1)...(t-k+1) / k!, constant term first
        let mut basis = vec![BigRational::one()];
        for k in 0..values.len() {
            let lead = BigRational::from_integer(diffs[0].clone());
            for (c, b) in coeffs.iter_mut().zip(&basis) {
                *c += &lead * b;
            }
            for i in 0..diffs.len() - 1 {
                diffs[i] = &diffs[i + 1] - &diffs[i];
            }
            diffs.pop();
            // multiply basis by (t - k) / (k + 1)
            let shift = BigRational::from_integer(BigInt::from(k));
            let scale = BigRational::from_integer(BigInt::from(k + 1));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b / &scale;
                next[i] -= b * &shift / &scale;
            }
            basis = next;
        }
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("never empty")
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_int(&self, t: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(t)))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => f.write_str("t")?,
                1 => write!(f, "{mag}*t")?,
                _ if mag.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `h_j = sum_i (-1)^i C(d+1, i) L(j-i)` for `j = 0..=d`, trailing zeros removed.
pub fn h_vector(counts: &[BigUint], d: usize) -> Result<Vec<BigInt>> {
    if counts.len() < d + 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} counts for dimension {d}, got {}",
            d + 1,
            counts.len()
        )));
    }
    let mut h: Vec<BigInt> = (0..=d)
        .map(|j| {
            (0..=j).fold(BigInt::zero(), |acc, i| {
                let term = binomial(BigInt::from(d + 1), BigInt::from(i)) * BigInt::from(counts[j - i].clone());
                if i % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    while h.len() > 1 && h.last().is_some_and(Zero::is_zero) {
        h.pop();
    }
    if let Some((index, value)) = h.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(Error::NegativeH { index, value: value.to_string() });
    }
    Ok(h)
}

/// The first `len` coefficients of `h(z) / (1 - z)^(d+1)`.
pub fn expand_h(h: &[BigInt], d: usize, len: usize) -> Vec<BigInt> {
    (0..len)
        .map(|t| {
            h.iter()
                .enumerate()
                .filter(|(j, _)| *j <= t)
                .map(|(j, hj)| hj * binomial(BigInt::from(t - j + d), BigInt::from(d)))
                .sum()
        })
        .collect()
}

pub fn is_palindromic(h: &[BigInt]) -> bool {
    h.iter().eq(h.iter().rev())
}

/// Weakly increasing up to some peak and weakly decreasing after it.
pub fn is_unimodal(h: &[BigInt]) -> bool {
    let peak = h
        .windows(2)
        .position(|w| w[0] > w[1])
        .unwrap_or(h.len().saturating_sub(1));
    h[peak..].windows(2).all(|w| w[0] >= w[1])
}

/// The series `h(z) / (1-z)^(d+1)` as plain text.
pub fn series_string(h: &[BigInt], d: usize) -> String {
    let terms: Vec<String> = h
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| match j {
            0 => c.to_string(),
            1 if c.is_one() => "z".into(),
            1 => format!("{c}z"),
            _ if c.is_one() => format!("z^{j}"),
            _ => format!("{c}z^{j}"),
        })
        .collect();
    format!("({}) / (1-z)^{}", terms.join(" + "), d + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GorensteinMode {
    /// Palindromic h-vector.
    HVector,
    /// `L°(t) = L(t - k)` on a window of dilates.
    Functional,
}

impl fmt::Display for GorensteinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GorensteinMode::HVector => "hvector",
            GorensteinMode::Functional => "functional",
        })
    }
}

impl FromStr for GorensteinMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hvector" => Ok(GorensteinMode::HVector),
            "functional" => Ok(GorensteinMode::Functional),
            other => Err(Error::InvalidParameter(format!("unknown gorenstein mode {other:?}"))),
        }
    }
}

/// One dilate compared by the functional check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalCheck {
    pub t: u32,
    #[serde(with = "crate::json::integer")]
    pub interior: BigUint,
    /// `L(t - k)`.
    #[serde(with = "crate::json::integer")]
    pub shifted: BigUint,
}

impl FunctionalCheck {
    pub fn holds(&self) -> bool {
        self.interior == self.shifted
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinReport {
    pub verdict: bool,
    /// Gorenstein index, set only when the verdict is positive.
    pub index: Option<u32>,
    pub mode: GorensteinMode,
    /// The polytope is a single point.
    pub point: bool,
    /// Smallest dilate with an interior point (functional mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_interior: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<FunctionalCheck>,
}

impl GorensteinReport {
    fn point(mode: GorensteinMode) -> Self {
        GorensteinReport {
            verdict: true,
            index: Some(1),
            mode,
            point: true,
            first_interior: None,
            checks: Vec::new(),
        }
    }

    fn from_h(h: &[BigInt], d: usize) -> Self {
        if d == 0 {
            return Self::point(GorensteinMode::HVector);
        }
        let verdict = is_palindromic(h);
        GorensteinReport {
            verdict,
            index: verdict.then(|| (d + 1 - (h.len() - 1)) as u32),
            mode: GorensteinMode::HVector,
            point: false,
            first_interior: None,
            checks: Vec::new(),
        }
    }

    /// Short verdict: "point", "yes (index k)" or "no".
    pub fn summary(&self) -> String {
        match (self.point, self.verdict, self.index) {
            (true, _, _) => "point".into(),
            (false, true, Some(k)) => format!("yes (index {k})"),
            _ => "no".into(),
        }
    }
}

/// Counts, polynomial, h-vector and h-vector Gorenstein verdict of one polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EhrhartDocument", try_from = "EhrhartDocument")]
pub struct EhrhartData {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    pub dimension: usize,
    /// `L(0), ..., L(d + 2)`.
    pub counts: Vec<BigUint>,
    pub polynomial: Polynomial,
    pub h_vector: Vec<BigInt>,
    pub gorenstein: GorensteinReport,
}

#[derive(Serialize, Deserialize)]
struct EhrhartDocument {
    rows: usize,
    cols: usize,
    topology: Topology,
    d: usize,
    #[serde(with = "crate::json::integer_vec")]
    counts: Vec<BigUint>,
    #[serde(with = "crate::json::integer_vec")]
    coeffs_num: Vec<BigInt>,
    #[serde(with = "crate::json::integer_vec")]
    coeffs_den: Vec<BigInt>,
    #[serde(with = "crate::json::integer_vec")]
    h: Vec<BigInt>,
    gorenstein: GorensteinReport,
}

impl From<EhrhartData> for EhrhartDocument {
    fn from(e: EhrhartData) -> Self {
        let poly = PolynomialRepr::from(e.polynomial);
        EhrhartDocument {
            rows: e.rows,
            cols: e.cols,
            topology: e.topology,
            d: e.dimension,
            counts: e.counts,
            coeffs_num: poly.coeffs_num,
            coeffs_den: poly.coeffs_den,
            h: e.h_vector,
            gorenstein: e.gorenstein,
        }
    }
}

impl TryFrom<EhrhartDocument> for EhrhartData {
    type Error = String;

    fn try_from(d: EhrhartDocument) -> std::result::Result<Self, String> {
        Ok(EhrhartData {
            rows: d.rows,
            cols: d.cols,
            topology: d.topology,
            dimension: d.d,
            counts: d.counts,
            polynomial: Polynomial::try_from(PolynomialRepr {
                coeffs_num: d.coeffs_num,
                coeffs_den: d.coeffs_den,
            })?,
            h_vector: d.h,
            gorenstein: d.gorenstein,
        })
    }
}

impl EhrhartData {
    /// `(-1)^d P(-t)`, which equals the interior count at `t`.
    pub fn reciprocal(&self, t: i64) -> BigRational {
        let v = self.polynomial.eval_int(-t);
        if self.dimension.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    pub fn series(&self) -> String {
        series_string(&self.h_vector, self.dimension)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Builds the graph and rejects cases with no usable polytope.
fn polytope_graph(rows: usize, cols: usize, topology: Topology) -> Result<Graph> {
    let g = Graph::build(rows, cols, topology)?;
    if (rows * cols) % 2 == 1 {
        return Err(Error::EmptyPolytope(g.name()));
    }
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    Ok(g)
}

/// `L(t)` (or `L°(t)`) for `t = 0..=t_max`, computed concurrently.
pub fn counts(g: &Graph, mode: Mode, t_max: u32) -> Result<Vec<BigUint>> {
    (0..=t_max)
        .into_par_iter()
        .map(|t| count(g, t, mode))
        .collect()
}

/// Ehrhart data using the standard h-vector transform.
pub fn ehrhart_polynomial(rows: usize, cols: usize, topology: Topology) -> Result<EhrhartData> {
    ehrhart_polynomial_with(rows, cols, topology, h_vector)
}

/// Ehrhart data with a caller-supplied h-vector transform.
pub fn ehrhart_polynomial_with(
    rows: usize,
    cols: usize,
    topology: Topology,
    h_fn: HVectorFn,
) -> Result<EhrhartData> {
    let g = polytope_graph(rows, cols, topology)?;
    let d = dimension(&g)?;
    if topology == Topology::Torus && d > TORUS_HVECTOR_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "{} has dimension {d}; interpolation needs counts up to t={}, use the functional check",
            g.name(),
            d + 2
        )));
    }
    let counts = counts(&g, Mode::All, d as u32 + 2)?;
    let values: Vec<BigInt> = counts.iter().cloned().map(BigInt::from).collect();
    let polynomial = Polynomial::interpolate(&values[..=d]);
    for (t, value) in values.iter().enumerate().skip(d + 1) {
        let predicted = polynomial.eval_int(t as i64);
        if predicted != BigRational::from_integer(value.clone()) {
            return Err(Error::HeldOut {
                t: t as u32,
                predicted: predicted.to_string(),
                counted: value.to_string(),
            });
        }
    }
    let h = h_fn(&counts, d)?;
    let gorenstein = GorensteinReport::from_h(&h, d);
    Ok(EhrhartData {
        rows,
        cols,
        topology,
        dimension: d,
        counts,
        polynomial,
        h_vector: h,
        gorenstein,
    })
}

/// Decides whether the polytope is Gorenstein.
///
/// `HVector` interpolates and tests the h-vector for symmetry. `Functional`
/// finds the first dilate `k` with an interior point and compares `L°(t)` with
/// `L(t - k)` for `t = k..=t_max`; it needs `t_max >= k + 2`.
pub fn gorenstein_check(
    rows: usize,
    cols: usize,
    topology: Topology,
    mode: GorensteinMode,
    t_max: u32,
) -> Result<GorensteinReport> {
    match mode {
        GorensteinMode::HVector => Ok(ehrhart_polynomial(rows, cols, topology)?.gorenstein),
        GorensteinMode::Functional => functional_check(&polytope_graph(rows, cols, topology)?, t_max),
    }
}

/// Runs both modes and fails if they disagree. Returns the h-vector report.
pub fn gorenstein_cross_check(
    rows: usize,
    cols: usize,
    topology: Topology,
    t_max: u32,
) -> Result<(GorensteinReport, GorensteinReport)> {
    let by_h = gorenstein_check(rows, cols, topology, GorensteinMode::HVector, t_max)?;
    let by_f = gorenstein_check(rows, cols, topology, GorensteinMode::Functional, t_max)?;
    if (by_h.verdict, by_h.index) != (by_f.verdict, by_f.index) {
        return Err(Error::ModeDisagreement {
            hvector: by_h.summary(),
            functional: by_f.summary(),
        });
    }
    Ok((by_h, by_f))
}

fn functional_check(g: &Graph, t_max: u32) -> Result<GorensteinReport> {
    // A single perfect matching means the polytope is a point.
    if count(g, 1, Mode::All)?.is_one() {
        return Ok(GorensteinReport::point(GorensteinMode::Functional));
    }
    let mut k = None;
    let mut interior = Vec::new();
    for t in 0..=t_max {
        let c = count(g, t, Mode::Interior)?;
        let found = !c.is_zero();
        interior.push(c);
        if found {
            k = Some(t);
            break;
        }
    }
    let Some(k) = k else {
        return Err(Error::EvidenceWindow { t_max, needed: t_max + 1 });
    };
    if t_max < k + 2 {
        return Err(Error::EvidenceWindow { t_max, needed: k + 2 });
    }
    let rest = counts_from(g, Mode::Interior, k + 1, t_max)?;
    interior.extend(rest);
    let shifted = counts(g, Mode::All, t_max - k)?;
    let checks: Vec<FunctionalCheck> = (k..=t_max)
        .map(|t| FunctionalCheck {
            t,
            interior: interior[t as usize].clone(),
            shifted: shifted[(t - k) as usize].clone(),
        })
        .collect();
    let verdict = interior[k as usize].is_one() && checks.iter().all(FunctionalCheck::holds);
    Ok(GorensteinReport {
        verdict,
        index: verdict.then_some(k),
        mode: GorensteinMode::Functional,
        point: false,
        first_interior: Some(k),
        checks,
    })
}

fn counts_from(g: &Graph, mode: Mode, from: u32, to: u32) -> Result<Vec<BigUint>> {
    (from..=to)
        .into_par_iter()
        .map(|t| count(g, t, mode))
        .collect()
}
