//! Magic labellings and the explicit interior points of small dilates.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Graph, Topology, Vertex};

/// Edge labels of a graph, indexed by edge index, with claimed vertex sum `sum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicLabelling {
    graph: Arc<Graph>,
    sum: u32,
    labels: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: Vertex,
    pub actual: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_magic: bool,
    pub is_interior: bool,
    pub violations: Vec<Violation>,
}

impl MagicLabelling {
    /// Wraps a label vector. Only the length is checked; see [`Self::validate`].
    pub fn new(graph: Arc<Graph>, sum: u32, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != graph.num_edges() {
            return Err(Error::LengthMismatch {
                expected: graph.num_edges(),
                got: labels.len(),
            });
        }
        Ok(MagicLabelling { graph, sum, labels })
    }

    /// Incidence vector of a set of edges, with sum 1.
    pub fn from_matching(graph: Arc<Graph>, edges: &[usize]) -> Result<Self> {
        let mut labels = vec![0; graph.num_edges()];
        for &e in edges {
            labels[e] += 1;
        }
        Self::new(graph, 1, labels)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn sum(&self) -> u32 {
        self.sum
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> u32 {
        self.labels[e]
    }

    /// Label of the edge joining two vertices.
    ///
    /// # Panics
    /// If the vertices are not adjacent.
    pub fn label_between(&self, a: Vertex, b: Vertex) -> u32 {
        let e = self
            .graph
            .edge_between(a, b)
            .unwrap_or_else(|| panic!("{a:?} and {b:?} are not adjacent"));
        self.labels[e]
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &self.graph;
        let violations: Vec<Violation> = (0..g.num_vertices())
            .filter_map(|v| {
                let actual: u64 = g.incident(v).iter().map(|&e| u64::from(self.labels[e])).sum();
                (actual != u64::from(self.sum)).then(|| Violation { vertex: g.vertex(v), actual })
            })
            .collect();
        let is_magic = violations.is_empty();
        ValidationReport {
            is_magic,
            is_interior: is_magic && self.labels.iter().all(|&x| x >= 1),
            violations,
        }
    }

    pub fn is_magic(&self) -> bool {
        self.validate().is_magic
    }

    pub fn to_file(&self) -> LabellingFile {
        LabellingFile {
            graph: GraphSpec {
                rows: self.graph.rows(),
                cols: self.graph.cols(),
                topology: self.graph.topology(),
            },
            sum: self.sum,
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("labelling serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<LabellingFile>(text)?.into_labelling()
    }

    /// The labels laid out on the board: horizontal labels between cells in a
    /// row, vertical labels between rows. Wrap edges are listed after the grid.
    pub fn render(&self) -> String {
        let g = &self.graph;
        let width = self.labels.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        let cell = |x: u32| format!("{x:>width$}");
        let blank = " ".repeat(width);
        let mut out = String::new();
        for r in 0..g.rows() {
            let mut line = String::from("o");
            for c in 0..g.cols().saturating_sub(1) {
                line.push_str(&format!(" {} o", cell(self.label_between(Vertex::new(r, c), Vertex::new(r, c + 1)))));
            }
            out.push_str(line.trim_end());
            out.push('\n');
            if r + 1 < g.rows() {
                let mut line = String::new();
                for c in 0..g.cols() {
                    if c > 0 {
                        line.push_str(&format!(" {blank} "));
                    }
                    line.push_str(&cell(self.label_between(Vertex::new(r, c), Vertex::new(r + 1, c))));
                }
                out.push_str(line.trim_end());
                out.push('\n');
            }
        }
        let wraps: Vec<String> = g
            .edges()
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::WrapHorizontal | EdgeKind::WrapVertical))
            .map(|e| format!("({},{})-({},{}): {}", e.u.row, e.u.col, e.v.row, e.v.col, self.labels[e.index]))
            .collect();
        if !wraps.is_empty() {
            out.push_str("wraps: ");
            out.push_str(&wraps.join(", "));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
}

/// On-disk form of a labelling; labels are in canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabellingFile {
    pub graph: GraphSpec,
    pub sum: u32,
    pub labels: Vec<u32>,
}

impl LabellingFile {
    pub fn into_labelling(self) -> Result<MagicLabelling> {
        let g = Graph::build(self.graph.rows, self.graph.cols, self.graph.topology)?;
        MagicLabelling::new(Arc::new(g), self.sum, self.labels)
    }
}

/// The interior points used to settle the Gorenstein question for grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessCase {
    /// 2 x n, n >= 3, sum 3: end rungs 2, everything else 1.
    TwoByN3,
    /// 3 x n, n even >= 4, sum 5.
    ThreeByN5,
    /// 4 x 4, sum 4: the eight corner edges 2, everything else 1.
    FourByFour4,
    /// m, n even, m >= 4, n >= 4, sum 4.
    EvenEven4,
    /// m, n even, m >= 4, n >= 6, sum 5.
    EvenEven5,
    /// m even >= 4, n odd >= 5, sum 5.
    EvenOdd5,
    /// Left-right mirror image of [`WitnessCase::EvenOdd5`].
    EvenOdd5Flipped,
}

impl WitnessCase {
    pub const ALL: [WitnessCase; 7] = [
        WitnessCase::TwoByN3,
        WitnessCase::ThreeByN5,
        WitnessCase::FourByFour4,
        WitnessCase::EvenEven4,
        WitnessCase::EvenEven5,
        WitnessCase::EvenOdd5,
        WitnessCase::EvenOdd5Flipped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessCase::TwoByN3 => "2xn-t3",
            WitnessCase::ThreeByN5 => "3xn-t5",
            WitnessCase::FourByFour4 => "4x4-t4",
            WitnessCase::EvenEven4 => "even-even-t4",
            WitnessCase::EvenEven5 => "even-even-t5",
            WitnessCase::EvenOdd5 => "even-odd-t5",
            WitnessCase::EvenOdd5Flipped => "even-odd-t5-flipped",
        }
    }

    pub fn sum(self) -> u32 {
        match self {
            WitnessCase::TwoByN3 => 3,
            WitnessCase::FourByFour4 | WitnessCase::EvenEven4 => 4,
            _ => 5,
        }
    }

    pub fn applies_to(self, rows: usize, cols: usize) -> bool {
        let even = |x: usize| x.is_multiple_of(2);
        match self {
            WitnessCase::TwoByN3 => rows == 2 && cols >= 3,
            WitnessCase::ThreeByN5 => rows == 3 && even(cols) && cols >= 4,
            WitnessCase::FourByFour4 => rows == 4 && cols == 4,
            WitnessCase::EvenEven4 => even(rows) && even(cols) && rows >= 4 && cols >= 4,
            WitnessCase::EvenEven5 => even(rows) && even(cols) && rows >= 4 && cols >= 6,
            WitnessCase::EvenOdd5 | WitnessCase::EvenOdd5Flipped => {
                even(rows) && !even(cols) && rows >= 4 && cols >= 5
            }
        }
    }
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WitnessCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown witness case {s:?}")))
    }
}

/// Builds the interior point for `case` on the `rows x cols` grid.
///
/// Horizontal edge `(r,c)-(r,c+1)` is addressed by `(r, c)`, vertical edge
/// `(r,c)-(r+1,c)` by `(r, c)`.
pub fn gorenstein_witness(case: WitnessCase, rows: usize, cols: usize) -> Result<MagicLabelling> {
    if !case.applies_to(rows, cols) {
        return Err(Error::IncompatibleWitness { case: case.name(), rows, cols });
    }
    let (m, n) = (rows, cols);
    let horizontal: Box<dyn Fn(usize, usize) -> u32>;
    let vertical: Box<dyn Fn(usize, usize) -> u32>;
    match case {
        WitnessCase::TwoByN3 => {
            horizontal = Box::new(|_, _| 1);
            vertical = Box::new(move |_, c| if c == 0 || c == n - 1 { 2 } else { 1 });
        }
        WitnessCase::ThreeByN5 => {
            // Top and bottom rows 3,1,3,...,3; middle row 1,2,1,...,1; end rungs 2.
            horizontal = Box::new(|r, c| match (r, c % 2) {
                (1, 0) => 1,
                (1, _) => 2,
                (_, 0) => 3,
                _ => 1,
            });
            vertical = Box::new(move |_, c| if c == 0 || c == n - 1 { 2 } else { 1 });
        }
        WitnessCase::FourByFour4 => {
            let corner = |r: usize, c: usize| (r == 0 || r == 3) && (c == 0 || c == 3);
            horizontal = Box::new(move |r, c| if corner(r, c) || corner(r, c + 1) { 2 } else { 1 });
            vertical = Box::new(move |r, c| if corner(r, c) || corner(r + 1, c) { 2 } else { 1 });
        }
        WitnessCase::EvenEven4 => {
            horizontal = Box::new(move |r, c| if (r == 0 || r == m - 1) && c % 2 == 0 { 2 } else { 1 });
            vertical = Box::new(move |r, c| if (c == 0 || c == n - 1) && r % 2 == 0 { 2 } else { 1 });
        }
        WitnessCase::EvenEven5 => {
            horizontal = Box::new(move |r, c| {
                let boundary_row = r == 0 || r == m - 1;
                if boundary_row && (c == 0 || c % 2 == 1 || c == n - 2) {
                    2
                } else {
                    1
                }
            });
            vertical = Box::new(move |r, c| {
                let end = c == 0 || c == n - 1;
                let next_to_end = c == 1 || c == n - 2;
                match (r % 2 == 0, end, next_to_end) {
                    (true, true, _) => 3,
                    (true, false, true) => 1,
                    (true, false, false) => 2,
                    (false, true, _) => 1,
                    (false, false, true) => 2,
                    (false, false, false) => 1,
                }
            });
        }
        WitnessCase::EvenOdd5 | WitnessCase::EvenOdd5Flipped => {
            let flip = case == WitnessCase::EvenOdd5Flipped;
            // Mirror columns: vertical edges at column c <-> n-1-c, horizontal
            // edges starting at column c <-> n-2-c.
            let hcol = move |c: usize| if flip { n - 2 - c } else { c };
            let vcol = move |c: usize| if flip { n - 1 - c } else { c };
            horizontal = Box::new(move |r, c| {
                let c = hcol(c);
                if (r == 0 || r == m - 1) && c != 1 {
                    2
                } else {
                    1
                }
            });
            vertical = Box::new(move |r, c| {
                let c = vcol(c);
                let end = c == 0 || c == n - 1;
                let left = c == 1 || c == 2;
                match (r % 2 == 0, end, left) {
                    (true, true, _) => 3,
                    (true, false, true) => 2,
                    (true, false, false) => 1,
                    (false, true, _) => 1,
                    (false, false, true) => 1,
                    (false, false, false) => 2,
                }
            });
        }
    }

    let g = Graph::grid(rows, cols)?;
    let labels = g
        .edges()
        .iter()
        .map(|e| {
            if e.kind.is_horizontal() {
                horizontal(e.u.row, e.u.col)
            } else {
                vertical(e.u.row, e.u.col)
            }
        })
        .collect();
    MagicLabelling::new(Arc::new(g), case.sum(), labels)
}

/// Checks the 3 x n column identities: with `a_i, b_i, c_i` the labels of the
/// i-th (1-based) horizontal edge in the top, middle and bottom rows,
/// `c_i = b_i - a_i` for even `i` and `c_i = t - a_i + b_i` for odd `i`.
///
/// Returns `Ok(false)` for labellings that are not magic.
pub fn check_column_differences(l: &MagicLabelling) -> Result<bool> {
    let g = l.graph();
    if g.topology() != Topology::Grid || g.rows() != 3 || !g.cols().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "column identities need a 3 x even grid, got {}",
            g.name()
        )));
    }
    if !l.is_magic() {
        return Ok(false);
    }
    let t = i64::from(l.sum());
    let h = |r: usize, i: usize| i64::from(l.label_between(Vertex::new(r, i - 1), Vertex::new(r, i)));
    Ok((1..g.cols()).all(|i| {
        let (a, b, c) = (h(0, i), h(1, i), h(2, i));
        if i % 2 == 0 {
            c == b - a
        } else {
            c == t - a + b
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize, n: usize) -> Arc<Graph> {
        Arc::new(Graph::grid(m, n).unwrap())
    }

    #[test]
    fn matchings_are_magic_of_sum_one() {
        let g = grid(3, 4);
        for m in g.perfect_matchings() {
            let l = MagicLabelling::from_matching(g.clone(), &m).unwrap();
            let report = l.validate();
            assert!(report.is_magic && !report.is_interior);
        }
    }

    #[test]
    fn zero_labelling() {
        let g = grid(2, 3);
        let l = MagicLabelling::new(g.clone(), 0, vec![0; g.num_edges()]).unwrap();
        let r = l.validate();
        assert!(r.is_magic && !r.is_interior);
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = grid(2, 2);
        assert!(matches!(
            MagicLabelling::new(g, 1, vec![1, 0]),
            Err(Error::LengthMismatch { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn violations_are_reported() {
        let g = grid(2, 2);
        let l = MagicLabelling::new(g, 1, vec![1, 1, 1, 0]).unwrap();
        let r = l.validate();
        assert!(!r.is_magic);
        // edge 2 is (0,0)-(1,0): both its ends now see 2
        assert_eq!(r.violations.len(), 2);
        assert!(r.violations.iter().all(|v| v.actual == 2));
    }

    #[test]
    fn two_by_n_witness() {
        let l = gorenstein_witness(WitnessCase::TwoByN3, 2, 6).unwrap();
        let r = l.validate();
        assert!(r.is_magic && r.is_interior);
        let g = l.graph();
        for e in g.edges() {
            let expected = if !e.kind.is_horizontal() && (e.u.col == 0 || e.u.col == 5) { 2 } else { 1 };
            assert_eq!(l.label(e.index), expected);
        }
        let l = gorenstein_witness(WitnessCase::TwoByN3, 2, 5).unwrap();
        assert!(l.validate().is_interior);
    }

    #[test]
    fn three_by_n_witness_matches_pictured_values() {
        let l = gorenstein_witness(WitnessCase::ThreeByN5, 3, 6).unwrap();
        assert!(l.validate().is_interior);
        let top: Vec<u32> = (0..5).map(|c| l.label_between(Vertex::new(0, c), Vertex::new(0, c + 1))).collect();
        let mid: Vec<u32> = (0..5).map(|c| l.label_between(Vertex::new(1, c), Vertex::new(1, c + 1))).collect();
        assert_eq!(top, [3, 1, 3, 1, 3]);
        assert_eq!(mid, [1, 2, 1, 2, 1]);
        assert!(check_column_differences(&l).unwrap());
    }

    #[test]
    fn even_even_four_reduces_to_corner_rule_on_four_by_four() {
        let a = gorenstein_witness(WitnessCase::EvenEven4, 4, 4).unwrap();
        let b = gorenstein_witness(WitnessCase::FourByFour4, 4, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.labels().iter().filter(|&&x| x == 2).count(), 8);
    }

    #[test]
    fn six_by_six_pictures() {
        let l = gorenstein_witness(WitnessCase::EvenEven4, 6, 6).unwrap();
        assert!(l.validate().is_interior);
        let bottom: Vec<u32> = (0..5).map(|c| l.label_between(Vertex::new(0, c), Vertex::new(0, c + 1))).collect();
        assert_eq!(bottom, [2, 1, 2, 1, 2]);

        let l = gorenstein_witness(WitnessCase::EvenEven5, 6, 6).unwrap();
        assert!(l.validate().is_interior);
        let bottom: Vec<u32> = (0..5).map(|c| l.label_between(Vertex::new(0, c), Vertex::new(0, c + 1))).collect();
        assert_eq!(bottom, [2, 2, 1, 2, 2]);
        let rung: Vec<u32> = (0..6).map(|c| l.label_between(Vertex::new(0, c), Vertex::new(1, c))).collect();
        assert_eq!(rung, [3, 1, 2, 2, 1, 3]);
        let rung: Vec<u32> = (0..6).map(|c| l.label_between(Vertex::new(1, c), Vertex::new(2, c))).collect();
        assert_eq!(rung, [1, 2, 1, 1, 2, 1]);
        // the edge used to separate 5P from P + (interior of 4P)
        assert_eq!(l.label_between(Vertex::new(0, 2), Vertex::new(0, 3)), 1);
    }

    #[test]
    fn six_by_seven_picture_and_flip() {
        let l = gorenstein_witness(WitnessCase::EvenOdd5, 6, 7).unwrap();
        assert!(l.validate().is_interior);
        let bottom: Vec<u32> = (0..6).map(|c| l.label_between(Vertex::new(0, c), Vertex::new(0, c + 1))).collect();
        assert_eq!(bottom, [2, 1, 2, 2, 2, 2]);
        let rung: Vec<u32> = (0..7).map(|c| l.label_between(Vertex::new(0, c), Vertex::new(1, c))).collect();
        assert_eq!(rung, [3, 2, 2, 1, 1, 1, 3]);
        let rung: Vec<u32> = (0..7).map(|c| l.label_between(Vertex::new(1, c), Vertex::new(2, c))).collect();
        assert_eq!(rung, [1, 1, 1, 2, 2, 2, 1]);

        let f = gorenstein_witness(WitnessCase::EvenOdd5Flipped, 6, 7).unwrap();
        assert!(f.validate().is_interior);
        assert_ne!(l.labels(), f.labels());
    }

    #[test]
    fn every_case_validates_across_a_catalog() {
        for case in WitnessCase::ALL {
            for m in 1..=8 {
                for n in 1..=9 {
                    match gorenstein_witness(case, m, n) {
                        Ok(l) => {
                            let r = l.validate();
                            assert!(r.is_interior, "{case} on {m}x{n}: {:?}", r.violations);
                            assert_eq!(l.sum(), case.sum());
                        }
                        Err(Error::IncompatibleWitness { .. }) => assert!(!case.applies_to(m, n)),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn incompatible_witness() {
        assert!(matches!(
            gorenstein_witness(WitnessCase::ThreeByN5, 3, 5),
            Err(Error::IncompatibleWitness { .. })
        ));
        assert!(gorenstein_witness(WitnessCase::EvenOdd5, 4, 6).is_err());
    }

    #[test]
    fn column_differences_on_matchings_and_corruption() {
        let g = grid(3, 4);
        let ms = g.perfect_matchings();
        assert_eq!(ms.len(), 11);
        for m in &ms {
            let l = MagicLabelling::from_matching(g.clone(), m).unwrap();
            assert!(check_column_differences(&l).unwrap());
        }

        let w = gorenstein_witness(WitnessCase::ThreeByN5, 3, 6).unwrap();
        let mut labels = w.labels().to_vec();
        let b1 = w.graph().edge_between(Vertex::new(1, 0), Vertex::new(1, 1)).unwrap();
        labels[b1] += 1;
        let bumped = MagicLabelling::new(w.graph().clone(), 5, labels).unwrap();
        assert!(!check_column_differences(&bumped).unwrap());

        assert!(check_column_differences(&MagicLabelling::new(grid(2, 4), 0, vec![0; 10]).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip_and_rejects_wrong_length() {
        let l = gorenstein_witness(WitnessCase::ThreeByN5, 3, 4).unwrap();
        let back = MagicLabelling::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
        let bad = r#"{"graph":{"rows":2,"cols":2,"topology":"grid"},"sum":1,"labels":[1,1,0]}"#;
        assert!(matches!(MagicLabelling::from_json(bad), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn case_names_parse() {
        for case in WitnessCase::ALL {
            assert_eq!(case.name().parse::<WitnessCase>().unwrap(), case);
        }
        assert!("5x5".parse::<WitnessCase>().is_err());
    }
}
