//! Grid and torus graphs.
//!
//! Vertices are `(row, col)` with `rows` rows and `cols` columns and are numbered
//! row-major. Edges are numbered in a fixed order so that label vectors and
//! output files are stable: horizontal edges row-major, then vertical edges
//! row-major, then horizontal wraps (by row), then vertical wraps (by column).
//!
//! A torus wrap edge is only added when it joins two vertices that are not
//! already adjacent. With two rows the vertical wrap would repeat the grid edge,
//! and with one row it would be a loop; neither is added. The resulting 2 x n
//! torus is 3-regular with 3n edges.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Grid,
    Torus,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Grid => "grid",
            Topology::Torus => "torus",
        })
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Topology::Grid),
            "torus" => Ok(Topology::Torus),
            other => Err(Error::InvalidParameter(format!("unknown topology {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

impl Vertex {
    pub const fn new(row: usize, col: usize) -> Self {
        Vertex { row, col }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Horizontal,
    Vertical,
    WrapHorizontal,
    WrapVertical,
}

impl EdgeKind {
    /// True for edges joining two cells of the same row.
    pub fn is_horizontal(self) -> bool {
        matches!(self, EdgeKind::Horizontal | EdgeKind::WrapHorizontal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub index: usize,
    pub u: Vertex,
    pub v: Vertex,
    pub kind: EdgeKind,
    /// Distinguishes parallel edges. The constructors here never produce
    /// parallel edges, so this is always 0.
    pub slot: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    rows: usize,
    cols: usize,
    topology: Topology,
    edges: Vec<Edge>,
    endpoints: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// The `rows x cols` grid graph.
    pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Self::assemble(rows, cols, Topology::Grid))
    }

    /// The `rows x cols` torus graph; `cols` must be at least 2.
    pub fn torus(rows: usize, cols: usize) -> Result<Graph> {
        if rows == 0 || cols < 2 {
            return Err(Error::InvalidParameter(format!(
                "torus needs rows >= 1 and cols >= 2, got {rows}x{cols}"
            )));
        }
        Ok(Self::assemble(rows, cols, Topology::Torus))
    }

    pub fn build(rows: usize, cols: usize, topology: Topology) -> Result<Graph> {
        match topology {
            Topology::Grid => Self::grid(rows, cols),
            Topology::Torus => Self::torus(rows, cols),
        }
    }

    fn assemble(rows: usize, cols: usize, topology: Topology) -> Graph {
        let mut pairs: Vec<(Vertex, Vertex, EdgeKind)> = Vec::new();
        for r in 0..rows {
            for c in 0..cols.saturating_sub(1) {
                pairs.push((Vertex::new(r, c), Vertex::new(r, c + 1), EdgeKind::Horizontal));
            }
        }
        for r in 0..rows.saturating_sub(1) {
            for c in 0..cols {
                pairs.push((Vertex::new(r, c), Vertex::new(r + 1, c), EdgeKind::Vertical));
            }
        }
        if topology == Topology::Torus {
            if cols > 2 {
                for r in 0..rows {
                    pairs.push((Vertex::new(r, 0), Vertex::new(r, cols - 1), EdgeKind::WrapHorizontal));
                }
            }
            if rows > 2 {
                for c in 0..cols {
                    pairs.push((Vertex::new(0, c), Vertex::new(rows - 1, c), EdgeKind::WrapVertical));
                }
            }
        }

        let mut adjacency = vec![Vec::new(); rows * cols];
        let mut edges = Vec::with_capacity(pairs.len());
        let mut endpoints = Vec::with_capacity(pairs.len());
        for (index, (u, v, kind)) in pairs.into_iter().enumerate() {
            let (a, b) = (u.row * cols + u.col, v.row * cols + v.col);
            adjacency[a].push(index);
            adjacency[b].push(index);
            endpoints.push((a, b));
            edges.push(Edge { index, u, v, kind, slot: 0 });
        }
        Graph { rows, cols, topology, edges, endpoints, adjacency }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn num_vertices(&self) -> usize {
        self.rows * self.cols
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        debug_assert!(v.row < self.rows && v.col < self.cols);
        v.row * self.cols + v.col
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        Vertex::new(index / self.cols, index % self.cols)
    }

    /// Vertex indices of the two ends of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    /// Indices of the edges at vertex `v`, in increasing order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// The end of `e` that is not `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.endpoints[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn edge_between(&self, a: Vertex, b: Vertex) -> Option<usize> {
        let (ia, ib) = (self.vertex_index(a), self.vertex_index(b));
        self.adjacency[ia]
            .iter()
            .copied()
            .find(|&e| self.other_end(e, ia) == ib)
    }

    /// Human-readable name such as `grid(3,4)`.
    pub fn name(&self) -> String {
        format!("{}({},{})", self.topology, self.rows, self.cols)
    }

    /// Two-colouring by breadth-first search. Returns the colour classes with the
    /// class of vertex 0 first, or `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.num_vertices();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let cv = colour[v].unwrap();
                for &e in &self.adjacency[v] {
                    let w = self.other_end(e, v);
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for (v, c) in colour.into_iter().enumerate() {
            if c == Some(false) {
                first.push(v);
            } else {
                second.push(v);
            }
        }
        Some((first, second))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Inequality description of the perfect matching polytope for bipartite
    /// graphs: one vertex equation per vertex plus edge nonnegativity.
    pub fn h_description(&self) -> Result<HDescription> {
        if !self.is_bipartite() {
            return Err(Error::NotBipartite);
        }
        Ok(HDescription {
            equalities: (0..self.num_vertices())
                .map(|v| self.adjacency[v].clone())
                .collect(),
            nonnegativity: (0..self.num_edges()).collect(),
            odd_sets_omitted: true,
        })
    }

    /// Every perfect matching, each as a sorted list of edge indices.
    ///
    /// Works for any graph (bipartite or not). Matchings are produced by always
    /// covering the lowest uncovered vertex, so the output order is fixed.
    pub fn perfect_matchings(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_perfect_matching(|m| {
            out.push(m.to_vec());
            true
        });
        out
    }

    /// Streams perfect matchings (sorted edge lists) in the order of
    /// [`Self::perfect_matchings`]; `visit` returns false to stop.
    pub fn for_each_perfect_matching(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        fn walk(
            g: &Graph,
            covered: &mut [bool],
            chosen: &mut Vec<usize>,
            visit: &mut impl FnMut(&[usize]) -> bool,
        ) -> bool {
            let Some(v) = covered.iter().position(|&c| !c) else {
                let mut m = chosen.clone();
                m.sort_unstable();
                return visit(&m);
            };
            covered[v] = true;
            for &e in g.incident(v) {
                let w = g.other_end(e, v);
                if !covered[w] {
                    covered[w] = true;
                    chosen.push(e);
                    let go_on = walk(g, covered, chosen, visit);
                    chosen.pop();
                    covered[w] = false;
                    if !go_on {
                        covered[v] = false;
                        return false;
                    }
                }
            }
            covered[v] = false;
            true
        }

        if self.num_vertices().is_multiple_of(2) {
            let mut covered = vec![false; self.num_vertices()];
            walk(self, &mut covered, &mut Vec::new(), &mut visit);
        }
    }

    /// JSON document with the canonical edge list.
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            rows: self.rows,
            cols: self.cols,
            topology: self.topology,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    index: e.index,
                    u: [e.u.row, e.u.col],
                    v: [e.v.row, e.v.col],
                    kind: e.kind,
                    slot: e.slot,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph document serializes")
    }
}

/// Vertex equations (right-hand side `t` times one) and edge nonnegativity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HDescription {
    /// One row per vertex: the edges whose labels must sum to `t`.
    pub equalities: Vec<Vec<usize>>,
    /// One nonnegativity constraint per edge.
    pub nonnegativity: Vec<usize>,
    pub odd_sets_omitted: bool,
}

impl HDescription {
    /// Whether `x` lies in the `t`-th dilate.
    pub fn contains(&self, x: &[i64], t: i64) -> bool {
        self.nonnegativity.iter().all(|&e| x[e] >= 0)
            && self
                .equalities
                .iter()
                .all(|row| row.iter().map(|&e| x[e]).sum::<i64>() == t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub index: usize,
    pub u: [usize; 2],
    pub v: [usize; 2],
    pub kind: EdgeKind,
    pub slot: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    pub edges: Vec<EdgeRecord>,
}

impl GraphDocument {
    /// Rebuilds the graph and checks that the edge list is the canonical one.
    pub fn into_graph(self) -> Result<Graph> {
        let g = Graph::build(self.rows, self.cols, self.topology)?;
        if g.to_document() != self {
            return Err(Error::InvalidParameter(
                "edge list is not in canonical order for this graph".into(),
            ));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids() {
        let g = Graph::grid(1, 2).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (2, 1));

        let g = Graph::grid(3, 4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (12, 17));

        let g = Graph::grid(2, 2).unwrap();
        assert_eq!(g.num_edges(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn torus_edge_counts() {
        let g = Graph::torus(2, 4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (8, 12));
        assert!((0..8).all(|v| g.degree(v) == 3));

        let g = Graph::torus(4, 4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (16, 32));

        let g = Graph::torus(1, 4).unwrap();
        assert_eq!(g.num_edges(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
        assert_eq!(g.perfect_matchings().len(), 2);

        let g = Graph::torus(1, 2).unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn torus_rejects_single_column() {
        assert!(Graph::torus(3, 1).is_err());
        assert!(Graph::grid(0, 3).is_err());
    }

    #[test]
    fn edge_order_is_horizontal_vertical_wraps() {
        let g = Graph::torus(3, 3).unwrap();
        let kinds: Vec<_> = g.edges().iter().map(|e| e.kind).collect();
        assert!(kinds[..6].iter().all(|&k| k == EdgeKind::Horizontal));
        assert!(kinds[6..12].iter().all(|&k| k == EdgeKind::Vertical));
        assert!(kinds[12..15].iter().all(|&k| k == EdgeKind::WrapHorizontal));
        assert!(kinds[15..18].iter().all(|&k| k == EdgeKind::WrapVertical));
        assert_eq!(g.edge(0).u, Vertex::new(0, 0));
        assert_eq!(g.edge(0).v, Vertex::new(0, 1));
    }

    #[test]
    fn bipartition_classes() {
        let (a, b) = Graph::grid(3, 3).unwrap().bipartition().unwrap();
        assert_eq!((a.len(), b.len()), (5, 4));

        assert!(Graph::torus(2, 3).unwrap().bipartition().is_none());

        let (a, b) = Graph::torus(4, 4).unwrap().bipartition().unwrap();
        assert_eq!((a.len(), b.len()), (8, 8));

        assert!(Graph::torus(1, 4).unwrap().is_bipartite());
        assert!(!Graph::torus(1, 5).unwrap().is_bipartite());
        assert!(!Graph::torus(4, 3).unwrap().is_bipartite());
    }

    #[test]
    fn h_description_shapes() {
        let h = Graph::grid(2, 2).unwrap().h_description().unwrap();
        assert_eq!((h.equalities.len(), h.nonnegativity.len()), (4, 4));
        assert!(h.odd_sets_omitted);

        let g = Graph::grid(3, 4).unwrap();
        let h = g.h_description().unwrap();
        assert_eq!((h.equalities.len(), h.nonnegativity.len()), (12, 17));
        for (v, row) in h.equalities.iter().enumerate() {
            assert_eq!(row.as_slice(), g.incident(v));
        }

        assert!(matches!(
            Graph::torus(2, 3).unwrap().h_description(),
            Err(Error::NotBipartite)
        ));
    }

    #[test]
    fn h_description_contains_matchings() {
        let g = Graph::grid(3, 4).unwrap();
        let h = g.h_description().unwrap();
        for m in g.perfect_matchings() {
            let mut x = vec![0i64; g.num_edges()];
            for e in m {
                x[e] = 1;
            }
            assert!(h.contains(&x, 1));
            assert!(!h.contains(&x, 2));
        }
    }

    #[test]
    fn matchings_of_small_boards() {
        assert_eq!(Graph::grid(3, 4).unwrap().perfect_matchings().len(), 11);
        assert_eq!(Graph::grid(2, 2).unwrap().perfect_matchings().len(), 2);
        assert!(Graph::grid(3, 3).unwrap().perfect_matchings().is_empty());
    }

    #[test]
    fn document_round_trip() {
        let g = Graph::torus(4, 3).unwrap();
        let text = g.to_json();
        let doc: GraphDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.clone().into_graph().unwrap(), g);
        assert!(text.contains("\"wrap-vertical\""));

        let mut bad = doc;
        bad.edges.swap(0, 1);
        assert!(bad.into_graph().is_err());
    }
}
