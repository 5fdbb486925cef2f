//! Splitting a magic labelling of sum `t` into `t` perfect matchings.
//!
//! The peel is greedy: find a perfect matching inside the support, subtract
//! it, and repeat on the remaining labelling of sum `t - 1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labelling::MagicLabelling;

/// A perfect matching using only edges with `support[e]`, by augmenting paths.
///
/// Vertices of the class containing vertex 0 are processed in increasing
/// order and their edges in increasing index, so the result is deterministic.
pub fn extract_matching(g: &Graph, support: &[bool]) -> Result<Vec<usize>> {
    let (left, _) = g.bipartition().ok_or(Error::NotBipartite)?;
    if support.len() != g.num_edges() {
        return Err(Error::LengthMismatch { expected: g.num_edges(), got: support.len() });
    }
    if 2 * left.len() != g.num_vertices() {
        return Err(Error::NoMatching);
    }
    // matched edge at each vertex of the other class
    let mut mate: Vec<Option<usize>> = vec![None; g.num_vertices()];

    fn augment(
        g: &Graph,
        support: &[bool],
        v: usize,
        seen: &mut [bool],
        mate: &mut [Option<usize>],
    ) -> bool {
        for &e in g.incident(v) {
            if !support[e] {
                continue;
            }
            let w = g.other_end(e, v);
            if seen[w] {
                continue;
            }
            seen[w] = true;
            let free = match mate[w] {
                None => true,
                Some(f) => augment(g, support, g.other_end(f, w), seen, mate),
            };
            if free {
                mate[w] = Some(e);
                return true;
            }
        }
        false
    }

    for &v in &left {
        let mut seen = vec![false; g.num_vertices()];
        if !augment(g, support, v, &mut seen, &mut mate) {
            return Err(Error::NoMatching);
        }
    }
    let mut edges: Vec<usize> = mate.into_iter().flatten().collect();
    edges.sort_unstable();
    Ok(edges)
}

/// A labelling written as a stack of perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    graph: Arc<Graph>,
    sum: u32,
    layers: Vec<Vec<usize>>,
}

/// JSON form of a [`Decomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub sum: u32,
    pub layers: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn sum(&self) -> u32 {
        self.sum
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// Entrywise sum of the layer incidence vectors.
    pub fn resum(&self) -> Vec<u32> {
        let mut labels = vec![0; self.graph.num_edges()];
        for layer in &self.layers {
            for &e in layer {
                labels[e] += 1;
            }
        }
        labels
    }

    pub fn to_file(&self) -> DecompositionFile {
        DecompositionFile { sum: self.sum, layers: self.layers.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Each layer as a tiling: every cell shows `H` or `V` for the direction
    /// of the domino covering it.
    pub fn render(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            out.push_str(&format!("layer {}\n", i + 1));
            let mut cells = vec!['.'; g.num_vertices()];
            for &e in layer {
                let mark = if g.edge(e).kind.is_horizontal() { 'H' } else { 'V' };
                let (a, b) = g.endpoints(e);
                cells[a] = mark;
                cells[b] = mark;
            }
            for row in cells.chunks(g.cols()) {
                out.extend(row.iter());
                out.push('\n');
            }
        }
        out
    }
}

/// Peels `t` perfect matchings off a magic labelling of sum `t`, checking
/// after every round that what is left is magic of the reduced sum.
pub fn decompose(l: &MagicLabelling) -> Result<Decomposition> {
    let g = l.graph().clone();
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    if !l.is_magic() {
        return Err(Error::NotMagic(format!("vertex sums differ from {}", l.sum())));
    }
    let mut residual = l.labels().to_vec();
    let mut layers = Vec::with_capacity(l.sum() as usize);
    for round in 0..l.sum() {
        let support: Vec<bool> = residual.iter().map(|&x| x > 0).collect();
        let matching = extract_matching(&g, &support)?;
        for &e in &matching {
            residual[e] -= 1;
        }
        layers.push(matching);
        let left = MagicLabelling::new(g.clone(), l.sum() - round - 1, residual.clone())?;
        if !left.is_magic() {
            return Err(Error::NotMagic(format!("residual after layer {} is not magic", round + 1)));
        }
    }
    Ok(Decomposition { graph: g, sum: l.sum(), layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{enumerate, Mode};
    use crate::labelling::{gorenstein_witness, WitnessCase};

    #[test]
    fn four_cycle() {
        let g = Arc::new(Graph::grid(2, 2).unwrap());
        assert_eq!(extract_matching(&g, &[true; 4]).unwrap(), vec![0, 1]);
        let l = MagicLabelling::new(g.clone(), 2, vec![1; 4]).unwrap();
        let d = decompose(&l).unwrap();
        assert_eq!(d.layers(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(d.render(), "layer 1\nHH\nHH\nlayer 2\nVV\nVV\n");
    }

    #[test]
    fn matching_is_its_own_decomposition() {
        let g = Arc::new(Graph::grid(3, 4).unwrap());
        for m in g.perfect_matchings() {
            let l = MagicLabelling::from_matching(g.clone(), &m).unwrap();
            assert_eq!(decompose(&l).unwrap().layers(), &[m]);
        }
    }

    #[test]
    fn witness_round_trip() {
        let w = gorenstein_witness(WitnessCase::ThreeByN5, 3, 6).unwrap();
        let d = decompose(&w).unwrap();
        assert_eq!(d.layers().len(), 5);
        assert_eq!(d.resum(), w.labels());
    }

    #[test]
    fn two_by_three_sum_of_two_matchings() {
        let g = Arc::new(Graph::grid(2, 3).unwrap());
        let ms = g.perfect_matchings();
        let mut labels = vec![0; g.num_edges()];
        for e in ms[0].iter().chain(&ms[2]) {
            labels[*e] += 1;
        }
        let support: Vec<bool> = labels.iter().map(|&x| x > 0).collect();
        let m = extract_matching(&g, &support).unwrap();
        assert!(m.iter().all(|&e| support[e]));
        let d = decompose(&MagicLabelling::new(g, 2, labels.clone()).unwrap()).unwrap();
        assert_eq!(d.resum(), labels);
    }

    #[test]
    fn zero_sum_has_no_layers() {
        let g = Arc::new(Graph::grid(2, 4).unwrap());
        let l = MagicLabelling::new(g.clone(), 0, vec![0; g.num_edges()]).unwrap();
        assert!(decompose(&l).unwrap().layers().is_empty());
    }

    #[test]
    fn invalid_inputs() {
        let g = Arc::new(Graph::grid(2, 2).unwrap());
        let bad = MagicLabelling::new(g.clone(), 1, vec![1, 0, 0, 0]).unwrap();
        assert!(matches!(decompose(&bad), Err(Error::NotMagic(_))));
        assert!(matches!(extract_matching(&g, &[true, false, false, false]), Err(Error::NoMatching)));
        let odd = Graph::torus(2, 3).unwrap();
        assert!(matches!(extract_matching(&odd, &[true; 9]), Err(Error::NotBipartite)));
    }

    #[test]
    fn every_small_labelling_round_trips() {
        let g = Arc::new(Graph::grid(3, 4).unwrap());
        for t in 0..=2 {
            for l in enumerate(&g, t, Mode::All, 10_000).unwrap() {
                let d = decompose(&l).unwrap();
                assert_eq!(d.layers().len(), t as usize);
                assert_eq!(d.resum(), l.labels());
            }
        }
    }
}
