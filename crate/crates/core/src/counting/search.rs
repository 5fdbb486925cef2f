//! Depth-first assignment of edge labels for arbitrary small graphs.
//!
//! Vertices are eliminated in column-major order. Each edge is labelled when
//! its earlier endpoint is reached; the last free edge of a vertex takes
//! whatever the vertex still needs. Partial labels are pruned against the
//! residual of the far endpoint and the number of edges it still has open.

use crate::graph::Graph;

pub(crate) struct Search<'g> {
    g: &'g Graph,
    lo: i64,
    order: Vec<usize>,
    /// Edges assigned when `order[k]` is eliminated.
    plan: Vec<Vec<usize>>,
    residual: Vec<i64>,
    open: Vec<usize>,
    labels: Vec<u32>,
}

impl<'g> Search<'g> {
    pub fn new(g: &'g Graph, t: u32, lo: u32) -> Self {
        let order: Vec<usize> = (0..g.cols())
            .flat_map(|c| (0..g.rows()).map(move |r| r * g.cols() + c))
            .collect();
        let mut pos = vec![0; g.num_vertices()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut plan = vec![Vec::new(); order.len()];
        for e in 0..g.num_edges() {
            let (a, b) = g.endpoints(e);
            plan[pos[a].min(pos[b])].push(e);
        }
        Search {
            g,
            lo: i64::from(lo),
            order,
            plan,
            residual: vec![i64::from(t); g.num_vertices()],
            open: (0..g.num_vertices()).map(|v| g.degree(v)).collect(),
            labels: vec![0; g.num_edges()],
        }
    }

    /// Visits every labelling; `sink` returns false to stop early.
    pub fn run(&mut self, sink: &mut impl FnMut(&[u32]) -> bool) {
        self.visit(0, 0, sink);
    }

    fn visit(&mut self, k: usize, i: usize, sink: &mut impl FnMut(&[u32]) -> bool) -> bool {
        if k == self.order.len() {
            return sink(&self.labels);
        }
        let v = self.order[k];
        if i == self.plan[k].len() {
            if self.residual[v] != 0 {
                return true;
            }
            return self.visit(k + 1, 0, sink);
        }
        let e = self.plan[k][i];
        let w = self.g.other_end(e, v);
        let left_here = (self.plan[k].len() - i - 1) as i64;
        let left_there = self.open[w] as i64 - 1;

        let (mut low, mut high) = if left_here == 0 {
            (self.residual[v], self.residual[v])
        } else {
            (self.lo, self.residual[v] - self.lo * left_here)
        };
        low = low.max(self.lo);
        high = high.min(self.residual[w] - self.lo * left_there);
        if left_there == 0 {
            low = low.max(self.residual[w]);
        }

        for x in low..=high {
            self.labels[e] = x as u32;
            self.residual[v] -= x;
            self.residual[w] -= x;
            self.open[v] -= 1;
            self.open[w] -= 1;
            let go_on = self.visit(k, i + 1, sink);
            self.open[v] += 1;
            self.open[w] += 1;
            self.residual[v] += x;
            self.residual[w] += x;
            if !go_on {
                self.labels[e] = 0;
                return false;
            }
        }
        self.labels[e] = 0;
        true
    }
}
