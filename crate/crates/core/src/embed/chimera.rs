use std::collections::BTreeSet;

/// A Chimera graph: an `m × n` grid of `K_{t,t}` unit cells.
///
/// Qubit `((row·n + col)·2 + side)·t + k` is the `k`-th qubit of the cell's
/// vertical (`side = 0`) or horizontal (`side = 1`) half. Vertical qubits
/// couple to the same `k` in the cells above and below, horizontal qubits to
/// the same `k` in the cells left and right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChimeraGraph {
    pub m: usize,
    pub n: usize,
    pub t: usize,
    adjacency: Vec<Vec<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

impl ChimeraGraph {
    /// Any zero dimension gives the empty graph.
    pub fn new(m: usize, n: usize, t: usize) -> Self {
        let mut g = ChimeraGraph {
            m,
            n,
            t,
            adjacency: vec![Vec::new(); m * n * 2 * t],
            edges: BTreeSet::new(),
        };
        for row in 0..m {
            for col in 0..n {
                for a in 0..t {
                    for b in 0..t {
                        g.add_edge(g.qubit(row, col, 0, a), g.qubit(row, col, 1, b));
                    }
                    if row + 1 < m {
                        g.add_edge(g.qubit(row, col, 0, a), g.qubit(row + 1, col, 0, a));
                    }
                    if col + 1 < n {
                        g.add_edge(g.qubit(row, col, 1, a), g.qubit(row, col + 1, 1, a));
                    }
                }
            }
        }
        for list in &mut g.adjacency {
            list.sort_unstable();
        }
        g
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.insert((a.min(b), a.max(b)));
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
    }

    pub fn qubit(&self, row: usize, col: usize, side: usize, k: usize) -> usize {
        ((row * self.n + col) * 2 + side) * self.t + k
    }

    /// `(row, col, side, k)` of a qubit id.
    pub fn coordinates(&self, q: usize) -> (usize, usize, usize, usize) {
        let k = q % self.t;
        let side = (q / self.t) % 2;
        let cell = q / (2 * self.t);
        (cell / self.n, cell % self.n, side, k)
    }

    pub fn num_qubits(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edges `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

pub fn build_chimera(m: usize, n: usize, t: usize) -> ChimeraGraph {
    ChimeraGraph::new(m, n, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let g = build_chimera(1, 1, 4);
        assert_eq!((g.num_qubits(), g.num_edges()), (8, 16));
        let g = build_chimera(2, 1, 4);
        assert_eq!((g.num_qubits(), g.num_edges()), (16, 36));
        let g = build_chimera(16, 16, 4);
        assert_eq!(g.num_qubits(), 2048);
        assert!((0..2048).all(|q| g.neighbors(q).len() <= 6));
        assert_eq!(build_chimera(0, 3, 4).num_qubits(), 0);
    }

    #[test]
    fn coordinates_round_trip() {
        let g = build_chimera(3, 5, 4);
        for q in 0..g.num_qubits() {
            let (r, c, s, k) = g.coordinates(q);
            assert_eq!(g.qubit(r, c, s, k), q);
        }
    }

    #[test]
    fn inter_cell_couplers_keep_orientation() {
        let g = build_chimera(2, 2, 4);
        for (a, b) in g.edges() {
            let (ra, ca, sa, ka) = g.coordinates(a);
            let (rb, cb, sb, kb) = g.coordinates(b);
            if (ra, ca) != (rb, cb) {
                assert_eq!((sa, ka), (sb, kb));
                if sa == 0 {
                    assert_eq!((ca, ra.abs_diff(rb)), (cb, 1));
                } else {
                    assert_eq!((ra, ca.abs_diff(cb)), (rb, 1));
                }
            } else {
                assert_ne!(sa, sb);
            }
        }
    }
}
