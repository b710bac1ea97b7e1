//! A small relational-structure view shared by the refinement engine and the
//! pebble games: one binary relation (adjacency), unary color relations, and
//! an optional ternary relation (the rotation cycles of an embedding).

use crate::graph::Graph;
use crate::rotation::RotationSystem;

#[derive(Clone, Debug)]
pub struct RelStructure {
    n: usize,
    adj: Vec<bool>,
    colors: Vec<u32>,
    /// `ternary[x * n + y] = Some(z)` encodes T(x, y, z); for rotation systems
    /// z is the successor of y in the cycle at x.
    ternary: Option<Vec<Option<u32>>>,
}

impl RelStructure {
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut adj = vec![false; n * n];
        for (u, v) in g.edges() {
            adj[u * n + v] = true;
            adj[v * n + u] = true;
        }
        RelStructure { n, adj, colors: g.colors().to_vec(), ternary: None }
    }

    pub fn from_rotation(r: &RotationSystem) -> Self {
        let g = r.graph();
        let n = g.n();
        let mut s = Self::from_graph(g);
        let mut t = vec![None; n * n];
        for x in 0..n {
            for &y in g.neighbors(x) {
                t[x * n + y] = Some(r.successor(x, y).unwrap() as u32);
            }
        }
        s.ternary = Some(t);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn has_ternary(&self) -> bool {
        self.ternary.is_some()
    }

    pub fn t(&self, x: usize, y: usize, z: usize) -> bool {
        match &self.ternary {
            Some(t) => t[x * self.n + y] == Some(z as u32),
            None => false,
        }
    }
}
