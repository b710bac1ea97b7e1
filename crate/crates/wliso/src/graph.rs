//! Undirected simple graphs over dense vertex ids `0..n`, optional vertex
//! colors, and the set-level primitives used by the game strategies and
//! generators: flaps, separators, `A ⊙ v`, `A ⊖ C`, distances and tree
//! decompositions.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::Error;

/// Undirected simple graph. Vertices are `0..n`; colors are small integers
/// with `0` meaning "uncolored".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    colors: Vec<u32>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n], colors: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u},{v}) out of range for n={}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if self.adj[u].contains(&v) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
        }
        // keep neighbor lists sorted so equality ignores insertion order
        let iu = self.adj[u].partition_point(|&w| w < v);
        self.adj[u].insert(iu, v);
        let iv = self.adj[v].partition_point(|&w| w < u);
        self.adj[v].insert(iv, u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn set_color(&mut self, v: usize, c: u32) {
        self.colors[v] = c;
    }

    /// Sorted edge list `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut es = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    es.push((u, v));
                }
            }
        }
        es.sort_unstable();
        es
    }

    /// Relabel vertices by `perm`: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).unwrap();
        }
        for v in 0..self.n {
            g.colors[perm[v]] = self.colors[v];
        }
        g
    }

    /// BFS distances from `src`; `usize::MAX` for unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `d(u, v)`, or `None` when `u` and `v` lie in different components.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        let d = self.bfs_distances(u)[v];
        (d != usize::MAX).then_some(d)
    }

    /// Maximum pairwise distance; `None` encodes an infinite diameter
    /// (disconnected graph). The empty graph has diameter 0.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for u in 0..self.n {
            let dist = self.bfs_distances(u);
            for &d in &dist {
                if d == usize::MAX {
                    return None;
                }
                diam = diam.max(d);
            }
        }
        Some(diam)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Vertex sets of the connected components of `G ∖ x`, i.e. the flaps.
    /// Each flap is returned sorted; flaps are ordered by smallest member.
    pub fn flaps(&self, x: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.n];
        for &v in x {
            seen[v] = true;
        }
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.insert(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True iff every flap of `G ∖ x` has at most `|V(G)|/2` vertices.
    /// The comparison is exact: `2 * |flap| <= n`.
    pub fn is_separator(&self, x: &BTreeSet<usize>) -> bool {
        self.flaps(x).iter().all(|f| 2 * f.len() <= self.n)
    }

    /// `A ⊙ v`: the union of `a` and the flap of `G ∖ a` containing `v`.
    pub fn odot(&self, a: &BTreeSet<usize>, v: usize) -> Result<BTreeSet<usize>, Error> {
        if a.contains(&v) {
            return Err(Error::InvalidArgument(format!("odot: v={v} lies in A")));
        }
        let mut out = a.clone();
        for flap in self.flaps(a) {
            if flap.contains(&v) {
                out.extend(flap);
                break;
            }
        }
        Ok(out)
    }

    /// `A ⊖ C`: `A ∪ C` plus every vertex with a path to `A` in `G ∖ C` and a
    /// path to `C` in `G ∖ A`.
    pub fn ominus(
        &self,
        a: &BTreeSet<usize>,
        c: &BTreeSet<usize>,
    ) -> Result<BTreeSet<usize>, Error> {
        if a.is_empty() || c.is_empty() {
            return Err(Error::InvalidArgument("ominus: empty operand".into()));
        }
        if a.intersection(c).next().is_some() {
            return Err(Error::InvalidArgument("ominus: operands overlap".into()));
        }
        let reaches_a = self.reachable_avoiding(a, c);
        let reaches_c = self.reachable_avoiding(c, a);
        let mut out: BTreeSet<usize> = a.union(c).copied().collect();
        for x in 0..self.n {
            if !out.contains(&x) && reaches_a[x] && reaches_c[x] {
                out.insert(x);
            }
        }
        Ok(out)
    }

    /// Vertices with a path to `targets` in `G ∖ forbidden`.
    fn reachable_avoiding(&self, targets: &BTreeSet<usize>, forbidden: &BTreeSet<usize>) -> Vec<bool> {
        let mut reach = vec![false; self.n];
        let mut stack: Vec<usize> = targets.iter().copied().collect();
        for &v in targets {
            reach[v] = true;
        }
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !reach[w] && !forbidden.contains(&w) {
                    reach[w] = true;
                    stack.push(w);
                }
            }
        }
        reach
    }

    pub fn induced(&self, vs: &BTreeSet<usize>) -> (Graph, Vec<usize>) {
        let order: Vec<usize> = vs.iter().copied().collect();
        let mut idx = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            idx[v] = i;
        }
        let mut g = Graph::new(order.len());
        for &v in &order {
            g.colors[idx[v]] = self.colors[v];
            for &w in &self.adj[v] {
                if idx[w] != usize::MAX && idx[v] < idx[w] {
                    g.add_edge(idx[v], idx[w]).unwrap();
                }
            }
        }
        (g, order)
    }

    /// Text edge-list format: `n m`, then `m` lines `u v`, then optional
    /// `c v color` lines. Serialization is deterministic (sorted edges).
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        for v in 0..self.n {
            if self.colors[v] != 0 {
                let _ = writeln!(s, "c {v} {}", self.colors[v]);
            }
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Graph, Error> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut hp = header.split_whitespace();
        let n: usize = hp
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected \"n m\"".into()))?;
        let m: usize = hp
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected \"n m\"".into()))?;
        let mut g = Graph::new(n);
        let mut edges_read = 0;
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["c", v, col] => {
                    let v: usize = v.parse().map_err(|_| Error::Parse(format!("bad color line: {line}")))?;
                    let col: u32 = col.parse().map_err(|_| Error::Parse(format!("bad color line: {line}")))?;
                    if v >= n {
                        return Err(Error::Parse(format!("color vertex {v} out of range")));
                    }
                    g.set_color(v, col);
                }
                [u, v] => {
                    let u: usize = u.parse().map_err(|_| Error::Parse(format!("bad edge line: {line}")))?;
                    let v: usize = v.parse().map_err(|_| Error::Parse(format!("bad edge line: {line}")))?;
                    g.add_edge(u, v).map_err(|e| Error::Parse(e.to_string()))?;
                    edges_read += 1;
                }
                _ => return Err(Error::Parse(format!("unrecognized line: {line}"))),
            }
        }
        if edges_read != m {
            return Err(Error::Parse(format!("header says {m} edges, found {edges_read}")));
        }
        Ok(g)
    }
}

/// A tree of bags covering the graph.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    /// Adjacency between decomposition nodes; must form a tree.
    pub tree: Vec<Vec<usize>>,
    /// `bags[i]` is the vertex set X_i.
    pub bags: Vec<BTreeSet<usize>>,
}

/// Which tree-decomposition axiom failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionError {
    NotATree,
    VertexUncovered(usize),
    EdgeUncovered(usize, usize),
    ConnectivityViolated(usize),
}

impl std::fmt::Display for DecompositionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecompositionError::NotATree => write!(f, "decomposition graph is not a tree"),
            DecompositionError::VertexUncovered(v) => write!(f, "vertex {v} in no bag"),
            DecompositionError::EdgeUncovered(u, v) => write!(f, "edge ({u},{v}) uncovered"),
            DecompositionError::ConnectivityViolated(v) => {
                write!(f, "bags containing {v} are not connected in the tree")
            }
        }
    }
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the three decomposition axioms against `g`.
    /// Returns the width on success, the first failing axiom otherwise.
    pub fn validate(&self, g: &Graph) -> Result<usize, DecompositionError> {
        let t = self.tree.len();
        if t != self.bags.len() || t == 0 {
            return Err(DecompositionError::NotATree);
        }
        // tree check: connected with t-1 edges
        let mut edge_count = 0;
        for (i, nb) in self.tree.iter().enumerate() {
            for &j in nb {
                if j >= t || j == i || !self.tree[j].contains(&i) {
                    return Err(DecompositionError::NotATree);
                }
            }
            edge_count += nb.len();
        }
        if edge_count != 2 * (t - 1) {
            return Err(DecompositionError::NotATree);
        }
        let mut seen = vec![false; t];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &self.tree[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(DecompositionError::NotATree);
        }

        // coverage
        for v in 0..g.n() {
            if !self.bags.iter().any(|b| b.contains(&v)) {
                return Err(DecompositionError::VertexUncovered(v));
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                return Err(DecompositionError::EdgeUncovered(u, v));
            }
        }

        // connectivity: the nodes whose bag contains v induce a subtree
        for v in 0..g.n() {
            let holders: Vec<usize> =
                (0..t).filter(|&i| self.bags[i].contains(&v)).collect();
            let mut seen = vec![false; t];
            let mut stack = vec![holders[0]];
            seen[holders[0]] = true;
            let mut reached = 0;
            while let Some(i) = stack.pop() {
                reached += 1;
                for &j in &self.tree[i] {
                    if !seen[j] && self.bags[j].contains(&v) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            if reached != holders.len() {
                return Err(DecompositionError::ConnectivityViolated(v));
            }
        }
        Ok(self.width())
    }

    /// Nodes on the unique tree path from `i` to `j` (inclusive).
    pub fn tree_path(&self, i: usize, j: usize) -> Vec<usize> {
        let t = self.tree.len();
        let mut prev = vec![usize::MAX; t];
        let mut queue = std::collections::VecDeque::new();
        prev[i] = i;
        queue.push_back(i);
        while let Some(u) = queue.pop_front() {
            if u == j {
                break;
            }
            for &w in &self.tree[u] {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![j];
        let mut cur = j;
        while cur != i {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}
