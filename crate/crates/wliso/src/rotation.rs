//! Rotation systems (combinatorial maps) and the coordinate-based
//! isomorphism decision procedure.
//!
//! A rotation system is a connected graph together with, at each vertex, a
//! single directed cycle on its neighborhood — the clockwise edge order of an
//! orientable embedding. Fixing an ordered edge `(a, b)` induces a global
//! coordinate system: every vertex is addressed by the turn sequence of the
//! extreme-left shortest path reaching it, and these addresses are injective.
//! Two systems are isomorphic iff some choice of origin edge in the second
//! system reproduces the address book of the first.

use rayon::prelude::*;

use crate::error::Error;
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct RotationSystem {
    g: Graph,
    /// `rot[x]`: the neighbors of `x` in cyclic (clockwise) order.
    rot: Vec<Vec<usize>>,
}

/// Address of `target` in the coordinate system with origin edge `origin`:
/// the turn sequence `(c_1, …, c_l)` of the extreme-left shortest path,
/// `l = d(a, target)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoordinateVector {
    pub origin: (usize, usize),
    pub target: usize,
    pub coords: Vec<usize>,
}

/// Outcome of `lemma_split_check`: the deepest common-prefix vertices `u, u2`
/// with their path predecessors `w, w2`, and the (unequal) re-based suffix
/// coordinates of the targets.
#[derive(Clone, Debug)]
pub struct SplitWitness {
    pub u: usize,
    pub u2: usize,
    pub w: usize,
    pub w2: usize,
    pub suffix: Vec<usize>,
    pub suffix2: Vec<usize>,
}

impl RotationSystem {
    /// Build from explicit cyclic neighbor lists; the graph is inferred.
    pub fn new(rot: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n = rot.len();
        let mut g = Graph::new(n);
        for (x, cycle) in rot.iter().enumerate() {
            let mut seen = vec![false; n];
            for &y in cycle {
                if y >= n {
                    return Err(Error::InvalidRotation(format!(
                        "vertex {x}: neighbor {y} out of range"
                    )));
                }
                if y == x {
                    return Err(Error::InvalidRotation(format!("vertex {x}: self-loop")));
                }
                if seen[y] {
                    return Err(Error::InvalidRotation(format!(
                        "vertex {x}: neighbor {y} listed twice"
                    )));
                }
                seen[y] = true;
            }
        }
        for (x, cycle) in rot.iter().enumerate() {
            for &y in cycle {
                if !rot[y].contains(&x) {
                    return Err(Error::InvalidRotation(format!(
                        "asymmetric incidence: {y} in the cycle at {x} but not conversely"
                    )));
                }
                if y > x {
                    g.add_edge(x, y).map_err(|e| Error::InvalidRotation(e.to_string()))?;
                }
            }
        }
        if !g.is_connected() {
            return Err(Error::InvalidRotation("underlying graph is disconnected".into()));
        }
        Ok(RotationSystem { g, rot })
    }

    /// Build from a ternary successor relation `T(x, y, z)` on a given graph,
    /// checking that every `T_x` is a single directed cycle covering the
    /// neighborhood of `x`.
    pub fn from_ternary(g: &Graph, triples: &[(usize, usize, usize)]) -> Result<Self, Error> {
        let n = g.n();
        let mut succ: Vec<Vec<Option<usize>>> = (0..n).map(|_| vec![None; n]).collect();
        for &(x, y, z) in triples {
            if x >= n || y >= n || z >= n {
                return Err(Error::InvalidRotation(format!("triple ({x},{y},{z}) out of range")));
            }
            if !g.has_edge(x, y) || !g.has_edge(x, z) {
                return Err(Error::InvalidRotation(format!(
                    "triple ({x},{y},{z}): arguments must be neighbors of {x}"
                )));
            }
            if succ[x][y].replace(z).is_some() {
                return Err(Error::InvalidRotation(format!(
                    "vertex {x}: two successors declared for neighbor {y}"
                )));
            }
        }
        let mut rot = Vec::with_capacity(n);
        for x in 0..n {
            let nbrs = g.neighbors(x);
            let mut cycle = Vec::with_capacity(nbrs.len());
            if let Some(&start) = nbrs.first() {
                let mut cur = start;
                loop {
                    cycle.push(cur);
                    cur = succ[x][cur].ok_or_else(|| {
                        Error::InvalidRotation(format!(
                            "vertex {x}: neighbor {cur} has no successor"
                        ))
                    })?;
                    if cur == start {
                        break;
                    }
                    if cycle.len() > nbrs.len() {
                        return Err(Error::InvalidRotation(format!(
                            "vertex {x}: successor relation is not injective"
                        )));
                    }
                }
            }
            if cycle.len() != nbrs.len() {
                return Err(Error::InvalidRotation(format!(
                    "vertex {x}: successors form more than one cycle on the neighborhood"
                )));
            }
            rot.push(cycle);
        }
        Self::new(rot)
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn rot(&self, x: usize) -> &[usize] {
        &self.rot[x]
    }

    /// The unique `z` with `T(x, y, z)`: the cyclic successor of `y` at `x`.
    pub fn successor(&self, x: usize, y: usize) -> Option<usize> {
        let cycle = &self.rot[x];
        let i = cycle.iter().position(|&w| w == y)?;
        Some(cycle[(i + 1) % cycle.len()])
    }

    /// `c_xy(z)`: the position of `z` along the cycle at `x`, counting from
    /// `c_xy(y) = 0`; range `[0, deg(x))`.
    pub fn local_coord(&self, x: usize, y: usize, z: usize) -> Result<usize, Error> {
        let cycle = &self.rot[x];
        let py = cycle.iter().position(|&w| w == y);
        let pz = cycle.iter().position(|&w| w == z);
        match (py, pz) {
            (Some(py), Some(pz)) => Ok((pz + cycle.len() - py) % cycle.len()),
            _ => Err(Error::InvalidArgument(format!(
                "local coordinate at {x}: {y} and {z} must both be neighbors"
            ))),
        }
    }

    /// Coordinates of every vertex relative to the ordered edge `(a, b)`:
    /// layered BFS taking, at each vertex, the lexicographically least
    /// extension over predecessors in the previous layer.
    pub fn global_coords(&self, a: usize, b: usize) -> Result<Vec<CoordinateVector>, Error> {
        if !self.g.has_edge(a, b) {
            return Err(Error::InvalidArgument(format!("origin ({a},{b}) is not an edge")));
        }
        let n = self.g.n();
        let dist = self.g.bfs_distances(a);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&v| dist[v]);
        let mut coords: Vec<Vec<usize>> = vec![Vec::new(); n];
        // predecessor on the extreme-left path; the turn reference at a is b
        let mut pred: Vec<usize> = vec![usize::MAX; n];
        for &v in order.iter().filter(|&&v| dist[v] >= 1) {
            let mut best: Option<(Vec<usize>, usize)> = None;
            for &u in self.g.neighbors(v) {
                if dist[u] + 1 != dist[v] {
                    continue;
                }
                let reference = if u == a { b } else { pred[u] };
                let mut cand = coords[u].clone();
                cand.push(self.local_coord(u, reference, v)?);
                if best.as_ref().is_none_or(|(c, _)| cand < *c) {
                    best = Some((cand, u));
                }
            }
            let (c, u) = best.expect("connected graph: every BFS layer has a predecessor");
            coords[v] = c;
            pred[v] = u;
        }
        Ok((0..n)
            .map(|v| CoordinateVector { origin: (a, b), target: v, coords: coords[v].clone() })
            .collect())
    }

    /// Isomorphism test by coordinate matching: fix the least ordered edge of
    /// `self` and try every ordered edge of `other` as its image. Candidates
    /// are examined in parallel; the report order is the sorted origin order.
    pub fn iso_decide(&self, other: &RotationSystem) -> Result<Option<Vec<usize>>, Error> {
        let (n, m) = (self.g.n(), other.g.n());
        if n != m || self.g.edge_count() != other.g.edge_count() {
            return Ok(None);
        }
        if n == 1 {
            return Ok(Some(vec![0]));
        }
        let (a, b) = *self
            .g
            .edges()
            .first()
            .ok_or_else(|| Error::InvalidGraph("connected system without edges".into()))?;
        let base = self.global_coords(a, b)?;
        let mut origins: Vec<(usize, usize)> = Vec::new();
        for (u, v) in other.g.edges() {
            origins.push((u, v));
            origins.push((v, u));
        }
        origins.sort_unstable();
        let hits: Vec<Option<Vec<usize>>> = origins
            .par_iter()
            .map(|&(a2, b2)| {
                let cand = other.global_coords(a2, b2).ok()?;
                self.match_coords(other, &base, &cand)
            })
            .collect();
        Ok(hits.into_iter().flatten().next())
    }

    fn match_coords(
        &self,
        other: &RotationSystem,
        base: &[CoordinateVector],
        cand: &[CoordinateVector],
    ) -> Option<Vec<usize>> {
        let n = self.g.n();
        let mut by_coords: Vec<(&[usize], usize)> =
            cand.iter().map(|c| (c.coords.as_slice(), c.target)).collect();
        by_coords.sort_unstable();
        let mut f = vec![usize::MAX; n];
        for c in base {
            let i = by_coords.binary_search_by(|&(k, _)| k.cmp(c.coords.as_slice())).ok()?;
            f[c.target] = by_coords[i].1;
        }
        // coordinates are injective on both sides, so f is a bijection; check
        // that it preserves edges and the rotation cycles
        for x in 0..n {
            for &y in self.g.neighbors(x) {
                if !other.g.has_edge(f[x], f[y]) {
                    return None;
                }
                let z = self.successor(x, y).expect("y is a neighbor of x");
                if other.successor(f[x], f[y]) != Some(f[z]) {
                    return None;
                }
            }
        }
        Some(f)
    }

    /// Coordinate-splitting check: given targets with equal distance but
    /// unequal coordinates, re-basing at the deepest common-prefix vertices
    /// must keep the suffix coordinates unequal.
    pub fn lemma_split_check(
        &self,
        other: &RotationSystem,
        (a, b, v): (usize, usize, usize),
        (a2, b2, v2): (usize, usize, usize),
    ) -> Result<SplitWitness, Error> {
        let cs = self.global_coords(a, b)?;
        let cs2 = other.global_coords(a2, b2)?;
        let (cv, cv2) = (&cs[v].coords, &cs2[v2].coords);
        if cv.len() != cv2.len() {
            return Err(Error::InvalidArgument(
                "split check requires d(a,v) = d(a2,v2)".into(),
            ));
        }
        if cv == cv2 {
            return Err(Error::InvalidArgument(
                "split check requires unequal coordinates".into(),
            ));
        }
        let split = cv.iter().zip(cv2.iter()).position(|(x, y)| x != y).unwrap();
        let path = self.reconstruct_path(a, b, cv)?;
        let path2 = other.reconstruct_path(a2, b2, cv2)?;
        // at the split depth the prefixes (hence prefix vertices) agree; their
        // predecessors give the re-based origin edges
        let (u, u2) = (path[split], path2[split]);
        let (w, w2) = if split == 0 { (b, b2) } else { (path[split - 1], path2[split - 1]) };
        let suffix = self.global_coords(u, w)?[v].coords.clone();
        let suffix2 = other.global_coords(u2, w2)?[v2].coords.clone();
        assert_ne!(suffix, suffix2, "re-based suffix coordinates must stay unequal");
        Ok(SplitWitness { u, u2, w, w2, suffix, suffix2 })
    }

    /// The extreme-left path encoded by a coordinate vector.
    fn reconstruct_path(&self, a: usize, b: usize, coords: &[usize]) -> Result<Vec<usize>, Error> {
        let mut path = vec![a];
        let mut reference = b;
        let mut cur = a;
        for &c in coords {
            let cycle = &self.rot[cur];
            let p = cycle
                .iter()
                .position(|&w| w == reference)
                .ok_or_else(|| Error::InvalidArgument("bad coordinate vector".into()))?;
            let next = cycle[(p + c) % cycle.len()];
            path.push(next);
            reference = cur;
            cur = next;
        }
        Ok(path)
    }

    /// Faces of the embedding as closed directed-edge walks, traced with the
    /// next-edge rule `(u, v) → (v, succ_v(u))`.
    pub fn face_walk(&self) -> Vec<Vec<(usize, usize)>> {
        let mut darts: Vec<(usize, usize)> = Vec::new();
        for (u, v) in self.g.edges() {
            darts.push((u, v));
            darts.push((v, u));
        }
        darts.sort_unstable();
        let idx = |d: (usize, usize)| darts.binary_search(&d).unwrap();
        let mut visited = vec![false; darts.len()];
        let mut faces = Vec::new();
        for start in 0..darts.len() {
            if visited[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = darts[start];
            loop {
                visited[idx(cur)] = true;
                face.push(cur);
                let (u, v) = cur;
                cur = (v, self.successor(v, u).expect("u is a neighbor of v"));
                if cur == darts[start] {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// Euler characteristic `n − m + f` of the embedding.
    pub fn euler_characteristic(&self) -> i64 {
        let f = if self.g.edge_count() == 0 { 1 } else { self.face_walk().len() };
        self.g.n() as i64 - self.g.edge_count() as i64 + f as i64
    }

    /// One line per vertex: `v: w1 w2 … wd` with the neighborhood in cyclic
    /// order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, cycle) in self.rot.iter().enumerate() {
            out.push_str(&format!("{x}:"));
            for &y in cycle {
                out.push_str(&format!(" {y}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `v: w1 w2 …`, got {line:?}")))?;
            let v: usize = head
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex id {head:?}")))?;
            let nbrs: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad neighbor {t:?}"))))
                .collect::<Result<_, _>>()?;
            rows.push((v, nbrs));
        }
        let n = rows.len();
        let mut rot: Vec<Option<Vec<usize>>> = vec![None; n];
        for (v, nbrs) in rows {
            if v >= n {
                return Err(Error::Parse(format!(
                    "vertex {v} out of range: ids must be 0..{n}"
                )));
            }
            if rot[v].replace(nbrs).is_some() {
                return Err(Error::Parse(format!("vertex {v} listed twice")));
            }
        }
        let rot: Vec<Vec<usize>> = rot.into_iter().map(Option::unwrap).collect();
        Self::new(rot)
    }
}
