//! Test-instance generators and the brute-force isomorphism oracle that
//! grounds the rest of the suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::{Graph, TreeDecomposition};
use crate::rotation::RotationSystem;

pub const DEFAULT_ORACLE_BUDGET: usize = 10;

/// Exact isomorphism by backtracking over vertex bijections, pruning by
/// color, degree, and adjacency consistency with the partial map.
pub fn brute_force_iso(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, Error> {
    brute_force_iso_budget(g, h, DEFAULT_ORACLE_BUDGET)
}

pub fn brute_force_iso_budget(
    g: &Graph,
    h: &Graph,
    max_n: usize,
) -> Result<Option<Vec<usize>>, Error> {
    if g.n() > max_n || h.n() > max_n {
        return Err(Error::BudgetExceeded(format!(
            "oracle limited to {max_n} vertices; got {} and {}",
            g.n(),
            h.n()
        )));
    }
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let mut gdeg: Vec<(u32, usize)> = (0..n).map(|v| (g.color(v), g.degree(v))).collect();
    let mut hdeg: Vec<(u32, usize)> = (0..n).map(|v| (h.color(v), h.degree(v))).collect();
    gdeg.sort_unstable();
    hdeg.sort_unstable();
    if gdeg != hdeg {
        return Ok(None);
    }
    // map vertices in BFS order so each step is constrained by a mapped neighbor
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_unstable_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for &root in &by_degree {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        g: &Graph,
        h: &Graph,
        order: &[usize],
        pos: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&u) = order.get(pos) else { return true };
        'cand: for w in 0..h.n() {
            if used[w] || g.color(u) != h.color(w) || g.degree(u) != h.degree(w) {
                continue;
            }
            for &x in g.neighbors(u) {
                if map[x] != usize::MAX && !h.has_edge(w, map[x]) {
                    continue 'cand;
                }
            }
            for &y in h.neighbors(w) {
                let x = map.iter().position(|&m| m == y);
                if let Some(x) = x {
                    if !g.has_edge(u, x) {
                        continue 'cand;
                    }
                }
            }
            map[u] = w;
            used[w] = true;
            if extend(g, h, order, pos + 1, map, used) {
                return true;
            }
            map[u] = usize::MAX;
            used[w] = false;
        }
        false
    }
    Ok(extend(g, h, &order, 0, &mut map, &mut used).then_some(map))
}

/// Exact rotation-system isomorphism: search all vertex bijections for one
/// preserving adjacency and the cyclic successor relation.
pub fn brute_force_rotation_iso(
    r: &RotationSystem,
    s: &RotationSystem,
    max_n: usize,
) -> Result<Option<Vec<usize>>, Error> {
    let n = r.graph().n();
    if n > max_n || s.graph().n() > max_n {
        return Err(Error::BudgetExceeded(format!("rotation oracle limited to {max_n} vertices")));
    }
    if n != s.graph().n() {
        return Ok(None);
    }
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permutations(0, &mut p, &mut perms);
    'perm: for f in perms {
        for x in 0..n {
            if r.graph().degree(x) != s.graph().degree(f[x]) {
                continue 'perm;
            }
            for &y in r.graph().neighbors(x) {
                if !s.graph().has_edge(f[x], f[y]) {
                    continue 'perm;
                }
                let z = r.successor(x, y).expect("y is a neighbor of x");
                if s.successor(f[x], f[y]) != Some(f[z]) {
                    continue 'perm;
                }
            }
        }
        return Ok(Some(f));
    }
    Ok(None)
}

/// The even/odd gadget expansion: each base vertex becomes the middle
/// vertices of its even incidence subsets plus an a/b port pair per incident
/// edge; base edges link port pairs straight, or crossed on the twisted
/// edges. For a connected base, instances are isomorphic iff the twist
/// counts have equal parity.
pub fn gen_cfi_twists(base: &Graph, twisted: &[(usize, usize)]) -> Result<Graph, Error> {
    if !base.is_connected() || base.n() == 0 {
        return Err(Error::InvalidArgument("CFI base must be connected and nonempty".into()));
    }
    let edges = base.edges();
    for &(u, v) in twisted {
        if !edges.contains(&(u.min(v), u.max(v))) {
            return Err(Error::InvalidArgument(format!("twist ({u},{v}) is not a base edge")));
        }
    }
    let mut total = 0usize;
    for v in 0..base.n() {
        let d = base.degree(v) as u32;
        if d == 0 {
            return Err(Error::InvalidArgument("CFI base must have minimum degree 1".into()));
        }
        if d > 8 {
            return Err(Error::BudgetExceeded("CFI gadget degree limit is 8".into()));
        }
        total += 2usize.pow(d - 1) + 2 * d as usize;
    }
    let mut g = Graph::new(total);
    // port ids per (vertex, incident-edge position)
    let mut a_port = vec![Vec::new(); base.n()];
    let mut b_port = vec![Vec::new(); base.n()];
    let mut next = 0;
    for v in 0..base.n() {
        let inc = base.neighbors(v);
        let d = inc.len();
        for _ in 0..d {
            a_port[v].push(next);
            b_port[v].push(next + 1);
            next += 2;
        }
        for mask in 0u32..1 << d {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let middle = next;
            next += 1;
            for i in 0..d {
                let port = if mask >> i & 1 == 1 { a_port[v][i] } else { b_port[v][i] };
                g.add_edge(middle, port)?;
            }
        }
    }
    let slot = |v: usize, w: usize| base.neighbors(v).iter().position(|&x| x == w).unwrap();
    for &(u, v) in &edges {
        let (iu, iv) = (slot(u, v), slot(v, u));
        let crossed = twisted.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (u, v));
        if crossed {
            g.add_edge(a_port[u][iu], b_port[v][iv])?;
            g.add_edge(b_port[u][iu], a_port[v][iv])?;
        } else {
            g.add_edge(a_port[u][iu], a_port[v][iv])?;
            g.add_edge(b_port[u][iu], b_port[v][iv])?;
        }
    }
    Ok(g)
}

pub fn gen_cfi(base: &Graph, twist: bool) -> Result<Graph, Error> {
    let twists: Vec<(usize, usize)> =
        if twist { base.edges().into_iter().take(1).collect() } else { Vec::new() };
    gen_cfi_twists(base, &twists)
}

/// Uniform random labeled tree via a random Prüfer sequence.
pub fn gen_tree(n: usize, seed: u64) -> Result<Graph, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("tree needs at least one vertex".into()));
    }
    let mut g = Graph::new(n);
    if n == 1 {
        return Ok(g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &v in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        g.add_edge(leaf, v)?;
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    g.add_edge(rest[0], rest[1])?;
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct PartialKTree {
    pub graph: Graph,
    pub decomposition: TreeDecomposition,
}

/// A connected partial k-tree with its construction decomposition: grow a
/// k-tree by simplex extension, then drop a random subset of edges outside a
/// spanning tree. Edge deletion never invalidates the decomposition.
pub fn gen_partial_ktree(n: usize, k: usize, seed: u64) -> Result<PartialKTree, Error> {
    if k == 0 || n < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "partial k-tree needs k >= 1 and n >= k+1; got n={n}, k={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut full = Graph::new(n);
    let first: BTreeSet<usize> = (0..=k).collect();
    for u in 0..=k {
        for v in u + 1..=k {
            full.add_edge(u, v)?;
        }
    }
    let mut bags = vec![first];
    let mut tree: Vec<Vec<usize>> = vec![Vec::new()];
    for v in k + 1..n {
        let parent = rng.gen_range(0..bags.len());
        let mut clique = bags[parent].clone();
        let drop = *clique.iter().nth(rng.gen_range(0..clique.len())).unwrap();
        clique.remove(&drop);
        for &u in &clique {
            full.add_edge(v, u)?;
        }
        clique.insert(v);
        bags.push(clique);
        let id = bags.len() - 1;
        tree.push(Vec::new());
        tree[parent].push(id);
        tree[id].push(parent);
    }
    // keep a random spanning tree, then re-add each remaining edge with
    // probability 1/2
    let mut edges = full.edges();
    edges.shuffle(&mut rng);
    let mut graph = Graph::new(n);
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut Vec<usize>, v: usize) -> usize {
        if comp[v] != v {
            comp[v] = find(comp, comp[v]);
        }
        comp[v]
    }
    for &(u, v) in &edges {
        let (ru, rv) = (find(&mut comp, u), find(&mut comp, v));
        if ru != rv {
            comp[ru] = rv;
            graph.add_edge(u, v)?;
        } else if rng.gen_bool(0.5) {
            graph.add_edge(u, v)?;
        }
    }
    let decomposition = TreeDecomposition { tree, bags };
    Ok(PartialKTree { graph, decomposition })
}

/// The canonical regular trap: `(C_n, two disjoint C_{n/2})` — same degree
/// sequence, non-isomorphic.
pub fn gen_regular_pair(n: usize) -> Result<(Graph, Graph), Error> {
    if n < 6 || n % 2 != 0 {
        return Err(Error::InvalidArgument("regular pair needs even n >= 6".into()));
    }
    let cycle = |g: &mut Graph, vs: &[usize]| -> Result<(), Error> {
        for i in 0..vs.len() {
            g.add_edge(vs[i], vs[(i + 1) % vs.len()])?;
        }
        Ok(())
    };
    let mut g = Graph::new(n);
    cycle(&mut g, &(0..n).collect::<Vec<_>>())?;
    let mut h = Graph::new(n);
    cycle(&mut h, &(0..n / 2).collect::<Vec<_>>())?;
    cycle(&mut h, &(n / 2..n).collect::<Vec<_>>())?;
    Ok((g, h))
}

/// Random rotation system: a random connected graph with independently
/// shuffled cyclic orders at every vertex.
pub fn gen_rotation(n: usize, seed: u64) -> Result<RotationSystem, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("rotation system needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = gen_tree(n, rng.gen())?;
    // sprinkle extra edges to vary the genus
    let extra = if n >= 3 { rng.gen_range(0..n) } else { 0 };
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v)?;
        }
    }
    let mut rot = Vec::with_capacity(n);
    for v in 0..n {
        let mut cycle: Vec<usize> = g.neighbors(v).to_vec();
        cycle.shuffle(&mut rng);
        rot.push(cycle);
    }
    RotationSystem::new(rot)
}

/// Exact treewidth by elimination-order dynamic programming over vertex
/// subsets: `f(S)` is the least width eliminating exactly `S` first.
pub fn exact_treewidth(g: &Graph) -> Result<usize, Error> {
    let n = g.n();
    if n > 12 {
        return Err(Error::BudgetExceeded("exact treewidth limited to n <= 12".into()));
    }
    if n == 0 {
        return Ok(0);
    }
    // q(S, v): neighbors of v outside S reachable from v through S
    let q = |s: u32, v: usize| -> usize {
        let mut stack = vec![v];
        let mut visited = 1u32 << v;
        let mut out = 0u32;
        while let Some(x) = stack.pop() {
            for &w in g.neighbors(x) {
                if visited >> w & 1 == 1 {
                    continue;
                }
                visited |= 1 << w;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out.count_ones() as usize
    };
    let mut f = vec![usize::MAX; 1 << n];
    f[0] = 0;
    for s in 1u32..1 << n {
        let mut best = usize::MAX;
        for v in 0..n {
            if s >> v & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            best = best.min(f[rest as usize].max(q(rest, v)));
        }
        f[s as usize] = best;
    }
    Ok(f[(1usize << n) - 1])
}

/// All graphs on `n` vertices up to isomorphism, by minimizing the adjacency
/// bitmask over vertex permutations.
pub fn enumerate_graphs_up_to_iso(n: usize) -> Result<Vec<Graph>, Error> {
    if n > 6 {
        return Err(Error::BudgetExceeded("graph enumeration limited to n <= 6".into()));
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = pairs.len();
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permutations(0, &mut p, &mut perms);
    // how each permutation acts on edge slots
    let pair_index = |u: usize, v: usize| {
        let (u, v) = (u.min(v), u.max(v));
        pairs.iter().position(|&p| p == (u, v)).unwrap()
    };
    let actions: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| pairs.iter().map(|&(u, v)| pair_index(perm[u], perm[v])).collect())
        .collect();
    let mut canon_seen = vec![false; 1usize << m];
    let mut out = Vec::new();
    for mask in 0u32..1 << m {
        let canon = actions
            .iter()
            .map(|act| {
                let mut img = 0u32;
                for (slot, &to) in act.iter().enumerate() {
                    if mask >> slot & 1 == 1 {
                        img |= 1 << to;
                    }
                }
                img
            })
            .min()
            .unwrap();
        if canon == mask && !canon_seen[mask as usize] {
            canon_seen[mask as usize] = true;
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(Graph::from_edges(n, &edges)?);
        }
    }
    Ok(out)
}

fn permutations(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(k + 1, p, out);
        p.swap(k, i);
    }
}
