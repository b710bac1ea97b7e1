//! The refinement algorithm as an explicit layered gate DAG: a threshold
//! circuit for the counting variant, a plain Boolean circuit for the
//! count-free variant.
//!
//! The circuit has `r + 2` layers. Layer 0 turns the `2k²·N` isomorphism-type
//! input bits (`N = 2n^k` tuples over both graphs) into a one-hot color
//! assignment `X_0(a, c)`; each of the `r` refinement layers recolors; the
//! final layer compares the two sides' color histograms (counting) or color
//! sets (count-free). Equality of two sums is realized by a pair of threshold
//! gates over the positive literals of one side and the negated literals of
//! the other. The circuit depends only on `(n, k, r, variant)`, so one
//! compilation serves every graph pair of that size.

use rayon::prelude::*;
use std::collections::HashMap;

use crate::error::Error;
use crate::graph::Graph;
use crate::wl::Variant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Input,
    And,
    Or,
    Not,
    /// True iff at least `t` fanin wires are true.
    Threshold(usize),
}

#[derive(Clone, Debug)]
pub struct Gate {
    pub kind: GateKind,
    pub fanin: Vec<u32>,
    /// Refinement layer: 0 = initial coloring, 1..=r = rounds, r+1 = output.
    pub layer: u16,
}

#[derive(Clone, Copy, Debug)]
pub struct CircuitMeta {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub variant: Variant,
    pub gate_count: usize,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct CircuitDag {
    pub gates: Vec<Gate>,
    pub output: u32,
    pub meta: CircuitMeta,
    /// `x_outputs[l][a * N + c]`: gate id of `X_l(a, c)`.
    pub x_outputs: Vec<Vec<u32>>,
    num_inputs: usize,
    /// Gates grouped by structural depth, for levelwise parallel evaluation.
    levels: Vec<Vec<u32>>,
}

struct Builder {
    gates: Vec<Gate>,
    not_cache: HashMap<u32, u32>,
    layer: u16,
}

impl Builder {
    fn push(&mut self, kind: GateKind, fanin: Vec<u32>) -> u32 {
        let id = self.gates.len() as u32;
        self.gates.push(Gate { kind, fanin, layer: self.layer });
        id
    }

    fn not(&mut self, x: u32) -> u32 {
        if let Some(&id) = self.not_cache.get(&x) {
            return id;
        }
        let id = self.push(GateKind::Not, vec![x]);
        self.not_cache.insert(x, id);
        id
    }

    fn xnor(&mut self, x: u32, y: u32) -> u32 {
        let nx = self.not(x);
        let ny = self.not(y);
        let both = self.push(GateKind::And, vec![x, y]);
        let neither = self.push(GateKind::And, vec![nx, ny]);
        self.push(GateKind::Or, vec![both, neither])
    }

    /// `sum(pos) == |neg_src|` gate block: true iff the number of true wires
    /// among `pos` equals the number of false wires among `neg_src`, i.e.
    /// `sum(pos) = sum(neg_src)` when `|pos| = |neg_src|`.
    fn sum_equal(&mut self, pos: &[u32], neg_src: &[u32]) -> u32 {
        let target = neg_src.len();
        let mut wires: Vec<u32> = pos.to_vec();
        for &x in neg_src {
            wires.push(self.not(x));
        }
        let at_least = self.push(GateKind::Threshold(target), wires.clone());
        let above = self.push(GateKind::Threshold(target + 1), wires);
        let not_above = self.not(above);
        self.push(GateKind::And, vec![at_least, not_above])
    }
}

/// Gate-count guard: refinement layers hold Θ(N³) gates, N = 2n^k.
const MAX_EQ_TRIPLES: usize = 1_000_000;

pub fn compile(n: usize, k: usize, r: usize, variant: Variant) -> Result<CircuitDag, Error> {
    if n == 0 || k < 2 {
        return Err(Error::InvalidArgument("circuit compilation needs n >= 1, k >= 2".into()));
    }
    let nk = n.checked_pow(k as u32).filter(|&t| 2 * t <= u32::MAX as usize / 2).ok_or_else(
        || Error::BudgetExceeded(format!("n^k overflow for n={n}, k={k}")),
    )?;
    let nn = 2 * nk;
    if nn.pow(3).max(nn * nn * r.max(1)) > MAX_EQ_TRIPLES {
        return Err(Error::BudgetExceeded(format!(
            "circuit for n={n}, k={k}, r={r} exceeds the {MAX_EQ_TRIPLES}-triple budget"
        )));
    }

    let mut b = Builder { gates: Vec::new(), not_cache: HashMap::new(), layer: 0 };
    let bits = 2 * k * k;
    // inputs: isomorphism-type bit j of tuple a, in (a, j) order
    let z: Vec<u32> = (0..nn * bits).map(|_| b.push(GateKind::Input, Vec::new())).collect();

    // substitution table: subst[(a * k + j) * n + v] = index of the tuple
    // obtained from tuple a by writing vertex v at position j (same side)
    let pow: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    let mut subst = vec![0u32; nn * k * n];
    for a in 0..nn {
        let (base, local) = if a < nk { (0, a) } else { (nk, a - nk) };
        for (j, &p) in pow.iter().enumerate() {
            let digit = local / p % n;
            for v in 0..n {
                subst[(a * k + j) * n + v] = (base + local - digit * p + v * p) as u32;
            }
        }
    }

    // layer 0: Y_0(a, b) compares isotype bitstrings; X_0 one-hots by least index
    let y0: Vec<u32> = {
        let mut y = vec![0u32; nn * nn];
        for a in 0..nn {
            for c in 0..nn {
                let eqs: Vec<u32> =
                    (0..bits).map(|j| b.xnor(z[a * bits + j], z[c * bits + j])).collect();
                y[a * nn + c] = b.push(GateKind::And, eqs);
            }
        }
        y
    };
    let mut x_prev = one_hot_layer(&mut b, &y0, nn);
    let mut x_outputs = vec![x_prev.clone()];

    for layer in 1..=r {
        b.layer = layer as u16;
        // EQ(a, b): the tuples a and b share their previous color (pointwise
        // equality of one-hot rows)
        let mut eq = vec![0u32; nn * nn];
        for a in 0..nn {
            for c in 0..nn {
                let cmps: Vec<u32> =
                    (0..nn).map(|d| b.xnor(x_prev[a * nn + d], x_prev[c * nn + d])).collect();
                eq[a * nn + c] = b.push(GateKind::And, cmps);
            }
        }
        // psi for a pair (a, b) and vertices (v, w): the substitution rows agree
        let psi = |b: &mut Builder, eq: &[u32], a: usize, a2: usize, v: usize, w: usize| {
            let js: Vec<u32> = (0..k)
                .map(|j| {
                    let ia = subst[(a * k + j) * n + v] as usize;
                    let ib = subst[(a2 * k + j) * n + w] as usize;
                    eq[ia * nn + ib]
                })
                .collect();
            b.push(GateKind::And, js)
        };
        let mut y = vec![0u32; nn * nn];
        for a in 0..nn {
            for c in 0..nn {
                let mut parts = vec![eq[a * nn + c]];
                match variant {
                    Variant::Counting => {
                        for v in 0..n {
                            let phis: Vec<u32> =
                                (0..n).map(|v2| psi(&mut b, &eq, a, a, v, v2)).collect();
                            let psis: Vec<u32> =
                                (0..n).map(|w| psi(&mut b, &eq, a, c, v, w)).collect();
                            parts.push(b.sum_equal(&phis, &psis));
                        }
                    }
                    Variant::CountFree => {
                        let mut rows = vec![vec![0u32; n]; n];
                        for v in 0..n {
                            for w in 0..n {
                                rows[v][w] = psi(&mut b, &eq, a, c, v, w);
                            }
                        }
                        let fwd: Vec<u32> = (0..n)
                            .map(|v| b.push(GateKind::Or, rows[v].clone()))
                            .collect();
                        let bwd: Vec<u32> = (0..n)
                            .map(|w| b.push(GateKind::Or, (0..n).map(|v| rows[v][w]).collect()))
                            .collect();
                        parts.push(b.push(GateKind::And, fwd));
                        parts.push(b.push(GateKind::And, bwd));
                    }
                }
                y[a * nn + c] = b.push(GateKind::And, parts);
            }
        }
        x_prev = one_hot_layer(&mut b, &y, nn);
        x_outputs.push(x_prev.clone());
    }

    // output layer: compare the two sides' color classes
    b.layer = (r + 1) as u16;
    let mut per_color = Vec::with_capacity(nn);
    for c in 0..nn {
        let g_side: Vec<u32> = (0..nk).map(|a| x_prev[a * nn + c]).collect();
        let h_side: Vec<u32> = (nk..nn).map(|a| x_prev[a * nn + c]).collect();
        per_color.push(match variant {
            Variant::Counting => b.sum_equal(&g_side, &h_side),
            Variant::CountFree => {
                let any_g = b.push(GateKind::Or, g_side);
                let any_h = b.push(GateKind::Or, h_side);
                b.xnor(any_g, any_h)
            }
        });
    }
    let output = b.push(GateKind::And, per_color);

    let (levels, depth) = compute_levels(&b.gates);
    let meta = CircuitMeta { n, k, r, variant, gate_count: b.gates.len(), depth };
    Ok(CircuitDag {
        gates: b.gates,
        output,
        meta,
        x_outputs,
        num_inputs: nn * bits,
        levels,
    })
}

/// `X(a, c) = Y(a, c) ∧ ⋀_{d<c} ¬Y(a, d)`: color a by the least index with
/// its signature.
fn one_hot_layer(b: &mut Builder, y: &[u32], nn: usize) -> Vec<u32> {
    let mut x = vec![0u32; nn * nn];
    for a in 0..nn {
        let mut fanin = Vec::with_capacity(nn);
        for c in 0..nn {
            fanin.push(y[a * nn + c]);
            x[a * nn + c] = b.push(GateKind::And, fanin.clone());
            // replace the positive literal by its negation for later c
            let last = fanin.len() - 1;
            fanin[last] = b.not(y[a * nn + c]);
        }
    }
    x
}

fn compute_levels(gates: &[Gate]) -> (Vec<Vec<u32>>, usize) {
    let mut level = vec![0usize; gates.len()];
    for (i, g) in gates.iter().enumerate() {
        level[i] = g.fanin.iter().map(|&f| level[f as usize] + 1).max().unwrap_or(0);
    }
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut levels = vec![Vec::new(); depth + 1];
    for (i, &l) in level.iter().enumerate() {
        levels[l].push(i as u32);
    }
    (levels, depth)
}

impl CircuitDag {
    /// The `2k²·N` isomorphism-type bits for a concrete graph pair, in input
    /// gate order.
    pub fn bind_inputs(&self, g: &Graph, h: &Graph) -> Result<Vec<bool>, Error> {
        let (n, k) = (self.meta.n, self.meta.k);
        if g.n() != n || h.n() != n {
            return Err(Error::InvalidArgument(format!(
                "circuit compiled for n={n}, got |V(G)|={}, |V(H)|={}",
                g.n(),
                h.n()
            )));
        }
        let nk = n.pow(k as u32);
        let pow: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
        let mut bits = Vec::with_capacity(2 * nk * 2 * k * k);
        for a in 0..2 * nk {
            let (graph, local) = if a < nk { (g, a) } else { (h, a - nk) };
            let tuple: Vec<usize> = pow.iter().map(|&p| local / p % n).collect();
            for i in 0..k {
                for j in 0..k {
                    bits.push(tuple[i] == tuple[j]);
                }
            }
            for i in 0..k {
                for j in 0..k {
                    bits.push(graph.has_edge(tuple[i], tuple[j]));
                }
            }
        }
        Ok(bits)
    }

    /// Evaluate every gate, levelwise in parallel; returns all gate values.
    pub fn evaluate_all(&self, assignment: &[bool]) -> Result<Vec<bool>, Error> {
        if assignment.len() != self.num_inputs {
            return Err(Error::InvalidArgument(format!(
                "expected {} input bits, got {}",
                self.num_inputs,
                assignment.len()
            )));
        }
        let mut values = vec![false; self.gates.len()];
        for level in &self.levels {
            let computed: Vec<(u32, bool)> = level
                .par_iter()
                .map(|&id| {
                    let gate = &self.gates[id as usize];
                    let val = match gate.kind {
                        GateKind::Input => assignment[id as usize],
                        GateKind::And => gate.fanin.iter().all(|&f| values[f as usize]),
                        GateKind::Or => gate.fanin.iter().any(|&f| values[f as usize]),
                        GateKind::Not => !values[gate.fanin[0] as usize],
                        GateKind::Threshold(t) => {
                            gate.fanin.iter().filter(|&&f| values[f as usize]).count() >= t
                        }
                    };
                    (id, val)
                })
                .collect();
            for (id, val) in computed {
                values[id as usize] = val;
            }
        }
        Ok(values)
    }

    /// The circuit's verdict: `true` means "not distinguished within r rounds".
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, Error> {
        Ok(self.evaluate_all(assignment)?[self.output as usize])
    }

    /// Every tuple must carry exactly one color name at every layer.
    pub fn check_one_hot(&self, values: &[bool]) -> bool {
        let nn = 2 * self.meta.n.pow(self.meta.k as u32);
        self.x_outputs.iter().all(|xs| {
            (0..nn).all(|a| {
                (0..nn).filter(|&c| values[xs[a * nn + c] as usize]).count() == 1
            })
        })
    }

    /// One gate per line `id kind [threshold] layer fanin…` under a
    /// `n k r variant` header; stable ordering for diffing.
    pub fn dump(&self) -> String {
        let m = &self.meta;
        let variant = match m.variant {
            Variant::Counting => "counting",
            Variant::CountFree => "count-free",
        };
        let mut out = format!("{} {} {} {variant}\n", m.n, m.k, m.r);
        for (id, gate) in self.gates.iter().enumerate() {
            let kind = match gate.kind {
                GateKind::Input => "INPUT".to_string(),
                GateKind::And => "AND".to_string(),
                GateKind::Or => "OR".to_string(),
                GateKind::Not => "NOT".to_string(),
                GateKind::Threshold(t) => format!("THRESHOLD {t}"),
            };
            out.push_str(&format!("{id} {kind} {}", gate.layer));
            for f in &gate.fanin {
                out.push_str(&format!(" {f}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn threshold_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g.kind, GateKind::Threshold(_))).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wl;

    fn k3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn star12() -> Graph {
        Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn size_and_depth_bounds() {
        let mut depths = Vec::new();
        for r in 0..=3 {
            let c = compile(3, 2, r, Variant::Counting).unwrap();
            // size O(r · n^{3k}): n^{3k} = 729
            assert!(c.meta.gate_count <= 600 * r.max(1) * 729);
            depths.push(c.meta.depth);
        }
        // depth affine in r: constant increments
        let d1 = depths[1] - depths[0];
        for w in depths.windows(2).skip(1) {
            assert_eq!(w[1] - w[0], d1);
        }
    }

    #[test]
    fn r0_has_only_initial_and_output_layers() {
        let c = compile(3, 2, 0, Variant::Counting).unwrap();
        assert!(c.gates.iter().all(|g| g.layer == 0 || g.layer == 1));
        assert_eq!(c.x_outputs.len(), 1);
    }

    #[test]
    fn count_free_has_no_threshold_gates() {
        let c = compile(3, 2, 2, Variant::CountFree).unwrap();
        assert_eq!(c.threshold_gate_count(), 0);
        let c = compile(3, 2, 2, Variant::Counting).unwrap();
        assert!(c.threshold_gate_count() > 0);
    }

    #[test]
    fn symmetric_pair_binds_symmetrically() {
        let c = compile(2, 2, 0, Variant::Counting).unwrap();
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let bits = c.bind_inputs(&g, &g).unwrap();
        let half = bits.len() / 2;
        assert_eq!(bits[..half], bits[half..]);
        let e2 = Graph::new(2);
        let bits2 = c.bind_inputs(&g, &e2).unwrap();
        assert_ne!(bits2[..half], bits2[half..]);
    }

    #[test]
    fn verdict_matches_direct_algorithm_on_named_pairs() {
        for variant in [Variant::Counting, Variant::CountFree] {
            for r in 0..=2 {
                let c = compile(3, 2, r, variant).unwrap();
                for (g, h) in [(k3(), k3()), (k3(), star12())] {
                    let verdict = c.evaluate(&c.bind_inputs(&g, &h).unwrap()).unwrap();
                    let report = wl::run(&g, &h, 2, variant, Some(r)).unwrap();
                    assert_eq!(verdict, report.decision == wl::Decision::Isomorphic,
                        "mismatch at r={r}, {variant:?}");
                }
            }
        }
        // K3 vs the 2-star splits at the first refinement round
        let c = compile(3, 2, 1, Variant::Counting).unwrap();
        assert!(!c.evaluate(&c.bind_inputs(&k3(), &star12()).unwrap()).unwrap());
    }

    #[test]
    fn one_hot_holds_on_bound_inputs() {
        let c = compile(3, 2, 2, Variant::Counting).unwrap();
        let vals = c.evaluate_all(&c.bind_inputs(&k3(), &star12()).unwrap()).unwrap();
        assert!(c.check_one_hot(&vals));
    }

    #[test]
    fn budget_rejected() {
        assert!(compile(8, 2, 3, Variant::Counting).is_err());
        assert!(compile(3, 1, 1, Variant::Counting).is_err());
    }

    #[test]
    fn dump_format() {
        let c = compile(2, 2, 1, Variant::CountFree).unwrap();
        let text = c.dump();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "2 2 1 count-free");
        assert_eq!(lines.count(), c.meta.gate_count);
        assert!(text.contains(" AND "));
        assert!(!text.contains("THRESHOLD"));
    }
}
