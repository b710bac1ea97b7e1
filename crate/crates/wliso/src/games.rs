//! Exact Ehrenfeucht-Fraïssé pebble-game depths.
//!
//! `ef_depth` computes the minimum number of rounds in which Spoiler can force
//! a win in the k-pebble game on a pair of structures — the distinguishing
//! quantifier depth of the corresponding k-variable logic, with counting
//! quantifiers for the counting (composite-move) version. Values are obtained
//! by value iteration over the full position space with positions collapsed
//! under pebble interchange, so they are exact minimax depths.

use rayon::prelude::*;
use std::collections::HashMap;

use crate::error::Error;
use crate::graph::Graph;
use crate::structure::RelStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameVariant {
    Plain,
    Counting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthResult {
    /// Minimum rounds for a Spoiler win; `None` when Duplicator wins forever.
    pub value: Option<usize>,
    pub k: usize,
    pub variant: GameVariant,
}

const UNPLACED: u16 = u16::MAX;
const INF: u32 = u32::MAX;

/// Default size budgets: composite-move enumeration is exponential in n.
const PLAIN_MAX_N: usize = 6;
const COUNTING_MAX_N: usize = 5;
const MAX_PEBBLES: usize = 3;

struct Arena {
    n: usize,
    m: usize,
    positions: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
    losing: Vec<bool>,
    /// `succ[p]`: for each distinct slot, the position reached by re-placing
    /// that slot on pair `a * m + b`, indexed by the pair.
    succ: Vec<Vec<Vec<usize>>>,
}

impl Arena {
    fn new(g: &RelStructure, h: &RelStructure, k: usize) -> Self {
        let (n, m) = (g.n(), h.n());
        // slot domain: UNPLACED or a*m+b
        let mut domain: Vec<u16> = (0..n * m).map(|x| x as u16).collect();
        domain.push(UNPLACED);
        let mut positions = Vec::new();
        let mut cur = vec![0usize; k];
        // combinations with repetition over the sorted domain
        loop {
            positions.push(cur.iter().map(|&i| domain[i]).collect::<Vec<u16>>());
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] + 1 < domain.len() {
                    let v = cur[i] + 1;
                    for item in cur.iter_mut().skip(i) {
                        *item = v;
                    }
                    break;
                }
                if i == 0 {
                    cur.clear();
                    break;
                }
            }
            if cur.is_empty() {
                break;
            }
        }
        let index: HashMap<Vec<u16>, usize> =
            positions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let losing = positions.iter().map(|p| !partial_iso(g, h, m, p)).collect();
        let mut arena = Arena { n, m, positions, index, losing, succ: Vec::new() };
        arena.succ = (0..arena.positions.len())
            .into_par_iter()
            .map(|p| {
                let pos = &arena.positions[p];
                let mut out = Vec::with_capacity(k);
                for i in 0..k {
                    // identical slot contents give identical moves
                    if i > 0 && pos[i] == pos[i - 1] {
                        continue;
                    }
                    let mut per_slot = Vec::with_capacity(n * m);
                    for pair in 0..n * m {
                        let mut next = pos.clone();
                        next[i] = pair as u16;
                        per_slot.push(arena.lookup_sorted(next));
                    }
                    out.push(per_slot);
                }
                out
            })
            .collect();
        arena
    }

    fn lookup_sorted(&self, mut pos: Vec<u16>) -> usize {
        pos.sort_unstable();
        self.index[&pos]
    }

    fn lookup(&self, pos: Vec<u16>) -> usize {
        self.lookup_sorted(pos)
    }
}

/// Does the pebbled correspondence preserve equality, adjacency, colors, and
/// the ternary relation?
fn partial_iso(g: &RelStructure, h: &RelStructure, m: usize, pos: &[u16]) -> bool {
    let pairs: Vec<(usize, usize)> = pos
        .iter()
        .filter(|&&s| s != UNPLACED)
        .map(|&s| (s as usize / m, s as usize % m))
        .collect();
    for (idx, &(a, b)) in pairs.iter().enumerate() {
        if g.color(a) != h.color(b) {
            return false;
        }
        for &(a2, b2) in &pairs[idx + 1..] {
            if (a == a2) != (b == b2) || g.adjacent(a, a2) != h.adjacent(b, b2) {
                return false;
            }
        }
    }
    if g.has_ternary() || h.has_ternary() {
        for &(x, x2) in &pairs {
            for &(y, y2) in &pairs {
                for &(z, z2) in &pairs {
                    if g.t(x, y, z) != h.t(x2, y2, z2) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn value_iteration(
    arena: &Arena,
    round_value: impl Fn(&Arena, usize, &[u32]) -> u32 + Sync,
) -> Vec<u32> {
    let mut values: Vec<u32> =
        arena.losing.iter().map(|&l| if l { 0 } else { INF }).collect();
    // Jacobi sweeps: all updates read the previous sweep's values, keeping
    // the fixpoint (and intermediate states) thread-count independent
    loop {
        let next: Vec<u32> = (0..arena.positions.len())
            .into_par_iter()
            .map(|p| {
                if arena.losing[p] {
                    0
                } else {
                    values[p].min(round_value(arena, p, &values))
                }
            })
            .collect();
        if next == values {
            return values;
        }
        values = next;
    }
}

fn plain_round_value(arena: &Arena, p: usize, values: &[u32]) -> u32 {
    let (n, m) = (arena.n, arena.m);
    let mut best = INF;
    for per_slot in &arena.succ[p] {
        // Spoiler plays x in G, Duplicator answers y in H
        for x in 0..n {
            let mut worst = 0;
            for y in 0..m {
                worst = worst.max(values[per_slot[x * m + y]]);
            }
            best = best.min(worst);
        }
        // Spoiler plays y in H, Duplicator answers x in G
        for y in 0..m {
            let mut worst = 0;
            for x in 0..n {
                worst = worst.max(values[per_slot[x * m + y]]);
            }
            best = best.min(worst);
        }
    }
    best.saturating_add(1)
}

fn counting_round_value(arena: &Arena, p: usize, values: &[u32]) -> u32 {
    let (n, m) = (arena.n, arena.m);
    let mut best = INF;
    // Spoiler picks a pebble pair and a set A in one structure; Duplicator
    // answers B of the same size in the other; Spoiler pebbles some b in B;
    // Duplicator pebbles some a in A. Duplicator's optimal B consists of the
    // |A| response vertices with the largest guaranteed values, so the round
    // resolves to an order statistic.
    for per_slot in &arena.succ[p] {
        for a_in_g in [true, false] {
            let (na, nb) = if a_in_g { (n, m) } else { (m, n) };
            for a_mask in 1u32..1 << na {
                let size = a_mask.count_ones() as usize;
                if size > nb {
                    // Duplicator has no legal reply
                    best = 0;
                    continue;
                }
                let mut h_vals: Vec<u32> = Vec::with_capacity(nb);
                for b in 0..nb {
                    let mut worst = 0;
                    for a in 0..na {
                        if a_mask >> a & 1 == 1 {
                            let pair = if a_in_g { a * m + b } else { b * m + a };
                            worst = worst.max(values[per_slot[pair]]);
                        }
                    }
                    h_vals.push(worst);
                }
                h_vals.sort_unstable_by(|x, y| y.cmp(x));
                best = best.min(h_vals[size - 1]);
            }
        }
    }
    best.saturating_add(1)
}

fn check_budget(g: &RelStructure, h: &RelStructure, k: usize, variant: GameVariant) -> Result<(), Error> {
    let cap = match variant {
        GameVariant::Plain => PLAIN_MAX_N,
        GameVariant::Counting => COUNTING_MAX_N,
    };
    if g.n() > cap || h.n() > cap || k > MAX_PEBBLES || k == 0 {
        return Err(Error::BudgetExceeded(format!(
            "game search supports 1..={MAX_PEBBLES} pebbles on at most {cap} vertices ({variant:?})"
        )));
    }
    Ok(())
}

/// Exact distinguishing depth of the k-pebble game on a pair of structures.
pub fn ef_depth_structures(
    g: &RelStructure,
    h: &RelStructure,
    k: usize,
    variant: GameVariant,
) -> Result<DepthResult, Error> {
    check_budget(g, h, k, variant)?;
    let arena = Arena::new(g, h, k);
    let values = match variant {
        GameVariant::Plain => value_iteration(&arena, plain_round_value),
        GameVariant::Counting => value_iteration(&arena, counting_round_value),
    };
    let empty = arena.lookup(vec![UNPLACED; k]);
    let v = values[empty];
    Ok(DepthResult { value: (v != INF).then_some(v as usize), k, variant })
}

pub fn ef_depth(g: &Graph, h: &Graph, k: usize, variant: GameVariant) -> Result<DepthResult, Error> {
    ef_depth_structures(&RelStructure::from_graph(g), &RelStructure::from_graph(h), k, variant)
}

/// Outcome of playing the halving strategy from a pebbled configuration.
#[derive(Clone, Copy, Debug)]
pub struct HalvingOutcome {
    /// `⌈log2 d(u,v)⌉`: the move bound the strategy guarantees.
    pub bound: usize,
    /// Worst case over all Duplicator replies when Spoiler follows the
    /// midpoint strategy; always `<= bound`.
    pub worst_case_moves: usize,
}

/// Midpoint halving strategy for pebbled pairs `(u,v)` in `g` and `(u2,v2)`
/// in `h` with mismatching distances, `d(u,v)` finite.
pub fn halving_strategy(
    g: &Graph,
    h: &Graph,
    pebbled: (usize, usize, usize, usize),
) -> Result<HalvingOutcome, Error> {
    let (u, v, u2, v2) = pebbled;
    let d = g
        .distance(u, v)
        .ok_or_else(|| Error::InvalidArgument("halving: d(u,v) must be finite".into()))?;
    if g.distance(u, v) == h.distance(u2, v2) {
        return Err(Error::InvalidArgument("halving: distances must differ".into()));
    }
    // ceil(log2 d); d = 0 or 1 give 0
    let bound = d.max(1).next_power_of_two().trailing_zeros() as usize;
    let worst = playout(g, h, u, v, u2, v2);
    Ok(HalvingOutcome { bound, worst_case_moves: worst })
}

/// Midpoint of a shortest u-v path at distance `ceil(d/2)` from `u`.
fn midpoint(g: &Graph, u: usize, v: usize, d: usize) -> usize {
    let du = g.bfs_distances(u);
    let dv = g.bfs_distances(v);
    let half = d.div_ceil(2);
    (0..g.n())
        .find(|&w| du[w] == half && dv[w] == d - half)
        .expect("a shortest path has a vertex at every intermediate distance")
}

/// Worst case (over exhaustive Duplicator replies) number of further moves
/// Spoiler needs, following the halving strategy.
fn playout(g: &Graph, h: &Graph, u: usize, v: usize, u2: usize, v2: usize) -> usize {
    let dg = g.distance(u, v);
    let dh = h.distance(u2, v2);
    debug_assert_ne!(dg, dh);
    // play in the structure whose distance is the smaller finite one
    match (dg, dh) {
        (Some(a), Some(b)) if b < a => return playout(h, g, u2, v2, u, v),
        (None, Some(_)) => return playout(h, g, u2, v2, u, v),
        _ => {}
    }
    let d = dg.expect("one side is finite");
    if d <= 1 {
        // equality or adjacency already mismatches on the board
        return 0;
    }
    let w = midpoint(g, u, v, d);
    let (left, right) = (d.div_ceil(2), d / 2);
    let mut worst = 0;
    for w2 in 0..h.n() {
        let rec = if h.distance(u2, w2) != Some(left) {
            playout(g, h, u, w, u2, w2)
        } else {
            // the right half must then mismatch
            debug_assert_ne!(h.distance(w2, v2), Some(right));
            playout(g, h, w, v, w2, v2)
        };
        worst = worst.max(1 + rec);
    }
    worst
}
