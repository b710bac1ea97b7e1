//! The r-round k-dimensional Weisfeiler-Lehman algorithm over pairs of
//! structures, in its counting and count-free variants.
//!
//! Both structures are refined in one joint color space so that color names
//! are comparable across the pair. Each round is a pure function of the
//! previous round's names: signature construction is data-parallel over tuple
//! indices, and the canonical renaming sorts `(previous name, signature)`
//! records so that the round-(i+1) partition provably refines the round-i
//! partition and names stay below the number of tuples.
//!
//! For k = 1 the engine runs classical color refinement (neighbor color
//! multisets or sets), not the degenerate 1-tuple algorithm.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::graph::Graph;
use crate::structure::RelStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Counting,
    CountFree,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Counting => write!(f, "counting"),
            Variant::CountFree => write!(f, "count-free"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Isomorphic,
    NonIsomorphic,
}

/// Default cap on the joint tuple count, overridable via `WLISO_TUPLE_BUDGET`.
pub const DEFAULT_TUPLE_BUDGET: usize = 10_000_000;

pub fn tuple_budget() -> usize {
    std::env::var("WLISO_TUPLE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_TUPLE_BUDGET)
}

/// 128-bit order-sensitive accumulator for signatures. Two independent 64-bit
/// lanes keep the collision probability negligible at the tuple counts the
/// budget admits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
struct Digest(u64, u64);

#[inline]
fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

impl Digest {
    fn seed(tag: u64) -> Self {
        Digest(mix64(tag ^ 0x243f6a8885a308d3), mix64(tag ^ 0x13198a2e03707344))
    }

    #[inline]
    fn fold(&mut self, v: u64) {
        self.0 = mix64(self.0.rotate_left(19) ^ mix64(v ^ 0xa5a5a5a5a5a5a5a5));
        self.1 = mix64(self.1.rotate_left(29) ^ mix64(v.wrapping_add(0x7f4a7c15)));
    }

    fn as_u128(self) -> u128 {
        ((self.0 as u128) << 64) | self.1 as u128
    }
}

/// Joint coloring of `V(G)^k ∪ V(H)^k` at some round.
pub struct ColoringState {
    pub k: usize,
    pub round: usize,
    pub stable: bool,
    variant: Variant,
    g: RelStructure,
    h: RelStructure,
    tg: usize,
    th: usize,
    /// Canonical color names; G tuples first, then H tuples.
    colors: Vec<u32>,
    pub class_count: usize,
    /// Class counts after each completed round (index 0 = initial coloring).
    pub history: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WlReport {
    pub schema: &'static str,
    pub decision: Decision,
    pub k: usize,
    pub variant: Variant,
    pub rounds_run: usize,
    pub rounds_to_stable: Option<usize>,
    pub class_counts: Vec<usize>,
}

fn checked_pow(n: usize, k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..k {
        acc = acc.checked_mul(n)?;
    }
    Some(acc)
}

impl ColoringState {
    /// Initial coloring: every tuple is named by the canonical rank of its
    /// isomorphism type (equalities, adjacencies, ternary triples, colors).
    pub fn initial(g: &RelStructure, h: &RelStructure, k: usize, variant: Variant) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be >= 1".into()));
        }
        let budget = tuple_budget();
        let tg = checked_pow(g.n(), k)
            .filter(|&t| t <= budget)
            .ok_or_else(|| Error::BudgetExceeded(format!("n^k for n={}, k={k}", g.n())))?;
        let th = checked_pow(h.n(), k)
            .filter(|&t| t <= budget)
            .ok_or_else(|| Error::BudgetExceeded(format!("n^k for n={}, k={k}", h.n())))?;
        if tg + th > budget {
            return Err(Error::BudgetExceeded(format!(
                "joint tuple count {} exceeds budget {budget}",
                tg + th
            )));
        }
        let mut state = ColoringState {
            k,
            round: 0,
            stable: false,
            variant,
            g: g.clone(),
            h: h.clone(),
            tg,
            th,
            colors: vec![0; tg + th],
            class_count: 0,
            history: Vec::new(),
        };
        let keys: Vec<(u32, u128)> = if k == 1 {
            (0..tg + th)
                .map(|t| {
                    let (s, v) = state.locate(t);
                    (0, Digest::seed(s.color(v) as u64).as_u128())
                })
                .collect()
        } else {
            (0..tg + th)
                .into_par_iter()
                .map(|t| (0, state.isotype_digest(t).as_u128()))
                .collect()
        };
        state.rename(keys);
        state.history.push(state.class_count);
        Ok(state)
    }

    fn side(&self, t: usize) -> (&RelStructure, usize) {
        if t < self.tg {
            (&self.g, t)
        } else {
            (&self.h, t - self.tg)
        }
    }

    /// For k = 1: the vertex a tuple index stands for.
    fn locate(&self, t: usize) -> (&RelStructure, usize) {
        self.side(t)
    }

    fn digits(&self, s: &RelStructure, mut local: usize, out: &mut [usize]) {
        let n = s.n();
        for i in (0..self.k).rev() {
            out[i] = local % n;
            local /= n;
        }
    }

    fn isotype_digest(&self, t: usize) -> Digest {
        let (s, local) = self.side(t);
        let k = self.k;
        let mut u = vec![0usize; k];
        self.digits(s, local, &mut u);
        let mut d = Digest::seed(1);
        for i in 0..k {
            for j in 0..k {
                d.fold(u64::from(u[i] == u[j]));
                d.fold(u64::from(s.adjacent(u[i], u[j])));
            }
        }
        if s.has_ternary() {
            for i in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        d.fold(u64::from(s.t(u[i], u[j], u[l])));
                    }
                }
            }
        }
        for &ui in &u {
            d.fold(s.color(ui) as u64);
        }
        d
    }

    /// Canonicalize `(old name, signature)` records into new names.
    /// The name of a class is its rank in the sorted record order, so the new
    /// partition refines the old one and names stay `< 2n^k`.
    fn rename(&mut self, keys: Vec<(u32, u128)>) {
        let mut uniq = keys.clone();
        uniq.par_sort_unstable();
        uniq.dedup();
        let new_colors: Vec<u32> = keys
            .par_iter()
            .map(|key| uniq.binary_search(key).unwrap() as u32)
            .collect();
        self.colors = new_colors;
        self.class_count = uniq.len();
    }

    /// One refinement round. Idempotent once stable.
    pub fn refine_round(&mut self) {
        if self.stable {
            return;
        }
        let variant = self.variant;
        let keys: Vec<(u32, u128)> = if self.k == 1 {
            (0..self.tg + self.th)
                .into_par_iter()
                .map(|t| {
                    let (s, v) = self.locate(t);
                    let base = if t < self.tg { 0 } else { self.tg };
                    let mut row: Vec<u64> = (0..s.n())
                        .filter(|&w| s.adjacent(v, w))
                        .map(|w| self.colors[base + w] as u64)
                        .collect();
                    row.sort_unstable();
                    if variant == Variant::CountFree {
                        row.dedup();
                    }
                    let mut d = Digest::seed(2);
                    for c in row {
                        d.fold(c);
                    }
                    (self.colors[t], d.as_u128())
                })
                .collect()
        } else {
            let k = self.k;
            (0..self.tg + self.th)
                .into_par_iter()
                .map(|t| {
                    let (s, local) = self.side(t);
                    let n = s.n();
                    let base = if t < self.tg { 0 } else { self.tg };
                    let local_base = if t < self.tg { t } else { t - self.tg };
                    let mut u = vec![0usize; k];
                    self.digits(s, local, &mut u);
                    // pow[i] = n^(k-1-i)
                    let mut pow = vec![1usize; k];
                    for i in (0..k - 1).rev() {
                        pow[i] = pow[i + 1] * n;
                    }
                    let mut rows: Vec<u64> = Vec::with_capacity(n);
                    for w in 0..n {
                        let mut d = Digest::seed(3);
                        for i in 0..k {
                            let idx = local_base + w * pow[i] - u[i] * pow[i];
                            d.fold(self.colors[base + idx] as u64);
                        }
                        rows.push(d.0 ^ d.1.rotate_left(32));
                    }
                    rows.sort_unstable();
                    if variant == Variant::CountFree {
                        rows.dedup();
                    }
                    let mut d = Digest::seed(4);
                    for r in rows {
                        d.fold(r);
                    }
                    (self.colors[t], d.as_u128())
                })
                .collect()
        };
        let before = self.class_count;
        self.rename(keys);
        self.round += 1;
        self.history.push(self.class_count);
        if self.class_count == before {
            self.stable = true;
        }
    }

    /// The Eq.-(3) style decision on the current colors: multisets for the
    /// counting variant, sets for count-free.
    pub fn decision(&self) -> Decision {
        match self.variant {
            Variant::Counting => {
                let mut cg = vec![0usize; self.class_count];
                let mut ch = vec![0usize; self.class_count];
                for t in 0..self.tg {
                    cg[self.colors[t] as usize] += 1;
                }
                for t in self.tg..self.tg + self.th {
                    ch[self.colors[t] as usize] += 1;
                }
                if cg == ch {
                    Decision::Isomorphic
                } else {
                    Decision::NonIsomorphic
                }
            }
            Variant::CountFree => {
                let mut cg = vec![false; self.class_count];
                let mut ch = vec![false; self.class_count];
                for t in 0..self.tg {
                    cg[self.colors[t] as usize] = true;
                }
                for t in self.tg..self.tg + self.th {
                    ch[self.colors[t] as usize] = true;
                }
                if cg == ch {
                    Decision::Isomorphic
                } else {
                    Decision::NonIsomorphic
                }
            }
        }
    }

    pub fn color_of_g_tuple(&self, local: usize) -> u32 {
        self.colors[local]
    }

    pub fn color_of_h_tuple(&self, local: usize) -> u32 {
        self.colors[self.tg + local]
    }
}

fn assert_stabilization_bound(state: &ColoringState) {
    // stabilization must occur strictly before 2n^k joint renamings
    assert!(
        state.round < state.tg + state.th,
        "stabilization bound violated: {} rounds for {} tuples",
        state.round,
        state.tg + state.th
    );
}

/// Run WL to stabilization (or `max_rounds`) on a pair of structures.
pub fn run_structures(
    g: &RelStructure,
    h: &RelStructure,
    k: usize,
    variant: Variant,
    max_rounds: Option<usize>,
) -> Result<WlReport, Error> {
    if g.n() == 0 || h.n() == 0 {
        let decision = if g.n() == h.n() { Decision::Isomorphic } else { Decision::NonIsomorphic };
        return Ok(WlReport {
            schema: "wl-report/1",
            decision,
            k,
            variant,
            rounds_run: 0,
            rounds_to_stable: Some(0),
            class_counts: vec![],
        });
    }
    let mut state = ColoringState::initial(g, h, k, variant)?;
    let cap = max_rounds.unwrap_or(state.tg + state.th);
    while !state.stable && state.round < cap {
        state.refine_round();
    }
    if state.stable {
        assert_stabilization_bound(&state);
    }
    Ok(WlReport {
        schema: "wl-report/1",
        decision: state.decision(),
        k,
        variant,
        rounds_run: state.round,
        // the partition was already stable entering the last recorded round
        rounds_to_stable: state.stable.then(|| state.round.saturating_sub(1)),
        class_counts: state.history.clone(),
    })
}

pub fn run(
    g: &Graph,
    h: &Graph,
    k: usize,
    variant: Variant,
    max_rounds: Option<usize>,
) -> Result<WlReport, Error> {
    run_structures(
        &RelStructure::from_graph(g),
        &RelStructure::from_graph(h),
        k,
        variant,
        max_rounds,
    )
}

/// Least r such that the r-round decision is non-isomorphic, or `None` when
/// the coloring stabilizes without ever distinguishing the pair.
pub fn min_distinguishing_round_structures(
    g: &RelStructure,
    h: &RelStructure,
    k: usize,
    variant: Variant,
) -> Result<Option<usize>, Error> {
    if g.n() == 0 || h.n() == 0 {
        return Ok((g.n() != h.n()).then_some(0));
    }
    let mut state = ColoringState::initial(g, h, k, variant)?;
    loop {
        if state.decision() == Decision::NonIsomorphic {
            return Ok(Some(state.round));
        }
        if state.stable {
            assert_stabilization_bound(&state);
            return Ok(None);
        }
        state.refine_round();
    }
}

pub fn min_distinguishing_round(
    g: &Graph,
    h: &Graph,
    k: usize,
    variant: Variant,
) -> Result<Option<usize>, Error> {
    min_distinguishing_round_structures(
        &RelStructure::from_graph(g),
        &RelStructure::from_graph(h),
        k,
        variant,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()
    }

    fn k3() -> Graph {
        cycle(3)
    }

    fn star12() -> Graph {
        Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn initial_coloring_k2_on_k2() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let s = ColoringState::initial(
            &RelStructure::from_graph(&g),
            &RelStructure::from_graph(&g),
            2,
            Variant::Counting,
        )
        .unwrap();
        // classes: {(0,0),(1,1)} and {(0,1),(1,0)}, shared across both copies
        assert_eq!(s.class_count, 2);
        assert_eq!(s.color_of_g_tuple(0), s.color_of_h_tuple(0)); // (0,0)
        assert_eq!(s.color_of_g_tuple(1), s.color_of_h_tuple(1)); // (0,1)
        assert_eq!(s.color_of_g_tuple(1), s.color_of_g_tuple(2));
        assert_ne!(s.color_of_g_tuple(0), s.color_of_g_tuple(1));
    }

    #[test]
    fn initial_coloring_distinguishes_adjacency() {
        let g = Graph::new(2);
        let h = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let s = ColoringState::initial(
            &RelStructure::from_graph(&g),
            &RelStructure::from_graph(&h),
            2,
            Variant::Counting,
        )
        .unwrap();
        assert_ne!(s.color_of_g_tuple(1), s.color_of_h_tuple(1));
        assert_eq!(s.decision(), Decision::NonIsomorphic);
    }

    #[test]
    fn diagonal_never_matches_rainbow() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = ColoringState::initial(
            &RelStructure::from_graph(&g),
            &RelStructure::from_graph(&g),
            3,
            Variant::Counting,
        )
        .unwrap();
        // (0,0,0) is tuple 0; (0,1,2) is tuple 0*9+1*3+2 = 5
        assert_ne!(s.color_of_g_tuple(0), s.color_of_g_tuple(5));
    }

    #[test]
    fn regular_trap_k1_false_positive() {
        let rep = run(&cycle(6), &two_triangles(), 1, Variant::Counting, None).unwrap();
        assert_eq!(rep.decision, Decision::Isomorphic);
        // uniform coloring of a regular pair never refines
        assert_eq!(rep.rounds_to_stable, Some(0));
        assert_eq!(rep.rounds_run, 1);
    }

    #[test]
    fn regular_trap_k2_resolved() {
        let rep = run(&cycle(6), &two_triangles(), 2, Variant::Counting, None).unwrap();
        assert_eq!(rep.decision, Decision::NonIsomorphic);
        assert_eq!(
            min_distinguishing_round(&cycle(6), &two_triangles(), 2, Variant::Counting).unwrap(),
            Some(1)
        );
        assert_eq!(
            min_distinguishing_round(&cycle(6), &two_triangles(), 1, Variant::Counting).unwrap(),
            None
        );
    }

    #[test]
    fn degree_split_at_round_one() {
        assert_eq!(
            min_distinguishing_round(&k3(), &star12(), 1, Variant::Counting).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn isomorphic_pairs_equivariant() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5), (5, 6)])
            .unwrap();
        let perm = [3, 0, 6, 2, 5, 1, 4];
        let h = g.permuted(&perm);
        for k in 1..=3 {
            for variant in [Variant::Counting, Variant::CountFree] {
                let rep = run(&g, &h, k, variant, None).unwrap();
                assert_eq!(rep.decision, Decision::Isomorphic, "k={k} {variant}");
                let rep2 = run(&h, &g, k, variant, None).unwrap();
                assert_eq!(rep.rounds_run, rep2.rounds_run);
            }
        }
    }

    #[test]
    fn colors_respect_isomorphism_every_round() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let perm = [2, 4, 0, 1, 3];
        let h = g.permuted(&perm);
        let k = 2;
        let mut s = ColoringState::initial(
            &RelStructure::from_graph(&g),
            &RelStructure::from_graph(&h),
            k,
            Variant::Counting,
        )
        .unwrap();
        for _ in 0..4 {
            for u0 in 0..5 {
                for u1 in 0..5 {
                    let t = u0 * 5 + u1;
                    let ft = perm[u0] * 5 + perm[u1];
                    assert_eq!(s.color_of_g_tuple(t), s.color_of_h_tuple(ft));
                }
            }
            s.refine_round();
        }
    }

    #[test]
    fn counting_refines_count_free() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)]).unwrap();
        let h = g.permuted(&[5, 3, 1, 0, 2, 4]);
        for k in 1..=2 {
            let counting = run(&g, &h, k, Variant::Counting, None).unwrap();
            let free = run(&g, &h, k, Variant::CountFree, None).unwrap();
            for (c, f) in counting.class_counts.iter().zip(free.class_counts.iter()) {
                assert!(c >= f, "counting partition must refine the count-free one");
            }
        }
    }

    #[test]
    fn budget_guard() {
        let g = cycle(30);
        assert!(matches!(
            run(&g, &g, 5, Variant::Counting, None),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn empty_graphs() {
        let e = Graph::new(0);
        let rep = run(&e, &e, 2, Variant::Counting, None).unwrap();
        assert_eq!(rep.decision, Decision::Isomorphic);
        let rep = run(&e, &cycle(3), 2, Variant::Counting, None).unwrap();
        assert_eq!(rep.decision, Decision::NonIsomorphic);
    }

    #[test]
    fn report_serializes_with_schema() {
        let rep = run(&k3(), &star12(), 1, Variant::Counting, None).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"schema\":\"wl-report/1\""));
        assert!(json.contains("\"decision\":\"non-isomorphic\""));
    }
}
