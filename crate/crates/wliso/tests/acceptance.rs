//! Acceptance gate: each test prints one `criterion N: PASS/FAIL` line with a
//! deterministic detail string. Criterion 9 re-runs the report generation of
//! criteria 1-8 under different worker-thread counts and requires bit-identical
//! output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

use wliso::games::{ef_depth, GameVariant};
use wliso::gen;
use wliso::graph::Graph;
use wliso::structure::RelStructure;
use wliso::wl::{self, Decision, Variant};
use wliso::{circuit, RotationSystem};

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// Deterministic catalog of pairwise non-isomorphic trees on `n` vertices.
fn tree_catalog(n: usize, seeds: u64) -> Vec<Graph> {
    let mut out: Vec<Graph> = Vec::new();
    for seed in 0..seeds {
        let t = gen::gen_tree(n, seed).unwrap();
        if out.iter().all(|s| gen::brute_force_iso(s, &t).unwrap().is_none()) {
            out.push(t);
        }
    }
    out
}

// ---------------------------------------------------------------- criterion 1

/// Soundness: permuted copies are always reported isomorphic.
fn criterion1() -> (bool, String) {
    let mut pairs = 0usize;
    let mut failures = 0usize;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 8 + (seed as usize * 7) % 57; // 8..=64
        let p = 0.1 + (seed % 5) as f64 * 0.15;
        let g = random_graph(n, p, &mut rng);
        let h = g.permuted(&random_permutation(n, &mut rng));
        for k in [1, 2] {
            for variant in [Variant::Counting, Variant::CountFree] {
                let rep = wl::run(&g, &h, k, variant, None).unwrap();
                pairs += 1;
                failures += usize::from(rep.decision != Decision::Isomorphic);
            }
        }
    }
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = 4 + (seed as usize) % 9; // 4..=12
        let g = random_graph(n, 0.4, &mut rng);
        let h = g.permuted(&random_permutation(n, &mut rng));
        for variant in [Variant::Counting, Variant::CountFree] {
            let rep = wl::run(&g, &h, 3, variant, None).unwrap();
            pairs += 1;
            failures += usize::from(rep.decision != Decision::Isomorphic);
        }
    }
    (pairs >= 1000 && failures == 0, format!("pairs={pairs} false_negatives={failures}"))
}

#[test]
fn criterion_1_soundness_on_permuted_copies() {
    let (ok, detail) = criterion1();
    println!("criterion 1: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 2

/// Counting 2-WL vs the exact oracle on all graphs with n <= 6 up to
/// isomorphism; every disagreement must be a false positive that a higher
/// dimension (k <= 3) resolves, or it is logged.
fn criterion2() -> (bool, String) {
    let mut pairs = 0usize;
    let mut false_negatives = 0usize;
    let mut false_positives = Vec::new();
    for n in 1..=6 {
        let graphs = gen::enumerate_graphs_up_to_iso(n).unwrap();
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                let (g, h) = (&graphs[i], &graphs[j]);
                pairs += 1;
                let oracle = gen::brute_force_iso(g, h).unwrap().is_some();
                let wl2 = wl::run(g, h, 2, Variant::Counting, None).unwrap().decision;
                match (wl2, oracle) {
                    (Decision::NonIsomorphic, false) => {}
                    (Decision::NonIsomorphic, true) => false_negatives += 1,
                    (Decision::Isomorphic, _) => false_positives.push((n, i, j)),
                }
            }
        }
    }
    let mut unresolved = Vec::new();
    for &(n, i, j) in &false_positives {
        let graphs = gen::enumerate_graphs_up_to_iso(n).unwrap();
        let d3 = wl::run(&graphs[i], &graphs[j], 3, Variant::Counting, None).unwrap().decision;
        if d3 != Decision::NonIsomorphic {
            unresolved.push((n, i, j)); // logged, CFI-style
        }
    }
    let ok = false_negatives == 0;
    (
        ok,
        format!(
            "pairs={pairs} false_negatives={false_negatives} k2_false_positives={} \
             unresolved_at_k3={:?}",
            false_positives.len(),
            unresolved
        ),
    )
}

#[test]
fn criterion_2_oracle_equivalence_n6() {
    let (ok, detail) = criterion2();
    println!("criterion 2: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 3

/// Cross-validation of refinement rounds against pebble-game depths:
/// exhaustive over non-isomorphic pairs with n <= 5, the criterion demands
/// min_distinguishing_round(counting, k) = cd^{k+1} and (count-free, k) =
/// D^{k+1} with zero mismatches.
fn criterion3() -> (bool, String) {
    let mut mismatches = 0usize;
    let mut compared = 0usize;
    // distribution of game_depth - wl_round over finite mismatches, plus the
    // count of inf/finite disagreements, as diagnostics
    let mut offsets: std::collections::BTreeMap<i64, usize> = Default::default();
    let mut inf_disagreements = 0usize;
    for n in 2..=5 {
        let graphs = gen::enumerate_graphs_up_to_iso(n).unwrap();
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                let (g, h) = (&graphs[i], &graphs[j]);
                for k in [1usize, 2] {
                    let cases = [
                        (Variant::Counting, GameVariant::Counting),
                        (Variant::CountFree, GameVariant::Plain),
                    ];
                    for (wl_variant, game_variant) in cases {
                        let round = wl::min_distinguishing_round(g, h, k, wl_variant).unwrap();
                        let depth = ef_depth(g, h, k + 1, game_variant).unwrap().value;
                        compared += 1;
                        if round != depth {
                            mismatches += 1;
                            match (round, depth) {
                                (Some(r), Some(d)) => {
                                    *offsets.entry(d as i64 - r as i64).or_default() += 1;
                                }
                                _ => inf_disagreements += 1,
                            }
                        }
                    }
                }
            }
        }
    }
    (
        mismatches == 0,
        format!(
            "compared={compared} mismatches={mismatches} \
             depth_minus_round_histogram={offsets:?} inf_vs_finite={inf_disagreements}"
        ),
    )
}

#[test]
fn criterion_3_round_equals_game_depth() {
    let (ok, detail) = criterion3();
    println!("criterion 3: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 4

/// Circuit/direct equivalence, exhaustive over labeled pairs for n in {3,4},
/// k = 2, r in 0..=3, both variants; plus the size and depth accounting.
fn criterion4() -> (bool, String) {
    const C: usize = 600; // single measured constant for gate_count <= C·r·n^{3k}
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    let mut c_measured = 0.0f64;
    let mut depth_affine = true;
    for n in [3usize, 4] {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let graphs: Vec<Graph> = (0u32..1 << pairs.len())
            .map(|mask| {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
            .collect();
        for variant in [Variant::Counting, Variant::CountFree] {
            let mut depths = Vec::new();
            for r in 0..=3 {
                let c = circuit::compile(n, 2, r, variant).unwrap();
                depths.push(c.meta.depth);
                // r = 0 still needs the initial and output layers
                let budget = r.max(1) * n.pow(6);
                c_measured = c_measured.max(c.meta.gate_count as f64 / budget as f64);
                if c.meta.gate_count > C * budget {
                    mismatches += 1;
                }
                for g in &graphs {
                    for h in &graphs {
                        let verdict = c.evaluate(&c.bind_inputs(g, h).unwrap()).unwrap();
                        let direct =
                            wl::run(g, h, 2, variant, Some(r)).unwrap().decision
                                == Decision::Isomorphic;
                        checked += 1;
                        mismatches += usize::from(verdict != direct);
                    }
                }
            }
            let step = depths[1] - depths[0];
            depth_affine &= depths.windows(2).skip(1).all(|w| w[1] - w[0] == step);
        }
    }
    (
        mismatches == 0 && depth_affine,
        format!(
            "checked={checked} mismatches={mismatches} depth_affine={depth_affine} \
             gate_constant_measured={c_measured:.1} (cap {C})"
        ),
    )
}

#[test]
fn criterion_4_circuit_direct_equivalence() {
    let (ok, detail) = criterion4();
    println!("criterion 4: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 5

/// Scaled treewidth bound: counting 7-WL separates non-isomorphic trees
/// (width 1) within 4·log2(n) + 17 rounds on n <= 8, with dimension-11 spot
/// checks on width-2 instances.
fn criterion5() -> (bool, String) {
    let mut pairs = 0usize;
    let mut violations = 0usize;
    let mut max_round = 0usize;
    for (n, seeds) in [(6usize, 40u64), (7, 40), (8, 8)] {
        let trees = tree_catalog(n, seeds);
        let bound = 4.0 * (n as f64).log2() + 17.0;
        for i in 0..trees.len() {
            for j in i + 1..trees.len() {
                let round =
                    wl::min_distinguishing_round(&trees[i], &trees[j], 7, Variant::Counting)
                        .unwrap();
                pairs += 1;
                match round {
                    Some(r) if (r as f64) < bound => max_round = max_round.max(r),
                    _ => violations += 1,
                }
            }
        }
    }
    // dimension 4k+3 = 11 at k = 2: n = 4 keeps 2·4^11 tuples inside the
    // default budget (n = 5 would need 2·5^11 ≈ 10^8)
    let mut spot = 0usize;
    for (sa, sb) in [(0u64, 1u64), (2, 5)] {
        let a = gen::gen_partial_ktree(4, 2, sa).unwrap();
        let b = gen::gen_partial_ktree(4, 2, sb).unwrap();
        if gen::brute_force_iso(&a.graph, &b.graph).unwrap().is_some() {
            continue;
        }
        let round =
            wl::min_distinguishing_round(&a.graph, &b.graph, 11, Variant::Counting).unwrap();
        let bound = 2.0 * 3.0 * 4.0f64.log2() + 8.0 * 2.0 + 9.0;
        spot += 1;
        if !round.is_some_and(|r| (r as f64) < bound) {
            violations += 1;
        }
    }
    (
        pairs >= 50 && violations == 0,
        format!("pairs={pairs} spot_dim11={spot} violations={violations} max_round={max_round}"),
    )
}

#[test]
fn criterion_5_treewidth_round_bound() {
    let (ok, detail) = criterion5();
    println!("criterion 5: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 6

/// Rotation systems: count-free 4-WL separates non-isomorphic systems within
/// 3·log2(n) + 8 rounds (n <= 8), and iso_decide matches the brute-force
/// oracle exhaustively over the generated catalog for n <= 7.
fn criterion6() -> (bool, String) {
    let mut bound_pairs = 0usize;
    let mut violations = 0usize;
    for n in 3..=8usize {
        let systems: Vec<RotationSystem> =
            (0..6).map(|s| gen::gen_rotation(n, s).unwrap()).collect();
        let bound = 3.0 * (n as f64).log2() + 8.0;
        for i in 0..systems.len() {
            for j in i + 1..systems.len() {
                if systems[i].iso_decide(&systems[j]).unwrap().is_some() {
                    continue;
                }
                let round = wl::min_distinguishing_round_structures(
                    &RelStructure::from_rotation(&systems[i]),
                    &RelStructure::from_rotation(&systems[j]),
                    4,
                    Variant::CountFree,
                )
                .unwrap();
                bound_pairs += 1;
                if !round.is_some_and(|r| (r as f64) < bound) {
                    violations += 1;
                }
            }
        }
    }
    let mut oracle_pairs = 0usize;
    let mut oracle_disagreements = 0usize;
    for n in 2..=7usize {
        let systems: Vec<RotationSystem> =
            (0..6).map(|s| gen::gen_rotation(n, s).unwrap()).collect();
        for i in 0..systems.len() {
            for j in i..systems.len() {
                let fast = systems[i].iso_decide(&systems[j]).unwrap().is_some();
                let slow =
                    gen::brute_force_rotation_iso(&systems[i], &systems[j], 7).unwrap().is_some();
                oracle_pairs += 1;
                oracle_disagreements += usize::from(fast != slow);
            }
        }
    }
    (
        bound_pairs >= 50 && violations == 0 && oracle_disagreements == 0,
        format!(
            "bound_pairs={bound_pairs} violations={violations} \
             oracle_pairs={oracle_pairs} oracle_disagreements={oracle_disagreements}"
        ),
    )
}

#[test]
fn criterion_6_rotation_round_bound_and_oracle() {
    let (ok, detail) = criterion6();
    println!("criterion 6: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 7

/// Stabilization bound: rounds_to_stable < 2·n^k on a spread of instances
/// (the engine additionally asserts this internally on every stable run).
fn criterion7() -> (bool, String) {
    let mut instances = 0usize;
    let mut violations = 0usize;
    let mut cases: Vec<(Graph, Graph, usize)> = Vec::new();
    let (c6, cc3) = gen::gen_regular_pair(6).unwrap();
    cases.push((c6, cc3, 2));
    for seed in 0..10 {
        cases.push((gen::gen_tree(8, seed).unwrap(), gen::gen_tree(8, seed + 100).unwrap(), 1));
        let a = gen::gen_partial_ktree(7, 2, seed).unwrap().graph;
        let b = gen::gen_partial_ktree(7, 2, seed + 100).unwrap().graph;
        cases.push((a, b, 2));
    }
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    cases.push((gen::gen_cfi(&k4, false).unwrap(), gen::gen_cfi(&k4, true).unwrap(), 1));
    for (g, h, k) in &cases {
        for variant in [Variant::Counting, Variant::CountFree] {
            let rep = wl::run(g, h, *k, variant, None).unwrap();
            instances += 1;
            let n = g.n().max(h.n());
            match rep.rounds_to_stable {
                Some(r) if r < 2 * n.pow(*k as u32) => {}
                _ => violations += 1,
            }
        }
    }
    (violations == 0, format!("instances={instances} violations={violations}"))
}

#[test]
fn criterion_7_stabilization_bound() {
    let (ok, detail) = criterion7();
    println!("criterion 7: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 8

/// The classical regular-pair failure: 1-WL cannot separate C6 from two
/// triangles; 2-WL can.
fn criterion8() -> (bool, String) {
    let (c6, cc3) = gen::gen_regular_pair(6).unwrap();
    let r1 = wl::run(&c6, &cc3, 1, Variant::Counting, None).unwrap();
    let r2 = wl::run(&c6, &cc3, 2, Variant::Counting, None).unwrap();
    let round = wl::min_distinguishing_round(&c6, &cc3, 2, Variant::Counting).unwrap();
    let truth = gen::brute_force_iso(&c6, &cc3).unwrap().is_none();
    let ok = r1.decision == Decision::Isomorphic
        && r2.decision == Decision::NonIsomorphic
        && round.is_some()
        && truth;
    (
        ok,
        format!(
            "k1={:?} k2={:?} k2_round={:?} oracle_noniso={truth}",
            r1.decision, r2.decision, round
        ),
    )
}

#[test]
fn criterion_8_regular_pair_false_positive() {
    let (ok, detail) = criterion8();
    println!("criterion 8: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 9

/// Determinism under parallelism: the full report text of criteria 1-8 is
/// bit-identical at 1, 2, and 8 worker threads.
#[test]
fn criterion_9_thread_count_determinism() {
    let run_all = || -> String {
        let mut out = String::new();
        for (i, (_, detail)) in [
            criterion1(),
            criterion2(),
            criterion3(),
            criterion4(),
            criterion5(),
            criterion6(),
            criterion7(),
            criterion8(),
        ]
        .into_iter()
        .enumerate()
        {
            writeln!(out, "criterion {}: {detail}", i + 1).unwrap();
        }
        out
    };
    let reports: Vec<String> = [1usize, 2, 8]
        .into_iter()
        .map(|threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(run_all)
        })
        .collect();
    let ok = reports[0] == reports[1] && reports[1] == reports[2];
    println!("criterion 9: {} — reports identical at 1/2/8 threads: {ok}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "thread-count dependent output:\n{}\n---\n{}\n---\n{}", reports[0], reports[1], reports[2]);
}
