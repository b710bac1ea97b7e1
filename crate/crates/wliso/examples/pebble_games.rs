//! Exact distinguishing depths from the pebble games, and the midpoint
//! halving strategy on paths of different lengths.

use wliso::games::{ef_depth, halving_strategy, GameVariant};
use wliso::graph::Graph;

fn path(n: usize) -> Graph {
    Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
}

fn main() {
    let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let star = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();

    for variant in [GameVariant::Plain, GameVariant::Counting] {
        for k in 2..=3 {
            let d = ef_depth(&k3, &star, k, variant).unwrap();
            println!(
                "K3 vs K_1,2  k={k} {variant:?}: depth {}",
                d.value.map_or("inf".into(), |v| v.to_string())
            );
        }
    }

    // identical structures are never distinguished
    let same = ef_depth(&k3, &k3, 3, GameVariant::Plain).unwrap();
    println!("K3 vs K3     k=3 Plain: depth {:?}", same.value);

    // pebbled path endpoints at distance 8 vs 9: Spoiler repeatedly pebbles
    // the midpoint of the shorter distance and wins in log-many moves
    let out = halving_strategy(&path(9), &path(10), (0, 8, 0, 9)).unwrap();
    println!(
        "halving on P9 vs P10 endpoints: bound {} moves, worst playout {} moves",
        out.bound, out.worst_case_moves
    );
}
