//! Compile the refinement algorithm into an explicit gate DAG, evaluate it
//! on a concrete pair, and compare with the direct implementation.

use wliso::circuit;
use wliso::graph::Graph;
use wliso::wl::{self, Decision, Variant};

fn main() {
    let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let star = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();

    for variant in [Variant::Counting, Variant::CountFree] {
        for r in 0..=2 {
            let c = circuit::compile(3, 2, r, variant).unwrap();
            let verdict = c.evaluate(&c.bind_inputs(&k3, &star).unwrap()).unwrap();
            let direct = wl::run(&k3, &star, 2, variant, Some(r)).unwrap().decision;
            println!(
                "{variant} r={r}: {} gates, depth {}, {} thresholds; circuit says {}, direct says {:?}",
                c.meta.gate_count,
                c.meta.depth,
                c.threshold_gate_count(),
                if verdict { "not distinguished" } else { "distinguished" },
                direct
            );
            assert_eq!(verdict, direct == Decision::Isomorphic);
        }
    }

    let c = circuit::compile(2, 2, 1, Variant::CountFree).unwrap();
    let dump = c.dump();
    println!("\nfirst lines of the n=2 dump ({} gates total):", c.meta.gate_count);
    for line in dump.lines().take(6) {
        println!("  {line}");
    }
}
