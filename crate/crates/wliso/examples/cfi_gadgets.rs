//! Gadget pairs that fool low-dimensional refinement: the twisted and
//! untwisted expansions of a base graph are never isomorphic, but both are
//! 3-regular over base K4 and indistinguishable for small k.

use wliso::gen;
use wliso::graph::Graph;
use wliso::wl::{self, Variant};

fn main() {
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let plain = gen::gen_cfi(&k4, false).unwrap();
    let twisted = gen::gen_cfi(&k4, true).unwrap();
    println!("gadget graphs over K4: {} vertices, all degree 3", plain.n());

    let oracle = gen::brute_force_iso_budget(&plain, &twisted, 40).unwrap();
    println!("brute-force oracle: isomorphic = {}", oracle.is_some());

    for k in 1..=2 {
        let rep = wl::run(&plain, &twisted, k, Variant::Counting, None).unwrap();
        println!("counting {k}-dim refinement: {:?}", rep.decision);
    }

    // parity: twisting two edges undoes the twist
    let c3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let zero = gen::gen_cfi_twists(&c3, &[]).unwrap();
    let double = gen::gen_cfi_twists(&c3, &[(0, 1), (1, 2)]).unwrap();
    let same = gen::brute_force_iso_budget(&zero, &double, 18).unwrap();
    println!("over C3: double twist isomorphic to untwisted = {}", same.is_some());
}
