//! The classical failure mode of color refinement: a 6-cycle and two
//! disjoint triangles are both 2-regular, so 1-dimensional refinement never
//! separates them. The 2-dimensional algorithm sees pair distances and does.

use wliso::gen;
use wliso::wl::{self, Variant};

fn main() {
    let (c6, two_c3) = gen::gen_regular_pair(6).unwrap();

    let r1 = wl::run(&c6, &two_c3, 1, Variant::Counting, None).unwrap();
    println!("k=1: {:?} (a false positive — the pair is not isomorphic)", r1.decision);

    let r2 = wl::run(&c6, &two_c3, 2, Variant::Counting, None).unwrap();
    let round = wl::min_distinguishing_round(&c6, &two_c3, 2, Variant::Counting).unwrap();
    println!("k=2: {:?}, first distinguished at round {}", r2.decision, round.unwrap());

    let oracle = gen::brute_force_iso(&c6, &two_c3).unwrap();
    println!("brute-force oracle agrees: {}", oracle.is_none());
}
