//! Run the refinement algorithm on a permuted copy (always reported
//! isomorphic) and on a genuinely different pair.

use wliso::gen;
use wliso::wl::{self, Variant};

fn main() {
    let g = gen::gen_tree(10, 42).unwrap();
    let copy = g.permuted(&[7, 2, 9, 0, 4, 1, 8, 3, 6, 5]);

    let report = wl::run(&g, &copy, 2, Variant::Counting, None).unwrap();
    println!("permuted copy:    {:?} after {} round(s)", report.decision, report.rounds_run);

    let other = gen::gen_tree(10, 43).unwrap();
    let report = wl::run(&g, &other, 1, Variant::Counting, None).unwrap();
    println!("different tree:   {:?} after {} round(s)", report.decision, report.rounds_run);
    println!("class counts per round: {:?}", report.class_counts);

    println!("\nreport as JSON:\n{}", serde_json::to_string_pretty(&report).unwrap());
}
