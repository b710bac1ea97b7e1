//! Rotation systems: coordinates relative to an origin edge, the
//! coordinate-matching isomorphism test, and face tracing.

use wliso::rotation::RotationSystem;

fn main() {
    // tetrahedron drawn on the sphere
    let planar = RotationSystem::new(vec![
        vec![1, 3, 2],
        vec![3, 0, 2],
        vec![1, 0, 3],
        vec![2, 0, 1],
    ])
    .unwrap();
    // the same graph with one vertex's cyclic order reversed: a torus drawing
    let twisted = RotationSystem::new(vec![
        vec![2, 3, 1],
        vec![3, 0, 2],
        vec![1, 0, 3],
        vec![2, 0, 1],
    ])
    .unwrap();

    println!("coordinates of the planar K4 from origin edge (0, 1):");
    for c in planar.global_coords(0, 1).unwrap() {
        println!("  vertex {}: {:?}", c.target, c.coords);
    }

    for (name, r) in [("planar", &planar), ("twisted", &twisted)] {
        println!(
            "{name}: {} faces, Euler characteristic {}",
            r.face_walk().len(),
            r.euler_characteristic()
        );
    }

    println!(
        "iso_decide(planar, twisted): {:?}",
        planar.iso_decide(&twisted).unwrap()
    );
    let relabeled = RotationSystem::from_text(&{
        // relabel 0<->3 by hand
        let mut t = String::new();
        t.push_str("3: 1 0 2\n1: 0 3 2\n2: 1 3 0\n0: 2 3 1\n");
        t
    })
    .unwrap();
    println!(
        "iso_decide(planar, relabeled copy): {:?}",
        planar.iso_decide(&relabeled).unwrap()
    );
}
