#[test]
fn probe_bubble_normalize() {
    use std::sync::Arc;
    use heegaard_core::pattern::{solve_orientations, TransversePattern, ClosedCurve, Piece};
    use heegaard_core::tricomplex::fixtures;
    let tri = Arc::new(fixtures::doubled_tetrahedron());
    let mut raw = TransversePattern::empty(Arc::clone(&tri));
    raw.faces[0].closed.push(ClosedCurve { anchor: (0, 0), side_toward: false });
    for t in 0..2 {
        raw.tets[t].pieces.push(Piece::Disc { circle: 0 });
    }
    let p = solve_orientations(&raw).unwrap().into_iter().next().unwrap();
    p.validate().unwrap();
    println!("bubble valid, chi {}", p.euler_characteristic());
    match heegaard_core::normalize(&p, 0) {
        Ok(out) => println!("normalize ok: class comps {}, spheres {}", out.class.components, out.spheres.len()),
        Err(e) => println!("normalize FAILED: {e}"),
    }
}

#[test]
fn probe_push_normalize() {
    use std::sync::Arc;
    use heegaard_core::pattern::vertex_link_pattern;
    use heegaard_core::tricomplex::fixtures;
    use heegaard_core::{applicable_moves, apply_move, Selector};
    let tri = Arc::new(fixtures::boundary_four_simplex());
    let vl = vertex_link_pattern(&tri, 0).unwrap();
    let m = applicable_moves(&vl).unwrap().into_iter()
        .find(|m| matches!(m.selector, Selector::FacePush { .. })).unwrap();
    println!("push move: {m:?}");
    let q = apply_move(&vl, &m).unwrap();
    println!("pushed ok, curves {}", q.closed_total());
    match heegaard_core::normalize(&q, 0) {
        Ok(out) => println!("normalize ok: spheres {}", out.spheres.len()),
        Err(e) => println!("normalize FAILED: {e}"),
    }
}
