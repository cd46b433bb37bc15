use super::fixtures::{boundary_four_simplex, doubled_tetrahedron, face_self_glued};
use super::*;

#[test]
fn empty_table_rejected() {
    assert!(matches!(Triangulation::build(&[]), Err(Error::EmptyInput)));
}

#[test]
fn unpaired_face_rejected() {
    let mut table = doubled_tetrahedron().table();
    table[1][2] = None;
    match Triangulation::build(&table) {
        Err(Error::UnpairedFace { tet: 1, face: 2 }) => {}
        other => panic!("expected UnpairedFace, got {other:?}"),
    }
}

#[test]
fn non_involutive_gluing_rejected() {
    let mut table = doubled_tetrahedron().table();
    // Send tet 0 face 0 to tet 1 face 1; tet 1 does not point back.
    table[0][0] = Some(GlueSpec {
        tet: 1,
        face: 1,
        images: [0, 2, 3],
    });
    assert!(matches!(
        Triangulation::build(&table),
        Err(Error::NonInvolutiveGluing { .. })
    ));
}

#[test]
fn out_of_range_target_rejected() {
    let mut table = doubled_tetrahedron().table();
    table[0][0] = Some(GlueSpec {
        tet: 7,
        face: 0,
        images: [1, 2, 3],
    });
    assert!(matches!(
        Triangulation::build(&table),
        Err(Error::ValidationError(_))
    ));
}

#[test]
fn boundary_four_simplex_f_vector() {
    let t = boundary_four_simplex();
    assert_eq!(t.f_vector(), (5, 10, 10, 5));
    assert_eq!(t.euler_characteristic(), 0);
}

#[test]
fn doubled_tetrahedron_f_vector() {
    let t = doubled_tetrahedron();
    assert_eq!(t.f_vector(), (4, 6, 4, 2));
    assert_eq!(t.euler_characteristic(), 0);
}

#[test]
fn boundary_four_simplex_is_manifold() {
    let t = boundary_four_simplex();
    let r = t.validate_manifold();
    assert!(r.pass);
    for v in &r.vertex_links {
        // Each vertex link is the boundary of a tetrahedron.
        assert_eq!(
            (v.link_vertices, v.link_edges, v.link_faces),
            (4, 6, 4),
            "vertex {}",
            v.vertex
        );
        assert!(v.is_sphere);
    }
    for e in &r.edge_links {
        assert_eq!(e.incidences, 3);
        assert!(e.is_circle && !e.reversed);
    }
}

#[test]
fn doubled_tetrahedron_is_manifold() {
    let t = doubled_tetrahedron();
    let r = t.validate_manifold();
    assert!(r.pass);
    for v in &r.vertex_links {
        assert_eq!(
            (v.link_vertices, v.link_edges, v.link_faces),
            (3, 3, 2),
            "vertex {}",
            v.vertex
        );
    }
    for e in &r.edge_links {
        assert_eq!(e.incidences, 2);
        assert!(e.is_circle);
    }
}

#[test]
fn self_glued_face_builds_but_fails_validation() {
    let t = face_self_glued();
    let r = t.validate_manifold();
    assert!(!r.pass);
    // The identity self-gluing fixes edge sides pointwise: a mirror fold.
    assert!(r.edge_links.iter().any(|e| e.folded));
}

#[test]
fn fixtures_have_no_reversed_edges() {
    for t in [boundary_four_simplex(), doubled_tetrahedron()] {
        for c in 0..t.edge_count() {
            assert!(!t.edge_reversed(c));
        }
    }
}

#[test]
fn edge_signs_consistent_across_incidences() {
    // Walking any gluing must map a positively-oriented incidence direction
    // to the direction with the same sign on the other side.
    for t in [boundary_four_simplex(), doubled_tetrahedron()] {
        for tet in 0..t.tet_count() {
            for k in 0..4u8 {
                let g = *t.gluing(tet, k);
                for &(a, b) in &EDGE_VERTICES {
                    if a == k || b == k {
                        continue;
                    }
                    let e = edge_index(a, b);
                    let (ia, ib) = (g.vmap[a as usize], g.vmap[b as usize]);
                    let e2 = edge_index(ia, ib);
                    assert_eq!(t.edge_class(tet, e), t.edge_class(g.tet, e2));
                    // Sign flips exactly when the gluing reverses the
                    // ascending order of the endpoints.
                    let flip = (a < b) != (ia < ib);
                    let same = t.edge_sign(tet, e) == t.edge_sign(g.tet, e2);
                    assert_eq!(same, !flip);
                }
            }
        }
    }
}

#[test]
fn edge_fans_cover_incidences() {
    let t = boundary_four_simplex();
    for c in 0..t.edge_count() {
        let fan = t.edge_fan(c).unwrap();
        assert_eq!(fan.len(), 3);
        let mut seen: Vec<(usize, u8)> = fan.iter().map(|f| (f.tet, f.edge)).collect();
        seen.sort_unstable();
        let mut expect = t.edge_incidences(c).to_vec();
        expect.sort_unstable();
        assert_eq!(seen, expect);
        // Consecutive entries are linked by the exit gluing.
        for i in 0..fan.len() {
            let cur = &fan[i];
            let next = &fan[(i + 1) % fan.len()];
            let g = t.gluing(cur.tet, cur.exit_face);
            assert_eq!(g.tet, next.tet);
            assert_eq!(g.face, next.enter_face);
        }
    }
    let d = doubled_tetrahedron();
    for c in 0..d.edge_count() {
        assert_eq!(d.edge_fan(c).unwrap().len(), 2);
    }
}

#[test]
fn star_radius_one_around_vertex() {
    let t = boundary_four_simplex();
    let s = t.star(SimplexRef::new(0, 0), 1).unwrap();
    assert_eq!(s.tets.len(), 4);
    assert!(s.evidence.connected);
    assert_eq!(s.evidence.euler_characteristic, 1);
    assert_eq!(s.evidence.boundary_faces, 4);
    assert_eq!(s.evidence.boundary_euler_characteristic, 2);
    assert!(s.evidence.certified_ball);
}

#[test]
fn star_radius_one_around_tet_covers_everything() {
    let t = boundary_four_simplex();
    let s = t.star(SimplexRef::new(3, 0), 1).unwrap();
    assert_eq!(s.tets.len(), 5);
    // The whole closed manifold: no boundary, not a ball.
    assert_eq!(s.evidence.boundary_faces, 0);
    assert_eq!(s.evidence.euler_characteristic, 0);
    assert!(!s.evidence.certified_ball);
}

#[test]
fn star_radius_two_around_vertex_covers_everything() {
    let t = boundary_four_simplex();
    let s = t.star(SimplexRef::new(0, 0), 2).unwrap();
    assert_eq!(s.tets.len(), 5);
}

#[test]
fn star_rejects_radius_zero_and_bad_simplex() {
    let t = boundary_four_simplex();
    assert!(t.star(SimplexRef::new(0, 0), 0).is_err());
    assert!(matches!(
        t.star(SimplexRef::new(0, 99), 1),
        Err(Error::InvalidSimplex { dim: 0, index: 99 })
    ));
    assert!(matches!(
        t.star(SimplexRef::new(4, 0), 1),
        Err(Error::InvalidSimplex { dim: 4, .. })
    ));
}

#[test]
fn star_of_barycenter_in_subdivision_is_certified_ball() {
    let d = doubled_tetrahedron().subdivide().unwrap();
    let bc = d
        .vertex_carrier
        .iter()
        .position(|&s| s == SimplexRef::new(3, 0))
        .unwrap();
    let s = d.tri.star(SimplexRef::new(0, bc), 1).unwrap();
    // Exactly the 24 flag tets of the original tet 0.
    assert_eq!(s.tets.len(), 24);
    assert!(s.tets.iter().all(|&t| d.tet_carrier[t] == 0));
    assert!(s.evidence.certified_ball);
    assert_eq!(s.evidence.boundary_faces, 24);
    assert_eq!(s.evidence.boundary_euler_characteristic, 2);
}

#[test]
fn subdivision_counts_and_validity() {
    let b = boundary_four_simplex();
    let s = b.subdivide().unwrap();
    assert_eq!(s.tri.tet_count(), 120);
    let (v, e, f, t) = s.tri.f_vector();
    // One new vertex per original simplex.
    assert_eq!(v, 5 + 10 + 10 + 5);
    assert_eq!(v as i64 - e as i64 + f as i64 - t as i64, 0);
    assert!(s.tri.validate_manifold().pass);

    let d = doubled_tetrahedron().subdivide().unwrap();
    assert_eq!(d.tri.tet_count(), 48);
    assert_eq!(d.tri.vertex_count(), 4 + 6 + 4 + 2);
    assert!(d.tri.validate_manifold().pass);
}

#[test]
fn subdivision_carriers_are_consistent() {
    let b = boundary_four_simplex();
    let s = b.subdivide().unwrap();
    // 24 new tets per old tet.
    for old in 0..b.tet_count() {
        assert_eq!(s.tet_carrier.iter().filter(|&&c| c == old).count(), 24);
    }
    // Vertex carriers hit every original simplex exactly once.
    let mut by_dim = [0usize; 4];
    for c in &s.vertex_carrier {
        by_dim[c.dim as usize] += 1;
    }
    assert_eq!(by_dim, [5, 10, 10, 5]);
    let mut sorted = s.vertex_carrier.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), s.vertex_carrier.len());
}

#[test]
fn subdivide_depth_composes_tet_carriers() {
    let d = doubled_tetrahedron();
    let s2 = d.subdivide_depth(2).unwrap();
    assert_eq!(s2.tri.tet_count(), 2 * 24 * 24);
    for old in 0..2 {
        assert_eq!(
            s2.tet_carrier.iter().filter(|&&c| c == old).count(),
            24 * 24
        );
    }
    let s0 = d.subdivide_depth(0).unwrap();
    assert_eq!(s0.tri.tet_count(), 2);
    assert_eq!(s0.tet_carrier, vec![0, 1]);
}

#[test]
fn canonical_hash_is_stable_and_discriminating() {
    let a = boundary_four_simplex();
    let b = doubled_tetrahedron();
    assert_eq!(a.canonical_hash().len(), 64);
    assert_ne!(a.canonical_hash(), b.canonical_hash());
    // Rebuilding from the round-tripped table reproduces the digest.
    let rebuilt = Triangulation::build(&a.table()).unwrap();
    assert_eq!(rebuilt.canonical_hash(), a.canonical_hash());
}

#[test]
fn carrier_tets_and_vertex_classes() {
    let t = boundary_four_simplex();
    for v in 0..t.vertex_count() {
        assert_eq!(t.carrier_tets(SimplexRef::new(0, v)).unwrap().len(), 4);
    }
    for e in 0..t.edge_count() {
        assert_eq!(t.carrier_tets(SimplexRef::new(1, e)).unwrap().len(), 3);
        assert_eq!(
            t.simplex_vertex_classes(SimplexRef::new(1, e))
                .unwrap()
                .len(),
            2
        );
    }
    for f in 0..t.face_count() {
        assert_eq!(t.carrier_tets(SimplexRef::new(2, f)).unwrap().len(), 2);
        assert_eq!(
            t.simplex_vertex_classes(SimplexRef::new(2, f))
                .unwrap()
                .len(),
            3
        );
    }
    for s in 0..t.tet_count() {
        assert_eq!(t.carrier_tets(SimplexRef::new(3, s)).unwrap(), vec![s]);
        assert_eq!(
            t.simplex_vertex_classes(SimplexRef::new(3, s))
                .unwrap()
                .len(),
            4
        );
    }
}

#[test]
fn face_local_tables_agree() {
    for e in 0..6u8 {
        let (a, b) = EDGE_VERTICES[e as usize];
        assert_eq!(edge_index(a, b), e);
        assert_eq!(edge_index(b, a), e);
        let (f1, f2) = faces_of_edge(e);
        for f in [f1, f2] {
            assert!(FACE_VERTICES[f as usize].contains(&a));
            assert!(FACE_VERTICES[f as usize].contains(&b));
        }
    }
    for k in 0..4u8 {
        assert!(!FACE_VERTICES[k as usize].contains(&k));
    }
}

#[test]
fn fixture_orientability() {
    assert!(boundary_four_simplex().is_orientable());
    assert!(doubled_tetrahedron().is_orientable());
    // Identity self-gluing forces a reversing identification.
    assert!(!face_self_glued().is_orientable());
}
