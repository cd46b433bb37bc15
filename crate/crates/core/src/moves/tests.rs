use std::collections::BTreeSet;
use std::sync::Arc;

use super::*;
use crate::error::Error;
use crate::pattern::{
    canonical_class, canonical_digest, canonicalize, parallel_double, solve_orientations,
    surface_topology, vertex_link_pattern, ClosedCurve, Grade, Piece, TransversePattern,
};
use crate::tricomplex::{fixtures, Triangulation};

fn s3() -> Arc<Triangulation> {
    Arc::new(fixtures::boundary_four_simplex())
}

fn dt() -> Arc<Triangulation> {
    Arc::new(fixtures::doubled_tetrahedron())
}

fn vlink(tri: &Arc<Triangulation>, v: usize) -> TransversePattern {
    vertex_link_pattern(tri, v).unwrap()
}

fn first_move_of<F: Fn(&Move) -> bool>(p: &TransversePattern, pred: F) -> Move {
    applicable_moves(p)
        .unwrap()
        .into_iter()
        .find(|m| pred(m))
        .expect("no applicable move of the requested shape")
}

/// Vertex link with one disc pushed through a face, leaving a closed curve.
fn pushed(p: &TransversePattern) -> TransversePattern {
    let m = first_move_of(p, |m| matches!(m.selector, Selector::FacePush { .. }));
    apply_move(p, &m).unwrap()
}

/// Vertex link with one sheet wrapped around an edge.
fn wrapped(p: &TransversePattern) -> TransversePattern {
    let m = first_move_of(p, |m| matches!(m.selector, Selector::EdgeUp { .. }));
    apply_move(p, &m).unwrap()
}

/// Genus-one surface without closed curves: a doubled vertex link whose two
/// sphere copies are joined by tubes in two different corner tets.
fn double_tube(tri: &Arc<Triangulation>) -> TransversePattern {
    let pd = parallel_double(&vlink(tri, 0)).unwrap();
    let inc = tri.vertex_incidences(0);
    let once = tube(&pd, inc[0].0, 0, 1).unwrap();
    tube(&once, inc[1].0, 0, 1).unwrap()
}

/// Torus made of two closed face curves joined by an annulus in each tet of
/// the doubled tetrahedron. Both curves are essential on it.
fn curve_torus() -> TransversePattern {
    let tri = dt();
    let mut raw = TransversePattern::empty(Arc::clone(&tri));
    for f in 0..2 {
        raw.faces[f].closed.push(ClosedCurve {
            anchor: (0, 0),
            side_toward: false,
        });
    }
    for t in 0..2 {
        raw.tets[t].pieces.push(Piece::Annulus { circles: [0, 1] });
    }
    let solved = solve_orientations(&raw).unwrap();
    assert_eq!(solved.len(), 2, "torus skeleton has one label component");
    let p = solved.into_iter().next().unwrap();
    p.validate().unwrap();
    p
}

/// Sphere made of one closed face curve capped by a disc on both sides.
fn curve_bubble() -> TransversePattern {
    let tri = dt();
    let mut raw = TransversePattern::empty(Arc::clone(&tri));
    raw.faces[0].closed.push(ClosedCurve {
        anchor: (0, 0),
        side_toward: false,
    });
    for t in 0..2 {
        raw.tets[t].pieces.push(Piece::Disc { circle: 0 });
    }
    let p = solve_orientations(&raw)
        .unwrap()
        .into_iter()
        .next()
        .unwrap();
    p.validate().unwrap();
    p
}

/// Sorted per-component shape: (Euler characteristic, genus, orientability).
fn component_shape(p: &TransversePattern) -> Vec<(i64, Option<u32>, bool)> {
    let topo = surface_topology(p).unwrap();
    let mut v: Vec<_> = topo
        .components
        .iter()
        .map(|c| (c.euler_characteristic, c.genus, c.orientable))
        .collect();
    v.sort();
    v
}

fn edge_ends_at(tri: &Triangulation, v: usize) -> usize {
    (0..tri.edge_count())
        .map(|e| {
            let (a, b) = tri.edge_endpoints(e);
            usize::from(a == v) + usize::from(b == v)
        })
        .sum()
}

fn corpus() -> Vec<(&'static str, TransversePattern)> {
    let s3t = s3();
    let dtt = dt();
    let link = vlink(&s3t, 0);
    vec![
        ("s3 empty", TransversePattern::empty(Arc::clone(&s3t))),
        ("s3 vertex link 0", link.clone()),
        ("s3 vertex link 2", vlink(&s3t, 2)),
        ("s3 doubled link", parallel_double(&link).unwrap()),
        ("s3 pushed link", pushed(&link)),
        ("s3 wrapped link", wrapped(&link)),
        ("s3 double tube", double_tube(&s3t)),
        ("dt empty", TransversePattern::empty(Arc::clone(&dtt))),
        ("dt vertex link 0", vlink(&dtt, 0)),
        ("dt curve torus", curve_torus()),
    ]
}

#[test]
fn empty_pattern_moves_create_vertex_links() {
    for tri in [s3(), dt()] {
        let empty = TransversePattern::empty(Arc::clone(&tri));
        let moves = applicable_moves(&empty).unwrap();
        assert_eq!(moves.len(), 2 * tri.vertex_count());
        for m in &moves {
            assert_eq!(m.kind, MoveKind::V0);
            let Selector::Vertex { down, .. } = &m.selector else {
                panic!("vertex move with a non-vertex selector: {m:?}");
            };
            assert!(down.is_empty());
        }
        for v in 0..tri.vertex_count() {
            let got: BTreeSet<String> = moves
                .iter()
                .filter(|m| m.locus.index == v)
                .map(|m| canonical_digest(&apply_move(&empty, m).unwrap()))
                .collect();
            assert_eq!(got.len(), 2, "two label choices at vertex {v}");
            let want: BTreeSet<String> = solve_orientations(&vlink(&tri, v))
                .unwrap()
                .iter()
                .map(|q| canonicalize(q).unwrap().digest)
                .collect();
            assert_eq!(got, want, "creations at vertex {v} are the two link labelings");
        }
    }
}

#[test]
fn creation_then_collapse_is_identity() {
    let tri = s3();
    let empty = TransversePattern::empty(Arc::clone(&tri));
    let creation = applicable_moves(&empty).unwrap().into_iter().next().unwrap();
    let (q, inv) = apply_move_with_inverse(&empty, &creation).unwrap();
    assert_eq!(q.euler_characteristic(), 2);
    assert_eq!(q.grade(), Grade::Normal);
    assert_eq!(inv.kind, MoveKind::V0);
    let Selector::Vertex { down, .. } = &inv.selector else {
        panic!("collapse selector missing");
    };
    assert_eq!(down.len(), edge_ends_at(&tri, creation.locus.index));
    let r = apply_move(&q, &inv).unwrap();
    assert_eq!(canonical_digest(&r), canonical_digest(&empty));
}

/// Every applicable move applies, balances weight and Euler characteristic
/// according to its family, preserves per-component topology when it is an
/// isotopy move, and is undone exactly by its reported inverse.
#[test]
fn every_move_round_trips_and_balances() {
    for (name, p) in corpus() {
        p.validate().unwrap();
        let base = canonical_digest(&p);
        let chi = p.euler_characteristic();
        let w = p.weight() as i64;
        let shape = component_shape(&p);
        let moves = applicable_moves(&p).unwrap();
        assert!(!moves.is_empty(), "{name}: no applicable moves");
        for m in &moves {
            assert_eq!(m.locus.dim, m.kind.locus_dim(), "{name}: {m:?}");
            let (q, inv) = apply_move_with_inverse(&p, m)
                .unwrap_or_else(|e| panic!("{name}: candidate {m:?} failed: {e}"));
            q.validate()
                .unwrap_or_else(|e| panic!("{name}: {m:?} output invalid: {e}"));
            let dchi = q.euler_characteristic() - chi;
            let dw = q.weight() as i64 - w;
            match m.kind {
                MoveKind::V0 => {
                    let Selector::Vertex { down, .. } = &m.selector else {
                        panic!("{name}: {m:?}");
                    };
                    let ends = edge_ends_at(&p.tri, m.locus.index);
                    let expect = if down.is_empty() {
                        2
                    } else if down.len() == ends {
                        -2
                    } else {
                        0
                    };
                    assert_eq!(dchi, expect, "{name}: {m:?}");
                }
                MoveKind::E1 => {
                    assert_eq!(dchi, 0, "{name}: {m:?}");
                    assert_eq!(dw, 2, "{name}: {m:?}");
                    assert_eq!(
                        q.edge_points[m.locus.index],
                        p.edge_points[m.locus.index] + 2,
                        "{name}: {m:?} must load the locus edge"
                    );
                }
                MoveKind::E1Inverse => {
                    assert_eq!(dchi, 0, "{name}: {m:?}");
                    assert_eq!(dw, -2, "{name}: {m:?}");
                    assert_eq!(
                        q.edge_points[m.locus.index] + 2,
                        p.edge_points[m.locus.index],
                        "{name}: {m:?} must unload the locus edge"
                    );
                }
                MoveKind::F2a | MoveKind::F2aInverse | MoveKind::F2b => {
                    assert_eq!((dchi, dw), (0, 0), "{name}: {m:?}");
                }
                MoveKind::Pinch => {
                    assert_eq!((dchi, dw), (-2, 0), "{name}: {m:?}");
                }
                MoveKind::PinchInverse => {
                    assert_eq!((dchi, dw), (2, 0), "{name}: {m:?}");
                }
            }
            if matches!(
                m.kind,
                MoveKind::E1
                    | MoveKind::E1Inverse
                    | MoveKind::F2a
                    | MoveKind::F2aInverse
                    | MoveKind::F2b
            ) {
                assert_eq!(
                    component_shape(&q),
                    shape,
                    "{name}: {m:?} is an isotopy move but changed the topology"
                );
            }
            let r = apply_move(&q, &inv)
                .unwrap_or_else(|e| panic!("{name}: inverse {inv:?} of {m:?} failed: {e}"));
            assert_eq!(
                canonical_digest(&r),
                base,
                "{name}: {m:?} then {inv:?} does not return to the start"
            );
        }
    }
}

#[test]
fn applicable_moves_is_deterministic() {
    let pd = parallel_double(&vlink(&s3(), 0)).unwrap();
    let a = applicable_moves(&pd).unwrap();
    let b = applicable_moves(&pd).unwrap();
    assert_eq!(a, b);
}

#[test]
fn moves_reject_bad_loci() {
    let vl = vlink(&s3(), 0);
    let wrong_dim = Move::new(
        MoveKind::E1,
        SimplexRef::new(0, 0),
        Selector::EdgeUp {
            gap: 0,
            wall: 0,
            arc: 0,
        },
    );
    assert!(matches!(
        apply_move(&vl, &wrong_dim),
        Err(Error::MoveNotApplicable { .. })
    ));
    let missing = Move::new(
        MoveKind::V0,
        SimplexRef::new(0, 99),
        Selector::Vertex {
            down: vec![],
            label: false,
        },
    );
    assert!(matches!(
        apply_move(&vl, &missing),
        Err(Error::MoveNotApplicable { .. })
    ));
}

#[test]
fn tube_joins_spheres_and_raises_genus() {
    let tri = s3();
    let pd = parallel_double(&vlink(&tri, 0)).unwrap();
    let inc = tri.vertex_incidences(0);
    let once = tube(&pd, inc[0].0, 0, 1).unwrap();
    let t1 = surface_topology(&once).unwrap();
    assert_eq!((t1.component_count(), t1.euler_characteristic), (1, 2));
    let twice = tube(&once, inc[1].0, 0, 1).unwrap();
    let t2 = surface_topology(&twice).unwrap();
    assert_eq!((t2.component_count(), t2.euler_characteristic), (1, 0));
    assert_eq!(t2.components[0].genus, Some(1));
    assert!(t2.components[0].orientable);
}

#[test]
fn tube_rejects_separated_discs() {
    let tri = s3();
    let pd4 = parallel_double(&parallel_double(&vlink(&tri, 0)).unwrap()).unwrap();
    let t = tri.vertex_incidences(0)[0].0;
    assert_eq!(pd4.tets[t].pieces.len(), 4);
    // Four nested discs: only the three neighboring pairs cobound a region.
    let mut ok = 0;
    let mut rejected = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            match tube(&pd4, t, a, b) {
                Ok(_) => ok += 1,
                Err(Error::NotParallel { .. }) => rejected += 1,
                Err(e) => panic!("unexpected tube error: {e}"),
            }
        }
    }
    assert_eq!((ok, rejected), (3, 3));
}

#[test]
fn pinch_move_absorbs_a_parallel_sphere() {
    let pd = parallel_double(&vlink(&s3(), 0)).unwrap();
    assert_eq!(surface_topology(&pd).unwrap().component_count(), 2);
    let m = first_move_of(&pd, |m| m.kind == MoveKind::Pinch);
    let q = apply_move(&pd, &m).unwrap();
    let topo = surface_topology(&q).unwrap();
    assert_eq!((topo.component_count(), topo.euler_characteristic), (1, 2));
    assert_eq!(topo.components[0].genus, Some(0));
    assert_eq!(q.grade(), Grade::AlmostNormal);
}

#[test]
fn saddle_needs_a_shared_patch_piece() {
    // Two arcs from different components share a region but never bound one
    // piece, so the saddle between them is rejected until the components
    // are tubed together.
    let tri = s3();
    let pd = parallel_double(&vlink(&tri, 0)).unwrap();
    let f = (0..tri.face_count())
        .find(|&f| pd.faces[f].arcs.len() == 2)
        .unwrap();
    for from in 0..2u8 {
        let m = Move::new(
            MoveKind::F2b,
            SimplexRef::new(2, f),
            Selector::FaceSaddle {
                from,
                participants: Participants::Arcs(0, 1),
            },
        );
        assert!(matches!(
            apply_move(&pd, &m),
            Err(Error::MoveNotApplicable { .. })
        ));
    }
    for m in applicable_moves(&pd).unwrap() {
        if let Selector::FaceSaddle {
            participants: Participants::Arcs(..),
            ..
        } = m.selector
        {
            panic!("cross-component arc saddle offered as applicable: {m:?}");
        }
    }
}

#[test]
fn tube_then_saddle_agrees_for_both_tube_sites() {
    let tri = s3();
    let pd = parallel_double(&vlink(&tri, 0)).unwrap();
    let f = (0..tri.face_count())
        .find(|&f| pd.faces[f].arcs.len() == 2)
        .unwrap();
    let inc = tri.face_incidences(f);
    assert_eq!(inc.len(), 2);
    let mut digests = Vec::new();
    for (side, &(t, _)) in inc.iter().enumerate() {
        assert_eq!(pd.tets[t].pieces.len(), 2);
        let tubed = tube(&pd, t, 0, 1).unwrap();
        let m = Move::new(
            MoveKind::F2b,
            SimplexRef::new(2, f),
            Selector::FaceSaddle {
                from: side as u8,
                participants: Participants::Arcs(0, 1),
            },
        );
        let q = apply_move(&tubed, &m).unwrap();
        let topo = surface_topology(&q).unwrap();
        assert_eq!((topo.component_count(), topo.euler_characteristic), (1, 2));
        digests.push(canonicalize(&q).unwrap().digest);
    }
    assert_eq!(digests[0], digests[1], "both tube sites resolve the same way");
}

#[test]
fn normalize_fixes_crudely_normal_patterns() {
    let tri = s3();
    let vl = vlink(&tri, 0);
    let out = normalize(&vl, 0).unwrap();
    assert!(out.spheres.is_empty());
    assert_eq!(out.class.digest, canonicalize(&vl).unwrap().digest);

    let core = double_tube(&tri);
    let out = normalize(&core, 1).unwrap();
    assert!(out.spheres.is_empty());
    assert_eq!(out.class.digest, canonicalize(&core).unwrap().digest);
}

#[test]
fn normalize_pulls_push_bubble_back() {
    let vl = vlink(&s3(), 0);
    let q = pushed(&vl);
    assert_eq!(q.closed_total(), 1);
    let out = normalize(&q, 0).unwrap();
    assert_eq!(out.spheres.len(), 1);
    assert_eq!(out.spheres[0].euler_characteristic, 2);
    assert_eq!(out.spheres[0].weight, 0);
    assert_eq!(out.class.digest, canonicalize(&vl).unwrap().digest);
}

#[test]
fn normalize_removes_pure_bubble() {
    let bubble = curve_bubble();
    assert_eq!(surface_topology(&bubble).unwrap().euler_characteristic, 2);
    let out = normalize(&bubble, 0).unwrap();
    assert_eq!(out.class.components, 0);
    assert_eq!(out.class.weight, 0);
    assert_eq!(out.spheres.len(), 1);
    assert_eq!(
        out.spheres[0].digest,
        canonicalize(&bubble).unwrap().digest,
        "the reported sphere is the bubble itself"
    );
}

#[test]
fn normalize_prunes_extra_spheres_genus_zero() {
    let vl = vlink(&s3(), 0);
    let pd = parallel_double(&vl).unwrap();
    let out = normalize(&pd, 0).unwrap();
    assert_eq!(out.spheres.len(), 1);
    assert_eq!(out.class.components, 1);
    assert_eq!(out.class.weight, 4);
    let link_q = canonical_class(&vl, true).unwrap().digest;
    assert_eq!(canonical_class(&out.class.pattern, true).unwrap().digest, link_q);
    assert_eq!(
        canonical_class(&out.spheres[0].pattern, true).unwrap().digest,
        link_q
    );
    let again = normalize(&out.class.pattern, 0).unwrap();
    assert!(again.spheres.is_empty());
    assert_eq!(again.class.digest, out.class.digest);
}

#[test]
fn normalize_extracts_core_beside_created_sphere() {
    let tri = s3();
    let core = double_tube(&tri);
    let creation = first_move_of(&core, |m| {
        matches!(&m.selector, Selector::Vertex { down, .. } if down.is_empty())
    });
    let q = apply_move(&core, &creation).unwrap();
    assert_eq!(surface_topology(&q).unwrap().component_count(), 2);
    let out = normalize(&q, 1).unwrap();
    assert_eq!(out.spheres.len(), 1);
    assert_eq!(out.spheres[0].euler_characteristic, 2);
    assert_eq!(
        out.class.digest,
        canonicalize(&core).unwrap().digest,
        "splitting off the created sphere restores the core exactly"
    );
}

#[test]
fn normalize_rejects_essential_curves() {
    match normalize(&curve_torus(), 1) {
        Err(Error::EssentialBoundaryCurve { .. }) => {}
        other => panic!("expected an essential-curve rejection, got {other:?}"),
    }
}

#[test]
fn normalize_genus_mismatch_is_reported() {
    let tri = s3();
    match normalize(&vlink(&tri, 0), 1) {
        Err(Error::GenusNotFound { genus }) => assert_eq!(genus, 1),
        other => panic!("expected a missing genus-1 component, got {other:?}"),
    }
    match normalize(&double_tube(&tri), 0) {
        Err(Error::GenusNotFound { genus }) => assert_eq!(genus, 0),
        other => panic!("expected a genus-0 rejection, got {other:?}"),
    }
}

#[test]
fn normalize_never_raises_weight() {
    for (name, p) in corpus() {
        let genus = surface_topology(&p).unwrap().core_genus().unwrap_or(0);
        match normalize(&p, genus) {
            Ok(out) => assert!(
                out.class.weight <= p.weight(),
                "{name}: normalize raised the weight"
            ),
            Err(Error::EssentialBoundaryCurve { .. }) => {}
            Err(e) => panic!("{name}: normalize failed: {e}"),
        }
    }
}

#[test]
fn convert_path_collapses_a_push_pull_pair() {
    let vl = vlink(&s3(), 0);
    let push = first_move_of(&vl, |m| matches!(m.selector, Selector::FacePush { .. }));
    let (mid, pull) = apply_move_with_inverse(&vl, &push).unwrap();
    let steps = vec![(vl.clone(), push), (mid, pull)];
    let classes = convert_path(&steps, 0).unwrap();
    assert_eq!(classes.len(), 1, "push and pull normalize to one class");
    assert_eq!(classes[0].digest, canonicalize(&vl).unwrap().digest);
}

#[test]
fn convert_path_tracks_an_edge_wrap_pair() {
    let vl = vlink(&s3(), 0);
    let up = first_move_of(&vl, |m| matches!(m.selector, Selector::EdgeUp { .. }));
    let (mid, down) = apply_move_with_inverse(&vl, &up).unwrap();
    let steps = vec![(vl.clone(), up), (mid, down)];
    let classes = convert_path(&steps, 0).unwrap();
    assert_eq!(classes.len(), 3);
    assert_eq!(classes[0].digest, classes[2].digest);
    assert_ne!(classes[0].digest, classes[1].digest);
    assert_eq!(classes[1].weight, classes[0].weight + 2);
}

#[test]
fn convert_path_rejects_mismatched_steps() {
    let vl = vlink(&s3(), 0);
    let up = first_move_of(&vl, |m| matches!(m.selector, Selector::EdgeUp { .. }));
    let steps = vec![(vl.clone(), up.clone()), (vl.clone(), up)];
    assert!(matches!(
        convert_path(&steps, 0),
        Err(Error::ValidationError(_))
    ));
}

#[test]
fn convert_path_rejects_empty_scripts() {
    assert!(matches!(convert_path(&[], 0), Err(Error::EmptyInput)));
}
