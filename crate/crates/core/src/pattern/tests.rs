use super::*;
use crate::error::Error;
use crate::normal;
use crate::tricomplex::{edge_index, fixtures, FACE_VERTICES};

fn sphere_tri() -> Arc<Triangulation> {
    Arc::new(fixtures::boundary_four_simplex())
}

fn doubled_tri() -> Arc<Triangulation> {
    Arc::new(fixtures::doubled_tetrahedron())
}

#[test]
fn empty_pattern_is_valid() {
    let p = TransversePattern::empty(doubled_tri());
    p.validate().unwrap();
    assert_eq!(p.weight(), 0);
    assert_eq!(p.grade(), Grade::Normal);
    assert_eq!(p.euler_characteristic(), 0);
    let topo = surface_topology(&p).unwrap();
    assert_eq!(topo.component_count(), 0);
}

#[test]
fn vertex_links_of_boundary_four_simplex() {
    let tri = sphere_tri();
    for v in 0..tri.vertex_count() {
        let p = vertex_link_pattern(&tri, v).unwrap();
        p.validate().unwrap();
        assert_eq!(p.weight(), 4, "link of vertex {v}");
        assert_eq!(p.disc_total(), 4);
        assert_eq!(p.annulus_total(), 0);
        assert_eq!(p.grade(), Grade::Normal);
        let topo = surface_topology(&p).unwrap();
        assert_eq!(topo.component_count(), 1);
        assert_eq!(topo.components[0].euler_characteristic, 2);
        assert_eq!(topo.components[0].genus, Some(0));
        assert!(topo.components[0].orientable);
    }
}

#[test]
fn vertex_links_of_doubled_tetrahedron() {
    let tri = doubled_tri();
    for v in 0..tri.vertex_count() {
        let p = vertex_link_pattern(&tri, v).unwrap();
        p.validate().unwrap();
        assert_eq!(p.weight(), 3);
        assert_eq!(p.disc_total(), 2);
        let topo = surface_topology(&p).unwrap();
        assert_eq!(topo.component_count(), 1);
        assert_eq!(topo.components[0].genus, Some(0));
    }
}

#[test]
fn zero_vector_gives_empty_pattern() {
    let tri = doubled_tri();
    let vec = vec![0u32; tri.tet_count() * normal::COORDS_PER_TET];
    let p = from_normal_vector(&tri, &vec).unwrap();
    assert_eq!(p, TransversePattern::empty(Arc::clone(&tri)));
}

#[test]
fn quad_vector_piece_has_four_boundary_arcs() {
    let tri = doubled_tri();
    let mut vec = vec![0u32; tri.tet_count() * normal::COORDS_PER_TET];
    vec[4] = 1; // one quad in tet 0
    vec[normal::COORDS_PER_TET + 4] = 1; // matching quad in tet 1
    let p = from_normal_vector(&tri, &vec).unwrap();
    assert_eq!(p.disc_total(), 2);
    let analysis = p.analyze().unwrap();
    for t in 0..2 {
        assert_eq!(analysis.tets[t].circles.len(), 1);
        assert_eq!(analysis.tets[t].circles[0].ports.len(), 4);
    }
}

#[test]
fn weight_preserved_from_vectors() {
    let tri = doubled_tri();
    let ms = normal::MatchingSystem::for_triangulation(&tri);
    let fs = ms.fundamental_solutions(1, 1_000_000).unwrap();
    let mut converted = 0;
    for sol in &fs.solutions {
        if ms.check_admissible(sol).is_err() {
            continue;
        }
        let p = from_normal_vector(&tri, sol).unwrap();
        assert_eq!(p.weight(), normal::total_weight(&tri, sol).unwrap());
        converted += 1;
    }
    assert!(converted > 0);
}

#[test]
fn canonical_digests_distinguish_vertex_links() {
    let tri = sphere_tri();
    let mut digests = Vec::new();
    for v in 0..tri.vertex_count() {
        let p = vertex_link_pattern(&tri, v).unwrap();
        digests.push(canonicalize(&p).unwrap().digest);
    }
    digests.sort();
    digests.dedup();
    assert_eq!(digests.len(), 5);
}

#[test]
fn arc_order_does_not_change_digest() {
    let tri = sphere_tri();
    let p = vertex_link_pattern(&tri, 2).unwrap();
    let mut shuffled = p.clone();
    for fp in &mut shuffled.faces {
        fp.arcs.reverse();
    }
    let a = canonicalize(&p).unwrap();
    let b = canonicalize(&shuffled).unwrap();
    assert_eq!(a.digest, b.digest);
}

#[test]
fn canonicalize_is_idempotent() {
    let tri = doubled_tri();
    for v in 0..tri.vertex_count() {
        let p = vertex_link_pattern(&tri, v).unwrap();
        let c1 = canonicalize(&p).unwrap();
        let c2 = canonicalize(&c1.pattern).unwrap();
        assert_eq!(c1.digest, c2.digest);
        assert_eq!(c1.weight, c2.weight);
    }
}

#[test]
fn orientations_come_in_pairs_and_quotient_collapses_them() {
    let tri = doubled_tri();
    let p = vertex_link_pattern(&tri, 0).unwrap();
    let labelings = solve_orientations(&p).unwrap();
    assert_eq!(labelings.len(), 2, "one component, two sides");
    let d0 = canonical_class(&labelings[0], false).unwrap().digest;
    let d1 = canonical_class(&labelings[1], false).unwrap().digest;
    assert_ne!(d0, d1);
    let q0 = canonical_class(&labelings[0], true).unwrap().digest;
    let q1 = canonical_class(&labelings[1], true).unwrap().digest;
    assert_eq!(q0, q1);
}

#[test]
fn parallel_double_gives_two_spheres() {
    let tri = doubled_tri();
    let p = vertex_link_pattern(&tri, 1).unwrap();
    let d = parallel_double(&p).unwrap();
    d.validate().unwrap();
    assert_eq!(d.weight(), 6);
    let topo = surface_topology(&d).unwrap();
    assert_eq!(topo.component_count(), 2);
    for c in &topo.components {
        assert_eq!(c.euler_characteristic, 2);
        assert_eq!(c.genus, Some(0));
    }
}

#[test]
fn tubed_double_is_a_torus() {
    let tri = doubled_tri();
    let p = vertex_link_pattern(&tri, 0).unwrap();
    let mut t = parallel_double(&p).unwrap();
    for tp in &mut t.tets {
        assert_eq!(tp.pieces.len(), 2);
        tp.pieces = vec![Piece::Annulus { circles: [0, 1] }];
    }
    t.validate().unwrap();
    assert_eq!(t.grade(), Grade::AlmostNormal);
    assert_eq!(t.weight(), 6);
    let topo = surface_topology(&t).unwrap();
    assert_eq!(topo.component_count(), 1);
    assert_eq!(topo.components[0].euler_characteristic, 0);
    assert_eq!(topo.components[0].genus, Some(1));
    assert_eq!(topo.components[0].annuli, 2);
}

#[test]
fn closed_curve_bubble_is_transient_sphere() {
    let tri = doubled_tri();
    let mut p = TransversePattern::empty(Arc::clone(&tri));
    p.faces[0].closed.push(ClosedCurve {
        anchor: (0, 0),
        side_toward: false,
    });
    p.fill_discs().unwrap();
    p.validate().unwrap();
    assert_eq!(p.grade(), Grade::Transient);
    assert_eq!(p.disc_total(), 2);
    let topo = surface_topology(&p).unwrap();
    assert_eq!(topo.component_count(), 1);
    assert_eq!(topo.components[0].euler_characteristic, 2);
}

#[test]
fn enumerate_weight_zero_is_only_the_empty_surface() {
    for tri in [doubled_tri(), sphere_tri()] {
        let classes =
            enumerate_classes(&tri, 0, EnumMode::AlmostNormal, EnumLimits::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].weight, 0);
        assert_eq!(classes[0].components, 0);
    }
}

#[test]
fn enumerate_doubled_tet_contains_every_vertex_link() {
    let tri = doubled_tri();
    let classes = enumerate_classes(&tri, 3, EnumMode::Normal, EnumLimits::default()).unwrap();
    let digests: Vec<&str> = classes.iter().map(|c| c.digest.as_str()).collect();
    for v in 0..tri.vertex_count() {
        let link = vertex_link_pattern(&tri, v).unwrap();
        let d = canonicalize(&link).unwrap().digest;
        assert!(digests.contains(&d.as_str()), "missing link of vertex {v}");
    }
    for w in classes.windows(2) {
        assert!((w[0].weight, &w[0].digest) < (w[1].weight, &w[1].digest));
    }
}

#[test]
fn enumerate_counts_are_monotone_in_weight() {
    let tri = doubled_tri();
    let mut last = 0;
    for w in 0..=3 {
        let n = enumerate_classes(&tri, w, EnumMode::Normal, EnumLimits::default())
            .unwrap()
            .len();
        assert!(n >= last, "count dropped from {last} to {n} at W = {w}");
        last = n;
    }
}

/// Brute-force enumerator over the public API: every pairing of face
/// points (validation filters crossings), every disc/annulus piece choice,
/// every side-label mask.
pub(crate) fn oracle_enumerate(
    tri: &Arc<Triangulation>,
    max_weight: u32,
    almost: bool,
) -> Vec<String> {
    let n_edges = tri.edge_count();
    let mut digests = std::collections::BTreeSet::new();
    let mut weights = vec![0u32; n_edges];
    loop {
        if weights.iter().sum::<u32>() <= max_weight {
            oracle_expand(tri, &weights, almost, &mut digests);
        }
        let mut i = 0;
        loop {
            if i == n_edges {
                return digests.into_iter().collect();
            }
            weights[i] += 1;
            if weights[i] <= max_weight {
                break;
            }
            weights[i] = 0;
            i += 1;
        }
    }
}

type PointId = (u8, u32);
type Pairing = Vec<(PointId, PointId)>;

fn pairings(points: &[PointId]) -> Vec<Pairing> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let first = points[0];
    for j in 1..points.len() {
        let mut rest: Vec<PointId> = points[1..].to_vec();
        let partner = rest.remove(j - 1);
        for mut sub in pairings(&rest) {
            sub.push((first, partner));
            out.push(sub);
        }
    }
    out
}

fn oracle_expand(
    tri: &Arc<Triangulation>,
    weights: &[u32],
    almost: bool,
    digests: &mut std::collections::BTreeSet<String>,
) {
    // Per-face point lists in public terms.
    let mut face_points: Vec<Vec<PointId>> = Vec::new();
    for c in 0..tri.face_count() {
        let (t, k) = tri.face_incidences(c)[0];
        let a = FACE_VERTICES[k as usize];
        let mut pts = Vec::new();
        for l in 0..3u8 {
            let (u, v) = (a[(l as usize + 1) % 3], a[(l as usize + 2) % 3]);
            let e = tri.edge_class(t, edge_index(u, v));
            for p in 0..weights[e] {
                pts.push((l, p));
            }
        }
        if pts.len() % 2 == 1 {
            return;
        }
        face_points.push(pts);
    }
    let per_face: Vec<Vec<Pairing>> = face_points.iter().map(|pts| pairings(pts)).collect();

    let mut pick = vec![0usize; tri.face_count()];
    loop {
        let mut p = TransversePattern::empty(Arc::clone(tri));
        for (e, &w) in weights.iter().enumerate() {
            p.edge_points[e] = w;
            p.point_dirs[e] = vec![false; w as usize];
        }
        for c in 0..tri.face_count() {
            let arcs: Vec<FaceArc> = per_face[c][pick[c]]
                .iter()
                .map(|&((l1, p1), (l2, p2))| FaceArc::new(ArcEnd::new(l1, p1), ArcEnd::new(l2, p2)))
                .collect();
            let mut arcs = arcs;
            arcs.sort();
            p.faces[c].arcs = arcs;
        }
        if p.fill_discs().is_ok() {
            oracle_pieces_and_labels(tri, &p, almost, digests);
        }

        let mut i = 0;
        loop {
            if i == pick.len() {
                return;
            }
            pick[i] += 1;
            if pick[i] < per_face[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn oracle_pieces_and_labels(
    tri: &Arc<Triangulation>,
    filled: &TransversePattern,
    almost: bool,
    digests: &mut std::collections::BTreeSet<String>,
) {
    // Piece choices: all discs, or one annulus over any disc pair per tet.
    let mut options: Vec<Vec<Vec<Piece>>> = Vec::new();
    for t in 0..tri.tet_count() {
        let n = filled.tets[t].pieces.len();
        let mut opts = vec![filled.tets[t].pieces.clone()];
        if almost {
            for c1 in 0..n {
                for c2 in (c1 + 1)..n {
                    let mut pieces: Vec<Piece> = (0..n)
                        .filter(|&i| i != c1 && i != c2)
                        .map(|i| Piece::Disc { circle: i })
                        .collect();
                    pieces.push(Piece::Annulus { circles: [c1, c2] });
                    pieces.sort();
                    opts.push(pieces);
                }
            }
        }
        options.push(opts);
    }
    let total_points: u32 = filled.edge_points.iter().sum();

    let mut pick = vec![0usize; tri.tet_count()];
    loop {
        let mut q = filled.clone();
        for t in 0..tri.tet_count() {
            q.tets[t].pieces = options[t][pick[t]].clone();
        }
        // Every side-label mask; validation keeps the coherent ones.
        for mask in 0u64..(1u64 << total_points) {
            let mut bit = 0;
            for e in 0..tri.edge_count() {
                for i in 0..q.edge_points[e] as usize {
                    q.point_dirs[e][i] = mask >> bit & 1 == 1;
                    bit += 1;
                }
            }
            if q.validate().is_ok() {
                digests.insert(canonicalize(&q).unwrap().digest);
            }
        }

        let mut i = 0;
        loop {
            if i == pick.len() {
                return;
            }
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn enumeration_matches_brute_force_on_doubled_tetrahedron() {
    let tri = doubled_tri();
    for w in 0..=3 {
        let mut fast: Vec<String> =
            enumerate_classes(&tri, w, EnumMode::Normal, EnumLimits::default())
                .unwrap()
                .into_iter()
                .map(|c| c.digest)
                .collect();
        fast.sort();
        let slow = oracle_enumerate(&tri, w, false);
        assert_eq!(fast, slow, "crudely normal, W = {w}");
    }
    let mut fast: Vec<String> =
        enumerate_classes(&tri, 2, EnumMode::AlmostNormal, EnumLimits::default())
            .unwrap()
            .into_iter()
            .map(|c| c.digest)
            .collect();
    fast.sort();
    let slow = oracle_enumerate(&tri, 2, true);
    assert_eq!(fast, slow, "crudely almost normal, W = 2");
}

#[test]
fn enumeration_budget_is_enforced() {
    let tri = doubled_tri();
    let tight = EnumLimits { max_classes: 2 };
    let err = enumerate_classes(&tri, 3, EnumMode::Normal, tight).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { .. }));
}
