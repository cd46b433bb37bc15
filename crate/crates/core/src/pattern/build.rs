//! Constructors: patterns from coordinate vectors, vertex-link patterns,
//! and boundary-parallel doubles.

use super::tetgeom::tet_skeleton;
use super::{ArcEnd, FaceArc, FaceGeometry, Piece, TetPattern, TransversePattern};
use crate::error::{Error, Result};
use crate::normal::{self, quad_pairing, MatchingSystem, COORDS_PER_TET};
use crate::tricomplex::{edge_index, Triangulation, FACE_VERTICES};
use std::sync::Arc;

impl TransversePattern {
    /// Attaches one disc per boundary circle in every tet, replacing any
    /// existing pieces. Fails when the arcs do not close into circles.
    pub fn fill_discs(&mut self) -> Result<()> {
        let mut face_geoms = Vec::with_capacity(self.tri.face_count());
        for c in 0..self.tri.face_count() {
            face_geoms.push(FaceGeometry::build(
                &self.tri,
                c,
                &self.faces[c],
                &self.edge_points,
            )?);
        }
        for t in 0..self.tri.tet_count() {
            let sk = tet_skeleton(self, t, &face_geoms)?;
            self.tets[t] = TetPattern {
                pieces: (0..sk.circles.len())
                    .map(|i| Piece::Disc { circle: i })
                    .collect(),
            };
        }
        Ok(())
    }
}

/// Gives every surface component the label assignment whose leading bit is
/// `false`, the canonical representative among its relabelings.
fn orient_canonically(p: &mut TransversePattern) -> Result<()> {
    let analysis = p.analyze()?;
    let sys = super::orient::OrientSystem::build(p, &analysis)?;
    let bits = sys.assignment(&vec![false; sys.n_components]);
    sys.write_bits(p, &bits);
    Ok(())
}

/// Builds the transverse pattern carried by a matched, admissible
/// coordinate vector: one disc per elementary piece, arcs laid out along
/// each edge with the pieces around the tail first.
pub fn from_normal_vector(tri: &Arc<Triangulation>, vec: &[u32]) -> Result<TransversePattern> {
    let ms = MatchingSystem::for_triangulation(tri);
    ms.check_solution(vec)?;
    ms.check_admissible(vec)?;
    let weights = normal::edge_weights(tri, vec)?;
    let mut p = TransversePattern::empty(Arc::clone(tri));
    for (e, &w) in weights.iter().enumerate() {
        let w32 = u32::try_from(w).map_err(|_| {
            Error::ValidationError(format!("edge {e}: weight {w} too large for a pattern"))
        })?;
        p.edge_points[e] = w32;
        p.point_dirs[e] = vec![false; w32 as usize];
    }

    // The crossing at local index j from vertex v along edge (v, x) belongs
    // to the j-th sheet around v: t_v vertex triangles, then the quads
    // separating v from x.
    let global_point = |t: usize, v: u8, x: u8, j: u64| -> u32 {
        let e = edge_index(v, x);
        let w = weights[tri.edge_class(t, e)];
        let from_min = if v < x { j } else { w - 1 - j };
        let g = if tri.edge_sign(t, e) > 0 {
            from_min
        } else {
            w - 1 - from_min
        };
        g as u32
    };

    for c in 0..tri.face_count() {
        let (t, k) = tri.face_incidences(c)[0];
        let corners = FACE_VERTICES[k as usize];
        let mut arcs = Vec::new();
        for (lv, &v) in corners.iter().enumerate() {
            let x = corners[(lv + 1) % 3];
            let y = corners[(lv + 2) % 3];
            let tv = vec[t * COORDS_PER_TET + v as usize] as u64;
            let q = vec[t * COORDS_PER_TET + 4 + quad_pairing(v, k) as usize] as u64;
            for j in 0..tv + q {
                // The arc cutting off corner v crosses each adjacent edge at
                // its j-th point from v; the face-local edge label is the
                // opposite corner's.
                let end_on_vx = ArcEnd::new((lv + 2) as u8 % 3, global_point(t, v, x, j));
                let end_on_vy = ArcEnd::new((lv + 1) as u8 % 3, global_point(t, v, y, j));
                arcs.push(FaceArc::new(end_on_vx, end_on_vy));
            }
        }
        arcs.sort();
        p.faces[c].arcs = arcs;
    }

    p.fill_discs()?;
    orient_canonically(&mut p)?;
    p.validate()?;
    Ok(p)
}

/// The pattern of the link sphere of a vertex class.
pub fn vertex_link_pattern(tri: &Arc<Triangulation>, vclass: usize) -> Result<TransversePattern> {
    let vec = normal::vertex_link(tri, vclass)?;
    from_normal_vector(tri, &vec)
}

/// Two parallel copies of a pattern whose pieces are all discs, labeled
/// outward from the product region between them: the copy on an edge
/// point's tail side leans tailward and the head-side copy leans headward.
pub fn parallel_double(p: &TransversePattern) -> Result<TransversePattern> {
    if p.closed_total() != 0 || p.annulus_total() != 0 {
        return Err(Error::ValidationError(
            "only patterns made of discs can be doubled".into(),
        ));
    }
    p.validate()?;
    let tri = &p.tri;
    let mut q = TransversePattern::empty(Arc::clone(tri));
    for e in 0..tri.edge_count() {
        let w = p.edge_points[e] * 2;
        q.edge_points[e] = w;
        q.point_dirs[e] = (0..w).map(|i| i % 2 == 1).collect();
    }
    let mut face_geoms = Vec::with_capacity(tri.face_count());
    for c in 0..tri.face_count() {
        face_geoms.push(FaceGeometry::build(tri, c, &p.faces[c], &p.edge_points)?);
    }
    // An endpoint at point i splits into 2i (tail side) and 2i + 1 (head
    // side); each copy of an arc stays on one side of the original sheet.
    for (c, fg) in face_geoms.iter().enumerate() {
        let mut arcs = Vec::with_capacity(p.faces[c].arcs.len() * 2);
        for arc in &p.faces[c].arcs {
            let side_end = |end: &ArcEnd, positive: bool| -> ArcEnd {
                let e = fg.edge_class[end.local_edge as usize];
                let d = p.point_dirs[e][end.point as usize];
                let off = u32::from(d == positive);
                ArcEnd::new(end.local_edge, end.point * 2 + off)
            };
            for positive in [false, true] {
                arcs.push(FaceArc::new(
                    side_end(&arc.ends[0], positive),
                    side_end(&arc.ends[1], positive),
                ));
            }
        }
        arcs.sort();
        q.faces[c].arcs = arcs;
    }
    q.fill_discs()?;
    q.validate()?;
    Ok(q)
}
