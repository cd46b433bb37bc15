//! Combinatorial stars: iterated vertex-neighborhood regions around a
//! simplex, with certified-ball evidence for the region and its boundary
//! surface.

use super::{faces_of_edge, SimplexRef, Triangulation, FACE_VERTICES};
use crate::error::{Error, Result};
use crate::uf::UnionFind;
use std::collections::BTreeSet;

/// Combinatorial evidence that a region of tetrahedra is a 3-ball: the region
/// is connected with Euler characteristic 1 and its boundary is a single
/// 2-sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallEvidence {
    pub connected: bool,
    pub euler_characteristic: i64,
    pub boundary_faces: usize,
    pub boundary_connected: bool,
    pub boundary_euler_characteristic: i64,
    pub certified_ball: bool,
}

/// The tetrahedra within a fixed combinatorial radius of a center simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarRegion {
    pub center: SimplexRef,
    pub radius: u32,
    /// Sorted ascending.
    pub tets: Vec<usize>,
    pub evidence: BallEvidence,
}

impl StarRegion {
    pub fn contains(&self, tet: usize) -> bool {
        self.tets.binary_search(&tet).is_ok()
    }
}

impl Triangulation {
    /// Tetrahedra within radius `r` of the center: start from the carrier
    /// tets, then `r` times absorb every tet sharing a vertex with the
    /// current region (vertex sets grow with the region).
    pub(crate) fn star_tets(&self, center: SimplexRef, radius: u32) -> Result<Vec<usize>> {
        self.check_simplex(center)?;
        let mut region: BTreeSet<usize> = self.carrier_tets(center)?.into_iter().collect();
        let mut vset: BTreeSet<usize> = self.simplex_vertex_classes(center)?.into_iter().collect();
        for _ in 0..radius {
            if region.len() == self.tet_count() {
                break;
            }
            for t in 0..self.tet_count() {
                if self.vclass[t].iter().any(|c| vset.contains(c)) {
                    region.insert(t);
                }
            }
            vset = region
                .iter()
                .flat_map(|&t| self.vclass[t].iter().copied())
                .collect();
        }
        Ok(region.into_iter().collect())
    }

    /// Star region with ball evidence. Radius must be at least 1.
    pub fn star(&self, center: SimplexRef, radius: u32) -> Result<StarRegion> {
        if radius == 0 {
            return Err(Error::ValidationError(
                "star radius must be at least 1".into(),
            ));
        }
        let tets = self.star_tets(center, radius)?;
        let evidence = self.region_evidence(&tets);
        Ok(StarRegion {
            center,
            radius,
            tets,
            evidence,
        })
    }

    /// Ball evidence for an arbitrary set of tetrahedra (sorted, deduped
    /// internally). The boundary surface is assembled by walking face-edge
    /// sides around each boundary edge through the region's interior gluings.
    pub fn region_evidence(&self, tets: &[usize]) -> BallEvidence {
        let mut region: Vec<usize> = tets.to_vec();
        region.sort_unstable();
        region.dedup();
        let in_region = |t: usize| region.binary_search(&t).is_ok();

        // Region connectivity through interior gluings.
        let mut conn = UnionFind::new(region.len());
        let pos = |t: usize| region.binary_search(&t).unwrap();
        for (i, &t) in region.iter().enumerate() {
            for k in 0..4u8 {
                let g = self.gluing(t, k);
                if in_region(g.tet) {
                    conn.union(i, pos(g.tet));
                }
            }
        }
        let connected = if region.is_empty() {
            false
        } else {
            let r0 = conn.find(0);
            (1..region.len()).all(|i| conn.find(i) == r0)
        };

        // Euler characteristic over classes meeting the region.
        let mut vs = BTreeSet::new();
        let mut es = BTreeSet::new();
        let mut fs = BTreeSet::new();
        for &t in &region {
            for v in 0..4u8 {
                vs.insert(self.vertex_class(t, v));
            }
            for e in 0..6u8 {
                es.insert(self.edge_class(t, e));
            }
            for k in 0..4u8 {
                fs.insert(self.face_class(t, k));
            }
        }
        let chi = vs.len() as i64 - es.len() as i64 + fs.len() as i64 - region.len() as i64;

        // Boundary face incidences: faces whose partner tet lies outside.
        let mut binc: Vec<(usize, u8)> = Vec::new();
        for &t in &region {
            for k in 0..4u8 {
                if !in_region(self.gluing(t, k).tet) {
                    binc.push((t, k));
                }
            }
        }
        let bidx = |t: usize, k: u8| binc.binary_search(&(t, k)).unwrap();
        let boundary_faces = binc.len();

        // Pair boundary face-edge slots by rotating around each edge through
        // interior gluings; track the endpoint correspondence for corners.
        let n_slots = binc.len() * 3;
        let mut edge_uf = UnionFind::new(n_slots);
        let mut corner_uf = UnionFind::new(n_slots * 2);
        let mut face_conn = UnionFind::new(binc.len());
        let mut walk_ok = true;
        let cap = 24 * self.tet_count() + 8;
        // Slot per boundary incidence: edges of face k are the 3 pairs of its
        // vertices; slot j = edge omitting FACE_VERTICES[k][j].
        let slot_edge = |k: u8, j: usize| -> (u8, u8) {
            let fv = FACE_VERTICES[k as usize];
            let (a, b) = match j {
                0 => (fv[1], fv[2]),
                1 => (fv[0], fv[2]),
                _ => (fv[0], fv[1]),
            };
            (a, b)
        };
        // Within one boundary face with ascending vertices (x0, x1, x2), edge
        // slot j omits xj; identify the two edge-end slots meeting at each
        // vertex: x0 = lo end of slots 1 and 2, x1 = lo of 0 / hi of 2,
        // x2 = hi of 0 and 1.
        for i in 0..binc.len() {
            let key = |jj: usize, second: bool| (i * 3 + jj) * 2 + usize::from(second);
            corner_uf.union(key(1, false), key(2, false));
            corner_uf.union(key(0, false), key(2, true));
            corner_uf.union(key(0, true), key(1, true));
        }
        for (i, &(t0, k0)) in binc.iter().enumerate() {
            'slots: for j in 0..3usize {
                let (mut a, mut b) = slot_edge(k0, j);
                let (mut t, mut enter) = (t0, k0);
                let mut steps = 0;
                loop {
                    steps += 1;
                    if steps > cap {
                        walk_ok = false;
                        break 'slots;
                    }
                    let e = super::edge_index(a, b);
                    let (flo, fhi) = faces_of_edge(e);
                    let exit = if enter == flo { fhi } else { flo };
                    if !in_region(self.gluing(t, exit).tet) {
                        // Hit a boundary incidence: pair the slots.
                        let i2 = bidx(t, exit);
                        let fv2 = FACE_VERTICES[exit as usize];
                        let j2 = (0..3).position(|m| fv2[m] != a && fv2[m] != b).unwrap();
                        edge_uf.union(i * 3 + j, i2 * 3 + j2);
                        face_conn.union(i, i2);
                        // Corner slots: 2 per edge slot; `a` still carries the
                        // walk's starting lower endpoint, `b` the higher one.
                        let key = |ii: usize, jj: usize, second: bool| {
                            (ii * 3 + jj) * 2 + usize::from(second)
                        };
                        let (lo2, hi2) = slot_edge(exit, j2);
                        let a_second = a != lo2 && a == hi2;
                        debug_assert!(a == lo2 || a == hi2);
                        debug_assert!(b == lo2 || b == hi2);
                        corner_uf.union(key(i, j, false), key(i2, j2, a_second));
                        corner_uf.union(key(i, j, true), key(i2, j2, !a_second));
                        break;
                    }
                    let g = self.gluing(t, exit);
                    let (na, nb) = (g.vmap[a as usize], g.vmap[b as usize]);
                    t = g.tet;
                    enter = g.face;
                    a = na;
                    b = nb;
                }
            }
            if !walk_ok {
                break;
            }
        }

        let (boundary_edges, boundary_vertices, boundary_connected) = if walk_ok {
            let (_, ne) = edge_uf.number_classes();
            let (_, nv) = corner_uf.number_classes();
            let bc = if binc.is_empty() {
                false
            } else {
                let r0 = face_conn.find(0);
                (1..binc.len()).all(|i| face_conn.find(i) == r0)
            };
            (ne, nv, bc)
        } else {
            (0, 0, false)
        };
        let boundary_chi = boundary_vertices as i64 - boundary_edges as i64 + boundary_faces as i64;

        let certified_ball = walk_ok
            && connected
            && chi == 1
            && boundary_faces > 0
            && boundary_connected
            && boundary_chi == 2;

        BallEvidence {
            connected,
            euler_characteristic: chi,
            boundary_faces,
            boundary_connected,
            boundary_euler_characteristic: boundary_chi,
            certified_ball,
        }
    }
}
