//! Barycentric subdivision. Each tetrahedron splits into 24 flag tets, one
//! per ordering (p0, p1, p2, p3) of its vertices; the flag tet has vertices
//! (v_p0, midpoint of {p0,p1}, center of the face {p0,p1,p2}, tet center).

use super::{edge_index, GlueSpec, SimplexRef, Triangulation};
use crate::error::{Error, Result};

/// A subdivided triangulation together with carrier maps back to the
/// original: every new tet lies in an old tet, and every new vertex class is
/// the barycenter of an old simplex.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub tri: Triangulation,
    /// new tet -> old tet
    pub tet_carrier: Vec<usize>,
    /// new vertex class -> old simplex whose barycenter it is
    pub vertex_carrier: Vec<SimplexRef>,
}

fn perms4() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn rank_of(perms: &[[u8; 4]], p: [u8; 4]) -> usize {
    perms.iter().position(|&q| q == p).unwrap()
}

impl Triangulation {
    /// One round of barycentric subdivision.
    pub fn subdivide(&self) -> Result<Subdivision> {
        let perms = perms4();
        let t_old = self.tet_count();
        let mut table: Vec<[Option<GlueSpec>; 4]> = Vec::with_capacity(t_old * 24);
        let mut tet_carrier = Vec::with_capacity(t_old * 24);

        for sigma in 0..t_old {
            for p in &perms {
                let &[p0, p1, p2, p3] = p;
                let mut row: [Option<GlueSpec>; 4] = [None; 4];
                // Internal walls: swapping two consecutive flag entries gives
                // the neighbor across the face opposite the changed vertex.
                row[0] = Some(GlueSpec {
                    tet: sigma * 24 + rank_of(&perms, [p1, p0, p2, p3]),
                    face: 0,
                    images: [1, 2, 3],
                });
                row[1] = Some(GlueSpec {
                    tet: sigma * 24 + rank_of(&perms, [p0, p2, p1, p3]),
                    face: 1,
                    images: [0, 2, 3],
                });
                row[2] = Some(GlueSpec {
                    tet: sigma * 24 + rank_of(&perms, [p0, p1, p3, p2]),
                    face: 2,
                    images: [0, 1, 3],
                });
                // The outer face lies in the old face omitting p3 (index p3);
                // push the flag through the old gluing.
                let g = self.gluing(sigma, p3);
                let q = [
                    g.vmap[p0 as usize],
                    g.vmap[p1 as usize],
                    g.vmap[p2 as usize],
                    g.face,
                ];
                row[3] = Some(GlueSpec {
                    tet: g.tet * 24 + rank_of(&perms, q),
                    face: 3,
                    images: [0, 1, 2],
                });
                table.push(row);
                tet_carrier.push(sigma);
            }
        }

        let tri = Triangulation::build(&table)?;

        // Carrier of each new vertex slot, then checked per class.
        let mut vertex_carrier = vec![SimplexRef::new(255, usize::MAX); tri.vertex_count()];
        for sigma in 0..t_old {
            for (r, p) in perms.iter().enumerate() {
                let t_new = sigma * 24 + r;
                let &[p0, p1, _p2, p3] = p;
                let carriers = [
                    SimplexRef::new(0, self.vertex_class(sigma, p0)),
                    SimplexRef::new(1, self.edge_class(sigma, edge_index(p0, p1))),
                    SimplexRef::new(2, self.face_class(sigma, p3)),
                    SimplexRef::new(3, sigma),
                ];
                for (v, &carrier) in carriers.iter().enumerate() {
                    let c = tri.vertex_class(t_new, v as u8);
                    let prev = vertex_carrier[c];
                    if prev.dim == 255 {
                        vertex_carrier[c] = carrier;
                    } else if prev != carrier {
                        return Err(Error::ValidationError(format!(
                            "subdivision vertex class {c} has conflicting carriers {prev} and {carrier}"
                        )));
                    }
                }
            }
        }
        if vertex_carrier.iter().any(|s| s.dim == 255) {
            return Err(Error::ValidationError(
                "subdivision produced an uncarried vertex class".into(),
            ));
        }

        Ok(Subdivision {
            tri,
            tet_carrier,
            vertex_carrier,
        })
    }

    /// `depth` rounds of subdivision with the tet carriers composed down to
    /// this triangulation. Depth 0 yields the identity carrier.
    pub fn subdivide_depth(&self, depth: u32) -> Result<Subdivision> {
        let mut current = Subdivision {
            tri: self.clone(),
            tet_carrier: (0..self.tet_count()).collect(),
            vertex_carrier: (0..self.vertex_count())
                .map(|c| SimplexRef::new(0, c))
                .collect(),
        };
        for _ in 0..depth {
            let next = current.tri.subdivide()?;
            let tet_carrier: Vec<usize> = next
                .tet_carrier
                .iter()
                .map(|&mid| current.tet_carrier[mid])
                .collect();
            // Vertex carriers do not compose across stages (a new vertex sits
            // on a mid-stage simplex, not an original one); keep the deepest
            // stage's map and the composed tet map, which is what carrier
            // transport needs.
            current = Subdivision {
                tri: next.tri,
                tet_carrier,
                vertex_carrier: next.vertex_carrier,
            };
        }
        Ok(current)
    }
}
