//! Manifold checks: every vertex link must be a 2-sphere and every edge link
//! a single circle. Links are never built as meshes; both checks count
//! identification classes of link cells directly.

use super::{directed_slot, faces_of_edge, Triangulation, EDGE_VERTICES, FACE_VERTICES};
use crate::uf::UnionFind;

/// Evidence for one vertex class: the link's cell counts, connectivity, and
/// Euler characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLinkReport {
    pub vertex: usize,
    pub link_vertices: usize,
    pub link_edges: usize,
    pub link_faces: usize,
    pub connected: bool,
    pub euler_characteristic: i64,
    pub is_sphere: bool,
}

/// Evidence for one edge class: whether the rotation of tetrahedron corners
/// around the edge closes into a single circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLinkReport {
    pub edge: usize,
    pub incidences: usize,
    /// The two directions of the edge are identified.
    pub reversed: bool,
    /// Some side of the edge is glued to itself (a mirror fold).
    pub folded: bool,
    /// All sides lie in one rotation orbit.
    pub single_cycle: bool,
    pub is_circle: bool,
}

/// Full link validation over a built triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldReport {
    pub pass: bool,
    pub f_vector: (usize, usize, usize, usize),
    pub euler_characteristic: i64,
    pub vertex_links: Vec<VertexLinkReport>,
    pub edge_links: Vec<EdgeLinkReport>,
}

impl Triangulation {
    /// Checks all vertex and edge links. Passing means the complex is a
    /// closed 3-manifold.
    pub fn validate_manifold(&self) -> ManifoldReport {
        let vertex_links = self.check_vertex_links();
        let edge_links = self.check_edge_links();
        let pass =
            vertex_links.iter().all(|r| r.is_sphere) && edge_links.iter().all(|r| r.is_circle);
        ManifoldReport {
            pass,
            f_vector: self.f_vector(),
            euler_characteristic: self.euler_characteristic(),
            vertex_links,
            edge_links,
        }
    }

    fn check_vertex_links(&self) -> Vec<VertexLinkReport> {
        let tets = self.tets;

        // Corners (tet, v) are the link faces; glue them across face maps.
        let mut corner_uf = UnionFind::new(tets * 4);
        // Link edges are slots (tet, v, k) with v in face k; the slot is the
        // arc where the link triangle at v meets face k.
        let slot = |t: usize, v: u8, k: u8| -> usize {
            // 3 face slots per corner: faces != v, in ascending order.
            let pos = (0..4u8).filter(|&f| f != v).position(|f| f == k).unwrap();
            (t * 4 + v as usize) * 3 + pos
        };
        let mut ledge_uf = UnionFind::new(tets * 12);
        // Link vertices are directed edge germs (tet, v -> w).
        let mut dir_uf = UnionFind::new(tets * 12);
        for t in 0..tets {
            for k in 0..4u8 {
                let g = self.glue[t][k as usize];
                for &v in &FACE_VERTICES[k as usize] {
                    let iv = g.vmap[v as usize];
                    corner_uf.union(t * 4 + v as usize, g.tet * 4 + iv as usize);
                    ledge_uf.union(slot(t, v, k), slot(g.tet, iv, g.face));
                }
                for &(a, b) in &EDGE_VERTICES {
                    if a == k || b == k {
                        continue;
                    }
                    let (ia, ib) = (g.vmap[a as usize], g.vmap[b as usize]);
                    dir_uf.union(directed_slot(t, a, b), directed_slot(g.tet, ia, ib));
                    dir_uf.union(directed_slot(t, b, a), directed_slot(g.tet, ib, ia));
                }
            }
        }

        let n = self.n_vertices;
        let mut faces = vec![0usize; n];
        let mut comps: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
        for t in 0..tets {
            for v in 0..4u8 {
                let c = self.vclass[t][v as usize];
                faces[c] += 1;
                comps[c].insert(corner_uf.find(t * 4 + v as usize));
            }
        }
        let mut ledges: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
        for t in 0..tets {
            for v in 0..4u8 {
                let c = self.vclass[t][v as usize];
                for k in 0..4u8 {
                    if k != v {
                        ledges[c].insert(ledge_uf.find(slot(t, v, k)));
                    }
                }
            }
        }
        let mut lverts: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
        for t in 0..tets {
            for &(a, b) in &EDGE_VERTICES {
                lverts[self.vclass[t][a as usize]].insert(dir_uf.find(directed_slot(t, a, b)));
                lverts[self.vclass[t][b as usize]].insert(dir_uf.find(directed_slot(t, b, a)));
            }
        }

        (0..n)
            .map(|c| {
                let (lv, le, lf) = (lverts[c].len(), ledges[c].len(), faces[c]);
                let chi = lv as i64 - le as i64 + lf as i64;
                let connected = comps[c].len() == 1;
                VertexLinkReport {
                    vertex: c,
                    link_vertices: lv,
                    link_edges: le,
                    link_faces: lf,
                    connected,
                    euler_characteristic: chi,
                    is_sphere: connected && chi == 2,
                }
            })
            .collect()
    }

    fn check_edge_links(&self) -> Vec<EdgeLinkReport> {
        let tets = self.tets;
        // A side is (tet, edge, containing face), encoded by the face's rank
        // among the two faces containing the edge.
        let side_id = |t: usize, e: u8, k: u8| -> usize {
            let (lo, hi) = faces_of_edge(e);
            debug_assert!(k == lo || k == hi);
            (t * 6 + e as usize) * 2 + usize::from(k == hi)
        };
        let g_image = |t: usize, e: u8, k: u8| -> (usize, u8, u8) {
            let g = &self.glue[t][k as usize];
            let (a, b) = EDGE_VERTICES[e as usize];
            let ne = super::edge_index(g.vmap[a as usize], g.vmap[b as usize]);
            (g.tet, ne, g.face)
        };

        let mut orbit = UnionFind::new(tets * 12);
        let mut fixed = vec![false; tets * 12];
        for t in 0..tets {
            for e in 0..6u8 {
                let (lo, hi) = faces_of_edge(e);
                for k in [lo, hi] {
                    let s = side_id(t, e, k);
                    let (nt, ne, nk) = g_image(t, e, k);
                    let s2 = side_id(nt, ne, nk);
                    if s == s2 {
                        fixed[s] = true;
                    }
                    orbit.union(s, s2);
                }
                // The within-tet flip joining the two sides of the incidence.
                orbit.union(side_id(t, e, lo), side_id(t, e, hi));
            }
        }

        (0..self.n_edges)
            .map(|c| {
                let inc = &self.e_inc[c];
                let mut roots = std::collections::BTreeSet::new();
                let mut folded = false;
                for &(t, e) in inc {
                    let (lo, hi) = faces_of_edge(e);
                    for k in [lo, hi] {
                        let s = side_id(t, e, k);
                        roots.insert(orbit.find(s));
                        folded |= fixed[s];
                    }
                }
                let single_cycle = roots.len() == 1;
                let is_circle = single_cycle && !folded;
                EdgeLinkReport {
                    edge: c,
                    incidences: inc.len(),
                    reversed: self.e_reversed[c],
                    folded,
                    single_cycle,
                    is_circle,
                }
            })
            .collect()
    }
}
