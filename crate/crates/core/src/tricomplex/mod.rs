//! Semi-simplicial tetrahedral complexes: construction from face-gluing
//! tables, identification classes of vertices/edges/faces, link validation,
//! combinatorial stars with ball evidence, and barycentric subdivision.

mod star;
mod subdivide;
#[cfg(test)]
mod tests;
mod validate;

pub use star::{BallEvidence, StarRegion};
pub use subdivide::Subdivision;
pub use validate::{EdgeLinkReport, ManifoldReport, VertexLinkReport};

use crate::error::{Error, Result};
use crate::uf::UnionFind;
use sha2::{Digest, Sha256};

/// Vertices of face `k` of a tetrahedron, in ascending order.
pub const FACE_VERTICES: [[u8; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Endpoints of local edge `e`, ascending. The local edge index of the pair
/// (a, b) is fixed by this table: (0,1)=0, (0,2)=1, (0,3)=2, (1,2)=3,
/// (1,3)=4, (2,3)=5.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Local edge index of the vertex pair {a, b}.
pub fn edge_index(a: u8, b: u8) -> u8 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("invalid vertex pair ({lo}, {hi})"),
    }
}

/// The two faces of a tetrahedron containing local edge `e`, ascending.
pub fn faces_of_edge(e: u8) -> (u8, u8) {
    let (a, b) = EDGE_VERTICES[e as usize];
    // Faces containing the edge are the two indices other than its endpoints.
    let mut fs = [0u8; 2];
    let mut n = 0;
    for k in 0..4u8 {
        if k != a && k != b {
            fs[n] = k;
            n += 1;
        }
    }
    (fs[0], fs[1])
}

/// Raw gluing record for one face: the target tet, the target face, and the
/// images in the target tet of this face's vertices taken in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlueSpec {
    pub tet: usize,
    pub face: u8,
    pub images: [u8; 3],
}

/// Resolved gluing: the affine extension of a face identification to a full
/// vertex permutation. `vmap[v]` is the target-tet vertex carrying local
/// vertex `v`; the face index itself maps to the target face index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub vmap: [u8; 4],
}

/// Reference to a simplex by dimension and identification-class index
/// (dimension 3 indexes tetrahedra directly).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexRef {
    pub dim: u8,
    pub index: usize,
}

impl SimplexRef {
    pub fn new(dim: u8, index: usize) -> Self {
        SimplexRef { dim, index }
    }
}

impl std::fmt::Display for SimplexRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.dim, self.index)
    }
}

/// A closed semi-simplicial tetrahedral complex with every face glued.
///
/// Identification classes are numbered by first occurrence when scanning
/// tetrahedra in index order and local indices in ascending order, so equal
/// gluing tables always produce identical numbering.
#[derive(Debug, Clone)]
pub struct Triangulation {
    tets: usize,
    glue: Vec<[Gluing; 4]>,
    vclass: Vec<[usize; 4]>,
    eclass: Vec<[usize; 6]>,
    fclass: Vec<[usize; 4]>,
    n_vertices: usize,
    n_edges: usize,
    n_faces: usize,
    v_inc: Vec<Vec<(usize, u8)>>,
    e_inc: Vec<Vec<(usize, u8)>>,
    f_inc: Vec<Vec<(usize, u8)>>,
    /// +1 where the local (min -> max) direction agrees with the class
    /// orientation (the representative incidence's min -> max direction).
    e_sign: Vec<[i8; 6]>,
    /// true when the two directions of the class are identified (the edge
    /// link cannot be a circle; surface patterns reject such edges).
    e_reversed: Vec<bool>,
    orientable: bool,
    hash: String,
}

fn directed_slot(tet: usize, a: u8, b: u8) -> usize {
    let e = edge_index(a, b) as usize;
    (tet * 6 + e) * 2 + usize::from(a > b)
}

impl Triangulation {
    /// Builds a triangulation from a closed gluing table. Every face must
    /// carry a record and the records must be mutually inverse.
    pub fn build(table: &[[Option<GlueSpec>; 4]]) -> Result<Triangulation> {
        if table.is_empty() {
            return Err(Error::EmptyInput);
        }
        let tets = table.len();

        // Resolve records into total vertex permutations, validating ranges.
        let mut glue: Vec<[Gluing; 4]> = Vec::with_capacity(tets);
        for (i, row) in table.iter().enumerate() {
            let mut resolved = [Gluing {
                tet: 0,
                face: 0,
                vmap: [0; 4],
            }; 4];
            for (k, entry) in row.iter().enumerate() {
                let spec = entry.ok_or(Error::UnpairedFace { tet: i, face: k })?;
                if spec.tet >= tets {
                    return Err(Error::ValidationError(format!(
                        "tet {i} face {k}: target tet {} out of range",
                        spec.tet
                    )));
                }
                if spec.face > 3 {
                    return Err(Error::ValidationError(format!(
                        "tet {i} face {k}: target face {} out of range",
                        spec.face
                    )));
                }
                let mut seen = [false; 4];
                seen[spec.face as usize] = true;
                for &im in &spec.images {
                    if im > 3 || seen[im as usize] {
                        return Err(Error::ValidationError(format!(
                            "tet {i} face {k}: images {:?} do not complement target face {}",
                            spec.images, spec.face
                        )));
                    }
                    seen[im as usize] = true;
                }
                let mut vmap = [0u8; 4];
                vmap[k] = spec.face;
                for (m, &v) in FACE_VERTICES[k].iter().enumerate() {
                    vmap[v as usize] = spec.images[m];
                }
                resolved[k] = Gluing {
                    tet: spec.tet,
                    face: spec.face,
                    vmap,
                };
            }
            glue.push(resolved);
        }

        // Involutivity: the reverse record must point back with the inverse map.
        for (i, row) in glue.iter().enumerate() {
            for (k, &g) in row.iter().enumerate() {
                let h = glue[g.tet][g.face as usize];
                let mut ok = h.tet == i && h.face as usize == k;
                if ok {
                    for v in 0..4 {
                        if h.vmap[g.vmap[v] as usize] != v as u8 {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    return Err(Error::NonInvolutiveGluing { tet: i, face: k });
                }
            }
        }

        // Identification classes via union-find over local slots.
        let mut vuf = UnionFind::new(tets * 4);
        let mut fuf = UnionFind::new(tets * 4);
        let mut duf = UnionFind::new(tets * 12); // directed edges
        for (i, row) in glue.iter().enumerate() {
            for (k, &g) in row.iter().enumerate() {
                fuf.union(i * 4 + k, g.tet * 4 + g.face as usize);
                for &v in &FACE_VERTICES[k] {
                    vuf.union(i * 4 + v as usize, g.tet * 4 + g.vmap[v as usize] as usize);
                }
                for &(a, b) in &EDGE_VERTICES {
                    if a as usize == k || b as usize == k {
                        continue;
                    }
                    let (ia, ib) = (g.vmap[a as usize], g.vmap[b as usize]);
                    duf.union(directed_slot(i, a, b), directed_slot(g.tet, ia, ib));
                    duf.union(directed_slot(i, b, a), directed_slot(g.tet, ib, ia));
                }
            }
        }

        let (vids, n_vertices) = vuf.number_classes();
        let (fids, n_faces) = fuf.number_classes();

        // Undirected edge classes from directed ones.
        let mut euf = UnionFind::new(tets * 6);
        {
            let mut dir_root = duf.clone();
            let mut rep_of_droot: Vec<Option<usize>> = vec![None; tets * 12];
            for slot in 0..tets * 12 {
                let r = dir_root.find(slot);
                if rep_of_droot[r].is_none() {
                    rep_of_droot[r] = Some(slot);
                }
            }
            // Two undirected slots are identified iff some directed versions are.
            for i in 0..tets {
                for e in 0..6usize {
                    let fwd = (i * 6 + e) * 2;
                    let r = dir_root.find(fwd);
                    let rep = rep_of_droot[r].unwrap();
                    euf.union(i * 6 + e, rep / 2);
                    let bwd = fwd + 1;
                    let r = dir_root.find(bwd);
                    let rep = rep_of_droot[r].unwrap();
                    euf.union(i * 6 + e, rep / 2);
                }
            }
        }
        let (eids, n_edges) = euf.number_classes();

        let vclass: Vec<[usize; 4]> = (0..tets)
            .map(|i| std::array::from_fn(|v| vids[i * 4 + v]))
            .collect();
        let eclass: Vec<[usize; 6]> = (0..tets)
            .map(|i| std::array::from_fn(|e| eids[i * 6 + e]))
            .collect();
        let fclass: Vec<[usize; 4]> = (0..tets)
            .map(|i| std::array::from_fn(|k| fids[i * 4 + k]))
            .collect();

        let mut v_inc = vec![Vec::new(); n_vertices];
        let mut e_inc = vec![Vec::new(); n_edges];
        let mut f_inc = vec![Vec::new(); n_faces];
        for i in 0..tets {
            for v in 0..4 {
                v_inc[vclass[i][v]].push((i, v as u8));
            }
            for e in 0..6 {
                e_inc[eclass[i][e]].push((i, e as u8));
            }
            for k in 0..4 {
                f_inc[fclass[i][k]].push((i, k as u8));
            }
        }

        // Edge orientation signs relative to the representative incidence.
        let mut e_sign = vec![[1i8; 6]; tets];
        let mut e_reversed = vec![false; n_edges];
        {
            let mut d = duf;
            for c in 0..n_edges {
                let &(rt, re) = &e_inc[c][0];
                let (a, b) = EDGE_VERTICES[re as usize];
                let pos_root = d.find(directed_slot(rt, a, b));
                let neg_root = d.find(directed_slot(rt, b, a));
                if pos_root == neg_root {
                    e_reversed[c] = true;
                }
                for &(t, e) in &e_inc[c] {
                    let (x, y) = EDGE_VERTICES[e as usize];
                    let r = d.find(directed_slot(t, x, y));
                    e_sign[t][e as usize] = if r == pos_root { 1 } else { -1 };
                }
            }
        }

        // Orientability: tets admit consistent signs when every gluing's
        // vertex map is odd exactly between equal signs.
        let orientable = {
            let mut puf = crate::uf::ParityUnionFind::new(tets);
            let mut ok = true;
            'outer: for (t, row) in glue.iter().enumerate() {
                for g in row {
                    let mut inversions = 0;
                    for i in 0..4 {
                        for j in (i + 1)..4 {
                            if g.vmap[i] > g.vmap[j] {
                                inversions += 1;
                            }
                        }
                    }
                    // Even maps force opposite signs (parity true).
                    if !puf.union(t, g.tet, inversions % 2 == 0) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            ok
        };

        let hash = hash_table(&glue);

        Ok(Triangulation {
            tets,
            glue,
            vclass,
            eclass,
            fclass,
            n_vertices,
            n_edges,
            n_faces,
            v_inc,
            e_inc,
            f_inc,
            e_sign,
            e_reversed,
            orientable,
            hash,
        })
    }

    /// Whether the underlying manifold is orientable.
    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn tet_count(&self) -> usize {
        self.tets
    }

    /// Class counts (V, E, F, T).
    pub fn f_vector(&self) -> (usize, usize, usize, usize) {
        (self.n_vertices, self.n_edges, self.n_faces, self.tets)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges as i64 + self.n_faces as i64 - self.tets as i64
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }
    pub fn edge_count(&self) -> usize {
        self.n_edges
    }
    pub fn face_count(&self) -> usize {
        self.n_faces
    }

    pub fn vertex_class(&self, tet: usize, v: u8) -> usize {
        self.vclass[tet][v as usize]
    }
    pub fn edge_class(&self, tet: usize, e: u8) -> usize {
        self.eclass[tet][e as usize]
    }
    pub fn face_class(&self, tet: usize, k: u8) -> usize {
        self.fclass[tet][k as usize]
    }

    pub fn vertex_incidences(&self, class: usize) -> &[(usize, u8)] {
        &self.v_inc[class]
    }
    pub fn edge_incidences(&self, class: usize) -> &[(usize, u8)] {
        &self.e_inc[class]
    }
    pub fn face_incidences(&self, class: usize) -> &[(usize, u8)] {
        &self.f_inc[class]
    }

    pub fn gluing(&self, tet: usize, face: u8) -> &Gluing {
        &self.glue[tet][face as usize]
    }

    /// +1 where local (min -> max) agrees with the class orientation.
    pub fn edge_sign(&self, tet: usize, e: u8) -> i8 {
        self.e_sign[tet][e as usize]
    }

    pub fn edge_reversed(&self, class: usize) -> bool {
        self.e_reversed[class]
    }

    /// Vertex classes of the endpoints of an edge class, in class-orientation
    /// order (tail first).
    pub fn edge_endpoints(&self, class: usize) -> (usize, usize) {
        let (t, e) = self.e_inc[class][0];
        let (a, b) = EDGE_VERTICES[e as usize];
        (self.vclass[t][a as usize], self.vclass[t][b as usize])
    }

    /// sha256 of the gluing table; rows are keyed by explicit indices so the
    /// digest is invariant under permutations of the serialized row order.
    pub fn canonical_hash(&self) -> &str {
        &self.hash
    }

    /// The raw table this triangulation was built from.
    pub fn table(&self) -> Vec<[Option<GlueSpec>; 4]> {
        self.glue
            .iter()
            .map(|row| {
                std::array::from_fn(|k| {
                    let g = row[k];
                    let images = std::array::from_fn(|m| g.vmap[FACE_VERTICES[k][m] as usize]);
                    Some(GlueSpec {
                        tet: g.tet,
                        face: g.face,
                        images,
                    })
                })
            })
            .collect()
    }

    /// Checks that the simplex reference is in range.
    pub fn check_simplex(&self, s: SimplexRef) -> Result<()> {
        let count = match s.dim {
            0 => self.n_vertices,
            1 => self.n_edges,
            2 => self.n_faces,
            3 => self.tets,
            _ => 0,
        };
        if s.index < count {
            Ok(())
        } else {
            Err(Error::InvalidSimplex {
                dim: s.dim,
                index: s.index,
            })
        }
    }

    /// Tetrahedra whose closure carries the simplex (the incidence tets).
    pub fn carrier_tets(&self, s: SimplexRef) -> Result<Vec<usize>> {
        self.check_simplex(s)?;
        let mut out: Vec<usize> = match s.dim {
            0 => self.v_inc[s.index].iter().map(|&(t, _)| t).collect(),
            1 => self.e_inc[s.index].iter().map(|&(t, _)| t).collect(),
            2 => self.f_inc[s.index].iter().map(|&(t, _)| t).collect(),
            3 => vec![s.index],
            _ => unreachable!(),
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Vertex classes of the simplex's closure.
    pub fn simplex_vertex_classes(&self, s: SimplexRef) -> Result<Vec<usize>> {
        self.check_simplex(s)?;
        let mut out = match s.dim {
            0 => vec![s.index],
            1 => {
                let (t, e) = self.e_inc[s.index][0];
                let (a, b) = EDGE_VERTICES[e as usize];
                vec![self.vclass[t][a as usize], self.vclass[t][b as usize]]
            }
            2 => {
                let (t, k) = self.f_inc[s.index][0];
                FACE_VERTICES[k as usize]
                    .iter()
                    .map(|&v| self.vclass[t][v as usize])
                    .collect()
            }
            3 => self.vclass[s.index].to_vec(),
            _ => unreachable!(),
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// The rotation sequence of edge incidences around an edge class, starting
    /// from the representative incidence. Valid only when the edge link is a
    /// circle; entries are (tet, local edge, entry face, exit face): the walk
    /// enters the tet through `entry face` and leaves through `exit face`.
    pub fn edge_fan(&self, class: usize) -> Result<Vec<FanEntry>> {
        if class >= self.n_edges {
            return Err(Error::InvalidSimplex {
                dim: 1,
                index: class,
            });
        }
        if self.e_reversed[class] {
            return Err(Error::ValidationError(format!(
                "edge class {class} has identified reversals; no coherent fan"
            )));
        }
        let (t0, e0) = self.e_inc[class][0];
        let (f_lo, _) = faces_of_edge(e0);
        let expected = self.e_inc[class].len();
        let mut fan = Vec::with_capacity(expected);
        // Walk: inside (t, e), enter through face `enter`, exit through the
        // other face containing e, then jump through the exit gluing.
        let (mut t, mut e, mut enter) = (t0, e0, f_lo);
        loop {
            let (a, b) = faces_of_edge(e);
            let exit = if enter == a { b } else { a };
            fan.push(FanEntry {
                tet: t,
                edge: e,
                enter_face: enter,
                exit_face: exit,
            });
            if fan.len() > expected {
                return Err(Error::ValidationError(format!(
                    "edge class {class}: rotation does not close up (link is not a circle)"
                )));
            }
            let g = &self.glue[t][exit as usize];
            let (x, y) = EDGE_VERTICES[e as usize];
            let ne = edge_index(g.vmap[x as usize], g.vmap[y as usize]);
            let (nt, nenter) = (g.tet, g.face);
            if nt == t0 && ne == e0 && nenter == f_lo {
                break;
            }
            t = nt;
            e = ne;
            enter = nenter;
        }
        if fan.len() != expected {
            return Err(Error::ValidationError(format!(
                "edge class {class}: rotation covers {} of {} incidences",
                fan.len(),
                expected
            )));
        }
        Ok(fan)
    }
}

/// One step of the rotation around an edge class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanEntry {
    pub tet: usize,
    pub edge: u8,
    pub enter_face: u8,
    pub exit_face: u8,
}

fn hash_table(glue: &[[Gluing; 4]]) -> String {
    let mut h = Sha256::new();
    h.update(b"tri\0");
    h.update((glue.len() as u64).to_le_bytes());
    for row in glue {
        for (k, g) in row.iter().enumerate() {
            h.update((g.tet as u64).to_le_bytes());
            h.update([g.face]);
            for &v in &FACE_VERTICES[k] {
                h.update([g.vmap[v as usize]]);
            }
        }
    }
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Standard fixtures used throughout the test suites.
pub mod fixtures {
    use super::{GlueSpec, Triangulation};

    /// The boundary of the 4-simplex: five tetrahedra, all pairwise glued.
    /// Tet i is the 4-subset of {0..4} omitting i, with vertices labeled by
    /// ascending global value; gluings are induced by the common 3-subsets.
    pub fn boundary_four_simplex() -> Triangulation {
        // Global vertex list of tet i: sorted {0..4} \ {i}.
        let verts = |i: usize| -> Vec<usize> { (0..5).filter(|&v| v != i).collect() };
        let mut table = Vec::new();
        for i in 0..5usize {
            let vi = verts(i);
            let mut row: [Option<GlueSpec>; 4] = [None; 4];
            for k in 0..4usize {
                // Face k of tet i omits local vertex k, i.e. global vertex vi[k].
                // It is shared with tet j = vi[k] (the tet omitting that vertex).
                let j = vi[k];
                let vj = verts(j);
                let mut images = [0u8; 3];
                let mut m = 0;
                for (local, &gv) in vi.iter().enumerate() {
                    if local == k {
                        continue;
                    }
                    images[m] = vj.iter().position(|&w| w == gv).unwrap() as u8;
                    m += 1;
                }
                let face = vj.iter().position(|&w| w == i).unwrap() as u8;
                row[k] = Some(GlueSpec {
                    tet: j,
                    face,
                    images,
                });
            }
            table.push(row);
        }
        Triangulation::build(&table).expect("boundary of the 4-simplex is a valid closed complex")
    }

    /// Two tetrahedra glued to each other along all four faces by the
    /// identity on vertices (the doubled tetrahedron).
    pub fn doubled_tetrahedron() -> Triangulation {
        let row = |other: usize| -> [Option<GlueSpec>; 4] {
            std::array::from_fn(|k| {
                Some(GlueSpec {
                    tet: other,
                    face: k as u8,
                    images: super::FACE_VERTICES[k],
                })
            })
        };
        Triangulation::build(&[row(1), row(0)]).expect("doubled tetrahedron is valid")
    }

    /// Glues face 0 of each tet to itself by the identity; builds fine but
    /// fails the manifold link checks (the self-gluing folds edge links).
    /// The remaining faces are cross-paired to keep the table closed.
    pub fn face_self_glued() -> Triangulation {
        let mut t0: [Option<GlueSpec>; 4] = [None; 4];
        t0[0] = Some(GlueSpec {
            tet: 0,
            face: 0,
            images: [1, 2, 3],
        });
        for (k, slot) in t0.iter_mut().enumerate().skip(1) {
            *slot = Some(GlueSpec {
                tet: 1,
                face: k as u8,
                images: super::FACE_VERTICES[k],
            });
        }
        let mut t1: [Option<GlueSpec>; 4] = [None; 4];
        t1[0] = Some(GlueSpec {
            tet: 1,
            face: 0,
            images: [1, 2, 3],
        });
        for (k, slot) in t1.iter_mut().enumerate().skip(1) {
            *slot = Some(GlueSpec {
                tet: 0,
                face: k as u8,
                images: super::FACE_VERTICES[k],
            });
        }
        Triangulation::build(&[t0, t1]).expect("self-glued table is involutive")
    }
}
