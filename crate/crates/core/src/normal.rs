//! Integer normal-coordinate algebra. Each tetrahedron carries seven
//! coordinates: four triangle types t0..t3 (tv cuts off vertex v) and three
//! quad types q0 = {01|23}, q1 = {02|13}, q2 = {03|12}. Face gluings impose
//! three arc-matching equations per face class; admissible solutions have at
//! most one nonzero quad type per tetrahedron.

use crate::error::{Error, Result};
use crate::tricomplex::{Triangulation, EDGE_VERTICES, FACE_VERTICES};

/// Coordinates per tetrahedron.
pub const COORDS_PER_TET: usize = 7;

/// The quad type whose partition puts `v` and `k` on the same side: this is
/// the quad producing an arc that cuts off `v` on face `k`.
pub fn quad_pairing(v: u8, k: u8) -> u8 {
    debug_assert!(v != k && v < 4 && k < 4);
    match crate::tricomplex::edge_index(v, k) {
        0 | 5 => 0, // {0,1} and {2,3} pair under q0
        1 | 4 => 1,
        _ => 2,
    }
}

/// Whether quad type `j` separates vertices `a` and `b` (and therefore
/// crosses the edge between them).
pub fn quad_separates(j: u8, a: u8, b: u8) -> bool {
    quad_pairing(a, b) != j
}

/// Number of arcs cutting off vertex `v` on face `k` of tet `tet`, for the
/// block of coordinates `local` of that tet.
fn arc_count_local(local: &[u32], v: u8, k: u8) -> u64 {
    local[v as usize] as u64 + local[4 + quad_pairing(v, k) as usize] as u64
}

/// Number of arcs of the vector `vec` cutting off `v` on face `k` of `tet`.
pub fn arc_count(vec: &[u32], tet: usize, v: u8, k: u8) -> u64 {
    arc_count_local(&vec[tet * COORDS_PER_TET..(tet + 1) * COORDS_PER_TET], v, k)
}

/// A face of one tet glued to a lower-indexed tet. During the block search
/// the neighbor is assigned first, which pins down the three arc counts on
/// the shared face and with them the viable local blocks.
#[derive(Debug, Clone, Copy)]
struct Anchor {
    nbr: usize,
    nbr_face: u8,
    my_face: u8,
    /// Position in `FACE_VERTICES[my_face]` of the image of
    /// `FACE_VERTICES[nbr_face][m]`.
    pos: [usize; 3],
}

/// A homogeneous integer linear system. Tet-structured systems additionally
/// know their block layout and enforce quad admissibility.
#[derive(Debug, Clone)]
pub struct MatchingSystem {
    vars: usize,
    rows: Vec<Vec<i64>>,
    /// Some(tet count) when vars = 7 * tets with the standard coordinate
    /// layout; None for generic systems.
    tet_blocks: Option<usize>,
    anchors: Vec<Option<Anchor>>,
}

impl MatchingSystem {
    /// Arc-matching system of a triangulation: three rows per face class.
    /// Self-identified faces contribute their (possibly degenerate)
    /// self-matching rows; zero rows are dropped.
    pub fn for_triangulation(tri: &Triangulation) -> MatchingSystem {
        let vars = tri.tet_count() * COORDS_PER_TET;
        let mut rows = Vec::new();
        for c in 0..tri.face_count() {
            let &(t0, k0) = &tri.face_incidences(c)[0];
            let g = tri.gluing(t0, k0);
            let (t1, k1) = (g.tet, g.face);
            for &v in &FACE_VERTICES[k0 as usize] {
                let iv = g.vmap[v as usize];
                let mut row = vec![0i64; vars];
                row[t0 * COORDS_PER_TET + v as usize] += 1;
                row[t0 * COORDS_PER_TET + 4 + quad_pairing(v, k0) as usize] += 1;
                row[t1 * COORDS_PER_TET + iv as usize] -= 1;
                row[t1 * COORDS_PER_TET + 4 + quad_pairing(iv, k1) as usize] -= 1;
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
        let anchors = (0..tri.tet_count())
            .map(|t| {
                (0..4u8).find_map(|k| {
                    let g = tri.gluing(t, k);
                    if g.tet >= t {
                        return None;
                    }
                    // Seen from the neighbor j = g.tet: its face g.face is
                    // glued onto my face k; map its face vertices forward.
                    let back = tri.gluing(g.tet, g.face);
                    debug_assert_eq!(back.tet, t);
                    let pos = std::array::from_fn(|m| {
                        let w = FACE_VERTICES[g.face as usize][m];
                        let u = back.vmap[w as usize];
                        FACE_VERTICES[k as usize]
                            .iter()
                            .position(|&x| x == u)
                            .unwrap()
                    });
                    Some(Anchor {
                        nbr: g.tet,
                        nbr_face: g.face,
                        my_face: k,
                        pos,
                    })
                })
            })
            .collect();
        MatchingSystem {
            vars,
            rows,
            tet_blocks: Some(tri.tet_count()),
            anchors,
        }
    }

    /// Generic system from explicit rows.
    pub fn from_rows(rows: Vec<Vec<i64>>, vars: usize) -> Result<MatchingSystem> {
        for row in &rows {
            if row.len() != vars {
                return Err(Error::ValidationError(format!(
                    "row has {} entries, expected {vars}",
                    row.len()
                )));
            }
        }
        Ok(MatchingSystem {
            vars,
            rows,
            tet_blocks: None,
            anchors: Vec::new(),
        })
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Verifies every matching equation; reports the first violated row.
    pub fn check_solution(&self, vec: &[u32]) -> Result<()> {
        if vec.len() != self.vars {
            return Err(Error::ValidationError(format!(
                "vector has {} entries, expected {}",
                vec.len(),
                self.vars
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            let s: i64 = row.iter().zip(vec).map(|(&c, &x)| c * x as i64).sum();
            if s != 0 {
                return Err(Error::NotMatched { row: i });
            }
        }
        Ok(())
    }

    pub fn is_solution(&self, vec: &[u32]) -> bool {
        self.check_solution(vec).is_ok()
    }

    /// At most one nonzero quad type per tetrahedron (tet systems only;
    /// generic systems are vacuously admissible).
    pub fn check_admissible(&self, vec: &[u32]) -> Result<()> {
        if let Some(tets) = self.tet_blocks {
            for tet in 0..tets {
                let q = &vec[tet * COORDS_PER_TET + 4..tet * COORDS_PER_TET + 7];
                if q.iter().filter(|&&x| x > 0).count() > 1 {
                    return Err(Error::NotAdmissible { tet });
                }
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, vec: &[u32]) -> bool {
        self.check_admissible(vec).is_ok()
    }

    /// All admissible solutions in the box 0 <= x_i <= bound, by depth-first
    /// search over tet blocks (or single variables for generic systems).
    /// Pruning: partially-assigned rows keep feasibility intervals, and a tet
    /// glued to an already-assigned tet only tries local blocks whose arc
    /// counts match on the shared face. `node_cap` bounds candidate attempts.
    fn solutions_in_box(&self, bound: u32, node_cap: u64) -> Result<(Vec<Vec<u32>>, u64)> {
        let blocks: Vec<std::ops::Range<usize>> = match self.tet_blocks {
            Some(tets) => (0..tets)
                .map(|t| t * COORDS_PER_TET..(t + 1) * COORDS_PER_TET)
                .collect(),
            None => (0..self.vars).map(|v| v..v + 1).collect(),
        };
        // Local candidate vectors per block, in lexicographic order.
        let locals: Vec<Vec<u32>> = match self.tet_blocks {
            Some(_) => {
                let mut out = Vec::new();
                let b = bound;
                for t0 in 0..=b {
                    for t1 in 0..=b {
                        for t2 in 0..=b {
                            for t3 in 0..=b {
                                for q0 in 0..=b {
                                    for q1 in 0..=b {
                                        for q2 in 0..=b {
                                            let nz =
                                                [q0, q1, q2].iter().filter(|&&q| q > 0).count();
                                            if nz <= 1 {
                                                out.push(vec![t0, t1, t2, t3, q0, q1, q2]);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                out
            }
            None => (0..=bound).map(|x| vec![x]).collect(),
        };

        // Candidate indices per (face, arc triple): a glued neighbor fully
        // determines the three arc counts on the shared face.
        let mut by_face_arcs: std::collections::BTreeMap<(u8, [u64; 3]), Vec<usize>> =
            Default::default();
        if self.tet_blocks.is_some() {
            for (ci, cand) in locals.iter().enumerate() {
                for k in 0..4u8 {
                    let triple: [u64; 3] = std::array::from_fn(|m| {
                        arc_count_local(cand, FACE_VERTICES[k as usize][m], k)
                    });
                    by_face_arcs.entry((k, triple)).or_default().push(ci);
                }
            }
        }

        // Row bookkeeping: partial sums plus remaining-interval bounds, and
        // each (block, row) pair's nonzero coefficients.
        let nrows = self.rows.len();
        let mut partial = vec![0i64; nrows];
        let mut rem_min = vec![0i64; nrows];
        let mut rem_max = vec![0i64; nrows];
        for (i, row) in self.rows.iter().enumerate() {
            for &c in row {
                if c > 0 {
                    rem_max[i] += c * bound as i64;
                } else {
                    rem_min[i] += c * bound as i64;
                }
            }
        }
        // Per block: (row, local coeffs, block's rem_min/rem_max share).
        struct Touch {
            row: usize,
            coeffs: Vec<(usize, i64)>,
            bmin: i64,
            bmax: i64,
        }
        let touching: Vec<Vec<Touch>> = blocks
            .iter()
            .map(|r| {
                (0..nrows)
                    .filter_map(|i| {
                        let coeffs: Vec<(usize, i64)> = self.rows[i][r.clone()]
                            .iter()
                            .enumerate()
                            .filter(|&(_, &c)| c != 0)
                            .map(|(j, &c)| (j, c))
                            .collect();
                        if coeffs.is_empty() {
                            return None;
                        }
                        let mut bmin = 0;
                        let mut bmax = 0;
                        for &(_, c) in &coeffs {
                            if c > 0 {
                                bmax += c * bound as i64;
                            } else {
                                bmin += c * bound as i64;
                            }
                        }
                        Some(Touch {
                            row: i,
                            coeffs,
                            bmin,
                            bmax,
                        })
                    })
                    .collect()
            })
            .collect();

        let anchors: &[Option<Anchor>] = if self.tet_blocks.is_some() {
            &self.anchors
        } else {
            &[]
        };

        struct Dfs<'a> {
            blocks: &'a [std::ops::Range<usize>],
            locals: &'a [Vec<u32>],
            by_face_arcs: &'a std::collections::BTreeMap<(u8, [u64; 3]), Vec<usize>>,
            anchors: &'a [Option<Anchor>],
            all: Vec<usize>,
            touching: &'a [Vec<Touch>],
            partial: Vec<i64>,
            rem_min: Vec<i64>,
            rem_max: Vec<i64>,
            current: Vec<u32>,
            out: Vec<Vec<u32>>,
            nodes: u64,
            cap: u64,
            bound: u32,
        }

        impl Dfs<'_> {
            fn go(&mut self, depth: usize) -> Result<()> {
                if depth == self.blocks.len() {
                    self.out.push(self.current.clone());
                    return Ok(());
                }
                let start = self.blocks[depth].start;
                // When a face is glued to an already-assigned tet, its arc
                // counts are pinned; only matching local blocks can work.
                let bucket: Vec<usize> = match self.anchors.get(depth).copied().flatten() {
                    Some(a) => {
                        let nb =
                            &self.current[a.nbr * COORDS_PER_TET..(a.nbr + 1) * COORDS_PER_TET];
                        let mut triple = [0u64; 3];
                        for (m, &w) in FACE_VERTICES[a.nbr_face as usize].iter().enumerate() {
                            triple[a.pos[m]] = arc_count_local(nb, w, a.nbr_face);
                        }
                        self.by_face_arcs
                            .get(&(a.my_face, triple))
                            .cloned()
                            .unwrap_or_default()
                    }
                    None => self.all.clone(),
                };
                for ci in bucket {
                    let cand = &self.locals[ci];
                    self.nodes += 1;
                    if self.nodes > self.cap {
                        return Err(Error::BoundTooLargeForBudget {
                            bound: self.bound,
                            nodes: self.nodes,
                            cap: self.cap,
                        });
                    }
                    // Probe feasibility without mutating.
                    let mut feasible = true;
                    for t in &self.touching[depth] {
                        let mut delta = 0i64;
                        for &(j, c) in &t.coeffs {
                            delta += c * cand[j] as i64;
                        }
                        let p = self.partial[t.row] + delta;
                        if p + (self.rem_min[t.row] - t.bmin) > 0
                            || p + (self.rem_max[t.row] - t.bmax) < 0
                        {
                            feasible = false;
                            break;
                        }
                    }
                    if !feasible {
                        continue;
                    }
                    for t in &self.touching[depth] {
                        let mut delta = 0i64;
                        for &(j, c) in &t.coeffs {
                            delta += c * cand[j] as i64;
                        }
                        self.partial[t.row] += delta;
                        self.rem_min[t.row] -= t.bmin;
                        self.rem_max[t.row] -= t.bmax;
                    }
                    self.current[start..start + cand.len()].copy_from_slice(cand);
                    let res = self.go(depth + 1);
                    for t in &self.touching[depth] {
                        let mut delta = 0i64;
                        for &(j, c) in &t.coeffs {
                            delta += c * cand[j] as i64;
                        }
                        self.partial[t.row] -= delta;
                        self.rem_min[t.row] += t.bmin;
                        self.rem_max[t.row] += t.bmax;
                    }
                    res?;
                }
                Ok(())
            }
        }

        let mut dfs = Dfs {
            blocks: &blocks,
            locals: &locals,
            by_face_arcs: &by_face_arcs,
            anchors,
            all: (0..locals.len()).collect(),
            touching: &touching,
            partial: std::mem::take(&mut partial),
            rem_min: std::mem::take(&mut rem_min),
            rem_max: std::mem::take(&mut rem_max),
            current: vec![0; self.vars],
            out: Vec::new(),
            nodes: 0,
            cap: node_cap,
            bound,
        };
        dfs.go(0)?;
        Ok((dfs.out, dfs.nodes))
    }

    /// The irreducible nonzero admissible solutions with all coordinates at
    /// most `bound`: solutions that are not the sum of two nonzero admissible
    /// solutions in the same box. Sorted lexicographically.
    pub fn fundamental_solutions(&self, bound: u32, node_cap: u64) -> Result<FundamentalSet> {
        let (all, nodes) = self.solutions_in_box(bound, node_cap)?;
        // Drop the zero vector; the box search returns solutions in lex order.
        let solutions: Vec<Vec<u32>> = all
            .into_iter()
            .filter(|v| v.iter().any(|&x| x > 0))
            .collect();
        let index: std::collections::BTreeSet<&[u32]> =
            solutions.iter().map(|v| v.as_slice()).collect();
        let mut reducible = vec![false; solutions.len()];
        let mut sum = vec![0u32; self.vars];
        for (i, a) in solutions.iter().enumerate() {
            for b in solutions.iter().skip(i) {
                let mut in_box = true;
                for k in 0..self.vars {
                    let s = a[k] + b[k];
                    if s > bound {
                        in_box = false;
                        break;
                    }
                    sum[k] = s;
                }
                if !in_box {
                    continue;
                }
                if let Ok(pos) = solutions.binary_search_by(|v| v.as_slice().cmp(&sum[..])) {
                    reducible[pos] = true;
                }
            }
        }
        debug_assert!(index.len() == solutions.len());
        let fundamental: Vec<Vec<u32>> = solutions
            .iter()
            .zip(&reducible)
            .filter(|&(_, &r)| !r)
            .map(|(v, _)| v.clone())
            .collect();
        let bound_limited = fundamental.iter().any(|v| v.contains(&bound));
        Ok(FundamentalSet {
            bound,
            bound_limited,
            nodes,
            solutions: fundamental,
        })
    }
}

/// Result of a bounded fundamental-solution enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalSet {
    pub bound: u32,
    /// Some fundamental solution touches the box wall, so enlarging the
    /// bound may reveal more.
    pub bound_limited: bool,
    /// Search nodes examined.
    pub nodes: u64,
    /// Lexicographically sorted.
    pub solutions: Vec<Vec<u32>>,
}

/// The normal vector of the vertex link: one triangle of type v in every
/// corner of the class.
pub fn vertex_link(tri: &Triangulation, vclass: usize) -> Result<Vec<u32>> {
    if vclass >= tri.vertex_count() {
        return Err(Error::InvalidSimplex {
            dim: 0,
            index: vclass,
        });
    }
    let mut vec = vec![0u32; tri.tet_count() * COORDS_PER_TET];
    for &(t, v) in tri.vertex_incidences(vclass) {
        vec[t * COORDS_PER_TET + v as usize] = 1;
    }
    Ok(vec)
}

/// Intersection count of the vector with one edge incidence.
fn incidence_weight(vec: &[u32], tet: usize, e: u8) -> u64 {
    let (a, b) = EDGE_VERTICES[e as usize];
    let block = &vec[tet * COORDS_PER_TET..(tet + 1) * COORDS_PER_TET];
    let mut w = block[a as usize] as u64 + block[b as usize] as u64;
    for j in 0..3u8 {
        if quad_separates(j, a, b) {
            w += block[4 + j as usize] as u64;
        }
    }
    w
}

/// Intersection count with each edge class. Incidences of one class must
/// agree; a mismatch means the vector violates the matching equations.
pub fn edge_weights(tri: &Triangulation, vec: &[u32]) -> Result<Vec<u64>> {
    if vec.len() != tri.tet_count() * COORDS_PER_TET {
        return Err(Error::ValidationError(format!(
            "vector has {} entries, expected {}",
            vec.len(),
            tri.tet_count() * COORDS_PER_TET
        )));
    }
    let mut out = Vec::with_capacity(tri.edge_count());
    for c in 0..tri.edge_count() {
        let inc = tri.edge_incidences(c);
        let w = incidence_weight(vec, inc[0].0, inc[0].1);
        for &(t, e) in &inc[1..] {
            let w2 = incidence_weight(vec, t, e);
            if w2 != w {
                return Err(Error::ValidationError(format!(
                    "edge class {c}: incidence weights differ ({w} vs {w2})"
                )));
            }
        }
        out.push(w);
    }
    Ok(out)
}

pub fn total_weight(tri: &Triangulation, vec: &[u32]) -> Result<u64> {
    Ok(edge_weights(tri, vec)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomplex::fixtures::{boundary_four_simplex, doubled_tetrahedron};

    const CAP: u64 = 50_000_000;

    /// Independent reducibility check: enumerate every componentwise
    /// decomposition a + b = v with both parts nonzero and test whether both
    /// are admissible solutions. Only usable for small vectors.
    fn brute_force_irreducible(sys: &MatchingSystem, v: &[u32]) -> bool {
        let combos: u64 = v.iter().map(|&x| x as u64 + 1).product();
        assert!(combos <= 1_000_000, "vector too large for the brute check");
        let mut a = vec![0u32; v.len()];
        loop {
            // advance odometer
            let mut i = 0;
            loop {
                if i == v.len() {
                    return true;
                }
                if a[i] < v[i] {
                    a[i] += 1;
                    break;
                }
                a[i] = 0;
                i += 1;
            }
            if a.iter().all(|&x| x == 0) || a.iter().zip(v).all(|(&x, &y)| x == y) {
                continue;
            }
            let b: Vec<u32> = v.iter().zip(&a).map(|(&x, &y)| x - y).collect();
            if sys.is_solution(&a)
                && sys.is_solution(&b)
                && sys.is_admissible(&a)
                && sys.is_admissible(&b)
            {
                return false;
            }
        }
    }

    #[test]
    fn system_shapes() {
        let b = MatchingSystem::for_triangulation(&boundary_four_simplex());
        assert_eq!((b.row_count(), b.var_count()), (30, 35));
        let d = MatchingSystem::for_triangulation(&doubled_tetrahedron());
        assert_eq!((d.row_count(), d.var_count()), (12, 14));
    }

    #[test]
    fn toy_equal_pair() {
        let sys = MatchingSystem::from_rows(vec![vec![1, -1]], 2).unwrap();
        let f = sys.fundamental_solutions(3, CAP).unwrap();
        assert_eq!(f.solutions, vec![vec![1, 1]]);
        assert!(!f.bound_limited);
    }

    #[test]
    fn toy_average() {
        // x + y = 2z
        let sys = MatchingSystem::from_rows(vec![vec![1, 1, -2]], 3).unwrap();
        let f = sys.fundamental_solutions(3, CAP).unwrap();
        assert_eq!(
            f.solutions,
            vec![vec![0, 2, 1], vec![1, 1, 1], vec![2, 0, 1]]
        );
        for v in &f.solutions {
            assert!(brute_force_irreducible(&sys, v));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = MatchingSystem::from_rows(vec![vec![1, -1]], 2).unwrap();
        match sys.fundamental_solutions(3, 5) {
            Err(Error::BoundTooLargeForBudget {
                bound: 3,
                nodes,
                cap: 5,
            }) => {
                assert!(nodes > 5);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn vertex_links_are_admissible_solutions() {
        for tri in [boundary_four_simplex(), doubled_tetrahedron()] {
            let sys = MatchingSystem::for_triangulation(&tri);
            for c in 0..tri.vertex_count() {
                let v = vertex_link(&tri, c).unwrap();
                sys.check_solution(&v).unwrap();
                sys.check_admissible(&v).unwrap();
            }
        }
    }

    #[test]
    fn vertex_link_weights() {
        let b = boundary_four_simplex();
        for c in 0..b.vertex_count() {
            let v = vertex_link(&b, c).unwrap();
            let w = edge_weights(&b, &v).unwrap();
            // One point on each edge at the vertex, none elsewhere.
            assert_eq!(w.iter().filter(|&&x| x == 1).count(), 4);
            assert_eq!(total_weight(&b, &v).unwrap(), 4);
        }
        let d = doubled_tetrahedron();
        for c in 0..d.vertex_count() {
            let v = vertex_link(&d, c).unwrap();
            assert_eq!(total_weight(&d, &v).unwrap(), 3);
        }
    }

    #[test]
    fn edge_weights_reject_unmatched_vectors() {
        let d = doubled_tetrahedron();
        let mut v = vertex_link(&d, 0).unwrap();
        v[0] += 1; // break matching in tet 0 only
        assert!(edge_weights(&d, &v).is_err());
    }

    #[test]
    fn fundamental_solutions_contain_vertex_links() {
        let tri = boundary_four_simplex();
        let sys = MatchingSystem::for_triangulation(&tri);
        let f = sys.fundamental_solutions(2, CAP).unwrap();
        for c in 0..tri.vertex_count() {
            let v = vertex_link(&tri, c).unwrap();
            assert!(
                f.solutions.contains(&v),
                "vertex link {c} missing from fundamental set"
            );
        }
        // Each returned solution passes the independent reducibility check.
        for v in &f.solutions {
            if v.iter().map(|&x| x as u64 + 1).product::<u64>() <= 1_000_000 {
                assert!(brute_force_irreducible(&sys, v));
            }
        }
    }

    #[test]
    fn doubled_tet_fundamental_matches_brute_force() {
        let tri = doubled_tetrahedron();
        let sys = MatchingSystem::for_triangulation(&tri);
        let f = sys.fundamental_solutions(1, CAP).unwrap();
        // Independent enumeration of the whole box.
        let mut expected = Vec::new();
        let n = sys.var_count();
        let mut v = vec![0u32; n];
        'outer: loop {
            if sys.is_solution(&v)
                && sys.is_admissible(&v)
                && v.iter().any(|&x| x > 0)
                && brute_force_irreducible(&sys, &v)
            {
                expected.push(v.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    break 'outer;
                }
                if v[i] < 1 {
                    v[i] += 1;
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
        expected.sort();
        assert_eq!(f.solutions, expected);
        // The four vertex links are among them.
        for c in 0..tri.vertex_count() {
            assert!(f.solutions.contains(&vertex_link(&tri, c).unwrap()));
        }
    }

    #[test]
    fn quad_pairing_table() {
        // Each quad puts exactly two disjoint pairs together.
        for j in 0..3u8 {
            let mut together = Vec::new();
            for a in 0..4u8 {
                for b in (a + 1)..4u8 {
                    if quad_pairing(a, b) == j {
                        together.push((a, b));
                    }
                }
            }
            assert_eq!(together.len(), 2);
            let (p, q) = (together[0], together[1]);
            assert!(p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1);
        }
        // A quad crosses exactly the four edges between its two pairs.
        for j in 0..3u8 {
            let crossed = EDGE_VERTICES
                .iter()
                .filter(|&&(a, b)| quad_separates(j, a, b))
                .count();
            assert_eq!(crossed, 4);
        }
    }
}
