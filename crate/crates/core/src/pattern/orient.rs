//! Coherence of the transverse-direction labels.
//!
//! Every edge point and every closed face curve carries one bit: which way
//! the surface's normal leans along the edge (toward the class head) or
//! across the curve (toward its inner disc). Two kinds of local constraints
//! tie the bits together:
//!
//! * a face arc joins its two endpoints: a sheet crossing a face has one
//!   coherent side, which forces the endpoint bits to agree or disagree
//!   depending on the local walk directions;
//! * an annulus piece joins its two boundary circles: the annulus either
//!   faces the region between the circles at both ends or faces away at
//!   both ends.
//!
//! Connected components of the constraint graph are exactly the connected
//! components of the surface, so a pattern skeleton admits `2^components`
//! coherent labelings.

use super::tetgeom::{Analysis, OrientVar};
use super::{Piece, TransversePattern};
use crate::error::{Error, Result};
use crate::uf::ParityUnionFind;

#[derive(Debug, Clone)]
pub(crate) struct OrientSystem {
    point_offset: Vec<usize>,
    curve_offset: Vec<usize>,
    n_vars: usize,
    /// (a, b, parity) meaning bit(a) xor bit(b) must equal parity.
    constraints: Vec<(usize, usize, bool)>,
    /// Component id per variable, first-occurrence numbering.
    pub component_of: Vec<usize>,
    /// Parity from each variable to its component's root.
    parity_to_root: Vec<bool>,
    pub n_components: usize,
}

impl OrientSystem {
    pub fn build(p: &TransversePattern, analysis: &Analysis) -> Result<OrientSystem> {
        let tri = &p.tri;
        let mut point_offset = Vec::with_capacity(tri.edge_count());
        let mut n = 0usize;
        for e in 0..tri.edge_count() {
            point_offset.push(n);
            n += p.edge_points[e] as usize;
        }
        let mut curve_offset = Vec::with_capacity(tri.face_count());
        for c in 0..tri.face_count() {
            curve_offset.push(n);
            n += p.faces[c].closed.len();
        }

        let var = |v: OrientVar| -> usize {
            match v {
                OrientVar::Point { edge_class, point } => point_offset[edge_class] + point as usize,
                OrientVar::Curve { face_class, curve } => curve_offset[face_class] + curve,
            }
        };

        let mut constraints = Vec::new();
        for fg in &analysis.faces {
            for arc in &p.faces[fg.class].arcs {
                let ids: Vec<usize> = arc
                    .ends
                    .iter()
                    .map(|end| {
                        var(OrientVar::Point {
                            edge_class: fg.edge_class[end.local_edge as usize],
                            point: end.point,
                        })
                    })
                    .collect();
                // Exactly one endpoint normal leans walk-forward, so the
                // bits agree exactly when the walk directions agree.
                let parity = fg.fwd[arc.ends[0].local_edge as usize]
                    == fg.fwd[arc.ends[1].local_edge as usize];
                constraints.push((ids[0], ids[1], parity));
            }
        }
        for tg in &analysis.tets {
            if let Some((pi, between)) = tg.annulus_between {
                if let Piece::Annulus { circles: [c1, c2] } = p.tets[tg.tet].pieces[pi] {
                    // bit value under which the circle faces the between
                    // region; the two circles must face it (or not) together.
                    let beta = |ci: usize| tg.circles[ci].sides[1] == between;
                    let v1 = var(tg.circles[c1].rep_var);
                    let v2 = var(tg.circles[c2].rep_var);
                    constraints.push((v1, v2, beta(c1) != beta(c2)));
                }
            }
        }

        let mut uf = ParityUnionFind::new(n);
        for &(a, b, parity) in &constraints {
            if !uf.union(a, b, parity) {
                return Err(Error::ValidationError(
                    "surface sides cannot be labeled coherently".into(),
                ));
            }
        }
        let mut component_of = vec![usize::MAX; n];
        let mut parity_to_root = vec![false; n];
        let mut n_components = 0;
        let mut root_comp = std::collections::BTreeMap::new();
        for v in 0..n {
            let (root, parity) = uf.find(v);
            let id = *root_comp.entry(root).or_insert_with(|| {
                let id = n_components;
                n_components += 1;
                id
            });
            component_of[v] = id;
            parity_to_root[v] = parity;
        }

        Ok(OrientSystem {
            point_offset,
            curve_offset,
            n_vars: n,
            constraints,
            component_of,
            parity_to_root,
            n_components,
        })
    }

    pub fn var_count(&self) -> usize {
        self.n_vars
    }

    /// Current bit of a variable in a pattern.
    pub fn read_bit(&self, p: &TransversePattern, v: usize) -> bool {
        for (e, &off) in self.point_offset.iter().enumerate() {
            let w = p.edge_points[e] as usize;
            if v >= off && v < off + w {
                return p.point_dirs[e][v - off];
            }
        }
        for (c, &off) in self.curve_offset.iter().enumerate() {
            let m = p.faces[c].closed.len();
            if v >= off && v < off + m {
                return p.faces[c].closed[v - off].side_toward;
            }
        }
        unreachable!("variable out of range")
    }

    /// Writes a full assignment back into a pattern.
    pub fn write_bits(&self, p: &mut TransversePattern, bits: &[bool]) {
        for (e, &off) in self.point_offset.iter().enumerate() {
            let n = p.point_dirs[e].len();
            p.point_dirs[e].copy_from_slice(&bits[off..off + n]);
        }
        for (c, &off) in self.curve_offset.iter().enumerate() {
            for (i, curve) in p.faces[c].closed.iter_mut().enumerate() {
                curve.side_toward = bits[off + i];
            }
        }
    }

    /// Checks the pattern's current labels against every constraint.
    pub fn check(&self, p: &TransversePattern) -> Result<()> {
        for &(a, b, parity) in &self.constraints {
            if (self.read_bit(p, a) != self.read_bit(p, b)) != parity {
                return Err(Error::ValidationError(
                    "surface side labels are incoherent across a sheet".into(),
                ));
            }
        }
        Ok(())
    }

    /// The assignment with every component's root variable set to the given
    /// bit; other bits follow by constraint propagation.
    pub fn assignment(&self, root_bits: &[bool]) -> Vec<bool> {
        debug_assert_eq!(root_bits.len(), self.n_components);
        (0..self.n_vars)
            .map(|v| root_bits[self.component_of[v]] ^ self.parity_to_root[v])
            .collect()
    }

    /// Variable index of a point or curve label.
    pub fn var_of(&self, v: OrientVar) -> usize {
        match v {
            OrientVar::Point { edge_class, point } => {
                self.point_offset[edge_class] + point as usize
            }
            OrientVar::Curve { face_class, curve } => self.curve_offset[face_class] + curve,
        }
    }

    /// Parity from a variable to its component's root.
    pub fn parity(&self, v: usize) -> bool {
        self.parity_to_root[v]
    }

    /// The relabeling of the pattern's current assignment, flipping whole
    /// components so each component's first variable reads `false`.
    pub fn minimal_equivalent(&self, p: &TransversePattern) -> Vec<bool> {
        let mut flip = vec![false; self.n_components];
        let mut seen = vec![false; self.n_components];
        let mut out = vec![false; self.n_vars];
        for (v, slot) in out.iter_mut().enumerate() {
            let comp = self.component_of[v];
            let cur = self.read_bit(p, v);
            if !seen[comp] {
                seen[comp] = true;
                flip[comp] = cur;
            }
            *slot = cur != flip[comp];
        }
        out
    }
}

/// Rewrites a pattern's labels to the nearest coherent assignment: each
/// label component keeps the current bit of its smallest variable and every
/// other bit follows by constraint propagation. Move rewrites can merge or
/// split label components, leaving stale bits; this repairs them without
/// changing components whose anchor bit was already right.
pub(crate) fn reconcile_labels(p: &mut TransversePattern) -> Result<()> {
    let analysis = p.analyze()?;
    let sys = OrientSystem::build(p, &analysis)?;
    let mut root_bits = vec![false; sys.n_components];
    let mut seen = vec![false; sys.n_components];
    for v in 0..sys.var_count() {
        let comp = sys.component_of[v];
        if !seen[comp] {
            seen[comp] = true;
            root_bits[comp] = sys.read_bit(p, v) ^ sys.parity_to_root[v];
        }
    }
    let bits = sys.assignment(&root_bits);
    sys.write_bits(&mut *p, &bits);
    Ok(())
}

/// Like [`reconcile_labels`], but each component anchors at the smallest
/// variable listed in `primary` (falling back to `secondary`, then to the
/// component's own smallest variable). Rewrites list the surviving labels as
/// primary anchors so that an edit followed by its inverse restores the
/// original bits exactly; `secondary` carries chosen bits for components
/// made entirely of fresh variables.
pub(crate) fn reconcile_labels_anchored(
    p: &mut TransversePattern,
    primary: &[(OrientVar, bool)],
    secondary: &[(OrientVar, bool)],
) -> Result<()> {
    let analysis = p.analyze()?;
    let sys = OrientSystem::build(p, &analysis)?;
    let mut root_bits: Vec<Option<bool>> = vec![None; sys.n_components];
    let mut anchor_var = vec![usize::MAX; sys.n_components];
    for tier in [primary, secondary] {
        for &(av, bit) in tier {
            let v = sys.var_of(av);
            let comp = sys.component_of[v];
            if v < anchor_var[comp] {
                anchor_var[comp] = v;
                root_bits[comp] = Some(bit ^ sys.parity(v));
            }
        }
        // Primary anchors shadow secondary ones even at larger variables.
        if !root_bits.iter().any(|b| b.is_none()) {
            break;
        }
        anchor_var
            .iter_mut()
            .zip(&root_bits)
            .for_each(|(a, b)| *a = if b.is_some() { 0 } else { usize::MAX });
    }
    let mut seen = vec![false; sys.n_components];
    let mut roots = vec![false; sys.n_components];
    for v in 0..sys.var_count() {
        let comp = sys.component_of[v];
        if !seen[comp] {
            seen[comp] = true;
            roots[comp] = match root_bits[comp] {
                Some(b) => b,
                None => sys.read_bit(p, v) ^ sys.parity(v),
            };
        }
    }
    let bits = sys.assignment(&roots);
    sys.write_bits(&mut *p, &bits);
    Ok(())
}

/// All coherent side labelings of a pattern skeleton, one pattern per
/// labeling. The input's own labels are ignored: only the skeleton (points,
/// arcs, curves, pieces) matters.
pub fn solve_orientations(p: &TransversePattern) -> Result<Vec<TransversePattern>> {
    let analysis = p.analyze()?;
    let sys = OrientSystem::build(p, &analysis)?;
    if sys.n_components > 16 {
        return Err(Error::BudgetExceeded {
            what: "orientation components".into(),
            limit: 16,
        });
    }
    let mut out = Vec::with_capacity(1 << sys.n_components);
    for mask in 0u32..(1 << sys.n_components) {
        let root_bits: Vec<bool> = (0..sys.n_components).map(|i| mask >> i & 1 == 1).collect();
        let bits = sys.assignment(&root_bits);
        let mut q = p.clone();
        sys.write_bits(&mut q, &bits);
        out.push(q);
    }
    Ok(out)
}
