//! Coordinated pattern rewrites: point edits on edge classes, arc and curve
//! edits on face classes, piece transfer into the rewritten tets, and
//! side-label repair. Every elementary move is expressed as one `Rewrite`.
//!
//! Pieces carry over by *tracking*: a surviving arc or curve keeps its
//! identity through the edit, so each freshly derived boundary circle votes
//! for the old piece of any tracked item it contains. Circles with no votes
//! are new sheets (fresh discs unless the move says otherwise); old pieces
//! that lose all their circles must be declared removed up front.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::pattern::{
    reconcile_labels_anchored, tet_skeleton, Analysis, CircleItem, ClosedCurve, FaceArc,
    FaceGeometry, FacePattern, OrientVar, Piece, TetSkeleton, TransversePattern,
};

/// A point on an edge class during a rewrite: an index in the old pattern,
/// or the k-th point inserted on that class by this rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PointSpec {
    Old(u32),
    New(usize),
}

/// One arc endpoint in rewrite coordinates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EndSpec {
    pub local_edge: u8,
    pub point: PointSpec,
}

impl EndSpec {
    pub fn old(local_edge: u8, point: u32) -> Self {
        EndSpec {
            local_edge,
            point: PointSpec::Old(point),
        }
    }

    pub fn new(local_edge: u8, slot: usize) -> Self {
        EndSpec {
            local_edge,
            point: PointSpec::New(slot),
        }
    }
}

#[derive(Debug, Default, Clone)]
struct EdgeEdit {
    /// Old indices to delete, strictly sorted.
    remove: Vec<u32>,
    /// (old gap position, provisional direction bit). A point inserted at
    /// position g lands between old points g-1 and g; same-position entries
    /// land adjacent in list order.
    insert: Vec<(u32, bool)>,
}

#[derive(Debug, Default, Clone)]
struct FaceEdit {
    remove_arcs: BTreeSet<usize>,
    /// (old arc index, stored end slot) -> replacement endpoint.
    retarget: BTreeMap<(usize, u8), EndSpec>,
    add_arcs: Vec<[EndSpec; 2]>,
    remove_curves: BTreeSet<usize>,
    /// (local edge, gap in new point coordinates, side bit); the anchor is
    /// re-canonicalised once the new face geometry is known.
    add_curves: Vec<(u8, u32, bool)>,
}

/// Index translation for one edited edge class.
#[derive(Debug, Clone)]
pub(crate) struct EdgeMap {
    pub old_to_new: Vec<Option<u32>>,
    pub new_of_insert: Vec<u32>,
    pub new_dirs: Vec<bool>,
    /// New gap index of each old gap `0..=w`.
    pub gap_map: Vec<u32>,
}

fn build_edge_map(dirs: &[bool], edit: &EdgeEdit) -> Result<EdgeMap> {
    let w = dirs.len() as u32;
    if !edit.remove.windows(2).all(|p| p[0] < p[1])
        || edit.remove.iter().any(|&p| p >= w)
        || edit.insert.iter().any(|&(g, _)| g > w)
    {
        return Err(Error::ValidationError("malformed edge point edit".into()));
    }
    let mut old_to_new = vec![None; w as usize];
    let mut new_of_insert = vec![0u32; edit.insert.len()];
    let mut new_dirs = Vec::new();
    let mut gap_map = vec![0u32; w as usize + 1];
    let mut removed = edit.remove.iter().peekable();
    for pos in 0..=w {
        gap_map[pos as usize] = new_dirs.len() as u32;
        for (k, &(g, bit)) in edit.insert.iter().enumerate() {
            if g == pos {
                new_of_insert[k] = new_dirs.len() as u32;
                new_dirs.push(bit);
            }
        }
        if pos < w {
            if removed.peek() == Some(&&pos) {
                removed.next();
            } else {
                old_to_new[pos as usize] = Some(new_dirs.len() as u32);
                new_dirs.push(dirs[pos as usize]);
            }
        }
    }
    Ok(EdgeMap {
        old_to_new,
        new_of_insert,
        new_dirs,
        gap_map,
    })
}

/// One pending rewrite against a fixed source pattern.
pub(crate) struct Rewrite<'a> {
    old: &'a TransversePattern,
    analysis: &'a Analysis,
    edges: BTreeMap<usize, EdgeEdit>,
    faces: BTreeMap<usize, FaceEdit>,
    removed_pieces: BTreeSet<(usize, usize)>,
    /// (edge class, insert slot, bit): label seeds for all-new components.
    seed_point_bits: Vec<(usize, usize, bool)>,
    /// (face class, add slot, bit).
    seed_curve_bits: Vec<(usize, usize, bool)>,
}

impl<'a> Rewrite<'a> {
    pub fn new(old: &'a TransversePattern, analysis: &'a Analysis) -> Self {
        Rewrite {
            old,
            analysis,
            edges: BTreeMap::new(),
            faces: BTreeMap::new(),
            removed_pieces: BTreeSet::new(),
            seed_point_bits: Vec::new(),
            seed_curve_bits: Vec::new(),
        }
    }

    pub fn remove_point(&mut self, edge_class: usize, index: u32) {
        let e = self.edges.entry(edge_class).or_default();
        let pos = e.remove.partition_point(|&x| x < index);
        e.remove.insert(pos, index);
    }

    /// Returns the insert slot used by [`EndSpec::new`] references.
    pub fn insert_point(&mut self, edge_class: usize, gap: u32, bit: bool) -> usize {
        let e = self.edges.entry(edge_class).or_default();
        e.insert.push((gap, bit));
        e.insert.len() - 1
    }

    pub fn remove_arc(&mut self, face_class: usize, arc: usize) {
        self.faces
            .entry(face_class)
            .or_default()
            .remove_arcs
            .insert(arc);
    }

    pub fn retarget_end(
        &mut self,
        face_class: usize,
        arc: usize,
        slot: u8,
        target: EndSpec,
    ) -> Result<()> {
        let prev = self
            .faces
            .entry(face_class)
            .or_default()
            .retarget
            .insert((arc, slot), target);
        if prev.is_some() {
            return Err(Error::ValidationError(format!(
                "face {face_class}: arc {arc} end {slot} retargeted twice"
            )));
        }
        Ok(())
    }

    /// Returns the add slot of the new arc.
    pub fn add_arc(&mut self, face_class: usize, ends: [EndSpec; 2]) -> usize {
        let f = self.faces.entry(face_class).or_default();
        f.add_arcs.push(ends);
        f.add_arcs.len() - 1
    }

    pub fn remove_curve(&mut self, face_class: usize, curve: usize) {
        self.faces
            .entry(face_class)
            .or_default()
            .remove_curves
            .insert(curve);
    }

    /// Returns the add slot of the new curve. The gap is in new coordinates.
    pub fn add_curve(&mut self, face_class: usize, local_edge: u8, gap: u32, bit: bool) -> usize {
        let f = self.faces.entry(face_class).or_default();
        f.add_curves.push((local_edge, gap, bit));
        f.add_curves.len() - 1
    }

    pub fn remove_piece(&mut self, tet: usize, piece: usize) {
        self.removed_pieces.insert((tet, piece));
    }

    pub fn seed_point_bit(&mut self, edge_class: usize, insert_slot: usize, bit: bool) {
        self.seed_point_bits.push((edge_class, insert_slot, bit));
    }

    pub fn seed_curve_bit(&mut self, face_class: usize, add_slot: usize, bit: bool) {
        self.seed_curve_bits.push((face_class, add_slot, bit));
    }

    /// Builds the rewritten pattern up to piece assignment: faces and edge
    /// points are final, affected tets have fresh skeletons and piece votes,
    /// and their piece lists are still empty.
    pub fn apply(self) -> Result<Applied<'a>> {
        let old = self.old;
        let tri = &old.tri;

        let mut edge_maps = BTreeMap::new();
        for (&e, edit) in &self.edges {
            edge_maps.insert(e, build_edge_map(&old.point_dirs[e], edit)?);
        }
        let map_point = |class: usize, p: u32| -> Result<u32> {
            match edge_maps.get(&class) {
                None => Ok(p),
                Some(m) => m
                    .old_to_new
                    .get(p as usize)
                    .copied()
                    .flatten()
                    .ok_or_else(|| {
                        Error::ValidationError(format!(
                            "edge {class}: surviving arc references removed point {p}"
                        ))
                    }),
            }
        };
        let map_gap = |class: usize, g: u32| -> u32 {
            match edge_maps.get(&class) {
                None => g,
                Some(m) => m.gap_map[g as usize],
            }
        };

        let empty_edit = FaceEdit::default();
        let mut new_faces = Vec::with_capacity(old.faces.len());
        let mut arc_maps = vec![BTreeMap::new(); old.faces.len()];
        let mut added_arcs = vec![Vec::new(); old.faces.len()];
        for c in 0..old.faces.len() {
            let edit = self.faces.get(&c).unwrap_or(&empty_edit);
            let classes = &self.analysis.faces[c].edge_class;
            let resolve = |spec: EndSpec| -> Result<crate::pattern::ArcEnd> {
                let class = classes[spec.local_edge as usize];
                let idx = match spec.point {
                    PointSpec::Old(p) => map_point(class, p)?,
                    PointSpec::New(k) => {
                        let m = edge_maps.get(&class).ok_or_else(|| {
                            Error::ValidationError(format!(
                                "edge {class}: new-point reference without an edit"
                            ))
                        })?;
                        *m.new_of_insert.get(k).ok_or_else(|| {
                            Error::ValidationError(format!(
                                "edge {class}: new-point slot {k} out of range"
                            ))
                        })?
                    }
                };
                Ok(crate::pattern::ArcEnd::new(spec.local_edge, idx))
            };

            // (arc, origin): origin 0.. = old index, usize::MAX - slot = added.
            let mut entries: Vec<(FaceArc, usize, bool)> = Vec::new();
            for (i, arc) in old.faces[c].arcs.iter().enumerate() {
                if edit.remove_arcs.contains(&i) {
                    continue;
                }
                let mut ends = arc.ends;
                for slot in 0..2u8 {
                    ends[slot as usize] = match edit.retarget.get(&(i, slot)) {
                        Some(spec) => resolve(*spec)?,
                        None => crate::pattern::ArcEnd::new(
                            ends[slot as usize].local_edge,
                            map_point(
                                classes[ends[slot as usize].local_edge as usize],
                                ends[slot as usize].point,
                            )?,
                        ),
                    };
                }
                entries.push((FaceArc::new(ends[0], ends[1]), i, false));
            }
            for (j, ends) in edit.add_arcs.iter().enumerate() {
                entries.push((FaceArc::new(resolve(ends[0])?, resolve(ends[1])?), j, true));
            }
            entries.sort_by(|a, b| (a.0, a.2, a.1).cmp(&(b.0, b.2, b.1)));
            let mut arcs = Vec::with_capacity(entries.len());
            added_arcs[c] = vec![usize::MAX; edit.add_arcs.len()];
            for (pos, (arc, origin, is_new)) in entries.into_iter().enumerate() {
                arcs.push(arc);
                if is_new {
                    added_arcs[c][origin] = pos;
                } else {
                    arc_maps[c].insert(origin, pos);
                }
            }
            new_faces.push(FacePattern {
                arcs,
                closed: Vec::new(),
            });
        }

        let mut new_edge_points = old.edge_points.clone();
        let mut new_point_dirs = old.point_dirs.clone();
        for (&e, m) in &edge_maps {
            new_edge_points[e] = m.new_dirs.len() as u32;
            new_point_dirs[e] = m.new_dirs.clone();
        }

        // Face geometry of the rewritten faces; arc validity (non-crossing,
        // one end per position) is established here.
        let mut geoms = Vec::with_capacity(new_faces.len());
        for (c, fp) in new_faces.iter().enumerate() {
            geoms.push(FaceGeometry::build(tri, c, fp, &new_edge_points)?);
        }

        // Curves: remap survivors, append additions, canonicalise anchors,
        // then sort.
        let mut curve_maps = vec![BTreeMap::new(); old.faces.len()];
        let mut added_curves = vec![Vec::new(); old.faces.len()];
        for c in 0..old.faces.len() {
            let edit = self.faces.get(&c).unwrap_or(&empty_edit);
            let classes = &self.analysis.faces[c].edge_class;
            let fg = &geoms[c];
            let mut entries: Vec<(ClosedCurve, usize, bool)> = Vec::new();
            for (i, cv) in old.faces[c].closed.iter().enumerate() {
                if edit.remove_curves.contains(&i) {
                    continue;
                }
                let (l, g) = cv.anchor;
                let g2 = map_gap(classes[l as usize], g);
                let region = fg.region_of_edge_gap(l, g2);
                entries.push((
                    ClosedCurve {
                        anchor: fg.region_anchor(region),
                        side_toward: cv.side_toward,
                    },
                    i,
                    false,
                ));
            }
            for (j, &(l, g, bit)) in edit.add_curves.iter().enumerate() {
                if l >= 3 || g > fg.w[l as usize] {
                    return Err(Error::ValidationError(format!(
                        "face {c}: added curve anchor out of range"
                    )));
                }
                let region = fg.region_of_edge_gap(l, g);
                entries.push((
                    ClosedCurve {
                        anchor: fg.region_anchor(region),
                        side_toward: bit,
                    },
                    j,
                    true,
                ));
            }
            entries.sort_by(|a, b| (a.0, a.2, a.1).cmp(&(b.0, b.2, b.1)));
            added_curves[c] = vec![usize::MAX; edit.add_curves.len()];
            for (pos, (cv, origin, is_new)) in entries.into_iter().enumerate() {
                new_faces[c].closed.push(cv);
                if is_new {
                    added_curves[c][origin] = pos;
                } else {
                    curve_maps[c].insert(origin, pos);
                }
            }
        }

        // Tets whose boundary content changed must rebuild their pieces.
        let mut affected = BTreeSet::new();
        for &e in self.edges.keys() {
            for &(t, _) in tri.edge_incidences(e) {
                affected.insert(t);
            }
        }
        for &c in self.faces.keys() {
            for &(t, _) in tri.face_incidences(c) {
                affected.insert(t);
            }
        }
        for &(t, _) in &self.removed_pieces {
            affected.insert(t);
        }

        let mut pattern = TransversePattern {
            tri: old.tri.clone(),
            edge_points: new_edge_points,
            point_dirs: new_point_dirs,
            faces: new_faces,
            tets: old.tets.clone(),
        };
        for &t in &affected {
            pattern.tets[t].pieces.clear();
        }

        // Fresh skeletons and piece votes for the affected tets.
        let mut skeletons = BTreeMap::new();
        let mut votes = BTreeMap::new();
        let mut descendants: BTreeMap<usize, BTreeMap<usize, Vec<usize>>> = BTreeMap::new();
        for &t in &affected {
            let skel = tet_skeleton(&pattern, t, &geoms)?;
            let arc_inv: [BTreeMap<usize, usize>; 4] = std::array::from_fn(|k| {
                let c = tri.face_class(t, k as u8);
                arc_maps[c].iter().map(|(&o, &n)| (n, o)).collect()
            });
            let curve_inv: [BTreeMap<usize, usize>; 4] = std::array::from_fn(|k| {
                let c = tri.face_class(t, k as u8);
                curve_maps[c].iter().map(|(&o, &n)| (n, o)).collect()
            });
            let old_geom = &self.analysis.tets[t];
            let mut tet_votes: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); skel.circles.len()];
            let mut desc: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (nc, circle) in skel.circles.iter().enumerate() {
                for item in &circle.items {
                    let old_circle = match *item {
                        CircleItem::Arc { face, arc } => arc_inv[face as usize]
                            .get(&arc)
                            .and_then(|&o| old_geom.circle_of_arc(face, o).map(|(c, _)| c)),
                        CircleItem::Closed { face, curve } => curve_inv[face as usize]
                            .get(&curve)
                            .and_then(|&o| old_geom.circle_of_closed(face, o)),
                    };
                    if let Some(oc) = old_circle {
                        tet_votes[nc].insert(old_geom.piece_of_circle(old, oc));
                        let d = desc.entry(oc).or_default();
                        if !d.contains(&nc) {
                            d.push(nc);
                        }
                    }
                }
            }
            skeletons.insert(t, skel);
            votes.insert(t, tet_votes);
            descendants.insert(t, desc);
        }

        // Label anchors: every surviving point and curve keeps its old bit.
        let mut primary = Vec::new();
        for e in 0..tri.edge_count() {
            match edge_maps.get(&e) {
                None => {
                    for (p, &bit) in old.point_dirs[e].iter().enumerate() {
                        primary.push((
                            OrientVar::Point {
                                edge_class: e,
                                point: p as u32,
                            },
                            bit,
                        ));
                    }
                }
                Some(m) => {
                    for (p, &bit) in old.point_dirs[e].iter().enumerate() {
                        if let Some(np) = m.old_to_new[p] {
                            primary.push((
                                OrientVar::Point {
                                    edge_class: e,
                                    point: np,
                                },
                                bit,
                            ));
                        }
                    }
                }
            }
        }
        for c in 0..old.faces.len() {
            for (i, cv) in old.faces[c].closed.iter().enumerate() {
                if let Some(&ni) = curve_maps[c].get(&i) {
                    primary.push((
                        OrientVar::Curve {
                            face_class: c,
                            curve: ni,
                        },
                        cv.side_toward,
                    ));
                }
            }
        }
        let mut secondary = Vec::new();
        for &(e, slot, bit) in &self.seed_point_bits {
            let m = edge_maps.get(&e).ok_or_else(|| {
                Error::ValidationError(format!("edge {e}: seed bit without an edit"))
            })?;
            secondary.push((
                OrientVar::Point {
                    edge_class: e,
                    point: m.new_of_insert[slot],
                },
                bit,
            ));
        }
        for &(c, slot, bit) in &self.seed_curve_bits {
            secondary.push((
                OrientVar::Curve {
                    face_class: c,
                    curve: added_curves[c][slot],
                },
                bit,
            ));
        }

        Ok(Applied {
            old,
            pattern,
            edge_maps,
            arc_maps,
            added_arcs,
            curve_maps,
            added_curves,
            affected,
            skeletons,
            votes,
            descendants,
            removed_pieces: self.removed_pieces,
            primary,
            secondary,
            filled: BTreeSet::new(),
        })
    }
}

/// A rewrite after face/edge assembly: affected tets await piece assignment.
pub(crate) struct Applied<'a> {
    old: &'a TransversePattern,
    pub pattern: TransversePattern,
    pub edge_maps: BTreeMap<usize, EdgeMap>,
    pub arc_maps: Vec<BTreeMap<usize, usize>>,
    pub added_arcs: Vec<Vec<usize>>,
    pub curve_maps: Vec<BTreeMap<usize, usize>>,
    pub added_curves: Vec<Vec<usize>>,
    pub affected: BTreeSet<usize>,
    pub skeletons: BTreeMap<usize, TetSkeleton>,
    /// Per affected tet: set of old piece indices traced by each new circle.
    pub votes: BTreeMap<usize, Vec<BTreeSet<usize>>>,
    /// Per affected tet: old circle index -> new circles containing its
    /// tracked items.
    pub descendants: BTreeMap<usize, BTreeMap<usize, Vec<usize>>>,
    removed_pieces: BTreeSet<(usize, usize)>,
    primary: Vec<(OrientVar, bool)>,
    secondary: Vec<(OrientVar, bool)>,
    filled: BTreeSet<usize>,
}

/// Result of a completed rewrite, with index maps into the final pattern.
pub(crate) struct Rewritten {
    pub pattern: TransversePattern,
    pub edge_maps: BTreeMap<usize, EdgeMap>,
    pub arc_maps: Vec<BTreeMap<usize, usize>>,
    pub added_arcs: Vec<Vec<usize>>,
    pub curve_maps: Vec<BTreeMap<usize, usize>>,
    pub added_curves: Vec<Vec<usize>>,
}

impl<'a> Applied<'a> {
    /// Unique descendant circle of an old circle in an affected tet.
    pub fn descendant(&self, tet: usize, old_circle: usize) -> Result<usize> {
        match self.descendants[&tet].get(&old_circle).map(|v| &v[..]) {
            Some([one]) => Ok(*one),
            other => Err(Error::ValidationError(format!(
                "tet {tet}: circle {old_circle} has {} descendants",
                other.map_or(0, |v| v.len())
            ))),
        }
    }

    pub fn descendant_list(&self, tet: usize, old_circle: usize) -> &[usize] {
        self.descendants[&tet]
            .get(&old_circle)
            .map(|v| &v[..])
            .unwrap_or(&[])
    }

    /// New circles of an affected tet tracing no old piece at all.
    pub fn fresh_circles(&self, tet: usize) -> Vec<usize> {
        self.votes[&tet]
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Circle of the added curve `(face_class, add slot)` inside a tet,
    /// looked up through the tet's face slots.
    pub fn circle_of_added_curve(
        &self,
        tet: usize,
        face_class: usize,
        add_slot: usize,
    ) -> Result<Vec<usize>> {
        let ci = self.added_curves[face_class][add_slot];
        let tri = &self.pattern.tri;
        let skel = &self.skeletons[&tet];
        let mut out = Vec::new();
        for k in 0..4u8 {
            if tri.face_class(tet, k) != face_class {
                continue;
            }
            for (nc, circle) in skel.circles.iter().enumerate() {
                if circle
                    .items
                    .iter()
                    .any(|it| *it == CircleItem::Closed { face: k, curve: ci })
                    && !out.contains(&nc)
                {
                    out.push(nc);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::ValidationError(
                "added curve has no circle in tet".into(),
            ));
        }
        Ok(out)
    }

    /// Default piece assignment for one affected tet: every old piece's
    /// circles must map one-to-one onto voting circles, and voteless circles
    /// become fresh discs.
    pub fn pieces_default(&self, tet: usize) -> Result<Vec<Piece>> {
        let votes = &self.votes[&tet];
        let mut by_piece: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (nc, vs) in votes.iter().enumerate() {
            if vs.len() > 1 {
                return Err(Error::ValidationError(format!(
                    "tet {tet}: rewritten circle traces {} old pieces",
                    vs.len()
                )));
            }
            if let Some(&pi) = vs.iter().next() {
                by_piece.entry(pi).or_default().push(nc);
            }
        }
        let mut pieces = Vec::new();
        for (pi, piece) in self.old.tets[tet].pieces.iter().enumerate() {
            let traced = by_piece.remove(&pi).unwrap_or_default();
            if self.removed_pieces.contains(&(tet, pi)) {
                if !traced.is_empty() {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: removed piece {pi} still traced"
                    )));
                }
                continue;
            }
            match (piece, traced.as_slice()) {
                (Piece::Disc { .. }, [c]) => pieces.push(Piece::Disc { circle: *c }),
                (Piece::Annulus { .. }, [c, d]) => pieces.push(Piece::Annulus {
                    circles: [*c.min(d), *c.max(d)],
                }),
                _ => {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: piece {pi} traced by {} circles",
                        traced.len()
                    )))
                }
            }
        }
        for nc in self.fresh_circles(tet) {
            pieces.push(Piece::Disc { circle: nc });
        }
        Ok(pieces)
    }

    pub fn set_pieces(&mut self, tet: usize, mut pieces: Vec<Piece>) {
        pieces.sort();
        self.pattern.tets[tet].pieces = pieces;
        self.filled.insert(tet);
    }

    pub fn fill_default(&mut self) -> Result<()> {
        for t in self.affected.clone() {
            if !self.filled.contains(&t) {
                let pieces = self.pieces_default(t)?;
                self.set_pieces(t, pieces);
            }
        }
        Ok(())
    }

    /// Seals the rewrite: repairs side labels (surviving bits win), restores
    /// canonical curve order, and validates the result.
    pub fn finish(mut self) -> Result<Rewritten> {
        for &t in &self.affected {
            if !self.filled.contains(&t) {
                return Err(Error::ValidationError(format!(
                    "tet {t}: rewrite left pieces unassigned"
                )));
            }
        }
        reconcile_labels_anchored(&mut self.pattern, &self.primary, &self.secondary)?;

        // Label repair may flip curve bits, which participate in the curve
        // sort order. Re-sort and compose the permutation into the maps.
        let (perms, _) = restore_curve_order(&mut self.pattern)?;
        for (c, perm) in perms.iter().enumerate() {
            if let Some(perm) = perm {
                for (_, map) in self.curve_maps[c].iter_mut() {
                    *map = perm[*map];
                }
                for slot in self.added_curves[c].iter_mut() {
                    *slot = perm[*slot];
                }
            }
        }

        self.pattern.normalize_storage();
        self.pattern.validate()?;
        Ok(Rewritten {
            pattern: self.pattern,
            edge_maps: self.edge_maps,
            arc_maps: self.arc_maps,
            added_arcs: self.added_arcs,
            curve_maps: self.curve_maps,
            added_curves: self.added_curves,
        })
    }
}

/// Restores canonical curve storage order after side bits may have changed,
/// remapping piece circle indices in every touched tet. Returns the per-face
/// curve permutations (old position -> new position) and, per touched tet,
/// the circle renumbering.
pub(crate) fn restore_curve_order(
    pattern: &mut TransversePattern,
) -> Result<(Vec<Option<Vec<usize>>>, BTreeMap<usize, Vec<usize>>)> {
    let n_faces = pattern.faces.len();
    let mut perms: Vec<Option<Vec<usize>>> = vec![None; n_faces];
    let mut any = false;
    for (c, fp) in pattern.faces.iter().enumerate() {
        let closed = &fp.closed;
        let mut order: Vec<usize> = (0..closed.len()).collect();
        order.sort_by_key(|&i| (closed[i], i));
        if order.iter().enumerate().any(|(pos, &i)| pos != i) {
            // perm[old position] = new position
            let mut perm = vec![0usize; order.len()];
            for (pos, &i) in order.iter().enumerate() {
                perm[i] = pos;
            }
            perms[c] = Some(perm);
            any = true;
        }
    }
    if !any {
        return Ok((perms, BTreeMap::new()));
    }

    let tri = pattern.tri.clone();
    let mut tets = BTreeSet::new();
    for (c, perm) in perms.iter().enumerate() {
        if perm.is_some() {
            for &(t, _) in tri.face_incidences(c) {
                tets.insert(t);
            }
        }
    }
    // Skeletons of the touched tets before the curve lists change; face
    // geometry ignores curves, so it stays valid across the permutation.
    let mut geoms = Vec::with_capacity(n_faces);
    for (c, fp) in pattern.faces.iter().enumerate() {
        geoms.push(FaceGeometry::build(&tri, c, fp, &pattern.edge_points)?);
    }
    let mut before = BTreeMap::new();
    for &t in &tets {
        before.insert(t, tet_skeleton(pattern, t, &geoms)?);
    }

    for (c, perm) in perms.iter().enumerate() {
        if let Some(perm) = perm {
            let closed = &mut pattern.faces[c].closed;
            let mut next = closed.clone();
            for (i, cv) in closed.iter().enumerate() {
                next[perm[i]] = *cv;
            }
            *closed = next;
        }
    }

    // Re-derive each touched tet's circles and carry pieces across by item
    // identity.
    let mut circle_maps = BTreeMap::new();
    for &t in &tets {
        let after = tet_skeleton(pattern, t, &geoms)?;
        let remap_item = |it: &CircleItem| -> CircleItem {
            match *it {
                CircleItem::Closed { face, curve } => {
                    let c = tri.face_class(t, face);
                    match &perms[c] {
                        Some(p) => CircleItem::Closed {
                            face,
                            curve: p[curve],
                        },
                        None => *it,
                    }
                }
                other => other,
            }
        };
        let mut new_by_key: BTreeMap<BTreeSet<CircleItem>, usize> = BTreeMap::new();
        for (nc, circle) in after.circles.iter().enumerate() {
            new_by_key.insert(circle.items.iter().copied().collect(), nc);
        }
        let old_skel = &before[&t];
        let mut circle_map = vec![usize::MAX; old_skel.circles.len()];
        for (oc, circle) in old_skel.circles.iter().enumerate() {
            let remapped: BTreeSet<CircleItem> = circle.items.iter().map(&remap_item).collect();
            circle_map[oc] = *new_by_key.get(&remapped).ok_or_else(|| {
                Error::ValidationError(format!("tet {t}: circle lost while restoring curve order"))
            })?;
        }
        for piece in pattern.tets[t].pieces.iter_mut() {
            match piece {
                Piece::Disc { circle } => *circle = circle_map[*circle],
                Piece::Annulus { circles } => {
                    let a = circle_map[circles[0]];
                    let b = circle_map[circles[1]];
                    *circles = [a.min(b), a.max(b)];
                }
            }
        }
        circle_maps.insert(t, circle_map);
    }
    Ok((perms, circle_maps))
}
