//! Tet-level geometry: the pattern's circles on the boundary sphere of one
//! tet, the complementary regions of those circles, and the chambers the
//! pieces cut the tet into.
//!
//! Boundary regions are assembled from face-level chord regions: pieces of
//! faces join across edge gaps, every closed curve carves its inner disc out
//! of the face region containing it, and nothing joins across a circle. One
//! chamber corresponds to one group of boundary regions; the only pieces
//! that connect two boundary regions into a single chamber are tube annuli
//! (through the channel between their far sides).

use super::{FaceGeometry, Piece, TransversePattern};
use crate::error::{Error, Result};
use crate::tricomplex::faces_of_edge;

/// A tet-local edge index paired with a global point index on that edge.
pub(crate) type Port = (u8, u32);
use crate::uf::UnionFind;
use std::collections::BTreeMap;

/// One step of a circle: either a chord crossing a face or a closed face
/// curve (which forms a circle on its own).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum CircleItem {
    Arc { face: u8, arc: usize },
    Closed { face: u8, curve: usize },
}

/// Canonical-word token. Arc circles are identified by their edge-crossing
/// ports; closed curves by their face slot and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Token {
    Port { edge: u8, point: u32 },
    Closed { face: u8, curve: usize },
}

/// The orientation variable controlling a circle's facing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum OrientVar {
    Point { edge_class: usize, point: u32 },
    Curve { face_class: usize, curve: usize },
}

/// A boundary circle of the pattern in one tet, in canonical traversal
/// alignment (the word is minimal over rotation and reflection).
#[derive(Debug, Clone)]
pub(crate) struct Circle {
    pub word: Vec<Token>,
    pub items: Vec<CircleItem>,
    /// Exit port after each item (tet-local edge, global point); empty for
    /// closed-curve circles.
    pub ports: Vec<Port>,
    /// Boundary regions on the two sides, indexed by the value of the
    /// representative orientation bit: `sides[d]` is the region the surface
    /// normal points into when `rep_var`'s bit is `d`.
    pub sides: [usize; 2],
    pub rep_var: OrientVar,
}

/// An element of the boundary-region decomposition on one face slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum BdyElem {
    /// A chord-complement region of the face, minus any inner discs.
    Outer { face: u8, region: usize },
    /// The inner disc of a closed curve.
    Inner { face: u8, curve: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct TetGeometry {
    pub tet: usize,
    pub circles: Vec<Circle>,
    /// Boundary-region id per element.
    pub elem_region: BTreeMap<BdyElem, usize>,
    pub n_regions: usize,
    /// Chamber id per boundary region.
    pub chamber_of: Vec<usize>,
    pub n_chambers: usize,
    /// For the tet's annulus (if any): (piece index, between-region).
    pub annulus_between: Option<(usize, usize)>,
    /// Face-local edge of slot k corresponding to tet edge e, as
    /// `face_edge[k][e] = Some(l)`.
    pub face_edge: [[Option<u8>; 6]; 4],
}

fn min_rotation_key(tokens: &[Token]) -> (Vec<Token>, usize) {
    let m = tokens.len();
    let mut best = 0usize;
    for r in 1..m {
        for i in 0..m {
            let a = &tokens[(r + i) % m];
            let b = &tokens[(best + i) % m];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    best = r;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let rotated = (0..m).map(|i| tokens[(best + i) % m]).collect();
    (rotated, best)
}

/// Circles and boundary regions of one tet, before pieces are assigned.
/// Builders use this to attach pieces to freshly derived circles.
#[derive(Debug, Clone)]
pub(crate) struct TetSkeleton {
    pub circles: Vec<Circle>,
    pub elem_region: BTreeMap<BdyElem, usize>,
    pub n_regions: usize,
    pub face_edge: [[Option<u8>; 6]; 4],
}

pub(crate) fn tet_skeleton(
    pattern: &TransversePattern,
    tet: usize,
    face_geoms: &[FaceGeometry],
) -> Result<TetSkeleton> {
    let tri = &pattern.tri;
    let class_of = |k: u8| tri.face_class(tet, k);

    // Locate this tet's slot inside each face class and the face-local
    // edge carried by each tet edge.
    let mut inc_idx = [usize::MAX; 4];
    let mut face_edge = [[None; 6]; 4];
    for k in 0..4u8 {
        let fg = &face_geoms[class_of(k)];
        let idx = fg
            .incidences
            .iter()
            .position(|inc| inc.tet == tet && inc.face == k)
            .ok_or_else(|| {
                Error::ValidationError(format!(
                    "face class {} does not list incidence ({tet}, {k})",
                    fg.class
                ))
            })?;
        if fg.incidences.len() < 2
            && (!pattern.faces[fg.class].arcs.is_empty()
                || !pattern.faces[fg.class].closed.is_empty())
        {
            return Err(Error::ValidationError(format!(
                "face class {} is identified with itself and cannot carry surface content",
                fg.class
            )));
        }
        inc_idx[k as usize] = idx;
        for l in 0..3usize {
            let e = fg.incidences[idx].tet_edge[l];
            face_edge[k as usize][e as usize] = Some(l as u8);
        }
    }

    // Ports: each edge point of the tet joins exactly two arc ends.
    let mut port_map: BTreeMap<Port, Vec<(u8, usize, usize)>> = BTreeMap::new();
    for k in 0..4u8 {
        let c = class_of(k);
        let fg = &face_geoms[c];
        let inc = &fg.incidences[inc_idx[k as usize]];
        for (ai, arc) in pattern.faces[c].arcs.iter().enumerate() {
            for (ei, end) in arc.ends.iter().enumerate() {
                let e = inc.tet_edge[end.local_edge as usize];
                port_map
                    .entry((e, end.point))
                    .or_default()
                    .push((k, ai, ei));
            }
        }
    }
    for e in 0..6u8 {
        let w = pattern.edge_points[tri.edge_class(tet, e)];
        for p in 0..w {
            match port_map.get(&(e, p)) {
                Some(v) if v.len() == 2 => {}
                v => {
                    return Err(Error::ValidationError(format!(
                        "tet {tet} edge {e} point {p}: expected 2 arc ends, found {}",
                        v.map_or(0, |v| v.len())
                    )))
                }
            }
        }
    }
    for (&(e, p), ends) in &port_map {
        let w = pattern.edge_points[tri.edge_class(tet, e)];
        if p >= w || ends.len() != 2 {
            return Err(Error::ValidationError(format!(
                "tet {tet} edge {e} point {p}: inconsistent arc ends"
            )));
        }
    }

    // Trace circles through the ports.
    let mut visited: BTreeMap<(u8, usize), bool> = BTreeMap::new();
    for k in 0..4u8 {
        for ai in 0..pattern.faces[class_of(k)].arcs.len() {
            visited.insert((k, ai), false);
        }
    }
    let mut raw_circles: Vec<(Vec<CircleItem>, Vec<Port>)> = Vec::new();
    let keys: Vec<(u8, usize)> = visited.keys().copied().collect();
    for start in keys {
        if visited[&start] {
            continue;
        }
        let mut items = Vec::new();
        let mut ports = Vec::new();
        let (mut k, mut ai) = start;
        // Enter the starting arc at its first end; exit at the other.
        let mut enter_end = 0usize;
        loop {
            visited.insert((k, ai), true);
            items.push(CircleItem::Arc { face: k, arc: ai });
            let c = class_of(k);
            let fg = &face_geoms[c];
            let inc = &fg.incidences[inc_idx[k as usize]];
            let exit = &pattern.faces[c].arcs[ai].ends[1 - enter_end];
            let e = inc.tet_edge[exit.local_edge as usize];
            let port = (e, exit.point);
            ports.push(port);
            let both = &port_map[&port];
            let exiting = (k, ai, 1 - enter_end);
            let (nk, nai, nei) = both
                .iter()
                .copied()
                .find(|&x| x != exiting)
                .ok_or_else(|| {
                    Error::ValidationError(format!(
                        "tet {tet}: port ({e}, {}) does not continue",
                        exit.point
                    ))
                })?;
            if (nk, nai, nei) == (start.0, start.1, 0) {
                // Closed up: back to the starting arc's entry end.
                break;
            }
            k = nk;
            ai = nai;
            enter_end = nei;
            if items.len() > visited.len() {
                return Err(Error::ValidationError(format!(
                    "tet {tet}: circle tracing did not terminate"
                )));
            }
        }
        raw_circles.push((items, ports));
    }
    // Closed curves are their own circles.
    for k in 0..4u8 {
        for ci in 0..pattern.faces[class_of(k)].closed.len() {
            raw_circles.push((vec![CircleItem::Closed { face: k, curve: ci }], Vec::new()));
        }
    }

    // Boundary-region elements and their union across edge gaps.
    let mut elems: Vec<BdyElem> = Vec::new();
    for k in 0..4u8 {
        let c = class_of(k);
        for r in 0..face_geoms[c].n_regions {
            elems.push(BdyElem::Outer { face: k, region: r });
        }
        for ci in 0..pattern.faces[c].closed.len() {
            elems.push(BdyElem::Inner { face: k, curve: ci });
        }
    }
    let elem_id: BTreeMap<BdyElem, usize> =
        elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut uf = UnionFind::new(elems.len());
    for e in 0..6u8 {
        let (ka, kb) = faces_of_edge(e);
        let w = pattern.edge_points[tri.edge_class(tet, e)];
        let la = face_edge[ka as usize][e as usize].unwrap();
        let lb = face_edge[kb as usize][e as usize].unwrap();
        let fga = &face_geoms[class_of(ka)];
        let fgb = &face_geoms[class_of(kb)];
        for i in 0..=w {
            let ra = fga.region_of_edge_gap(la, i);
            let rb = fgb.region_of_edge_gap(lb, i);
            uf.union(
                elem_id[&BdyElem::Outer {
                    face: ka,
                    region: ra,
                }],
                elem_id[&BdyElem::Outer {
                    face: kb,
                    region: rb,
                }],
            );
        }
    }
    let (region_ids, n_regions) = uf.number_classes();
    let elem_region: BTreeMap<BdyElem, usize> = elems
        .iter()
        .map(|&e| (e, region_ids[elem_id[&e]]))
        .collect();

    // Region on each side of every circle, indexed by the representative
    // orientation bit.
    let mut circles = Vec::with_capacity(raw_circles.len());
    for (items, ports) in raw_circles {
        let (word, sides, rep_var, items, ports) = match items[0] {
            CircleItem::Closed { face, curve } => {
                let c = class_of(face);
                let fg = &face_geoms[c];
                let anchor = pattern.faces[c].closed[curve].anchor;
                let outer_face_region = fg.region_of_edge_gap(anchor.0, anchor.1);
                let outer = elem_region[&BdyElem::Outer {
                    face,
                    region: outer_face_region,
                }];
                let inner = elem_region[&BdyElem::Inner { face, curve }];
                (
                    vec![Token::Closed { face, curve }],
                    // bit true points into the inner disc
                    [outer, inner],
                    OrientVar::Curve {
                        face_class: c,
                        curve,
                    },
                    items,
                    ports,
                )
            }
            CircleItem::Arc { .. } => {
                let tokens: Vec<Token> = ports
                    .iter()
                    .map(|&(e, p)| Token::Port { edge: e, point: p })
                    .collect();
                // Canonical alignment: minimal over rotation and
                // reflection, items kept in step.
                let (fwd_key, fwd_rot) = min_rotation_key(&tokens);
                let rev_tokens: Vec<Token> = tokens.iter().rev().copied().collect();
                let (rev_key, rev_rot) = min_rotation_key(&rev_tokens);
                let (word, items, ports) = if fwd_key <= rev_key {
                    let m = items.len();
                    let it: Vec<CircleItem> = (0..m).map(|i| items[(fwd_rot + i) % m]).collect();
                    let po: Vec<Port> = (0..m).map(|i| ports[(fwd_rot + i) % m]).collect();
                    (fwd_key, it, po)
                } else {
                    let m = items.len();
                    // Reversed traversal: arcs in order [0, m-1, ..., 1],
                    // exit ports reversed.
                    let rit: Vec<CircleItem> = (0..m).map(|i| items[(m - i) % m]).collect();
                    let rpo: Vec<Port> = (0..m).map(|i| ports[m - 1 - i]).collect();
                    let it: Vec<CircleItem> = (0..m).map(|i| rit[(rev_rot + i) % m]).collect();
                    let po: Vec<Port> = (0..m).map(|i| rpo[(rev_rot + i) % m]).collect();
                    (rev_key, it, po)
                };
                let (e0, p0) = ports[0];
                let (ka, _) = faces_of_edge(e0);
                let la = face_edge[ka as usize][e0 as usize].unwrap();
                let fga = &face_geoms[class_of(ka)];
                let tail = elem_region[&BdyElem::Outer {
                    face: ka,
                    region: fga.region_of_edge_gap(la, p0),
                }];
                let head = elem_region[&BdyElem::Outer {
                    face: ka,
                    region: fga.region_of_edge_gap(la, p0 + 1),
                }];
                let ec = tri.edge_class(tet, e0);
                (
                    word,
                    [tail, head],
                    OrientVar::Point {
                        edge_class: ec,
                        point: p0,
                    },
                    items,
                    ports,
                )
            }
        };
        circles.push(Circle {
            word,
            items,
            ports,
            sides,
            rep_var,
        });
    }
    circles.sort_by(|a, b| a.word.cmp(&b.word).then_with(|| a.items.cmp(&b.items)));

    Ok(TetSkeleton {
        circles,
        elem_region,
        n_regions,
        face_edge,
    })
}

impl TetGeometry {
    pub fn build(
        pattern: &TransversePattern,
        tet: usize,
        face_geoms: &[FaceGeometry],
    ) -> Result<TetGeometry> {
        let TetSkeleton {
            circles,
            elem_region,
            n_regions,
            face_edge,
        } = tet_skeleton(pattern, tet, face_geoms)?;

        // Pieces: every circle consumed once, at most one annulus, and the
        // annulus circles must cobound a region.
        let pieces = &pattern.tets[tet].pieces;
        let mut used = vec![false; circles.len()];
        let mut annuli = 0;
        let mut annulus_between = None;
        for (pi, piece) in pieces.iter().enumerate() {
            for &ci in piece.circles() {
                if ci >= circles.len() {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: piece references circle {ci} of {}",
                        circles.len()
                    )));
                }
                if used[ci] {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: circle {ci} bounds two pieces"
                    )));
                }
                used[ci] = true;
            }
            if let Piece::Annulus { circles: [c1, c2] } = *piece {
                annuli += 1;
                if annuli > 1 {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: more than one annulus"
                    )));
                }
                if c1 == c2 {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: annulus with both ends on one circle"
                    )));
                }
                let s1 = circles[c1].sides;
                let s2 = circles[c2].sides;
                let mut common = Vec::new();
                for x in s1 {
                    if s2.contains(&x) && !common.contains(&x) {
                        common.push(x);
                    }
                }
                if common.len() != 1 {
                    return Err(Error::ValidationError(format!(
                        "tet {tet}: annulus circles do not cobound a unique region"
                    )));
                }
                annulus_between = Some((pi, common[0]));
            }
        }
        if let Some(unused) = used.iter().position(|&u| !u) {
            return Err(Error::ValidationError(format!(
                "tet {tet}: circle {unused} bounds no piece"
            )));
        }

        // Chambers: boundary regions merge only through annulus channels
        // (the far sides of the two tube circles).
        let mut cuf = UnionFind::new(n_regions);
        if let Some((pi, between)) = annulus_between {
            if let Piece::Annulus { circles: [c1, c2] } = pieces[pi] {
                let far = |ci: usize| {
                    let s = circles[ci].sides;
                    if s[0] == between {
                        s[1]
                    } else {
                        s[0]
                    }
                };
                cuf.union(far(c1), far(c2));
            }
        }
        let (chamber_of, n_chambers) = cuf.number_classes();

        Ok(TetGeometry {
            tet,
            circles,
            elem_region,
            n_regions,
            chamber_of,
            n_chambers,
            annulus_between,
            face_edge,
        })
    }

    /// Index of the circle containing a given arc instance.
    pub fn circle_of_arc(&self, face: u8, arc: usize) -> Option<(usize, usize)> {
        for (ci, c) in self.circles.iter().enumerate() {
            for (ii, item) in c.items.iter().enumerate() {
                if *item == (CircleItem::Arc { face, arc }) {
                    return Some((ci, ii));
                }
            }
        }
        None
    }

    /// Index of the circle formed by a closed-curve instance.
    pub fn circle_of_closed(&self, face: u8, curve: usize) -> Option<usize> {
        self.circles
            .iter()
            .position(|c| c.items.len() == 1 && c.items[0] == (CircleItem::Closed { face, curve }))
    }

    /// The piece bounded by a circle.
    pub fn piece_of_circle(&self, pattern: &TransversePattern, circle: usize) -> usize {
        pattern.tets[self.tet]
            .pieces
            .iter()
            .position(|p| p.circles().contains(&circle))
            .expect("validated patterns consume every circle")
    }

    /// Pieces adjacent to a chamber (some circle side lies in it).
    pub fn chamber_pieces(&self, pattern: &TransversePattern, chamber: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (pi, piece) in pattern.tets[self.tet].pieces.iter().enumerate() {
            let touches = piece.circles().iter().any(|&ci| {
                self.circles[ci]
                    .sides
                    .iter()
                    .any(|&r| self.chamber_of[r] == chamber)
            });
            if touches {
                out.push(pi);
            }
        }
        out
    }
}

/// Whole-pattern geometry: per-face and per-tet.
#[derive(Debug, Clone)]
pub(crate) struct Analysis {
    pub faces: Vec<FaceGeometry>,
    pub tets: Vec<TetGeometry>,
}

impl TransversePattern {
    /// Builds all face and tet geometry, validating combinatorial structure
    /// along the way (orientation bits are checked separately).
    pub(crate) fn analyze(&self) -> Result<Analysis> {
        let mut faces = Vec::with_capacity(self.tri.face_count());
        for c in 0..self.tri.face_count() {
            faces.push(FaceGeometry::build(
                &self.tri,
                c,
                &self.faces[c],
                &self.edge_points,
            )?);
        }
        let mut tets = Vec::with_capacity(self.tri.tet_count());
        for t in 0..self.tri.tet_count() {
            tets.push(TetGeometry::build(self, t, &faces)?);
        }
        Ok(Analysis { faces, tets })
    }
}
