//! Face-local combinatorics. A face class is drawn as a triangle with local
//! vertices 0,1,2 (the ascending vertices of its first incidence); local edge
//! `l` is opposite local vertex `l`. The boundary walk visits local edges in
//! the order [2, 0, 1], traversing edge `l` from local vertex (l+1)%3 to
//! (l+2)%3, which orients the boundary counterclockwise.

use super::{FacePattern, TransversePattern};
use crate::error::{Error, Result};
use crate::tricomplex::{edge_index, Triangulation, FACE_VERTICES};

/// Walk order of local edges around the face boundary.
pub(crate) const WALK_EDGES: [u8; 3] = [2, 0, 1];

/// One incidence of the face class in a tet.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IncGeom {
    pub tet: usize,
    pub face: u8,
    /// Tet-local edge index underlying face-local edge l.
    pub tet_edge: [u8; 3],
}

/// Boundary positions, chords, and chord-complement regions of one face.
#[derive(Debug, Clone)]
pub(crate) struct FaceGeometry {
    pub class: usize,
    pub incidences: Vec<IncGeom>,
    pub edge_class: [usize; 3],
    /// Points on each local edge.
    pub w: [u32; 3],
    /// Whether the boundary walk along local edge l runs in the direction of
    /// increasing global point index.
    pub fwd: [bool; 3],
    /// Total boundary positions.
    pub n: u32,
    /// First position of each local edge's segment in the walk.
    pub offset: [u32; 3],
    /// Chord endpoint positions per arc (aligned with the pattern arc list).
    pub chords: Vec<(u32, u32)>,
    /// Chord index occupying each position.
    pub chord_at: Vec<usize>,
    pub n_regions: usize,
    region_of_gap_: Vec<usize>,
}

/// True when cyclic index g lies in the half-open interval [a, b) mod n.
pub(crate) fn in_cyclic_interval(g: u32, a: u32, b: u32) -> bool {
    if a < b {
        a <= g && g < b
    } else {
        g >= a || g < b
    }
}

/// Boundary frame of a face: positions, walk directions, and incidences,
/// independent of any drawn arcs.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    pub incidences: Vec<IncGeom>,
    pub edge_class: [usize; 3],
    pub w: [u32; 3],
    pub fwd: [bool; 3],
    pub offset: [u32; 3],
    pub n: u32,
}

impl Frame {
    pub fn pos(&self, l: u8, p: u32) -> u32 {
        let l = l as usize;
        self.offset[l] + if self.fwd[l] { p } else { self.w[l] - 1 - p }
    }

    pub fn point_at(&self, pos: u32) -> (u8, u32) {
        for l in 0..3u8 {
            let li = l as usize;
            if pos >= self.offset[li] && pos < self.offset[li] + self.w[li] {
                let off = pos - self.offset[li];
                let p = if self.fwd[li] {
                    off
                } else {
                    self.w[li] - 1 - off
                };
                return (l, p);
            }
        }
        panic!("position out of range");
    }
}

pub(crate) fn face_frame(tri: &Triangulation, class: usize, edge_points: &[u32]) -> Result<Frame> {
    let slots = tri.face_incidences(class);
    let mut incidences = Vec::with_capacity(2);
    let (t0, k0) = slots[0];
    let a = FACE_VERTICES[k0 as usize];
    let local_pair = |l: usize| -> (u8, u8) { (a[(l + 1) % 3], a[(l + 2) % 3]) };
    let rep_edges: [u8; 3] = std::array::from_fn(|l| {
        let (u, v) = local_pair(l);
        edge_index(u, v)
    });
    incidences.push(IncGeom {
        tet: t0,
        face: k0,
        tet_edge: rep_edges,
    });
    let g = tri.gluing(t0, k0);
    if (g.tet, g.face) != (t0, k0) {
        let image_edges: [u8; 3] = std::array::from_fn(|l| {
            let (u, v) = local_pair(l);
            edge_index(g.vmap[u as usize], g.vmap[v as usize])
        });
        incidences.push(IncGeom {
            tet: g.tet,
            face: g.face,
            tet_edge: image_edges,
        });
    }

    let edge_class: [usize; 3] = std::array::from_fn(|l| tri.edge_class(t0, rep_edges[l]));
    let w: [u32; 3] = std::array::from_fn(|l| edge_points[edge_class[l]]);
    let mut fwd = [false; 3];
    for l in 0..3 {
        let (u, v) = local_pair(l);
        if tri.edge_reversed(edge_class[l]) && w[l] > 0 {
            return Err(Error::ValidationError(format!(
                "edge class {} carries points but identifies its two directions",
                edge_class[l]
            )));
        }
        let sign = tri.edge_sign(t0, rep_edges[l]);
        fwd[l] = if u < v { sign > 0 } else { sign < 0 };
    }

    let mut offset = [0u32; 3];
    let mut acc = 0;
    for &l in &WALK_EDGES {
        offset[l as usize] = acc;
        acc += w[l as usize];
    }
    Ok(Frame {
        incidences,
        edge_class,
        w,
        fwd,
        offset,
        n: acc,
    })
}

impl FaceGeometry {
    pub fn build(
        tri: &Triangulation,
        class: usize,
        fp: &FacePattern,
        edge_points: &[u32],
    ) -> Result<FaceGeometry> {
        let frame = face_frame(tri, class, edge_points)?;
        let Frame {
            incidences,
            edge_class,
            w,
            fwd,
            offset,
            n,
        } = frame.clone();
        let pos = |l: u8, p: u32| -> u32 { frame.pos(l, p) };

        let mut chords = Vec::with_capacity(fp.arcs.len());
        let mut chord_at = vec![usize::MAX; n as usize];
        for (i, arc) in fp.arcs.iter().enumerate() {
            let mut ps = [0u32; 2];
            for (j, end) in arc.ends.iter().enumerate() {
                if end.local_edge > 2 || end.point >= w[end.local_edge as usize] {
                    return Err(Error::ValidationError(format!(
                        "face {class}: arc end ({}, {}) out of range",
                        end.local_edge, end.point
                    )));
                }
                ps[j] = pos(end.local_edge, end.point);
            }
            for &p in &ps {
                if chord_at[p as usize] != usize::MAX {
                    return Err(Error::ValidationError(format!(
                        "face {class}: boundary position {p} used by two arcs"
                    )));
                }
                chord_at[p as usize] = i;
            }
            if ps[0] == ps[1] {
                return Err(Error::ValidationError(format!(
                    "face {class}: arc with both ends at position {}",
                    ps[0]
                )));
            }
            chords.push((ps[0], ps[1]));
        }
        if let Some(free) = chord_at.iter().position(|&c| c == usize::MAX) {
            return Err(Error::ValidationError(format!(
                "face {class}: boundary position {free} is not an arc end"
            )));
        }

        // Non-crossing check: endpoints of two chords must not interleave.
        for i in 0..chords.len() {
            for j in (i + 1)..chords.len() {
                let (a1, b1) = chords[i];
                let (a2, b2) = chords[j];
                if in_cyclic_interval(a2, a1, b1) != in_cyclic_interval(b2, a1, b1) {
                    return Err(Error::ValidationError(format!(
                        "face {class}: arcs {i} and {j} cross"
                    )));
                }
            }
        }

        // Regions: gaps grouped by which side of every chord they lie on.
        let (n_regions, region_of_gap_) = if n == 0 {
            (1, Vec::new())
        } else {
            let sig = |gap: u32| -> Vec<bool> {
                chords
                    .iter()
                    .map(|&(a, b)| in_cyclic_interval(gap, a, b))
                    .collect()
            };
            let mut ids: Vec<usize> = Vec::with_capacity(n as usize);
            let mut seen: Vec<Vec<bool>> = Vec::new();
            for g in 0..n {
                let s = sig(g);
                match seen.iter().position(|x| *x == s) {
                    Some(i) => ids.push(i),
                    None => {
                        ids.push(seen.len());
                        seen.push(s);
                    }
                }
            }
            (seen.len(), ids)
        };

        Ok(FaceGeometry {
            class,
            incidences,
            edge_class,
            w,
            fwd,
            n,
            offset,
            chords,
            chord_at,
            n_regions,
            region_of_gap_,
        })
    }

    /// Boundary position of a point on a local edge.
    pub fn pos(&self, l: u8, p: u32) -> u32 {
        let l = l as usize;
        self.offset[l] + if self.fwd[l] { p } else { self.w[l] - 1 - p }
    }

    /// Inverse of `pos`: the (local edge, point) at a boundary position.
    pub fn point_at(&self, pos: u32) -> (u8, u32) {
        for &l in &WALK_EDGES {
            let li = l as usize;
            if pos >= self.offset[li] && pos < self.offset[li] + self.w[li] {
                let m = pos - self.offset[li];
                let p = if self.fwd[li] { m } else { self.w[li] - 1 - m };
                return (l, p);
            }
        }
        unreachable!("position out of range")
    }

    /// Region containing the cyclic gap after `gap_pos` (between positions
    /// gap_pos and gap_pos+1).
    pub fn region_of_gap(&self, gap: u32) -> usize {
        if self.n == 0 {
            0
        } else {
            self.region_of_gap_[gap as usize]
        }
    }

    /// The cyclic gap covering edge gap i (between global points i-1 and i,
    /// with 0 the tail gap and w the head gap) of local edge l. None when the
    /// whole face boundary has no points.
    pub fn cyclic_gap_of_edge_gap(&self, l: u8, i: u32) -> Option<u32> {
        if self.n == 0 {
            return None;
        }
        let li = l as usize;
        let wl = self.w[li];
        let j = if self.fwd[li] { i } else { wl - i }; // walk-order gap
        Some(if j == 0 {
            (self.offset[li] + self.n - 1) % self.n
        } else {
            self.offset[li] + j - 1
        })
    }

    /// Region touching edge gap (l, i).
    pub fn region_of_edge_gap(&self, l: u8, i: u32) -> usize {
        match self.cyclic_gap_of_edge_gap(l, i) {
            Some(g) => self.region_of_gap(g),
            None => 0,
        }
    }

    /// Canonical anchor of a region: smallest (local edge, edge gap) touching
    /// it.
    pub fn region_anchor(&self, region: usize) -> (u8, u32) {
        for l in 0..3u8 {
            for i in 0..=self.w[l as usize] {
                if self.region_of_edge_gap(l, i) == region {
                    return (l, i);
                }
            }
        }
        unreachable!("every region touches some edge gap")
    }

    /// The two regions flanking a chord: (side containing gap a, side
    /// containing gap b) for chord (a, b).
    pub fn chord_regions(&self, chord: usize) -> (usize, usize) {
        let (a, b) = self.chords[chord];
        (self.region_of_gap(a), self.region_of_gap(b))
    }

    /// Walks the boundary of the region containing `start_gap`: repeatedly
    /// step to the next position, traverse its chord to the other end, and
    /// continue from the gap there. Returns the gap cycle and the chords
    /// crossed after each gap.
    pub fn region_boundary(&self, start_gap: u32) -> (Vec<u32>, Vec<usize>) {
        let mut gaps = Vec::new();
        let mut chords = Vec::new();
        let mut g = start_gap;
        loop {
            gaps.push(g);
            let entry = (g + 1) % self.n;
            let c = self.chord_at[entry as usize];
            chords.push(c);
            let (a, b) = self.chords[c];
            g = if a == entry { b } else { a };
            if g == start_gap {
                break;
            }
            debug_assert!(gaps.len() <= self.n as usize);
        }
        (gaps, chords)
    }

    /// All edge gaps (l, i) whose region is `region`, ascending.
    pub fn region_edge_gaps(&self, region: usize) -> Vec<(u8, u32)> {
        let mut out = Vec::new();
        for l in 0..3u8 {
            for i in 0..=self.w[l as usize] {
                if self.region_of_edge_gap(l, i) == region {
                    out.push((l, i));
                }
            }
        }
        out
    }
}

impl TransversePattern {
    pub(crate) fn face_geometry(&self, class: usize) -> Result<FaceGeometry> {
        FaceGeometry::build(&self.tri, class, &self.faces[class], &self.edge_points)
    }
}
