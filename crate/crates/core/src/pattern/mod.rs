//! Transverse surface patterns: an embedded closed surface recorded by its
//! intersection with the 2-skeleton. Each edge class carries a count of
//! crossing points with a normal-direction bit per point; each face class
//! carries chords between edge points plus closed interior curves; each tet
//! records how the resulting boundary circles bound pieces (discs, or one
//! tube annulus) inside it.

mod build;
mod canon;
mod enumerate;
mod facegeom;
mod orient;
#[cfg(test)]
mod tests;
mod tetgeom;
mod topology;
mod validate;

pub use build::{from_normal_vector, parallel_double, vertex_link_pattern};
pub use canon::{canonical_class, canonical_digest, canonicalize, CanonicalClass};
pub use enumerate::{enumerate_classes, EnumLimits, EnumMode};
pub use orient::solve_orientations;
pub use topology::{surface_topology, ComponentTopology, SurfaceTopology};

pub(crate) use topology::surface_topology_from;

pub(crate) use facegeom::{face_frame, in_cyclic_interval, FaceGeometry};
pub(crate) use orient::{reconcile_labels, reconcile_labels_anchored, OrientSystem};
#[allow(unused_imports)]
pub(crate) use tetgeom::{
    tet_skeleton, Analysis, BdyElem, Circle, CircleItem, OrientVar, TetGeometry, TetSkeleton,
    Token,
};

use crate::tricomplex::Triangulation;
use std::sync::Arc;

/// One endpoint of a chord: a point on one of the face's three local edges.
/// Local edge `l` is opposite local vertex `l`; points are indexed along the
/// underlying edge class's orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcEnd {
    pub local_edge: u8,
    pub point: u32,
}

impl ArcEnd {
    pub fn new(local_edge: u8, point: u32) -> Self {
        ArcEnd { local_edge, point }
    }
}

/// A chord across a face, stored with its endpoints sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceArc {
    pub ends: [ArcEnd; 2],
}

impl FaceArc {
    pub fn new(a: ArcEnd, b: ArcEnd) -> Self {
        if a <= b {
            FaceArc { ends: [a, b] }
        } else {
            FaceArc { ends: [b, a] }
        }
    }
}

/// A closed curve in the interior of a face, lying in the chord-complement
/// region touching `anchor` = (local edge, edge gap index). The curve bounds
/// its inner disc (the side free of the face boundary); `side_toward` is true
/// when the surface normal along the curve points into that inner disc.
/// Nested curves are not representable: every curve's inner disc is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedCurve {
    pub anchor: (u8, u32),
    pub side_toward: bool,
}

/// Intersection with one face class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FacePattern {
    /// Sorted; each boundary point of the face is the end of exactly one arc.
    pub arcs: Vec<FaceArc>,
    /// Sorted by (anchor, side bit).
    pub closed: Vec<ClosedCurve>,
}

/// How the boundary circles in one tet bound sheets inside it. Circle
/// indices refer to the tet's derived circle list in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Piece {
    Disc {
        circle: usize,
    },
    /// An unknotted tube cobounding with the region of the tet boundary
    /// between its two circles.
    Annulus {
        circles: [usize; 2],
    },
}

impl Piece {
    pub fn circles(&self) -> &[usize] {
        match self {
            Piece::Disc { circle } => std::slice::from_ref(circle),
            Piece::Annulus { circles } => circles,
        }
    }

    pub fn is_disc(&self) -> bool {
        matches!(self, Piece::Disc { .. })
    }
}

/// Pieces of one tet, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TetPattern {
    pub pieces: Vec<Piece>,
}

/// Coarse shape of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    /// Every piece is a disc and no face carries a closed curve.
    Normal,
    /// No closed curves, at least one tube annulus.
    AlmostNormal,
    /// Some face carries a closed curve.
    Transient,
}

/// A transverse surface pattern over a fixed triangulation.
#[derive(Debug, Clone)]
pub struct TransversePattern {
    pub tri: Arc<Triangulation>,
    /// Points per edge class.
    pub edge_points: Vec<u32>,
    /// Normal-direction bit per edge point: true when the surface normal at
    /// that point agrees with the edge class orientation (tail to head).
    pub point_dirs: Vec<Vec<bool>>,
    /// Per face class.
    pub faces: Vec<FacePattern>,
    /// Per tet.
    pub tets: Vec<TetPattern>,
}

impl PartialEq for TransversePattern {
    fn eq(&self, other: &Self) -> bool {
        self.tri.canonical_hash() == other.tri.canonical_hash()
            && self.edge_points == other.edge_points
            && self.point_dirs == other.point_dirs
            && self.faces == other.faces
            && self.tets == other.tets
    }
}

impl Eq for TransversePattern {}

impl TransversePattern {
    /// An empty pattern (no surface) over the triangulation.
    pub fn empty(tri: Arc<Triangulation>) -> Self {
        TransversePattern {
            edge_points: vec![0; tri.edge_count()],
            point_dirs: vec![Vec::new(); tri.edge_count()],
            faces: vec![FacePattern::default(); tri.face_count()],
            tets: vec![TetPattern::default(); tri.tet_count()],
            tri,
        }
    }

    /// Total number of edge crossings.
    pub fn weight(&self) -> u64 {
        self.edge_points.iter().map(|&w| w as u64).sum()
    }

    pub fn arc_total(&self) -> usize {
        self.faces.iter().map(|f| f.arcs.len()).sum()
    }

    pub fn closed_total(&self) -> usize {
        self.faces.iter().map(|f| f.closed.len()).sum()
    }

    pub fn disc_total(&self) -> usize {
        self.tets
            .iter()
            .flat_map(|t| t.pieces.iter())
            .filter(|p| p.is_disc())
            .count()
    }

    pub fn annulus_total(&self) -> usize {
        self.tets
            .iter()
            .flat_map(|t| t.pieces.iter())
            .filter(|p| !p.is_disc())
            .count()
    }

    pub fn grade(&self) -> Grade {
        if self.closed_total() > 0 {
            Grade::Transient
        } else if self.annulus_total() > 0 {
            Grade::AlmostNormal
        } else {
            Grade::Normal
        }
    }

    /// Euler characteristic of the pattern surface: edge points are the
    /// vertices, chords the edges, disc pieces the faces. Closed face
    /// curves and tube annuli pair a circle edge with a cylinder and
    /// contribute zero.
    pub fn euler_characteristic(&self) -> i64 {
        self.weight() as i64 - self.arc_total() as i64 + self.disc_total() as i64
    }

    /// Restores canonical storage order after in-place edits.
    pub(crate) fn normalize_storage(&mut self) {
        for f in &mut self.faces {
            for a in &mut f.arcs {
                if a.ends[0] > a.ends[1] {
                    a.ends.swap(0, 1);
                }
            }
            f.arcs.sort_unstable();
            f.closed.sort_unstable();
        }
        for t in &mut self.tets {
            t.pieces.sort_unstable();
        }
    }
}
