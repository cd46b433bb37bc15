//! Elementary moves on transverse patterns: passing a sheet through a vertex
//! (V0), through an edge (E1), through a face without or with a saddle
//! (F2a, F2b), and tubing two parallel pieces inside a tet (Pinch). Each move
//! is a small local rewrite with an exact inverse; `normalize` projects any
//! pattern onto a crudely (almost) normal class by compressing closed face
//! curves and splitting off spheres.

mod e1;
mod edit;
mod f2a;
mod f2b;
mod pinch;
mod project;
mod v0;

pub use pinch::tube;
pub use project::{convert_path, normalize, NormalizeOutcome};

#[allow(unused_imports)]
pub(crate) use project::{circle_bounds_disc, extract_components};

use crate::error::{Error, Result};
use crate::pattern::TransversePattern;
use crate::tricomplex::SimplexRef;

/// Move families. `E1Inverse`, `F2aInverse` and `PinchInverse` are the
/// reverse directions of their partners; V0 and F2b are self-inverse families
/// (the inverse is encoded in the selector).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    V0,
    E1,
    E1Inverse,
    F2a,
    F2aInverse,
    F2b,
    Pinch,
    PinchInverse,
}

impl MoveKind {
    pub fn token(self) -> &'static str {
        match self {
            MoveKind::V0 => "V0",
            MoveKind::E1 => "E1",
            MoveKind::E1Inverse => "E1inv",
            MoveKind::F2a => "F2a",
            MoveKind::F2aInverse => "F2ainv",
            MoveKind::F2b => "F2b",
            MoveKind::Pinch => "Pinch",
            MoveKind::PinchInverse => "Pinchinv",
        }
    }

    pub fn from_token(s: &str) -> Option<MoveKind> {
        Some(match s {
            "V0" => MoveKind::V0,
            "E1" => MoveKind::E1,
            "E1inv" => MoveKind::E1Inverse,
            "F2a" => MoveKind::F2a,
            "F2ainv" => MoveKind::F2aInverse,
            "F2b" => MoveKind::F2b,
            "Pinch" => MoveKind::Pinch,
            "Pinchinv" => MoveKind::PinchInverse,
            _ => return None,
        })
    }

    /// Required locus dimension.
    pub fn locus_dim(self) -> u8 {
        match self {
            MoveKind::V0 => 0,
            MoveKind::E1 | MoveKind::E1Inverse => 1,
            MoveKind::F2a | MoveKind::F2aInverse | MoveKind::F2b => 2,
            MoveKind::Pinch | MoveKind::PinchInverse => 3,
        }
    }
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// One end of an edge class: `head` picks the endpoint the class orientation
/// runs toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndRef {
    pub edge_class: usize,
    pub head: bool,
}

impl EndRef {
    pub fn new(edge_class: usize, head: bool) -> Self {
        EndRef { edge_class, head }
    }
}

/// Which local sheets take part in an F2b saddle. Indices refer to the locus
/// face class's arc and curve lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Participants {
    /// Two disjoint arcs sharing a region are re-matched the other way.
    Arcs(usize, usize),
    /// An arc sheds a closed curve into the region on `side` of its chord.
    ArcShed { arc: usize, side: u8 },
    /// An arc absorbs a closed curve lying in a region flanking its chord.
    ArcAbsorb { arc: usize, curve: usize },
    /// Two closed curves in one region merge; `label` sides the result.
    CurveMerge { a: usize, b: usize, label: bool },
    /// A closed curve splits in two; `label` sides the first copy.
    CurveSplit { curve: usize, label: bool },
}

/// Local configuration a move acts on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Selector {
    /// V0: the edge ends whose nearest crossing points the vertex consumes
    /// ("down"); the rest gain a new nearest point. An empty list creates a
    /// full vertex link with side `label`; the full list collapses one.
    Vertex { down: Vec<EndRef>, label: bool },
    /// E1 forward: wrap a sheet around the edge. Two points are inserted in
    /// `gap`; on fan wall `wall` the arc `arc` splits around them, every
    /// other wall gains a returning arc.
    EdgeUp { gap: u32, wall: usize, arc: usize },
    /// E1 inverse: remove the sheet wrapping the edge at points
    /// `point, point+1`, re-merging through fan wall `wall`.
    EdgeDown { point: u32, wall: usize },
    /// F2a forward: push disc `piece` of the side-`side` tet through the
    /// face region anchored at `region`, leaving a closed curve.
    FacePush {
        side: u8,
        piece: usize,
        region: (u8, u32),
    },
    /// F2a inverse: pull closed curve `curve` flat through the face.
    FacePull { curve: usize },
    /// F2b: saddle across the face; the sheet moves away from incidence
    /// `from` (where the participants bound one piece).
    FaceSaddle { from: u8, participants: Participants },
    /// Pinch: tube two parallel disc pieces of the locus tet together.
    TetTube { pieces: [usize; 2] },
    /// Pinch inverse: split annulus `piece` back into two discs. `flip`
    /// restores the side labels of the component that re-orienting the tube
    /// had flipped: it names one of the annulus' two circles (0 = lower
    /// index) whose label component flips back.
    TetUntube { piece: usize, flip: Option<u8> },
}

/// An elementary move: a family, the simplex it happens at, and the local
/// configuration it consumes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub locus: SimplexRef,
    pub selector: Selector,
}

impl Move {
    pub fn new(kind: MoveKind, locus: SimplexRef, selector: Selector) -> Self {
        Move {
            kind,
            locus,
            selector,
        }
    }
}

fn locus_check(p: &TransversePattern, m: &Move) -> Result<()> {
    if m.locus.dim != m.kind.locus_dim() {
        return Err(Error::MoveNotApplicable {
            reason: format!(
                "{} expects a dimension-{} locus, got {}",
                m.kind,
                m.kind.locus_dim(),
                m.locus
            ),
        });
    }
    p.tri.check_simplex(m.locus).map_err(|_| {
        Error::MoveNotApplicable {
            reason: format!("locus {} does not exist", m.locus),
        }
    })
}

/// Applies `m` to `p`, also returning the move that undoes it.
///
/// Applying the returned inverse to the output reproduces `p` exactly
/// (including side labels), not merely up to isotopy.
pub fn apply_move_with_inverse(
    p: &TransversePattern,
    m: &Move,
) -> Result<(TransversePattern, Move)> {
    p.validate()?;
    locus_check(p, m)?;
    let result = match (&m.kind, &m.selector) {
        (MoveKind::V0, Selector::Vertex { down, label }) => {
            v0::apply(p, m.locus.index, down, *label)
        }
        (MoveKind::E1, Selector::EdgeUp { gap, wall, arc }) => {
            e1::apply_up(p, m.locus.index, *gap, *wall, *arc)
        }
        (MoveKind::E1Inverse, Selector::EdgeDown { point, wall }) => {
            e1::apply_down(p, m.locus.index, *point, *wall)
        }
        (MoveKind::F2a, Selector::FacePush {
            side,
            piece,
            region,
        }) => f2a::apply_push(p, m.locus.index, *side, *piece, *region),
        (MoveKind::F2aInverse, Selector::FacePull { curve }) => {
            f2a::apply_pull(p, m.locus.index, *curve)
        }
        (MoveKind::F2b, Selector::FaceSaddle { from, participants }) => {
            f2b::apply(p, m.locus.index, *from, *participants)
        }
        (MoveKind::Pinch, Selector::TetTube { pieces }) => {
            pinch::apply_tube(p, m.locus.index, *pieces)
        }
        (MoveKind::PinchInverse, Selector::TetUntube { piece, flip }) => {
            pinch::apply_untube(p, m.locus.index, *piece, *flip)
        }
        _ => Err(Error::MoveNotApplicable {
            reason: format!("selector does not fit move kind {}", m.kind),
        }),
    };
    match result {
        Ok(out) => Ok(out),
        // Structurally impossible rewrites surface as validation failures of
        // the attempted edit; at this layer they mean "not applicable".
        Err(Error::ValidationError(reason)) => Err(Error::MoveNotApplicable { reason }),
        Err(e) => Err(e),
    }
}

/// Applies `m` to `p`.
pub fn apply_move(p: &TransversePattern, m: &Move) -> Result<TransversePattern> {
    apply_move_with_inverse(p, m).map(|(out, _)| out)
}

/// Every move applicable to `p`, in deterministic order: V0 moves by vertex,
/// E1 by edge, E1 inverses, F2a, F2a inverses, F2b by face, then pinches and
/// un-pinches by tet. Each candidate has been dry-run, so applying any
/// returned move succeeds.
pub fn applicable_moves(p: &TransversePattern) -> Result<Vec<Move>> {
    p.validate()?;
    let analysis = p.analyze()?;
    let mut cands = Vec::new();
    v0::candidates(p, &analysis, &mut cands)?;
    e1::candidates(p, &analysis, &mut cands)?;
    f2a::candidates(p, &analysis, &mut cands)?;
    f2b::candidates(p, &analysis, &mut cands)?;
    pinch::candidates(p, &analysis, &mut cands)?;
    let mut out = Vec::with_capacity(cands.len());
    for m in cands {
        match apply_move_with_inverse(p, &m) {
            Ok(_) => out.push(m),
            Err(Error::MoveNotApplicable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
