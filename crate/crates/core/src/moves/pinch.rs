//! Tubing two parallel discs inside a tet and the reverse compression. The
//! tube replaces two disc pieces whose boundary circles cobound a region of
//! the tet boundary with one annulus; as a move it must join a sphere
//! component to another component, and untubing must split one back off.

use super::edit::restore_curve_order;
use super::{Move, MoveKind, Selector};
use crate::error::{Error, Result};
use crate::pattern::{
    reconcile_labels, surface_topology, Analysis, OrientSystem, OrientVar, Piece,
    TransversePattern,
};
use crate::tricomplex::SimplexRef;

/// Curve-list permutations per face, as returned by the reorder pass.
type CurvePerms = Vec<Option<Vec<usize>>>;

fn disc_circle(p: &TransversePattern, tet: usize, piece: usize) -> Result<usize> {
    match p.tets[tet].pieces.get(piece) {
        Some(Piece::Disc { circle }) => Ok(*circle),
        Some(Piece::Annulus { .. }) => Err(Error::ValidationError(format!(
            "piece {piece} of tet {tet} is already a tube"
        ))),
        None => Err(Error::ValidationError(format!(
            "tet {tet} has no piece {piece}"
        ))),
    }
}

fn tube_core(
    p: &TransversePattern,
    tet: usize,
    a: usize,
    b: usize,
) -> Result<(TransversePattern, CurvePerms)> {
    if a == b {
        return Err(Error::ValidationError(
            "a tube needs two distinct discs".into(),
        ));
    }
    if tet >= p.tri.tet_count() {
        return Err(Error::ValidationError(format!("no tet {tet}")));
    }
    if p.tets[tet].pieces.iter().any(|pc| !pc.is_disc()) {
        return Err(Error::ValidationError(format!(
            "tet {tet} already carries a tube"
        )));
    }
    let analysis = p.analyze()?;
    let ca = disc_circle(p, tet, a)?;
    let cb = disc_circle(p, tet, b)?;
    let tg = &analysis.tets[tet];
    if !tg.circles[ca]
        .sides
        .iter()
        .any(|s| tg.circles[cb].sides.contains(s))
    {
        return Err(Error::ValidationError(format!(
            "discs {a} and {b} of tet {tet} do not cobound a region"
        )));
    }

    let mut new = p.clone();
    let pieces = &mut new.tets[tet].pieces;
    let (hi, lo) = (a.max(b), a.min(b));
    pieces.remove(hi);
    pieces.remove(lo);
    let mut circles = [ca, cb];
    circles.sort_unstable();
    pieces.push(Piece::Annulus { circles });

    // The tube forces opposite side labels on its two circles; reconciling
    // may flip the labels of one merged half.
    reconcile_labels(&mut new)?;
    let (perms, _) = restore_curve_order(&mut new)?;
    new.normalize_storage();
    new.validate()?;
    Ok((new, perms))
}

/// Joins disc pieces `a` and `b` of `tet` by a tube, turning them into one
/// annulus. The discs must be parallel: their boundary circles cobound a
/// region of the tet boundary, so the tube is unknotted by construction.
/// Fails with `NotParallel` otherwise.
pub fn tube(
    p: &TransversePattern,
    tet: usize,
    a: usize,
    b: usize,
) -> Result<TransversePattern> {
    p.validate()?;
    match tube_core(p, tet, a, b) {
        Ok((new, _)) => Ok(new),
        Err(Error::ValidationError(reason)) | Err(Error::MoveNotApplicable { reason }) => {
            Err(Error::NotParallel { reason })
        }
        Err(e) => Err(e),
    }
}

/// Whether var `v` of the old pattern carries a different bit in the new one;
/// `perms` translates curve indices.
fn var_flipped(
    old: &TransversePattern,
    new: &TransversePattern,
    perms: &CurvePerms,
    v: OrientVar,
) -> bool {
    match v {
        OrientVar::Point { edge_class, point } => {
            old.point_dirs[edge_class][point as usize]
                != new.point_dirs[edge_class][point as usize]
        }
        OrientVar::Curve { face_class, curve } => {
            let jn = match &perms[face_class] {
                Some(pm) => pm[curve],
                None => curve,
            };
            old.faces[face_class].closed[curve].side_toward
                != new.faces[face_class].closed[jn].side_toward
        }
    }
}

pub(super) fn apply_tube(
    p: &TransversePattern,
    tet: usize,
    pieces: [usize; 2],
) -> Result<(TransversePattern, Move)> {
    let [a, b] = pieces;
    if tet >= p.tri.tet_count()
        || a >= p.tets[tet].pieces.len()
        || b >= p.tets[tet].pieces.len()
    {
        return Err(Error::MoveNotApplicable {
            reason: format!("tet {tet} has no piece pair ({a}, {b})"),
        });
    }
    let topo = surface_topology(p)?;
    let comp_a = topo.piece_component[&(tet, a)];
    let comp_b = topo.piece_component[&(tet, b)];
    if comp_a == comp_b {
        return Err(Error::MoveNotApplicable {
            reason: format!("discs {a} and {b} of tet {tet} lie on one component"),
        });
    }
    if !topo.components[comp_a].is_sphere() && !topo.components[comp_b].is_sphere() {
        return Err(Error::MoveNotApplicable {
            reason: "a pinch must absorb a sphere component".into(),
        });
    }

    let (new, perms) = tube_core(p, tet, a, b)?;
    if new.euler_characteristic() != p.euler_characteristic() - 2 {
        return Err(Error::ValidationError(format!(
            "tube in tet {tet} miscounted Euler characteristic"
        )));
    }

    let annulus = new.tets[tet]
        .pieces
        .iter()
        .position(|pc| !pc.is_disc())
        .ok_or_else(|| Error::ValidationError("tube vanished".into()))?;
    let circles = match &new.tets[tet].pieces[annulus] {
        Piece::Annulus { circles } => *circles,
        Piece::Disc { .. } => unreachable!(),
    };

    let any_flip = (0..p.edge_points.len()).any(|e| {
        (0..p.edge_points[e] as usize).any(|i| p.point_dirs[e][i] != new.point_dirs[e][i])
    }) || (0..p.faces.len()).any(|f| {
        (0..p.faces[f].closed.len()).any(|j| {
            var_flipped(
                p,
                &new,
                &perms,
                OrientVar::Curve {
                    face_class: f,
                    curve: j,
                },
            )
        })
    });
    let flip = if !any_flip {
        None
    } else {
        let new_analysis = new.analyze()?;
        let reps = [
            new_analysis.tets[tet].circles[circles[0]].rep_var,
            new_analysis.tets[tet].circles[circles[1]].rep_var,
        ];
        // Rep vars are in new indexing; translate curve vars back before
        // comparing bits.
        let rep_flipped = |v: OrientVar| -> bool {
            let old_v = match v {
                OrientVar::Curve { face_class, curve } => {
                    let j = match &perms[face_class] {
                        Some(pm) => pm
                            .iter()
                            .position(|&nj| nj == curve)
                            .expect("permutation is a bijection"),
                        None => curve,
                    };
                    OrientVar::Curve {
                        face_class,
                        curve: j,
                    }
                }
                point => point,
            };
            var_flipped(p, &new, &perms, old_v)
        };
        if rep_flipped(reps[0]) {
            Some(0)
        } else if rep_flipped(reps[1]) {
            Some(1)
        } else {
            return Err(Error::ValidationError(
                "tube flipped labels away from its circles".into(),
            ));
        }
    };

    let inverse = Move::new(
        MoveKind::PinchInverse,
        SimplexRef::new(3, tet),
        Selector::TetUntube {
            piece: annulus,
            flip,
        },
    );
    Ok((new, inverse))
}

pub(super) fn apply_untube(
    p: &TransversePattern,
    tet: usize,
    piece: usize,
    flip: Option<u8>,
) -> Result<(TransversePattern, Move)> {
    if tet >= p.tri.tet_count() {
        return Err(Error::MoveNotApplicable {
            reason: format!("no tet {tet}"),
        });
    }
    let circles = match p.tets[tet].pieces.get(piece) {
        Some(Piece::Annulus { circles }) => *circles,
        Some(Piece::Disc { .. }) => {
            return Err(Error::MoveNotApplicable {
                reason: format!("piece {piece} of tet {tet} is not a tube"),
            })
        }
        None => {
            return Err(Error::MoveNotApplicable {
                reason: format!("tet {tet} has no piece {piece}"),
            })
        }
    };
    if matches!(flip, Some(s) if s > 1) {
        return Err(Error::MoveNotApplicable {
            reason: "a tube has circles 0 and 1".into(),
        });
    }

    let mut new = p.clone();
    let pieces = &mut new.tets[tet].pieces;
    pieces.remove(piece);
    pieces.push(Piece::Disc { circle: circles[0] });
    pieces.push(Piece::Disc { circle: circles[1] });

    if let Some(side) = flip {
        // Undo the label flip the matching tube performed: re-orient the
        // whole component of the named circle.
        let analysis = new.analyze()?;
        let system = OrientSystem::build(&new, &analysis)?;
        let rep = analysis.tets[tet].circles[circles[side as usize]].rep_var;
        let comp = system.component_of[system.var_of(rep)];
        let bits: Vec<bool> = (0..system.var_count())
            .map(|w| system.read_bit(&new, w) ^ (system.component_of[w] == comp))
            .collect();
        system.write_bits(&mut new, &bits);
    }

    let (_, circle_maps) = restore_curve_order(&mut new)?;
    let map_circle = |c: usize| -> usize {
        match circle_maps.get(&tet) {
            Some(m) => m[c],
            None => c,
        }
    };
    let (c0, c1) = (map_circle(circles[0]), map_circle(circles[1]));
    new.normalize_storage();
    new.validate()?;

    if new.euler_characteristic() != p.euler_characteristic() + 2 {
        return Err(Error::ValidationError(format!(
            "untube in tet {tet} miscounted Euler characteristic"
        )));
    }

    let i0 = new.tets[tet]
        .pieces
        .iter()
        .position(|pc| *pc == Piece::Disc { circle: c0 })
        .ok_or_else(|| Error::ValidationError("untubed disc lost".into()))?;
    let i1 = new.tets[tet]
        .pieces
        .iter()
        .position(|pc| *pc == Piece::Disc { circle: c1 })
        .ok_or_else(|| Error::ValidationError("untubed disc lost".into()))?;
    let topo = surface_topology(&new)?;
    let comp_0 = topo.piece_component[&(tet, i0)];
    let comp_1 = topo.piece_component[&(tet, i1)];
    if comp_0 == comp_1 {
        return Err(Error::MoveNotApplicable {
            reason: format!("untubing piece {piece} of tet {tet} does not split a component"),
        });
    }
    if !topo.components[comp_0].is_sphere() && !topo.components[comp_1].is_sphere() {
        return Err(Error::MoveNotApplicable {
            reason: "an unpinch must split off a sphere component".into(),
        });
    }

    let inverse = Move::new(
        MoveKind::Pinch,
        SimplexRef::new(3, tet),
        Selector::TetTube {
            pieces: [i0.min(i1), i0.max(i1)],
        },
    );
    Ok((new, inverse))
}

pub(super) fn candidates(
    p: &TransversePattern,
    analysis: &Analysis,
    out: &mut Vec<Move>,
) -> Result<()> {
    let topo = surface_topology(p)?;
    for tet in 0..p.tri.tet_count() {
        let locus = SimplexRef::new(3, tet);
        let pieces = &p.tets[tet].pieces;
        let tg = &analysis.tets[tet];
        if pieces.iter().all(|pc| pc.is_disc()) {
            for a in 0..pieces.len() {
                for b in (a + 1)..pieces.len() {
                    let ca = pieces[a].circles()[0];
                    let cb = pieces[b].circles()[0];
                    if !tg.circles[ca]
                        .sides
                        .iter()
                        .any(|s| tg.circles[cb].sides.contains(s))
                    {
                        continue;
                    }
                    let (x, y) = (topo.piece_component[&(tet, a)], topo.piece_component[&(tet, b)]);
                    if x == y || !(topo.components[x].is_sphere() || topo.components[y].is_sphere())
                    {
                        continue;
                    }
                    out.push(Move::new(
                        MoveKind::Pinch,
                        locus,
                        Selector::TetTube { pieces: [a, b] },
                    ));
                }
            }
        }
        for (i, pc) in pieces.iter().enumerate() {
            if !pc.is_disc() {
                out.push(Move::new(
                    MoveKind::PinchInverse,
                    locus,
                    Selector::TetUntube {
                        piece: i,
                        flip: None,
                    },
                ));
            }
        }
    }
    Ok(())
}
