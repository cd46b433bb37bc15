//! Flattening a disc through a face. Pushing turns a disc piece lying
//! parallel to a face into a closed curve of intersection: the disc bulges
//! through, leaving an annulus on its old side and a small cap disc on the
//! other. Pulling is the reverse: a curve whose sides are a cap and an
//! annulus is drawn flat and disappears.

use super::edit::Rewrite;
use super::{Move, MoveKind, Selector};
use crate::error::{Error, Result};
use crate::pattern::{Analysis, BdyElem, CircleItem, Piece, TransversePattern};
use crate::tricomplex::SimplexRef;

/// The two incidences of a face class, rejected unless they lie in two
/// different tets.
fn two_sides(analysis: &Analysis, class: usize) -> Result<[(usize, u8); 2]> {
    let fg = &analysis.faces[class];
    if fg.incidences.len() != 2 {
        return Err(Error::MoveNotApplicable {
            reason: format!("face {class} is glued to itself"),
        });
    }
    let a = (fg.incidences[0].tet, fg.incidences[0].face);
    let b = (fg.incidences[1].tet, fg.incidences[1].face);
    if a.0 == b.0 {
        return Err(Error::MoveNotApplicable {
            reason: format!("both sides of face {class} lie in tet {}", a.0),
        });
    }
    Ok([a, b])
}

pub(super) fn apply_push(
    p: &TransversePattern,
    class: usize,
    side: u8,
    piece: usize,
    region: (u8, u32),
) -> Result<(TransversePattern, Move)> {
    let analysis = p.analyze()?;
    let sides = two_sides(&analysis, class)?;
    if side > 1 {
        return Err(Error::MoveNotApplicable {
            reason: format!("face {class} has sides 0 and 1"),
        });
    }
    let (tet, slot) = sides[side as usize];
    if p.tets[tet].pieces.iter().any(|pc| !pc.is_disc()) {
        return Err(Error::MoveNotApplicable {
            reason: format!("tet {tet} already carries a tube"),
        });
    }
    let cap_circle = match p.tets[tet].pieces.get(piece) {
        Some(Piece::Disc { circle }) => *circle,
        Some(_) => unreachable!(),
        None => {
            return Err(Error::MoveNotApplicable {
                reason: format!("tet {tet} has no piece {piece}"),
            })
        }
    };
    let fg = &analysis.faces[class];
    let (l, gap) = region;
    if l > 2 || gap > fg.w[l as usize] {
        return Err(Error::MoveNotApplicable {
            reason: format!("face {class} has no edge gap ({l}, {gap})"),
        });
    }
    let face_region = fg.region_of_edge_gap(l, gap);
    let tg = &analysis.tets[tet];
    let bdy_region = *tg
        .elem_region
        .get(&BdyElem::Outer {
            face: slot,
            region: face_region,
        })
        .ok_or_else(|| Error::ValidationError("face region missing from tet boundary".into()))?;
    if !tg.circles[cap_circle].sides.contains(&bdy_region) {
        return Err(Error::MoveNotApplicable {
            reason: format!("piece {piece} of tet {tet} is not parallel to the chosen region"),
        });
    }

    let mut rw = Rewrite::new(p, &analysis);
    let slot_added = rw.add_curve(class, l, gap, false);
    let mut applied = rw.apply()?;

    // On the pushed side the old disc and the new curve bound the sweep:
    // together they make an annulus.
    let desc = applied.descendant(tet, cap_circle)?;
    let curve_circles = applied.circle_of_added_curve(tet, class, slot_added)?;
    if curve_circles.len() != 1 {
        return Err(Error::ValidationError(
            "pushed curve traces more than one circle".into(),
        ));
    }
    let c_new = curve_circles[0];
    let mut pieces = applied.pieces_default(tet)?;
    let di = pieces
        .iter()
        .position(|pc| *pc == Piece::Disc { circle: desc })
        .ok_or_else(|| Error::ValidationError("pushed disc lost its circle".into()))?;
    pieces.remove(di);
    let ci = pieces
        .iter()
        .position(|pc| *pc == Piece::Disc { circle: c_new })
        .ok_or_else(|| Error::ValidationError("pushed curve did not form a cap".into()))?;
    pieces.remove(ci);
    let mut circles = [desc, c_new];
    circles.sort_unstable();
    pieces.push(Piece::Annulus { circles });
    applied.set_pieces(tet, pieces);
    applied.fill_default()?;
    let out = applied.finish()?;

    if out.pattern.euler_characteristic() != p.euler_characteristic() {
        return Err(Error::ValidationError(format!(
            "push through face {class} changed Euler characteristic"
        )));
    }
    let inverse = Move::new(
        MoveKind::F2aInverse,
        SimplexRef::new(2, class),
        Selector::FacePull {
            curve: out.added_curves[class][slot_added],
        },
    );
    Ok((out.pattern, inverse))
}

pub(super) fn apply_pull(
    p: &TransversePattern,
    class: usize,
    curve: usize,
) -> Result<(TransversePattern, Move)> {
    let analysis = p.analyze()?;
    let sides = two_sides(&analysis, class)?;
    if curve >= p.faces[class].closed.len() {
        return Err(Error::MoveNotApplicable {
            reason: format!("face {class} has no closed curve {curve}"),
        });
    }

    // Shape of the two pieces flanking the curve: one cap disc, one annulus.
    let mut cap: Option<(u8, usize)> = None;
    let mut ann: Option<(u8, usize, usize)> = None;
    for (s, &(tet, slot)) in sides.iter().enumerate() {
        let tg = &analysis.tets[tet];
        let c = tg.circle_of_closed(slot, curve).ok_or_else(|| {
            Error::ValidationError("curve missing from tet boundary".into())
        })?;
        let pi = tg.piece_of_circle(p, c);
        match &p.tets[tet].pieces[pi] {
            Piece::Disc { .. } => {
                if cap.is_some() {
                    return Err(Error::MoveNotApplicable {
                        reason: format!("curve {curve} of face {class} bounds caps on both sides"),
                    });
                }
                cap = Some((s as u8, pi));
            }
            Piece::Annulus { circles } => {
                if ann.is_some() {
                    return Err(Error::MoveNotApplicable {
                        reason: format!("curve {curve} of face {class} joins two tubes"),
                    });
                }
                let far = if circles[0] == c { circles[1] } else { circles[0] };
                ann = Some((s as u8, pi, far));
            }
        }
    }
    let (cap_side, cap_piece) = cap.unwrap();
    let (ann_side, ann_piece, far) = match ann {
        Some(t) => t,
        None => unreachable!("two pieces, neither cap nor annulus"),
    };
    let (cap_tet, _) = sides[cap_side as usize];
    let (ann_tet, _) = sides[ann_side as usize];

    // The inverse pushes from the annulus side back through the same region;
    // arcs are untouched, so the curve's anchor stays a valid region anchor.
    let anchor = p.faces[class].closed[curve].anchor;
    let far_probe = analysis.tets[ann_tet].circles[far].items[0];

    let mut rw = Rewrite::new(p, &analysis);
    rw.remove_curve(class, curve);
    rw.remove_piece(cap_tet, cap_piece);
    let mut applied = rw.apply()?;

    let mut pieces = Vec::with_capacity(p.tets[ann_tet].pieces.len());
    for (pi, pc) in p.tets[ann_tet].pieces.iter().enumerate() {
        if pi == ann_piece {
            pieces.push(Piece::Disc {
                circle: applied.descendant(ann_tet, far)?,
            });
        } else {
            match pc {
                Piece::Disc { circle } => pieces.push(Piece::Disc {
                    circle: applied.descendant(ann_tet, *circle)?,
                }),
                Piece::Annulus { circles } => {
                    let mut cs = [
                        applied.descendant(ann_tet, circles[0])?,
                        applied.descendant(ann_tet, circles[1])?,
                    ];
                    cs.sort_unstable();
                    pieces.push(Piece::Annulus { circles: cs });
                }
            }
        }
    }
    applied.set_pieces(ann_tet, pieces);
    applied.fill_default()?;
    let out = applied.finish()?;

    if out.pattern.euler_characteristic() != p.euler_characteristic() {
        return Err(Error::ValidationError(format!(
            "pull through face {class} changed Euler characteristic"
        )));
    }

    // Locate the flattened disc in the output: follow one surviving item of
    // the annulus' far circle.
    let new_analysis = out.pattern.analyze()?;
    let ng = &new_analysis.tets[ann_tet];
    let new_circle = match far_probe {
        CircleItem::Arc { face, arc } => {
            let fclass = p.tri.face_class(ann_tet, face);
            let new_arc = out.arc_maps[fclass]
                .get(&arc)
                .copied()
                .ok_or_else(|| Error::ValidationError("far circle lost an arc".into()))?;
            ng.circle_of_arc(face, new_arc)
                .ok_or_else(|| Error::ValidationError("flattened disc lost its arc".into()))?
                .0
        }
        CircleItem::Closed { face, curve: cv } => {
            let fclass = p.tri.face_class(ann_tet, face);
            let new_curve = out.curve_maps[fclass]
                .get(&cv)
                .copied()
                .ok_or_else(|| Error::ValidationError("far circle lost a curve".into()))?;
            ng.circle_of_closed(face, new_curve)
                .ok_or_else(|| Error::ValidationError("flattened disc lost its curve".into()))?
        }
    };
    let new_piece = ng.piece_of_circle(&out.pattern, new_circle);

    let inverse = Move::new(
        MoveKind::F2a,
        SimplexRef::new(2, class),
        Selector::FacePush {
            side: ann_side,
            piece: new_piece,
            region: anchor,
        },
    );
    Ok((out.pattern, inverse))
}

pub(super) fn candidates(
    p: &TransversePattern,
    analysis: &Analysis,
    out: &mut Vec<Move>,
) -> Result<()> {
    for class in 0..p.tri.face_count() {
        let sides = match two_sides(analysis, class) {
            Ok(s) => s,
            Err(Error::MoveNotApplicable { .. }) => continue,
            Err(e) => return Err(e),
        };
        let locus = SimplexRef::new(2, class);
        let fg = &analysis.faces[class];
        for (s, &(tet, slot)) in sides.iter().enumerate() {
            if p.tets[tet].pieces.iter().any(|pc| !pc.is_disc()) {
                continue;
            }
            let tg = &analysis.tets[tet];
            for (pi, pc) in p.tets[tet].pieces.iter().enumerate() {
                let Piece::Disc { circle } = pc else { continue };
                for face_region in 0..fg.n_regions {
                    let Some(&bdy) = tg.elem_region.get(&BdyElem::Outer {
                        face: slot,
                        region: face_region,
                    }) else {
                        continue;
                    };
                    if tg.circles[*circle].sides.contains(&bdy) {
                        out.push(Move::new(
                            MoveKind::F2a,
                            locus,
                            Selector::FacePush {
                                side: s as u8,
                                piece: pi,
                                region: fg.region_anchor(face_region),
                            },
                        ));
                    }
                }
            }
        }
        for curve in 0..p.faces[class].closed.len() {
            out.push(Move::new(
                MoveKind::F2aInverse,
                locus,
                Selector::FacePull { curve },
            ));
        }
    }
    Ok(())
}
