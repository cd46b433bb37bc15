//! Saddle exchange through a face. The moving sheet presses a square
//! against the face; two opposite sides of the square ride on two strands of
//! the pattern bordering a common region, and sliding it through rewires
//! them. Depending on what the strands are, two arcs re-match the other way
//! around, an arc sheds or absorbs a closed curve, or two closed curves
//! merge or split. On the incidence the sheet moves away from (`from`, the
//! patch side) both strands bound one piece that the saddle cuts apart; on
//! the other incidence the pieces at the strands join.

use std::collections::BTreeSet;

use super::edit::{EndSpec, Rewrite};
use super::{Move, MoveKind, Participants, Selector};
use crate::error::{Error, Result};
use crate::pattern::{Analysis, FaceGeometry, Piece, TransversePattern};
use crate::tricomplex::SimplexRef;

/// Chord of an arc, via the boundary position of its first end.
fn chord_of_arc(fg: &FaceGeometry, p: &TransversePattern, class: usize, arc: usize) -> usize {
    let end = &p.faces[class].arcs[arc].ends[0];
    fg.chord_at[fg.pos(end.local_edge, end.point) as usize]
}

/// Region a closed curve currently sits in.
fn curve_region(fg: &FaceGeometry, p: &TransversePattern, class: usize, curve: usize) -> usize {
    let c = &p.faces[class].closed[curve];
    fg.region_of_edge_gap(c.anchor.0, c.anchor.1)
}

/// Circles holding the two strand items on one incidence, `None` when an
/// index does not resolve there. Single-strand participants (shed, split)
/// report their circle twice.
fn strand_circles(
    analysis: &Analysis,
    fg: &FaceGeometry,
    side: usize,
    parts: Participants,
) -> Option<[usize; 2]> {
    let inc = &fg.incidences[side];
    let tg = &analysis.tets[inc.tet];
    let of_arc = |a: usize| tg.circle_of_arc(inc.face, a).map(|(c, _)| c);
    let of_curve = |c: usize| tg.circle_of_closed(inc.face, c);
    Some(match parts {
        Participants::Arcs(i, j) => [of_arc(i)?, of_arc(j)?],
        Participants::ArcShed { arc, .. } => {
            let c = of_arc(arc)?;
            [c, c]
        }
        Participants::ArcAbsorb { arc, curve } => [of_arc(arc)?, of_curve(curve)?],
        Participants::CurveMerge { a, b, .. } => [of_curve(a)?, of_curve(b)?],
        Participants::CurveSplit { curve, .. } => {
            let c = of_curve(curve)?;
            [c, c]
        }
    })
}

/// Whether both strands bound one piece on the given incidence, as the patch
/// side must.
fn patch_shares(
    p: &TransversePattern,
    analysis: &Analysis,
    fg: &FaceGeometry,
    side: usize,
    parts: Participants,
) -> bool {
    match strand_circles(analysis, fg, side, parts) {
        None => false,
        Some([c1, c2]) => {
            let tg = &analysis.tets[fg.incidences[side].tet];
            tg.piece_of_circle(p, c1) == tg.piece_of_circle(p, c2)
        }
    }
}

pub(super) fn apply(
    p: &TransversePattern,
    class: usize,
    from: u8,
    participants: Participants,
) -> Result<(TransversePattern, Move)> {
    let analysis = p.analyze()?;
    let fg = &analysis.faces[class];
    if from > 1 {
        return Err(Error::MoveNotApplicable {
            reason: format!("side {from} out of range"),
        });
    }
    if fg.incidences.len() != 2 {
        return Err(Error::MoveNotApplicable {
            reason: format!("face {class} is glued to itself"),
        });
    }
    if fg.incidences[0].tet == fg.incidences[1].tet {
        return Err(Error::MoveNotApplicable {
            reason: format!(
                "both sides of face {class} lie in tet {}",
                fg.incidences[0].tet
            ),
        });
    }
    let fp = &p.faces[class];
    let n_arcs = fp.arcs.len();
    let n_curves = fp.closed.len();
    let check_arc = |i: usize| -> Result<()> {
        if i < n_arcs {
            Ok(())
        } else {
            Err(Error::MoveNotApplicable {
                reason: format!("face {class} has no arc {i}"),
            })
        }
    };
    let check_curve = |i: usize| -> Result<()> {
        if i < n_curves {
            Ok(())
        } else {
            Err(Error::MoveNotApplicable {
                reason: format!("face {class} has no closed curve {i}"),
            })
        }
    };

    // The saddle region, and which closed curves take part (exempt from the
    // blocking test below).
    let (region, curve_parts): (usize, Vec<usize>) = match participants {
        Participants::Arcs(i, j) => {
            if i == j {
                return Err(Error::MoveNotApplicable {
                    reason: "a saddle needs two distinct arcs".into(),
                });
            }
            check_arc(i)?;
            check_arc(j)?;
            let (a0, a1) = fg.chord_regions(chord_of_arc(fg, p, class, i));
            let (b0, b1) = fg.chord_regions(chord_of_arc(fg, p, class, j));
            let mut common: Vec<usize> = [a0, a1]
                .into_iter()
                .filter(|r| *r == b0 || *r == b1)
                .collect();
            common.dedup();
            match common[..] {
                [r] => (r, Vec::new()),
                _ => {
                    return Err(Error::MoveNotApplicable {
                        reason: format!(
                            "arcs {i} and {j} of face {class} do not border one common region"
                        ),
                    })
                }
            }
        }
        Participants::ArcShed { arc, side } => {
            check_arc(arc)?;
            if side > 1 {
                return Err(Error::MoveNotApplicable {
                    reason: format!("chord side {side} out of range"),
                });
            }
            let rs = fg.chord_regions(chord_of_arc(fg, p, class, arc));
            (if side == 0 { rs.0 } else { rs.1 }, Vec::new())
        }
        Participants::ArcAbsorb { arc, curve } => {
            check_arc(arc)?;
            check_curve(curve)?;
            let r = curve_region(fg, p, class, curve);
            let rs = fg.chord_regions(chord_of_arc(fg, p, class, arc));
            if r != rs.0 && r != rs.1 {
                return Err(Error::MoveNotApplicable {
                    reason: format!("curve {curve} of face {class} does not lie beside arc {arc}"),
                });
            }
            (r, vec![curve])
        }
        Participants::CurveMerge { a, b, .. } => {
            if a == b {
                return Err(Error::MoveNotApplicable {
                    reason: "a merge needs two distinct curves".into(),
                });
            }
            check_curve(a)?;
            check_curve(b)?;
            let ra = curve_region(fg, p, class, a);
            if ra != curve_region(fg, p, class, b) {
                return Err(Error::MoveNotApplicable {
                    reason: format!("curves {a} and {b} of face {class} lie in different regions"),
                });
            }
            (ra, vec![a, b])
        }
        Participants::CurveSplit { curve, .. } => {
            check_curve(curve)?;
            (curve_region(fg, p, class, curve), vec![curve])
        }
    };

    // A closed curve sitting in the region but not taking part blocks the
    // square.
    for cj in 0..n_curves {
        if !curve_parts.contains(&cj) && curve_region(fg, p, class, cj) == region {
            return Err(Error::MoveNotApplicable {
                reason: format!("curve {cj} of face {class} blocks the saddle region"),
            });
        }
    }

    // Strand circles and their pieces on both incidences; the patch side
    // must see one shared piece.
    let mut strands = [[0usize; 2]; 2];
    let mut involved = [[0usize; 2]; 2];
    for s in 0..2 {
        strands[s] = strand_circles(&analysis, fg, s, participants).ok_or_else(|| {
            Error::ValidationError(format!(
                "face {class}: participant items missing from the side-{s} skeleton"
            ))
        })?;
        let tg = &analysis.tets[fg.incidences[s].tet];
        involved[s] = [
            tg.piece_of_circle(p, strands[s][0]),
            tg.piece_of_circle(p, strands[s][1]),
        ];
    }
    let f_side = from as usize;
    if involved[f_side][0] != involved[f_side][1] {
        return Err(Error::MoveNotApplicable {
            reason: format!("strands bound different pieces on side {from} of face {class}"),
        });
    }

    // Face edit.
    let mut rw = Rewrite::new(p, &analysis);
    let anchor = fg.region_anchor(region);
    let mut inverse_label = false;
    match participants {
        Participants::Arcs(i, j) => {
            let pos_of = |a: usize| {
                let arc = &fp.arcs[a];
                [
                    fg.pos(arc.ends[0].local_edge, arc.ends[0].point),
                    fg.pos(arc.ends[1].local_edge, arc.ends[1].point),
                ]
            };
            let [pi0, pi1] = pos_of(i);
            let [pj0, pj1] = pos_of(j);
            let mut ps = [pi0, pi1, pj0, pj1];
            ps.sort_unstable();
            let si = [pi0.min(pi1), pi0.max(pi1)];
            // Of the two non-crossing perfect matchings of the four
            // endpoints, the strands currently use one; switch to the other.
            let new_pairs: [(u32, u32); 2] = if si == [ps[0], ps[1]] || si == [ps[2], ps[3]] {
                [(ps[0], ps[3]), (ps[1], ps[2])]
            } else if si == [ps[0], ps[3]] {
                [(ps[0], ps[1]), (ps[2], ps[3])]
            } else {
                return Err(Error::ValidationError(format!(
                    "arcs {i} and {j} of face {class} cross"
                )));
            };
            rw.remove_arc(class, i);
            rw.remove_arc(class, j);
            for (a, b) in new_pairs {
                let (la, pa) = fg.point_at(a);
                let (lb, pb) = fg.point_at(b);
                rw.add_arc(class, [EndSpec::old(la, pa), EndSpec::old(lb, pb)]);
            }
        }
        Participants::ArcShed { .. } => {
            // The new curve's side bit falls out of label reconciliation:
            // its circle tubes onto the arc's piece on the traverse side.
            rw.add_curve(class, anchor.0, anchor.1, false);
        }
        Participants::ArcAbsorb { curve, .. } => {
            rw.remove_curve(class, curve);
        }
        Participants::CurveMerge { a, b, label } => {
            inverse_label = fp.closed[a].side_toward;
            rw.remove_curve(class, a);
            rw.remove_curve(class, b);
            let slot = rw.add_curve(class, anchor.0, anchor.1, label);
            rw.seed_curve_bit(class, slot, label);
        }
        Participants::CurveSplit { curve, label } => {
            inverse_label = fp.closed[curve].side_toward;
            rw.remove_curve(class, curve);
            let s0 = rw.add_curve(class, anchor.0, anchor.1, label);
            let s1 = rw.add_curve(class, anchor.0, anchor.1, label);
            rw.seed_curve_bit(class, s0, label);
            rw.seed_curve_bit(class, s1, label);
        }
    }
    let mut out = rw.apply()?;

    // Pieces. Per side, the circles produced by the saddle are the
    // descendants of the strand circles plus any circle made entirely of
    // added items; the piece shapes follow from what the strands bounded.
    for s in 0..2 {
        let t = fg.incidences[s].tet;
        let mut bset: BTreeSet<usize> = BTreeSet::new();
        bset.extend(out.descendant_list(t, strands[s][0]).iter().copied());
        bset.extend(out.descendant_list(t, strands[s][1]).iter().copied());
        bset.extend(out.fresh_circles(t));
        let b: Vec<usize> = bset.into_iter().collect();
        let [q1, q2] = involved[s];
        let expect = |n: usize| -> Result<()> {
            if b.len() == n {
                Ok(())
            } else {
                Err(Error::ValidationError(format!(
                    "face {class} side {s}: saddle left {} circles where {n} fit",
                    b.len()
                )))
            }
        };
        let result: Vec<Piece> = if s == f_side {
            match p.tets[t].pieces[q1] {
                // The square cuts the patch disc in two.
                Piece::Disc { .. } => {
                    expect(2)?;
                    vec![Piece::Disc { circle: b[0] }, Piece::Disc { circle: b[1] }]
                }
                Piece::Annulus { circles } => {
                    if strands[s][0] != strands[s][1] {
                        // One strand on each end of the tube: cutting between
                        // them flattens it to a disc.
                        expect(1)?;
                        vec![Piece::Disc { circle: b[0] }]
                    } else {
                        // Both strands on one end: that end splits, and
                        // exactly one half keeps the tube. The keeper is the
                        // half that still cobounds a region with the far end.
                        let far = if circles[0] == strands[s][0] {
                            circles[1]
                        } else {
                            circles[0]
                        };
                        let far_new = out.descendant(t, far)?;
                        expect(2)?;
                        let skel = &out.skeletons[&t];
                        let shares = |u: usize| {
                            skel.circles[u]
                                .sides
                                .iter()
                                .any(|r| skel.circles[far_new].sides.contains(r))
                        };
                        let (disc, tube) = match (shares(b[0]), shares(b[1])) {
                            (true, false) => (b[1], b[0]),
                            (false, true) => (b[0], b[1]),
                            _ => {
                                return Err(Error::ValidationError(format!(
                                    "face {class} side {s}: ambiguous tube reattachment"
                                )))
                            }
                        };
                        vec![
                            Piece::Disc { circle: disc },
                            Piece::Annulus {
                                circles: [tube.min(far_new), tube.max(far_new)],
                            },
                        ]
                    }
                }
            }
        } else if q1 == q2 {
            match p.tets[t].pieces[q1] {
                // The sheet folds through itself: the disc becomes a tube.
                Piece::Disc { .. } => {
                    expect(2)?;
                    vec![Piece::Annulus {
                        circles: [b[0], b[1]],
                    }]
                }
                Piece::Annulus { .. } => {
                    return Err(Error::ValidationError(format!(
                        "saddle strands of face {class} share a tube on side {s}"
                    )))
                }
            }
        } else {
            match (&p.tets[t].pieces[q1], &p.tets[t].pieces[q2]) {
                (Piece::Disc { .. }, Piece::Disc { .. }) => {
                    expect(1)?;
                    vec![Piece::Disc { circle: b[0] }]
                }
                (Piece::Disc { .. }, Piece::Annulus { circles })
                | (Piece::Annulus { circles }, Piece::Disc { .. }) => {
                    let far = if circles[0] == strands[s][0] || circles[0] == strands[s][1] {
                        circles[1]
                    } else {
                        circles[0]
                    };
                    let far_new = out.descendant(t, far)?;
                    expect(1)?;
                    vec![Piece::Annulus {
                        circles: [b[0].min(far_new), b[0].max(far_new)],
                    }]
                }
                (Piece::Annulus { .. }, Piece::Annulus { .. }) => {
                    return Err(Error::ValidationError(format!(
                        "saddle on face {class} joins two tubes on side {s}"
                    )))
                }
            }
        };
        let mut pieces = Vec::new();
        for (pi, piece) in p.tets[t].pieces.iter().enumerate() {
            if pi == q1 || pi == q2 {
                continue;
            }
            pieces.push(match piece {
                Piece::Disc { circle } => Piece::Disc {
                    circle: out.descendant(t, *circle)?,
                },
                Piece::Annulus { circles } => {
                    let x = out.descendant(t, circles[0])?;
                    let y = out.descendant(t, circles[1])?;
                    Piece::Annulus {
                        circles: [x.min(y), x.max(y)],
                    }
                }
            });
        }
        pieces.extend(result);
        out.set_pieces(t, pieces);
    }
    out.fill_default()?;
    let fin = out.finish()?;

    // A saddle slides the sheet without cutting or capping anything.
    if fin.pattern.euler_characteristic() != p.euler_characteristic() {
        return Err(Error::ValidationError(format!(
            "saddle on face {class} changed the surface characteristic"
        )));
    }

    let map_arc = |a: usize| fin.arc_maps[class].get(&a).copied().unwrap_or(a);
    let inv_participants = match participants {
        Participants::Arcs(..) => {
            let added = &fin.added_arcs[class];
            Participants::Arcs(added[0].min(added[1]), added[0].max(added[1]))
        }
        Participants::ArcShed { arc, .. } => Participants::ArcAbsorb {
            arc: map_arc(arc),
            curve: fin.added_curves[class][0],
        },
        Participants::ArcAbsorb { arc, .. } => {
            // Removing a curve leaves points, arcs, chords and regions
            // untouched, so the old geometry still names the shed side.
            let rs = fg.chord_regions(chord_of_arc(fg, p, class, arc));
            Participants::ArcShed {
                arc: map_arc(arc),
                side: if rs.0 == region { 0 } else { 1 },
            }
        }
        Participants::CurveMerge { .. } => Participants::CurveSplit {
            curve: fin.added_curves[class][0],
            label: inverse_label,
        },
        Participants::CurveSplit { .. } => {
            let added = &fin.added_curves[class];
            Participants::CurveMerge {
                a: added[0].min(added[1]),
                b: added[0].max(added[1]),
                label: inverse_label,
            }
        }
    };
    let inverse = Move::new(
        MoveKind::F2b,
        SimplexRef::new(2, class),
        Selector::FaceSaddle {
            from: 1 - from,
            participants: inv_participants,
        },
    );
    Ok((fin.pattern, inverse))
}

pub(super) fn candidates(
    p: &TransversePattern,
    analysis: &Analysis,
    out: &mut Vec<Move>,
) -> Result<()> {
    for class in 0..p.faces.len() {
        let fg = &analysis.faces[class];
        if fg.incidences.len() != 2 || fg.incidences[0].tet == fg.incidences[1].tet {
            continue;
        }
        let fp = &p.faces[class];
        let n_arcs = fp.arcs.len();
        let n_curves = fp.closed.len();
        let chord: Vec<usize> = (0..n_arcs).map(|a| chord_of_arc(fg, p, class, a)).collect();
        let cregion: Vec<usize> = (0..n_curves)
            .map(|c| curve_region(fg, p, class, c))
            .collect();
        let blocked = |r: usize, exempt: &[usize]| {
            cregion
                .iter()
                .enumerate()
                .any(|(c, reg)| *reg == r && !exempt.contains(&c))
        };
        let push = |from: u8, parts: Participants, out: &mut Vec<Move>| {
            out.push(Move::new(
                MoveKind::F2b,
                SimplexRef::new(2, class),
                Selector::FaceSaddle {
                    from,
                    participants: parts,
                },
            ));
        };

        for i in 0..n_arcs {
            for j in i + 1..n_arcs {
                let (a0, a1) = fg.chord_regions(chord[i]);
                let (b0, b1) = fg.chord_regions(chord[j]);
                let common: Vec<usize> = [a0, a1]
                    .into_iter()
                    .filter(|r| *r == b0 || *r == b1)
                    .collect();
                if common.len() != 1 || blocked(common[0], &[]) {
                    continue;
                }
                for from in 0..2u8 {
                    if patch_shares(p, analysis, fg, from as usize, Participants::Arcs(i, j)) {
                        push(from, Participants::Arcs(i, j), out);
                    }
                }
            }
        }
        for a in 0..n_arcs {
            let rs = fg.chord_regions(chord[a]);
            for side in 0..2u8 {
                let r = if side == 0 { rs.0 } else { rs.1 };
                if blocked(r, &[]) {
                    continue;
                }
                // Either incidence may take the fold; both strand references
                // hit one arc, so the patch condition holds trivially.
                for from in 0..2u8 {
                    push(from, Participants::ArcShed { arc: a, side }, out);
                }
            }
        }
        for a in 0..n_arcs {
            let rs = fg.chord_regions(chord[a]);
            for c in 0..n_curves {
                let parts = Participants::ArcAbsorb { arc: a, curve: c };
                if (cregion[c] != rs.0 && cregion[c] != rs.1) || blocked(cregion[c], &[c]) {
                    continue;
                }
                for from in 0..2u8 {
                    if patch_shares(p, analysis, fg, from as usize, parts) {
                        push(from, parts, out);
                    }
                }
            }
        }
        for a in 0..n_curves {
            for b in a + 1..n_curves {
                if cregion[a] != cregion[b] || blocked(cregion[a], &[a, b]) {
                    continue;
                }
                for from in 0..2u8 {
                    let probe = Participants::CurveMerge { a, b, label: false };
                    if patch_shares(p, analysis, fg, from as usize, probe) {
                        for label in [false, true] {
                            push(from, Participants::CurveMerge { a, b, label }, out);
                        }
                    }
                }
            }
        }
        for c in 0..n_curves {
            if blocked(cregion[c], &[c]) {
                continue;
            }
            for from in 0..2u8 {
                push(
                    from,
                    Participants::CurveSplit {
                        curve: c,
                        label: false,
                    },
                    out,
                );
            }
        }
    }
    Ok(())
}
