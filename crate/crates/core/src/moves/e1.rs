//! Passing a sheet across an edge. Going up wraps a tongue of the surface
//! around the edge: two new crossing points appear, the chosen fan wall's arc
//! splits around them, and every other wall gains a small returning arc
//! hugging the edge. Going down removes such a tongue.

use super::edit::{EndSpec, Rewrite};
use super::{Move, MoveKind, Selector};
use crate::error::{Error, Result};
use crate::pattern::{
    face_frame, in_cyclic_interval, Analysis, ArcEnd, ClosedCurve, FaceGeometry,
    TransversePattern,
};
use crate::tricomplex::SimplexRef;

/// One wall of the edge's fan: the face crossed between consecutive fan
/// entries, with the class-local edge lying on the fan's edge.
struct Wall {
    face_class: usize,
    local: u8,
}

fn fan_walls(p: &TransversePattern, analysis: &Analysis, eta: usize) -> Result<Vec<Wall>> {
    if p.tri.edge_reversed(eta) {
        return Err(Error::MoveNotApplicable {
            reason: format!("edge {eta} glues to itself reversed"),
        });
    }
    let fan = p.tri.edge_fan(eta)?;
    let mut walls = Vec::with_capacity(fan.len());
    for entry in &fan {
        let class = p.tri.face_class(entry.tet, entry.exit_face);
        let fg = &analysis.faces[class];
        let inc = fg
            .incidences
            .iter()
            .position(|g| g.tet == entry.tet && g.face == entry.exit_face)
            .ok_or_else(|| Error::ValidationError("fan wall incidence missing".into()))?;
        let local = (0..3u8)
            .find(|&l| fg.incidences[inc].tet_edge[l as usize] == entry.edge)
            .ok_or_else(|| Error::ValidationError("fan wall does not carry the edge".into()))?;
        walls.push(Wall { face_class: class, local });
    }
    if walls.len() < 2 {
        // A tongue around a length-1 fan would pinch at its crossing points;
        // no transverse pattern represents it.
        return Err(Error::MoveNotApplicable {
            reason: format!("edge {eta} has a fan of length {}", walls.len()),
        });
    }
    Ok(walls)
}

/// True when the chords (a, b) and (c, d) cross, all positions distinct.
fn chords_cross(a: u32, b: u32, c: u32, d: u32) -> bool {
    let inside = |z: u32| z != a && in_cyclic_interval(z, a, b);
    inside(c) != inside(d)
}

fn curve_region(fg: &FaceGeometry, c: &ClosedCurve) -> usize {
    fg.region_of_edge_gap(c.anchor.0, c.anchor.1)
}

pub(super) fn apply_up(
    p: &TransversePattern,
    eta: usize,
    gap: u32,
    wall: usize,
    arc: usize,
) -> Result<(TransversePattern, Move)> {
    let analysis = p.analyze()?;
    let walls = fan_walls(p, &analysis, eta)?;
    if wall >= walls.len() {
        return Err(Error::MoveNotApplicable {
            reason: format!("edge {eta} has {} fan walls", walls.len()),
        });
    }
    let w = p.edge_points[eta];
    if gap > w {
        return Err(Error::MoveNotApplicable {
            reason: format!("gap {gap} exceeds the {w} points on edge {eta}"),
        });
    }
    let kd = walls[wall].face_class;
    let ld = walls[wall].local;
    let fg = &analysis.faces[kd];
    if arc >= p.faces[kd].arcs.len() {
        return Err(Error::MoveNotApplicable {
            reason: format!("face {kd} has no arc {arc}"),
        });
    }
    let region = fg.region_of_edge_gap(ld, gap);
    let (ra, rb) = fg.chord_regions(arc);
    if region != ra && region != rb {
        return Err(Error::MoveNotApplicable {
            reason: format!("arc {arc} of face {kd} does not flank the chosen gap"),
        });
    }
    for c in &p.faces[kd].closed {
        if curve_region(fg, c) == region {
            return Err(Error::MoveNotApplicable {
                reason: format!("the swept region of face {kd} carries a closed curve"),
            });
        }
    }

    let mut rw = Rewrite::new(p, &analysis);
    let s0 = rw.insert_point(eta, gap, false);
    let s1 = rw.insert_point(eta, gap, false);
    rw.remove_arc(kd, arc);

    // Choose the non-crossing split of the old arc's ends around the two new
    // points, measured in the post-insertion frame.
    let [x, y] = p.faces[kd].arcs[arc].ends;
    let mut new_points = p.edge_points.clone();
    new_points[eta] += 2;
    let frame = face_frame(&p.tri, kd, &new_points)?;
    let shift = |end: ArcEnd| -> u32 {
        let class = fg.edge_class[end.local_edge as usize];
        end.point + if class == eta && end.point >= gap { 2 } else { 0 }
    };
    let px = frame.pos(x.local_edge, shift(x));
    let py = frame.pos(y.local_edge, shift(y));
    let n0 = frame.pos(ld, gap);
    let n1 = frame.pos(ld, gap + 1);
    let (sx, sy) = if chords_cross(px, n0, py, n1) {
        (s1, s0)
    } else {
        (s0, s1)
    };
    rw.add_arc(kd, [EndSpec::old(x.local_edge, x.point), EndSpec::new(ld, sx)]);
    rw.add_arc(kd, [EndSpec::new(ld, sy), EndSpec::old(y.local_edge, y.point)]);

    for (i, other) in walls.iter().enumerate() {
        if i == wall {
            continue;
        }
        rw.add_arc(
            other.face_class,
            [EndSpec::new(other.local, s0), EndSpec::new(other.local, s1)],
        );
    }

    let mut applied = rw.apply()?;
    applied.fill_default()?;
    let out = applied.finish()?;
    if out.pattern.euler_characteristic() != p.euler_characteristic() {
        return Err(Error::ValidationError(format!(
            "edge move at {eta} changed Euler characteristic"
        )));
    }
    let inverse = Move::new(
        MoveKind::E1Inverse,
        SimplexRef::new(1, eta),
        Selector::EdgeDown { point: gap, wall },
    );
    Ok((out.pattern, inverse))
}

pub(super) fn apply_down(
    p: &TransversePattern,
    eta: usize,
    point: u32,
    wall: usize,
) -> Result<(TransversePattern, Move)> {
    let analysis = p.analyze()?;
    let walls = fan_walls(p, &analysis, eta)?;
    if wall >= walls.len() {
        return Err(Error::MoveNotApplicable {
            reason: format!("edge {eta} has {} fan walls", walls.len()),
        });
    }
    let w = p.edge_points[eta];
    if w < 2 || point > w - 2 {
        return Err(Error::MoveNotApplicable {
            reason: format!("edge {eta} has no point pair at {point}"),
        });
    }
    let fan = p.tri.edge_fan(eta)?;

    let mut rw = Rewrite::new(p, &analysis);
    let mut removed: Vec<(usize, usize)> = Vec::new();
    let mut returning: Vec<Option<usize>> = vec![None; walls.len()];
    for (i, wl) in walls.iter().enumerate() {
        if i == wall {
            continue;
        }
        let fg = &analysis.faces[wl.face_class];
        let q0 = fg.pos(wl.local, point);
        let q1 = fg.pos(wl.local, point + 1);
        let r = fg.chord_at[q0 as usize];
        if fg.chord_at[q1 as usize] != r {
            return Err(Error::MoveNotApplicable {
                reason: format!("wall {i} of edge {eta} has no returning arc at {point}"),
            });
        }
        if removed.contains(&(wl.face_class, r)) {
            return Err(Error::MoveNotApplicable {
                reason: format!("walls of edge {eta} share one arc; not a tongue"),
            });
        }
        for c in &p.faces[wl.face_class].closed {
            if curve_region(fg, c) == fg.region_of_edge_gap(wl.local, point + 1) {
                return Err(Error::MoveNotApplicable {
                    reason: format!("a closed curve sits under the tongue on face {}", wl.face_class),
                });
            }
        }
        rw.remove_arc(wl.face_class, r);
        removed.push((wl.face_class, r));
        returning[i] = Some(r);
    }

    let kd = walls[wall].face_class;
    let ld = walls[wall].local;
    let fg = &analysis.faces[kd];
    let q0 = fg.pos(ld, point);
    let q1 = fg.pos(ld, point + 1);
    let a1 = fg.chord_at[q0 as usize];
    let a2 = fg.chord_at[q1 as usize];
    if a1 == a2 {
        return Err(Error::MoveNotApplicable {
            reason: format!("the tongue at edge {eta} closes into a bubble on face {kd}"),
        });
    }
    if removed.contains(&(kd, a1)) || removed.contains(&(kd, a2)) {
        return Err(Error::MoveNotApplicable {
            reason: format!("walls of edge {eta} share one arc; not a tongue"),
        });
    }
    for c in &p.faces[kd].closed {
        if curve_region(fg, c) == fg.region_of_edge_gap(ld, point + 1) {
            return Err(Error::MoveNotApplicable {
                reason: format!("a closed curve sits inside the tongue mouth on face {kd}"),
            });
        }
    }
    let other_end = |a: usize, not: ArcEnd| -> ArcEnd {
        let [e0, e1] = p.faces[kd].arcs[a].ends;
        if e0 == not {
            e1
        } else {
            e0
        }
    };
    let x = other_end(a1, ArcEnd::new(ld, point));
    let y = other_end(a2, ArcEnd::new(ld, point + 1));
    rw.remove_arc(kd, a1);
    rw.remove_arc(kd, a2);
    let m_slot = rw.add_arc(
        kd,
        [
            EndSpec::old(x.local_edge, x.point),
            EndSpec::old(y.local_edge, y.point),
        ],
    );

    // Fan entries away from the chosen wall each hold one bigon slab of the
    // tongue; it must be a disc and it goes away.
    let len = walls.len();
    for (j, entry) in fan.iter().enumerate() {
        let enter_wall = (j + len - 1) % len;
        let exit_wall = j;
        if enter_wall == wall || exit_wall == wall {
            continue;
        }
        let tg = &analysis.tets[entry.tet];
        let r = returning[enter_wall].unwrap();
        let (c, _) = tg.circle_of_arc(entry.enter_face, r).ok_or_else(|| {
            Error::ValidationError("returning arc missing from tet boundary".into())
        })?;
        if tg.circles[c].items.len() != 2 {
            return Err(Error::MoveNotApplicable {
                reason: format!("tongue slab in tet {} is not a bigon", entry.tet),
            });
        }
        let piece = tg.piece_of_circle(p, c);
        if !p.tets[entry.tet].pieces[piece].is_disc() {
            return Err(Error::MoveNotApplicable {
                reason: format!("tongue slab in tet {} bounds a tube", entry.tet),
            });
        }
        rw.remove_piece(entry.tet, piece);
    }

    rw.remove_point(eta, point);
    rw.remove_point(eta, point + 1);

    let mut applied = rw.apply()?;
    applied.fill_default()?;
    let out = applied.finish()?;
    if out.pattern.euler_characteristic() != p.euler_characteristic() {
        return Err(Error::ValidationError(format!(
            "edge move at {eta} changed Euler characteristic"
        )));
    }
    let inverse = Move::new(
        MoveKind::E1,
        SimplexRef::new(1, eta),
        Selector::EdgeUp {
            gap: point,
            wall,
            arc: out.added_arcs[kd][m_slot],
        },
    );
    Ok((out.pattern, inverse))
}

pub(super) fn candidates(
    p: &TransversePattern,
    analysis: &Analysis,
    out: &mut Vec<Move>,
) -> Result<()> {
    for eta in 0..p.tri.edge_count() {
        let walls = match fan_walls(p, analysis, eta) {
            Ok(w) => w,
            Err(Error::MoveNotApplicable { .. }) => continue,
            Err(e) => return Err(e),
        };
        let locus = SimplexRef::new(1, eta);
        let w = p.edge_points[eta];
        for (d, wl) in walls.iter().enumerate() {
            let fg = &analysis.faces[wl.face_class];
            for gap in 0..=w {
                let region = fg.region_of_edge_gap(wl.local, gap);
                if p.faces[wl.face_class]
                    .closed
                    .iter()
                    .any(|c| curve_region(fg, c) == region)
                {
                    continue;
                }
                for arc in 0..p.faces[wl.face_class].arcs.len() {
                    let (ra, rb) = fg.chord_regions(arc);
                    if region == ra || region == rb {
                        out.push(Move::new(
                            MoveKind::E1,
                            locus,
                            Selector::EdgeUp { gap, wall: d, arc },
                        ));
                    }
                }
            }
        }
        for point in 0..w.saturating_sub(1) {
            'wall: for d in 0..walls.len() {
                for (i, wl) in walls.iter().enumerate() {
                    if i == d {
                        continue;
                    }
                    let fg = &analysis.faces[wl.face_class];
                    let q0 = fg.pos(wl.local, point);
                    let q1 = fg.pos(wl.local, point + 1);
                    if fg.chord_at[q0 as usize] != fg.chord_at[q1 as usize] {
                        continue 'wall;
                    }
                }
                out.push(Move::new(
                    MoveKind::E1Inverse,
                    locus,
                    Selector::EdgeDown { point, wall: d },
                ));
            }
        }
    }
    Ok(())
}
