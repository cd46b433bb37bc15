//! Projection onto crudely (almost) normal form. Every closed face curve is
//! compressed along the disc it bounds in its face — deleting bubbles,
//! pulling tubes flat, or cutting a tube pair — and the sphere components
//! this strips off are reported separately from the one kept class of the
//! target genus. Path conversion runs the projection after every move of a
//! scripted isotopy.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::sync::Arc;

use super::edit::{Applied, Rewrite};
use super::{apply_move, Move};
use crate::error::{Error, Result};
use crate::pattern::{
    canonical_digest, canonicalize, surface_topology_from, Analysis, CanonicalClass, ClosedCurve,
    Piece, SurfaceTopology, TransversePattern,
};
use crate::tricomplex::Triangulation;

/// A crudely (almost) normal class together with the sphere classes the
/// projection split off, in the order they appeared.
#[derive(Debug, Clone)]
pub struct NormalizeOutcome {
    pub class: CanonicalClass,
    pub spheres: Vec<CanonicalClass>,
}

/// Whether a closed face curve bounds a disc on the surface carrying it.
///
/// Cut the surface along the curve: pieces are nodes, and every arc or
/// other curve joins the pieces flanking it. If the curve's two flanking
/// pieces stay connected it separates nothing and is essential; otherwise it
/// bounds a disc exactly when one half has the characteristic of a disc.
pub(crate) fn circle_bounds_disc(
    p: &TransversePattern,
    analysis: &Analysis,
    face_class: usize,
    curve: usize,
) -> Result<bool> {
    let mut base = vec![0usize; p.tets.len()];
    let mut n = 0;
    let mut nodes = Vec::new();
    for (t, tp) in p.tets.iter().enumerate() {
        base[t] = n;
        n += tp.pieces.len();
        nodes.extend((0..tp.pieces.len()).map(|pi| (t, pi)));
    }

    let arc_sides = |f: usize, ai: usize| -> Result<Vec<usize>> {
        let fg = &analysis.faces[f];
        let mut v = Vec::with_capacity(2);
        for inc in &fg.incidences {
            let tg = &analysis.tets[inc.tet];
            let (c, _) = tg.circle_of_arc(inc.face, ai).ok_or_else(|| {
                Error::ValidationError(format!("face {f}: arc {ai} missing from the skeleton"))
            })?;
            v.push(base[inc.tet] + tg.piece_of_circle(p, c));
        }
        Ok(v)
    };
    let curve_sides = |f: usize, cj: usize| -> Result<Vec<usize>> {
        let fg = &analysis.faces[f];
        let mut v = Vec::with_capacity(2);
        for inc in &fg.incidences {
            let tg = &analysis.tets[inc.tet];
            let c = tg.circle_of_closed(inc.face, cj).ok_or_else(|| {
                Error::ValidationError(format!("face {f}: curve {cj} missing from the skeleton"))
            })?;
            v.push(base[inc.tet] + tg.piece_of_circle(p, c));
        }
        Ok(v)
    };

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in 0..p.faces.len() {
        for ai in 0..p.faces[f].arcs.len() {
            let s = arc_sides(f, ai)?;
            if s.len() == 2 {
                adj[s[0]].push(s[1]);
                adj[s[1]].push(s[0]);
            }
        }
        for cj in 0..p.faces[f].closed.len() {
            if f == face_class && cj == curve {
                continue;
            }
            let s = curve_sides(f, cj)?;
            if s.len() == 2 {
                adj[s[0]].push(s[1]);
                adj[s[1]].push(s[0]);
            }
        }
    }
    let gamma = curve_sides(face_class, curve)?;
    if gamma.len() != 2 || gamma[0] == gamma[1] {
        return Ok(false);
    }

    let reach = |start: usize| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let half_a = reach(gamma[0]);
    if half_a[gamma[1]] {
        return Ok(false);
    }
    let half_b = reach(gamma[1]);

    // The cut curve itself adds nothing to either half's characteristic.
    let chi = |half: &[bool]| -> Result<i64> {
        let mut discs = 0i64;
        for (idx, &(t, pi)) in nodes.iter().enumerate() {
            if half[idx] && p.tets[t].pieces[pi].is_disc() {
                discs += 1;
            }
        }
        let mut arcs = 0i64;
        let mut pts: BTreeSet<(usize, u32)> = BTreeSet::new();
        for f in 0..p.faces.len() {
            let fg = &analysis.faces[f];
            for (ai, arc) in p.faces[f].arcs.iter().enumerate() {
                if half[arc_sides(f, ai)?[0]] {
                    arcs += 1;
                    for end in &arc.ends {
                        pts.insert((fg.edge_class[end.local_edge as usize], end.point));
                    }
                }
            }
        }
        Ok(pts.len() as i64 - arcs + discs)
    };
    Ok(chi(&half_a)? == 1 || chi(&half_b)? == 1)
}

/// The sub-pattern made of the components with `keep[component]` set.
pub(crate) fn extract_components(
    p: &TransversePattern,
    analysis: &Analysis,
    topo: &SurfaceTopology,
    keep: &[bool],
) -> Result<TransversePattern> {
    let mut rw = Rewrite::new(p, analysis);
    for (e, comps) in topo.point_component.iter().enumerate() {
        for (i, &comp) in comps.iter().enumerate() {
            if !keep[comp] {
                rw.remove_point(e, i as u32);
            }
        }
    }
    for (f, fp) in p.faces.iter().enumerate() {
        let fg = &analysis.faces[f];
        for (ai, arc) in fp.arcs.iter().enumerate() {
            let e = fg.edge_class[arc.ends[0].local_edge as usize];
            if !keep[topo.point_component[e][arc.ends[0].point as usize]] {
                rw.remove_arc(f, ai);
            }
        }
        for (cj, &comp) in topo.curve_component[f].iter().enumerate() {
            if !keep[comp] {
                rw.remove_curve(f, cj);
            }
        }
    }
    for (t, tp) in p.tets.iter().enumerate() {
        for pi in 0..tp.pieces.len() {
            if !keep[topo.piece_component[&(t, pi)]] {
                rw.remove_piece(t, pi);
            }
        }
    }
    let mut ap = rw.apply()?;
    ap.fill_default()?;
    Ok(ap.finish()?.pattern)
}

/// The class of the sphere a closed face curve bubbles off: one curve in the
/// face's only region, capped by a disc in every tet it meets.
fn bubble_class(tri: &Arc<Triangulation>, face_class: usize, bit: bool) -> Result<CanonicalClass> {
    let mut q = TransversePattern::empty(tri.clone());
    q.faces[face_class].closed.push(ClosedCurve {
        anchor: (0, 0),
        side_toward: bit,
    });
    let analysis = q.analyze()?;
    for (t, tg) in analysis.tets.iter().enumerate() {
        for c in 0..tg.circles.len() {
            q.tets[t].pieces.push(Piece::Disc { circle: c });
        }
    }
    q.normalize_storage();
    canonicalize(&q)
}

fn remap_piece(piece: &Piece, ap: &Applied, t: usize) -> Result<Piece> {
    Ok(match piece {
        Piece::Disc { circle } => Piece::Disc {
            circle: ap.descendant(t, *circle)?,
        },
        Piece::Annulus { circles } => {
            let a = ap.descendant(t, circles[0])?;
            let b = ap.descendant(t, circles[1])?;
            Piece::Annulus {
                circles: [a.min(b), a.max(b)],
            }
        }
    })
}

/// Projects `p` onto a crudely (almost) normal pattern: a union of spheres
/// and one component of genus `genus` (for genus 0, at most one sphere
/// remains and the rest are reported). Every closed face curve must be
/// inessential on its surface; the projection compresses them all, never
/// raises the weight, and is idempotent.
pub fn normalize(p: &TransversePattern, genus: u32) -> Result<NormalizeOutcome> {
    p.validate()?;
    let mut q = p.clone();
    let mut spheres: Vec<CanonicalClass> = Vec::new();

    // Compress closed curves one at a time, re-reading the geometry after
    // each; every round removes the first curve, so this terminates.
    loop {
        let f = match (0..q.faces.len()).find(|&f| !q.faces[f].closed.is_empty()) {
            None => break,
            Some(f) => f,
        };
        let analysis = q.analyze()?;
        let fg = &analysis.faces[f];
        if fg.incidences.len() != 2 {
            return Err(Error::EssentialBoundaryCurve {
                witness: format!("closed curve 0 on self-glued face {f}"),
            });
        }
        let chi_before = q.euler_characteristic();
        let bit = q.faces[f].closed[0].side_toward;
        let side = |s: usize| -> Result<(usize, usize, usize)> {
            let inc = &fg.incidences[s];
            let tg = &analysis.tets[inc.tet];
            let c = tg.circle_of_closed(inc.face, 0).ok_or_else(|| {
                Error::ValidationError(format!("face {f}: curve 0 missing from the skeleton"))
            })?;
            Ok((inc.tet, tg.piece_of_circle(&q, c), c))
        };
        let (ta, pa, ca) = side(0)?;
        let (tb, pb, cb) = side(1)?;
        if (ta, pa) == (tb, pb) {
            return Err(Error::EssentialBoundaryCurve {
                witness: format!("closed curve 0 on face {f} has one piece on both sides"),
            });
        }
        let far_of = |t: usize, pi: usize, c: usize| -> Option<usize> {
            match q.tets[t].pieces[pi] {
                Piece::Disc { .. } => None,
                Piece::Annulus { circles } => Some(if circles[0] == c {
                    circles[1]
                } else {
                    circles[0]
                }),
            }
        };
        let next = match (far_of(ta, pa, ca), far_of(tb, pb, cb)) {
            (None, None) => {
                // Caps on both sides: the component is a bubble; delete it
                // whole and report its class.
                let mut rw = Rewrite::new(&q, &analysis);
                rw.remove_curve(f, 0);
                rw.remove_piece(ta, pa);
                rw.remove_piece(tb, pb);
                let mut ap = rw.apply()?;
                ap.fill_default()?;
                let next = ap.finish()?.pattern;
                if next.euler_characteristic() != chi_before - 2 {
                    return Err(Error::ValidationError(format!(
                        "deleting the bubble at face {f} miscounted the characteristic"
                    )));
                }
                spheres.push(bubble_class(&q.tri, f, bit)?);
                next
            }
            (fa @ Some(_), None) | (fa @ None, Some(_)) => {
                // Cap against tube: pulling the curve flat absorbs the cap,
                // and the compression pinches off one bubble sphere.
                let (cap, ann, far) = match fa {
                    Some(far) => ((tb, pb), (ta, pa), far),
                    None => ((ta, pa), (tb, pb), far_of(tb, pb, cb).unwrap()),
                };
                let mut rw = Rewrite::new(&q, &analysis);
                rw.remove_curve(f, 0);
                rw.remove_piece(cap.0, cap.1);
                let mut ap = rw.apply()?;
                let mut pieces = Vec::new();
                for (pi, piece) in q.tets[ann.0].pieces.iter().enumerate() {
                    if pi == ann.1 {
                        pieces.push(Piece::Disc {
                            circle: ap.descendant(ann.0, far)?,
                        });
                    } else if (ann.0, pi) != cap {
                        pieces.push(remap_piece(piece, &ap, ann.0)?);
                    }
                }
                ap.set_pieces(ann.0, pieces);
                ap.fill_default()?;
                let next = ap.finish()?.pattern;
                if next.euler_characteristic() != chi_before {
                    return Err(Error::ValidationError(format!(
                        "pulling the curve at face {f} flat miscounted the characteristic"
                    )));
                }
                spheres.push(bubble_class(&q.tri, f, bit)?);
                next
            }
            (Some(far_a), Some(far_b)) => {
                // Tubes on both sides: compressing cuts the surface along
                // the curve, so it must bound a disc on the surface.
                if !circle_bounds_disc(&q, &analysis, f, 0)? {
                    return Err(Error::EssentialBoundaryCurve {
                        witness: format!(
                            "closed curve 0 on face {f} bounds no disc on its surface"
                        ),
                    });
                }
                if ta == tb {
                    return Err(Error::ValidationError(format!("tet {ta} carries two tubes")));
                }
                let mut rw = Rewrite::new(&q, &analysis);
                rw.remove_curve(f, 0);
                let mut ap = rw.apply()?;
                for (t, pi, far) in [(ta, pa, far_a), (tb, pb, far_b)] {
                    let mut pieces = Vec::new();
                    for (qi, piece) in q.tets[t].pieces.iter().enumerate() {
                        if qi == pi {
                            pieces.push(Piece::Disc {
                                circle: ap.descendant(t, far)?,
                            });
                        } else {
                            pieces.push(remap_piece(piece, &ap, t)?);
                        }
                    }
                    ap.set_pieces(t, pieces);
                }
                ap.fill_default()?;
                let next = ap.finish()?.pattern;
                if next.euler_characteristic() != chi_before + 2 {
                    return Err(Error::ValidationError(format!(
                        "cutting the tubes at face {f} miscounted the characteristic"
                    )));
                }
                next
            }
        };
        q = next;
    }

    // Split off the sphere components; the rest must be one component of the
    // requested genus.
    let analysis = q.analyze()?;
    let topo = surface_topology_from(&q, &analysis);
    let n = topo.component_count();
    if genus == 0 {
        if topo.components.iter().any(|c| c.genus != Some(0)) {
            return Err(Error::GenusNotFound { genus: 0 });
        }
        if n <= 1 {
            return Ok(NormalizeOutcome {
                class: canonicalize(&q)?,
                spheres,
            });
        }
        let mut singles = Vec::with_capacity(n);
        for i in 0..n {
            let keep: Vec<bool> = (0..n).map(|j| j == i).collect();
            singles.push(canonicalize(&extract_components(&q, &analysis, &topo, &keep)?)?);
        }
        // Keep the heaviest sphere (ties to the smaller digest); report the
        // others.
        let keeper = (0..n)
            .min_by_key(|&i| (Reverse(singles[i].weight), singles[i].digest.clone()))
            .unwrap();
        let mut kept = None;
        for (i, s) in singles.into_iter().enumerate() {
            if i == keeper {
                kept = Some(s);
            } else {
                spheres.push(s);
            }
        }
        Ok(NormalizeOutcome {
            class: kept.unwrap(),
            spheres,
        })
    } else {
        let core: Vec<usize> = (0..n).filter(|&i| !topo.components[i].is_sphere()).collect();
        let c = match core[..] {
            [c] => c,
            _ => return Err(Error::GenusNotFound { genus }),
        };
        if topo.components[c].genus != Some(genus) {
            return Err(Error::GenusNotFound { genus });
        }
        for i in 0..n {
            if i != c {
                let keep: Vec<bool> = (0..n).map(|j| j == i).collect();
                spheres.push(canonicalize(&extract_components(&q, &analysis, &topo, &keep)?)?);
            }
        }
        let class = if n == 1 {
            canonicalize(&q)?
        } else {
            let keep: Vec<bool> = (0..n).map(|j| j == c).collect();
            canonicalize(&extract_components(&q, &analysis, &topo, &keep)?)?
        };
        Ok(NormalizeOutcome { class, spheres })
    }
}

/// Projects a scripted path of moves onto its class sequence: each step's
/// pattern is normalized, consecutive repeats collapse, and every step's
/// output is checked against the next step's input. The class sequence
/// never exceeds the weight bound of the input path.
pub fn convert_path(
    steps: &[(TransversePattern, Move)],
    genus: u32,
) -> Result<Vec<CanonicalClass>> {
    if steps.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out: Vec<CanonicalClass> = Vec::new();
    let mut max_in: u64 = 0;
    for (i, (p, m)) in steps.iter().enumerate() {
        max_in = max_in.max(p.weight());
        let no = normalize(p, genus)?;
        if out.last().map_or(true, |c| c.digest != no.class.digest) {
            out.push(no.class);
        }
        let next = apply_move(p, m)?;
        if let Some((succ, _)) = steps.get(i + 1) {
            if canonical_digest(&next) != canonical_digest(succ) {
                return Err(Error::ValidationError(format!(
                    "step {i}: the move's output is not step {}",
                    i + 1
                )));
            }
        } else {
            max_in = max_in.max(next.weight());
            let fo = normalize(&next, genus)?;
            if out.last().map_or(true, |c| c.digest != fo.class.digest) {
                out.push(fo.class);
            }
        }
    }
    let max_out = out.iter().map(|c| c.weight).max().unwrap_or(0);
    if max_out > max_in {
        return Err(Error::ValidationError(format!(
            "conversion raised the weight bound from {max_in} to {max_out}"
        )));
    }
    Ok(out)
}
