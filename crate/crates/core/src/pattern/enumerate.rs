//! Bounded-weight enumeration of pattern classes.
//!
//! The search runs over edge-weight vectors, then over non-crossing perfect
//! matchings of the boundary positions of every face, then over piece
//! assignments (all discs, or one annulus in some tets), then over the
//! coherent side labelings. Candidates expand in parallel per weight
//! vector; a single sequential merge deduplicates into the result set.

use super::canon::{canonical_class, CanonicalClass};
use super::facegeom::face_frame;
use super::orient::OrientSystem;
use super::tetgeom::tet_skeleton;
use super::{ArcEnd, FaceArc, FaceGeometry, Piece, TransversePattern};
use crate::error::{Error, Result};
use crate::tricomplex::Triangulation;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumMode {
    /// Disc pieces only.
    Normal,
    /// Disc pieces plus at most one annulus per tet.
    AlmostNormal,
}

/// Cap on intermediate and final class counts.
#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    pub max_classes: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_classes: 200_000,
        }
    }
}

/// Non-crossing perfect matchings of the positions `lo..hi`.
fn matchings_in(lo: u32, hi: u32) -> Vec<Vec<(u32, u32)>> {
    if lo >= hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // Pair `lo` with a partner leaving even runs on both sides.
    let mut j = lo + 1;
    while j < hi {
        let inner = matchings_in(lo + 1, j);
        let outer = matchings_in(j + 1, hi);
        for inn in &inner {
            for out_m in &outer {
                let mut m = Vec::with_capacity(((hi - lo) / 2) as usize);
                m.push((lo, j));
                m.extend_from_slice(inn);
                m.extend_from_slice(out_m);
                out.push(m);
            }
        }
        j += 2;
    }
    out
}

/// All complete, duplicate-free pattern classes of weight at most
/// `max_weight`, sorted by (weight, digest). Every coherent side labeling
/// counts as its own class.
pub fn enumerate_classes(
    tri: &Arc<Triangulation>,
    max_weight: u32,
    mode: EnumMode,
    limits: EnumLimits,
) -> Result<Vec<CanonicalClass>> {
    // Edge-weight vectors, pruned by face parity and content restrictions.
    let n_edges = tri.edge_count();
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; n_edges];
    gen_vectors(tri, max_weight, 0, &mut cur, &mut vectors);

    let chunks: Vec<Result<Vec<CanonicalClass>>> = vectors
        .par_iter()
        .map(|w| expand_vector(tri, w, mode, limits.max_classes))
        .collect();

    let mut classes: BTreeMap<String, CanonicalClass> = BTreeMap::new();
    for chunk in chunks {
        for class in chunk? {
            classes.insert(class.digest.clone(), class);
            if classes.len() > limits.max_classes {
                return Err(Error::BudgetExceeded {
                    what: "enumerated pattern classes".into(),
                    limit: limits.max_classes as u64,
                });
            }
        }
    }
    let mut out: Vec<CanonicalClass> = classes.into_values().collect();
    out.sort_by(|a, b| (a.weight, &a.digest).cmp(&(b.weight, &b.digest)));
    Ok(out)
}

fn gen_vectors(
    tri: &Triangulation,
    budget: u32,
    e: usize,
    cur: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if e == cur.len() {
        // Faces need an even number of boundary positions, and faces
        // identified with themselves cannot carry content.
        for c in 0..tri.face_count() {
            let slots = tri.face_incidences(c);
            let (t, k) = slots[0];
            let mut n = 0u32;
            for l in 0..3 {
                let a = crate::tricomplex::FACE_VERTICES[k as usize];
                let (u, v) = (a[(l + 1) % 3], a[(l + 2) % 3]);
                n += cur[tri.edge_class(t, crate::tricomplex::edge_index(u, v))];
            }
            if n % 2 == 1 || (slots.len() < 2 && n > 0) {
                return;
            }
        }
        out.push(cur.clone());
        return;
    }
    let top = if tri.edge_reversed(e) { 0 } else { budget };
    for w in 0..=top {
        cur[e] = w;
        gen_vectors(tri, budget - w, e + 1, cur, out);
    }
    cur[e] = 0;
}

fn expand_vector(
    tri: &Arc<Triangulation>,
    weights: &[u32],
    mode: EnumMode,
    cap: usize,
) -> Result<Vec<CanonicalClass>> {
    // Matchings per face, as arc lists.
    let mut face_choices: Vec<Vec<Vec<FaceArc>>> = Vec::with_capacity(tri.face_count());
    for c in 0..tri.face_count() {
        let frame = face_frame(tri, c, weights)?;
        let matchings = matchings_in(0, frame.n);
        let mut arcs_per = Vec::with_capacity(matchings.len());
        for m in matchings {
            let mut arcs: Vec<FaceArc> = m
                .iter()
                .map(|&(a, b)| {
                    let (l1, p1) = frame.point_at(a);
                    let (l2, p2) = frame.point_at(b);
                    FaceArc::new(ArcEnd::new(l1, p1), ArcEnd::new(l2, p2))
                })
                .collect();
            arcs.sort();
            arcs_per.push(arcs);
        }
        face_choices.push(arcs_per);
    }

    let mut out = Vec::new();
    let mut pick = vec![0usize; tri.face_count()];
    loop {
        // One skeleton per combination of face matchings.
        let mut p = TransversePattern::empty(Arc::clone(tri));
        for (e, &w) in weights.iter().enumerate() {
            p.edge_points[e] = w;
            p.point_dirs[e] = vec![false; w as usize];
        }
        for c in 0..tri.face_count() {
            p.faces[c].arcs = face_choices[c][pick[c]].clone();
        }
        expand_pieces(tri, &mut p, mode, cap, &mut out)?;
        if out.len() > cap {
            return Err(Error::BudgetExceeded {
                what: "enumerated pattern classes".into(),
                limit: cap as u64,
            });
        }

        // Advance the odometer.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < face_choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn expand_pieces(
    tri: &Arc<Triangulation>,
    p: &mut TransversePattern,
    mode: EnumMode,
    cap: usize,
    out: &mut Vec<CanonicalClass>,
) -> Result<()> {
    let mut face_geoms = Vec::with_capacity(tri.face_count());
    for c in 0..tri.face_count() {
        face_geoms.push(FaceGeometry::build(tri, c, &p.faces[c], &p.edge_points)?);
    }
    // Piece options per tet: all discs, plus (almost-normal) one annulus
    // over each pair of circles that cobound a unique region.
    let mut options: Vec<Vec<Vec<Piece>>> = Vec::with_capacity(tri.tet_count());
    for t in 0..tri.tet_count() {
        let sk = tet_skeleton(p, t, &face_geoms)?;
        let n = sk.circles.len();
        let discs: Vec<Piece> = (0..n).map(|i| Piece::Disc { circle: i }).collect();
        let mut opts = vec![discs];
        if mode == EnumMode::AlmostNormal {
            for c1 in 0..n {
                for c2 in (c1 + 1)..n {
                    let s1 = sk.circles[c1].sides;
                    let s2 = sk.circles[c2].sides;
                    let mut common = Vec::new();
                    for x in s1 {
                        if s2.contains(&x) && !common.contains(&x) {
                            common.push(x);
                        }
                    }
                    if common.len() != 1 {
                        continue;
                    }
                    let mut pieces: Vec<Piece> = (0..n)
                        .filter(|&i| i != c1 && i != c2)
                        .map(|i| Piece::Disc { circle: i })
                        .collect();
                    pieces.push(Piece::Annulus { circles: [c1, c2] });
                    pieces.sort();
                    opts.push(pieces);
                }
            }
        }
        options.push(opts);
    }

    let mut pick = vec![0usize; tri.tet_count()];
    loop {
        for t in 0..tri.tet_count() {
            p.tets[t].pieces = options[t][pick[t]].clone();
        }
        // A piece choice may leave no coherent side labeling (one-sided
        // gluing); skip those, keep every labeling of the rest.
        let analysis = p.analyze()?;
        if let Ok(sys) = OrientSystem::build(p, &analysis) {
            if sys.n_components > 16 {
                return Err(Error::BudgetExceeded {
                    what: "orientation components".into(),
                    limit: 16,
                });
            }
            for mask in 0u32..(1 << sys.n_components) {
                let root_bits: Vec<bool> =
                    (0..sys.n_components).map(|i| mask >> i & 1 == 1).collect();
                let bits = sys.assignment(&root_bits);
                let mut q = p.clone();
                sys.write_bits(&mut q, &bits);
                out.push(canonical_class(&q, false)?);
                if out.len() > cap {
                    return Err(Error::BudgetExceeded {
                        what: "enumerated pattern classes".into(),
                        limit: cap as u64,
                    });
                }
            }
        }

        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(());
            }
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
