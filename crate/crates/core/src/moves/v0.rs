//! Passing the surface through a vertex. The edge ends at the vertex split
//! into "down" ends (their nearest crossing point is consumed) and "up" ends
//! (a new nearest point appears); per face corner the nearest sheet is cut
//! loose, slid, or re-attached accordingly. The empty-down case creates a
//! full vertex link, the full-down case collapses one.

use std::collections::BTreeMap;

use super::edit::{EndSpec, Rewrite};
use super::{EndRef, Move, MoveKind, Selector};
use crate::error::{Error, Result};
use crate::pattern::{Analysis, ArcEnd, TransversePattern};
use crate::tricomplex::{SimplexRef, EDGE_VERTICES};

/// The vertex's link combinatorics: one node per incident edge-class end,
/// one link edge per face corner at the vertex.
struct Link {
    nodes: Vec<EndRef>,
    /// (face class, face corner, locals of the corner's two ends, node ids).
    corners: Vec<Corner>,
    /// (tet, tet-local vertex, node ids of the three ends).
    tet_corners: Vec<(usize, u8, [usize; 3])>,
}

struct Corner {
    face_class: usize,
    corner: u8,
    locals: [u8; 2],
    nodes: [usize; 2],
}

fn end_is_head(tri: &crate::tricomplex::Triangulation, tet: usize, e: u8, u: u8) -> bool {
    let (x, y) = EDGE_VERTICES[e as usize];
    if tri.edge_sign(tet, e) > 0 {
        u == y
    } else {
        u == x
    }
}

/// Corner vertex (tet-local) of face corner `j` in one incidence, from the
/// tet edges its two locals carry.
fn corner_vertex(tet_edge: &[u8; 3], j: u8) -> u8 {
    let ls: Vec<u8> = (0..3u8).filter(|&l| l != j).collect();
    let (a1, b1) = EDGE_VERTICES[tet_edge[ls[0] as usize] as usize];
    let (a2, b2) = EDGE_VERTICES[tet_edge[ls[1] as usize] as usize];
    if a1 == a2 || a1 == b2 {
        a1
    } else {
        debug_assert!(b1 == a2 || b1 == b2);
        b1
    }
}

fn build_link(p: &TransversePattern, analysis: &Analysis, v: usize) -> Result<Link> {
    let tri = &p.tri;
    let mut nodes = Vec::new();
    for e in 0..tri.edge_count() {
        let (a, b) = tri.edge_endpoints(e);
        if (a == v || b == v) && tri.edge_reversed(e) {
            return Err(Error::MoveNotApplicable {
                reason: format!("edge {e} at vertex {v} glues to itself reversed"),
            });
        }
        if a == v {
            nodes.push(EndRef::new(e, false));
        }
        if b == v {
            nodes.push(EndRef::new(e, true));
        }
    }
    nodes.sort();
    if nodes.is_empty() {
        return Err(Error::MoveNotApplicable {
            reason: format!("vertex {v} has no incident edges"),
        });
    }
    let node_id = |n: EndRef| nodes.binary_search(&n).ok();

    let mut corners = Vec::new();
    for (c, fg) in analysis.faces.iter().enumerate() {
        let rep = &fg.incidences[0];
        for j in 0..3u8 {
            let u = corner_vertex(&rep.tet_edge, j);
            if tri.vertex_class(rep.tet, u) != v {
                continue;
            }
            let ls: Vec<u8> = (0..3u8).filter(|&l| l != j).collect();
            let mut ids = [0usize; 2];
            for (s, &l) in ls.iter().enumerate() {
                let te = rep.tet_edge[l as usize];
                let n = EndRef::new(fg.edge_class[l as usize], end_is_head(tri, rep.tet, te, u));
                ids[s] = node_id(n).ok_or_else(|| {
                    Error::ValidationError(format!("vertex {v}: corner end not in link"))
                })?;
            }
            corners.push(Corner {
                face_class: c,
                corner: j,
                locals: [ls[0], ls[1]],
                nodes: ids,
            });
        }
    }

    let mut tet_corners = Vec::new();
    for &(t, i) in tri.vertex_incidences(v) {
        let mut ids = [0usize; 3];
        let mut s = 0;
        for e in 0..6u8 {
            let (x, y) = EDGE_VERTICES[e as usize];
            if x != i && y != i {
                continue;
            }
            let n = EndRef::new(tri.edge_class(t, e), end_is_head(tri, t, e, i));
            ids[s] = node_id(n).ok_or_else(|| {
                Error::ValidationError(format!("vertex {v}: tet corner end not in link"))
            })?;
            s += 1;
        }
        debug_assert_eq!(s, 3);
        tet_corners.push((t, i, ids));
    }
    Ok(Link {
        nodes,
        corners,
        tet_corners,
    })
}

fn connected(n: usize, adj: &[Vec<usize>], keep: &[bool]) -> bool {
    let total = keep.iter().filter(|&&k| k).count();
    if total == 0 {
        return true;
    }
    let start = keep.iter().position(|&k| k).unwrap();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 0;
    while let Some(x) = stack.pop() {
        count += 1;
        for &y in &adj[x] {
            if keep[y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    count == total
}

fn nearest_point(p: &TransversePattern, n: EndRef) -> Option<u32> {
    let w = p.edge_points[n.edge_class];
    if w == 0 {
        None
    } else if n.head {
        Some(w - 1)
    } else {
        Some(0)
    }
}

pub(super) fn apply(
    p: &TransversePattern,
    v: usize,
    down: &[EndRef],
    label: bool,
) -> Result<(TransversePattern, Move)> {
    let analysis = p.analyze()?;
    let link = build_link(p, &analysis, v)?;
    let n = link.nodes.len();

    if down.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MoveNotApplicable {
            reason: "selector ends must be sorted and distinct".into(),
        });
    }
    let mut is_down = vec![false; n];
    for &d in down {
        match link.nodes.binary_search(&d) {
            Ok(i) => is_down[i] = true,
            Err(_) => {
                return Err(Error::MoveNotApplicable {
                    reason: format!(
                        "edge {} has no {} end at vertex {v}",
                        d.edge_class,
                        if d.head { "head" } else { "tail" }
                    ),
                })
            }
        }
    }
    let n_down = down.len();
    let creation = n_down == 0;
    let collapse = n_down == n;

    // Every down end consumes its nearest point; an edge with both ends down
    // needs a point for each.
    let mut demand: BTreeMap<usize, u32> = BTreeMap::new();
    for (i, node) in link.nodes.iter().enumerate() {
        if is_down[i] {
            *demand.entry(node.edge_class).or_insert(0) += 1;
        }
    }
    for (&e, &need) in &demand {
        if p.edge_points[e] < need {
            return Err(Error::MoveNotApplicable {
                reason: format!("edge {e} carries too few points for the down ends"),
            });
        }
    }

    // Closed curves near the vertex could be swept by the moving sheet;
    // decline rather than guess their side.
    for corner in &link.corners {
        if !p.faces[corner.face_class].closed.is_empty() {
            return Err(Error::MoveNotApplicable {
                reason: format!(
                    "face {} at vertex {v} carries closed curves",
                    corner.face_class
                ),
            });
        }
    }

    // The moved sheet is a disc around the vertex: both sides of the
    // partition must be connected in the link.
    let mut adj = vec![Vec::new(); n];
    for corner in &link.corners {
        let [a, b] = corner.nodes;
        adj[a].push(b);
        adj[b].push(a);
    }
    let up_mask: Vec<bool> = is_down.iter().map(|&d| !d).collect();
    if !connected(n, &adj, &is_down) || !connected(n, &adj, &up_mask) {
        return Err(Error::MoveNotApplicable {
            reason: "down and up ends must each be connected in the vertex link".into(),
        });
    }

    let mut rw = Rewrite::new(p, &analysis);

    // Points: consume down nearest points, insert up nearest points.
    let mut removed_bit_of_first_down = false;
    let mut slot_of_node: Vec<Option<usize>> = vec![None; n];
    let mut first_down = true;
    for (i, node) in link.nodes.iter().enumerate() {
        if is_down[i] {
            let near = nearest_point(p, *node).unwrap();
            if first_down {
                removed_bit_of_first_down = p.point_dirs[node.edge_class][near as usize];
                first_down = false;
            }
            rw.remove_point(node.edge_class, near);
        } else {
            let gap = if node.head {
                p.edge_points[node.edge_class]
            } else {
                0
            };
            slot_of_node[i] = Some(rw.insert_point(node.edge_class, gap, false));
        }
    }
    if creation {
        rw.seed_point_bit(
            link.nodes[0].edge_class,
            slot_of_node[0].unwrap(),
            label,
        );
    }

    // Face corners: cut, slide, or add the nearest sheet's arc.
    let mut corner_arc: BTreeMap<(usize, u8), usize> = BTreeMap::new();
    for corner in &link.corners {
        let fg = &analysis.faces[corner.face_class];
        let [i, j] = corner.nodes;
        let [li, lj] = corner.locals;
        match (is_down[i], is_down[j]) {
            (true, true) => {
                let pi = fg.pos(li, nearest_point(p, link.nodes[i]).unwrap());
                let pj = fg.pos(lj, nearest_point(p, link.nodes[j]).unwrap());
                let arc = fg.chord_at[pi as usize];
                if arc != fg.chord_at[pj as usize] {
                    return Err(Error::MoveNotApplicable {
                        reason: format!(
                            "face {} corner {}: nearest points are not joined by a corner arc",
                            corner.face_class, corner.corner
                        ),
                    });
                }
                rw.remove_arc(corner.face_class, arc);
                corner_arc.insert((corner.face_class, corner.corner), arc);
            }
            (false, false) => {
                rw.add_arc(
                    corner.face_class,
                    [
                        EndSpec::new(li, slot_of_node[i].unwrap()),
                        EndSpec::new(lj, slot_of_node[j].unwrap()),
                    ],
                );
            }
            (di, _) => {
                // One down, one up: the arc ending at the down nearest point
                // swings that end over to the new up point.
                let (d, u, ld, lu) = if di { (i, j, li, lj) } else { (j, i, lj, li) };
                let near = nearest_point(p, link.nodes[d]).unwrap();
                let arc = fg.chord_at[fg.pos(ld, near) as usize];
                let want = ArcEnd::new(ld, near);
                let slot = p.faces[corner.face_class].arcs[arc]
                    .ends
                    .iter()
                    .position(|&e| e == want)
                    .unwrap() as u8;
                rw.retarget_end(
                    corner.face_class,
                    arc,
                    slot,
                    EndSpec::new(lu, slot_of_node[u].unwrap()),
                )?;
            }
        }
    }

    // Tet corners with all three ends down lose their triangle disc.
    for &(t, i, ids) in &link.tet_corners {
        if !ids.iter().all(|&id| is_down[id]) {
            continue;
        }
        let tg = &analysis.tets[t];
        let mut circle = None;
        for k in 0..4u8 {
            if k == i {
                continue;
            }
            let class = p.tri.face_class(t, k);
            // Locate this tet's slot in the face class, then the corner of
            // the face sitting at tet vertex i.
            let fg = &analysis.faces[class];
            let inc = fg
                .incidences
                .iter()
                .position(|g| g.tet == t && g.face == k)
                .ok_or_else(|| Error::ValidationError("incidence missing".into()))?;
            let te = &fg.incidences[inc].tet_edge;
            let j = (0..3u8)
                .find(|&j| corner_vertex(te, j) == i)
                .ok_or_else(|| Error::ValidationError("tet corner without face corner".into()))?;
            let arc = *corner_arc.get(&(class, j)).ok_or_else(|| {
                Error::ValidationError("triangle corner arc was not removed".into())
            })?;
            let (c, _) = tg.circle_of_arc(k, arc).ok_or_else(|| {
                Error::ValidationError("corner arc missing from tet boundary".into())
            })?;
            match circle {
                None => circle = Some(c),
                Some(c0) if c0 == c => {}
                _ => {
                    return Err(Error::MoveNotApplicable {
                        reason: format!("tet {t}: corner arcs at vertex {v} are not one triangle"),
                    })
                }
            }
        }
        let c = circle.unwrap();
        if tg.circles[c].items.len() != 3 {
            return Err(Error::MoveNotApplicable {
                reason: format!("tet {t}: nearest sheet at vertex {v} is not a triangle"),
            });
        }
        let piece = tg.piece_of_circle(p, c);
        if !p.tets[t].pieces[piece].is_disc() {
            return Err(Error::MoveNotApplicable {
                reason: format!("tet {t}: corner triangle bounds a tube, not a disc"),
            });
        }
        rw.remove_piece(t, piece);
    }

    let mut applied = rw.apply()?;
    applied.fill_default()?;
    let out = applied.finish()?;

    let expected_chi = p.euler_characteristic()
        + if creation {
            2
        } else if collapse {
            -2
        } else {
            0
        };
    if out.pattern.euler_characteristic() != expected_chi {
        return Err(Error::ValidationError(format!(
            "vertex move at {v} changed Euler characteristic unexpectedly"
        )));
    }

    let inv_down: Vec<EndRef> = link
        .nodes
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_down[*i])
        .map(|(_, &n)| n)
        .collect();
    let inverse = Move::new(
        MoveKind::V0,
        SimplexRef::new(0, v),
        Selector::Vertex {
            down: inv_down,
            label: if collapse {
                removed_bit_of_first_down
            } else {
                false
            },
        },
    );
    Ok((out.pattern, inverse))
}

pub(super) fn candidates(
    p: &TransversePattern,
    analysis: &Analysis,
    out: &mut Vec<Move>,
) -> Result<()> {
    for v in 0..p.tri.vertex_count() {
        let link = match build_link(p, analysis, v) {
            Ok(l) => l,
            Err(Error::MoveNotApplicable { .. }) => continue,
            Err(e) => return Err(e),
        };
        let locus = SimplexRef::new(0, v);
        for label in [false, true] {
            out.push(Move::new(
                MoveKind::V0,
                locus,
                Selector::Vertex {
                    down: Vec::new(),
                    label,
                },
            ));
        }
        let n = link.nodes.len();
        if n > 16 {
            // An exponential family; only the closed-form cases are offered.
            out.push(Move::new(
                MoveKind::V0,
                locus,
                Selector::Vertex {
                    down: link.nodes.clone(),
                    label: false,
                },
            ));
            continue;
        }
        let mut adj = vec![0u32; n];
        for corner in &link.corners {
            let [a, b] = corner.nodes;
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let mask_connected = |mask: u32| -> bool {
            if mask == 0 {
                return true;
            }
            let start = mask.trailing_zeros();
            let mut seen = 1u32 << start;
            loop {
                let mut next = seen;
                let mut bits = seen;
                while bits != 0 {
                    let x = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    next |= adj[x] & mask;
                }
                if next == seen {
                    break;
                }
                seen = next;
            }
            seen == mask
        };
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for mask in 1..=full {
            if !mask_connected(mask) || !mask_connected(full & !mask) {
                continue;
            }
            let down: Vec<EndRef> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| link.nodes[i]).collect();
            out.push(Move::new(
                MoveKind::V0,
                locus,
                Selector::Vertex { down, label: false },
            ));
        }
    }
    Ok(())
}
