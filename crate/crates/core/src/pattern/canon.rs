//! Canonical bytes, digests, and summary records for patterns.
//!
//! Patterns live in a fixed, labeled triangulation, and validation pins
//! every stored list to one sorted order, so equal drawings serialize to
//! equal bytes. The digest doubles as a graph-vertex key.

use super::orient::OrientSystem;
use super::topology::surface_topology_from;
use super::{Grade, Piece, TransversePattern};
use crate::error::Result;
use sha2::{Digest, Sha256};

fn push_u64(buf: &mut Vec<u8>, x: u64) {
    buf.extend_from_slice(&x.to_le_bytes());
}

pub(crate) fn encode(p: &TransversePattern) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(b"pat\0");
    buf.extend_from_slice(p.tri.canonical_hash().as_bytes());
    push_u64(&mut buf, p.edge_points.len() as u64);
    for &w in &p.edge_points {
        push_u64(&mut buf, w as u64);
    }
    for fp in &p.faces {
        push_u64(&mut buf, fp.arcs.len() as u64);
        for arc in &fp.arcs {
            for end in &arc.ends {
                buf.push(end.local_edge);
                push_u64(&mut buf, end.point as u64);
            }
        }
        push_u64(&mut buf, fp.closed.len() as u64);
        for curve in &fp.closed {
            buf.push(curve.anchor.0);
            push_u64(&mut buf, curve.anchor.1 as u64);
            buf.push(curve.side_toward as u8);
        }
    }
    for tp in &p.tets {
        push_u64(&mut buf, tp.pieces.len() as u64);
        for piece in &tp.pieces {
            match *piece {
                Piece::Disc { circle } => {
                    buf.push(0);
                    push_u64(&mut buf, circle as u64);
                }
                Piece::Annulus { circles } => {
                    buf.push(1);
                    push_u64(&mut buf, circles[0] as u64);
                    push_u64(&mut buf, circles[1] as u64);
                }
            }
        }
    }
    for dirs in &p.point_dirs {
        for &d in dirs {
            buf.push(d as u8);
        }
    }
    buf
}

/// Hex digest of the pattern's canonical bytes. Storage must already be in
/// sorted order (as `validate` enforces).
pub fn canonical_digest(p: &TransversePattern) -> String {
    let mut h = Sha256::new();
    h.update(encode(p));
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// A validated pattern together with its digest and cached summary data.
#[derive(Debug, Clone)]
pub struct CanonicalClass {
    pub digest: String,
    pub weight: u64,
    pub grade: Grade,
    pub euler_characteristic: i64,
    pub components: usize,
    /// Genus per component, in component order.
    pub component_genus: Vec<Option<u32>>,
    pub pattern: TransversePattern,
}

/// Validates, sorts storage, and summarizes a pattern. With
/// `quotient_sides` the side labels are first rewritten so that each
/// surface component's leading label is `false`, identifying the
/// `2^components` relabelings of one skeleton.
pub fn canonical_class(p: &TransversePattern, quotient_sides: bool) -> Result<CanonicalClass> {
    let mut q = p.clone();
    q.normalize_storage();
    q.validate()?;
    let analysis = q.analyze()?;
    if quotient_sides {
        let sys = OrientSystem::build(&q, &analysis)?;
        let bits = sys.minimal_equivalent(&q);
        sys.write_bits(&mut q, &bits);
    }
    let topo = surface_topology_from(&q, &analysis);
    Ok(CanonicalClass {
        digest: canonical_digest(&q),
        weight: q.weight(),
        grade: q.grade(),
        euler_characteristic: topo.euler_characteristic,
        components: topo.component_count(),
        component_genus: topo.components.iter().map(|c| c.genus).collect(),
        pattern: q,
    })
}

/// Canonical form of a pattern with side labels kept. Fails with a
/// closed-surface error when the pieces do not glue into a closed surface.
pub fn canonicalize(p: &TransversePattern) -> Result<CanonicalClass> {
    canonical_class(p, false).map_err(|e| match e {
        crate::error::Error::ValidationError(reason) => {
            crate::error::Error::NotClosedSurface { reason }
        }
        other => other,
    })
}
