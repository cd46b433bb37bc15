//! Whole-pattern validation: storage shape, face- and tet-level
//! combinatorics, and side-label coherence.

use super::orient::OrientSystem;
use super::TransversePattern;
use crate::error::{Error, Result};

impl TransversePattern {
    /// Checks that the pattern is a well-formed transverse surface:
    ///
    /// * vectors sized to the triangulation, content in sorted storage order;
    /// * every edge position consumed by exactly one arc end per face, arcs
    ///   non-crossing, closed curves anchored canonically in their regions;
    /// * in every tet the boundary circles are consumed by exactly one piece
    ///   each, with at most one annulus whose ends cobound a region;
    /// * the transverse-direction labels are coherent along every sheet.
    pub fn validate(&self) -> Result<()> {
        let tri = &self.tri;
        if self.edge_points.len() != tri.edge_count()
            || self.point_dirs.len() != tri.edge_count()
            || self.faces.len() != tri.face_count()
            || self.tets.len() != tri.tet_count()
        {
            return Err(Error::ValidationError(
                "pattern vectors do not match the triangulation".into(),
            ));
        }
        for e in 0..tri.edge_count() {
            if self.point_dirs[e].len() != self.edge_points[e] as usize {
                return Err(Error::ValidationError(format!(
                    "edge {e}: {} direction bits for {} points",
                    self.point_dirs[e].len(),
                    self.edge_points[e]
                )));
            }
        }
        for (c, fp) in self.faces.iter().enumerate() {
            if !fp.arcs.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::ValidationError(format!(
                    "face {c}: arcs not in strictly sorted order"
                )));
            }
            if !fp.closed.windows(2).all(|w| w[0] <= w[1]) {
                return Err(Error::ValidationError(format!(
                    "face {c}: closed curves not in sorted order"
                )));
            }
        }
        for (t, tp) in self.tets.iter().enumerate() {
            if !tp.pieces.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::ValidationError(format!(
                    "tet {t}: pieces not in strictly sorted order"
                )));
            }
        }

        let analysis = self.analyze()?;

        // Closed curves must anchor at their region's canonical gap so that
        // equal drawings have equal encodings.
        for fg in &analysis.faces {
            for (i, curve) in self.faces[fg.class].closed.iter().enumerate() {
                let (l, gap) = curve.anchor;
                if l >= 3 || gap > fg.w[l as usize] {
                    return Err(Error::ValidationError(format!(
                        "face {}: closed curve {i} anchor out of range",
                        fg.class
                    )));
                }
                let region = fg.region_of_edge_gap(l, gap);
                if curve.anchor != fg.region_anchor(region) {
                    return Err(Error::ValidationError(format!(
                        "face {}: closed curve {i} not anchored canonically",
                        fg.class
                    )));
                }
            }
        }

        let sys = OrientSystem::build(self, &analysis)?;
        sys.check(self)?;
        Ok(())
    }
}
