//! Connected components and topology of the surface a pattern carries.
//!
//! The surface decomposes into tet pieces glued along face arcs and closed
//! face curves. Euler characteristic comes from the cell structure: edge
//! points are vertices, face arcs are edges, discs are faces. A closed
//! curve adds one vertex and one edge (net zero) and an annulus adds one
//! edge and one face (net zero), so `points - arcs + discs` covers every
//! case.

use super::tetgeom::Analysis;
use super::{Piece, TransversePattern};
use crate::error::Result;
use crate::uf::UnionFind;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTopology {
    pub pieces: usize,
    pub discs: usize,
    pub annuli: usize,
    pub points: usize,
    pub arcs: usize,
    pub closed_curves: usize,
    pub euler_characteristic: i64,
    /// Valid patterns carry coherent side labels, so their surfaces are
    /// two-sided; in an orientable manifold that makes every component
    /// orientable.
    pub orientable: bool,
    /// Genus from the characteristic, when the component is orientable with
    /// even characteristic at most 2.
    pub genus: Option<u32>,
}

impl ComponentTopology {
    pub fn is_sphere(&self) -> bool {
        self.euler_characteristic == 2
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceTopology {
    pub components: Vec<ComponentTopology>,
    pub euler_characteristic: i64,
    /// Component of each piece, keyed by (tet, piece index).
    pub piece_component: BTreeMap<(usize, usize), usize>,
    /// Component of each edge point, per edge class.
    pub point_component: Vec<Vec<usize>>,
    /// Component of each closed curve, per face class.
    pub curve_component: Vec<Vec<usize>>,
}

impl SurfaceTopology {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Genus of the unique non-sphere component; `Some(0)` when every
    /// component is a sphere, `None` when several non-spheres exist.
    pub fn core_genus(&self) -> Option<u32> {
        let non_spheres: Vec<&ComponentTopology> =
            self.components.iter().filter(|c| !c.is_sphere()).collect();
        match non_spheres.len() {
            0 => Some(0),
            1 => non_spheres[0].genus,
            _ => None,
        }
    }
}

pub fn surface_topology(p: &TransversePattern) -> Result<SurfaceTopology> {
    let analysis = p.analyze()?;
    Ok(surface_topology_from(p, &analysis))
}

pub(crate) fn surface_topology_from(p: &TransversePattern, analysis: &Analysis) -> SurfaceTopology {
    let tri = &p.tri;
    let mut offset = Vec::with_capacity(tri.tet_count());
    let mut total = 0usize;
    for t in 0..tri.tet_count() {
        offset.push(total);
        total += p.tets[t].pieces.len();
    }
    let mut uf = UnionFind::new(total);

    // Pieces meeting a shared interface (arc or closed curve) are joined.
    let piece_at = |t: usize, circle: usize| -> usize {
        offset[t] + analysis.tets[t].piece_of_circle(p, circle)
    };
    for c in 0..tri.face_count() {
        let fg = &analysis.faces[c];
        for a in 0..p.faces[c].arcs.len() {
            let mut sides = Vec::with_capacity(2);
            for inc in &fg.incidences {
                let tg = &analysis.tets[inc.tet];
                let (ci, _) = tg
                    .circle_of_arc(inc.face, a)
                    .expect("every arc instance lies on a circle");
                sides.push(piece_at(inc.tet, ci));
            }
            if sides.len() == 2 {
                uf.union(sides[0], sides[1]);
            }
        }
        for i in 0..p.faces[c].closed.len() {
            let mut sides = Vec::with_capacity(2);
            for inc in &fg.incidences {
                let tg = &analysis.tets[inc.tet];
                let ci = tg
                    .circle_of_closed(inc.face, i)
                    .expect("every closed curve forms a circle");
                sides.push(piece_at(inc.tet, ci));
            }
            if sides.len() == 2 {
                uf.union(sides[0], sides[1]);
            }
        }
    }
    let (comp_of, n_comp) = uf.number_classes();

    let orientable = tri.is_orientable();
    let mut components = vec![
        ComponentTopology {
            pieces: 0,
            discs: 0,
            annuli: 0,
            points: 0,
            arcs: 0,
            closed_curves: 0,
            euler_characteristic: 0,
            orientable,
            genus: None,
        };
        n_comp
    ];
    let mut piece_component = BTreeMap::new();
    for t in 0..tri.tet_count() {
        for (pi, piece) in p.tets[t].pieces.iter().enumerate() {
            let comp = comp_of[offset[t] + pi];
            piece_component.insert((t, pi), comp);
            components[comp].pieces += 1;
            match piece {
                Piece::Disc { .. } => components[comp].discs += 1,
                Piece::Annulus { .. } => components[comp].annuli += 1,
            }
        }
    }

    // Points and closed curves inherit the component of any piece that
    // touches them.
    let mut point_component: Vec<Vec<usize>> = p
        .edge_points
        .iter()
        .map(|&w| vec![usize::MAX; w as usize])
        .collect();
    let mut curve_component: Vec<Vec<usize>> = p
        .faces
        .iter()
        .map(|f| vec![usize::MAX; f.closed.len()])
        .collect();
    for (c, fg) in analysis.faces.iter().enumerate() {
        if fg.incidences.is_empty() || (p.faces[c].arcs.is_empty() && p.faces[c].closed.is_empty())
        {
            continue;
        }
        let inc = &fg.incidences[0];
        let tg = &analysis.tets[inc.tet];
        for (a, arc) in p.faces[c].arcs.iter().enumerate() {
            let (ci, _) = tg.circle_of_arc(inc.face, a).expect("arc lies on a circle");
            let comp = comp_of[piece_at(inc.tet, ci)];
            components[comp].arcs += 1;
            for end in &arc.ends {
                let e = fg.edge_class[end.local_edge as usize];
                let slot = &mut point_component[e][end.point as usize];
                debug_assert!(*slot == usize::MAX || *slot == comp);
                *slot = comp;
            }
        }
        for (i, slot) in curve_component[c].iter_mut().enumerate() {
            let ci = tg
                .circle_of_closed(inc.face, i)
                .expect("curve forms a circle");
            let comp = comp_of[piece_at(inc.tet, ci)];
            components[comp].closed_curves += 1;
            *slot = comp;
        }
    }
    for per_edge in &point_component {
        for &comp in per_edge {
            debug_assert_ne!(comp, usize::MAX, "unclaimed edge point");
            components[comp].points += 1;
        }
    }

    let mut chi_total = 0i64;
    for comp in &mut components {
        let chi = comp.points as i64 - comp.arcs as i64 + comp.discs as i64;
        comp.euler_characteristic = chi;
        chi_total += chi;
        if comp.orientable && chi <= 2 && chi % 2 == 0 {
            comp.genus = Some(((2 - chi) / 2) as u32);
        }
    }

    SurfaceTopology {
        components,
        euler_characteristic: chi_total,
        piece_component,
        point_component,
        curve_component,
    }
}
