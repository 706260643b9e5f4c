//! Taut isomorphism search, automorphism groups, orientation double covers,
//! and the maps induced by loom symmetries.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::loom::LatticeLoom;
use crate::skeletal::TetRect;

use super::quotient::{is_leaf_preserving, LoomAffine};
use super::{
    perm_compose, perm_inverse, perm_is_odd, IdealTriangulation, ModelTet, TriError, EDGE_PAIRS,
};

/// An isomorphism of triangulations: tetrahedron `i` maps to
/// `tet_map[i]` with vertex slot `s` going to `vertex_maps[i][s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautMap {
    pub tet_map: Vec<usize>,
    pub vertex_maps: Vec<[u8; 4]>,
}

const ALL_PERMS: [[u8; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

fn compatible(a: &ModelTet, b: &ModelTet, p: &[u8; 4], colours: bool) -> bool {
    EDGE_PAIRS.iter().all(|&(u, v)| {
        let (iu, iv) = (p[u as usize], p[v as usize]);
        a.angle(u, v) == b.angle(iu, iv) && (!colours || a.colour(u, v) == b.colour(iu, iv))
    })
}

/// Propagates a seed assignment `tet 0 of a -> (j0, p0)` through the face
/// pairings; returns the completed map if everything stays consistent.
fn propagate(
    a: &IdealTriangulation,
    b: &IdealTriangulation,
    j0: usize,
    p0: [u8; 4],
    colours: bool,
) -> Option<TautMap> {
    let n = a.tets.len();
    let mut tet_map = vec![usize::MAX; n];
    let mut vertex_maps = vec![[4u8; 4]; n];
    tet_map[0] = j0;
    vertex_maps[0] = p0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (j, p) = (tet_map[i], vertex_maps[i]);
        for f in 0..4usize {
            match (a.tets[i].gluings[f], b.tets[j].gluings[p[f] as usize]) {
                (None, None) => {}
                (Some(g1), Some(g2)) => {
                    let i2 = g1.other;
                    let j2 = g2.other;
                    let p2 = perm_compose(&g2.perm, &perm_compose(&p, &perm_inverse(&g1.perm)));
                    if tet_map[i2] == usize::MAX {
                        if !compatible(&a.tets[i2], &b.tets[j2], &p2, colours) {
                            return None;
                        }
                        tet_map[i2] = j2;
                        vertex_maps[i2] = p2;
                        queue.push_back(i2);
                    } else if tet_map[i2] != j2 || vertex_maps[i2] != p2 {
                        return None;
                    }
                }
                _ => return None,
            }
        }
    }
    if tet_map.iter().any(|&j| j == usize::MAX) {
        return None; // source not connected onto the assigned part
    }
    let mut hit = vec![false; b.tets.len()];
    for &j in &tet_map {
        if hit[j] {
            return None;
        }
        hit[j] = true;
    }
    Some(TautMap {
        tet_map,
        vertex_maps,
    })
}

fn isomorphisms(
    a: &IdealTriangulation,
    b: &IdealTriangulation,
    colours: bool,
    first_only: bool,
) -> Vec<TautMap> {
    let mut out = Vec::new();
    if a.tets.len() != b.tets.len() || a.tets.is_empty() {
        return out;
    }
    for j0 in 0..b.tets.len() {
        for p0 in ALL_PERMS {
            if !compatible(&a.tets[0], &b.tets[j0], &p0, colours) {
                continue;
            }
            if let Some(map) = propagate(a, b, j0, p0, colours) {
                out.push(map);
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

/// Searches for an isomorphism preserving the taut structure (dihedral
/// angles).  Set `colours` to additionally require matching edge colours.
pub fn taut_isomorphic(
    a: &IdealTriangulation,
    b: &IdealTriangulation,
    colours: bool,
) -> Option<TautMap> {
    isomorphisms(a, b, colours, true).into_iter().next()
}

/// All taut automorphisms.
pub fn automorphisms(t: &IdealTriangulation, colours: bool) -> Vec<TautMap> {
    isomorphisms(t, t, colours, false)
}

/// The orientation double cover: two sheets, with gluings of even parity
/// (the orientation-reversing ones) crossing between them.
pub fn double_cover(tri: &IdealTriangulation) -> IdealTriangulation {
    let n = tri.tets.len();
    let mut tets = Vec::with_capacity(2 * n);
    for sheet in 0..2usize {
        for (i, t) in tri.tets.iter().enumerate() {
            let mut copy = t.clone();
            copy.id = sheet * n + i;
            for f in 0..4 {
                if let Some(g) = t.gluings[f] {
                    let target_sheet = if perm_is_odd(&g.perm) {
                        sheet
                    } else {
                        1 - sheet
                    };
                    copy.gluings[f] = Some(super::Gluing {
                        other: target_sheet * n + g.other,
                        perm: g.perm,
                    });
                }
            }
            tets.push(copy);
        }
    }
    let mut cover = IdealTriangulation {
        tets,
        vertex_count: 0,
        meta: tri.meta.clone(),
    };
    cover.relabel_vertices_by_orbit();
    cover
}

/// The cell map induced by a loom symmetry on a set of tetrahedron
/// rectangles: each rectangle goes to its image rectangle.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub map: BTreeMap<TetRect, TetRect>,
}

impl InducedMap {
    pub fn image_of(&self, t: &TetRect) -> Option<&TetRect> {
        self.map.get(t)
    }

    /// Composition with another induced map.
    pub fn then(&self, other: &InducedMap) -> InducedMap {
        let map = self
            .map
            .iter()
            .filter_map(|(k, v)| other.image_of(v).map(|w| (*k, *w)))
            .collect();
        InducedMap { map }
    }
}

/// Builds the induced map of an affine loom symmetry on a finite set of
/// tetrahedron rectangles and verifies it is a taut isomorphism onto its
/// image: spanning edge pairs go to spanning edge pairs.
pub fn induced_map(
    loom: &LatticeLoom,
    f: &LoomAffine,
    tets: &[TetRect],
) -> Result<InducedMap, TriError> {
    if !is_leaf_preserving(loom, &f.linear) {
        return Err(TriError::NotLeafPreserving);
    }
    let mut map = BTreeMap::new();
    for t in tets {
        let image = f.apply_tet(loom, t);
        debug_assert!(loom.is_tet_rect(&image.rect(loom)).is_some());
        let src_span = [t.bottom_edge(loom).key(), t.top_edge(loom).key()];
        let img_span = [image.bottom_edge(loom).key(), image.top_edge(loom).key()];
        let mapped: Vec<_> = src_span
            .iter()
            .map(|&(a, b)| {
                let (fa, fb) = (f.apply(a), f.apply(b));
                (fa.min(fb), fa.max(fb))
            })
            .collect();
        let ok = (mapped[0] == img_span[0] && mapped[1] == img_span[1])
            || (mapped[0] == img_span[1] && mapped[1] == img_span[0]);
        if !ok {
            return Err(TriError::Malformed(
                "induced map does not preserve the taut structure".into(),
            ));
        }
        map.insert(*t, image);
    }
    Ok(InducedMap { map })
}
