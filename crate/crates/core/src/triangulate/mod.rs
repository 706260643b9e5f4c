//! Ideal triangulations with taut angles and veering colours.
//!
//! A model tetrahedron stores its four ideal vertices in side order (south,
//! east, north, west of the originating tetrahedron rectangle), a dihedral
//! angle of zero or pi per edge, and an edge colour per edge.  Face `i` of a
//! tetrahedron is the one opposite vertex `i`; a gluing carries the full
//! vertex correspondence as a permutation of slots.
//!
//! The induced triangulation of a set of tetrahedron rectangles pairs faces
//! along shared face rectangles, assigns angle pi to the two spanning edges
//! of each tetrahedron, and colours edges by their edge rectangles.

mod check;
mod isom;
mod json;
mod quotient;

pub use check::{
    check_locally_veering, check_taut, check_veering, orientation_signs, CheckReport, CheckStatus,
};
pub use isom::{automorphisms, double_cover, induced_map, taut_isomorphic, InducedMap, TautMap};
pub use json::{read_json, write_json};
pub use quotient::{
    canonical_representative, is_leaf_preserving, quotient, LoomAffine, QuotientTriangulation,
    SymmetryGroup,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::loom::{Cusp, LatticeLoom, Mat2};
use crate::skeletal::{Colour, TetRect};

#[derive(Debug, Error)]
pub enum TriError {
    #[error("duplicate tetrahedron rectangle in input")]
    DuplicateTet,
    #[error("window insufficient: orbit set not stabilised after {rounds} doublings (last window {window})")]
    WindowInsufficient { rounds: usize, window: i64 },
    #[error("map does not preserve the foliation pair")]
    NotLeafPreserving,
    #[error("unsupported schema {0:?}")]
    BadSchema(String),
    #[error("malformed triangulation file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Dihedral angle of a model edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Angle {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "pi")]
    Pi,
}

/// The six vertex pairs of a tetrahedron, in a fixed order.
pub const EDGE_PAIRS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn pair_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("vertex pair")
}

/// The two slots not in `{a, b}`.
pub fn complement_pair(a: u8, b: u8) -> (u8, u8) {
    let mut rest = (0u8..4).filter(|&s| s != a && s != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// Parity of a slot permutation; `true` for odd.
pub fn perm_is_odd(p: &[u8; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

pub fn perm_inverse(p: &[u8; 4]) -> [u8; 4] {
    let mut inv = [0u8; 4];
    for (i, &v) in p.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

pub fn perm_compose(outer: &[u8; 4], inner: &[u8; 4]) -> [u8; 4] {
    let mut out = [0u8; 4];
    for i in 0..4 {
        out[i] = outer[inner[i] as usize];
    }
    out
}

/// A face pairing: face `f` of the owning tetrahedron is glued to face
/// `perm[f]` of `other`, vertex slot `s` matching slot `perm[s]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub other: usize,
    pub perm: [u8; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelTet {
    pub id: usize,
    /// Ideal vertex labels in side order south, east, north, west.
    pub vertices: [usize; 4],
    /// Per face slot; `None` is an unglued boundary face.
    pub gluings: [Option<Gluing>; 4],
    /// Per entry of [`EDGE_PAIRS`].
    pub angles: [Angle; 6],
    pub colours: [Colour; 6],
}

impl ModelTet {
    pub fn angle(&self, a: u8, b: u8) -> Angle {
        self.angles[pair_index(a, b)]
    }

    pub fn colour(&self, a: u8, b: u8) -> Colour {
        self.colours[pair_index(a, b)]
    }

    /// Slots of the pi edges; a taut tetrahedron has exactly two, opposite.
    pub fn pi_pairs(&self) -> Vec<(u8, u8)> {
        EDGE_PAIRS
            .iter()
            .enumerate()
            .filter(|(i, _)| self.angles[*i] == Angle::Pi)
            .map(|(_, &p)| p)
            .collect()
    }
}

/// File-level metadata, recorded by the builders.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub monodromy: Option<Mat2>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub discriminant: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealTriangulation {
    pub tets: Vec<ModelTet>,
    pub vertex_count: usize,
    #[serde(default)]
    pub meta: Meta,
}

/// One model of a realised edge: a tetrahedron and an ordered vertex pair,
/// oriented consistently along the walk around the edge.
pub type EdgeModel = (usize, u8, u8);

#[derive(Debug, Clone)]
pub struct EdgeClass {
    /// Models in cyclic (or, for incomplete classes, linear) order.
    pub models: Vec<EdgeModel>,
    /// Whether the walk around the edge closed up through gluings.
    pub complete: bool,
    /// Whether the models can be consistently oriented.
    pub consistently_oriented: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.models.len()
    }

    pub fn angle_sum_pi_units(&self, tri: &IdealTriangulation) -> usize {
        self.models
            .iter()
            .filter(|(t, a, b)| tri.tets[*t].angle(*a, *b) == Angle::Pi)
            .count()
    }

    /// The common colour of all models, if they agree.
    pub fn colour(&self, tri: &IdealTriangulation) -> Option<Colour> {
        let mut it = self.models.iter().map(|(t, a, b)| tri.tets[*t].colour(*a, *b));
        let first = it.next()?;
        it.all(|c| c == first).then_some(first)
    }
}

impl IdealTriangulation {
    /// Orbits of model edges under the face pairings.
    ///
    /// Each class is produced by walking around the edge: enter a wedge
    /// through one of the two faces containing it, leave through the other,
    /// and follow the gluing.  Incomplete walks (hitting unglued faces) are
    /// extended backwards so each model appears exactly once.
    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        let mut classes = Vec::new();
        for t in 0..self.tets.len() {
            for (pi, &(a, b)) in EDGE_PAIRS.iter().enumerate() {
                if seen.contains_key(&(t, pi)) {
                    continue;
                }
                let class = self.walk_edge(t, a, b);
                for &(mt, ma, mb) in &class.models {
                    seen.insert((mt, pair_index(ma, mb)), ());
                }
                classes.push(class);
            }
        }
        classes
    }

    fn walk_edge(&self, tet: usize, a: u8, b: u8) -> EdgeClass {
        let (c, d) = complement_pair(a, b);
        // Forward walk: entered through c, so exit through d first.
        let (mut models, closed, oriented) = self.walk_dir(tet, a, b, c);
        if !closed {
            // Extend backwards: enter through d, exit through c.
            let (back, back_closed, _) = self.walk_dir(tet, b, a, d);
            debug_assert!(!back_closed);
            let mut rev: Vec<EdgeModel> = back
                .into_iter()
                .skip(1)
                .map(|(t, x, y)| (t, y, x))
                .collect();
            rev.reverse();
            rev.extend(models);
            models = rev;
        }
        EdgeClass {
            models,
            complete: closed,
            consistently_oriented: oriented,
        }
    }

    /// Walks in one direction; returns the models visited (starting with the
    /// seed), whether the walk closed into a cycle, and whether orientation
    /// was preserved on closing.
    fn walk_dir(&self, tet: usize, a: u8, b: u8, entry: u8) -> (Vec<EdgeModel>, bool, bool) {
        let mut models = vec![(tet, a, b)];
        let mut state = (tet, a, b, entry);
        let mut oriented = true;
        loop {
            let (t, a0, b0, ent) = state;
            let (c0, d0) = complement_pair(a0, b0);
            let exit = if c0 == ent { d0 } else { c0 };
            let Some(gl) = self.tets[t].gluings[exit as usize] else {
                return (models, false, oriented);
            };
            let nt = gl.other;
            let na = gl.perm[a0 as usize];
            let nb = gl.perm[b0 as usize];
            let nent = gl.perm[exit as usize];
            if nt == models[0].0 && (na, nb) == (models[0].1, models[0].2) {
                debug_assert_eq!(nent, entry, "edge walk closed through the wrong face");
                return (models, true, oriented);
            }
            if nt == models[0].0 && (na, nb) == (models[0].2, models[0].1) {
                // Returned to the seed edge with reversed orientation.
                oriented = false;
                return (models, true, oriented);
            }
            models.push((nt, na, nb));
            state = (nt, na, nb, nent);
            assert!(
                models.len() <= 12 * self.tets.len() + 4,
                "edge walk failed to close"
            );
        }
    }
}

/// A triangulation built from explicit tetrahedron rectangles, with the
/// originating geometry retained for tests and induced maps.
#[derive(Debug, Clone)]
pub struct CoverTriangulation {
    pub tri: IdealTriangulation,
    pub tet_rects: Vec<TetRect>,
    pub cusps: Vec<Cusp>,
}

/// Fills the angle and colour slots of a model tetrahedron from its
/// rectangle: pi on the two spanning edges, colours from the edge rectangles.
pub(crate) fn model_from_rect(loom: &LatticeLoom, id: usize, t: &TetRect) -> ModelTet {
    let cusps = t.cusps();
    let mut angles = [Angle::Zero; 6];
    angles[pair_index(0, 2)] = Angle::Pi; // south-north: the top edge
    angles[pair_index(1, 3)] = Angle::Pi; // east-west: the bottom edge
    let mut colours = [Colour::Red; 6];
    for (i, &(a, b)) in EDGE_PAIRS.iter().enumerate() {
        let e = crate::skeletal::EdgeRect::new(loom, cusps[a as usize], cusps[b as usize])
            .expect("tetrahedron cusp pairs span edge rectangles");
        colours[i] = e.colour;
    }
    ModelTet {
        id,
        vertices: [0; 4],
        gluings: [None; 4],
        angles,
        colours,
    }
}

/// Builds the induced triangulation of a set of tetrahedron rectangles.
///
/// One model tetrahedron per rectangle, vertices labelled by side cusps,
/// pairings created for every face rectangle shared by two of the input
/// tetrahedra.  Faces on the boundary of the set stay unglued.
pub fn build_triangulation(
    loom: &LatticeLoom,
    tets: &[TetRect],
) -> Result<CoverTriangulation, TriError> {
    let mut sorted = tets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != tets.len() {
        return Err(TriError::DuplicateTet);
    }

    let mut cusps: Vec<Cusp> = tets.iter().flat_map(|t| t.cusps()).collect();
    cusps.sort_unstable();
    cusps.dedup();
    let cusp_label = |c: Cusp| cusps.binary_search(&c).expect("known cusp");

    let mut models: Vec<ModelTet> = tets
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut m = model_from_rect(loom, i, t);
            m.vertices = t.cusps().map(cusp_label);
            m
        })
        .collect();

    // Group (tet, face slot) by the face's three cusps.
    let mut by_face: BTreeMap<[Cusp; 3], Vec<(usize, u8)>> = BTreeMap::new();
    for (i, t) in tets.iter().enumerate() {
        let sides = t.cusps();
        for f in t.faces(loom) {
            let omitted = sides
                .iter()
                .position(|c| !f.cusps.contains(c))
                .expect("face omits one side cusp") as u8;
            by_face.entry(f.key()).or_default().push((i, omitted));
        }
    }
    for (face, members) in by_face {
        match members.as_slice() {
            [_] => {}
            [(i, fi), (j, fj)] => {
                let perm_ij = face_perm(tets, *i, *fi, *j, *fj);
                models[*i].gluings[*fi as usize] = Some(Gluing {
                    other: *j,
                    perm: perm_ij,
                });
                models[*j].gluings[*fj as usize] = Some(Gluing {
                    other: *i,
                    perm: perm_inverse(&perm_ij),
                });
            }
            _ => {
                return Err(TriError::Malformed(format!(
                    "face {face:?} shared by more than two tetrahedra"
                )))
            }
        }
    }

    let mut tri = IdealTriangulation {
        tets: models,
        vertex_count: cusps.len(),
        meta: Meta::default(),
    };
    tri.relabel_vertices_by_orbit();
    // The cover labels are the cusps themselves; keep them.
    for (i, t) in tets.iter().enumerate() {
        tri.tets[i].vertices = t.cusps().map(cusp_label);
    }
    tri.vertex_count = cusps.len();
    Ok(CoverTriangulation {
        tri,
        tet_rects: tets.to_vec(),
        cusps,
    })
}

/// Vertex correspondence between two tetrahedra sharing the face that omits
/// slot `fi` of tet `i` and slot `fj` of tet `j`: matched by cusp equality.
fn face_perm(tets: &[TetRect], i: usize, fi: u8, j: usize, fj: u8) -> [u8; 4] {
    let ci = tets[i].cusps();
    let cj = tets[j].cusps();
    let mut perm = [4u8; 4];
    for s in 0..4u8 {
        if s == fi {
            perm[s as usize] = fj;
        } else {
            let c = ci[s as usize];
            let target = cj
                .iter()
                .position(|&x| x == c)
                .expect("shared face cusps match") as u8;
            perm[s as usize] = target;
        }
    }
    debug_assert!({
        let mut sorted = perm;
        sorted.sort_unstable();
        sorted == [0, 1, 2, 3]
    });
    perm
}

impl IdealTriangulation {
    /// Recomputes ideal vertex labels as orbits of model vertices under the
    /// face pairings.
    pub fn relabel_vertices_by_orbit(&mut self) {
        let n = self.tets.len();
        let mut uf = UnionFind::new(4 * n);
        for (i, t) in self.tets.iter().enumerate() {
            for f in 0..4 {
                if let Some(g) = t.gluings[f] {
                    for s in 0..4u8 {
                        if s as usize != f {
                            uf.union(4 * i + s as usize, 4 * g.other + g.perm[s as usize] as usize);
                        }
                    }
                }
            }
        }
        let mut label: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            for s in 0..4 {
                let root = uf.find(4 * i + s);
                let next = label.len();
                let l = *label.entry(root).or_insert(next);
                self.tets[i].vertices[s] = l;
            }
        }
        self.vertex_count = label.len();
    }

    /// Sanity conditions for the realisation to be a manifold: gluings are
    /// involutive, no face is paired with itself, and each edge class closes
    /// consistently oriented (or reports otherwise).
    pub fn manifold_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, t) in self.tets.iter().enumerate() {
            for f in 0..4 {
                let Some(g) = t.gluings[f] else { continue };
                if g.other == i && g.perm[f] as usize == f {
                    out.push(format!("tet {i} face {f} glued to itself"));
                    continue;
                }
                match self.tets[g.other].gluings[g.perm[f] as usize] {
                    Some(h) if h.other == i && perm_compose(&h.perm, &g.perm) == [0, 1, 2, 3] => {}
                    _ => out.push(format!("tet {i} face {f}: gluing not involutive")),
                }
            }
        }
        for class in self.edge_classes() {
            if class.complete && !class.consistently_oriented {
                let (t, a, b) = class.models[0];
                out.push(format!(
                    "edge ({t},{a},{b}) closes with reversed orientation"
                ));
            }
        }
        out
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
