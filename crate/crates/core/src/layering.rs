//! Hull content, lower landscapes, flip sequences, and combinatorial
//! three-ball certification.
//!
//! The content of a hull is the set of tetrahedron rectangles contained in
//! it.  Its lower edges (those no other content edge properly west-east
//! spans) and lower faces form a triangulated disk, the landscape.  Flipping
//! a flippable edge replaces the two bottom faces of the tetrahedron above
//! it with its two top faces; layering flips until nothing is flippable and
//! certifies that every content tetrahedron was flipped exactly once, giving
//! a shelling of the content as a three-ball.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesy::Hull;
use crate::loom::{Cusp, LatticeLoom, Rect};
use crate::skeletal::{rect_properly_spans_we, tet_above, EdgeRect, FaceRect, TetRect};

#[derive(Debug, Error)]
pub enum LayerError {
    #[error("hull has {0} components; content needs a face-connected input")]
    NotFaceConnected(usize),
    #[error("lower complex is not a triangulated disk: {0}")]
    NotADisk(String),
    #[error("layering invariant violated: {0}")]
    Invariant(String),
}

/// A triangulated disk of edges and faces over the hull's cusps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Landscape {
    /// Boundary cusps in circular order.
    pub boundary_cusps: Vec<Cusp>,
    /// Cusps interior to the disk.
    pub interior_cusps: Vec<Cusp>,
    /// Canonical cusp pairs, sorted.
    pub edges: Vec<(Cusp, Cusp)>,
    /// Sorted cusp triples, sorted.
    pub faces: Vec<[Cusp; 3]>,
}

impl Landscape {
    /// Edges on the disk boundary: those lying in exactly one face.
    pub fn boundary_edges(&self) -> Vec<(Cusp, Cusp)> {
        self.edges
            .iter()
            .filter(|e| self.face_count(**e) == 1)
            .copied()
            .collect()
    }

    fn face_count(&self, e: (Cusp, Cusp)) -> usize {
        self.faces
            .iter()
            .filter(|f| f.contains(&e.0) && f.contains(&e.1))
            .count()
    }

    /// Euler characteristic check for a disk, allowing interior vertices:
    /// `F = B + 2I - 2` with `B` boundary and `I` interior vertices.
    pub fn euler_consistent(&self) -> bool {
        let v = self.boundary_cusps.len() + self.interior_cusps.len();
        let e = self.edges.len();
        let f = self.faces.len();
        v as i64 - e as i64 + f as i64 == 1
            && f as i64 == self.boundary_cusps.len() as i64 + 2 * self.interior_cusps.len() as i64 - 2
    }
}

/// One flip of the layering: the edge flipped and the tetrahedron layered on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipStep {
    pub index: usize,
    pub edge: (Cusp, Cusp),
    pub tet: TetRect,
}

/// The full flip record of a layering run, serialisable for replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct FlipSequence {
    pub steps: Vec<FlipStep>,
}

impl FlipSequence {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("flip sequence serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Which flippable edge to take when several are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipPolicy {
    LexMin,
    LexMax,
}

fn edge_key(a: Cusp, b: Cusp) -> (Cusp, Cusp) {
    (a.min(b), a.max(b))
}

/// All tetrahedron rectangles contained in the hull.  The hull must be a
/// single disk; every content tetrahedron arises as the upward closure of an
/// edge between hull cusps.
pub fn content(loom: &LatticeLoom, hull: &Hull) -> Result<Vec<TetRect>, LayerError> {
    if hull.components.len() != 1 {
        return Err(LayerError::NotFaceConnected(hull.components.len()));
    }
    let mut out = BTreeSet::new();
    for (i, &a) in hull.cusps.iter().enumerate() {
        for &b in hull.cusps.iter().skip(i + 1) {
            let Some(e) = EdgeRect::new(loom, a, b) else {
                continue;
            };
            if !hull.region.contains_rect(&e.rect(loom)) {
                continue;
            }
            let t = tet_above(loom, &e);
            if hull.region.contains_rect(&t.rect(loom)) {
                out.insert(t);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Edge rectangles of the content: the six cusp pairs of every tetrahedron.
fn content_edges(loom: &LatticeLoom, tets: &[TetRect]) -> BTreeMap<(Cusp, Cusp), Rect> {
    let mut edges = BTreeMap::new();
    for t in tets {
        for e in t.edges(loom) {
            edges
                .entry(edge_key(e.west, e.east))
                .or_insert_with(|| e.rect(loom));
        }
    }
    edges
}

/// Faces of the content, keyed by cusp triple, with their rectangles.
fn content_faces(loom: &LatticeLoom, tets: &[TetRect]) -> BTreeMap<[Cusp; 3], FaceRect> {
    let mut faces = BTreeMap::new();
    for t in tets {
        for f in t.faces(loom) {
            faces.entry(f.key()).or_insert(f);
        }
    }
    faces
}

fn lower_edges(
    loom: &LatticeLoom,
    edges: &BTreeMap<(Cusp, Cusp), Rect>,
) -> BTreeSet<(Cusp, Cusp)> {
    let _ = loom;
    edges
        .iter()
        .filter(|(_, rect)| {
            !edges
                .values()
                .any(|other| rect_properly_spans_we(other, rect))
        })
        .map(|(k, _)| *k)
        .collect()
}

fn upper_edges(
    loom: &LatticeLoom,
    edges: &BTreeMap<(Cusp, Cusp), Rect>,
) -> BTreeSet<(Cusp, Cusp)> {
    let _ = loom;
    edges
        .iter()
        .filter(|(_, rect)| {
            !edges
                .values()
                .any(|other| rect_properly_spans_we(rect, other))
        })
        .map(|(k, _)| *k)
        .collect()
}

/// Assembles a landscape from a face set, verifying the triangulated-disk
/// structure: every edge in one or two faces, a single boundary cycle, and
/// a consistent Euler count.
fn build_landscape(faces: &BTreeSet<[Cusp; 3]>) -> Result<Landscape, LayerError> {
    if faces.is_empty() {
        return Err(LayerError::NotADisk("no faces".into()));
    }
    let mut edge_faces: BTreeMap<(Cusp, Cusp), usize> = BTreeMap::new();
    let mut vertices: BTreeSet<Cusp> = BTreeSet::new();
    for f in faces {
        vertices.extend(f.iter().copied());
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            *edge_faces.entry(edge_key(f[i], f[j])).or_insert(0) += 1;
        }
    }
    let mut boundary: Vec<(Cusp, Cusp)> = Vec::new();
    for (e, n) in &edge_faces {
        match n {
            1 => boundary.push(*e),
            2 => {}
            n => {
                return Err(LayerError::NotADisk(format!(
                    "edge {e:?} lies in {n} faces"
                )))
            }
        }
    }
    // Walk the boundary cycle.
    let mut adj: BTreeMap<Cusp, Vec<Cusp>> = BTreeMap::new();
    for (a, b) in &boundary {
        adj.entry(*a).or_default().push(*b);
        adj.entry(*b).or_default().push(*a);
    }
    for (c, nbrs) in &adj {
        if nbrs.len() != 2 {
            return Err(LayerError::NotADisk(format!(
                "boundary vertex {c:?} has {} boundary edges",
                nbrs.len()
            )));
        }
    }
    let start = *adj.keys().next().ok_or_else(|| {
        LayerError::NotADisk("faces without boundary".into())
    })?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let nbrs = &adj[&cur];
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = next;
        if cycle.len() > boundary.len() {
            return Err(LayerError::NotADisk("boundary walk does not close".into()));
        }
    }
    if cycle.len() != boundary.len() {
        return Err(LayerError::NotADisk(
            "boundary has more than one cycle".into(),
        ));
    }
    let on_boundary: BTreeSet<Cusp> = cycle.iter().copied().collect();
    let interior: Vec<Cusp> = vertices
        .iter()
        .copied()
        .filter(|c| !on_boundary.contains(c))
        .collect();
    let landscape = Landscape {
        boundary_cusps: cycle,
        interior_cusps: interior,
        edges: edge_faces.keys().copied().collect(),
        faces: faces.iter().copied().collect(),
    };
    if !landscape.euler_consistent() {
        return Err(LayerError::NotADisk("Euler count inconsistent".into()));
    }
    Ok(landscape)
}

/// The lower landscape of a hull: its lower faces assembled into a disk.
/// Every lower edge must appear in the face complex.
pub fn lower_landscape(loom: &LatticeLoom, hull: &Hull) -> Result<Landscape, LayerError> {
    let tets = content(loom, hull)?;
    lower_landscape_of(loom, &tets)
}

fn lower_landscape_of(loom: &LatticeLoom, tets: &[TetRect]) -> Result<Landscape, LayerError> {
    let edges = content_edges(loom, tets);
    let lower = lower_edges(loom, &edges);
    let faces = content_faces(loom, tets);
    let lower_faces: BTreeSet<[Cusp; 3]> = faces
        .keys()
        .filter(|f| {
            [(0, 1), (0, 2), (1, 2)]
                .iter()
                .all(|&(i, j)| lower.contains(&edge_key(f[i], f[j])))
        })
        .copied()
        .collect();
    let landscape = build_landscape(&lower_faces)?;
    for e in &lower {
        if !landscape.edges.contains(e) {
            return Err(LayerError::NotADisk(format!(
                "lower edge {e:?} lies in no lower face"
            )));
        }
    }
    Ok(landscape)
}

/// The upper landscape, by the mirrored spanning condition.
fn upper_landscape_of(loom: &LatticeLoom, tets: &[TetRect]) -> Result<Landscape, LayerError> {
    let edges = content_edges(loom, tets);
    let upper = upper_edges(loom, &edges);
    let faces = content_faces(loom, tets);
    let upper_faces: BTreeSet<[Cusp; 3]> = faces
        .keys()
        .filter(|f| {
            [(0, 1), (0, 2), (1, 2)]
                .iter()
                .all(|&(i, j)| upper.contains(&edge_key(f[i], f[j])))
        })
        .copied()
        .collect();
    build_landscape(&upper_faces)
}

/// The outcome of a layering run.
#[derive(Debug, Clone)]
pub struct Layering {
    pub content: Vec<TetRect>,
    pub lower: Landscape,
    pub upper: Landscape,
    pub flips: FlipSequence,
}

/// Layers the hull: starting from the lower landscape, repeatedly flips a
/// flippable edge (both adjacent faces having it as their bottom edge) until
/// none remains.  The flip policy only affects the order.
pub fn layer(loom: &LatticeLoom, hull: &Hull, policy: FlipPolicy) -> Result<Layering, LayerError> {
    let tets = content(loom, hull)?;
    let lower = lower_landscape_of(loom, &tets)?;
    let face_rects = content_faces(loom, &tets);
    let content_set: BTreeSet<TetRect> = tets.iter().copied().collect();

    let mut surface: BTreeSet<[Cusp; 3]> = lower.faces.iter().copied().collect();
    let mut flipped: BTreeSet<TetRect> = BTreeSet::new();
    let mut steps = Vec::new();

    loop {
        let flippable = flippable_edges(loom, &surface, &face_rects)?;
        let Some(edge) = (match policy {
            FlipPolicy::LexMin => flippable.iter().next().copied(),
            FlipPolicy::LexMax => flippable.iter().next_back().copied(),
        }) else {
            break;
        };
        let e = EdgeRect::new(loom, edge.0, edge.1)
            .ok_or_else(|| LayerError::Invariant(format!("flippable pair {edge:?} lost its edge rectangle")))?;
        let t = tet_above(loom, &e);
        if !content_set.contains(&t) {
            return Err(LayerError::Invariant(format!(
                "tetrahedron above flippable edge {edge:?} is outside the content"
            )));
        }
        if !flipped.insert(t) {
            return Err(LayerError::Invariant(format!(
                "tetrahedron {t:?} flipped twice"
            )));
        }
        // Remove the two bottom faces, insert the two top faces.
        let (bottom, top) = bottom_top_faces(&t);
        for f in bottom {
            if !surface.remove(&f) {
                return Err(LayerError::Invariant(format!(
                    "bottom face {f:?} missing from the landscape"
                )));
            }
        }
        for f in top {
            if !surface.insert(f) {
                return Err(LayerError::Invariant(format!(
                    "top face {f:?} already in the landscape"
                )));
            }
        }
        steps.push(FlipStep {
            index: steps.len(),
            edge,
            tet: t,
        });
        if steps.len() > tets.len() {
            return Err(LayerError::Invariant(
                "more flips than content tetrahedra".into(),
            ));
        }
    }

    let upper = build_landscape(&surface)?;
    Ok(Layering {
        content: tets,
        lower,
        upper,
        flips: FlipSequence { steps },
    })
}

/// The bottom faces (containing the west-east edge) and top faces
/// (containing the south-north edge) of a tetrahedron.
fn bottom_top_faces(t: &TetRect) -> ([[Cusp; 3]; 2], [[Cusp; 3]; 2]) {
    let sort3 = |a: Cusp, b: Cusp, c: Cusp| {
        let mut f = [a, b, c];
        f.sort_unstable();
        f
    };
    (
        [
            sort3(t.west, t.east, t.south),
            sort3(t.west, t.east, t.north),
        ],
        [
            sort3(t.south, t.north, t.west),
            sort3(t.south, t.north, t.east),
        ],
    )
}

/// Edges of the current surface whose two adjacent faces both have them as
/// bottom edge.
fn flippable_edges(
    loom: &LatticeLoom,
    surface: &BTreeSet<[Cusp; 3]>,
    face_rects: &BTreeMap<[Cusp; 3], FaceRect>,
) -> Result<BTreeSet<(Cusp, Cusp)>, LayerError> {
    let mut incident: BTreeMap<(Cusp, Cusp), Vec<[Cusp; 3]>> = BTreeMap::new();
    for f in surface {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            incident.entry(edge_key(f[i], f[j])).or_default().push(*f);
        }
    }
    let mut out = BTreeSet::new();
    for (e, fs) in incident {
        if fs.len() != 2 {
            continue;
        }
        let both_bottom = fs.iter().all(|f| {
            let fr = face_rects
                .get(f)
                .expect("surface faces come from content tetrahedra");
            let be = fr.bottom_edge(loom);
            edge_key(be.west, be.east) == e
        });
        if both_bottom {
            out.insert(e);
        }
    }
    let _ = loom;
    Ok(out)
}

/// Grows a face-connected enumeration whose prefix hulls all layer and
/// certify as three-balls, so that the nested hulls exhaust the complex by
/// certified balls.  At each step the least face-neighbour (in canonical
/// order) that keeps the certificate green is taken, with depth-first
/// backtracking over the rare dead ends.  Deterministic.
pub fn certified_exhaustion(
    loom: &LatticeLoom,
    seed: &EdgeRect,
    count: usize,
) -> Result<Vec<TetRect>, LayerError> {
    fn certifies(loom: &LatticeLoom, tets: &[TetRect]) -> bool {
        let cusps: BTreeSet<Cusp> = tets.iter().flat_map(|t| t.cusps()).collect();
        let cusps: Vec<Cusp> = cusps.into_iter().collect();
        let h = crate::geodesy::hull(loom, &cusps);
        let Ok(run) = layer(loom, &h, FlipPolicy::LexMin) else {
            return false;
        };
        matches!(certify_ball(loom, &run.flips, &run.content), Ok(rep) if rep.passed())
    }

    fn grow(
        loom: &LatticeLoom,
        list: &mut Vec<TetRect>,
        seen: &mut BTreeSet<TetRect>,
        target: usize,
    ) -> bool {
        if list.len() == target {
            return true;
        }
        let mut candidates: BTreeSet<TetRect> = BTreeSet::new();
        for t in list.iter() {
            for f in t.faces(loom) {
                let nb = crate::skeletal::adjacent_tet(loom, t, &f);
                if !seen.contains(&nb) {
                    candidates.insert(nb);
                }
            }
        }
        for cand in candidates {
            list.push(cand);
            seen.insert(cand);
            if certifies(loom, list) && grow(loom, list, seen, target) {
                return true;
            }
            list.pop();
            seen.remove(&cand);
        }
        false
    }

    let start = tet_above(loom, seed);
    let mut list = vec![start];
    let mut seen = BTreeSet::from([start]);
    if !certifies(loom, &list) {
        return Err(LayerError::Invariant(
            "seed tetrahedron does not certify".into(),
        ));
    }
    if !grow(loom, &mut list, &mut seen, count) {
        return Err(LayerError::Invariant(format!(
            "no certified face-connected exhaustion of length {count} found"
        )));
    }
    Ok(list)
}

/// One verified property of a ball certificate.
#[derive(Debug, Clone)]
pub struct BallCheck {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct BallReport {
    pub checks: Vec<BallCheck>,
}

impl BallReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Certifies that a flip sequence shells the content into a three-ball:
/// every content tetrahedron is flipped exactly once, every non-coastal
/// lower edge is flipped, each step glues a tetrahedron along exactly its
/// two bottom faces to the previous complex while fixing the boundary, and
/// the final landscape is the upper landscape.
pub fn certify_ball(
    loom: &LatticeLoom,
    flips: &FlipSequence,
    tets: &[TetRect],
) -> Result<BallReport, LayerError> {
    let lower = lower_landscape_of(loom, tets)?;
    let upper = upper_landscape_of(loom, tets)?;
    let mut checks = Vec::new();

    // Every content tetrahedron flipped exactly once.
    let flipped: BTreeSet<TetRect> = flips.steps.iter().map(|s| s.tet).collect();
    let content_set: BTreeSet<TetRect> = tets.iter().copied().collect();
    checks.push(BallCheck {
        name: "each content tetrahedron flipped exactly once",
        ok: flipped == content_set && flips.steps.len() == tets.len(),
        detail: format!("{} flips over {} tetrahedra", flips.steps.len(), tets.len()),
    });

    // Every non-coastal lower edge is flipped.
    let coastal: BTreeSet<(Cusp, Cusp)> = lower.boundary_edges().into_iter().collect();
    let flipped_edges: BTreeSet<(Cusp, Cusp)> = flips.steps.iter().map(|s| s.edge).collect();
    let missing: Vec<_> = lower
        .edges
        .iter()
        .filter(|e| !coastal.contains(e) && !flipped_edges.contains(e))
        .collect();
    checks.push(BallCheck {
        name: "every non-coastal lower edge flipped",
        ok: missing.is_empty(),
        detail: format!("{} unflipped interior edges", missing.len()),
    });

    // Coastal edges are never flipped.
    let coastal_flipped = flipped_edges.intersection(&coastal).count();
    checks.push(BallCheck {
        name: "no coastal edge flipped",
        ok: coastal_flipped == 0,
        detail: format!("{coastal_flipped} coastal edges flipped"),
    });

    // Replay the shelling.
    let mut surface: BTreeSet<[Cusp; 3]> = lower.faces.iter().copied().collect();
    let boundary0 = lower.boundary_edges();
    let mut shelling_ok = true;
    let mut boundary_ok = true;
    let mut detail = String::new();
    for step in &flips.steps {
        let (bottom, top) = bottom_top_faces(&step.tet);
        let be = step.tet.bottom_edge(loom);
        if edge_key(be.west, be.east) != step.edge {
            shelling_ok = false;
            detail = format!("step {}: edge does not match its tetrahedron", step.index);
            break;
        }
        if !bottom.iter().all(|f| surface.contains(f)) {
            shelling_ok = false;
            detail = format!(
                "step {}: bottom faces not on the current landscape",
                step.index
            );
            break;
        }
        for f in bottom {
            surface.remove(&f);
        }
        for f in top {
            surface.insert(f);
        }
        match build_landscape(&surface) {
            Ok(l) => {
                if l.boundary_edges() != boundary0 {
                    boundary_ok = false;
                }
            }
            Err(e) => {
                shelling_ok = false;
                detail = format!("step {}: {e}", step.index);
                break;
            }
        }
    }
    checks.push(BallCheck {
        name: "shelling glues each tetrahedron along its two bottom faces",
        ok: shelling_ok,
        detail,
    });
    checks.push(BallCheck {
        name: "landscape boundary fixed throughout",
        ok: boundary_ok,
        detail: String::new(),
    });

    let final_faces: BTreeSet<[Cusp; 3]> = surface;
    let upper_faces: BTreeSet<[Cusp; 3]> = upper.faces.iter().copied().collect();
    checks.push(BallCheck {
        name: "final landscape is the upper landscape",
        ok: shelling_ok && final_faces == upper_faces,
        detail: format!(
            "{} final faces vs {} upper faces",
            final_faces.len(),
            upper_faces.len()
        ),
    });

    Ok(BallReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::hull;
    use crate::loom::Monodromy;
    use crate::skeletal::{adjacent_tet, enumerate_face_connected};

    fn a0_loom() -> LatticeLoom {
        LatticeLoom::new(Monodromy::from_entries(2, 1, 1, 1).unwrap()).unwrap()
    }

    fn seed_edge(loom: &LatticeLoom) -> EdgeRect {
        EdgeRect::new(loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap()
    }

    fn example_tet(loom: &LatticeLoom) -> TetRect {
        tet_above(loom, &seed_edge(loom))
    }

    #[test]
    fn single_tet_content_and_landscape() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        let h = hull(&loom, &t.cusps());
        let c = content(&loom, &h).unwrap();
        assert_eq!(c, vec![t]);
        let l = lower_landscape(&loom, &h).unwrap();
        // The two bottom faces: the square with the bottom-edge diagonal.
        assert_eq!(l.faces.len(), 2);
        assert_eq!(l.boundary_cusps.len(), 4);
        assert!(l.interior_cusps.is_empty());
        assert!(l.euler_consistent());
        let (bottom, _) = bottom_top_faces(&t);
        let mut want: Vec<[Cusp; 3]> = bottom.to_vec();
        want.sort_unstable();
        assert_eq!(l.faces, want);
    }

    #[test]
    fn single_tet_layering() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        let h = hull(&loom, &t.cusps());
        let run = layer(&loom, &h, FlipPolicy::LexMin).unwrap();
        assert_eq!(run.flips.steps.len(), 1);
        assert_eq!(run.flips.steps[0].tet, t);
        let report = certify_ball(&loom, &run.flips, &run.content).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
    }

    #[test]
    fn two_tet_layering() {
        let loom = a0_loom();
        let t1 = example_tet(&loom);
        let f = t1.faces(&loom)[0].clone();
        let t2 = adjacent_tet(&loom, &t1, &f);
        let mut cusps: Vec<Cusp> = t1.cusps().into_iter().chain(t2.cusps()).collect();
        cusps.sort_unstable();
        cusps.dedup();
        let h = hull(&loom, &cusps);
        let run = layer(&loom, &h, FlipPolicy::LexMin).unwrap();
        assert!(run.content.contains(&t1) && run.content.contains(&t2));
        assert_eq!(run.flips.steps.len(), run.content.len());
        let report = certify_ball(&loom, &run.flips, &run.content).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
        // Policy independence: same tetrahedron multiset either way.
        let run2 = layer(&loom, &h, FlipPolicy::LexMax).unwrap();
        let a: BTreeSet<TetRect> = run.flips.steps.iter().map(|s| s.tet).collect();
        let b: BTreeSet<TetRect> = run2.flips.steps.iter().map(|s| s.tet).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn corrupted_sequence_fails() {
        let loom = a0_loom();
        let tets = enumerate_face_connected(&loom, &seed_edge(&loom), 3);
        let cusps: BTreeSet<Cusp> = tets.iter().flat_map(|t| t.cusps()).collect();
        let h = hull(&loom, &cusps.into_iter().collect::<Vec<_>>());
        let run = layer(&loom, &h, FlipPolicy::LexMin).unwrap();
        let mut corrupted = run.flips.clone();
        corrupted.steps.pop();
        let report = certify_ball(&loom, &corrupted, &run.content).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn flip_sequence_round_trips() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        let h = hull(&loom, &t.cusps());
        let run = layer(&loom, &h, FlipPolicy::LexMin).unwrap();
        let text = run.flips.to_json();
        assert_eq!(FlipSequence::from_json(&text).unwrap(), run.flips);
    }
}
