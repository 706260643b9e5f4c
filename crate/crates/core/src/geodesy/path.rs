//! U-turn detection and straightening.

use crate::exactnum::QuadNum;
use crate::loom::{Interval, LatticeLoom, Rect};

use super::{PathError, PolygonalPath};

/// A maximal straight stretch of the path: possibly several collinear
/// segments through cusp nodes.
#[derive(Debug, Clone)]
struct Run {
    vertical: bool,
    /// The fixed coordinate of the supporting leaf.
    level: QuadNum,
    /// Moving coordinate at the start and end of the run, in travel order.
    from: QuadNum,
    to: QuadNum,
    /// Node indices of the run's first and last node.
    start: usize,
    end: usize,
}

impl Run {
    fn dir(&self) -> i32 {
        if self.to > self.from {
            1
        } else {
            -1
        }
    }

    fn length(&self) -> QuadNum {
        (&self.to - &self.from).abs()
    }
}

fn merge_runs(coords: &[(QuadNum, QuadNum)]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for i in 0..coords.len().saturating_sub(1) {
        let (a, b) = (&coords[i], &coords[i + 1]);
        let vertical = a.0 == b.0;
        let (level, from, to) = if vertical {
            (a.0.clone(), a.1.clone(), b.1.clone())
        } else {
            (a.1.clone(), a.0.clone(), b.0.clone())
        };
        match runs.last_mut() {
            Some(r) if r.vertical == vertical && r.level == level => {
                r.to = to;
                r.end = i + 1;
            }
            _ => runs.push(Run {
                vertical,
                level,
                from,
                to,
                start: i,
                end: i + 1,
            }),
        }
    }
    runs
}

/// A maximal U-turn of the path: a rectangle with three sides on the path
/// and interior meeting neither the path nor any cusp.  Returns the
/// rectangle and the node index where its middle side begins.
///
/// After merging collinear stretches, a U-turn occurs exactly at a triple of
/// runs whose outer members travel in opposite directions; the rectangle is
/// clipped by the shorter arm, by the first cusp inside, and by any other
/// part of the path that would enter it.
pub fn find_uturn(loom: &LatticeLoom, path: &PolygonalPath) -> Option<(Rect, usize)> {
    let coords = path.coords();
    let runs = merge_runs(coords);
    for k in 0..runs.len().saturating_sub(2) {
        let (r1, r2, r3) = (&runs[k], &runs[k + 1], &runs[k + 2]);
        if r1.dir() == r3.dir() {
            continue;
        }
        if let Some(rect) = clip_uturn(loom, coords, &runs, k) {
            return Some((rect, r2.start));
        }
        let _ = (r1, r3);
    }
    None
}

/// The maximal U-turn rectangle at the reversal `runs[k..k+3]`, or `None`
/// if it degenerates (it cannot, for an embedded path).
fn clip_uturn(
    loom: &LatticeLoom,
    coords: &[(QuadNum, QuadNum)],
    runs: &[Run],
    k: usize,
) -> Option<Rect> {
    let (r1, r2, r3) = (&runs[k], &runs[k + 1], &runs[k + 2]);
    let d1 = r1.dir();
    let c0 = &r2.level;
    let (lo_level, hi_level) = if r1.level < r3.level {
        (r1.level.clone(), r3.level.clone())
    } else {
        (r3.level.clone(), r1.level.clone())
    };
    let mut w = r1.length().min(r3.length());

    // Clip at the first cusp inside the candidate strip.
    {
        let far = along_offset(c0, &w, -d1);
        let (a_lo, a_hi) = if d1 > 0 {
            (far.clone(), c0.clone())
        } else {
            (c0.clone(), far.clone())
        };
        let hits = if r2.vertical {
            loom.cusps_in_box(
                &Interval::open(a_lo, a_hi),
                &Interval::open(lo_level.clone(), hi_level.clone()),
            )
        } else {
            loom.cusps_in_box(
                &Interval::open(lo_level.clone(), hi_level.clone()),
                &Interval::open(a_lo, a_hi),
            )
        };
        for c in hits {
            let along = if r2.vertical { loom.xhat(c) } else { loom.yhat(c) };
            let dist = (c0 - &along).abs();
            if dist < w {
                w = dist;
            }
        }
    }

    // Clip against other parts of the path.
    let own = r1.start..r3.end; // segment indices of the three runs
    for i in 0..coords.len() - 1 {
        if own.contains(&i) {
            continue;
        }
        let (a, b) = (&coords[i], &coords[i + 1]);
        let seg_vertical = a.0 == b.0;
        let (s_level, s_lo, s_hi) = if seg_vertical {
            let (lo, hi) = minmax(&a.1, &b.1);
            (a.0.clone(), lo, hi)
        } else {
            let (lo, hi) = minmax(&a.0, &b.0);
            (a.1.clone(), lo, hi)
        };
        // Express in (along, across) with along parallel to r1.
        if seg_vertical == r2.vertical {
            // Parallel to the middle side: cuts the box at its along-level.
            if s_level_in_open_strip(&s_level, c0, &w, d1)
                && ranges_overlap_open(&s_lo, &s_hi, &lo_level, &hi_level)
            {
                w = (c0 - &s_level).abs();
            }
        } else {
            // Parallel to the arms: clip the along extent.
            if s_level > lo_level && s_level < hi_level {
                let toward = if d1 > 0 { &s_hi } else { &s_lo };
                if s_level_in_open_strip(toward, c0, &w, d1) {
                    w = (c0 - toward).abs();
                }
            }
        }
    }

    if !w.is_positive() {
        return None;
    }
    let far = along_offset(c0, &w, -d1);
    let (a_lo, a_hi) = if d1 > 0 {
        (far, c0.clone())
    } else {
        (c0.clone(), far)
    };
    Some(if r2.vertical {
        Rect::new(a_lo, a_hi, lo_level, hi_level)
    } else {
        Rect::new(lo_level, hi_level, a_lo, a_hi)
    })
}

fn along_offset(c0: &QuadNum, w: &QuadNum, sign: i32) -> QuadNum {
    if sign > 0 {
        c0 + w
    } else {
        c0 - w
    }
}

fn s_level_in_open_strip(v: &QuadNum, c0: &QuadNum, w: &QuadNum, d1: i32) -> bool {
    let far = along_offset(c0, w, -d1);
    if d1 > 0 {
        *v > far && *v < *c0
    } else {
        *v < far && *v > *c0
    }
}

fn minmax(a: &QuadNum, b: &QuadNum) -> (QuadNum, QuadNum) {
    if a < b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn ranges_overlap_open(

    a_lo: &QuadNum,
    a_hi: &QuadNum,
    b_lo: &QuadNum,
    b_hi: &QuadNum,
) -> bool {
    a_lo < b_hi && b_lo < a_hi
}

/// Straightens an embedded path into a geodesic with the same endpoints:
/// repeatedly flip a maximal U-turn across its missing side, cancelling any
/// backtracking and excising any loops pinched off in the process.  The
/// total length drops with every flip, and all corner coordinates stay on a
/// fixed finite grid, so the loop terminates.
pub fn straighten(loom: &LatticeLoom, path: &PolygonalPath) -> Result<PolygonalPath, PathError> {
    check_embedded(path)?;
    let mut current = path.clone();
    for _ in 0..100_000 {
        let Some((rect, _)) = find_uturn(loom, &current) else {
            debug_assert!(current.is_leaf_connected());
            return Ok(current);
        };
        let coords = apply_flip(current.coords(), &rect);
        let coords = simplify(coords);
        let coords = cut_loops(coords);
        current = PolygonalPath::from_coords(loom, coords)?;
    }
    Err(PathError::NonTerminating)
}

/// Replaces the three box sides on the path by the missing fourth side.
fn apply_flip(coords: &[(QuadNum, QuadNum)], rect: &Rect) -> Vec<(QuadNum, QuadNum)> {
    // Recover the orientation: which side of the box lies on the path's
    // middle run.  The middle run is the unique full side; find it by
    // scanning for a run covering one entire side of the rectangle.
    let runs = merge_runs(coords);
    for k in 0..runs.len().saturating_sub(2) {
        let (r1, r2, r3) = (&runs[k], &runs[k + 1], &runs[k + 2]);
        if r1.dir() == r3.dir() {
            continue;
        }
        // Does this triple match the rectangle?
        let (_c0, far, lo_level, hi_level, vertical) = if r2.vertical {
            if r2.level == rect.x_lo {
                (
                    rect.x_lo.clone(),
                    rect.x_hi.clone(),
                    rect.y_lo.clone(),
                    rect.y_hi.clone(),
                    true,
                )
            } else if r2.level == rect.x_hi {
                (
                    rect.x_hi.clone(),
                    rect.x_lo.clone(),
                    rect.y_lo.clone(),
                    rect.y_hi.clone(),
                    true,
                )
            } else {
                continue;
            }
        } else if r2.level == rect.y_lo {
            (
                rect.y_lo.clone(),
                rect.y_hi.clone(),
                rect.x_lo.clone(),
                rect.x_hi.clone(),
                false,
            )
        } else if r2.level == rect.y_hi {
            (
                rect.y_hi.clone(),
                rect.y_lo.clone(),
                rect.x_lo.clone(),
                rect.x_hi.clone(),
                false,
            )
        } else {
            continue;
        };
        let levels_match = if r1.level < r3.level {
            r1.level == lo_level && r3.level == hi_level
        } else {
            r3.level == lo_level && r1.level == hi_level
        };
        if !levels_match {
            continue;
        }
        // Build the replacement: keep r1 up to the far line, cross, resume r3.
        let d1 = r1.dir();
        let p1 = corner(&far, &r1.level, vertical);
        let p2 = corner(&far, &r3.level, vertical);
        let mut out: Vec<(QuadNum, QuadNum)> = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            if i < r1.start {
                out.push(c.clone());
            } else if i >= r1.start && i <= r1.end {
                // Nodes on r1: keep those strictly before the far line.
                let along = if vertical { &c.0 } else { &c.1 };
                if before(along, &far, d1) {
                    out.push(c.clone());
                }
            }
            if i == r1.end {
                push_dedup(&mut out, p1.clone());
                push_dedup(&mut out, p2.clone());
            }
            if i > r1.end && i >= r2.end && i <= r3.end {
                let along = if vertical { &c.0 } else { &c.1 };
                if before(along, &far, d1) {
                    push_dedup(&mut out, c.clone());
                }
            }
            if i > r3.end {
                push_dedup(&mut out, c.clone());
            }
        }
        return out;
    }
    unreachable!("flip rectangle does not match any U-turn of the path");
}

fn corner(along: &QuadNum, level: &QuadNum, vertical_middle: bool) -> (QuadNum, QuadNum) {
    if vertical_middle {
        (along.clone(), level.clone())
    } else {
        (level.clone(), along.clone())
    }
}

/// Strictly before the line `at` when travelling in direction `d`.
fn before(v: &QuadNum, at: &QuadNum, d: i32) -> bool {
    if d > 0 {
        v < at
    } else {
        v > at
    }
}

fn push_dedup(out: &mut Vec<(QuadNum, QuadNum)>, p: (QuadNum, QuadNum)) {
    if out.last() != Some(&p) {
        out.push(p);
    }
}

/// Removes zero-length segments, merges collinear stretches, and cancels
/// immediate backtracks.
fn simplify(mut coords: Vec<(QuadNum, QuadNum)>) -> Vec<(QuadNum, QuadNum)> {
    loop {
        let mut changed = false;
        let mut out: Vec<(QuadNum, QuadNum)> = Vec::with_capacity(coords.len());
        for p in coords.into_iter() {
            if out.last() == Some(&p) {
                changed = true;
                continue;
            }
            while out.len() >= 2 {
                let n = out.len();
                let (a, b) = (&out[n - 2], &out[n - 1]);
                let collinear = (a.0 == b.0 && b.0 == p.0) || (a.1 == b.1 && b.1 == p.1);
                if collinear {
                    out.pop();
                    changed = true;
                } else {
                    break;
                }
            }
            if out.last() == Some(&p) {
                changed = true;
            } else {
                out.push(p);
            }
        }
        coords = out;
        if !changed {
            return coords;
        }
    }
}

/// Excises pinched-off loops: whenever two non-adjacent segments meet, the
/// walk between them is replaced by the meeting point.
fn cut_loops(mut coords: Vec<(QuadNum, QuadNum)>) -> Vec<(QuadNum, QuadNum)> {
    'outer: loop {
        let n = coords.len();
        for i in 0..n.saturating_sub(1) {
            for j in i + 2..n.saturating_sub(1) {
                if let Some(p) = segments_meet(&coords[i], &coords[i + 1], &coords[j], &coords[j + 1])
                {
                    if j == i + 2 && p == coords[i + 1] && p == coords[j] {
                        continue;
                    }
                    let mut next: Vec<(QuadNum, QuadNum)> = coords[..=i].to_vec();
                    push_dedup(&mut next, p);
                    for c in &coords[j + 1..] {
                        push_dedup(&mut next, c.clone());
                    }
                    coords = simplify(next);
                    continue 'outer;
                }
            }
        }
        return coords;
    }
}

/// A meeting point of two closed axis-parallel segments, if any.  For
/// collinear overlaps the point closest to the first segment's start is
/// returned.
fn segments_meet(
    a0: &(QuadNum, QuadNum),
    a1: &(QuadNum, QuadNum),
    b0: &(QuadNum, QuadNum),
    b1: &(QuadNum, QuadNum),
) -> Option<(QuadNum, QuadNum)> {
    let a_vert = a0.0 == a1.0;
    let b_vert = b0.0 == b1.0;
    match (a_vert, b_vert) {
        (true, true) => {
            if a0.0 != b0.0 {
                return None;
            }
            let (alo, ahi) = minmax(&a0.1, &a1.1);
            let (blo, bhi) = minmax(&b0.1, &b1.1);
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if lo > hi {
                return None;
            }
            // Closest to a0.
            let y = if (&a0.1 - &lo).abs() <= (&a0.1 - &hi).abs() {
                lo
            } else {
                hi
            };
            Some((a0.0.clone(), y))
        }
        (false, false) => {
            if a0.1 != b0.1 {
                return None;
            }
            let (alo, ahi) = minmax(&a0.0, &a1.0);
            let (blo, bhi) = minmax(&b0.0, &b1.0);
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if lo > hi {
                return None;
            }
            let x = if (&a0.0 - &lo).abs() <= (&a0.0 - &hi).abs() {
                lo
            } else {
                hi
            };
            Some((x, a0.1.clone()))
        }
        (true, false) => perp_meet(a0, a1, b0, b1),
        (false, true) => perp_meet(b0, b1, a0, a1),
    }
}

fn perp_meet(
    v0: &(QuadNum, QuadNum),
    v1: &(QuadNum, QuadNum),
    h0: &(QuadNum, QuadNum),
    h1: &(QuadNum, QuadNum),
) -> Option<(QuadNum, QuadNum)> {
    let x = &v0.0;
    let y = &h0.1;
    let (vlo, vhi) = minmax(&v0.1, &v1.1);
    let (hlo, hhi) = minmax(&h0.0, &h1.0);
    (&vlo <= y && y <= &vhi && &hlo <= x && x <= &hhi).then(|| (x.clone(), y.clone()))
}

/// Embeddedness: all nodes distinct and no two segments meet except
/// consecutive ones at their shared node.
pub(crate) fn check_embedded(path: &PolygonalPath) -> Result<(), PathError> {
    let coords = path.coords();
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if coords[i] == coords[j] {
                return Err(PathError::NotEmbedded(format!(
                    "nodes {i} and {j} coincide"
                )));
            }
        }
    }
    let n = coords.len();
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..n.saturating_sub(1) {
            let meet = segments_meet(&coords[i], &coords[i + 1], &coords[j], &coords[j + 1]);
            match meet {
                None => {}
                Some(p) => {
                    if j == i + 1 && p == coords[j] {
                        // Consecutive segments touching at the shared node:
                        // fine unless they overlap further.
                        let a_vert = coords[i].0 == coords[i + 1].0;
                        let b_vert = coords[j].0 == coords[j + 1].0;
                        if a_vert == b_vert {
                            // Collinear: embedded only if directions agree.
                            let d_a = if a_vert {
                                coords[i + 1].1 > coords[i].1
                            } else {
                                coords[i + 1].0 > coords[i].0
                            };
                            let d_b = if b_vert {
                                coords[j + 1].1 > coords[j].1
                            } else {
                                coords[j + 1].0 > coords[j].0
                            };
                            if d_a != d_b {
                                return Err(PathError::NotEmbedded(format!(
                                    "segments {i} and {j} backtrack"
                                )));
                            }
                        }
                    } else {
                        return Err(PathError::NotEmbedded(format!(
                            "segments {i} and {j} intersect"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::PathNode;
    use crate::loom::Monodromy;

    fn a0_loom() -> LatticeLoom {
        LatticeLoom::new(Monodromy::from_entries(2, 1, 1, 1).unwrap()).unwrap()
    }

    fn pt(loom: &LatticeLoom, xn: i64, xd: i64, yn: i64, yd: i64) -> (QuadNum, QuadNum) {
        let _ = loom;
        (QuadNum::of(xn, xd, 0, 1, 5), QuadNum::of(yn, yd, 0, 1, 5))
    }

    fn path_from(loom: &LatticeLoom, pts: &[(QuadNum, QuadNum)]) -> PolygonalPath {
        PolygonalPath::from_coords(loom, pts.to_vec()).unwrap()
    }

    #[test]
    fn unit_box_uturn() {
        let loom = a0_loom();
        // East along y=1/3 from x=1/3 to x=2/3, north to y=2/3, west back to
        // x=1/3: three sides of an empty box.
        let p = path_from(
            &loom,
            &[
                pt(&loom, 1, 3, 1, 3),
                pt(&loom, 2, 3, 1, 3),
                pt(&loom, 2, 3, 2, 3),
                pt(&loom, 1, 3, 2, 3),
            ],
        );
        let (rect, idx) = find_uturn(&loom, &p).expect("U-turn");
        assert_eq!(idx, 1);
        assert_eq!(rect.x_lo, QuadNum::of(1, 3, 0, 1, 5));
        assert_eq!(rect.x_hi, QuadNum::of(2, 3, 0, 1, 5));
        assert_eq!(rect.y_lo, QuadNum::of(1, 3, 0, 1, 5));
        assert_eq!(rect.y_hi, QuadNum::of(2, 3, 0, 1, 5));
        // Straighten collapses it to the single fourth side.
        let s = straighten(&loom, &p).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coords()[0], pt(&loom, 1, 3, 1, 3));
        assert_eq!(s.coords()[1], pt(&loom, 1, 3, 2, 3));
    }

    #[test]
    fn single_segment_has_no_uturn() {
        let loom = a0_loom();
        let p = path_from(&loom, &[pt(&loom, 0, 1, 1, 3), pt(&loom, 5, 1, 1, 3)]);
        assert!(find_uturn(&loom, &p).is_none());
        let s = straighten(&loom, &p).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn uturn_clipped_by_cusp() {
        let loom = a0_loom();
        // A wide U around the origin cusp: the maximal U-turn stops at it.
        let p = path_from(
            &loom,
            &[
                pt(&loom, 2, 1, -1, 1),
                pt(&loom, 2, 1, 1, 1),
                pt(&loom, -3, 1, 1, 1),
                pt(&loom, -3, 1, -1, 1),
            ],
        );
        let (rect, _) = find_uturn(&loom, &p).expect("U-turn");
        // The box hangs from y=1 and must stop at a cusp with yhat in
        // (-1, 1); the origin is one such blocker.
        assert!(rect.y_lo >= loom.rational(-1));
        assert!(loom.open_box_empty(&rect));
        let s = straighten(&loom, &p).unwrap();
        assert!(find_uturn(&loom, &s).is_none());
        assert!(s.is_leaf_connected());
        assert_eq!(s.coords().first().unwrap(), &pt(&loom, 2, 1, -1, 1));
        assert_eq!(s.coords().last().unwrap(), &pt(&loom, -3, 1, -1, 1));
    }

    #[test]
    fn straighten_passes_through_cusps() {
        let loom = a0_loom();
        // Endpoints are cusps; the straightened path may run through others.
        let a = loom.eigen_coords(crate::loom::Cusp::new(0, 0));
        let b = loom.eigen_coords(crate::loom::Cusp::new(0, 1));
        let detour = vec![
            a.clone(),
            (a.0.clone(), QuadNum::of(5, 2, 0, 1, 5)),
            (QuadNum::of(3, 2, 0, 1, 5), QuadNum::of(5, 2, 0, 1, 5)),
            (QuadNum::of(3, 2, 0, 1, 5), b.1.clone()),
            b.clone(),
        ];
        let p = PolygonalPath::from_coords(&loom, detour).unwrap();
        let s = straighten(&loom, &p).unwrap();
        assert!(find_uturn(&loom, &s).is_none());
        assert!(s.is_leaf_connected());
        let (e0, e1) = s.endpoints();
        assert_eq!(e0, &PathNode::Cusp(crate::loom::Cusp::new(0, 0)));
        assert_eq!(e1, &PathNode::Cusp(crate::loom::Cusp::new(0, 1)));
    }

    #[test]
    fn rejects_non_embedded() {
        let loom = a0_loom();
        let p = path_from(
            &loom,
            &[
                pt(&loom, 0, 1, 1, 3),
                pt(&loom, 3, 1, 1, 3),
                pt(&loom, 3, 1, 4, 3),
                pt(&loom, 1, 1, 4, 3),
                pt(&loom, 1, 1, -2, 3),
            ],
        );
        assert!(matches!(
            straighten(&loom, &p),
            Err(PathError::NotEmbedded(_))
        ));
    }

    #[test]
    fn idempotent_on_geodesics() {
        let loom = a0_loom();
        let p = path_from(
            &loom,
            &[
                pt(&loom, 0, 1, 1, 3),
                pt(&loom, 1, 1, 1, 3),
                pt(&loom, 1, 1, 4, 3),
                pt(&loom, 7, 3, 4, 3),
            ],
        );
        assert!(p.is_leaf_connected());
        let s = straighten(&loom, &p).unwrap();
        assert_eq!(s, p);
    }
}
