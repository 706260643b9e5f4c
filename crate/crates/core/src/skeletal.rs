//! Skeletal rectangles: edges, faces, and tetrahedron rectangles.
//!
//! An edge rectangle is an empty box spanned by two cusps at opposite
//! corners; a tetrahedron rectangle is an empty box with one cusp in the
//! interior of each side; a face rectangle sits between the two, with a cusp
//! at one corner and one on each of the two far sides.  Every tetrahedron
//! rectangle arises exactly once as the upward closure of its bottom edge,
//! which is what the enumeration here exploits.
//!
//! Window contract: enumeration returns the rectangles whose closed box lies
//! inside the window.  Blocking cusps for strips near the window boundary may
//! lie outside the window, so vertical/horizontal closures (`tet_above`,
//! `adjacent_tet`, ...) always search the full lattice; only the *selection*
//! of seed edges is windowed.  Callers wanting an enumeration complete for a
//! region should therefore window with a margin.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::exactnum::QuadNum;
use crate::loom::{Cusp, Interval, LatticeLoom, Rect, TetSides};

/// Edge colour: red edges join SW/NE corners, blue edges join NW/SE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn flipped(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }
}

impl std::fmt::Display for Colour {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Colour::Red => write!(f, "red"),
            Colour::Blue => write!(f, "blue"),
        }
    }
}

/// An edge rectangle, stored west cusp first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRect {
    pub west: Cusp,
    pub east: Cusp,
    pub colour: Colour,
}

impl EdgeRect {
    /// Validates emptiness: the closed box spanned by the cusps contains no
    /// third cusp.  Returns `None` otherwise or if the cusps coincide.
    pub fn new(loom: &LatticeLoom, c1: Cusp, c2: Cusp) -> Option<EdgeRect> {
        if c1 == c2 {
            return None;
        }
        let (x1, y1) = loom.eigen_coords(c1);
        let (x2, y2) = loom.eigen_coords(c2);
        let (west, east, yw, ye) = if x1 < x2 {
            (c1, c2, y1, y2)
        } else {
            (c2, c1, y2, y1)
        };
        let (y_lo, y_hi) = if yw < ye {
            (yw.clone(), ye.clone())
        } else {
            (ye.clone(), yw.clone())
        };
        let inside = loom.cusps_in_box(
            &Interval::closed(loom.xhat(west), loom.xhat(east)),
            &Interval::closed(y_lo, y_hi),
        );
        if inside.len() != 2 {
            return None;
        }
        let colour = if yw < ye { Colour::Red } else { Colour::Blue };
        Some(EdgeRect { west, east, colour })
    }

    /// Builds without the emptiness scan; callers guarantee validity.
    fn new_unchecked(loom: &LatticeLoom, c1: Cusp, c2: Cusp) -> EdgeRect {
        let (x1, y1) = loom.eigen_coords(c1);
        let (x2, y2) = loom.eigen_coords(c2);
        let (west, east, red) = if x1 < x2 {
            (c1, c2, y1 < y2)
        } else {
            (c2, c1, y2 < y1)
        };
        EdgeRect {
            west,
            east,
            colour: if red { Colour::Red } else { Colour::Blue },
        }
    }

    pub fn cusps(&self) -> [Cusp; 2] {
        [self.west, self.east]
    }

    /// Closed span in eigen-coordinates as an open `Rect`.
    pub fn rect(&self, loom: &LatticeLoom) -> Rect {
        let (xw, yw) = loom.eigen_coords(self.west);
        let (xe, ye) = loom.eigen_coords(self.east);
        let (y_lo, y_hi) = if yw < ye { (yw, ye) } else { (ye, yw) };
        Rect::new(xw, xe, y_lo, y_hi)
    }

    /// Canonical pair key, independent of orientation.
    pub fn key(&self) -> (Cusp, Cusp) {
        (self.west.min(self.east), self.west.max(self.east))
    }
}

/// Corner position of the material-corner-free cusp of a face rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CornerKind {
    SW,
    SE,
    NE,
    NW,
}

/// A face rectangle: a cusp at `corner`, one cusp on each of the two sides
/// not meeting the corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRect {
    pub corner: Cusp,
    pub kind: CornerKind,
    /// All three cusps, sorted, identifying the face.
    pub cusps: [Cusp; 3],
    pub rect: Rect,
}

impl FaceRect {
    pub fn key(&self) -> [Cusp; 3] {
        self.cusps
    }

    /// The edge of this face spanning its full horizontal extent: the pair
    /// of cusps sitting on the two vertical bounding lines.
    pub fn bottom_edge(&self, loom: &LatticeLoom) -> EdgeRect {
        let mut lo = None;
        let mut hi = None;
        for &c in &self.cusps {
            let x = loom.xhat(c);
            if x == self.rect.x_lo {
                lo = Some(c);
            } else if x == self.rect.x_hi {
                hi = Some(c);
            }
        }
        EdgeRect::new_unchecked(loom, lo.expect("face west cusp"), hi.expect("face east cusp"))
    }
}

/// A tetrahedron rectangle, identified by its four side cusps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TetRect {
    pub south: Cusp,
    pub east: Cusp,
    pub north: Cusp,
    pub west: Cusp,
}

impl TetRect {
    pub fn from_sides(sides: TetSides) -> TetRect {
        TetRect {
            south: sides.south,
            east: sides.east,
            north: sides.north,
            west: sides.west,
        }
    }

    /// Recovers the side roles of four cusps from their eigen-coordinates.
    pub fn from_cusp_set(loom: &LatticeLoom, cusps: [Cusp; 4]) -> TetRect {
        let coords = cusps.map(|c| loom.eigen_coords(c));
        let mut west = 0usize;
        let mut east = 0usize;
        let mut south = 0usize;
        let mut north = 0usize;
        for i in 1..4 {
            if coords[i].0 < coords[west].0 {
                west = i;
            }
            if coords[i].0 > coords[east].0 {
                east = i;
            }
            if coords[i].1 < coords[south].1 {
                south = i;
            }
            if coords[i].1 > coords[north].1 {
                north = i;
            }
        }
        let (west, east, south, north) = (cusps[west], cusps[east], cusps[south], cusps[north]);
        let t = TetRect {
            south,
            east,
            north,
            west,
        };
        debug_assert_eq!(
            {
                let mut v = t.cusps();
                v.sort_unstable();
                v
            },
            {
                let mut v = cusps;
                v.sort_unstable();
                v
            },
            "side roles must be distinct"
        );
        t
    }

    pub fn cusps(&self) -> [Cusp; 4] {
        [self.south, self.east, self.north, self.west]
    }

    pub fn rect(&self, loom: &LatticeLoom) -> Rect {
        Rect::new(
            loom.xhat(self.west),
            loom.xhat(self.east),
            loom.yhat(self.south),
            loom.yhat(self.north),
        )
    }

    /// The wide spanning edge `{west, east}`.
    pub fn bottom_edge(&self, loom: &LatticeLoom) -> EdgeRect {
        EdgeRect::new_unchecked(loom, self.west, self.east)
    }

    /// The tall spanning edge `{south, north}`.
    pub fn top_edge(&self, loom: &LatticeLoom) -> EdgeRect {
        EdgeRect::new_unchecked(loom, self.south, self.north)
    }

    /// All six edge rectangles: bottom, top, and the four equatorial pairs.
    pub fn edges(&self, loom: &LatticeLoom) -> [EdgeRect; 6] {
        let c = self.cusps();
        let pairs = [
            (c[0], c[1]),
            (c[0], c[2]),
            (c[0], c[3]),
            (c[1], c[2]),
            (c[1], c[3]),
            (c[2], c[3]),
        ];
        pairs.map(|(a, b)| EdgeRect::new_unchecked(loom, a, b))
    }

    /// The four face rectangles, obtained by cutting at each side cusp and
    /// keeping the part containing the opposite side's cusp.  Order:
    /// cut at south, east, north, west.
    pub fn faces(&self, loom: &LatticeLoom) -> [FaceRect; 4] {
        let r = self.rect(loom);
        [
            self.cut_vertical(loom, &r, self.south, self.north),
            self.cut_horizontal(loom, &r, self.east, self.west),
            self.cut_vertical(loom, &r, self.north, self.south),
            self.cut_horizontal(loom, &r, self.west, self.east),
        ]
    }

    /// Cut at a south/north cusp along its vertical line, keeping the side
    /// containing the opposite cusp.
    fn cut_vertical(
        &self,
        loom: &LatticeLoom,
        r: &Rect,
        at: Cusp,
        opposite: Cusp,
    ) -> FaceRect {
        let x_cut = loom.xhat(at);
        let keep_east = loom.xhat(opposite) > x_cut;
        let (x_lo, x_hi, third) = if keep_east {
            (x_cut, r.x_hi.clone(), self.east)
        } else {
            (r.x_lo.clone(), x_cut, self.west)
        };
        let corner_south = at == self.south;
        let kind = match (keep_east, corner_south) {
            (true, true) => CornerKind::SW,
            (true, false) => CornerKind::NW,
            (false, true) => CornerKind::SE,
            (false, false) => CornerKind::NE,
        };
        let mut cusps = [at, opposite, third];
        cusps.sort_unstable();
        FaceRect {
            corner: at,
            kind,
            cusps,
            rect: Rect::new(x_lo, x_hi, r.y_lo.clone(), r.y_hi.clone()),
        }
    }

    /// Cut at a west/east cusp along its horizontal line, keeping the side
    /// containing the opposite cusp.
    fn cut_horizontal(
        &self,
        loom: &LatticeLoom,
        r: &Rect,
        at: Cusp,
        opposite: Cusp,
    ) -> FaceRect {
        let y_cut = loom.yhat(at);
        let keep_north = loom.yhat(opposite) > y_cut;
        let (y_lo, y_hi, third) = if keep_north {
            (y_cut, r.y_hi.clone(), self.north)
        } else {
            (r.y_lo.clone(), y_cut, self.south)
        };
        let corner_west = at == self.west;
        let kind = match (keep_north, corner_west) {
            (true, true) => CornerKind::SW,
            (true, false) => CornerKind::SE,
            (false, true) => CornerKind::NW,
            (false, false) => CornerKind::NE,
        };
        let mut cusps = [at, opposite, third];
        cusps.sort_unstable();
        FaceRect {
            corner: at,
            kind,
            cusps,
            rect: Rect::new(r.x_lo.clone(), r.x_hi.clone(), y_lo, y_hi),
        }
    }
}

/// `p` west-east spans `q`: `p` contains a full horizontal leaf of `q`.
pub fn spans_we(loom: &LatticeLoom, p: &TetRect, q: &TetRect) -> bool {
    rect_spans_we(&p.rect(loom), &q.rect(loom))
}

pub fn rect_spans_we(p: &Rect, q: &Rect) -> bool {
    p.x_lo <= q.x_lo && q.x_hi <= p.x_hi && p.y_lo < q.y_hi && q.y_lo < p.y_hi
}

/// `p` properly west-east spans `q`: additionally `p - q` has two components,
/// i.e. `q` cuts all the way through `p` vertically.
pub fn rect_properly_spans_we(p: &Rect, q: &Rect) -> bool {
    p.x_lo < q.x_lo && q.x_hi < p.x_hi && q.y_lo <= p.y_lo && p.y_hi <= q.y_hi
}

pub fn rect_properly_spans_sn(p: &Rect, q: &Rect) -> bool {
    p.y_lo < q.y_lo && q.y_hi < p.y_hi && q.x_lo <= p.x_lo && p.x_hi <= q.x_hi
}

const APPROX_GUARD: f64 = 1e-7;

/// Orders by `f64` approximation when far apart, falling back to the exact
/// comparison when within the guard band.  The guard comfortably exceeds the
/// rounding error of evaluating window-sized coordinates in `f64`.
fn fast_lt(af: f64, a: &QuadNum, bf: f64, b: &QuadNum) -> bool {
    if (af - bf).abs() > APPROX_GUARD {
        af < bf
    } else {
        a < b
    }
}

struct Pt {
    c: Cusp,
    x: QuadNum,
    y: QuadNum,
    xf: f64,
    yf: f64,
}

/// All edge rectangles whose closed box lies inside `window`.
///
/// For each potential west cusp we sweep the remaining cusps eastward,
/// tracking the lowest blocker above and highest blocker below; a candidate
/// east cusp spans an empty box exactly when it beats the running blocker.
pub fn enumerate_edges(loom: &LatticeLoom, window: &Rect) -> Vec<EdgeRect> {
    let cusps = loom.cusps_in_box(
        &Interval::closed(window.x_lo.clone(), window.x_hi.clone()),
        &Interval::closed(window.y_lo.clone(), window.y_hi.clone()),
    );
    let mut pts: Vec<Pt> = cusps
        .into_iter()
        .map(|c| {
            let (x, y) = loom.eigen_coords(c);
            let (xf, yf) = (x.to_f64(), y.to_f64());
            Pt { c, x, y, xf, yf }
        })
        .collect();
    pts.sort_unstable_by(|a, b| {
        if fast_lt(a.xf, &a.x, b.xf, &b.x) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let mut out = Vec::new();
    for i in 0..pts.len() {
        let w = &pts[i];
        // Lowest yhat above w / highest yhat below w seen so far.
        let mut above: Option<usize> = None;
        let mut below: Option<usize> = None;
        for j in i + 1..pts.len() {
            let e = &pts[j];
            if fast_lt(w.yf, &w.y, e.yf, &e.y) {
                let clear = match above {
                    None => true,
                    Some(k) => fast_lt(e.yf, &e.y, pts[k].yf, &pts[k].y),
                };
                if clear {
                    out.push(EdgeRect {
                        west: w.c,
                        east: e.c,
                        colour: Colour::Red,
                    });
                    above = Some(j);
                }
            } else {
                let clear = match below {
                    None => true,
                    Some(k) => fast_lt(pts[k].yf, &pts[k].y, e.yf, &e.y),
                };
                if clear {
                    out.push(EdgeRect {
                        west: w.c,
                        east: e.c,
                        colour: Colour::Blue,
                    });
                    below = Some(j);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Highest cusp strictly below `y` in the open vertical strip, searching
/// downward in doubling bands.  Existence is guaranteed in the lattice model.
fn nearest_below_in_strip(
    loom: &LatticeLoom,
    x_lo: &QuadNum,
    x_hi: &QuadNum,
    y: &QuadNum,
    inclusive: bool,
) -> Cusp {
    let mut h = 1i64;
    let mut hi = y.clone();
    loop {
        let lo = y - &loom.rational(h);
        let band = Interval {
            lo: lo.clone(),
            hi: hi.clone(),
            lo_closed: true,
            hi_closed: inclusive,
        };
        let hits = loom.cusps_in_box(&Interval::open(x_lo.clone(), x_hi.clone()), &band);
        if let Some(best) = hits
            .into_iter()
            .max_by(|a, b| loom.yhat(*a).cmp(&loom.yhat(*b)))
        {
            return best;
        }
        hi = lo;
        h *= 2;
        assert!(h < (1 << 40), "no cusp found below strip; loom degenerate");
    }
}

fn nearest_above_in_strip(
    loom: &LatticeLoom,
    x_lo: &QuadNum,
    x_hi: &QuadNum,
    y: &QuadNum,
    inclusive: bool,
) -> Cusp {
    let mut h = 1i64;
    let mut lo = y.clone();
    loop {
        let hi = y + &loom.rational(h);
        let band = Interval {
            lo: lo.clone(),
            hi: hi.clone(),
            lo_closed: inclusive,
            hi_closed: true,
        };
        let hits = loom.cusps_in_box(&Interval::open(x_lo.clone(), x_hi.clone()), &band);
        if let Some(best) = hits
            .into_iter()
            .min_by(|a, b| loom.yhat(*a).cmp(&loom.yhat(*b)))
        {
            return best;
        }
        lo = hi;
        h *= 2;
        assert!(h < (1 << 40), "no cusp found above strip; loom degenerate");
    }
}

fn nearest_west_in_strip(
    loom: &LatticeLoom,
    y_lo: &QuadNum,
    y_hi: &QuadNum,
    x: &QuadNum,
    inclusive: bool,
) -> Cusp {
    let mut h = 1i64;
    let mut hi = x.clone();
    loop {
        let lo = x - &loom.rational(h);
        let band = Interval {
            lo: lo.clone(),
            hi: hi.clone(),
            lo_closed: true,
            hi_closed: inclusive,
        };
        let hits = loom.cusps_in_box(&band, &Interval::open(y_lo.clone(), y_hi.clone()));
        if let Some(best) = hits
            .into_iter()
            .max_by(|a, b| loom.xhat(*a).cmp(&loom.xhat(*b)))
        {
            return best;
        }
        hi = lo;
        h *= 2;
        assert!(h < (1 << 40), "no cusp found west of strip; loom degenerate");
    }
}

fn nearest_east_in_strip(
    loom: &LatticeLoom,
    y_lo: &QuadNum,
    y_hi: &QuadNum,
    x: &QuadNum,
    inclusive: bool,
) -> Cusp {
    let mut h = 1i64;
    let mut lo = x.clone();
    loop {
        let hi = x + &loom.rational(h);
        let band = Interval {
            lo: lo.clone(),
            hi: hi.clone(),
            lo_closed: inclusive,
            hi_closed: true,
        };
        let hits = loom.cusps_in_box(&band, &Interval::open(y_lo.clone(), y_hi.clone()));
        if let Some(best) = hits
            .into_iter()
            .min_by(|a, b| loom.xhat(*a).cmp(&loom.xhat(*b)))
        {
            return best;
        }
        lo = hi;
        h *= 2;
        assert!(h < (1 << 40), "no cusp found east of strip; loom degenerate");
    }
}

/// The unique tetrahedron rectangle having `e` as its bottom edge: the
/// vertical strip between `e`'s cusps, grown until the first blocking cusps
/// north and south.
pub fn tet_above(loom: &LatticeLoom, e: &EdgeRect) -> TetRect {
    let r = e.rect(loom);
    let south = nearest_below_in_strip(loom, &r.x_lo, &r.x_hi, &r.y_lo, false);
    let north = nearest_above_in_strip(loom, &r.x_lo, &r.x_hi, &r.y_hi, false);
    let t = TetRect {
        south,
        east: e.east,
        north,
        west: e.west,
    };
    debug_assert!(loom.is_tet_rect(&t.rect(loom)).is_some());
    t
}

/// The unique tetrahedron rectangle having `e` as its top edge.
pub fn tet_below(loom: &LatticeLoom, e: &EdgeRect) -> TetRect {
    let r = e.rect(loom);
    let west = nearest_west_in_strip(loom, &r.y_lo, &r.y_hi, &r.x_lo, false);
    let east = nearest_east_in_strip(loom, &r.y_lo, &r.y_hi, &r.x_hi, false);
    let (yw, ye) = (loom.yhat(e.west), loom.yhat(e.east));
    let (south, north) = if yw < ye {
        (e.west, e.east)
    } else {
        (e.east, e.west)
    };
    let t = TetRect {
        south,
        east,
        north,
        west,
    };
    debug_assert!(loom.is_tet_rect(&t.rect(loom)).is_some());
    t
}

/// The other tetrahedron rectangle containing face `f` of `t`, found by
/// expanding `f` across one of the two sides meeting its corner cusp.
pub fn adjacent_tet(loom: &LatticeLoom, t: &TetRect, f: &FaceRect) -> TetRect {
    let r = &f.rect;
    let others: [Cusp; 3] = f.cusps;
    let horizontal = match f.kind {
        // Extend across the vertical side at the corner.
        CornerKind::SW | CornerKind::NW => {
            nearest_west_in_strip(loom, &r.y_lo, &r.y_hi, &r.x_lo, false)
        }
        CornerKind::SE | CornerKind::NE => {
            nearest_east_in_strip(loom, &r.y_lo, &r.y_hi, &r.x_hi, false)
        }
    };
    let vertical = match f.kind {
        CornerKind::SW | CornerKind::SE => {
            nearest_below_in_strip(loom, &r.x_lo, &r.x_hi, &r.y_lo, false)
        }
        CornerKind::NW | CornerKind::NE => {
            nearest_above_in_strip(loom, &r.x_lo, &r.x_hi, &r.y_hi, false)
        }
    };
    let a = TetRect::from_cusp_set(loom, [others[0], others[1], others[2], horizontal]);
    let b = TetRect::from_cusp_set(loom, [others[0], others[1], others[2], vertical]);
    debug_assert!(loom.is_tet_rect(&a.rect(loom)).is_some());
    debug_assert!(loom.is_tet_rect(&b.rect(loom)).is_some());
    if a == *t {
        b
    } else {
        debug_assert_eq!(b, *t, "face does not belong to the given tetrahedron");
        a
    }
}

/// All tetrahedron rectangles containing the cusp-free box `r`.
///
/// Candidate side cusps are confined to a bounding box obtained by growing
/// `r` in each direction to the first blocking cusp; every containing
/// tetrahedron has its four side cusps in that box.
pub fn tets_containing(loom: &LatticeLoom, r: &Rect) -> Vec<TetRect> {
    let w0 = nearest_west_in_strip(loom, &r.y_lo, &r.y_hi, &r.x_lo, true);
    let e0 = nearest_east_in_strip(loom, &r.y_lo, &r.y_hi, &r.x_hi, true);
    let s0 = nearest_below_in_strip(loom, &r.x_lo, &r.x_hi, &r.y_lo, true);
    let n0 = nearest_above_in_strip(loom, &r.x_lo, &r.x_hi, &r.y_hi, true);
    let x1 = loom.xhat(w0);
    let x2 = loom.xhat(e0);
    let y1 = loom.yhat(s0);
    let y2 = loom.yhat(n0);
    let candidates = loom.cusps_in_box(
        &Interval::closed(x1, x2),
        &Interval::closed(y1, y2),
    );
    let coords: Vec<(Cusp, QuadNum, QuadNum)> = candidates
        .iter()
        .map(|&c| {
            let (x, y) = loom.eigen_coords(c);
            (c, x, y)
        })
        .collect();
    let mut out = Vec::new();
    for (w, wx, wy) in &coords {
        if *wx > r.x_lo {
            continue;
        }
        for (e, ex, ey) in &coords {
            if *ex < r.x_hi || ex <= wx {
                continue;
            }
            // Cusps interior to the candidate strip.
            let strip: Vec<&(Cusp, QuadNum, QuadNum)> = coords
                .iter()
                .filter(|(_, x, _)| x > wx && x < ex)
                .collect();
            if strip
                .iter()
                .any(|(_, _, y)| *y > r.y_lo && *y < r.y_hi)
            {
                continue;
            }
            let below = strip
                .iter()
                .filter(|(_, _, y)| *y <= r.y_lo)
                .max_by(|a, b| a.2.cmp(&b.2));
            let above = strip
                .iter()
                .filter(|(_, _, y)| *y >= r.y_hi)
                .min_by(|a, b| a.2.cmp(&b.2));
            let (Some(below), Some(above)) = (below, above) else {
                continue;
            };
            if *wy <= below.2 || *wy >= above.2 || *ey <= below.2 || *ey >= above.2 {
                continue;
            }
            let t = TetRect {
                south: below.0,
                east: *e,
                north: above.0,
                west: *w,
            };
            if loom.is_tet_rect(&t.rect(loom)).is_some() && t.rect(loom).contains_rect_closure(r)
            {
                out.push(t);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl Rect {
    /// Closure containment: every point of `r` is in the closure of `self`.
    pub fn contains_rect_closure(&self, r: &Rect) -> bool {
        self.x_lo <= r.x_lo && r.x_hi <= self.x_hi && self.y_lo <= r.y_lo && r.y_hi <= self.y_hi
    }
}

/// The tetrahedron rectangle with the same x-extent as `b`, grown vertically
/// to the first blocking cusps.  `b` must be cusp-free.
pub fn vertical_closure_tet(loom: &LatticeLoom, b: &Rect) -> TetRect {
    let south = nearest_below_in_strip(loom, &b.x_lo, &b.x_hi, &b.y_lo, true);
    let north = nearest_above_in_strip(loom, &b.x_lo, &b.x_hi, &b.y_hi, true);
    let sy = loom.yhat(south);
    let ny = loom.yhat(north);
    let west = nearest_west_in_strip(loom, &sy, &ny, &b.x_lo, true);
    let east = nearest_east_in_strip(loom, &sy, &ny, &b.x_hi, true);
    // The west/east search may widen past b's extent only when no cusp sits
    // exactly on b's bounding lines; either way the result is the closure.
    let t = TetRect {
        south,
        east,
        north,
        west,
    };
    debug_assert!(loom.is_tet_rect(&t.rect(loom)).is_some());
    t
}

/// Here the strip keeps exactly `b`'s x-extent; used when joining two
/// overlapping tetrahedron rectangles, whose west/east cusps supply the
/// sides.
fn vertical_expand_exact(loom: &LatticeLoom, b: &Rect, p: &TetRect, q: &TetRect) -> TetRect {
    let south = nearest_below_in_strip(loom, &b.x_lo, &b.x_hi, &b.y_lo, true);
    let north = nearest_above_in_strip(loom, &b.x_lo, &b.x_hi, &b.y_hi, true);
    let west = if loom.xhat(p.west) == b.x_lo {
        p.west
    } else {
        q.west
    };
    let east = if loom.xhat(p.east) == b.x_hi {
        p.east
    } else {
        q.east
    };
    let t = TetRect {
        south,
        east,
        north,
        west,
    };
    debug_assert!(loom.is_tet_rect(&t.rect(loom)).is_some());
    t
}

/// Steps from `p` to `q` through face-adjacent tetrahedron rectangles, where
/// `p` west-east spans `q`: repeatedly cross the vertical-cut face that still
/// contains the intersection with `q`.
fn ascend(loom: &LatticeLoom, p: &TetRect, q: &TetRect) -> Vec<TetRect> {
    debug_assert!(spans_we(loom, p, q));
    let target = q.rect(loom);
    let mut path = vec![*p];
    let mut cur = *p;
    let mut guard = 0usize;
    while cur != *q {
        let faces = cur.faces(loom);
        // Faces cut at the south/north cusps keep the full height.
        let f = [&faces[0], &faces[2]]
            .into_iter()
            .find(|f| f.rect.x_lo <= target.x_lo && target.x_hi <= f.rect.x_hi)
            .expect("one vertical-cut face contains the spanned intersection");
        cur = adjacent_tet(loom, &cur, f);
        debug_assert!(spans_we(loom, &cur, q) || cur == *q);
        path.push(cur);
        guard += 1;
        assert!(guard < 100_000, "ascend failed to terminate");
    }
    path
}

/// Joins two tetrahedron rectangles whose boxes overlap: both west-east span
/// the vertical closure of their intersection.
fn join_overlapping(loom: &LatticeLoom, p: &TetRect, q: &TetRect) -> Vec<TetRect> {
    if p == q {
        return vec![*p];
    }
    let b = p
        .rect(loom)
        .intersection(&q.rect(loom))
        .expect("tetrahedron rectangles must overlap");
    let mid = vertical_expand_exact(loom, &b, p, q);
    let first = ascend(loom, p, &mid);
    let mut second = ascend(loom, q, &mid);
    second.reverse();
    let mut path = first;
    path.extend(second.into_iter().skip(1));
    path
}

/// A cusp-free open box around a non-cusp point, shrunk until empty.
fn cusp_free_box(loom: &LatticeLoom, x: &QuadNum, y: &QuadNum) -> Rect {
    let mut num = 1i64;
    let mut den = 1i64;
    loop {
        let r = QuadNum::of(num, den, 0, 1, loom.field());
        let rect = Rect::new(x - &r, x + &r, y - &r, y + &r);
        if loom.open_box_empty(&rect) {
            return rect;
        }
        den *= 2;
        num = 1;
        assert!(den < (1 << 40), "point appears to be a cusp");
    }
}

/// A path of face-adjacent tetrahedron rectangles from `p` to `q`.
///
/// Overlapping pairs are joined by ascending to the vertical closure of the
/// intersection; disjoint pairs are first chained through tetrahedra covering
/// an axis-parallel route between their centres.
pub fn face_connect(loom: &LatticeLoom, p: &TetRect, q: &TetRect) -> Vec<TetRect> {
    if p == q {
        return vec![*p];
    }
    let chain = if p.rect(loom).intersects(&q.rect(loom)) {
        vec![*p, *q]
    } else {
        let mut chain = vec![*p];
        let pr = p.rect(loom);
        let qr = q.rect(loom);
        let half = |a: &QuadNum, b: &QuadNum| -> QuadNum {
            let two = QuadNum::from_integer(2, loom.field());
            (a + b).try_div(&two).unwrap()
        };
        let start = (half(&pr.x_lo, &pr.x_hi), half(&pr.y_lo, &pr.y_hi));
        let target = (half(&qr.x_lo, &qr.x_hi), half(&qr.y_lo, &qr.y_hi));
        // Axis-parallel route: horizontal leg, then vertical leg.
        let waypoints = [(target.0.clone(), start.1.clone()), target.clone()];
        let mut z = start;
        let mut cur = *p;
        let mut guard = 0usize;
        for wp in waypoints {
            loop {
                let r = cur.rect(loom);
                if r.x_lo < wp.0 && wp.0 < r.x_hi && r.y_lo < wp.1 && wp.1 < r.y_hi {
                    break;
                }
                let exit = leg_exit(loom, &r, &z, &wp);
                let boxed = cusp_free_box(loom, &exit.0, &exit.1);
                let next = vertical_closure_tet(loom, &boxed);
                debug_assert!(next.rect(loom).intersects(&cur.rect(loom)));
                chain.push(next);
                cur = next;
                z = exit;
                guard += 1;
                assert!(guard < 10_000, "face_connect walk failed to terminate");
            }
            z = wp;
        }
        chain.push(*q);
        chain
    };
    let mut path: Vec<TetRect> = Vec::new();
    for pair in chain.windows(2) {
        let seg = join_overlapping(loom, &pair[0], &pair[1]);
        if path.is_empty() {
            path.extend(seg);
        } else {
            path.extend(seg.into_iter().skip(1));
        }
    }
    if path.is_empty() {
        path.push(*p);
    }
    // Collapse accidental immediate backtracks.
    let mut cleaned: Vec<TetRect> = Vec::new();
    for t in path {
        if cleaned.len() >= 2 && cleaned[cleaned.len() - 2] == t {
            cleaned.pop();
        } else if cleaned.last() != Some(&t) {
            cleaned.push(t);
        }
    }
    cleaned
}

/// Where the segment from `z` towards `wp` (axis-parallel) leaves the open
/// box `r`; `z` lies in the closure of `r`.  If the exit lands exactly on a
/// side cusp it is nudged along the side.
fn leg_exit(
    loom: &LatticeLoom,
    r: &Rect,
    z: &(QuadNum, QuadNum),
    wp: &(QuadNum, QuadNum),
) -> (QuadNum, QuadNum) {
    let mut exit = if z.1 == wp.1 {
        // Horizontal motion.
        let x = if wp.0 > z.0 {
            if wp.0 < r.x_hi {
                wp.0.clone()
            } else {
                r.x_hi.clone()
            }
        } else if wp.0 > r.x_lo {
            wp.0.clone()
        } else {
            r.x_lo.clone()
        };
        (x, z.1.clone())
    } else {
        let y = if wp.1 > z.1 {
            if wp.1 < r.y_hi {
                wp.1.clone()
            } else {
                r.y_hi.clone()
            }
        } else if wp.1 > r.y_lo {
            wp.1.clone()
        } else {
            r.y_lo.clone()
        };
        (z.0.clone(), y)
    };
    if loom.cusp_at(&exit.0, &exit.1).is_some() {
        // Slide along the side away from its unique cusp.
        let two = QuadNum::from_integer(2, loom.field());
        if exit.0 == r.x_lo || exit.0 == r.x_hi {
            exit.1 = (&exit.1 + &r.y_hi).try_div(&two).unwrap();
        } else {
            exit.0 = (&exit.0 + &r.x_hi).try_div(&two).unwrap();
        }
        debug_assert!(loom.cusp_at(&exit.0, &exit.1).is_none());
    }
    exit
}

/// Deterministic face-connected enumeration: breadth-first search through
/// face adjacency starting from the tetrahedron above the given edge.
/// Every prefix of the returned list is face connected.
pub fn enumerate_face_connected(
    loom: &LatticeLoom,
    seed: &EdgeRect,
    count: usize,
) -> Vec<TetRect> {
    let start = tet_above(loom, seed);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(start);
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        out.push(t);
        if out.len() >= count {
            break;
        }
        for f in t.faces(loom) {
            let n = adjacent_tet(loom, &t, &f);
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loom::Monodromy;

    fn a0_loom() -> LatticeLoom {
        LatticeLoom::new(Monodromy::from_entries(2, 1, 1, 1).unwrap()).unwrap()
    }

    fn example_tet(loom: &LatticeLoom) -> TetRect {
        let e = EdgeRect::new(loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap();
        tet_above(loom, &e)
    }

    /// Brute-force edge listing over lattice coordinates in a safe range.
    fn brute_edges(loom: &LatticeLoom, window: &Rect) -> Vec<EdgeRect> {
        let cusps = loom.cusps_in_box(
            &Interval::closed(window.x_lo.clone(), window.x_hi.clone()),
            &Interval::closed(window.y_lo.clone(), window.y_hi.clone()),
        );
        let mut out = Vec::new();
        for i in 0..cusps.len() {
            for j in i + 1..cusps.len() {
                if let Some(e) = EdgeRect::new(loom, cusps[i], cusps[j]) {
                    out.push(e);
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn edge_examples() {
        let loom = a0_loom();
        let red = EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap();
        assert_eq!(red.colour, Colour::Red);
        let blue = EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(1, 0)).unwrap();
        assert_eq!(blue.colour, Colour::Blue);
        // Not an edge: the unit box between (0,0) and (1,1) in lattice
        // coordinates spans eigen box containing other cusps.
        assert!(EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(2, 3)).is_none());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let loom = a0_loom();
        let window = Rect::window(3, loom.field());
        let fast = enumerate_edges(&loom, &window);
        let slow = brute_edges(&loom, &window);
        assert_eq!(fast, slow);
        assert!(fast.contains(&EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap()));
        // A window with at most one cusp has no edges.
        let tiny = Rect::new(
            QuadNum::of(1, 3, 0, 1, 5),
            QuadNum::of(2, 3, 0, 1, 5),
            QuadNum::of(1, 3, 0, 1, 5),
            QuadNum::of(2, 3, 0, 1, 5),
        );
        assert!(enumerate_edges(&loom, &tiny).is_empty());
    }

    #[test]
    fn tet_above_example() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        assert_eq!(t.west, Cusp::new(0, 0));
        assert_eq!(t.east, Cusp::new(0, 1));
        assert_eq!(t.south, Cusp::new(1, -1));
        assert_eq!(t.north, Cusp::new(-1, 2));
        let r = t.rect(&loom);
        // (0,1) x (-phi, phi^2)
        assert_eq!(r.x_lo, loom.rational(0));
        assert_eq!(r.x_hi, loom.rational(1));
        assert_eq!(r.y_lo, QuadNum::of(-1, 2, -1, 2, 5));
        assert_eq!(r.y_hi, QuadNum::of(3, 2, 1, 2, 5));
    }

    #[test]
    fn tet_below_and_round_trip() {
        let loom = a0_loom();
        let e = EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap();
        let below = tet_below(&loom, &e);
        assert_eq!(below.south, Cusp::new(0, 0));
        assert_eq!(below.north, Cusp::new(0, 1));
        // Round trip: bottom edge of tet_above(e) is e.
        let above = tet_above(&loom, &e);
        assert_eq!(above.bottom_edge(&loom).key(), e.key());
        assert_eq!(tet_below(&loom, &above.top_edge(&loom)), above);
    }

    #[test]
    fn tet_combinatorics() {
        let loom = a0_loom();
        let window = Rect::window(4, loom.field());
        for e in enumerate_edges(&loom, &window) {
            let t = tet_above(&loom, &e);
            let edges = t.edges(&loom);
            assert_eq!(edges.len(), 6);
            // Exactly two spanning edges: bottom and top.
            let r = t.rect(&loom);
            let spanning = edges
                .iter()
                .filter(|e| {
                    let er = e.rect(&loom);
                    (er.x_lo == r.x_lo && er.x_hi == r.x_hi)
                        || (er.y_lo == r.y_lo && er.y_hi == r.y_hi)
                })
                .count();
            assert_eq!(spanning, 2);
            let faces = t.faces(&loom);
            assert_eq!(faces.len(), 4);
            // Each face omits exactly one side cusp; all four are omitted.
            let mut omitted: Vec<Cusp> = faces
                .iter()
                .map(|f| {
                    *t.cusps()
                        .iter()
                        .find(|c| !f.cusps.contains(c))
                        .expect("face omits one cusp")
                })
                .collect();
            omitted.sort_unstable();
            let mut all = t.cusps();
            all.sort_unstable();
            assert_eq!(omitted, all);
            // Each face contains 3 of the 6 edges.
            for f in &faces {
                let inside = edges
                    .iter()
                    .filter(|e| f.cusps.contains(&e.west) && f.cusps.contains(&e.east))
                    .count();
                assert_eq!(inside, 3);
            }
        }
    }

    #[test]
    fn adjacency_involution_and_distinct_neighbours() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        let mut neighbours = Vec::new();
        for f in t.faces(&loom) {
            let n = adjacent_tet(&loom, &t, &f);
            assert_ne!(n, t);
            // The shared face seen from the neighbour's side.
            let shared = n
                .faces(&loom)
                .into_iter()
                .find(|g| g.cusps == f.cusps)
                .expect("neighbour contains the shared face");
            assert_eq!(adjacent_tet(&loom, &n, &shared), t);
            // Five combined cusps share exactly the face's three.
            let mut combined: Vec<Cusp> = t.cusps().into_iter().chain(n.cusps()).collect();
            combined.sort_unstable();
            combined.dedup();
            assert_eq!(combined.len(), 5);
            neighbours.push(n);
        }
        neighbours.sort_unstable();
        neighbours.dedup();
        assert_eq!(neighbours.len(), 4);
    }

    #[test]
    fn tets_containing_cases() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        // A tet rect is maximal: only itself.
        assert_eq!(tets_containing(&loom, &t.rect(&loom)), vec![t]);
        // A face lies in exactly two tets.
        for f in t.faces(&loom) {
            let containing = tets_containing(&loom, &f.rect);
            assert_eq!(containing.len(), 2, "face {:?}", f.cusps);
            assert!(containing.contains(&t));
        }
        // An edge box: finite, matches windowed brute force.
        let e = t.bottom_edge(&loom);
        let er = e.rect(&loom);
        let got = tets_containing(&loom, &er);
        assert!(got.contains(&t));
        let window = Rect::window(8, loom.field());
        let mut want: Vec<TetRect> = enumerate_edges(&loom, &window)
            .iter()
            .map(|e| tet_above(&loom, e))
            .filter(|cand| cand.rect(&loom).contains_rect_closure(&er))
            .collect();
        want.sort_unstable();
        want.dedup();
        assert_eq!(got, want);
    }

    #[test]
    fn face_connect_trivial_and_adjacent() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        assert_eq!(face_connect(&loom, &t, &t), vec![t]);
        let f = &t.faces(&loom)[0];
        let n = adjacent_tet(&loom, &t, f);
        let path = face_connect(&loom, &t, &n);
        assert_eq!(path, vec![t, n]);
    }

    #[test]
    fn face_connect_distant() {
        let loom = a0_loom();
        let p = example_tet(&loom);
        let far = EdgeRect::new(&loom, Cusp::new(3, 1), Cusp::new(3, 2))
            .expect("translated edge is an edge");
        let q = tet_above(&loom, &far);
        assert!(!p.rect(&loom).intersects(&q.rect(&loom)));
        let path = face_connect(&loom, &p, &q);
        assert_eq!(*path.first().unwrap(), p);
        assert_eq!(*path.last().unwrap(), q);
        for pair in path.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert_ne!(a, b);
            // Face adjacency: they share a face rectangle.
            let shared = a
                .faces(&loom)
                .into_iter()
                .any(|f| b.faces(&loom).iter().any(|g| g.cusps == f.cusps));
            assert!(shared, "{a:?} and {b:?} share no face");
        }
    }

    #[test]
    fn bfs_enumeration_is_face_connected() {
        let loom = a0_loom();
        let seed = EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap();
        let tets = enumerate_face_connected(&loom, &seed, 10);
        assert_eq!(tets.len(), 10);
        // Every prefix is face connected: each tet after the first shares a
        // face with an earlier one.
        for (i, t) in tets.iter().enumerate().skip(1) {
            let connected = tets[..i].iter().any(|s| {
                s.faces(&loom)
                    .iter()
                    .any(|f| t.faces(&loom).iter().any(|g| g.cusps == f.cusps))
            });
            assert!(connected, "tet {i} not adjacent to any earlier tet");
        }
    }

    #[test]
    fn edge_in_finitely_many_faces() {
        let loom = a0_loom();
        let t = example_tet(&loom);
        let e = t.bottom_edge(&loom);
        let tets = tets_containing(&loom, &e.rect(&loom));
        let mut faces = Vec::new();
        for t in &tets {
            for f in t.faces(&loom) {
                if f.cusps.contains(&e.west) && f.cusps.contains(&e.east) {
                    faces.push(f.cusps);
                }
            }
        }
        faces.sort_unstable();
        faces.dedup();
        assert!(!faces.is_empty());
        assert!(faces.len() <= 2 * tets.len());
    }
}
