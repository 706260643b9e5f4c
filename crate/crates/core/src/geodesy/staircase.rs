//! Staircases and their exterior cusps with axis-ray projections.
//!
//! The staircase based at a point or cusp, towards one quadrant, is the
//! union of all rectangles cornered there.  Its exterior cusps are those
//! spanning an empty box with the base point; projecting them to the two
//! axis rays gives strictly monotone, opposite-ordered sequences.

use crate::exactnum::QuadNum;
use crate::loom::{Cusp, Interval, LatticeLoom, Rect};

use super::PathNode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    NE,
    NW,
    SW,
    SE,
}

impl Quadrant {
    pub fn signs(self) -> (i32, i32) {
        match self {
            Quadrant::NE => (1, 1),
            Quadrant::NW => (-1, 1),
            Quadrant::SW => (-1, -1),
            Quadrant::SE => (1, -1),
        }
    }
}

impl std::fmt::Display for Quadrant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Quadrant::NE => "NE",
            Quadrant::NW => "NW",
            Quadrant::SW => "SW",
            Quadrant::SE => "SE",
        };
        write!(f, "{s}")
    }
}

/// An exterior cusp with its projections to the lower and upper axis rays.
#[derive(Debug, Clone)]
pub struct ExteriorCusp {
    pub cusp: Cusp,
    /// Projection to the horizontal axis ray: the cusp's x coordinate.
    pub proj_m: QuadNum,
    /// Projection to the vertical axis ray: the cusp's y coordinate.
    pub proj_ell: QuadNum,
}

#[derive(Debug, Clone)]
pub struct Staircase {
    pub base: (QuadNum, QuadNum),
    pub quadrant: Quadrant,
    pub window: Rect,
    /// Exterior cusps ordered by distance along the horizontal axis ray.
    pub exterior: Vec<ExteriorCusp>,
    /// Axis cusp of the horizontal ray, for a material base on a cusp leaf.
    pub axis_cusp_m: Option<Cusp>,
    /// Axis cusp of the vertical ray.
    pub axis_cusp_ell: Option<Cusp>,
}

/// All exterior cusps of the staircase at `base` towards `quadrant` whose
/// defining rectangle lies inside the window, with their projections.
pub fn staircase_cusps(
    loom: &LatticeLoom,
    base: &PathNode,
    quadrant: Quadrant,
    window: &Rect,
) -> Staircase {
    let b = base.coords(loom);
    let (sx, sy) = quadrant.signs();
    // Window extent of the quadrant in each direction.
    let x_band = if sx > 0 {
        Interval {
            lo: b.0.clone(),
            hi: window.x_hi.clone(),
            lo_closed: false,
            hi_closed: true,
        }
    } else {
        Interval {
            lo: window.x_lo.clone(),
            hi: b.0.clone(),
            lo_closed: true,
            hi_closed: false,
        }
    };
    let y_band = if sy > 0 {
        Interval {
            lo: b.1.clone(),
            hi: window.y_hi.clone(),
            lo_closed: false,
            hi_closed: true,
        }
    } else {
        Interval {
            lo: window.y_lo.clone(),
            hi: b.1.clone(),
            lo_closed: true,
            hi_closed: false,
        }
    };
    let candidates = loom.cusps_in_box(&x_band, &y_band);
    // Work in quadrant-normalised coordinates: distance from the base.
    let mut pts: Vec<(QuadNum, QuadNum, Cusp)> = candidates
        .into_iter()
        .map(|c| {
            let (x, y) = loom.eigen_coords(c);
            let dx = signed_dist(&x, &b.0, sx);
            let dy = signed_dist(&y, &b.1, sy);
            (dx, dy, c)
        })
        .collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    // Pareto frontier: exterior means no candidate strictly dominates.
    let mut exterior = Vec::new();
    let mut best_dy: Option<QuadNum> = None;
    for (_dx, dy, c) in pts {
        let keep = match &best_dy {
            None => true,
            Some(m) => dy < *m,
        };
        if keep {
            let (x, y) = loom.eigen_coords(c);
            exterior.push(ExteriorCusp {
                cusp: c,
                proj_m: x,
                proj_ell: y,
            });
            best_dy = Some(dy);
        }
    }
    // Axis cusps exist for a material base lying on a cusp leaf, on the
    // quadrant side of the base.
    let axis_cusp_m = loom.cusp_on_horizontal(&b.1).filter(|c| {
        let x = loom.xhat(*c);
        signed_dist(&x, &b.0, sx).is_positive()
    });
    let axis_cusp_ell = loom.cusp_on_vertical(&b.0).filter(|c| {
        let y = loom.yhat(*c);
        signed_dist(&y, &b.1, sy).is_positive()
    });
    Staircase {
        base: b,
        quadrant,
        window: window.clone(),
        exterior,
        axis_cusp_m,
        axis_cusp_ell,
    }
}

fn signed_dist(v: &QuadNum, base: &QuadNum, sign: i32) -> QuadNum {
    if sign > 0 {
        v - base
    } else {
        base - v
    }
}
