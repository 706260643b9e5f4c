//! Rectilinear geometry in the loom: polygonal paths and geodesics,
//! betweenness, hulls, and staircases.
//!
//! Paths run along leaves (axis-parallel segments in eigen-coordinates) and
//! may pass through cusps, which must appear as nodes: segment interiors are
//! cusp-free.  A path is a geodesic exactly when every leaf meets it in a
//! connected set, equivalently when it has no U-turns; straightening removes
//! U-turns by flipping them across their missing fourth side.

mod hull;
mod path;
mod staircase;

pub use hull::{
    between, hull, hull_convexity_check, hull_of_pair, leftmost, rightmost, ConvexityReport,
    Hull, HullComponent, Region,
};
pub use path::{find_uturn, straighten};
pub use staircase::{staircase_cusps, ExteriorCusp, Quadrant, Staircase};

use thiserror::Error;

use crate::exactnum::QuadNum;
use crate::loom::{Cusp, LatticeLoom, MaterialPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path needs at least one node")]
    Empty,
    #[error("nodes {0} and {1} share no leaf")]
    NoSharedLeaf(usize, usize),
    #[error("segment {0} passes through a cusp; cusps must be nodes")]
    CuspInsideSegment(usize),
    #[error("zero-length segment at node {0}")]
    ZeroLength(usize),
    #[error("path is not embedded: {0}")]
    NotEmbedded(String),
    #[error("straightening failed to terminate")]
    NonTerminating,
}

/// A node of a polygonal path: a cusp or an ordinary point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathNode {
    Cusp(Cusp),
    Material(MaterialPoint),
}

impl PathNode {
    pub fn coords(&self, loom: &LatticeLoom) -> (QuadNum, QuadNum) {
        match self {
            PathNode::Cusp(c) => loom.eigen_coords(*c),
            PathNode::Material(m) => (m.xhat.clone(), m.yhat.clone()),
        }
    }

    pub fn material(x: QuadNum, y: QuadNum) -> PathNode {
        PathNode::Material(MaterialPoint { xhat: x, yhat: y })
    }
}

/// An axis-parallel polygonal path with validated segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonalPath {
    nodes: Vec<PathNode>,
    coords: Vec<(QuadNum, QuadNum)>,
}

impl PolygonalPath {
    /// Validates that consecutive nodes share a leaf and that no segment
    /// interior contains a cusp.
    pub fn new(loom: &LatticeLoom, nodes: Vec<PathNode>) -> Result<Self, PathError> {
        if nodes.is_empty() {
            return Err(PathError::Empty);
        }
        let coords: Vec<_> = nodes.iter().map(|n| n.coords(loom)).collect();
        for i in 0..coords.len().saturating_sub(1) {
            let (a, b) = (&coords[i], &coords[i + 1]);
            if a == b {
                return Err(PathError::ZeroLength(i));
            }
            if a.0 != b.0 && a.1 != b.1 {
                return Err(PathError::NoSharedLeaf(i, i + 1));
            }
            if segment_interior_cusp(loom, a, b).is_some() {
                return Err(PathError::CuspInsideSegment(i));
            }
        }
        Ok(PolygonalPath { nodes, coords })
    }

    /// Builds a path from raw corner coordinates, inserting any cusps lying
    /// inside segments as nodes.
    pub fn from_coords(
        loom: &LatticeLoom,
        raw: Vec<(QuadNum, QuadNum)>,
    ) -> Result<Self, PathError> {
        let mut pts: Vec<(QuadNum, QuadNum)> = Vec::with_capacity(raw.len());
        for p in raw {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if pts.is_empty() {
            return Err(PathError::Empty);
        }
        let mut full = vec![pts[0].clone()];
        for i in 0..pts.len() - 1 {
            let (a, b) = (pts[i].clone(), pts[i + 1].clone());
            if let Some(c) = segment_interior_cusp(loom, &a, &b) {
                full.push(loom.eigen_coords(c));
            }
            full.push(b);
        }
        let nodes = full
            .iter()
            .map(|(x, y)| match loom.cusp_at(x, y) {
                Some(c) => PathNode::Cusp(c),
                None => PathNode::material(x.clone(), y.clone()),
            })
            .collect();
        PolygonalPath::new(loom, nodes)
    }

    pub fn nodes(&self) -> &[PathNode] {
        &self.nodes
    }

    pub fn coords(&self) -> &[(QuadNum, QuadNum)] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn endpoints(&self) -> (&PathNode, &PathNode) {
        (self.nodes.first().unwrap(), self.nodes.last().unwrap())
    }

    /// True when no two segments meet except consecutive ones at their node.
    pub fn is_embedded(&self) -> bool {
        path::check_embedded(self).is_ok()
    }

    /// Cusps the path passes through, including endpoints.
    pub fn cusps(&self) -> Vec<Cusp> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                PathNode::Cusp(c) => Some(*c),
                _ => None,
            })
            .collect()
    }

    /// Every leaf meets the path in a connected set.  For an embedded
    /// axis-parallel path this is equivalent to coordinate monotonicity,
    /// which is what the independent sweep below checks.
    pub fn is_leaf_connected(&self) -> bool {
        coordinate_monotone(&self.coords)
    }
}

/// Both coordinates weakly monotone along the walk.
fn coordinate_monotone(coords: &[(QuadNum, QuadNum)]) -> bool {
    let mut dir_x = 0i32;
    let mut dir_y = 0i32;
    for w in coords.windows(2) {
        let sx = match w[1].0.cmp(&w[0].0) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        };
        let sy = match w[1].1.cmp(&w[0].1) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        };
        if sx != 0 {
            if dir_x == 0 {
                dir_x = sx;
            } else if dir_x != sx {
                return false;
            }
        }
        if sy != 0 {
            if dir_y == 0 {
                dir_y = sy;
            } else if dir_y != sy {
                return false;
            }
        }
    }
    true
}

/// The unique cusp strictly inside the open segment from `a` to `b`, if any.
/// At most one exists because distinct cusps never share a coordinate.
pub(crate) fn segment_interior_cusp(
    loom: &LatticeLoom,
    a: &(QuadNum, QuadNum),
    b: &(QuadNum, QuadNum),
) -> Option<Cusp> {
    if a.1 == b.1 {
        let c = loom.cusp_on_horizontal(&a.1)?;
        let x = loom.xhat(c);
        let (lo, hi) = if a.0 < b.0 { (&a.0, &b.0) } else { (&b.0, &a.0) };
        (*lo < x && x < *hi).then_some(c)
    } else {
        let c = loom.cusp_on_vertical(&a.0)?;
        let y = loom.yhat(c);
        let (lo, hi) = if a.1 < b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
        (*lo < y && y < *hi).then_some(c)
    }
}
