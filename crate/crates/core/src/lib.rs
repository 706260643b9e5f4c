//! Veering triangulations of punctured-torus bundles, built from lattice
//! loom spaces with exact quadratic-field arithmetic.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: exact elements of `Q(sqrt(d))` with sign, order, floor;
//! - [`loom`]: the concrete loom space (plane in Anosov eigen-coordinates
//!   minus the integer lattice) and its primitive rectangle queries;
//! - [`skeletal`]: edge, face, and tetrahedron rectangles and their mutual
//!   relations (enumeration, vertical neighbours, face adjacency);
//! - [`triangulate`]: the induced locally veering ideal triangulation,
//!   structure checks, quotients by the mapping-torus symmetry group, and
//!   taut isomorphism search;
//! - [`geodesy`]: rectilinear polygonal paths, straightening, betweenness,
//!   hulls, and staircases;
//! - [`layering`]: hull content, lower landscapes, flip sequences, and
//!   combinatorial three-ball certification.

pub mod exactnum;
pub mod geodesy;
pub mod layering;
pub mod loom;
pub mod skeletal;
pub mod triangulate;
