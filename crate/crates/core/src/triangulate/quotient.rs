//! Quotients by the mapping-torus symmetry group.
//!
//! The group is generated by the lattice translations together with the
//! monodromy action `v -> Av`.  Orbits of tetrahedron rectangles are finite
//! in number; each orbit owns a canonical representative obtained by
//! translating the bottom edge's west cusp to the origin and scaling the
//! bottom width into `[1, |lambda|)` by powers of `A`.

use std::collections::BTreeSet;

use crate::exactnum::QuadNum;
use crate::loom::{Cusp, LatticeLoom, Mat2, Monodromy, Rect};
use crate::skeletal::{adjacent_tet, enumerate_edges, tet_above, TetRect};

use super::{
    model_from_rect, perm_compose, Gluing, IdealTriangulation, Meta, TriError,
};

/// An affine symmetry of the lattice loom: `v -> Mv + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoomAffine {
    pub linear: Mat2,
    pub offset: (i64, i64),
}

impl LoomAffine {
    pub fn identity() -> Self {
        LoomAffine {
            linear: Mat2::IDENTITY,
            offset: (0, 0),
        }
    }

    pub fn translation(t: (i64, i64)) -> Self {
        LoomAffine {
            linear: Mat2::IDENTITY,
            offset: t,
        }
    }

    pub fn linear(m: Mat2) -> Self {
        LoomAffine {
            linear: m,
            offset: (0, 0),
        }
    }

    pub fn apply(&self, c: Cusp) -> Cusp {
        let v = self.linear.apply((c.x, c.y));
        Cusp::new(v.0 + self.offset.0, v.1 + self.offset.1)
    }

    /// `self` after `inner`: `(self . inner)(v) = self(inner(v))`.
    pub fn compose(&self, inner: &LoomAffine) -> LoomAffine {
        let off = self.linear.apply(inner.offset);
        LoomAffine {
            linear: self.linear.mul(&inner.linear),
            offset: (off.0 + self.offset.0, off.1 + self.offset.1),
        }
    }

    pub fn apply_tet(&self, loom: &LatticeLoom, t: &TetRect) -> TetRect {
        TetRect::from_cusp_set(loom, t.cusps().map(|c| self.apply(c)))
    }
}

/// True when the linear map sends the foliation pair to itself: its action
/// on the expanding eigenrow is proportional to one of the two eigenrows.
pub fn is_leaf_preserving(loom: &LatticeLoom, m: &Mat2) -> bool {
    if m.det().abs() != 1 {
        return false;
    }
    let d = loom.field();
    let (u1, _) = loom.expanding_row();
    let (s1, _) = loom.contracting_row();
    let e = m.0;
    // (u1, 1) * M = (u1*e00 + e10, u1*e01 + e11)
    let first = &u1 * &QuadNum::from_integer(e[0][0], d) + QuadNum::from_integer(e[1][0], d);
    let second = &u1 * &QuadNum::from_integer(e[0][1], d) + QuadNum::from_integer(e[1][1], d);
    first == &u1 * &second || first == &s1 * &second
}

/// The symmetry group of a mapping torus: lattice translations and the
/// monodromy glide.  For `det = -1` monodromies the glide reverses the
/// transverse orientation of the contracting foliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryGroup {
    monodromy: Mat2,
    reverses_contracting_orientation: bool,
}

impl SymmetryGroup {
    pub fn mapping_torus(m: &Monodromy) -> SymmetryGroup {
        SymmetryGroup {
            monodromy: m.matrix(),
            reverses_contracting_orientation: m.det() == -1,
        }
    }

    pub fn monodromy_matrix(&self) -> Mat2 {
        self.monodromy
    }

    pub fn reverses_contracting_orientation(&self) -> bool {
        self.reverses_contracting_orientation
    }

    pub fn generators(&self) -> Vec<LoomAffine> {
        vec![
            LoomAffine::translation((1, 0)),
            LoomAffine::translation((0, 1)),
            LoomAffine::linear(self.monodromy),
        ]
    }

    /// Every generator must send cusps to cusps and leaves to leaves.
    pub fn is_valid_for(&self, loom: &LatticeLoom) -> bool {
        self.generators()
            .iter()
            .all(|g| is_leaf_preserving(loom, &g.linear))
    }
}

/// The canonical orbit representative of a tetrahedron rectangle, together
/// with the group element mapping the input onto it.
pub fn canonical_representative(loom: &LatticeLoom, t: &TetRect) -> (TetRect, LoomAffine) {
    let a_mat = loom.monodromy().matrix();
    let a_inv = a_mat.inverse();
    let abs_lambda = loom.lambda().abs();
    let one = QuadNum::one(loom.field());
    let mut cur = *t;
    let mut acc = LoomAffine::identity();
    let mut guard = 0usize;
    loop {
        let w = cur.west;
        if w != Cusp::new(0, 0) {
            let tr = LoomAffine::translation((-w.x, -w.y));
            cur = tr.apply_tet(loom, &cur);
            acc = tr.compose(&acc);
        }
        debug_assert_eq!(cur.west, Cusp::new(0, 0));
        let width = loom.xhat(cur.east);
        debug_assert!(width.is_positive());
        let step = if width < one {
            LoomAffine::linear(a_mat)
        } else if width >= abs_lambda {
            LoomAffine::linear(a_inv)
        } else {
            break;
        };
        cur = step.apply_tet(loom, &cur);
        acc = step.compose(&acc);
        guard += 1;
        assert!(guard < 512, "canonicalisation failed to converge");
    }
    debug_assert_eq!(acc.apply_tet(loom, t), cur);
    (cur, acc)
}

#[derive(Debug, Clone)]
pub struct QuotientTriangulation {
    pub tri: IdealTriangulation,
    /// Canonical representatives, one per tetrahedron orbit, in sorted order.
    pub reps: Vec<TetRect>,
    /// Window half-size at which the orbit set stabilised.
    pub window_used: i64,
}

fn orbit_set(loom: &LatticeLoom, half: i64) -> BTreeSet<TetRect> {
    let window = Rect::window(half, loom.field());
    enumerate_edges(loom, &window)
        .iter()
        .map(|e| canonical_representative(loom, &tet_above(loom, e)).0)
        .collect()
}

/// Quotients the induced triangulation by the symmetry group.
///
/// Orbit representatives are enumerated in a window which is doubled until
/// the representative set is equal two rounds running; if it never
/// stabilises the window is reported insufficient.
pub fn quotient(
    loom: &LatticeLoom,
    group: &SymmetryGroup,
    window_half: i64,
) -> Result<QuotientTriangulation, TriError> {
    assert!(
        group.is_valid_for(loom) && group.monodromy_matrix() == loom.monodromy().matrix(),
        "symmetry group does not act on this loom"
    );
    let max_rounds = 7usize;
    let mut half = window_half.max(2);
    let mut prev = orbit_set(loom, half);
    for _ in 0..max_rounds {
        let next = orbit_set(loom, 2 * half);
        if !prev.is_empty() && next == prev {
            let reps: Vec<TetRect> = prev.into_iter().collect();
            return build_quotient(loom, reps, 2 * half);
        }
        prev = next;
        half *= 2;
    }
    Err(TriError::WindowInsufficient {
        rounds: max_rounds,
        window: half,
    })
}

fn build_quotient(
    loom: &LatticeLoom,
    reps: Vec<TetRect>,
    window_used: i64,
) -> Result<QuotientTriangulation, TriError> {
    let index_of = |t: &TetRect| reps.binary_search(t);
    let mut models: Vec<_> = reps
        .iter()
        .enumerate()
        .map(|(i, t)| model_from_rect(loom, i, t))
        .collect();

    for (i, t) in reps.iter().enumerate() {
        let sides = t.cusps();
        for f in t.faces(loom) {
            let fi = sides
                .iter()
                .position(|c| !f.cusps.contains(c))
                .expect("face omits one side cusp");
            let neighbour = adjacent_tet(loom, t, &f);
            let (rep, g) = canonical_representative(loom, &neighbour);
            let j = index_of(&rep).map_err(|_| TriError::WindowInsufficient {
                rounds: 0,
                window: window_used,
            })?;
            let rep_cusps = reps[j].cusps();
            let mut perm = [4u8; 4];
            for s in 0..4usize {
                if s == fi {
                    continue;
                }
                let image = g.apply(sides[s]);
                perm[s] = rep_cusps
                    .iter()
                    .position(|&c| c == image)
                    .expect("image cusp on neighbour representative")
                    as u8;
            }
            let used: BTreeSet<u8> = perm.iter().copied().filter(|&s| s < 4).collect();
            perm[fi] = (0..4u8).find(|s| !used.contains(s)).unwrap();
            models[i].gluings[fi] = Some(Gluing { other: j, perm });
        }
    }

    let mut tri = IdealTriangulation {
        tets: models,
        vertex_count: 0,
        meta: Meta {
            monodromy: Some(loom.monodromy().matrix()),
            word: None,
            window: Some(window_used),
            discriminant: Some(loom.raw_discriminant()),
        },
    };
    // Gluings must come out involutive; anything else is an internal error.
    for (i, t) in tri.tets.iter().enumerate() {
        for f in 0..4 {
            let Some(g) = t.gluings[f] else {
                return Err(TriError::Malformed(format!(
                    "quotient tet {i} face {f} unglued"
                )));
            };
            let Some(h) = tri.tets[g.other].gluings[g.perm[f] as usize] else {
                return Err(TriError::Malformed("asymmetric gluing".into()));
            };
            if h.other != i || perm_compose(&h.perm, &g.perm) != [0, 1, 2, 3] {
                return Err(TriError::Malformed(format!(
                    "quotient gluing at tet {i} face {f} is not involutive"
                )));
            }
        }
    }
    tri.relabel_vertices_by_orbit();
    Ok(QuotientTriangulation {
        tri,
        reps,
        window_used,
    })
}
