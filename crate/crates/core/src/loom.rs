//! The lattice loom space.
//!
//! A hyperbolic integer matrix `A` has two real eigenvalues `lambda` and
//! `lambda'` with left eigenrows `w_u`, `w_s`.  Writing `xhat(v) = w_u . v`
//! and `yhat(v) = w_s . v` sends the plane to eigen-coordinates in which the
//! expanding and contracting foliations become the vertical and horizontal
//! line families.  Deleting the integer lattice gives the loom space this
//! crate computes in; the deleted lattice points are its cusps.
//!
//! All queries here are exact.  A box query maps its corners back through the
//! inverse eigenbasis, takes an integer bounding box, and filters candidates
//! with sign tests.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{square_free_decompose, QuadNum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoomError {
    #[error("matrix has determinant {0}, expected +1 or -1")]
    NotUnimodular(i64),
    #[error("matrix is not hyperbolic (trace {trace}, det {det}): not Anosov")]
    NotAnosov { trace: i64, det: i64 },
    #[error("monodromy word is empty")]
    EmptyWord,
    #[error("monodromy word contains {0:?}; only 'R' and 'L' are allowed")]
    BadLetter(char),
    #[error("window too small: {0}")]
    WindowInsufficient(String),
}

/// A 2x2 integer matrix, acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);
    /// `R = [[1,1],[0,1]]`, the right factor of monodromy words.
    pub const R: Mat2 = Mat2([[1, 1], [0, 1]]);
    /// `L = [[1,0],[1,1]]`, the left factor of monodromy words.
    pub const L: Mat2 = Mat2([[1, 0], [1, 1]]);

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        assert!(det == 1 || det == -1, "inverse of non-unimodular matrix");
        let [[a, b], [c, d]] = self.0;
        Mat2([[d * det, -b * det], [-c * det, a * det]])
    }

    pub fn apply(&self, v: (i64, i64)) -> (i64, i64) {
        (
            self.0[0][0] * v.0 + self.0[0][1] * v.1,
            self.0[1][0] * v.0 + self.0[1][1] * v.1,
        )
    }
}

/// A hyperbolic element of `GL(2, Z)` defining a punctured-torus bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monodromy {
    matrix: Mat2,
}

impl Monodromy {
    /// Validates hyperbolicity: `det = +1` needs `|trace| > 2`; `det = -1`
    /// needs `trace != 0` (otherwise an eigenvalue has modulus one).
    pub fn from_matrix(matrix: Mat2) -> Result<Self, LoomError> {
        let det = matrix.det();
        let trace = matrix.trace();
        if det != 1 && det != -1 {
            return Err(LoomError::NotUnimodular(det));
        }
        let hyperbolic = match det {
            1 => trace.abs() > 2,
            _ => trace != 0,
        };
        if !hyperbolic {
            return Err(LoomError::NotAnosov { trace, det });
        }
        Ok(Monodromy { matrix })
    }

    pub fn from_entries(a: i64, b: i64, c: i64, d: i64) -> Result<Self, LoomError> {
        Monodromy::from_matrix(Mat2([[a, b], [c, d]]))
    }

    /// Product of `R`/`L` letters in word order.
    pub fn from_word(word: &str) -> Result<Self, LoomError> {
        if word.is_empty() {
            return Err(LoomError::EmptyWord);
        }
        let mut m = Mat2::IDENTITY;
        for ch in word.chars() {
            let f = match ch {
                'R' | 'r' => Mat2::R,
                'L' | 'l' => Mat2::L,
                other => return Err(LoomError::BadLetter(other)),
            };
            m = m.mul(&f);
        }
        Monodromy::from_matrix(m)
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    pub fn det(&self) -> i64 {
        self.matrix.det()
    }

    pub fn trace(&self) -> i64 {
        self.matrix.trace()
    }
}

/// A deleted lattice point of the loom space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cusp {
    pub x: i64,
    pub y: i64,
}

impl Cusp {
    pub fn new(x: i64, y: i64) -> Self {
        Cusp { x, y }
    }

    pub fn translate(&self, t: (i64, i64)) -> Cusp {
        Cusp::new(self.x + t.0, self.y + t.1)
    }
}

/// A point of the loom space in eigen-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaterialPoint {
    pub xhat: QuadNum,
    pub yhat: QuadNum,
}

/// An open axis-parallel box in eigen-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub x_lo: QuadNum,
    pub x_hi: QuadNum,
    pub y_lo: QuadNum,
    pub y_hi: QuadNum,
}

impl Rect {
    pub fn new(x_lo: QuadNum, x_hi: QuadNum, y_lo: QuadNum, y_hi: QuadNum) -> Self {
        assert!(x_lo < x_hi && y_lo < y_hi, "degenerate rectangle");
        Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }

    /// Square window `[-h, h]^2` in eigen-coordinates.
    pub fn window(h: i64, d: u64) -> Self {
        Rect::new(
            QuadNum::from_integer(-h, d),
            QuadNum::from_integer(h, d),
            QuadNum::from_integer(-h, d),
            QuadNum::from_integer(h, d),
        )
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x_lo <= other.x_lo
            && other.x_hi <= self.x_hi
            && self.y_lo <= other.y_lo
            && other.y_hi <= self.y_hi
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x_lo < other.x_hi
            && other.x_lo < self.x_hi
            && self.y_lo < other.y_hi
            && other.y_lo < self.y_hi
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        if !self.intersects(other) {
            return None;
        }
        Some(Rect::new(
            self.x_lo.clone().max(other.x_lo.clone()),
            self.x_hi.clone().min(other.x_hi.clone()),
            self.y_lo.clone().max(other.y_lo.clone()),
            self.y_hi.clone().min(other.y_hi.clone()),
        ))
    }

    pub fn contains_point(&self, x: &QuadNum, y: &QuadNum) -> bool {
        self.x_lo < *x && *x < self.x_hi && self.y_lo < *y && *y < self.y_hi
    }
}

/// One coordinate range of a box query, with per-end openness.
#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: QuadNum,
    pub hi: QuadNum,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: QuadNum, hi: QuadNum) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: QuadNum, hi: QuadNum) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// The single point `{v}`.
    pub fn point(v: QuadNum) -> Self {
        Interval::closed(v.clone(), v)
    }

    fn admits(&self, v: &QuadNum) -> bool {
        let lo_ok = if self.lo_closed {
            self.lo <= *v
        } else {
            self.lo < *v
        };
        let hi_ok = if self.hi_closed {
            *v <= self.hi
        } else {
            *v < self.hi
        };
        lo_ok && hi_ok
    }
}

/// The four cusps on the open sides of a tetrahedron rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TetSides {
    pub south: Cusp,
    pub east: Cusp,
    pub north: Cusp,
    pub west: Cusp,
}

/// The loom space of a monodromy: eigen-coordinates, cusp queries, and the
/// emptiness predicates everything downstream is built on.
#[derive(Debug, Clone)]
pub struct LatticeLoom {
    monodromy: Monodromy,
    /// Raw discriminant `trace^2 - 4 det` of the characteristic polynomial.
    d_raw: i64,
    /// Square-free core of `d_raw`; the field is `Q(sqrt(d))`.
    d: u64,
    lambda: QuadNum,
    lambda_conj: QuadNum,
    /// First entry of the expanding eigenrow `w_u = (u1, 1)`.
    u1: QuadNum,
    /// First entry of the contracting eigenrow `w_s = (s1, 1)`; `s1 = conj(u1)`.
    s1: QuadNum,
}

impl LatticeLoom {
    pub fn new(monodromy: Monodromy) -> Result<Self, LoomError> {
        let m = monodromy.matrix().0;
        let (a, c) = (m[0][0], m[1][0]);
        let trace = monodromy.trace();
        let det = monodromy.det();
        let d_raw = trace * trace - 4 * det;
        debug_assert!(d_raw > 0);
        let (s, d) = square_free_decompose(d_raw as u64);
        // A hyperbolic matrix never has rational eigenvalues, so d >= 2 and
        // the off-diagonal entries are nonzero.
        debug_assert!(d >= 2);
        debug_assert!(c != 0);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let tr_half = BigRational::from_integer(BigInt::from(trace)) * &half;
        let rad_half = BigRational::from_integer(BigInt::from(s as i64)) * &half;
        // Expanding eigenvalue: the root on the side of the trace.
        let lambda = if trace > 0 {
            QuadNum::new(tr_half.clone(), rad_half.clone(), d).unwrap()
        } else {
            QuadNum::new(tr_half.clone(), -rad_half.clone(), d).unwrap()
        };
        let lambda_conj = lambda.conjugate();
        debug_assert!(lambda.abs() > QuadNum::one(d));
        // Left eigenrow (c, lambda - a), normalised to second entry 1.
        let cq = QuadNum::from_integer(c, d);
        let aq = QuadNum::from_integer(a, d);
        let u1 = cq.try_div(&lambda.try_sub(&aq).unwrap()).unwrap();
        let s1 = u1.conjugate();
        Ok(LatticeLoom {
            monodromy,
            d_raw,
            d,
            lambda,
            lambda_conj,
            u1,
            s1,
        })
    }

    pub fn monodromy(&self) -> &Monodromy {
        &self.monodromy
    }

    pub fn field(&self) -> u64 {
        self.d
    }

    pub fn raw_discriminant(&self) -> i64 {
        self.d_raw
    }

    pub fn lambda(&self) -> &QuadNum {
        &self.lambda
    }

    pub fn lambda_conjugate(&self) -> &QuadNum {
        &self.lambda_conj
    }

    /// Expanding eigenrow `(u1, 1)`.
    pub fn expanding_row(&self) -> (QuadNum, QuadNum) {
        (self.u1.clone(), QuadNum::one(self.d))
    }

    /// Contracting eigenrow `(s1, 1)`.
    pub fn contracting_row(&self) -> (QuadNum, QuadNum) {
        (self.s1.clone(), QuadNum::one(self.d))
    }

    pub fn rational(&self, n: i64) -> QuadNum {
        QuadNum::from_integer(n, self.d)
    }

    pub fn xhat(&self, v: Cusp) -> QuadNum {
        self.linear_form(&self.u1, v)
    }

    pub fn yhat(&self, v: Cusp) -> QuadNum {
        self.linear_form(&self.s1, v)
    }

    fn linear_form(&self, row: &QuadNum, v: Cusp) -> QuadNum {
        let x = QuadNum::from_integer(v.x, self.d);
        let y = QuadNum::from_integer(v.y, self.d);
        row.try_mul(&x).unwrap().try_add(&y).unwrap()
    }

    pub fn eigen_coords(&self, v: Cusp) -> (QuadNum, QuadNum) {
        (self.xhat(v), self.yhat(v))
    }

    pub fn point_of(&self, v: Cusp) -> MaterialPoint {
        let (xhat, yhat) = self.eigen_coords(v);
        MaterialPoint { xhat, yhat }
    }

    /// Inverts the eigenbasis: lattice parameters `(p, q)` of the point with
    /// eigen-coordinates `(x, y)`.  `p = (x - y)/(u1 - s1)`, `q = x - u1*p`.
    pub fn standard_coords(&self, x: &QuadNum, y: &QuadNum) -> (QuadNum, QuadNum) {
        let diff = self.u1.try_sub(&self.s1).unwrap();
        let p = x.try_sub(y).unwrap().try_div(&diff).unwrap();
        let q = x.try_sub(&self.u1.try_mul(&p).unwrap()).unwrap();
        (p, q)
    }

    /// Is this eigen-coordinate pair a deleted lattice point?
    pub fn cusp_at(&self, x: &QuadNum, y: &QuadNum) -> Option<Cusp> {
        let (p, q) = self.standard_coords(x, y);
        if p.is_integer() && q.is_integer() {
            let p = p.rational_part().to_integer().to_i64()?;
            let q = q.rational_part().to_integer().to_i64()?;
            Some(Cusp::new(p, q))
        } else {
            None
        }
    }

    /// The unique cusp on the horizontal line `yhat = y`, if any.
    pub fn cusp_on_horizontal(&self, y: &QuadNum) -> Option<Cusp> {
        // yhat(p, q) = s1*p + q; match radical parts to solve for p.
        self.cusp_on_line(&self.s1, y)
    }

    /// The unique cusp on the vertical line `xhat = x`, if any.
    pub fn cusp_on_vertical(&self, x: &QuadNum) -> Option<Cusp> {
        self.cusp_on_line(&self.u1, x)
    }

    fn cusp_on_line(&self, row: &QuadNum, value: &QuadNum) -> Option<Cusp> {
        let rb = row.radical_part();
        debug_assert!(!rb.is_zero());
        let p = value.radical_part() / rb;
        if !p.is_integer() {
            return None;
        }
        let q = value.rational_part() - &p * row.rational_part();
        if !q.is_integer() {
            return None;
        }
        Some(Cusp::new(p.to_integer().to_i64()?, q.to_integer().to_i64()?))
    }

    /// A conservative integer range of lattice parameters covering the box:
    /// the corner inversions are approximated in f64 and padded, which is
    /// sound because candidates are filtered afterwards.  Degenerate floats
    /// fall back to the exact inversion.
    fn lattice_bounds(&self, x: &Interval, y: &Interval) -> (i64, i64, i64, i64) {
        let u1f = self.u1.to_f64();
        let s1f = self.s1.to_f64();
        let det = u1f - s1f;
        let corners_f = [
            (x.lo.to_f64(), y.lo.to_f64()),
            (x.lo.to_f64(), y.hi.to_f64()),
            (x.hi.to_f64(), y.lo.to_f64()),
            (x.hi.to_f64(), y.hi.to_f64()),
        ];
        let mut p_min = f64::INFINITY;
        let mut p_max = f64::NEG_INFINITY;
        let mut q_min = f64::INFINITY;
        let mut q_max = f64::NEG_INFINITY;
        for (cx, cy) in corners_f {
            let p = (cx - cy) / det;
            let q = cx - u1f * p;
            p_min = p_min.min(p);
            p_max = p_max.max(p);
            q_min = q_min.min(q);
            q_max = q_max.max(q);
        }
        let pad_p = 3.0 + 1e-9 * (p_min.abs() + p_max.abs());
        let pad_q = 3.0 + 1e-9 * (q_min.abs() + q_max.abs());
        let bounds = [
            p_min - pad_p,
            p_max + pad_p,
            q_min - pad_q,
            q_max + pad_q,
        ];
        if bounds.iter().all(|v| v.is_finite() && v.abs() < 9e17) {
            return (
                bounds[0].floor() as i64,
                bounds[1].ceil() as i64,
                bounds[2].floor() as i64,
                bounds[3].ceil() as i64,
            );
        }
        // Exact fallback.
        let corners = [
            (&x.lo, &y.lo),
            (&x.lo, &y.hi),
            (&x.hi, &y.lo),
            (&x.hi, &y.hi),
        ];
        let mut p_lo: Option<BigInt> = None;
        let mut p_hi: Option<BigInt> = None;
        let mut q_lo: Option<BigInt> = None;
        let mut q_hi: Option<BigInt> = None;
        for (cx, cy) in corners {
            let (p, q) = self.standard_coords(cx, cy);
            let (pf, pc) = (p.floor(), p.ceil());
            let (qf, qc) = (q.floor(), q.ceil());
            p_lo = Some(p_lo.map_or(pf.clone(), |v: BigInt| v.min(pf)));
            p_hi = Some(p_hi.map_or(pc.clone(), |v: BigInt| v.max(pc)));
            q_lo = Some(q_lo.map_or(qf.clone(), |v: BigInt| v.min(qf)));
            q_hi = Some(q_hi.map_or(qc.clone(), |v: BigInt| v.max(qc)));
        }
        (
            to_i64(&p_lo.unwrap()),
            to_i64(&p_hi.unwrap()),
            to_i64(&q_lo.unwrap()),
            to_i64(&q_hi.unwrap()),
        )
    }

    /// All lattice cusps whose eigen-coordinates lie in the given box.
    ///
    /// Finite because the box is a bounded parallelogram in standard
    /// coordinates.  Results are sorted by lattice coordinates.
    pub fn cusps_in_box(&self, x: &Interval, y: &Interval) -> Vec<Cusp> {
        if x.lo > x.hi || y.lo > y.hi {
            return Vec::new();
        }
        let (p_lo, p_hi, q_lo, q_hi) = self.lattice_bounds(x, y);
        // Floating fast path with a conservative guard band: candidates
        // clearly inside or outside are decided in f64, which is sound since
        // the evaluation error for window-sized coordinates stays orders of
        // magnitude below the band.  Borderline candidates get exact tests.
        const GUARD: f64 = 1e-6;
        let u1f = self.u1.to_f64();
        let s1f = self.s1.to_f64();
        let (xlo_f, xhi_f) = (x.lo.to_f64(), x.hi.to_f64());
        let (ylo_f, yhi_f) = (y.lo.to_f64(), y.hi.to_f64());
        let mut out = Vec::new();
        for p in p_lo..=p_hi {
            for q in q_lo..=q_hi {
                let c = Cusp::new(p, q);
                let (pf, qf) = (p as f64, q as f64);
                let xf = pf * u1f + qf;
                let yf = pf * s1f + qf;
                if xf.is_finite() && yf.is_finite() {
                    if xf < xlo_f - GUARD
                        || xf > xhi_f + GUARD
                        || yf < ylo_f - GUARD
                        || yf > yhi_f + GUARD
                    {
                        continue;
                    }
                    if xf > xlo_f + GUARD
                        && xf < xhi_f - GUARD
                        && yf > ylo_f + GUARD
                        && yf < yhi_f - GUARD
                    {
                        out.push(c);
                        continue;
                    }
                }
                if x.admits(&self.xhat(c)) && y.admits(&self.yhat(c)) {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Tests the tetrahedron-rectangle predicate: the closed box contains
    /// exactly four cusps, one in the interior of each side (corners and the
    /// open interior are cusp-free).  Returns the side cusps on success.
    pub fn is_tet_rect(&self, r: &Rect) -> Option<TetSides> {
        let cusps = self.cusps_in_box(
            &Interval::closed(r.x_lo.clone(), r.x_hi.clone()),
            &Interval::closed(r.y_lo.clone(), r.y_hi.clone()),
        );
        if cusps.len() != 4 {
            return None;
        }
        let mut south = None;
        let mut east = None;
        let mut north = None;
        let mut west = None;
        for c in cusps {
            let (x, y) = self.eigen_coords(c);
            let on_w = x == r.x_lo;
            let on_e = x == r.x_hi;
            let on_s = y == r.y_lo;
            let on_n = y == r.y_hi;
            let x_inside = r.x_lo < x && x < r.x_hi;
            let y_inside = r.y_lo < y && y < r.y_hi;
            let slot = match (on_w, on_e, on_s, on_n) {
                (true, false, false, false) if y_inside => &mut west,
                (false, true, false, false) if y_inside => &mut east,
                (false, false, true, false) if x_inside => &mut south,
                (false, false, false, true) if x_inside => &mut north,
                _ => return None, // interior or corner cusp
            };
            if slot.replace(c).is_some() {
                return None;
            }
        }
        Some(TetSides {
            south: south?,
            east: east?,
            north: north?,
            west: west?,
        })
    }

    /// True when the open box contains no cusp.
    pub fn open_box_empty(&self, r: &Rect) -> bool {
        self.cusps_in_box(
            &Interval::open(r.x_lo.clone(), r.x_hi.clone()),
            &Interval::open(r.y_lo.clone(), r.y_hi.clone()),
        )
        .is_empty()
    }
}

fn to_i64(n: &BigInt) -> i64 {
    n.to_i64().expect("lattice coordinate out of i64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a0_loom() -> LatticeLoom {
        LatticeLoom::new(Monodromy::from_entries(2, 1, 1, 1).unwrap()).unwrap()
    }

    fn phi() -> QuadNum {
        QuadNum::of(1, 2, 1, 2, 5)
    }

    #[test]
    fn word_products() {
        assert_eq!(
            Monodromy::from_word("RL").unwrap().matrix(),
            Mat2([[2, 1], [1, 1]])
        );
        assert_eq!(
            Monodromy::from_word("RLLRLL").unwrap().matrix().trace(),
            14
        );
        assert!(matches!(
            Monodromy::from_word(""),
            Err(LoomError::EmptyWord)
        ));
        assert!(matches!(
            Monodromy::from_word("RXL"),
            Err(LoomError::BadLetter('X'))
        ));
    }

    #[test]
    fn rejects_non_anosov() {
        assert!(matches!(
            Monodromy::from_entries(0, -1, 1, 0),
            Err(LoomError::NotAnosov { trace: 0, det: 1 })
        ));
        assert!(matches!(
            Monodromy::from_entries(1, 1, 0, 1),
            Err(LoomError::NotAnosov { .. })
        ));
        assert!(matches!(
            Monodromy::from_entries(0, 1, 1, 0),
            Err(LoomError::NotAnosov { trace: 0, det: -1 })
        ));
        assert!(matches!(
            Monodromy::from_entries(2, 0, 0, 2),
            Err(LoomError::NotUnimodular(4))
        ));
    }

    #[test]
    fn a0_eigendata() {
        let loom = a0_loom();
        // lambda = (3+sqrt5)/2, w_u = (phi, 1), w_s = (-1/phi, 1).
        assert_eq!(loom.lambda(), &QuadNum::of(3, 2, 1, 2, 5));
        assert_eq!(loom.expanding_row().0, phi());
        assert_eq!(loom.contracting_row().0, QuadNum::of(1, 2, -1, 2, 5));
        // w_u * A = lambda * w_u, checked entrywise.
        let (u1, u2) = loom.expanding_row();
        let m = loom.monodromy().matrix().0;
        let lhs0 = &u1 * &QuadNum::from_integer(m[0][0], 5)
            + &u2 * &QuadNum::from_integer(m[1][0], 5);
        let lhs1 = &u1 * &QuadNum::from_integer(m[0][1], 5)
            + &u2 * &QuadNum::from_integer(m[1][1], 5);
        assert_eq!(lhs0, loom.lambda() * &u1);
        assert_eq!(lhs1, loom.lambda() * &u2);
    }

    #[test]
    fn det_minus_one_gives_phi() {
        let loom = LatticeLoom::new(Monodromy::from_entries(1, 1, 1, 0).unwrap()).unwrap();
        assert_eq!(loom.lambda(), &phi());
        assert_eq!(loom.lambda_conjugate(), &QuadNum::of(1, 2, -1, 2, 5));
    }

    #[test]
    fn eigen_coord_examples() {
        let loom = a0_loom();
        let z = QuadNum::zero(5);
        assert_eq!(loom.eigen_coords(Cusp::new(0, 0)), (z.clone(), z));
        // v = (1, 0) -> (phi, -1/phi)
        assert_eq!(
            loom.eigen_coords(Cusp::new(1, 0)),
            (phi(), QuadNum::of(1, 2, -1, 2, 5))
        );
        // v = (1, 1) -> (phi^2, 1 - 1/phi)
        assert_eq!(
            loom.eigen_coords(Cusp::new(1, 1)),
            (&phi() * &phi(), QuadNum::of(3, 2, -1, 2, 5))
        );
    }

    #[test]
    fn functorial_seed() {
        let loom = a0_loom();
        let a = loom.monodromy().matrix();
        for v in [(1, 0), (0, 1), (3, -2), (-5, 7), (2, 9)] {
            let v = Cusp::new(v.0, v.1);
            let av = a.apply((v.x, v.y));
            let (x, y) = loom.eigen_coords(v);
            let (ax, ay) = loom.eigen_coords(Cusp::new(av.0, av.1));
            assert_eq!(ax, loom.lambda() * &x);
            assert_eq!(ay, loom.lambda_conjugate() * &y);
        }
    }

    #[test]
    fn box_query_matches_brute_force() {
        let loom = a0_loom();
        // Closed [0,1]x[0,1] holds exactly the origin and (0,1).
        let unit = loom.cusps_in_box(
            &Interval::closed(loom.rational(0), loom.rational(1)),
            &Interval::closed(loom.rational(0), loom.rational(1)),
        );
        assert_eq!(unit, vec![Cusp::new(0, 0), Cusp::new(0, 1)]);
        // Closed [0,phi]x[-1/phi,0] holds the origin and (1,0).
        let second = loom.cusps_in_box(
            &Interval::closed(loom.rational(0), phi()),
            &Interval::closed(QuadNum::of(1, 2, -1, 2, 5), loom.rational(0)),
        );
        assert_eq!(second, vec![Cusp::new(0, 0), Cusp::new(1, 0)]);
        // Empty box.
        let none = loom.cusps_in_box(
            &Interval::open(loom.rational(0), loom.rational(0)),
            &Interval::closed(loom.rational(-3), loom.rational(3)),
        );
        assert!(none.is_empty());

        // Random closed boxes against a double loop over a safe range.
        let mut state = 12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 17) as i64 - 8
        };
        for _ in 0..60 {
            let (mut x0, mut x1) = (next(), next());
            let (mut y0, mut y1) = (next(), next());
            if x0 > x1 {
                std::mem::swap(&mut x0, &mut x1);
            }
            if y0 > y1 {
                std::mem::swap(&mut y0, &mut y1);
            }
            let got = loom.cusps_in_box(
                &Interval::closed(loom.rational(x0), loom.rational(x1)),
                &Interval::closed(loom.rational(y0), loom.rational(y1)),
            );
            let mut want = Vec::new();
            for p in -25..=25 {
                for q in -25..=25 {
                    let c = Cusp::new(p, q);
                    let (x, y) = loom.eigen_coords(c);
                    if loom.rational(x0) <= x
                        && x <= loom.rational(x1)
                        && loom.rational(y0) <= y
                        && y <= loom.rational(y1)
                    {
                        want.push(c);
                    }
                }
            }
            want.sort_unstable();
            assert_eq!(got, want, "box [{x0},{x1}]x[{y0},{y1}]");
        }
    }

    #[test]
    fn keane_distinct_coordinates() {
        let loom = a0_loom();
        let window = loom.cusps_in_box(
            &Interval::closed(loom.rational(-6), loom.rational(6)),
            &Interval::closed(loom.rational(-6), loom.rational(6)),
        );
        let mut state = 777u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            (state >> 35) as usize
        };
        for _ in 0..1000 {
            let a = window[next() % window.len()];
            let b = window[next() % window.len()];
            if a == b {
                continue;
            }
            assert_ne!(loom.xhat(a), loom.xhat(b));
            assert_ne!(loom.yhat(a), loom.yhat(b));
        }
    }

    #[test]
    fn tet_rect_example() {
        let loom = a0_loom();
        // (0,1) x (-phi, phi^2)
        let r = Rect::new(
            loom.rational(0),
            loom.rational(1),
            -phi(),
            &phi() * &phi(),
        );
        let sides = loom.is_tet_rect(&r).expect("example tet rect");
        assert_eq!(sides.west, Cusp::new(0, 0));
        assert_eq!(sides.east, Cusp::new(0, 1));
        assert_eq!(sides.south, Cusp::new(1, -1));
        assert_eq!(sides.north, Cusp::new(-1, 2));

        // Unit box fails: side cusps sit at corners.
        let unit = Rect::new(
            loom.rational(0),
            loom.rational(1),
            loom.rational(0),
            loom.rational(1),
        );
        assert!(loom.is_tet_rect(&unit).is_none());

        // A box with the origin in its interior fails.
        let bad = Rect::new(
            loom.rational(-1),
            loom.rational(1),
            loom.rational(-1),
            loom.rational(1),
        );
        assert!(loom.is_tet_rect(&bad).is_none());
    }

    #[test]
    fn cusp_leaf_density_proxy() {
        let loom = a0_loom();
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) % 1000) as i64
        };
        for _ in 0..100 {
            let y0n = next() - 500; // y0 = y0n / 100, interval length 1
            let lo = QuadNum::of(y0n, 100, 0, 1, 5);
            let hi = &lo + &loom.rational(1);
            // Some horizontal cusp leaf crosses every vertical interval of
            // height 1: search a widening strip until a cusp shows up.
            let mut h = 2i64;
            let found = loop {
                let hits = loom.cusps_in_box(
                    &Interval::closed(loom.rational(-h), loom.rational(h)),
                    &Interval::closed(lo.clone(), hi.clone()),
                );
                if !hits.is_empty() {
                    break true;
                }
                h *= 2;
                if h > 64 {
                    break false;
                }
            };
            assert!(found);
        }
    }

    #[test]
    fn cusp_on_leaf_lookup() {
        let loom = a0_loom();
        let c = Cusp::new(3, -2);
        let (x, y) = loom.eigen_coords(c);
        assert_eq!(loom.cusp_on_vertical(&x), Some(c));
        assert_eq!(loom.cusp_on_horizontal(&y), Some(c));
        assert_eq!(loom.cusp_on_vertical(&QuadNum::of(1, 3, 0, 1, 5)), None);
        assert_eq!(loom.cusp_at(&x, &y), Some(c));
        assert_eq!(loom.cusp_at(&x, &loom.rational(7)), None);
    }
}
