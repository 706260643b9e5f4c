//! Static SVG rendering of loom windows.
//!
//! Coordinates are exact 30-digit decimal truncations of the eigen
//! coordinates, scaled into a fixed viewport; they are display-only and
//! never feed back into predicates.

use std::fmt::Write;

use loomweaver::exactnum::QuadNum;
use loomweaver::loom::{Interval, LatticeLoom, Rect};
use loomweaver::skeletal::{tet_above, EdgeRect};

const VIEW: i64 = 1000;
const DIGITS: u32 = 30;

struct Projector {
    half: i64,
    d: u64,
}

impl Projector {
    /// Maps eigen x in [-half, half] to [0, VIEW]; eigen y likewise but
    /// flipped, since SVG y grows downward.
    fn x(&self, v: &QuadNum) -> String {
        let shifted = v + &QuadNum::from_integer(self.half, self.d);
        let scaled = shifted * QuadNum::of(VIEW, 2 * self.half, 0, 1, self.d);
        scaled.to_decimal(DIGITS)
    }

    fn y(&self, v: &QuadNum) -> String {
        let shifted = &QuadNum::from_integer(self.half, self.d) - v;
        let scaled = shifted * QuadNum::of(VIEW, 2 * self.half, 0, 1, self.d);
        scaled.to_decimal(DIGITS)
    }
}

/// The window with every cusp marked, cusp leaves as hairlines, and the
/// tetrahedron rectangle above the given edge highlighted with its four
/// side cusps.
pub fn draw_window(loom: &LatticeLoom, half: i64, seed: &EdgeRect) -> String {
    let p = Projector {
        half,
        d: loom.field(),
    };
    let window = Rect::window(half, loom.field());
    let cusps = loom.cusps_in_box(
        &Interval::closed(window.x_lo.clone(), window.x_hi.clone()),
        &Interval::closed(window.y_lo.clone(), window.y_hi.clone()),
    );
    let tet = tet_above(loom, seed);
    let tet_rect = tet.rect(loom);
    let side_cusps = tet.cusps();

    let mut out = String::new();
    writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{v}" height="{v}" viewBox="0 0 {v} {v}">"#,
        v = VIEW
    )
    .unwrap();
    writeln!(out, r#"  <rect width="{v}" height="{v}" fill="white"/>"#, v = VIEW).unwrap();

    // Cusp leaves through each cusp, clipped to the window.
    for c in &cusps {
        let (x, y) = loom.eigen_coords(*c);
        writeln!(
            out,
            r##"  <line class="leaf" x1="0" y1="{0}" x2="{v}" y2="{0}" stroke="#b8e0b8" stroke-width="0.5"/>"##,
            p.y(&y),
            v = VIEW
        )
        .unwrap();
        writeln!(
            out,
            r##"  <line class="leaf" x1="{0}" y1="0" x2="{0}" y2="{v}" stroke="#d8c8ec" stroke-width="0.5"/>"##,
            p.x(&x),
            v = VIEW
        )
        .unwrap();
    }

    // Highlighted tetrahedron rectangle; interior is cusp-free.
    writeln!(
        out,
        r##"  <rect class="tet-rect" x="{}" y="{}" width="{}" height="{}" fill="#fff3c0" fill-opacity="0.7" stroke="#c99700" stroke-width="1.5"/>"##,
        p.x(&tet_rect.x_lo),
        p.y(&tet_rect.y_hi),
        span(&p, &tet_rect.x_lo, &tet_rect.x_hi),
        span(&p, &tet_rect.y_lo, &tet_rect.y_hi),
    )
    .unwrap();

    for c in &cusps {
        let (x, y) = loom.eigen_coords(*c);
        writeln!(
            out,
            r#"  <circle class="cusp" cx="{}" cy="{}" r="3" fill="black"/>"#,
            p.x(&x),
            p.y(&y)
        )
        .unwrap();
    }
    for c in side_cusps {
        let (x, y) = loom.eigen_coords(c);
        writeln!(
            out,
            r##"  <circle class="side-cusp" cx="{}" cy="{}" r="6" fill="none" stroke="#c92020" stroke-width="2"/>"##,
            p.x(&x),
            p.y(&y)
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

fn span(p: &Projector, lo: &QuadNum, hi: &QuadNum) -> String {
    let width = hi - lo;
    let scaled = width * QuadNum::of(VIEW, 2 * p.half, 0, 1, p.d);
    scaled.to_decimal(DIGITS)
}
