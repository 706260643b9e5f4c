//! Independent oracles for the acceptance suite.  These deliberately avoid
//! the library's own walking/enumeration code paths.

use std::collections::BTreeSet;

use loomweaver::exactnum::QuadNum;
use loomweaver::geodesy::PolygonalPath;
use loomweaver::loom::{Cusp, LatticeLoom};
use loomweaver::triangulate::{pair_index, IdealTriangulation, EDGE_PAIRS};

use rand::Rng;

/// Edge-class degrees computed by a plain union-find over the gluing table,
/// independent of the edge-walk implementation.
pub fn edge_degrees_from_gluing_table(tri: &IdealTriangulation) -> Vec<usize> {
    let n = tri.tets.len();
    let mut parent: Vec<usize> = (0..6 * n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (t, tet) in tri.tets.iter().enumerate() {
        for f in 0..4usize {
            let Some(g) = tet.gluings[f] else { continue };
            for &(a, b) in EDGE_PAIRS.iter() {
                if a as usize == f || b as usize == f {
                    continue;
                }
                let here = 6 * t + pair_index(a, b);
                let there =
                    6 * g.other + pair_index(g.perm[a as usize], g.perm[b as usize]);
                let (ra, rb) = (find(&mut parent, here), find(&mut parent, there));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut counts = std::collections::BTreeMap::new();
    for x in 0..6 * n {
        let r = find(&mut parent, x);
        *counts.entry(r).or_insert(0usize) += 1;
    }
    let mut degrees: Vec<usize> = counts.into_values().collect();
    degrees.sort_unstable();
    degrees
}

type V = (i64, i64);

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn canon(v: V) -> V {
    let g = gcd(v.0, v.1).max(1);
    let mut v = (v.0 / g, v.1 / g);
    if v.0 < 0 || (v.0 == 0 && v.1 < 0) {
        v = (-v.0, -v.1);
    }
    v
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn slope_state(m: [[i64; 2]; 2]) -> BTreeSet<V> {
    let apply = |v: V| (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1);
    [(1, 0), (0, 1), (1, 1)]
        .into_iter()
        .map(|v| canon(apply(v)))
        .collect()
}

/// Builds the layered triangulation of a monodromy word directly: the
/// once-punctured-torus triangulations along the word are the slope triples
/// of the prefix products, and consecutive triples sharing exactly two
/// slopes certifies one diagonal flip, hence one tetrahedron, per letter.
pub fn layered_flip_count(word: &str) -> usize {
    let mut m = [[1i64, 0], [0, 1]];
    let mut prev = slope_state(m);
    let mut count = 0usize;
    for ch in word.chars() {
        let f = match ch {
            'R' => [[1, 1], [0, 1]],
            'L' => [[1, 0], [1, 1]],
            other => panic!("bad letter {other:?}"),
        };
        m = mat_mul(m, f);
        let next = slope_state(m);
        let shared = prev.intersection(&next).count();
        assert_eq!(shared, 2, "letter {ch} is a single diagonal flip");
        count += 1;
        prev = next;
    }
    count
}

/// A random rectilinear path on the third-integer grid in eigen
/// coordinates.  Grid lines never pass through cusps, so segments are
/// automatically cusp-free; embeddedness is up to the caller to test.
pub fn random_path(loom: &LatticeLoom, rng: &mut impl Rng) -> Option<PolygonalPath> {
    let d = loom.field();
    let third = |k: i64| QuadNum::of(k, 3, 0, 1, d);
    let mut x = 3 * rng.gen_range(-4i64..4) + 1;
    let mut y = 3 * rng.gen_range(-4i64..4) + 1;
    let mut coords = vec![(third(x), third(y))];
    let mut horizontal = rng.gen_bool(0.5);
    let moves = rng.gen_range(3..9usize);
    for _ in 0..moves {
        let step = rng.gen_range(1..=6i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if horizontal {
            x += step;
        } else {
            y += step;
        }
        coords.push((third(x), third(y)));
        horizontal = !horizontal;
    }
    PolygonalPath::from_coords(loom, coords).ok()
}

/// The rightmost geodesic rebuilt from a global staircase scan, independent
/// of the incremental walk in the library: collect every cusp in the open
/// spanning box, keep the frontier facing the right-hand material corner
/// (no other cusp strictly beyond them in that direction), sort it along
/// the heading, and hug the corners through it.
pub fn greedy_rightmost(loom: &LatticeLoom, a: Cusp, b: Cusp) -> PolygonalPath {
    use loomweaver::exactnum::QuadNum as Q;
    use loomweaver::loom::Interval;
    let (ax, ay) = loom.eigen_coords(a);
    let (bx, by) = loom.eigen_coords(b);
    if ax == bx || ay == by {
        return PolygonalPath::from_coords(loom, vec![(ax, ay), (bx, by)]).unwrap();
    }
    let dx = if bx > ax { 1i32 } else { -1 };
    let dy = if by > ay { 1i32 } else { -1 };
    let side = (dy, -dx); // right of the heading
    let (xlo, xhi) = if ax < bx { (ax.clone(), bx.clone()) } else { (bx.clone(), ax.clone()) };
    let (ylo, yhi) = if ay < by { (ay.clone(), by.clone()) } else { (by.clone(), ay.clone()) };
    let inner: Vec<(Q, Q)> = loom
        .cusps_in_box(&Interval::open(xlo, xhi), &Interval::open(ylo, yhi))
        .into_iter()
        .map(|c| {
            let (x, y) = loom.eigen_coords(c);
            (x, y)
        })
        .collect();
    let beyond = |p: &(Q, Q), c: &(Q, Q)| -> bool {
        let sx = if p.0 > c.0 { 1 } else if p.0 < c.0 { -1 } else { 0 };
        let sy = if p.1 > c.1 { 1 } else if p.1 < c.1 { -1 } else { 0 };
        sx == side.0 && sy == side.1
    };
    let mut chain: Vec<(Q, Q)> = inner
        .iter()
        .filter(|c| !inner.iter().any(|o| beyond(o, c)))
        .cloned()
        .collect();
    chain.sort_by(|p, q| {
        let kp = if dx > 0 { p.0.clone() } else { -&p.0 };
        let kq = if dx > 0 { q.0.clone() } else { -&q.0 };
        kp.cmp(&kq)
    });
    let x_first = dx == dy; // rightmost moves along x first in NE/SW headings
    let mut coords = vec![(ax.clone(), ay.clone())];
    let mut cur = (ax, ay);
    for c in chain.into_iter().chain([(bx, by)]) {
        let corner = if x_first {
            (c.0.clone(), cur.1.clone())
        } else {
            (cur.0.clone(), c.1.clone())
        };
        if corner != cur && corner != c {
            coords.push(corner);
        }
        coords.push(c.clone());
        cur = c;
    }
    PolygonalPath::from_coords(loom, coords).unwrap()
}
