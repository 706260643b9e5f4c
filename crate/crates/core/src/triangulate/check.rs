//! Structure checks: taut, veering, and locally veering.

use super::{
    complement_pair, pair_index, perm_is_odd, Angle, EdgeModel, IdealTriangulation, UnionFind,
    EDGE_PAIRS,
};
use crate::skeletal::Colour;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Some edge classes were incomplete, so the property could not be
    /// decided on them; no violations were found elsewhere.
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub violations: Vec<String>,
    pub indeterminate: Vec<String>,
}

impl CheckReport {
    pub fn status(&self) -> CheckStatus {
        if !self.violations.is_empty() {
            CheckStatus::Fail
        } else if !self.indeterminate.is_empty() {
            CheckStatus::Indeterminate
        } else {
            CheckStatus::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == CheckStatus::Pass
    }
}

/// The anticlockwise cyclic order of the other three vertices, viewed from
/// outside at vertex `i`, for the reference orientation in which the slot
/// order (0,1,2,3) is positive: the unique cyclic order `(a,b,c)` making
/// `(i,a,b,c)` an even permutation.
fn acw_at_vertex(i: u8) -> [u8; 3] {
    let mut others: Vec<u8> = (0..4).filter(|&s| s != i).collect();
    let perm = [i, others[0], others[1], others[2]];
    if perm_is_odd(&perm) {
        others.swap(1, 2);
    }
    [others[0], others[1], others[2]]
}

/// The two colours forced at vertex `i` by the veering rule, given the
/// tetrahedron's angles and an orientation sign: walking anticlockwise from
/// the pi edge, the next edge is blue and the one after red.  Reversed
/// orientation swaps the walk direction, hence the colours.
fn vertex_forced_colours(
    angles: &[Angle; 6],
    i: u8,
    sign: i32,
) -> Option<[(usize, Colour); 2]> {
    let mut order = acw_at_vertex(i);
    if sign < 0 {
        order.reverse();
    }
    let pi_pos = order
        .iter()
        .position(|&x| angles[pair_index(i, x)] == Angle::Pi)?;
    let y = order[(pi_pos + 1) % 3];
    let z = order[(pi_pos + 2) % 3];
    Some([
        (pair_index(i, y), Colour::Blue),
        (pair_index(i, z), Colour::Red),
    ])
}

/// Taut check: per-vertex dihedral sums of pi and per-edge-class sums of
/// two pi.  Classes cut off by unglued faces are reported indeterminate.
pub fn check_taut(tri: &IdealTriangulation) -> CheckReport {
    let mut violations = Vec::new();
    let mut indeterminate = Vec::new();
    for v in tri.manifold_violations() {
        violations.push(v);
    }
    for (ti, t) in tri.tets.iter().enumerate() {
        for i in 0..4u8 {
            let pi_count = (0..4u8)
                .filter(|&x| x != i && t.angle(i, x) == Angle::Pi)
                .count();
            if pi_count != 1 {
                violations.push(format!(
                    "tet {ti} vertex {i}: dihedral angles sum to {pi_count} pi, want pi"
                ));
            }
        }
    }
    for class in tri.edge_classes() {
        let (t, a, b) = class.models[0];
        if !class.complete {
            indeterminate.push(format!(
                "edge ({t},{a},{b}): class incomplete, degree so far {}",
                class.degree()
            ));
            continue;
        }
        let sum = class.angle_sum_pi_units(tri);
        if sum != 2 {
            violations.push(format!(
                "edge ({t},{a},{b}): class angle sum {sum} pi, want 2 pi"
            ));
        }
    }
    CheckReport {
        name: "taut",
        violations,
        indeterminate,
    }
}

/// Veering check: a global orientation must exist, every edge class must
/// carry a single colour, and the per-vertex rule must hold in every
/// tetrahedron with respect to that orientation.
pub fn check_veering(tri: &IdealTriangulation) -> CheckReport {
    let taut = check_taut(tri);
    let mut violations = taut.violations;
    let indeterminate = taut.indeterminate;

    match orientation_signs(tri) {
        None => violations.push("triangulation is not orientable".to_string()),
        Some(signs) => {
            for (ti, t) in tri.tets.iter().enumerate() {
                for i in 0..4u8 {
                    let Some(forced) = vertex_forced_colours(&t.angles, i, signs[ti]) else {
                        continue; // already reported by the taut check
                    };
                    for (pair, want) in forced {
                        if t.colours[pair] != want {
                            let (a, b) = EDGE_PAIRS[pair];
                            violations.push(format!(
                                "tet {ti} vertex {i}: edge ({a},{b}) is {}, want {want}",
                                t.colours[pair]
                            ));
                        }
                    }
                }
            }
        }
    }

    for class in tri.edge_classes() {
        if class.colour(tri).is_none() {
            let (t, a, b) = class.models[0];
            violations.push(format!("edge ({t},{a},{b}): models disagree on colour"));
        }
    }

    CheckReport {
        name: "veering",
        violations,
        indeterminate,
    }
}

/// Orientation signs making all gluings orientation reversing (odd slot
/// permutations between positively ordered tetrahedra), or `None`.
pub fn orientation_signs(tri: &IdealTriangulation) -> Option<Vec<i32>> {
    let n = tri.tets.len();
    let mut signs = vec![0i32; n];
    for start in 0..n {
        if signs[start] != 0 {
            continue;
        }
        signs[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in tri.tets[i].gluings.iter().flatten() {
                let s = if perm_is_odd(&g.perm) {
                    signs[i]
                } else {
                    -signs[i]
                };
                if signs[g.other] == 0 {
                    signs[g.other] = s;
                    stack.push(g.other);
                } else if signs[g.other] != s {
                    return None;
                }
            }
        }
    }
    Some(signs)
}

/// Locally veering: for every complete edge class, the model edge
/// neighbourhood admits a veering colouring.
///
/// The neighbourhood is the cyclic chain of tetrahedron copies around the
/// edge.  Each copy gets an orientation sign along the walk; the vertex rule
/// then forces colours of equatorial edges, and the class is veering exactly
/// when the forced assignments do not clash on identified edges.
pub fn check_locally_veering(tri: &IdealTriangulation) -> CheckReport {
    let taut = check_taut(tri);
    let mut violations = taut.violations;
    let mut indeterminate = taut.indeterminate;

    for class in tri.edge_classes() {
        let (t0, a0, b0) = class.models[0];
        if !class.complete {
            indeterminate.push(format!(
                "edge ({t0},{a0},{b0}): neighbourhood incomplete"
            ));
            continue;
        }
        if let Err(msg) = neighbourhood_veering(tri, &class.models) {
            violations.push(format!("edge ({t0},{a0},{b0}): {msg}"));
        }
    }

    CheckReport {
        name: "locally-veering",
        violations,
        indeterminate,
    }
}

/// Attempts a veering colouring of the model edge neighbourhood given by the
/// cyclic list of edge models.
fn neighbourhood_veering(tri: &IdealTriangulation, models: &[EdgeModel]) -> Result<(), String> {
    let m = models.len();
    // Reconstruct entry/exit faces and gluings along the cycle.
    let mut exits = Vec::with_capacity(m);
    {
        let (t, a, b) = models[0];
        let (c, _d) = complement_pair(a, b);
        let mut entry = c;
        for k in 0..m {
            let (t, a, b) = models[k];
            let (c0, d0) = complement_pair(a, b);
            let exit = if c0 == entry { d0 } else { c0 };
            let gl = tri.tets[t].gluings[exit as usize]
                .ok_or_else(|| "unglued face inside complete class".to_string())?;
            let next = models[(k + 1) % m];
            if gl.other != next.0
                || gl.perm[a as usize] != next.1
                || gl.perm[b as usize] != next.2
            {
                return Err("walk reconstruction mismatch".to_string());
            }
            entry = gl.perm[exit as usize];
            exits.push((exit, gl));
        }
        let _ = t;
    }

    // Orientation signs around the cycle.
    let mut signs = vec![1i32; m];
    for k in 0..m - 1 {
        let odd = perm_is_odd(&exits[k].1.perm);
        signs[k + 1] = if odd { signs[k] } else { -signs[k] };
    }
    let closing_odd = perm_is_odd(&exits[m - 1].1.perm);
    let closed_sign = if closing_odd {
        signs[m - 1]
    } else {
        -signs[m - 1]
    };
    if closed_sign != signs[0] {
        return Err("neighbourhood is not orientable".to_string());
    }

    // Identify edges of adjacent copies through the shared face.
    let mut uf = UnionFind::new(6 * m);
    for k in 0..m {
        let (exit, gl) = exits[k];
        let next = (k + 1) % m;
        for (pi, &(u, v)) in EDGE_PAIRS.iter().enumerate() {
            if u == exit || v == exit {
                continue;
            }
            let iu = gl.perm[u as usize];
            let iv = gl.perm[v as usize];
            uf.union(6 * k + pi, 6 * next + pair_index(iu, iv));
        }
    }

    // Propagate forced colours.
    let mut assigned: Vec<Option<Colour>> = vec![None; 6 * m];
    for k in 0..m {
        let (t, _, _) = models[k];
        let angles = tri.tets[t].angles;
        for i in 0..4u8 {
            let Some(forced) = vertex_forced_colours(&angles, i, signs[k]) else {
                return Err(format!("copy {k} is not taut"));
            };
            for (pair, want) in forced {
                let root = uf.find(6 * k + pair);
                match assigned[root] {
                    None => assigned[root] = Some(want),
                    Some(have) if have == want => {}
                    Some(have) => {
                        return Err(format!(
                            "forced colours clash ({have} vs {want}) on copy {k}"
                        ))
                    }
                }
            }
        }
    }
    Ok(())
}
