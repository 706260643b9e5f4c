//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p loomweaver --test acceptance -- --nocapture` to
//! see the per-criterion lines and timings.

mod oracle;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use loomweaver::geodesy::{
    hull, hull_convexity_check, rightmost, staircase_cusps, PathNode, PolygonalPath, Quadrant,
};
use loomweaver::layering::{certified_exhaustion, certify_ball, layer, FlipPolicy};
use loomweaver::loom::{Cusp, Interval, LatticeLoom, Monodromy, Rect};
use loomweaver::skeletal::{
    enumerate_edges, enumerate_face_connected, tet_above, tets_containing, EdgeRect, TetRect,
};
use loomweaver::triangulate::{
    automorphisms, check_locally_veering, check_taut, check_veering, double_cover, quotient,
    taut_isomorphic, SymmetryGroup,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion(number: usize, name: &str, limit: Duration, body: impl FnOnce() -> String) {
    let start = Instant::now();
    let detail = body();
    let elapsed = start.elapsed();
    println!(
        "criterion {number} ({name}): PASS [{detail}] in {:.2}s (limit {:.0}s)",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(
        elapsed <= limit,
        "criterion {number} exceeded its time limit: {elapsed:?} > {limit:?}"
    );
}

fn a0_loom() -> LatticeLoom {
    LatticeLoom::new(Monodromy::from_word("RL").unwrap()).unwrap()
}

fn build_quotient(word: &str) -> loomweaver::triangulate::QuotientTriangulation {
    let loom = LatticeLoom::new(Monodromy::from_word(word).unwrap()).unwrap();
    let group = SymmetryGroup::mapping_torus(loom.monodromy());
    quotient(&loom, &group, 4).expect("quotient stabilises")
}

#[test]
fn criterion_1_figure_eight_bundle() {
    criterion(1, "figure-eight bundle", Duration::from_secs(5), || {
        let q = build_quotient("RL");
        assert_eq!(q.tri.tets.len(), 2, "figure-eight has two tetrahedra");
        assert!(check_taut(&q.tri).passed(), "taut check");
        assert!(check_veering(&q.tri).passed(), "veering check");
        assert!(check_locally_veering(&q.tri).passed(), "locally veering");
        // Edge degrees, twice: once via the edge walk, once via the
        // independent gluing-table closure.
        let mut degrees: Vec<usize> = q.tri.edge_classes().iter().map(|c| c.degree()).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![6, 6]);
        assert_eq!(oracle::edge_degrees_from_gluing_table(&q.tri), vec![6, 6]);
        "2 tets, taut+veering+locally veering, degrees 6/6".to_string()
    });
}

#[test]
fn criterion_2_automorphism_group() {
    criterion(2, "automorphisms", Duration::from_secs(5), || {
        let q = build_quotient("RL");
        let autos = automorphisms(&q.tri, false);
        assert_eq!(autos.len(), 8, "taut automorphism group of the square");
        "order 8".to_string()
    });
}

#[test]
fn criterion_3_gieseking() {
    criterion(3, "Gieseking", Duration::from_secs(5), || {
        let loom = LatticeLoom::new(Monodromy::from_entries(1, 1, 1, 0).unwrap()).unwrap();
        let group = SymmetryGroup::mapping_torus(loom.monodromy());
        let q = quotient(&loom, &group, 4).expect("quotient stabilises");
        assert_eq!(q.tri.tets.len(), 1, "Gieseking has one tetrahedron");
        assert!(check_taut(&q.tri).passed());
        assert!(check_locally_veering(&q.tri).passed());
        let cover = double_cover(&q.tri);
        let fig8 = build_quotient("RL");
        assert!(
            taut_isomorphic(&cover, &fig8.tri, false).is_some(),
            "double cover is the figure-eight triangulation"
        );
        "1 tet, locally veering, double cover = figure-eight".to_string()
    });
}

#[test]
fn criterion_4_word_length_law() {
    // All both-letter words of length 2..=4, plus fixed longer samples.
    let mut words: Vec<String> = Vec::new();
    for len in 2..=4usize {
        for bits in 0..(1u32 << len) {
            let w: String = (0..len)
                .map(|i| if bits >> i & 1 == 1 { 'R' } else { 'L' })
                .collect();
            if w.contains('R') && w.contains('L') {
                words.push(w);
            }
        }
    }
    words.extend(
        ["RLLRL", "RRLLL", "RLRLR", "RLLRLL", "RRRLLL", "RLRLRL", "RRLRLL"]
            .iter()
            .map(|s| s.to_string()),
    );
    assert!(words.len() >= 20);
    for word in &words {
        criterion(4, &format!("word-length law {word}"), Duration::from_secs(30), || {
            let expected = oracle::layered_flip_count(word);
            assert_eq!(expected, word.len(), "oracle count is the word length");
            let q = build_quotient(word);
            assert_eq!(
                q.tri.tets.len(),
                expected,
                "quotient tetrahedron count for {word}"
            );
            assert!(check_taut(&q.tri).passed());
            assert!(check_locally_veering(&q.tri).passed());
            format!("{} tets", q.tri.tets.len())
        });
    }
}

#[test]
fn criterion_5_skeletal_property_suite() {
    criterion(5, "skeletal properties", Duration::from_secs(120), || {
        let loom = a0_loom();
        let window = Rect::window(8, loom.field());
        let edges = enumerate_edges(&loom, &window);
        assert!(edges.len() > 100, "window should hold a real sample");
        // Edge cusps distinct and boxes empty.
        for e in &edges {
            assert_ne!(e.west, e.east);
            let r = e.rect(&loom);
            let inside = loom.cusps_in_box(
                &Interval::closed(r.x_lo.clone(), r.x_hi.clone()),
                &Interval::closed(r.y_lo.clone(), r.y_hi.clone()),
            );
            assert_eq!(inside.len(), 2, "edge box of {e:?} is empty");
        }
        let tets: BTreeSet<TetRect> = edges.iter().map(|e| tet_above(&loom, e)).collect();
        let mut faces_checked = 0usize;
        for t in &tets {
            let r = t.rect(&loom);
            // 4 faces, 6 edges, exactly 2 spanning edges.
            let faces = t.faces(&loom);
            assert_eq!(faces.len(), 4);
            let tet_edges = t.edges(&loom);
            assert_eq!(tet_edges.len(), 6);
            let spanning = tet_edges
                .iter()
                .filter(|e| {
                    let er = e.rect(&loom);
                    (er.x_lo == r.x_lo && er.x_hi == r.x_hi)
                        || (er.y_lo == r.y_lo && er.y_hi == r.y_hi)
                })
                .count();
            assert_eq!(spanning, 2);
            // Every face lies in exactly two tetrahedron rectangles.
            for f in &faces {
                let containing = tets_containing(&loom, &f.rect);
                assert_eq!(containing.len(), 2, "face {:?}", f.cusps);
                assert!(containing.contains(t));
                faces_checked += 1;
            }
        }
        // tets_containing is finite and matches a windowed brute force on a
        // sample of small boxes near the origin.
        let big_window = Rect::window(16, loom.field());
        let big: BTreeSet<TetRect> = enumerate_edges(&loom, &big_window)
            .iter()
            .map(|e| tet_above(&loom, e))
            .collect();
        let sample: Vec<&TetRect> = tets
            .iter()
            .filter(|t| Rect::window(3, loom.field()).contains_rect(&t.rect(&loom)))
            .take(12)
            .collect();
        assert!(!sample.is_empty());
        for t in sample {
            for e in t.edges(&loom) {
                let er = e.rect(&loom);
                let got = tets_containing(&loom, &er);
                let want: Vec<TetRect> = big
                    .iter()
                    .filter(|c| c.rect(&loom).contains_rect_closure(&er))
                    .copied()
                    .collect();
                assert_eq!(got, want, "containment of edge {e:?}");
            }
        }
        format!("{} tets, {faces_checked} faces checked", tets.len())
    });
}

#[test]
fn criterion_6_geodesy_suite() {
    criterion(6, "geodesy", Duration::from_secs(120), || {
        let loom = a0_loom();
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEAD);
        // 200 random embedded paths: straighten, then verify.
        let mut done = 0usize;
        let mut attempts = 0usize;
        while done < 200 {
            attempts += 1;
            assert!(attempts < 4000, "path generation stalled");
            let Some(path) = oracle::random_path(&loom, &mut rng) else {
                continue;
            };
            if !path.is_embedded() {
                continue;
            }
            let s = loomweaver::geodesy::straighten(&loom, &path).expect("straighten");
            assert!(
                loomweaver::geodesy::find_uturn(&loom, &s).is_none(),
                "straightened path has no U-turn"
            );
            assert!(s.is_leaf_connected(), "straightened path is leaf connected");
            let (a0, b0) = path.endpoints();
            let (a1, b1) = s.endpoints();
            assert_eq!(a0.coords(&loom), a1.coords(&loom));
            assert_eq!(b0.coords(&loom), b1.coords(&loom));
            let again = loomweaver::geodesy::straighten(&loom, &s).expect("idempotent");
            assert_eq!(again, s, "straighten is idempotent");
            done += 1;
        }
        // Rightmost geodesics match the greedy staircase oracle on 50 pairs.
        let window = Rect::window(6, loom.field());
        let cusps = loom.cusps_in_box(
            &Interval::closed(window.x_lo.clone(), window.x_hi.clone()),
            &Interval::closed(window.y_lo.clone(), window.y_hi.clone()),
        );
        let mut pairs = 0usize;
        while pairs < 50 {
            let a = cusps[rng.gen_range(0..cusps.len())];
            let b = cusps[rng.gen_range(0..cusps.len())];
            if a == b {
                continue;
            }
            let got = rightmost(&loom, &PathNode::Cusp(a), &PathNode::Cusp(b)).unwrap();
            let want = oracle::greedy_rightmost(&loom, a, b);
            assert_eq!(got.coords(), want.coords(), "rightmost geodesic {a:?} -> {b:?}");
            assert!(got.is_leaf_connected());
            pairs += 1;
        }
        // Hull convexity on 20 random finite cusp sets.
        for i in 0..20 {
            let size = rng.gen_range(2..=7);
            let mut set = BTreeSet::new();
            while set.len() < size {
                set.insert(cusps[rng.gen_range(0..cusps.len())]);
            }
            let set: Vec<Cusp> = set.into_iter().collect();
            let report = hull_convexity_check(&loom, &set, 25, 1000 + i);
            assert!(report.passed(), "convexity of {set:?}: {:?}", report.violations);
        }
        "200 paths, 50 rightmost pairs, 20 hulls".to_string()
    });
}

#[test]
fn criterion_7_astroid_suite() {
    criterion(7, "astroid", Duration::from_secs(120), || {
        let loom = a0_loom();
        let bases = [
            PathNode::Cusp(Cusp::new(0, 0)),
            PathNode::Cusp(Cusp::new(1, 0)),
            PathNode::Cusp(Cusp::new(0, 1)),
            PathNode::Cusp(Cusp::new(-1, 2)),
            PathNode::Cusp(Cusp::new(2, -1)),
            PathNode::material(
                loomweaver::exactnum::QuadNum::of(1, 3, 0, 1, 5),
                loomweaver::exactnum::QuadNum::of(1, 3, 0, 1, 5),
            ),
            PathNode::material(
                loomweaver::exactnum::QuadNum::of(-2, 3, 0, 1, 5),
                loomweaver::exactnum::QuadNum::of(1, 2, 0, 1, 5),
            ),
            PathNode::Cusp(Cusp::new(1, 1)),
            PathNode::Cusp(Cusp::new(-1, 0)),
            PathNode::Cusp(Cusp::new(2, 0)),
        ];
        let quadrants = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE];
        for (i, base) in bases.iter().enumerate() {
            let quadrant = quadrants[i % 4];
            let w1 = staircase_window(&loom, base, quadrant, 6);
            let w2 = staircase_window(&loom, base, quadrant, 12);
            let w4 = staircase_window(&loom, base, quadrant, 24);
            let (sx, sy) = quadrant.signs();
            for s in [&w1, &w2, &w4] {
                // Along the rays the projections are strictly monotone in
                // opposite directions; consecutive exteriors bound edges.
                for w in s.exterior.windows(2) {
                    let dm = w[1].proj_m.cmp(&w[0].proj_m);
                    let dl = w[1].proj_ell.cmp(&w[0].proj_ell);
                    assert_ne!(dm, std::cmp::Ordering::Equal);
                    assert_ne!(dl, std::cmp::Ordering::Equal);
                    // Distance along m grows, distance along ell shrinks.
                    let away_m = if sx > 0 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
                    let toward_ell = if sy > 0 { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater };
                    assert_eq!(dm, away_m, "m projections move away from the base");
                    assert_eq!(dl, toward_ell, "ell projections move towards the base");
                    assert!(
                        EdgeRect::new(&loom, w[0].cusp, w[1].cusp).is_some(),
                        "consecutive exterior cusps {:?} {:?} span an edge",
                        w[0].cusp,
                        w[1].cusp
                    );
                }
            }
            // Ends accumulate while a fixed interior band stays put: the
            // count over proj distances in [1, 3] is equal for the larger
            // two windows, and the overall count grows with the window.
            let base_coords = base.coords(&loom);
            let band = |s: &loomweaver::geodesy::Staircase| {
                s.exterior
                    .iter()
                    .filter(|e| {
                        let dist = if sx > 0 {
                            &e.proj_m - &base_coords.0
                        } else {
                            &base_coords.0 - &e.proj_m
                        };
                        dist >= loom.rational(1) && dist <= loom.rational(3)
                    })
                    .count()
            };
            assert_eq!(band(&w2), band(&w4), "interior band stable (base {i})");
            assert!(
                w4.exterior.len() > w1.exterior.len(),
                "window growth reveals cusps near the staircase ends (base {i})"
            );
        }
        "10 staircases over 3 window sizes".to_string()
    });
}

fn staircase_window(
    loom: &LatticeLoom,
    base: &PathNode,
    quadrant: Quadrant,
    half: i64,
) -> loomweaver::geodesy::Staircase {
    staircase_cusps(loom, base, quadrant, &Rect::window(half, loom.field()))
}

#[test]
fn criterion_8_layering_suite() {
    criterion(8, "layering", Duration::from_secs(60), || {
        let loom = a0_loom();
        let seed = EdgeRect::new(&loom, Cusp::new(0, 0), Cusp::new(0, 1)).unwrap();
        let tets = certified_exhaustion(&loom, &seed, 10).expect("exhaustion");
        assert_eq!(tets.len(), 10);
        // The enumeration is face connected: every tet shares a face with an
        // earlier one.
        for (i, t) in tets.iter().enumerate().skip(1) {
            let connected = tets[..i].iter().any(|s| {
                s.faces(&loom)
                    .iter()
                    .any(|f| t.faces(&loom).iter().any(|g| g.cusps == f.cusps))
            });
            assert!(connected, "tet {i} not face-adjacent to any earlier tet");
        }
        let mut total_flips = 0usize;
        let mut last_content = 0usize;
        for n in 1..=10usize {
            let cusps: BTreeSet<Cusp> = tets[..n].iter().flat_map(|t| t.cusps()).collect();
            let cusps: Vec<Cusp> = cusps.into_iter().collect();
            let h = hull(&loom, &cusps);
            let run = layer(&loom, &h, FlipPolicy::LexMin).expect("layering succeeds");
            // Content contains the input tetrahedra and grows the hull.
            for t in &tets[..n] {
                assert!(run.content.contains(t), "content contains input tets");
            }
            assert!(run.content.len() >= last_content);
            last_content = run.content.len();
            assert_eq!(
                run.flips.steps.len(),
                run.content.len(),
                "every content tetrahedron flipped exactly once (n = {n})"
            );
            let report = certify_ball(&loom, &run.flips, &run.content).expect("certificate");
            assert!(
                report.passed(),
                "ball certificate for n = {n}: {:?}",
                report
                    .checks
                    .iter()
                    .filter(|c| !c.ok)
                    .collect::<Vec<_>>()
            );
            // Policy independence: the flipped multiset does not depend on
            // the flippable-edge choice.
            let other = layer(&loom, &h, FlipPolicy::LexMax).expect("layering succeeds");
            let a: BTreeSet<TetRect> = run.flips.steps.iter().map(|s| s.tet).collect();
            let b: BTreeSet<TetRect> = other.flips.steps.iter().map(|s| s.tet).collect();
            assert_eq!(a, b, "policy independence (n = {n})");
            let other_report = certify_ball(&loom, &other.flips, &other.content).unwrap();
            assert!(other_report.passed());
            total_flips += run.flips.steps.len();
        }
        format!("10 nested hulls, {total_flips} flips, final content {last_content}")
    });
}

#[test]
fn deterministic_builds() {
    // Byte-identical output for identical input.
    let a = loomweaver::triangulate::write_json(&build_quotient("RL").tri);
    let b = loomweaver::triangulate::write_json(&build_quotient("RL").tri);
    assert_eq!(a, b);
}

#[test]
fn window_doubling_gives_isomorphic_quotients() {
    let loom = a0_loom();
    let group = SymmetryGroup::mapping_torus(loom.monodromy());
    let small = quotient(&loom, &group, 2).unwrap();
    let large = quotient(&loom, &group, 16).unwrap();
    assert!(taut_isomorphic(&small.tri, &large.tri, true).is_some());
}

#[test]
fn figure_eight_edge_classes_have_both_colours() {
    let q = build_quotient("RL");
    let mut colours: Vec<_> = q
        .tri
        .edge_classes()
        .iter()
        .map(|c| c.colour(&q.tri).expect("consistent colour"))
        .collect();
    colours.sort_unstable();
    assert_eq!(
        colours,
        vec![
            loomweaver::skeletal::Colour::Red,
            loomweaver::skeletal::Colour::Blue
        ]
    );
}
