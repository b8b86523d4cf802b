use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_bounds::geometry::{
    face_decomposition, shapes, unit_ball_volume, Patch, Polytope, PolytopeKind,
};

fn stock() -> Vec<Polytope> {
    vec![
        shapes::unit_square(),
        shapes::axis_box(&[1.0, 2.0, 3.0]),
        shapes::l_shape(),
        shapes::equilateral_triangle(1.0),
        shapes::right_isosceles_triangle(1.0),
        shapes::unit_cube_polyhedron(),
        shapes::l_prism(),
        shapes::corner_simplex(),
    ]
}

/// Convex polygon with vertices on an ellipse at sorted random angles.
fn convex_polygon(seed: u64) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(3..9usize);
    let mut angles: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let (a, b) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
    let pts: Vec<[f64; 2]> = angles.iter().map(|t| [a * t.cos(), b * t.sin()]).collect();
    Polytope::polygon(&pts).unwrap_or_else(|_| shapes::unit_square())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #[test]
    fn scaling_laws(idx in 0usize..8, t in 0.1f64..10.0) {
        let p = &stock()[idx];
        let n = p.dimension() as i32;
        let q = p.scaled(t);
        prop_assert!(rel(q.volume(), t.powi(n) * p.volume()) <= 1e-12);
        prop_assert!(rel(q.surface_area(), t.powi(n - 1) * p.surface_area()) <= 1e-12);
        prop_assert!(rel(q.moment_of_inertia(), t.powi(n + 2) * p.moment_of_inertia()) <= 1e-12);
    }

    #[test]
    fn scaling_random_polygons(seed in any::<u64>(), t in 0.1f64..10.0) {
        let p = convex_polygon(seed);
        let q = p.scaled(t);
        prop_assert!(rel(q.volume(), t * t * p.volume()) <= 1e-12);
        prop_assert!(rel(q.surface_area(), t * p.surface_area()) <= 1e-12);
        prop_assert!(rel(q.moment_of_inertia(), t.powi(4) * p.moment_of_inertia()) <= 1e-12);
    }

    #[test]
    fn translation_invariance(idx in 0usize..8, dx in -5.0f64..5.0, dy in -5.0f64..5.0, dz in -5.0f64..5.0) {
        let p = &stock()[idx];
        let off: Vec<f64> = [dx, dy, dz][..p.dimension()].to_vec();
        let q = p.translated(&off);
        prop_assert!(rel(q.volume(), p.volume()) <= 1e-12);
        prop_assert!(rel(q.surface_area(), p.surface_area()) <= 1e-12);
        prop_assert!(rel(q.moment_of_inertia(), p.moment_of_inertia()) <= 1e-9);
        for (a, b) in q.face_areas().iter().zip(p.face_areas()) {
            prop_assert!(rel(*a, b) <= 1e-12);
        }
    }

    #[test]
    fn isoperimetric(seed in any::<u64>()) {
        let p = convex_polygon(seed);
        let n = 2;
        let lhs = p.surface_area().powi(n);
        let rhs = (n as f64).powi(n) * unit_ball_volume(n as usize).unwrap() * p.volume().powi(n - 1);
        prop_assert!(lhs > rhs);
    }
}

#[test]
fn isoperimetric_stock() {
    for p in stock() {
        let n = p.dimension() as i32;
        let lhs = p.surface_area().powi(n);
        let rhs = (n as f64).powi(n) * unit_ball_volume(n as usize).unwrap() * p.volume().powi(n - 1);
        assert!(lhs > rhs, "{}", p.id());
    }
}

fn crossing_inside(x: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let m = poly.len();
    for i in 0..m {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        if (a[1] > x[1]) != (b[1] > x[1]) {
            let t = (x[1] - a[1]) / (b[1] - a[1]);
            if x[0] < a[0] + t * (b[0] - a[0]) {
                inside = !inside;
            }
        }
    }
    inside
}

/// Rejection-sampling estimates of (V, I, σ_V, σ_I).
fn monte_carlo(p: &Polytope, samples: usize, inside: impl Fn(&[f64]) -> bool) -> (f64, f64, f64, f64) {
    let (lo, hi) = p.bounding_box();
    let n = lo.len();
    let b: f64 = lo.iter().zip(&hi).map(|(a, c)| c - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pts = Vec::new();
    let mut hits = 0usize;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for d in 0..n {
            x[d] = rng.random_range(lo[d]..hi[d]);
        }
        if inside(&x) {
            hits += 1;
            pts.push(x.clone());
        }
    }
    let frac = hits as f64 / samples as f64;
    let vol = b * frac;
    let sv = b * (frac * (1.0 - frac) / samples as f64).sqrt();
    let c: Vec<f64> = (0..n).map(|d| pts.iter().map(|q| q[d]).sum::<f64>() / hits as f64).collect();
    let f: Vec<f64> = pts.iter().map(|q| q.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum()).collect();
    let s1: f64 = f.iter().sum::<f64>() / samples as f64;
    let s2: f64 = f.iter().map(|v| v * v).sum::<f64>() / samples as f64;
    let inertia = b * s1;
    let si = b * ((s2 - s1 * s1) / samples as f64).sqrt();
    (vol, inertia, sv, si)
}

#[test]
fn monte_carlo_volume_and_inertia() {
    let samples = 1_000_000;
    let l = shapes::l_shape();
    let verts: Vec<[f64; 2]> = l.vertices().iter().map(|v| [v[0], v[1]]).collect();
    let tri = shapes::equilateral_triangle(1.0);
    let tverts: Vec<[f64; 2]> = tri.vertices().iter().map(|v| [v[0], v[1]]).collect();
    let prism = shapes::l_prism();
    let cases: Vec<(Polytope, Box<dyn Fn(&[f64]) -> bool>)> = vec![
        (l.clone(), Box::new(move |x: &[f64]| crossing_inside([x[0], x[1]], &verts))),
        (tri.clone(), Box::new(move |x: &[f64]| crossing_inside([x[0], x[1]], &tverts))),
        (
            prism.clone(),
            Box::new(|x: &[f64]| {
                let base = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
                x[2] > 0.0 && x[2] < 1.0 && crossing_inside([x[0], x[1]], &base)
            }),
        ),
        (shapes::corner_simplex(), Box::new(|x: &[f64]| x.iter().all(|v| *v > 0.0) && x.iter().sum::<f64>() < 1.0)),
        (shapes::unit_square(), Box::new(|_: &[f64]| true)),
    ];
    for (p, inside) in cases {
        let (v, i, sv, si) = monte_carlo(&p, samples, inside);
        assert!((v - p.volume()).abs() <= 3.0 * sv.max(1e-12), "{}: V {v} vs {}", p.id(), p.volume());
        assert!(
            (i - p.moment_of_inertia()).abs() <= 3.0 * si,
            "{}: I {i} vs {} (σ {si})",
            p.id(),
            p.moment_of_inertia()
        );
    }
    assert!((shapes::unit_square().moment_of_inertia() - 1.0 / 6.0).abs() < 1e-14);
    assert!((shapes::unit_cube().moment_of_inertia() - 0.25).abs() < 1e-14);
}

#[test]
fn library_containment_matches_crossing_rule() {
    let l = shapes::l_shape();
    let verts: Vec<[f64; 2]> = l.vertices().iter().map(|v| [v[0], v[1]]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20_000 {
        let x = [rng.random_range(-0.5..2.5), rng.random_range(-0.5..2.5)];
        assert_eq!(l.contains(&x), crossing_inside(x, &verts), "{x:?}");
    }
}

fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
    ((p[0] - a[0] - t * d[0]).powi(2) + (p[1] - a[1] - t * d[1]).powi(2)).sqrt()
}

fn sample_segment(a: [f64; 2], b: [f64; 2], m: usize) -> impl Iterator<Item = [f64; 2]> {
    (0..=m).map(move |i| {
        let t = i as f64 / m as f64;
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    })
}

/// Two-sided sampled distance between a patch segment and the other edges.
fn brute_force_polygon(p: &Polytope, fraction: f64) {
    let spec = p.to_spec();
    let verts: Vec<[f64; 2]> = spec.vertices.unwrap().iter().map(|v| [v[0], v[1]]).collect();
    let edges: Vec<[usize; 2]> = spec.faces.unwrap().iter().map(|f| [f[0], f[1]]).collect();
    let fd = face_decomposition(p, fraction).unwrap();
    let m = 10_000;
    for (i, face) in fd.faces.iter().enumerate() {
        assert!(face.patch_area_total >= fraction * face.face_area * (1.0 - 1e-12));
        let mut best = f64::INFINITY;
        for patch in &face.patches {
            let Patch::Segment([a, b]) = patch else { panic!("polygon patches are segments") };
            for (j, e) in edges.iter().enumerate() {
                if j == i {
                    continue;
                }
                let (c, d) = (verts[e[0]], verts[e[1]]);
                for x in sample_segment(*a, *b, m) {
                    best = best.min(seg_dist(x, c, d));
                }
                for y in sample_segment(c, d, m) {
                    best = best.min(seg_dist(y, *a, *b));
                }
            }
        }
        assert!((face.distance - best).abs() <= 1e-9, "{} face {i}: {} vs {best}", p.id(), face.distance);
    }
}

#[test]
fn polygon_decomposition_matches_brute_force() {
    for p in [
        shapes::square_polygon(1.0),
        shapes::l_shape(),
        shapes::equilateral_triangle(1.0),
        shapes::right_isosceles_triangle(2.0),
        convex_polygon(5),
        convex_polygon(17),
    ] {
        brute_force_polygon(&p, 1.0 / 3.0);
    }
}

/// Distance from `x` to the face `x[axis] = at` of the box `[0, L]`.
fn box_face_distance(x: &[f64], lengths: &[f64], axis: usize, at: f64) -> f64 {
    let mut s = (x[axis] - at).powi(2);
    for j in 0..lengths.len() {
        if j != axis {
            let c = x[j].clamp(0.0, lengths[j]);
            s += (x[j] - c).powi(2);
        }
    }
    s.sqrt()
}

#[test]
fn box_decomposition_matches_brute_force() {
    let lengths = [1.0, 2.0, 3.0];
    let p = shapes::axis_box(&lengths);
    let fd = face_decomposition(&p, 1.0 / 3.0).unwrap();
    let g = 100;
    for (i, face) in fd.faces.iter().enumerate() {
        assert!(face.patch_area_total >= face.face_area / 3.0 * (1.0 - 1e-12));
        let mut best = f64::INFINITY;
        for patch in &face.patches {
            let Patch::Rect { axis, at, lower, upper } = patch else { panic!("box patches are rectangles") };
            let others: Vec<(usize, usize)> = (0..3).filter(|j| j != axis).map(|j| (j, 0)).collect();
            let (u, v) = (others[0].0, others[1].0);
            for a in 0..=g {
                for b in 0..=g {
                    let mut x = [0.0; 3];
                    x[*axis] = *at;
                    x[u] = lower[u] + (upper[u] - lower[u]) * a as f64 / g as f64;
                    x[v] = lower[v] + (upper[v] - lower[v]) * b as f64 / g as f64;
                    for ax in 0..3 {
                        for side in [0.0, lengths[ax]] {
                            if ax == *axis && side == *at {
                                continue;
                            }
                            best = best.min(box_face_distance(&x, &lengths, ax, side));
                        }
                    }
                }
            }
        }
        assert!((face.distance - best).abs() <= 1e-9, "face {i}: {} vs {best}", face.distance);
    }
}

#[test]
fn polyhedral_cube_matches_box_decomposition() {
    let a = face_decomposition(&shapes::unit_cube(), 1.0 / 3.0).unwrap();
    let b = face_decomposition(&shapes::unit_cube_polyhedron(), 1.0 / 3.0).unwrap();
    assert!((a.min_distance() - b.min_distance()).abs() < 1e-9);
    assert!((a.min_face_area() - b.min_face_area()).abs() < 1e-12);
    assert_eq!(shapes::unit_cube_polyhedron().kind(), PolytopeKind::General);
}

#[test]
fn unit_square_decomposition_distance() {
    let fd = face_decomposition(&shapes::unit_square(), 1.0 / 3.0).unwrap();
    assert!((fd.min_distance() - 1.0 / 3.0).abs() < 1e-12);
    assert!((fd.min_face_area() - 1.0).abs() < 1e-15);
}
