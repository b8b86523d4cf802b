use std::f64::consts::PI;

use proptest::prelude::*;

use spectral_bounds::geometry::shapes;
use spectral_bounds::spectra::{
    box_spectrum_exact, counting_function, eigenvalue_average, equilateral_triangle_spectrum_exact,
    fd_assemble, fd_spectrum, Stencil,
};

/// Sorted k smallest values of (4/h²)(sin²(iπh/2) + sin²(jπh/2)).
fn discrete_sines(h: f64, k: usize) -> Vec<f64> {
    let m = (1.0 / h).round() as usize;
    let mut v = Vec::new();
    for i in 1..m {
        for j in 1..m {
            let s = |q: usize| (q as f64 * PI * h / 2.0).sin().powi(2);
            v.push(4.0 / (h * h) * (s(i) + s(j)));
        }
    }
    v.sort_by(f64::total_cmp);
    v.truncate(k);
    v
}

fn square_exact(k: usize) -> Vec<f64> {
    let mut v = Vec::new();
    for i in 1..20 {
        for j in 1..20 {
            v.push(PI * PI * (i * i + j * j) as f64);
        }
    }
    v.sort_by(f64::total_cmp);
    v.truncate(k);
    v
}

#[test]
fn fd_matches_discrete_sines() {
    for h in [1.0 / 16.0, 1.0 / 40.0] {
        let op = fd_assemble(&shapes::unit_square(), h, Stencil::Standard).unwrap();
        let s = fd_spectrum(&op, 12, 1).unwrap();
        for (a, b) in s.eigenvalues().iter().zip(discrete_sines(h, 12)) {
            assert!((a - b).abs() <= 1e-8 * b, "h = {h}: {a} vs {b}");
        }
    }
}

#[test]
fn fd_second_order_convergence() {
    let exact = square_exact(10);
    let spec = |h: f64| {
        let op = fd_assemble(&shapes::unit_square(), h, Stencil::Standard).unwrap();
        fd_spectrum(&op, 10, 2).unwrap()
    };
    let (coarse, fine) = (spec(1.0 / 16.0), spec(1.0 / 32.0));
    for k in 0..10 {
        let ratio = (coarse.eigenvalues()[k] - exact[k]).abs() / (fine.eigenvalues()[k] - exact[k]).abs();
        assert!((3.5..=4.5).contains(&ratio), "k = {}: ratio {ratio}", k + 1);
    }
}

#[test]
fn domain_monotonicity() {
    let big = box_spectrum_exact(&[1.0, 1.0], 500).unwrap();
    let small = box_spectrum_exact(&[0.8, 0.8], 500).unwrap();
    for (s, b) in small.eigenvalues().iter().zip(big.eigenvalues()) {
        assert!(s >= b);
    }
    let slab = box_spectrum_exact(&[1.0, 0.7, 1.0], 300).unwrap();
    let cube = box_spectrum_exact(&[1.0, 1.0, 1.0], 300).unwrap();
    for (s, b) in slab.eigenvalues().iter().zip(cube.eigenvalues()) {
        assert!(s >= b);
    }
}

#[test]
fn right_triangle_closed_form() {
    let mut exact = Vec::new();
    for m in 1..40usize {
        for n in 1..m {
            exact.push(PI * PI * (m * m + n * n) as f64);
        }
    }
    exact.sort_by(f64::total_cmp);
    let op = fd_assemble(&shapes::right_isosceles_triangle(1.0), 1.0 / 64.0, Stencil::ShortleyWeller).unwrap();
    let s = fd_spectrum(&op, 6, 3).unwrap();
    for (a, b) in s.eigenvalues().iter().zip(&exact) {
        assert!((a - b).abs() <= 0.01 * b, "{a} vs {b}");
    }
}

#[test]
fn equilateral_first_eigenvalue() {
    let s = equilateral_triangle_spectrum_exact(1.0, 3).unwrap();
    assert!((s.eigenvalues()[0] - 16.0 * PI * PI / 3.0).abs() < 1e-10);
    assert!((s.eigenvalues()[1] - 112.0 * PI * PI / 9.0).abs() < 1e-10);
    assert_eq!(s.eigenvalues()[1], s.eigenvalues()[2]);
}

proptest! {
    #[test]
    fn scaling_covariance(a in 0.3f64..3.0, b in 0.3f64..3.0, t in 0.1f64..10.0) {
        let s = box_spectrum_exact(&[a, b], 200).unwrap();
        let st = box_spectrum_exact(&[t * a, t * b], 200).unwrap();
        for (x, y) in s.eigenvalues().iter().zip(st.eigenvalues()) {
            prop_assert!((y - x / (t * t)).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn triangle_scaling_covariance(t in 0.1f64..10.0) {
        let s = equilateral_triangle_spectrum_exact(1.0, 100).unwrap();
        let st = equilateral_triangle_spectrum_exact(t, 100).unwrap();
        for (x, y) in s.eigenvalues().iter().zip(st.eigenvalues()) {
            prop_assert!((y - x / (t * t)).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn counting_and_average_consistent(a in 0.5f64..2.0, b in 0.5f64..2.0, c in 0.5f64..2.0) {
        let s = box_spectrum_exact(&[a, b, c], 400).unwrap();
        let mut last = 0.0;
        for k in 1..=s.len() {
            let lk = s.lambda(k).unwrap();
            if lk <= s.certified_limit() {
                prop_assert!(counting_function(&s, lk).unwrap() >= k);
            }
            let avg = eigenvalue_average(&s, k).unwrap();
            prop_assert!(avg >= last);
            last = avg;
        }
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }
}
