//! End-to-end acceptance criteria A1–A11, one PASS/FAIL line each.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_bounds::bounds::{
    corollary1_bound, corollary1_first_k, lambda0, liyau_average_bound, liyau_kth_bound,
    melas_bound, polya_bound, theorem1_bound, theorem1_terms, DomainSummary,
};
use spectral_bounds::geometry::{shapes, Polytope};
use spectral_bounds::harness::{run_asymptotics, run_proofkit_audit, AuditConfig};
use spectral_bounds::proofkit::{ball_indicator_moments, liyau_functional_bound, reconstruct_theorem1};
use spectral_bounds::spectra::{
    box_spectrum_exact, eigenvalue_average, equilateral_triangle_spectrum_exact, fd_assemble,
    fd_spectrum, richardson_extrapolate, Spectrum, Stencil,
};

const SLACK: f64 = 1e-9;
const SOLVER_TOL: f64 = 1e-8;
const MELAS_CONSTANT: f64 = 1e-3;
const FRACTION: f64 = 1.0 / 3.0;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("runtime {:.1}s exceeds {}s", t.as_secs_f64(), limit.as_secs()))
}

fn summary(p: &Polytope) -> DomainSummary {
    DomainSummary::from_polytope(p, FRACTION).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn fd(p: &Polytope, h: f64, count: usize, stencil: Stencil) -> Spectrum {
    let op = fd_assemble(p, h, stencil).unwrap();
    fd_spectrum(&op, count, 0).unwrap()
}

/// Number of k ≤ k_max with (1/k)Σλ_j below `bound(k)` by more than the slack.
fn average_violations(s: &Spectrum, k_max: usize, bound: impl Fn(usize) -> f64) -> usize {
    (1..=k_max)
        .filter(|&k| {
            let avg = eigenvalue_average(s, k).unwrap();
            avg < bound(k) - SLACK * avg
        })
        .count()
}

struct Shared {
    square: Spectrum,
    l_shape_128: Spectrum,
}

fn a1(sh: &Shared) -> Outcome {
    let start = Instant::now();
    let bad = (1..=100_000)
        .filter(|&k| sh.square.lambda(k).unwrap() < polya_bound(k, 2, 1.0) * (1.0 - SLACK))
        .count();
    ensure(bad == 0, || format!("{bad} Pólya violations on the unit square"))?;
    let tri = shapes::right_isosceles_triangle(1.0);
    let coarse = fd(&tri, 1.0 / 128.0, 20, Stencil::ShortleyWeller);
    let fine = fd(&tri, 1.0 / 256.0, 20, Stencil::ShortleyWeller);
    let r = richardson_extrapolate(&coarse, &fine, 2).unwrap();
    let v = tri.volume();
    for k in 1..=20 {
        let l = r.lambda(k).unwrap();
        let b = polya_bound(k, 2, v);
        ensure(l >= b * (1.0 - SOLVER_TOL), || format!("triangle k = {k}: {l} < {b}"))?;
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "square k ≤ 100000 and right triangle k ≤ 20 (λ₁ ≈ {:.4}, exact {:.4}) in {:.1}s",
        r.lambda(1).unwrap(),
        5.0 * PI * PI,
        start.elapsed().as_secs_f64()
    ))
}

fn liyau_cases(sh: &Shared) -> Vec<(&'static str, Polytope, Spectrum, usize)> {
    vec![
        ("unit_square", shapes::unit_square(), sh.square.clone(), 100_000),
        (
            "box_123",
            shapes::axis_box(&[1.0, 2.0, 3.0]),
            box_spectrum_exact(&[1.0, 2.0, 3.0], 10_000).unwrap(),
            10_000,
        ),
        (
            "equilateral",
            shapes::equilateral_triangle(1.0),
            equilateral_triangle_spectrum_exact(1.0, 1000).unwrap(),
            1000,
        ),
        ("l_shape", shapes::l_shape(), sh.l_shape_128.clone(), 20),
    ]
}

fn a2(sh: &Shared) -> Outcome {
    let mut names = Vec::new();
    for (name, p, s, k_max) in liyau_cases(sh) {
        let (n, v) = (p.dimension(), p.volume());
        let avg = average_violations(&s, k_max, |k| liyau_average_bound(k, n, v));
        let kth = (1..=k_max)
            .filter(|&k| {
                let l = s.lambda(k).unwrap();
                l < liyau_kth_bound(k, n, v) - SLACK * l
            })
            .count();
        ensure(avg + kth == 0, || format!("{name}: {avg} average and {kth} k-th violations"))?;
        names.push(format!("{name} k ≤ {k_max}"));
    }
    Ok(names.join(", "))
}

fn a3() -> Outcome {
    let start = Instant::now();
    let d = summary(&shapes::unit_square());
    ensure((d.min_d - 1.0 / 3.0).abs() < 1e-12, || format!("min_d = {}", d.min_d))?;
    let l0 = lambda0(2, d.volume, d.min_d, d.min_area);
    let expected = 2f64.powi(14) * (6.0 * PI).sqrt();
    ensure((l0 / expected - 1.0).abs() < 1e-12, || format!("λ₀ = {l0}, expected {expected}"))?;
    let s = box_spectrum_exact(&[1.0, 1.0], 24_000).unwrap();
    let top = s.lambda(24_000).unwrap();
    ensure(top >= 2.9e5, || format!("enumeration reached only λ = {top}"))?;
    let mut regime = 0;
    for k in 1..=20_000 {
        let lk = s.lambda(k).unwrap();
        let avg = eigenvalue_average(&s, k).unwrap();
        let t = theorem1_terms(k, lk, &d).unwrap();
        if lk > l0 {
            regime += 1;
            ensure(t.theta && t.second > 0.0, || format!("k = {k}: second term {}", t.second))?;
            ensure(t.total() < avg, || format!("k = {k}: {} ≥ {avg}", t.total()))?;
        } else {
            ensure(!t.theta, || format!("k = {k}: Θ = 1 below λ₀"))?;
        }
    }
    for k in 1..=100 {
        let t = theorem1_bound(k, s.lambda(k).unwrap(), &d).unwrap();
        ensure(t == liyau_average_bound(k, 2, 1.0), || format!("k = {k}: Θ = 0 bound {t} differs"))?;
    }
    ensure(regime > 0, || "no k with λ_k > λ₀".into())?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "λ₀ = {l0:.1}, {regime} strict cases up to k = 20000, Θ = 0 equality k ≤ 100, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn a4(sh: &Shared) -> Outcome {
    let d = summary(&shapes::unit_square());
    let first = corollary1_first_k(&d);
    ensure(first <= 100_000, || format!("first applicable k = {first} exceeds 100000"))?;
    let mut checked = 0;
    for k in first..=100_000 {
        let b = corollary1_bound(k, &d).ok_or_else(|| format!("k = {k}: bound undefined"))?;
        let avg = eigenvalue_average(&sh.square, k).unwrap();
        ensure(b <= avg + SLACK * avg, || format!("k = {k}: {b} > {avg}"))?;
        checked += 1;
    }
    Ok(format!("first applicable k = {first}, {checked} cases"))
}

/// Monte-Carlo estimate of ∫|x − c|² over the unit n-cube, with its standard error.
fn monte_carlo_inertia(n: usize, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let r: f64 = (0..n).map(|_| (rng.random::<f64>() - 0.5).powi(2)).sum();
        s1 += r;
        s2 += r * r;
    }
    let m = samples as f64;
    let mean = s1 / m;
    (mean, ((s2 / m - mean * mean) / m).sqrt())
}

fn a5(sh: &Shared) -> Outcome {
    for (p, exact, seed) in [(shapes::unit_square(), 1.0 / 6.0, 1), (shapes::unit_cube(), 0.25, 2)] {
        let i = p.moment_of_inertia();
        let (mc, se) = monte_carlo_inertia(p.dimension(), 1_000_000, seed);
        ensure((i - exact).abs() < 1e-12, || format!("I = {i}, expected {exact}"))?;
        ensure((mc - i).abs() <= 3.0 * se, || format!("Monte-Carlo I = {mc} ± {se} vs {i}"))?;
    }
    let mut names = Vec::new();
    for (name, p, s, k_max) in liyau_cases(sh) {
        let d = summary(&p);
        let bad = average_violations(&s, k_max, |k| {
            melas_bound(k, d.n, d.volume, d.inertia, MELAS_CONSTANT).unwrap()
        });
        ensure(bad == 0, || format!("{name}: {bad} Melas violations"))?;
        names.push(name);
    }
    Ok(format!("M_n = {MELAS_CONSTANT} on {}, Monte-Carlo I within 3σ", names.join(", ")))
}

fn a6(sh: &Shared) -> Outcome {
    let h = 1.0 / 64.0;
    let s = fd(&shapes::unit_square(), h, 10, Stencil::Standard);
    let mut exact = Vec::new();
    let mut discrete = Vec::new();
    for i in 1..64 {
        for j in 1..64 {
            exact.push(PI * PI * (i * i + j * j) as f64);
            let sn = |q: usize| (q as f64 * PI * h / 2.0).sin().powi(2);
            discrete.push(4.0 / (h * h) * (sn(i) + sn(j)));
        }
    }
    exact.sort_by(f64::total_cmp);
    discrete.sort_by(f64::total_cmp);
    for k in 0..10 {
        let l = s.eigenvalues()[k];
        ensure((l - exact[k]).abs() <= 0.01 * exact[k], || format!("square k = {}: {l} vs {}", k + 1, exact[k]))?;
        ensure((l - discrete[k]).abs() <= 1e-8 * discrete[k], || {
            format!("square k = {}: {l} vs discrete {}", k + 1, discrete[k])
        })?;
    }
    let tri = fd(&shapes::equilateral_triangle(1.0), 1.0 / 128.0, 1, Stencil::ShortleyWeller);
    let target = 16.0 * PI * PI / 3.0;
    let t1 = tri.eigenvalues()[0];
    ensure((t1 - target).abs() <= 0.02 * target, || format!("equilateral λ₁ = {t1} vs {target}"))?;
    let l = shapes::l_shape();
    let coarse = fd(&l, 1.0 / 128.0, 2, Stencil::ShortleyWeller);
    let fine = fd(&l, 1.0 / 256.0, 2, Stencil::ShortleyWeller);
    let reference = richardson_extrapolate(&coarse, &fine, 2).unwrap().eigenvalues()[0];
    let l1 = sh.l_shape_128.eigenvalues()[0];
    ensure((l1 - reference).abs() <= 0.01 * reference, || format!("L-shape λ₁ = {l1} vs {reference}"))?;
    Ok(format!(
        "square 10th = {:.2}, equilateral λ₁ = {t1:.3}, L-shape λ₁ = {l1:.4} (reference {reference:.4})",
        s.eigenvalues()[9]
    ))
}

fn a7() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        for r in [0.1, 1.0, 10.0] {
            let (mass, m2) = ball_indicator_moments(1.0, r, n).unwrap();
            let b = liyau_functional_bound(1.0, m2, n).unwrap();
            worst = worst.max((b / mass - 1.0).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn a8() -> Outcome {
    let start = Instant::now();
    let report = run_proofkit_audit(&AuditConfig::default()).map_err(|e| e.to_string())?;
    for name in ["d_bound", "g_bounds", "v_bounds", "w_bounds", "d_bigint", "dichotomy"] {
        let c = report.check(name).ok_or_else(|| format!("check {name} missing"))?;
        ensure(c.passed(), || format!("{name}: {}", c.failure.clone().unwrap_or_default()))?;
    }
    ensure(report.passed(), || report.lines().join("; "))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("{} checks in {:.1}s", report.checks.len(), start.elapsed().as_secs_f64()))
}

fn a9() -> Outcome {
    let cases: Vec<(Polytope, Spectrum)> = vec![
        (shapes::unit_square(), box_spectrum_exact(&[1.0, 1.0], 20_000).unwrap()),
        (shapes::unit_cube(), box_spectrum_exact(&[1.0, 1.0, 1.0], 60_000).unwrap()),
        (shapes::axis_box(&[1.0, 2.0, 3.0]), box_spectrum_exact(&[1.0, 2.0, 3.0], 20_000).unwrap()),
        (shapes::equilateral_triangle(1.0), equilateral_triangle_spectrum_exact(1.0, 20_000).unwrap()),
    ];
    let summaries: Vec<_> = cases.iter().map(|(p, _)| summary(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst, mut theta): (f64, usize) = (0.0, 0);
    for _ in 0..100 {
        let i = rng.random_range(0..cases.len());
        let s = &cases[i].1;
        let k = rng.random_range(1..=s.len());
        let lk = s.lambda(k).unwrap();
        let r = reconstruct_theorem1(k, lk, &summaries[i]).map_err(|e| e.to_string())?;
        let t = theorem1_bound(k, lk, &summaries[i]).unwrap();
        let err = (r.total() / t - 1.0).abs();
        ensure(err <= 1e-9, || format!("domain {}, k = {k}: {} vs {t}", cases[i].0.id(), r.total()))?;
        worst = worst.max(err);
        theta += r.theta as usize;
    }
    Ok(format!("100 cases ({theta} with Θ = 1), max relative error {worst:.1e}"))
}

fn a10() -> Outcome {
    let sq = run_asymptotics(&data("unit_square.json"), 100_000).map_err(|e| e.to_string())?;
    ensure((0.45..=0.55).contains(&sq.slope), || format!("square slope {}", sq.slope))?;
    let cube = run_asymptotics(&data("unit_cube.json"), 10_000).map_err(|e| e.to_string())?;
    ensure((0.28..=0.39).contains(&cube.slope), || format!("cube slope {}", cube.slope))?;
    Ok(format!("square slope {:.4}, cube slope {:.4}", sq.slope, cube.slope))
}

fn a11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |domain: &str, out: &str, extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_spectral-bounds"))
            .arg("verify")
            .arg("--domain-file")
            .arg(data(domain))
            .args(["--k-max", "200", "--melas-constant", "1e-3", "--output"])
            .arg(dir.path().join(out))
            .args(extra)
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .map_err(|e| e.to_string())
            .map(|s| s.code())
    };
    ensure(run("unit_square.json", "a.csv", &[])? == Some(0), || "clean run did not exit 0".into())?;
    ensure(run("unit_square.json", "b.csv", &[])? == Some(0), || "rerun did not exit 0".into())?;
    let golden = std::fs::read(data("unit_square_k200.csv")).map_err(|e| e.to_string())?;
    let a = std::fs::read(dir.path().join("a.csv")).map_err(|e| e.to_string())?;
    let b = std::fs::read(dir.path().join("b.csv")).map_err(|e| e.to_string())?;
    ensure(a == golden && b == golden, || "CSV differs from the golden file".into())?;
    let fault = run("unit_square.json", "f.csv", &["--inject-fault"])?;
    ensure(fault == Some(1), || format!("fault injection exited {fault:?}"))?;
    let bad = run("malformed.json", "m.csv", &[])?;
    ensure(bad == Some(2), || format!("malformed domain exited {bad:?}"))?;
    Ok("golden CSV reproduced, exit codes 0/1/2".into())
}

fn main() -> ExitCode {
    let shared = Shared {
        square: box_spectrum_exact(&[1.0, 1.0], 100_000).unwrap(),
        l_shape_128: fd(&shapes::l_shape(), 1.0 / 128.0, 20, Stencil::ShortleyWeller),
    };
    let criteria: [(&str, &dyn Fn() -> Outcome); 11] = [
        ("A1", &|| a1(&shared)),
        ("A2", &|| a2(&shared)),
        ("A3", &a3),
        ("A4", &|| a4(&shared)),
        ("A5", &|| a5(&shared)),
        ("A6", &|| a6(&shared)),
        ("A7", &a7),
        ("A8", &a8),
        ("A9", &a9),
        ("A10", &a10),
        ("A11", &a11),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {id} {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
