use std::ops::RangeInclusive;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{lambda0, lambda0_entries, theorem1_terms, DomainSummary};
use crate::error::{Error, Result};
use crate::geometry::shapes;
use crate::proofkit::{
    admissible_lambda_threshold, ball_indicator_moments, choose_p, d_bound_check, d_sequence,
    derivative_dichotomy_check, g_eval, local_lower, liyau_functional_bound, m_lambda,
    reconstruct_theorem1, rectangle_count, thin_lower_log2, v_eval, w_eval, ProofConstants,
};
use crate::spectra::box_spectrum_exact;

/// Largest p and n swept by the pointwise bump-function checks.
pub const BUMP_MAX_P: u64 = 5;
pub const BUMP_MAX_N: usize = 4;
/// Largest p and n for the exact-integer D_q comparison.
pub const BIGINT_MAX_P: u64 = 10;
pub const BIGINT_MAX_N: usize = 4;
pub const DICHOTOMY_POLYNOMIALS: usize = 1000;
pub const DICHOTOMY_TRIGONOMETRIC: usize = 100;
pub const RECONSTRUCTION_CASES: usize = 100;

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub n_range: RangeInclusive<usize>,
    pub p_range: RangeInclusive<u64>,
    /// Random points per parameter choice in the bump-function sweeps.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            n_range: 2..=10,
            p_range: 1..=30,
            sample_count: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub cases: usize,
    /// Offending parameters of the first failure.
    pub failure: Option<String>,
}

impl AuditCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AuditCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| match &c.failure {
                None => format!("PASS {} ({} cases)", c.name, c.cases),
                Some(f) => format!("FAIL {} ({} cases): {f}", c.name, c.cases),
            })
            .collect()
    }
}

/// Tally of one sweep: number of cases and the first failure.
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            cases: 0,
            failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        if self.failure.is_none() {
            self.failure = other.failure;
        }
        self
    }

    fn finish(self, name: &'static str) -> AuditCheck {
        AuditCheck {
            name,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

fn check_result(name: &'static str, r: Result<Tally>) -> AuditCheck {
    match r {
        Ok(t) => t.finish(name),
        Err(e) => AuditCheck {
            name,
            cases: 0,
            failure: Some(e.to_string()),
        },
    }
}

pub fn run_proofkit_audit(config: &AuditConfig) -> Result<AuditReport> {
    if config.n_range.is_empty() || config.p_range.is_empty() {
        return Err(Error::Config("audit ranges must be non-empty".into()));
    }
    if *config.n_range.start() < 2 || *config.p_range.start() < 1 {
        return Err(Error::Config("audit needs n ≥ 2 and p ≥ 1".into()));
    }
    if config.sample_count == 0 {
        return Err(Error::Config("sample_count must be at least 1".into()));
    }
    let checks = vec![
        check_result("d_bound", d_bound(config)),
        check_result("d_increasing", d_increasing(config)),
        check_result("d_bigint", d_bigint(config)),
        check_result("g_bounds", g_bounds(config)),
        check_result("v_bounds", v_bounds(config)),
        check_result("w_bounds", w_bounds(config)),
        check_result("liyau_ball_equality", liyau_ball(config)),
        check_result("dichotomy", dichotomy(config)),
        check_result("local_lower_monotone", local_lower_monotone(config)),
        check_result("local_lower_thin", local_lower_thin(config)),
        check_result("rectangles_admissible", rectangles(config)),
        check_result("m_lambda_bracket", m_lambda_bracket(config)),
        check_result("deficit_chain", deficit_chain(config)),
        check_result("reconstruction", reconstruction(config)),
    ];
    Ok(AuditReport { checks })
}

fn pairs(config: &AuditConfig) -> Vec<(usize, u64)> {
    config
        .n_range
        .clone()
        .flat_map(|n| config.p_range.clone().map(move |p| (n, p)))
        .collect()
}

fn d_bound(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (n, p) in pairs(config) {
        t.record(d_bound_check(n, p)?, || format!("D_p ≥ 2^((2n+18)p²) at n = {n}, p = {p}"));
    }
    Ok(t)
}

fn d_increasing(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (n, p) in pairs(config) {
        let d = d_sequence(n, p)?;
        let ok = d.len() == p as usize + 2 && d[0] == 0.0 && d.windows(2).all(|w| w[1] > w[0]);
        t.record(ok, || format!("log₂ D_q not strictly increasing at n = {n}, p = {p}"));
    }
    Ok(t)
}

/// Exact D_0..D_{p+1} in integers.
pub fn d_sequence_exact(n: usize, p: u64) -> Vec<BigUint> {
    let nb = BigUint::from(n as u64);
    let p2 = BigUint::from(p) * BigUint::from(p);
    let one = BigUint::from(1u32);
    let a = BigUint::from(3u32) * (&one + BigUint::from(1936u32) * &nb * &nb * &p2 * &p2);
    let b = BigUint::from(300u32) * &nb * &p2;
    let mut d = vec![one.clone()];
    let mut prev = one;
    for _ in 1..=p + 1 {
        let cur = d.last().expect("non-empty").clone();
        d.push(&a * &prev + &b * &cur);
        prev = cur;
    }
    d
}

/// log₂ of a positive big integer from its leading 64 bits.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.to_u64_digits()[0] as f64).log2() + shift as f64
}

fn d_bigint(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (n, p) in pairs(config) {
        if n > BIGINT_MAX_N || p > BIGINT_MAX_P {
            continue;
        }
        let fast = d_sequence(n, p)?;
        let exact = d_sequence_exact(n, p);
        for (q, (f, e)) in fast.iter().zip(&exact).enumerate() {
            let le = log2_biguint(e);
            let err = if le == 0.0 { f.abs() } else { (f - le).abs() / le };
            t.record(err <= 1e-12, || {
                format!("log₂ D_{q} = {f} vs exact {le} (n = {n}, p = {p}, rel {err:e})")
            });
        }
    }
    Ok(t)
}

fn g_bounds(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let m = config.sample_count;
    for i in 0..=m {
        let x = i as f64 / m as f64;
        let (g, g1, g2) = g_eval(x)?;
        t.record(g.abs() <= 1.0 && g1.abs() < 2.5 && g2.abs() < 11.0, || {
            format!("g bounds fail at x = {x}: ({g}, {g1}, {g2})")
        });
    }
    // Critical points of g′ (x² = 3/7) and of g″ (x² = (10 ± √37)/21).
    let r37 = 37f64.sqrt();
    for x in [(3.0 / 7.0f64).sqrt(), ((10.0 - r37) / 21.0).sqrt(), ((10.0 + r37) / 21.0).sqrt()] {
        let (g, g1, g2) = g_eval(x)?;
        t.record(g.abs() <= 1.0 && g1.abs() < 2.5 && g2.abs() < 11.0, || {
            format!("g bounds fail at x = {x}: ({g}, {g1}, {g2})")
        });
    }
    Ok(t)
}

fn bump_params(config: &AuditConfig) -> Vec<(u64, u64)> {
    let lo = *config.p_range.start();
    let hi = (*config.p_range.end()).min(BUMP_MAX_P);
    (lo..=hi).flat_map(|p| (0..p).map(move |q| (q, p))).collect()
}

fn v_bounds(config: &AuditConfig) -> Result<Tally> {
    let tallies = bump_params(config)
        .into_par_iter()
        .map(|(q, p)| -> Result<Tally> {
            let mut t = Tally::new();
            let pf = p as f64;
            let m = config.sample_count;
            for i in 0..=m {
                let s = -1.6 + 3.2 * i as f64 / m as f64;
                let (v, v1, v2) = v_eval(q, p, s)?;
                t.record(v.abs() <= 1.0 && v1.abs() < 5.0 * pf && v2.abs() < 44.0 * pf * pf, || {
                    format!("v bounds fail at q = {q}, p = {p}, t = {s}: ({v}, {v1}, {v2})")
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tallies.into_iter().fold(Tally::new(), Tally::merge))
}

fn w_bounds(config: &AuditConfig) -> Result<Tally> {
    let lo = *config.n_range.start();
    let hi = (*config.n_range.end()).min(BUMP_MAX_N);
    let mut params = Vec::new();
    for n in lo..=hi {
        for (q, p) in bump_params(config) {
            for (li, lambda) in [1.0f64, 1e2, 1e6].into_iter().enumerate() {
                params.push((n, q, p, li, lambda));
            }
        }
    }
    let tallies = params
        .into_par_iter()
        .map(|(n, q, p, li, lambda)| -> Result<Tally> {
            let mut t = Tally::new();
            let stream = ((n as u64) << 48) ^ (p << 32) ^ (q << 16) ^ li as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let (nf, pf) = (n as f64, p as f64);
            let r = lambda.sqrt();
            let plateau = (2.0 * pf - q as f64 - 1.0) / (2.0 * pf);
            let mut x = vec![0.0; n];
            for _ in 0..config.sample_count {
                for xi in x.iter_mut() {
                    *xi = rng.random_range(-1.6..1.6) / r;
                }
                let (w, gn, lap) = w_eval(q, p, lambda, &x)?;
                let ok = w.abs() <= 1.0
                    && gn < 5.0 * nf.sqrt() * r * pf
                    && lap.abs() < 44.0 * nf * lambda * pf * pf;
                t.record(ok, || {
                    format!("W bounds fail at n = {n}, q = {q}, p = {p}, λ = {lambda}, x = {x:?}")
                });
                for xi in x.iter_mut() {
                    *xi = rng.random_range(-plateau..=plateau) / r;
                }
                let (w, _, _) = w_eval(q, p, lambda, &x)?;
                t.record(w == 1.0, || {
                    format!("W ≠ 1 on the inner plateau at n = {n}, q = {q}, p = {p}, x = {x:?}")
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tallies.into_iter().fold(Tally::new(), Tally::merge))
}

fn liyau_ball(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for n in config.n_range.clone().filter(|n| (2..=4).contains(n)) {
        for radius in [0.1, 1.0, 10.0] {
            for m1 in [1.0, 0.025] {
                let (mass, m2) = ball_indicator_moments(m1, radius, n)?;
                let b = liyau_functional_bound(m1, m2, n)?;
                let rel = (b - mass).abs() / mass;
                t.record(rel <= 1e-9, || {
                    format!("ball equality off by {rel:e} at n = {n}, R = {radius}, M1 = {m1}")
                });
            }
        }
    }
    Ok(t)
}

/// Coefficients of the q-th derivative of Σ c_i t^i.
fn derivative(c: &[f64], q: u64) -> Vec<f64> {
    let mut d = c.to_vec();
    for _ in 0..q {
        if d.len() <= 1 {
            return vec![0.0];
        }
        d = d.iter().enumerate().skip(1).map(|(i, x)| i as f64 * x).collect();
    }
    d
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, x| acc * t + x)
}

fn dichotomy(config: &AuditConfig) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xD1C7);
    let mut t = Tally::new();
    for _ in 0..DICHOTOMY_POLYNOMIALS {
        let degree = rng.random_range(1..=6usize);
        let p = rng.random_range(1..=degree as u64);
        let lambda = 10f64.powf(rng.random_range(-2.0..4.0));
        let mut c: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        c[degree] = rng.random_range(0.5..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let ds: Vec<Vec<f64>> = (0..=p).map(|q| derivative(&c, q)).collect();
        let r = derivative_dichotomy_check(|q, x| horner(&ds[q as usize], x), p, lambda)?;
        t.record(!r.violation, || format!("polynomial {c:?}, p = {p}, λ = {lambda}: {r:?}"));
    }
    for _ in 0..DICHOTOMY_TRIGONOMETRIC {
        let p = rng.random_range(1..=6u64);
        let lambda = 10f64.powf(rng.random_range(-2.0..4.0));
        let omega = rng.random_range(0.1..200.0) * lambda.sqrt();
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let f = |q: u64, x: f64| omega.powi(q as i32) * (omega * x + phase + q as f64 * std::f64::consts::FRAC_PI_2).sin();
        let r = derivative_dichotomy_check(f, p, lambda)?;
        t.record(!r.violation, || {
            format!("sin({omega}·t + {phase}), p = {p}, λ = {lambda}: {r:?}")
        });
    }
    Ok(t)
}

fn lambda_grid() -> impl Iterator<Item = f64> {
    (0..=240).map(|e| 10f64.powf(e as f64 / 4.0))
}

fn local_lower_monotone(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (n, p) in pairs(config) {
        for v in [0.5, 1.0, 8.0] {
            let mut last = f64::INFINITY;
            for lambda in lambda_grid() {
                let l = local_lower(n, v, lambda, p)?.log2_value;
                t.record(l.is_finite() && l < last, || {
                    format!("local lower bound not decreasing at n = {n}, V = {v}, p = {p}, λ = {lambda}")
                });
                last = l;
            }
        }
    }
    Ok(t)
}

/// For λ above the two α₁-entries of λ₀ and p chosen from λ, the local bound
/// dominates the simplified one.
fn local_lower_thin(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for n in config.n_range.clone() {
        for v in [0.5, 1.0, 8.0] {
            let e = lambda0_entries(n, v, 1.0, 1.0);
            let floor = e[1].max(e[2]);
            for lambda in lambda_grid().filter(|&l| l > floor) {
                let Some(p) = choose_p(n, v, lambda) else {
                    t.record(false, || format!("p undefined above λ₀ at n = {n}, V = {v}, λ = {lambda}"));
                    continue;
                };
                if !config.p_range.contains(&p) {
                    continue;
                }
                let local = local_lower(n, v, lambda, p)?.log2_value;
                let thin = thin_lower_log2(n, v, lambda, p)?;
                t.record(local >= thin - 1e-9 * thin.abs(), || {
                    format!("local {local} < simplified {thin} (log₂) at n = {n}, V = {v}, λ = {lambda}, p = {p}")
                });
            }
        }
    }
    Ok(t)
}

fn audit_domains(config: &AuditConfig) -> Result<Vec<(DomainSummary, Vec<f64>)>> {
    let mut out = Vec::new();
    for p in [shapes::unit_square(), shapes::axis_box(&[1.0, 2.0]), shapes::unit_cube(), shapes::axis_box(&[1.0, 2.0, 3.0])] {
        if config.n_range.contains(&p.dimension()) {
            out.push((DomainSummary::from_polytope(&p, 1.0 / 3.0)?, p.face_areas()));
        }
    }
    Ok(out)
}

fn rectangles(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (d, areas) in audit_domains(config)? {
        let e = lambda0_entries(d.n, d.volume, d.min_d, d.min_area);
        let th = admissible_lambda_threshold(d.min_d, d.n)?;
        t.record((th - e[0]).abs() <= 1e-12 * e[0], || {
            format!("threshold {th} differs from λ₀ entry {} (n = {})", e[0], d.n)
        });
        for a in areas {
            let n_i = rectangle_count(a, e[3], d.n)?;
            t.record(n_i >= 1, || format!("no rectangles at λ = {} for face area {a}", e[3]));
        }
    }
    Ok(t)
}

fn m_lambda_bracket(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (d, _) in audit_domains(config)? {
        let l0 = lambda0(d.n, d.volume, d.min_d, d.min_area);
        for p in config.p_range.clone().take(5) {
            let mut last = 0.0;
            for lambda in lambda_grid().filter(|&l| l > l0) {
                let m = m_lambda(lambda, &d, p)?;
                t.record(m.theta && m.value >= last && m.value <= m.prefactor, || {
                    format!("M(λ) not increasing in (0, V/(2π)ⁿ] at n = {}, p = {p}, λ = {lambda}", d.n)
                });
                last = m.value;
            }
        }
        for lambda in lambda_grid().filter(|&l| l > l0) {
            let Some(p) = choose_p(d.n, d.volume, lambda) else { continue };
            let c = ProofConstants::new(&d, p)?;
            t.record(c.validate().is_ok() && c.epsilon == 1.0 / p as f64, || {
                format!("proof constants invalid at n = {}, p = {p}", d.n)
            });
        }
    }
    Ok(t)
}

/// Σ_i N_i·(local bound) ≥ V·x, the deficit entering M(λ).
fn deficit_chain(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (d, areas) in audit_domains(config)? {
        let l0 = lambda0(d.n, d.volume, d.min_d, d.min_area);
        for lambda in lambda_grid().filter(|&l| l > l0 && l <= 1e24) {
            let Some(p) = choose_p(d.n, d.volume, lambda) else {
                t.record(false, || format!("p undefined above λ₀ at n = {}, λ = {lambda}", d.n));
                continue;
            };
            let local = local_lower(d.n, d.volume, lambda, p)?.log2_value;
            let count: f64 = areas
                .iter()
                .map(|&a| rectangle_count(a, lambda, d.n).map(|c| c as f64))
                .sum::<Result<f64>>()?;
            let lhs = count.log2() + local;
            let m = m_lambda(lambda, &d, p)?;
            let rhs = (d.volume * m.deficit).log2();
            t.record(lhs >= rhs, || {
                format!("deficit chain {lhs} < {rhs} (log₂) at n = {}, λ = {lambda}, p = {p}", d.n)
            });
        }
    }
    Ok(t)
}

fn reconstruction(config: &AuditConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EC0);
    let cases: Vec<(Vec<f64>, usize)> = [(vec![1.0, 1.0], 20_000), (vec![1.0, 1.0, 1.0], 60_000)]
        .into_iter()
        .filter(|(l, _)| config.n_range.contains(&l.len()))
        .collect();
    for (lengths, k_max) in cases {
        let p = shapes::axis_box(&lengths);
        let d = DomainSummary::from_polytope(&p, 1.0 / 3.0)?;
        let s = box_spectrum_exact(&lengths, k_max)?;
        for _ in 0..RECONSTRUCTION_CASES / 2 {
            let k = rng.random_range(1..=k_max);
            let lambda_k = s.lambda(k).expect("k within range");
            let r = reconstruct_theorem1(k, lambda_k, &d)?;
            let c = theorem1_terms(k, lambda_k, &d)?;
            let rel = (r.total() - c.total()).abs() / c.total();
            t.record(rel <= 1e-9 && r.theta == c.theta, || {
                format!("reconstruction off by {rel:e} at n = {}, k = {k}", d.n)
            });
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_d_matches_closed_form() {
        let d = d_sequence_exact(2, 1);
        assert_eq!(d[0], BigUint::from(1u32));
        assert_eq!(d[1], BigUint::from(23835u32));
        assert_eq!(d.len(), 3);
        assert!((log2_biguint(&d[1]) - 23835f64.log2()).abs() < 1e-15);
        let big = BigUint::from(3u32).pow(100);
        assert!((log2_biguint(&big) - 100.0 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn small_audit_passes() {
        let c = AuditConfig {
            n_range: 2..=3,
            p_range: 1..=3,
            sample_count: 500,
            seed: 7,
        };
        let r = run_proofkit_audit(&c).unwrap();
        assert!(r.passed(), "{:?}", r.lines());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = AuditConfig { n_range: 3..=2, ..c };
        assert!(run_proofkit_audit(&empty).is_err());
    }
}
