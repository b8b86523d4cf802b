//! Closed-form eigenvalue lower bounds and their verification against
//! spectra.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{face_decomposition, unit_ball_volume, Polytope};
use crate::spectra::{eigenvalue_average, Spectrum};

/// Relative slack applied before a bound counts as violated.
pub const VIOLATION_SLACK: f64 = 1e-9;

fn ball(n: usize) -> f64 {
    unit_ball_volume(n).expect("dimension must be at least 1")
}

/// Geometric data entering the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSummary {
    pub n: usize,
    pub volume: f64,
    pub surface_area: f64,
    pub inertia: f64,
    pub min_d: f64,
    pub min_area: f64,
    pub ball_volume: f64,
}

impl DomainSummary {
    pub fn new(
        n: usize,
        volume: f64,
        surface_area: f64,
        inertia: f64,
        min_d: f64,
        min_area: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
        }
        for (name, x) in [
            ("volume", volume),
            ("surface area", surface_area),
            ("moment of inertia", inertia),
            ("min_d", min_d),
            ("min face area", min_area),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {x}")));
            }
        }
        Ok(Self {
            n,
            volume,
            surface_area,
            inertia,
            min_d,
            min_area,
            ball_volume: ball(n),
        })
    }

    pub fn from_polytope(p: &Polytope, fraction: f64) -> Result<Self> {
        let fd = face_decomposition(p, fraction)?;
        Self::new(
            p.dimension(),
            p.volume(),
            p.surface_area(),
            p.moment_of_inertia(),
            fd.min_distance(),
            fd.min_face_area(),
        )
    }

    /// The same domain scaled by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        let n = self.n as i32;
        Self {
            volume: self.volume * t.powi(n),
            surface_area: self.surface_area * t.powi(n - 1),
            inertia: self.inertia * t.powi(n + 2),
            min_d: self.min_d * t,
            min_area: self.min_area * t.powi(n - 1),
            ..*self
        }
    }
}

/// 4π² k^{2/n} / (B_n V)^{2/n}.
pub fn weyl_kth(k: usize, n: usize, v: f64) -> f64 {
    let e = 2.0 / n as f64;
    4.0 * PI * PI * (e * ((k as f64).ln() - (ball(n) * v).ln())).exp()
}

/// n/(n+2) · 4π² k^{2/n} / (B_n V)^{2/n}.
pub fn weyl_average(k: usize, n: usize, v: f64) -> f64 {
    n as f64 / (n as f64 + 2.0) * weyl_kth(k, n, v)
}

/// Lower bound for λ_k on tiling domains (conjectured in general).
pub fn polya_bound(k: usize, n: usize, v: f64) -> f64 {
    weyl_kth(k, n, v)
}

/// Lower bound for the eigenvalue average.
pub fn liyau_average_bound(k: usize, n: usize, v: f64) -> f64 {
    weyl_average(k, n, v)
}

/// Lower bound for λ_k implied by the average bound.
pub fn liyau_kth_bound(k: usize, n: usize, v: f64) -> f64 {
    weyl_average(k, n, v)
}

/// Li–Yau plus M_n V / I.
pub fn melas_bound(k: usize, n: usize, v: f64, inertia: f64, m_n: f64) -> Result<f64> {
    if !(m_n.is_finite() && m_n > 0.0) {
        return Err(Error::Config(format!("Melas constant must be positive, got {m_n}")));
    }
    Ok(liyau_average_bound(k, n, v) + m_n * v / inertia)
}

/// Two-term average asymptote with boundary coefficient `c_n`.
pub fn weyl_two_term(k: usize, n: usize, v: f64, a: f64, c_n: f64) -> f64 {
    let nf = n as f64;
    weyl_average(k, n, v) + c_n * a / v.powf(1.0 + 1.0 / nf) * (k as f64).powf(1.0 / nf)
}

/// α₁ = √((3/B_n)(4nπ²/(n+2))^{n/2}).
pub fn alpha1(n: usize) -> f64 {
    let nf = n as f64;
    (3.0 / ball(n) * (4.0 * nf * PI * PI / (nf + 2.0)).powf(0.5 * nf)).sqrt()
}

/// The four candidates whose maximum is λ₀.
pub fn lambda0_entries(n: usize, v: f64, min_d: f64, min_area: f64) -> [f64; 4] {
    let nf = n as f64;
    let ratio = alpha1(n) / v;
    [
        4.0 * nf / (min_d * min_d),
        ratio.powf(2.0 / nf),
        (2.0 * (nf + 12.0) / nf * 2f64.ln() + 2.0 * (nf - 1.0) / nf * ratio.ln()).exp(),
        (12.0 / min_area).powf(2.0 / (nf - 1.0)),
    ]
}

pub fn lambda0(n: usize, v: f64, min_d: f64, min_area: f64) -> f64 {
    lambda0_entries(n, v, min_d, min_area)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// ⌊√(L / (n+12))⌋ for a base-2 logarithm `L`, if at least 1.
fn log_floor(n: usize, log2_arg: f64) -> Option<u64> {
    if !(log2_arg > 0.0) {
        return None;
    }
    let t = (log2_arg / (n as f64 + 12.0)).sqrt().floor();
    (t >= 1.0).then_some(t as u64)
}

/// log₂((V/α₁)^{n−1} λ^{n/2}).
pub fn epsilon_log2_argument(n: usize, v: f64, lambda: f64) -> f64 {
    let nf = n as f64;
    (nf - 1.0) * (v / alpha1(n)).log2() + 0.5 * nf * lambda.log2()
}

/// ε(k) = 1 / ⌊√(log₂((V/α₁)^{n−1} λ_k^{n/2}) / (n+12))⌋, undefined when
/// the floor is below 1.
pub fn epsilon_k(n: usize, v: f64, lambda_k: f64) -> Option<f64> {
    if !(lambda_k > 0.0) {
        return None;
    }
    log_floor(n, epsilon_log2_argument(n, v, lambda_k)).map(|t| 1.0 / t as f64)
}

/// Θ(t) = 1 for t > 0, else 0.
pub fn heaviside(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// 3⁻⁴ 2^{3−n} π² / ((n+2) B_n^{2/n}).
pub fn theorem1_constant(n: usize) -> f64 {
    let nf = n as f64;
    PI * PI * 2f64.powi(3 - n as i32) / (81.0 * (nf + 2.0) * ball(n).powf(2.0 / nf))
}

/// π / (3⁴ 2^{n−1} (n+2) B_n^{1/n}).
pub fn corollary1_constant(n: usize) -> f64 {
    let nf = n as f64;
    PI / (81.0 * 2f64.powi(n as i32 - 1) * (nf + 2.0) * ball(n).powf(1.0 / nf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Terms {
    pub leading: f64,
    pub second: f64,
    pub theta: bool,
    pub epsilon: Option<f64>,
    pub lambda0: f64,
}

impl Theorem1Terms {
    pub fn total(&self) -> f64 {
        self.leading + self.second
    }
}

pub fn theorem1_terms(k: usize, lambda_k: f64, d: &DomainSummary) -> Result<Theorem1Terms> {
    if k == 0 || !(lambda_k > 0.0) {
        return Err(Error::Domain(format!(
            "theorem bound needs k ≥ 1 and λ_k > 0 (got k = {k}, λ_k = {lambda_k})"
        )));
    }
    let n = d.n;
    let nf = n as f64;
    let l0 = lambda0(n, d.volume, d.min_d, d.min_area);
    let leading = weyl_average(k, n, d.volume);
    let theta = heaviside(lambda_k - l0) == 1.0;
    if !theta {
        return Ok(Theorem1Terms {
            leading,
            second: 0.0,
            theta,
            epsilon: epsilon_k(n, d.volume, lambda_k),
            lambda0: l0,
        });
    }
    let Some(eps) = epsilon_k(n, d.volume, lambda_k) else {
        return Err(Error::Consistency(format!(
            "Θ = 1 but ε is undefined at λ_k = {lambda_k} (λ₀ = {l0}, n = {n}, V = {})",
            d.volume
        )));
    };
    let v = d.volume;
    let ln_second = theorem1_constant(n).ln() + d.surface_area.ln()
        - (1.0 + 2.0 / nf) * v.ln()
        - nf * eps * (v * lambda_k / alpha1(n)).ln()
        + 2.0 / nf * (k as f64).ln()
        - 0.5 * lambda_k.ln();
    Ok(Theorem1Terms {
        leading,
        second: ln_second.exp(),
        theta,
        epsilon: Some(eps),
        lambda0: l0,
    })
}

pub fn theorem1_bound(k: usize, lambda_k: f64, d: &DomainSummary) -> Result<f64> {
    theorem1_terms(k, lambda_k, d).map(|t| t.total())
}

/// The ε of the corollary, with λ_k replaced by its Li–Yau value.
pub fn corollary1_epsilon(k: usize, d: &DomainSummary) -> Option<f64> {
    let n = d.n;
    let nf = n as f64;
    let l = (nf - 1.0) * (d.volume / alpha1(n)).log2()
        + 0.5 * nf * (4.0 * nf * PI * PI / (nf + 2.0)).log2()
        + (k as f64 / (d.ball_volume * d.volume)).log2();
    log_floor(n, l).map(|t| 1.0 / t as f64)
}

/// Corollary bound, `None` while its ε is undefined.
pub fn corollary1_bound(k: usize, d: &DomainSummary) -> Option<f64> {
    let eps = corollary1_epsilon(k, d)?;
    let nf = d.n as f64;
    let ln_second = corollary1_constant(d.n).ln() + d.surface_area.ln()
        - (1.0 + 1.0 / nf) * d.volume.ln()
        + (1.0 / nf - 2.0 * eps) * (k as f64).ln();
    Some(weyl_average(k, d.n, d.volume) + ln_second.exp())
}

/// Smallest k at which the corollary applies.
pub fn corollary1_first_k(d: &DomainSummary) -> usize {
    let (mut lo, mut hi) = (1usize, 2usize);
    while corollary1_epsilon(hi, d).is_none() {
        lo = hi;
        hi *= 2;
    }
    if corollary1_epsilon(lo, d).is_some() {
        return lo;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if corollary1_epsilon(mid, d).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Polya,
    LiYauAverage,
    LiYauKth,
    Melas,
    Theorem1,
    Corollary1,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Polya => "polya",
            BoundKind::LiYauAverage => "liyau_avg",
            BoundKind::LiYauKth => "liyau_kth",
            BoundKind::Melas => "melas",
            BoundKind::Theorem1 => "theorem1",
            BoundKind::Corollary1 => "corollary1",
        }
    }

    /// Whether a violation contradicts a proved result for this domain.
    pub fn is_theorem(&self, tiling: bool) -> bool {
        !matches!(self, BoundKind::Polya) || tiling
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub melas_constant: f64,
    pub tiling: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub lambda_k: f64,
    pub avg_k: f64,
    pub weyl_kth: f64,
    pub weyl_avg: f64,
    pub polya: f64,
    pub liyau_avg: f64,
    pub liyau_kth: f64,
    pub melas: f64,
    pub theorem1: f64,
    pub corollary1: Option<f64>,
    pub theta: bool,
    pub epsilon: Option<f64>,
    pub violations: Vec<BoundKind>,
}

fn exceeds(bound: f64, measured: f64) -> bool {
    bound > measured + VIOLATION_SLACK * measured.abs()
}

/// Evaluates every bound for k = 1..=k_max and flags violations.
pub fn verify(
    s: &Spectrum,
    d: &DomainSummary,
    k_max: usize,
    config: &VerifyConfig,
) -> Result<Vec<BoundReport>> {
    if k_max == 0 || k_max > s.len() {
        return Err(Error::Range {
            lambda: k_max as f64,
            limit: s.len() as f64,
        });
    }
    melas_bound(1, d.n, d.volume, d.inertia, config.melas_constant)?;
    (1..=k_max)
        .into_par_iter()
        .map(|k| report_for(s, d, k, config))
        .collect()
}

fn report_for(s: &Spectrum, d: &DomainSummary, k: usize, config: &VerifyConfig) -> Result<BoundReport> {
    let (n, v) = (d.n, d.volume);
    let lambda_k = s.lambda(k).expect("k within range");
    let avg_k = eigenvalue_average(s, k)?;
    let polya = polya_bound(k, n, v);
    let liyau_avg = liyau_average_bound(k, n, v);
    let liyau_kth = liyau_kth_bound(k, n, v);
    let melas = melas_bound(k, n, v, d.inertia, config.melas_constant)?;
    let t1 = theorem1_terms(k, lambda_k, d)?;
    let corollary1 = corollary1_bound(k, d);
    let mut violations = Vec::new();
    let checks = [
        (BoundKind::Polya, polya, lambda_k),
        (BoundKind::LiYauAverage, liyau_avg, avg_k),
        (BoundKind::LiYauKth, liyau_kth, lambda_k),
        (BoundKind::Melas, melas, avg_k),
        (BoundKind::Theorem1, t1.total(), avg_k),
    ];
    for (kind, bound, measured) in checks {
        if exceeds(bound, measured) {
            violations.push(kind);
        }
    }
    if let Some(c) = corollary1 {
        if exceeds(c, avg_k) {
            violations.push(BoundKind::Corollary1);
        }
    }
    Ok(BoundReport {
        k,
        lambda_k,
        avg_k,
        weyl_kth: weyl_kth(k, n, v),
        weyl_avg: weyl_average(k, n, v),
        polya,
        liyau_avg,
        liyau_kth,
        melas,
        theorem1: t1.total(),
        corollary1,
        theta: t1.theta,
        epsilon: if t1.theta { t1.epsilon } else { None },
        violations,
    })
}
