//! Constants and auxiliary lemmas behind the two-term lower bound, in a form
//! that can be evaluated and audited numerically.
//!
//! Quantities that overflow doubles for moderate `p` (the `D_q`, `β_q²` and
//! the powers of `Vλ/α₁`) are carried as base-2 logarithms.

use std::f64::consts::PI;

use crate::bounds::{alpha1, epsilon_log2_argument, lambda0, DomainSummary};
use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;

/// Grid intervals used by [`derivative_dichotomy_check`] before refinement.
pub const DICHOTOMY_GRID: usize = 10_000;
/// Refinement factor applied before a dichotomy failure is confirmed.
pub const DICHOTOMY_REFINEMENT: usize = 10;

fn ball(n: usize) -> Result<f64> {
    unit_ball_volume(n)
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_p(p: u64) -> Result<()> {
    if p == 0 {
        return Err(Error::Domain("p must be a positive integer".into()));
    }
    Ok(())
}

/// log₂(2^a + 2^b).
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// g(x) = 1 − 6x⁴ + 8x⁶ − 3x⁸ with its first two derivatives.
pub fn g_eval(x: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("g is defined on [0, 1], got x = {x}")));
    }
    let x2 = x * x;
    let value = 1.0 + x2 * x2 * (-6.0 + x2 * (8.0 - 3.0 * x2));
    let d1 = x2 * x * (-24.0 + x2 * (48.0 - 24.0 * x2));
    let d2 = x2 * (-72.0 + x2 * (240.0 - 168.0 * x2));
    Ok((value, d1, d2))
}

/// The even cut-off v_{q,p}: 1 on |t| ≤ (2p−q)/(2p), g(2p|t| − 2p + q) on the
/// next interval of length 1/(2p), and 0 beyond.
pub fn v_eval(q: u64, p: u64, t: f64) -> Result<(f64, f64, f64)> {
    check_p(p)?;
    if q >= p {
        return Err(Error::Domain(format!("v_(q,p) needs q < p, got q = {q}, p = {p}")));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("v_(q,p) needs a finite argument, got {t}")));
    }
    let tp = 2.0 * p as f64;
    let s = t.abs();
    let x = tp * s - tp + q as f64;
    if x <= 0.0 {
        return Ok((1.0, 0.0, 0.0));
    }
    if x >= 1.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let (g, g1, g2) = g_eval(x)?;
    Ok((g, tp * t.signum() * g1, tp * tp * g2))
}

/// W_{q,p,λ}(x) = Π v_{q,p}(√λ x_i), returned as (W, |∇W|, ΔW).
pub fn w_eval(q: u64, p: u64, lambda: f64, x: &[f64]) -> Result<(f64, f64, f64)> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("W needs λ > 0, got {lambda}")));
    }
    if x.is_empty() {
        return Err(Error::Domain("W needs a point of dimension at least 1".into()));
    }
    let r = lambda.sqrt();
    let factors = x
        .iter()
        .map(|&xi| v_eval(q, p, r * xi))
        .collect::<Result<Vec<_>>>()?;
    let n = factors.len();
    // others[i] = Π_{j≠i} v_j, via prefix and suffix products.
    let mut others = vec![1.0; n];
    let mut acc = 1.0;
    for i in 0..n {
        others[i] = acc;
        acc *= factors[i].0;
    }
    let value = acc;
    acc = 1.0;
    for i in (0..n).rev() {
        others[i] *= acc;
        acc *= factors[i].0;
    }
    let mut grad2 = 0.0;
    let mut laplacian = 0.0;
    for (f, o) in factors.iter().zip(&others) {
        let gi = r * f.1 * o;
        grad2 += gi * gi;
        laplacian += lambda * f.2 * o;
    }
    Ok((value, grad2.sqrt(), laplacian))
}

/// log₂ D_q for q = 0, …, p+1, where D_0 = 1,
/// D_1 = 3(1 + 44²n²p⁴ + 4·5²np²) and
/// D_q = 3(1 + 44²n²p⁴) D_{q−2} + 12·5²np² D_{q−1}.
pub fn d_sequence(n: usize, p: u64) -> Result<Vec<f64>> {
    check_dimension(n)?;
    check_p(p)?;
    let nf = n as f64;
    let pf = p as f64;
    let la = (3.0 * (1.0 + 1936.0 * nf * nf * pf.powi(4))).log2();
    let lb = (300.0 * nf * pf * pf).log2();
    // D_{−1} = 1 reproduces D_1 from the recursion.
    let mut prev = 0.0;
    let mut cur = 0.0;
    let mut out = Vec::with_capacity(p as usize + 2);
    out.push(cur);
    for _ in 1..=p + 1 {
        let next = log2_add(la + prev, lb + cur);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// D_p < 2^{(2n+18)p²}.
pub fn d_bound_check(n: usize, p: u64) -> Result<bool> {
    let d = d_sequence(n, p)?;
    let pf = p as f64;
    Ok(d[p as usize] < (2.0 * n as f64 + 18.0) * pf * pf)
}

/// log₂ β_q² with β_q² = ((n+2)/(4nπ²))^{n/2} B_n V² D_{q−1}, q ∈ {p, p+1}.
pub fn beta_squared_log2(q: u64, n: usize, v: f64, p: u64) -> Result<f64> {
    check_dimension(n)?;
    check_p(p)?;
    if q != p && q != p + 1 {
        return Err(Error::Domain(format!("β_q² needs q ∈ {{p, p+1}}, got q = {q}, p = {p}")));
    }
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Domain(format!("volume must be positive, got {v}")));
    }
    let nf = n as f64;
    let d = d_sequence(n, p)?;
    Ok(0.5 * nf * ((nf + 2.0) / (4.0 * nf * PI * PI)).log2()
        + ball(n)?.log2()
        + 2.0 * v.log2()
        + d[q as usize - 1])
}

/// p = ⌊√(log₂((V/α₁)^{n−1} λ^{n/2}) / (n+12))⌋, undefined below 1.
pub fn choose_p(n: usize, v: f64, lambda: f64) -> Option<u64> {
    if n < 2 || !(lambda > 0.0) || !(v > 0.0) {
        return None;
    }
    let l = epsilon_log2_argument(n, v, lambda);
    if !(l > 0.0) {
        return None;
    }
    let p = (l / (n as f64 + 12.0)).sqrt().floor();
    (p >= 1.0).then_some(p as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalBranch {
    /// 2^{−2p−5} λ^{−n/2}.
    Plateau,
    /// 2^{−p−2} 6^{1/(2p)} (β_p² + β_{p+1}²)^{−1/(2p)} λ^{−n/2−n/(2p)}.
    Derivative,
}

/// Local L² lower bound on one rectangle, all values as base-2 logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLower {
    pub log2_value: f64,
    pub log2_plateau: f64,
    pub log2_derivative: f64,
    pub active: LocalBranch,
}

impl LocalLower {
    pub fn value(&self) -> f64 {
        self.log2_value.exp2()
    }
}

/// (1/(9·2^{n−1})) · min{plateau, derivative}.
pub fn local_lower(n: usize, v: f64, lambda: f64, p: u64) -> Result<LocalLower> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let nf = n as f64;
    let pf = p as f64;
    let bp = beta_squared_log2(p, n, v, p)?;
    let bp1 = beta_squared_log2(p + 1, n, v, p)?;
    let ll = lambda.log2();
    let plateau = -2.0 * pf - 5.0 - 0.5 * nf * ll;
    let derivative = -pf - 2.0 + 6f64.log2() / (2.0 * pf)
        - log2_add(bp, bp1) / (2.0 * pf)
        - (0.5 * nf + nf / (2.0 * pf)) * ll;
    let (m, active) = if plateau <= derivative {
        (plateau, LocalBranch::Plateau)
    } else {
        (derivative, LocalBranch::Derivative)
    };
    Ok(LocalLower {
        log2_value: m - 9f64.log2() - (nf - 1.0),
        log2_plateau: plateau,
        log2_derivative: derivative,
        active,
    })
}

/// log₂ of (1/(9·2^{n−1})) (V/α₁)^{n/2} (Vλ/α₁)^{−n/2−n/p}, the simplified
/// per-rectangle bound valid once p is chosen from λ above λ₀.
pub fn thin_lower_log2(n: usize, v: f64, lambda: f64, p: u64) -> Result<f64> {
    check_dimension(n)?;
    check_p(p)?;
    let nf = n as f64;
    let a1 = alpha1(n);
    Ok(-9f64.log2() - (nf - 1.0) + 0.5 * nf * (v / a1).log2()
        - (0.5 * nf + nf / p as f64) * (v * lambda / a1).log2())
}

/// Upper bound on ∫F for 0 ≤ F ≤ M₁ and ∫|ξ|²F ≤ M₂:
/// ((n+2)/n)^{n/(n+2)} M₂^{n/(n+2)} (M₁B_n)^{2/(n+2)}.
pub fn liyau_functional_bound(m1: f64, m2: f64, n: usize) -> Result<f64> {
    if !(m1 > 0.0 && m2 > 0.0 && m1.is_finite() && m2.is_finite()) {
        return Err(Error::Domain(format!("M1 and M2 must be positive, got {m1}, {m2}")));
    }
    let nf = n as f64;
    let b = ball(n)?;
    let e = nf / (nf + 2.0);
    Ok(((nf + 2.0) / nf).powf(e) * m2.powf(e) * (m1 * b).powf(2.0 / (nf + 2.0)))
}

/// Smallest second moment compatible with mass `mass` and ceiling `m1`:
/// (n/(n+2)) mass^{(n+2)/n} (M₁B_n)^{−2/n}.
pub fn liyau_second_moment_lower(mass: f64, m1: f64, n: usize) -> Result<f64> {
    if !(m1 > 0.0 && mass > 0.0 && m1.is_finite() && mass.is_finite()) {
        return Err(Error::Domain(format!("mass and M1 must be positive, got {mass}, {m1}")));
    }
    let nf = n as f64;
    let b = ball(n)?;
    Ok(nf / (nf + 2.0) * mass.powf((nf + 2.0) / nf) * (m1 * b).powf(-2.0 / nf))
}

/// (∫F, ∫|ξ|²F) for F = M₁·1_{|ξ| ≤ R}.
pub fn ball_indicator_moments(m1: f64, radius: f64, n: usize) -> Result<(f64, f64)> {
    if !(m1 > 0.0 && radius > 0.0) {
        return Err(Error::Domain(format!("M1 and R must be positive, got {m1}, {radius}")));
    }
    let nf = n as f64;
    let mass = m1 * ball(n)? * radius.powi(n as i32);
    Ok((mass, mass * radius * radius * nf / (nf + 2.0)))
}

/// Outcome of the derivative dichotomy on sampled maxima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dichotomy {
    pub m0: f64,
    pub m1: f64,
    pub mp: f64,
    /// m₁ ≤ 2^{p−1} m_p^{1/p} m₀^{1−1/p}.
    pub interpolation: bool,
    /// m₁ < 4^{p+1} √λ m₀.
    pub oscillation: bool,
    /// Neither inequality held, on the base grid and after refinement.
    pub violation: bool,
    /// Grid intervals used for the reported maxima.
    pub intervals: usize,
}

fn dichotomy_inequalities(m0: f64, m1: f64, mp: f64, p: u64, lambda: f64) -> (bool, bool) {
    let pf = p as f64;
    let interp = m1 <= 2f64.powf(pf - 1.0) * mp.powf(1.0 / pf) * m0.powf(1.0 - 1.0 / pf);
    let osc = m1 < 4f64.powf(pf + 1.0) * lambda.sqrt() * m0;
    (interp, osc)
}

fn grid_maxima<F: Fn(u64, f64) -> f64>(f: &F, p: u64, lambda: f64, intervals: usize) -> [f64; 3] {
    let len = 0.5 / lambda.sqrt();
    let mut m = [0.0f64; 3];
    for i in 0..=intervals {
        let t = len * i as f64 / intervals as f64;
        for (slot, q) in [0, 1, p].into_iter().enumerate() {
            m[slot] = m[slot].max(f(q, t).abs());
        }
    }
    m
}

/// Checks that one of the two derivative inequalities holds for `f` on
/// [0, 1/(2√λ)], where `f(q, t)` returns f^{(q)}(t).
///
/// Maxima are taken over a uniform grid of [`DICHOTOMY_GRID`] intervals; if
/// neither inequality holds there, the grid is refined by
/// [`DICHOTOMY_REFINEMENT`] and only a repeated failure is flagged.
pub fn derivative_dichotomy_check<F: Fn(u64, f64) -> f64>(
    f: F,
    p: u64,
    lambda: f64,
) -> Result<Dichotomy> {
    check_p(p)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let mut intervals = DICHOTOMY_GRID;
    let mut m = grid_maxima(&f, p, lambda, intervals);
    if !(m[2] > 0.0) {
        return Err(Error::Precondition(format!(
            "f^({p}) vanishes on the sample grid (max |f^({p})| = {})",
            m[2]
        )));
    }
    let (mut a, mut b) = dichotomy_inequalities(m[0], m[1], m[2], p, lambda);
    if !(a || b) {
        intervals *= DICHOTOMY_REFINEMENT;
        m = grid_maxima(&f, p, lambda, intervals);
        (a, b) = dichotomy_inequalities(m[0], m[1], m[2], p, lambda);
    }
    Ok(Dichotomy {
        m0: m[0],
        m1: m[1],
        mp: m[2],
        interpolation: a,
        oscillation: b,
        violation: !(a || b),
        intervals,
    })
}

/// N_i = ⌊A_i λ^{(n−1)/2} / 6⌋, saturating at `u64::MAX`.
pub fn rectangle_count(area: f64, lambda: f64, n: usize) -> Result<u64> {
    check_dimension(n)?;
    if !(area > 0.0 && lambda > 0.0) {
        return Err(Error::Domain(format!("area and λ must be positive, got {area}, {lambda}")));
    }
    let x = (area * lambda.powf(0.5 * (n as f64 - 1.0)) / 6.0).floor();
    Ok(if x >= u64::MAX as f64 { u64::MAX } else { x as u64 })
}

/// Smallest λ with 1/√λ ≤ min_d/(2√n), namely 4n/min_d².
pub fn admissible_lambda_threshold(min_d: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    if !(min_d.is_finite() && min_d > 0.0) {
        return Err(Error::Domain(format!("min_d must be positive, got {min_d}")));
    }
    Ok(4.0 * n as f64 / (min_d * min_d))
}

/// α₂ = α₁^{−1/2} / (9²·2ⁿ).
pub fn alpha2(n: usize) -> f64 {
    alpha1(n).powf(-0.5) / (81.0 * 2f64.powi(n as i32))
}

/// M(λ) = prefactor·(1 − deficit) with prefactor V/(2π)ⁿ and
/// deficit α₂V^{−1/2}A(Vλ/α₁)^{−1/2−n/p}Θ(λ−λ₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLambda {
    pub value: f64,
    pub prefactor: f64,
    pub deficit: f64,
    pub theta: bool,
}

pub fn m_lambda(lambda: f64, d: &DomainSummary, p: u64) -> Result<MLambda> {
    check_p(p)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let n = d.n;
    let nf = n as f64;
    let v = d.volume;
    let prefactor = v / (2.0 * PI).powi(n as i32);
    let l0 = lambda0(n, v, d.min_d, d.min_area);
    let theta = lambda > l0;
    let deficit = if theta {
        let ln = alpha2(n).ln() - 0.5 * v.ln() + d.surface_area.ln()
            - (0.5 + nf / p as f64) * (v * lambda / alpha1(n)).ln();
        ln.exp()
    } else {
        0.0
    };
    if !(deficit < 1.0) {
        return Err(Error::Consistency(format!(
            "M(λ) bracket 1 − {deficit} is not positive at λ = {lambda} (p = {p}, λ₀ = {l0}, \
             n = {n}, V = {v}, A = {})",
            d.surface_area
        )));
    }
    Ok(MLambda {
        value: prefactor * (1.0 - deficit),
        prefactor,
        deficit,
        theta,
    })
}

/// Proof constants for a domain at a fixed p.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofConstants {
    pub n: usize,
    pub p: u64,
    /// log₂ D_0, …, log₂ D_{p+1}.
    pub d_log2: Vec<f64>,
    pub beta_p_sq_log2: f64,
    pub beta_p1_sq_log2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda0: f64,
    pub epsilon: f64,
}

impl ProofConstants {
    pub fn new(d: &DomainSummary, p: u64) -> Result<Self> {
        let n = d.n;
        let c = Self {
            n,
            p,
            d_log2: d_sequence(n, p)?,
            beta_p_sq_log2: beta_squared_log2(p, n, d.volume, p)?,
            beta_p1_sq_log2: beta_squared_log2(p + 1, n, d.volume, p)?,
            alpha1: alpha1(n),
            alpha2: alpha2(n),
            lambda0: lambda0(n, d.volume, d.min_d, d.min_area),
            epsilon: 1.0 / p as f64,
        };
        c.validate()?;
        Ok(c)
    }

    /// Constants at the p chosen from `lambda`.
    pub fn at(d: &DomainSummary, lambda: f64) -> Result<Self> {
        let p = choose_p(d.n, d.volume, lambda).ok_or_else(|| {
            Error::Precondition(format!("p is undefined at λ = {lambda} (below 1)"))
        })?;
        Self::new(d, p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_log2.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Consistency("log₂ D_q is not strictly increasing".into()));
        }
        let expected = self.alpha1.powf(-0.5) / (81.0 * 2f64.powi(self.n as i32));
        if (self.alpha2 - expected).abs() > 1e-14 * expected {
            return Err(Error::Consistency(format!(
                "α₂ = {} differs from α₁^(−1/2)/(81·2^n) = {expected}",
                self.alpha2
            )));
        }
        for (name, x) in [
            ("α₁", self.alpha1),
            ("α₂", self.alpha2),
            ("λ₀", self.lambda0),
            ("ε", self.epsilon),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Consistency(format!("{name} = {x} is not positive")));
            }
        }
        Ok(())
    }
}

/// The two-term average bound rebuilt from M(λ) and the Li–Yau inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    /// (1/k)·(n/(n+2)) B_n^{−2/n} k^{(n+2)/n} (V/(2π)ⁿ)^{−2/n}.
    pub leading: f64,
    /// leading·(2/n)·deficit, from [1 − x]^{−2/n} ≥ 1 + (2/n)x.
    pub second: f64,
    /// leading·[1 − x]^{−2/n}, before linearization.
    pub unlinearized: f64,
    pub p: Option<u64>,
    pub theta: bool,
}

impl Reconstruction {
    pub fn total(&self) -> f64 {
        self.leading + self.second
    }
}

/// Rebuilds the bound on (1/k)Σλ_j at λ = λ_k from M(λ_k), the Li–Yau
/// functional inequality and the linearization of the bracket.
pub fn reconstruct_theorem1(k: usize, lambda_k: f64, d: &DomainSummary) -> Result<Reconstruction> {
    if k == 0 || !(lambda_k.is_finite() && lambda_k > 0.0) {
        return Err(Error::Domain(format!(
            "reconstruction needs k ≥ 1 and λ_k > 0 (got k = {k}, λ_k = {lambda_k})"
        )));
    }
    let n = d.n;
    let nf = n as f64;
    let kf = k as f64;
    let l0 = lambda0(n, d.volume, d.min_d, d.min_area);
    let theta = lambda_k > l0;
    let p = if theta {
        Some(choose_p(n, d.volume, lambda_k).ok_or_else(|| {
            Error::Consistency(format!("λ_k = {lambda_k} exceeds λ₀ = {l0} but p is undefined"))
        })?)
    } else {
        None
    };
    let m = m_lambda(lambda_k, d, p.unwrap_or(1))?;
    let leading = liyau_second_moment_lower(kf, m.prefactor, n)? / kf;
    let second = leading * (2.0 / nf) * m.deficit;
    let unlinearized = leading * (-(2.0 / nf) * (-m.deficit).ln_1p()).exp();
    Ok(Reconstruction {
        leading,
        second,
        unlinearized,
        p,
        theta,
    })
}
