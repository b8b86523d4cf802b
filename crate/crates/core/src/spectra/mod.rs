//! Dirichlet spectra: exact oracles, finite-difference assembly and the
//! sparse eigensolver, plus counting and averaging.

mod eigen;
mod exact;
mod grid;

pub use eigen::{fd_spectrum, fd_spectrum_with, SolverOptions};
pub use exact::{box_spectrum_exact, equilateral_triangle_spectrum_exact, MAX_LATTICE_POINTS};
pub use grid::{fd_assemble, fd_assemble_with, AssemblyOptions, GridOperator, Stencil};

use crate::error::{Error, Result};
use crate::geometry::Polytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactBox,
    ExactTriangle,
    FiniteDifference,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactBox => "exact_box",
            Method::ExactTriangle => "exact_triangle",
            Method::FiniteDifference => "finite_difference",
        }
    }
}

/// Sorted Dirichlet eigenvalues, repeated by multiplicity.
///
/// `certified_limit` is the largest λ for which the list is known to hold
/// every eigenvalue `≤ λ`; counting beyond it is refused.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    prefix: Vec<f64>,
    method: Method,
    resolution: Option<f64>,
    domain_id: String,
    certified_limit: f64,
}

impl Spectrum {
    pub fn new(
        eigenvalues: Vec<f64>,
        method: Method,
        resolution: Option<f64>,
        domain_id: impl Into<String>,
        certified_limit: f64,
    ) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Domain("a spectrum needs at least one eigenvalue".into()));
        }
        if let Some(bad) = eigenvalues.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Domain(format!("eigenvalue {bad} is not positive and finite")));
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("eigenvalues must be non-decreasing".into()));
        }
        let mut prefix = Vec::with_capacity(eigenvalues.len() + 1);
        let mut acc = 0.0;
        let mut comp = 0.0;
        prefix.push(0.0);
        for &x in &eigenvalues {
            let t = acc + x;
            comp += if acc.abs() >= x.abs() { (acc - t) + x } else { (x - t) + acc };
            acc = t;
            prefix.push(acc + comp);
        }
        Ok(Self {
            eigenvalues,
            prefix,
            method,
            resolution,
            domain_id: domain_id.into(),
            certified_limit,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// λ_k, 1-based.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.eigenvalues.get(i)).copied()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn resolution(&self) -> Option<f64> {
        self.resolution
    }

    pub fn domain_id(&self) -> &str {
        &self.domain_id
    }

    pub fn certified_limit(&self) -> f64 {
        self.certified_limit
    }

    pub fn with_domain_id(mut self, id: impl Into<String>) -> Self {
        self.domain_id = id.into();
        self
    }

    /// Copy with λ_1 multiplied by `factor` (fault injection).
    pub fn with_scaled_first(&self, factor: f64) -> Result<Self> {
        let mut values = self.eigenvalues.clone();
        values[0] *= factor;
        values.sort_by(f64::total_cmp);
        Spectrum::new(
            values,
            self.method,
            self.resolution,
            self.domain_id.clone(),
            self.certified_limit,
        )
    }
}

/// N(λ) = #{ j : λ_j ≤ λ }.
pub fn counting_function(s: &Spectrum, lambda: f64) -> Result<usize> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("counting function needs λ ≥ 0, got {lambda}")));
    }
    if lambda > s.certified_limit {
        return Err(Error::Range {
            lambda,
            limit: s.certified_limit,
        });
    }
    Ok(s.eigenvalues.partition_point(|&x| x <= lambda))
}

/// (1/k) Σ_{j ≤ k} λ_j.
pub fn eigenvalue_average(s: &Spectrum, k: usize) -> Result<f64> {
    if k == 0 || k > s.len() {
        return Err(Error::Range {
            lambda: k as f64,
            limit: s.len() as f64,
        });
    }
    Ok(s.prefix[k] / k as f64)
}

/// Per-index Richardson combination `(2^order λ(h/2) − λ(h)) / (2^order − 1)`.
pub fn richardson_extrapolate(coarse: &Spectrum, fine: &Spectrum, order: u32) -> Result<Spectrum> {
    if coarse.domain_id != fine.domain_id {
        return Err(Error::Domain(format!(
            "Richardson extrapolation across domains `{}` and `{}`",
            coarse.domain_id, fine.domain_id
        )));
    }
    if coarse.len() != fine.len() {
        return Err(Error::Domain(format!(
            "Richardson extrapolation needs equal counts, got {} and {}",
            coarse.len(),
            fine.len()
        )));
    }
    if let (Some(h), Some(h2)) = (coarse.resolution, fine.resolution) {
        if (h - 2.0 * h2).abs() > 1e-12 * h {
            return Err(Error::Domain(format!(
                "Richardson extrapolation needs resolutions h and h/2, got {h} and {h2}"
            )));
        }
    }
    if order == 0 {
        return Err(Error::Domain("Richardson order must be at least 1".into()));
    }
    let w = 2f64.powi(order as i32);
    let mut values: Vec<f64> = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(c, f)| if c == f { *c } else { (w * f - c) / (w - 1.0) })
        .collect();
    values.sort_by(f64::total_cmp);
    let limit = values.last().copied().unwrap_or(0.0);
    Spectrum::new(values, fine.method, fine.resolution, fine.domain_id.clone(), limit)
}

/// Side length if `p` is an equilateral triangle.
pub fn equilateral_side(p: &Polytope) -> Option<f64> {
    if p.dimension() != 2 || p.kind() != crate::geometry::PolytopeKind::General {
        return None;
    }
    let a = p.face_areas();
    if a.len() != 3 {
        return None;
    }
    let s = a[0];
    a.iter().all(|x| (x - s).abs() <= 1e-12 * s).then_some(s)
}

/// Exact spectrum of a box or an equilateral triangle.
pub fn exact_spectrum(p: &Polytope, count: usize) -> Result<Spectrum> {
    let s = if let Some(l) = p.box_lengths() {
        box_spectrum_exact(l, count)?
    } else if let Some(side) = equilateral_side(p) {
        equilateral_triangle_spectrum_exact(side, count)?
    } else {
        return Err(Error::Config(format!(
            "no exact spectrum is available for `{}`; only boxes and equilateral triangles have one",
            p.id()
        )));
    };
    Ok(s.with_domain_id(p.id()))
}
