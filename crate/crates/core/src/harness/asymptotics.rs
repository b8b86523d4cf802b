use std::path::Path;

use crate::bounds::weyl_average;
use crate::error::{Error, Result};
use crate::spectra::{eigenvalue_average, exact_spectrum};

use super::load_domain;

/// Smallest k_max accepted by [`run_asymptotics`].
pub const ASYMPTOTICS_MIN_K: usize = 100;

/// Least-squares fit of log r_k = log c + slope·log k over
/// k ∈ [k_max/10, k_max], where r_k is the eigenvalue average minus the
/// leading Weyl average.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub domain_id: String,
    pub n: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub slope: f64,
    pub coefficient: f64,
    /// c·V^{1+1/n}/A, the two-term constant implied by the fit.
    pub implied_c_n: f64,
}

impl AsymptoticsReport {
    pub fn summary(&self) -> String {
        format!(
            "domain={} n={} k_range={}:{} slope={} coefficient={} implied_c_n={}",
            self.domain_id,
            self.n,
            self.k_min,
            self.k_max,
            self.slope,
            self.coefficient,
            self.implied_c_n
        )
    }
}

pub fn run_asymptotics(domain_file: &Path, k_max: usize) -> Result<AsymptoticsReport> {
    if k_max < ASYMPTOTICS_MIN_K {
        return Err(Error::Config(format!(
            "asymptotics needs k_max ≥ {ASYMPTOTICS_MIN_K}, got {k_max}"
        )));
    }
    let p = load_domain(domain_file)?;
    let s = exact_spectrum(&p, k_max)?;
    let (n, v, a) = (p.dimension(), p.volume(), p.surface_area());
    let k_min = (k_max / 10).max(1);
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut m = 0.0;
    for k in k_min..=k_max {
        let r = eigenvalue_average(&s, k)? - weyl_average(k, n, v);
        if !(r > 0.0) {
            return Err(Error::Consistency(format!(
                "eigenvalue average at k = {k} does not exceed the Weyl average (gap {r})"
            )));
        }
        let (x, y) = ((k as f64).ln(), r.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1.0;
    }
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let coefficient = ((sy - slope * sx) / m).exp();
    Ok(AsymptoticsReport {
        domain_id: p.id().to_string(),
        n,
        k_min,
        k_max,
        slope,
        coefficient,
        implied_c_n: coefficient * v.powf(1.0 + 1.0 / n as f64) / a,
    })
}
