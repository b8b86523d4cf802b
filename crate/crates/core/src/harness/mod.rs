//! Verification campaigns: load a domain, compute its spectrum, evaluate
//! every bound and write the CSV report.

mod asymptotics;
mod audit;
mod csv;

pub use asymptotics::{run_asymptotics, AsymptoticsReport, ASYMPTOTICS_MIN_K};
pub use audit::{run_proofkit_audit, AuditCheck, AuditConfig, AuditReport};
pub use csv::{write_report, CSV_HEADER};

use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{lambda0, verify, BoundKind, BoundReport, DomainSummary, VerifyConfig};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::spectra::{exact_spectrum, fd_assemble, fd_spectrum, Spectrum, Stencil};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "SPECTRAL_BOUNDS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    Exact,
    Fd,
}

impl FromStr for SpectrumMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "fd" => Ok(Self::Fd),
            other => Err(Error::Config(format!("unknown method `{other}` (expected exact or fd)"))),
        }
    }
}

impl fmt::Display for SpectrumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Fd => "fd",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub domain_file: PathBuf,
    pub method: SpectrumMethod,
    pub h: Option<f64>,
    pub k_max: usize,
    pub melas_constant: f64,
    pub fraction: f64,
    pub seed: u64,
    pub output: PathBuf,
    pub tiling: bool,
    /// Halves λ_1 before verification. Test-only.
    pub inject_fault: bool,
}

impl CampaignConfig {
    pub fn new(domain_file: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        Self {
            domain_file: domain_file.into(),
            method: SpectrumMethod::Exact,
            h: None,
            k_max: 1000,
            melas_constant: 1e-3,
            fraction: 1.0 / 3.0,
            seed: 0,
            output: output.into(),
            tiling: false,
            inject_fault: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::Config("k_max must be at least 1".into()));
        }
        if !(self.melas_constant.is_finite() && self.melas_constant > 0.0) {
            return Err(Error::Config(format!(
                "melas_constant must be positive, got {}",
                self.melas_constant
            )));
        }
        if !(self.fraction > 0.0 && self.fraction < 1.0) {
            return Err(Error::Config(format!(
                "fraction must lie in (0, 1), got {}",
                self.fraction
            )));
        }
        match (self.method, self.h) {
            (SpectrumMethod::Fd, None) => {
                Err(Error::Config("method fd requires a grid spacing h".into()))
            }
            (SpectrumMethod::Fd, Some(h)) if !(h.is_finite() && h > 0.0) => {
                Err(Error::Config(format!("grid spacing h must be positive, got {h}")))
            }
            _ => Ok(()),
        }
    }
}

/// Result of one verification campaign.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub domain_id: String,
    pub lambda0: f64,
    /// Smallest k ≤ k_max with λ_k > λ₀.
    pub first_theta_k: Option<usize>,
    /// Rows with a violation of a proved bound.
    pub theorem_violations: usize,
    /// Rows whose only violations are of conjectural bounds.
    pub conjectural_violations: usize,
    pub rows: usize,
    pub output: PathBuf,
}

impl VerifyOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.theorem_violations > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        }
    }

    pub fn summary(&self) -> String {
        let first = self
            .first_theta_k
            .map_or_else(|| "never within k_max".to_string(), |k| k.to_string());
        format!(
            "domain={} lambda0={} first_theta_k={} violations={} conjectural_violations={} rows={}",
            self.domain_id,
            self.lambda0,
            first,
            self.theorem_violations,
            self.conjectural_violations,
            self.rows
        )
    }
}

pub fn load_domain(path: &Path) -> Result<Polytope> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read: {e}")))?;
    Polytope::from_json(&text)
}

/// Spectrum with at least `k_max` eigenvalues by the configured method.
pub fn compute_spectrum(p: &Polytope, config: &CampaignConfig) -> Result<Spectrum> {
    let s = match config.method {
        SpectrumMethod::Exact => exact_spectrum(p, config.k_max)?,
        SpectrumMethod::Fd => {
            let h = config
                .h
                .ok_or_else(|| Error::Config("method fd requires a grid spacing h".into()))?;
            let op = fd_assemble(p, h, Stencil::ShortleyWeller)?;
            fd_spectrum(&op, config.k_max, config.seed)?
        }
    };
    if config.inject_fault {
        s.with_scaled_first(0.5)
    } else {
        Ok(s)
    }
}

pub fn first_theta_k(reports: &[BoundReport]) -> Option<usize> {
    reports.iter().find(|r| r.theta).map(|r| r.k)
}

pub fn run_verify(config: &CampaignConfig) -> Result<VerifyOutcome> {
    config.validate()?;
    let p = load_domain(&config.domain_file)?;
    let d = DomainSummary::from_polytope(&p, config.fraction)?;
    let s = compute_spectrum(&p, config)?;
    let tiling = config.tiling || p.is_tiling();
    let vc = VerifyConfig {
        melas_constant: config.melas_constant,
        tiling,
    };
    let reports = verify(&s, &d, config.k_max, &vc)?;
    let file = fs::File::create(&config.output).map_err(|e| {
        Error::Config(format!("cannot create {}: {e}", config.output.display()))
    })?;
    let mut w = std::io::BufWriter::new(file);
    write_report(&mut w, &reports)?;
    std::io::Write::flush(&mut w)?;
    let theorem_violations = reports
        .iter()
        .filter(|r| r.violations.iter().any(|v| v.is_theorem(tiling)))
        .count();
    let conjectural_violations = reports
        .iter()
        .filter(|r| !r.violations.is_empty() && !r.violations.iter().any(|v| v.is_theorem(tiling)))
        .count();
    Ok(VerifyOutcome {
        domain_id: p.id().to_string(),
        lambda0: lambda0(d.n, d.volume, d.min_d, d.min_area),
        first_theta_k: first_theta_k(&reports),
        theorem_violations,
        conjectural_violations,
        rows: reports.len(),
        output: config.output.clone(),
    })
}

/// Runs independent campaigns in parallel; results keep the input order.
pub fn run_campaigns(configs: &[CampaignConfig]) -> Vec<Result<VerifyOutcome>> {
    configs.par_iter().map(run_verify).collect()
}

/// Combined exit status: configuration errors dominate violations.
pub fn combined_exit_code(results: &[Result<VerifyOutcome>]) -> i32 {
    results.iter().fold(EXIT_OK, |acc, r| {
        let code = match r {
            Ok(o) => o.exit_code(),
            Err(_) => EXIT_CONFIG,
        };
        acc.max(code)
    })
}

/// Worker pool sized by [`THREADS_ENV`] when set.
pub fn thread_pool_from_env() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().ok().filter(|&t| t >= 1).ok_or_else(|| {
            Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))
}

/// Parses an inclusive range `a:b`; a single value `a` means `a:a`.
pub fn parse_range<T>(s: &str) -> Result<RangeInclusive<T>>
where
    T: FromStr + PartialOrd + Copy,
{
    let parse = |x: &str| {
        x.trim()
            .parse::<T>()
            .map_err(|_| Error::Config(format!("invalid range bound `{x}` in `{s}`")))
    };
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let a = parse(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(Error::Config(format!("range `{s}` is empty")));
    }
    Ok(a..=b)
}

/// Names of the violated bounds, `;`-separated.
pub fn violation_names(v: &[BoundKind]) -> String {
    v.iter().map(|k| k.name()).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range::<usize>("2:10").unwrap(), 2..=10);
        assert_eq!(parse_range::<u64>("3").unwrap(), 3..=3);
        assert!(parse_range::<usize>("5:2").is_err());
        assert!(parse_range::<usize>("a:2").is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = CampaignConfig::new("d.json", "o.csv");
        assert!(c.validate().is_ok());
        c.method = SpectrumMethod::Fd;
        assert!(c.validate().is_err());
        c.h = Some(0.05);
        assert!(c.validate().is_ok());
        c.melas_constant = 0.0;
        assert!(c.validate().is_err());
        c.melas_constant = 1e-3;
        c.k_max = 0;
        assert!(c.validate().is_err());
        assert!("exact".parse::<SpectrumMethod>().is_ok());
        assert!("spectral".parse::<SpectrumMethod>().is_err());
    }
}
