use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spectral_bounds::harness::{
    combined_exit_code, parse_range, run_asymptotics, run_campaigns, run_proofkit_audit,
    thread_pool_from_env, AuditConfig, CampaignConfig, SpectrumMethod, EXIT_CONFIG, EXIT_OK,
    EXIT_VIOLATION,
};
use spectral_bounds::{Error, Result};

#[derive(Parser)]
#[command(name = "spectral-bounds", version, about = "Verify Dirichlet eigenvalue lower bounds on polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a spectrum, evaluate every bound and write a CSV report.
    Verify(VerifyArgs),
    /// Sweep the proof constants and auxiliary inequalities.
    ProofkitAudit(AuditArgs),
    /// Fit the growth of the eigenvalue average above the Weyl term.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Domain JSON file; repeat to run several campaigns in parallel.
    #[arg(long, required = true)]
    domain_file: Vec<PathBuf>,
    #[arg(long, default_value = "exact")]
    method: SpectrumMethod,
    /// Grid spacing for `--method fd`.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    k_max: usize,
    /// Constant M_n of the Melas bound.
    #[arg(long)]
    melas_constant: f64,
    /// Area fraction kept by the face decomposition.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV path, or a directory when several domain files are given.
    #[arg(long)]
    output: PathBuf,
    /// Treat the domain as tiling, so Pólya violations count.
    #[arg(long)]
    tiling: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value = "2:10")]
    n_range: String,
    #[arg(long, default_value = "1:30")]
    p_range: String,
    #[arg(long, default_value_t = 100_000)]
    sample_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[arg(long)]
    domain_file: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    k_max: usize,
}

fn campaigns(args: &VerifyArgs) -> Result<Vec<CampaignConfig>> {
    let many = args.domain_file.len() > 1;
    if many {
        std::fs::create_dir_all(&args.output)?;
    }
    args.domain_file
        .iter()
        .map(|file| {
            let output = if many {
                let stem = file
                    .file_stem()
                    .ok_or_else(|| Error::Config(format!("no file name in {}", file.display())))?;
                args.output.join(stem).with_extension("csv")
            } else {
                args.output.clone()
            };
            let c = CampaignConfig {
                domain_file: file.clone(),
                method: args.method,
                h: args.h,
                k_max: args.k_max,
                melas_constant: args.melas_constant,
                fraction: args.fraction,
                seed: args.seed,
                output,
                tiling: args.tiling,
                inject_fault: args.inject_fault,
            };
            c.validate()?;
            Ok(c)
        })
        .collect()
}

fn verify(args: &VerifyArgs) -> i32 {
    let configs = match campaigns(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let results = run_campaigns(&configs);
    for (c, r) in configs.iter().zip(&results) {
        match r {
            Ok(o) => println!("{}", o.summary()),
            Err(e) => eprintln!("error: {}: {e}", c.domain_file.display()),
        }
    }
    combined_exit_code(&results)
}

fn audit(args: &AuditArgs) -> i32 {
    let config = match (parse_range(&args.n_range), parse_range(&args.p_range)) {
        (Ok(n_range), Ok(p_range)) => AuditConfig {
            n_range,
            p_range,
            sample_count: args.sample_count,
            seed: args.seed,
        },
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match run_proofkit_audit(&config) {
        Ok(report) => {
            for line in report.lines() {
                println!("{line}");
            }
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn asymptotics(args: &AsymptoticsArgs) -> i32 {
    match run_asymptotics(&args.domain_file, args.k_max) {
        Ok(r) => {
            println!("{}", r.summary());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match thread_pool_from_env() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let code = pool.install(|| match &cli.command {
        Command::Verify(a) => verify(a),
        Command::ProofkitAudit(a) => audit(a),
        Command::Asymptotics(a) => asymptotics(a),
    });
    ExitCode::from(code as u8)
}
