//! Command-line driver: `solve`, `verify`, `decay`, `lie` and `report`.
//!
//! Exit codes: 0 pass, 1 tolerance breach, 2 configuration error,
//! 3 solver error, 4 fit error.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use flagcy_core::FlagFamily;

pub use config::{JobConfig, MethodChoice};
pub use error::CliError;
pub use report::ReportFile;

#[derive(Debug, Parser)]
#[command(
    name = "flagcy",
    version,
    about = "Asymptotically conical Calabi-Yau metrics on canonical bundles of flag varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate V and V' (CSV `rho,V,dV`).
    Solve(JobArgs),
    /// Run every check and write a JSON report; exit 1 on a tolerance breach.
    Verify(JobArgs),
    /// Fit the decay rate along a ray (CSV `rtilde,deviation` with a `#` footer).
    Decay(JobArgs),
    /// Print root data, δ_P, the eigenvalue template and the Kähler cone.
    Lie {
        #[arg(long)]
        family: FlagFamily,
    },
    /// Summarize a saved report and re-apply its verdict.
    Report { path: PathBuf },
}

/// Flags override the corresponding fields of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct JobArgs {
    /// JSON job file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<FlagFamily>,
    /// Simple-root parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    #[arg(long = "C")]
    pub c: Option<f64>,
    #[arg(long = "V0", conflicts_with = "c0")]
    pub v0: Option<f64>,
    #[arg(long = "C0", allow_hyphen_values = true)]
    pub c0: Option<f64>,
    /// A solver name or `auto`.
    #[arg(long)]
    pub method: Option<MethodChoice>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `ρ` rows for `solve`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,
    /// Shift V in the Ricci check (negative control for `verify`).
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_v: Option<f64>,
}

impl JobArgs {
    pub fn into_job(self) -> Result<JobConfig, CliError> {
        let mut job = match (&self.config, self.family, &self.b) {
            (Some(path), _, _) => JobConfig::load(path)?,
            (None, Some(family), Some(b)) => JobConfig::new(family, b.clone()),
            (None, None, _) => {
                return Err(CliError::Config("--family or --config is required".into()))
            }
            (None, Some(_), None) => {
                return Err(CliError::Config("--b or --config is required".into()))
            }
        };
        if let Some(f) = self.family {
            job.family = f;
        }
        if let Some(b) = self.b {
            job.b = b;
        }
        if let Some(c) = self.c {
            job.c = c;
        }
        if let Some(v0) = self.v0 {
            job.v0 = Some(v0);
            job.c0 = None;
        }
        if let Some(c0) = self.c0 {
            job.c0 = Some(c0);
            job.v0 = None;
        }
        if let Some(m) = self.method {
            job.method = m;
        }
        if let Some(s) = self.samples {
            job.samples = s;
        }
        if let Some(s) = self.seed {
            job.seed = s;
        }
        if let Some(o) = self.out {
            job.output = Some(o);
        }
        if let Some(r) = self.rho {
            job.rho = Some(r);
        }
        if let Some(p) = self.perturb_v {
            job.perturb_v = Some(p);
        }
        job.validate()?;
        Ok(job)
    }
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve(args) => commands::cmd_solve(&args.into_job()?),
        Command::Verify(args) => {
            let scale = config::tolerance_scale()?;
            commands::cmd_verify(&args.into_job()?, scale)
        }
        Command::Decay(args) => commands::cmd_decay(&args.into_job()?),
        Command::Lie { family } => commands::cmd_lie(family),
        Command::Report { path } => commands::cmd_report(&path),
    }
}
