use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mhr_core::convex::ConvexBody;
use mhr_core::hr::SignConvention;
use mhr_core::kahler::HermitianMatrix;
use mhr_core::run::{
    cmd_decompose, cmd_mixed_volume, cmd_probe_cone, cmd_verify, CandidateSpec, NRange, Outcome,
    OutputFormat, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "mhr",
    version,
    about = "Mixed Hodge-Riemann verification campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positivity, Lefschetz, decomposition, metric and coercivity checks.
    Verify(Common),
    /// Probe (n-2,n-2)-classes at bidegree (1,1).
    ProbeCone {
        #[command(flatten)]
        common: Common,
        /// Grid size of path scans.
        #[arg(long)]
        steps: Option<usize>,
        /// Failing-path search attempts per dimension.
        #[arg(long)]
        attempts: Option<usize>,
        /// Limit-class trials per dimension.
        #[arg(long)]
        limit_trials: Option<usize>,
        /// JSON file holding a candidate class.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Mixed volumes, Aleksandrov-Fenchel, Brunn-Minkowski and KT checks.
    MixedVolume {
        #[command(flatten)]
        common: Common,
        /// JSON array of bodies, e.g. '[{"kind":"box","widths":[1,1]}]'.
        #[arg(long)]
        bodies: Option<String>,
        /// Comma-separated multiplicities, one per body.
        #[arg(long, allow_hyphen_values = true)]
        multiplicities: Option<String>,
        /// JSON array of Hermitian matrices for the intersection inequality.
        #[arg(long)]
        classes: Option<String>,
    },
    /// Decompose one seeded random form and print every component.
    Decompose(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dimension or inclusive range such as 2..4.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    tolerance: Option<f64>,
    /// classical or alternate.
    #[arg(long)]
    sign_convention: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv (Gram spectra).
    #[arg(long)]
    format: Option<String>,
}

fn invalid(msg: impl std::fmt::Display) -> String {
    format!("invalid input: {msg}")
}

fn read_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| invalid(format!("{what}: {e}")))
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

impl Common {
    fn config(&self) -> Result<RunConfig, String> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_json(&read_file(path)?).map_err(invalid)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            c.master_seed = s;
        }
        if let Some(n) = &self.n {
            c.n_range = n.parse::<NRange>().map_err(invalid)?;
        }
        if self.p.is_some() {
            c.p = self.p;
        }
        if self.q.is_some() {
            c.q = self.q;
        }
        if let Some(t) = self.trials {
            c.trial_count = t;
        }
        if let Some(t) = self.tolerance {
            c.tolerance = t;
        }
        if let Some(s) = &self.sign_convention {
            c.sign_convention = s.parse::<SignConvention>().map_err(invalid)?;
        }
        if self.workers.is_some() {
            c.workers = self.workers;
        }
        if self.out.is_some() {
            c.output.path = self.out.clone();
        }
        if let Some(f) = &self.format {
            c.output.format = f.parse::<OutputFormat>().map_err(invalid)?;
        }
        Ok(c)
    }
}

fn prepare(cli: &Cli) -> Result<(RunConfig, fn(&RunConfig) -> Outcome), String> {
    match &cli.command {
        Command::Verify(common) => Ok((common.config()?, cmd_verify)),
        Command::Decompose(common) => Ok((common.config()?, cmd_decompose)),
        Command::ProbeCone {
            common,
            steps,
            attempts,
            limit_trials,
            candidate,
        } => {
            let mut c = common.config()?;
            if let Some(s) = steps {
                c.cone.steps = *s;
            }
            if let Some(a) = attempts {
                c.cone.search_attempts = *a;
            }
            if let Some(l) = limit_trials {
                c.cone.limit_trials = *l;
            }
            if let Some(path) = candidate {
                c.cone.candidate =
                    Some(read_json::<CandidateSpec>(&read_file(path)?, "candidate")?);
            }
            Ok((c, cmd_probe_cone))
        }
        Command::MixedVolume {
            common,
            bodies,
            multiplicities,
            classes,
        } => {
            let mut c = common.config()?;
            if let Some(b) = bodies {
                c.mixed.bodies = read_json::<Vec<ConvexBody>>(b, "bodies")?;
            }
            if let Some(m) = multiplicities {
                c.mixed.multiplicities = m
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| invalid(format!("multiplicities: {e}")))?;
            }
            if let Some(k) = classes {
                c.mixed.classes = read_json::<Vec<HermitianMatrix>>(k, "classes")?;
            }
            Ok((c, cmd_mixed_volume))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, command) = match prepare(&cli) {
        Ok(x) => x,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = command(&config);
    if let Some(err) = &outcome.error {
        eprintln!("invalid input: {err}");
    }
    if let Some(report) = &outcome.report {
        let s = &report.summary;
        eprintln!(
            "{}: {} trials, {} passed, {} failed",
            report.command, s.total, s.passed, s.failed
        );
        for (name, count) in &s.failures {
            eprintln!("  {name}: {count} failing");
        }
        let written = match &config.output.path {
            Some(path) => report.write(path, config.output.format),
            None => report.render(config.output.format).map(|text| {
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }),
        };
        if let Err(e) = written {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.code() as u8)
}
