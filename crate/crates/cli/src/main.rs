//! `mldlab`: exact mld computations and the verification suites.
//!
//! Exit codes: 0 success, 1 an expected-empty suite came back nonempty,
//! 2 usage or input error, 3 resource guard tripped.

mod commands;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{CliError, Outcome};
use crate::manifest::{now_ms, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "mldlab", version, about = "Minimal log discrepancies of cyclic quotient singularities")]
pub struct Cli {
    /// Write a run manifest (JSON) to this file.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,

    /// Write the payload to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// mld of 1/r(a_1, ..., a_d) and the smallest index attaining it.
    Mld(MldArgs),
    /// Enumerate the mld spectrum of cyclic quotients.
    Scan(ScanArgs),
    /// Floor-sum region suites.
    #[command(subcommand)]
    Regions(RegionsCmd),
    /// Brute-force lemma verifiers.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Hyperquotient weight calculus.
    #[command(subcommand)]
    Hyperquot(HyperquotCmd),
    /// Re-run the command recorded in a manifest and compare verdicts.
    Replay {
        #[arg(value_name = "MANIFEST")]
        path: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct MldArgs {
    #[arg(long)]
    pub r: u64,
    /// Comma-separated weights, negatives allowed (`--w=-1,2`); may be empty
    /// for r = 1 together with --dim.
    #[arg(long, num_args = 0..=1, default_value = "", default_missing_value = "")]
    pub w: String,
    /// Dimension of the smooth point when r = 1 and no weights are given.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long)]
    pub rmax: u64,
    /// `lo,hi` (half-open `[lo, hi)` unless modified) or bracket form `(lo,hi]`.
    #[arg(long, default_value = "0,1")]
    pub interval: String,
    /// Exclude the left end point.
    #[arg(long)]
    pub open_left: bool,
    /// Include the right end point.
    #[arg(long)]
    pub closed_right: bool,
    /// Only isolated quotients (every weight a unit).
    #[arg(long)]
    pub isolated: bool,
    /// Worker threads; 0 means one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print the sorted distinct mld values instead of records.
    #[arg(long, conflicts_with = "accumulate")]
    pub distinct: bool,
    /// Count distinct values in (TARGET, TARGET + w) for each --windows radius.
    #[arg(long, value_name = "TARGET", requires = "windows")]
    pub accumulate: Option<String>,
    /// Comma-separated window radii for --accumulate.
    #[arg(long)]
    pub windows: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum RegionsCmd {
    /// Emptiness over every interval of the S-grid.
    SGrid {
        #[arg(long, default_value_t = 100)]
        nmax: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// V_l intersected with its three constraints equals V_{l+1}.
    VlSteps {
        #[arg(long, default_value_t = 4)]
        from: u64,
        #[arg(long, default_value_t = 10)]
        to: u64,
    },
    /// Cases 1 to 10 at each level k.
    Cases {
        /// A level or a range such as `4..8` (inclusive).
        #[arg(long, default_value = "4..8")]
        k: String,
        /// Restrict to one case.
        #[arg(long = "case")]
        case_id: Option<u8>,
    },
    /// Emptiness of an arbitrary constraint system on the ordered unit cube.
    System {
        /// JSON array of [n, c] pairs.
        #[arg(long, conflicts_with = "gamma_file", required_unless_present = "gamma_file")]
        gamma: Option<String>,
        #[arg(long, value_name = "FILE")]
        gamma_file: Option<PathBuf>,
        /// Exit 1 when the region is not empty.
        #[arg(long)]
        expect_empty: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Terminal lemma over every admissible tuple with r <= rmax.
    Terminal {
        #[arg(long, default_value_t = 40)]
        rmax: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Fourfold gap lemma over denominators r <= rmax.
    Fourfold {
        #[arg(long, default_value_t = 60)]
        rmax: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Transfer lemma report for one tuple.
    Transfer {
        /// The whole tuple as `r,a_1,a_2,a_3,a_4,e`.
        #[arg(long, conflicts_with_all = ["r", "a", "e"], required_unless_present_all = ["r", "a", "e"])]
        tuple: Option<String>,
        #[arg(long)]
        r: Option<u64>,
        /// a_1,a_2,a_3,a_4
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        e: Option<u64>,
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
    /// Fivefold candidates with mld in [11/6 + eps, 2).
    Fivefold {
        #[arg(long)]
        rmax: u64,
        #[arg(long, default_value = "1/100")]
        eps: String,
        #[arg(long, default_value = "4a")]
        cond: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Case 2 instances with r <= rmax and their fivefold lifts.
    Case2 {
        #[arg(long)]
        rmax: u64,
        #[arg(long, default_value = "1/100")]
        eps: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Hypotheses of the special fivefold theorem for one quotient.
    Thm35 {
        #[arg(long)]
        r: u64,
        /// a_1,...,a_5
        #[arg(long)]
        w: String,
        #[arg(long, default_value_t = 100)]
        mu: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum HyperquotCmd {
    /// Split N^0 into Psi_1, Psi_2 and the rest.
    Psi {
        /// JSON file {"r":..,"a":[..],"e":..,"support":[[..],..]}.
        #[arg(long, value_name = "FILE")]
        datum: PathBuf,
        #[arg(long, default_value = "1/100")]
        eps: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// The identity sum {j a_i / r} = {j e / r} + j/r + 1 for all j.
    Identity5 {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        e: u64,
    },
    /// Match (a_1, a_2, a_3, a_4, e) against the singularity type list.
    Type {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        e: u64,
        /// Print every match instead of the first.
        #[arg(long)]
        all: bool,
    },
}

/// Arguments after the program name with `--manifest` and its value removed.
fn recorded_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--manifest" {
            skip = true;
            continue;
        }
        if a.starts_with("--manifest=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Mld(_) => "mld".into(),
        Command::Scan(_) => "scan".into(),
        Command::Regions(c) => format!("regions {}", match c {
            RegionsCmd::SGrid { .. } => "s-grid",
            RegionsCmd::VlSteps { .. } => "vl-steps",
            RegionsCmd::Cases { .. } => "cases",
            RegionsCmd::System { .. } => "system",
        }),
        Command::Verify(c) => format!("verify {}", match c {
            VerifyCmd::Terminal { .. } => "terminal",
            VerifyCmd::Fourfold { .. } => "fourfold",
            VerifyCmd::Transfer { .. } => "transfer",
            VerifyCmd::Fivefold { .. } => "fivefold",
            VerifyCmd::Case2 { .. } => "case2",
            VerifyCmd::Thm35 { .. } => "thm35",
        }),
        Command::Hyperquot(c) => format!("hyperquot {}", match c {
            HyperquotCmd::Psi { .. } => "psi",
            HyperquotCmd::Identity5 { .. } => "identity5",
            HyperquotCmd::Type { .. } => "type",
        }),
        Command::Replay { .. } => "replay".into(),
    }
}

fn emit(outcome: &Outcome, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, &outcome.payload).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&outcome.payload)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    if !outcome.summary.is_empty() {
        eprintln!("{}", outcome.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let started = now_ms();
    let result = match &cli.command {
        Command::Replay { path } => commands::replay(path),
        cmd => commands::run(cmd),
    };
    let (code, verdicts) = match result.and_then(|o| emit(&o, cli.output.as_ref()).map(|_| o)) {
        Ok(o) => (o.exit, o.verdict),
        Err(e) => {
            eprintln!("error: {e}");
            (e.exit_code(), serde_json::json!({ "error": e.to_string() }))
        }
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command: command_name(&cli.command),
            parameters: recorded_args(&args),
            started_unix_ms: started,
            finished_unix_ms: now_ms(),
            exit_code: code,
            verdicts,
            artifacts: cli.output.iter().cloned().collect(),
        };
        if let Err(e) = m.write(path) {
            eprintln!("error: writing manifest {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
