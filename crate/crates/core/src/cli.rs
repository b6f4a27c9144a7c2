//! Command-line front end.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 witness validation failure, 4 I/O.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bases::BasisKind;
use crate::choi::{choi_report, ChoiReport};
use crate::error::{Error, Result};
use crate::scan::{self, ChoiScan, Format, Grid};
use crate::states::{load_density_json, ChoiParams, DensityMatrix, StateSpec, FAMILIES};
use crate::tolerance::TOL;
use crate::witness::{
    build_witness, detection_value, seesaw_min_separable, validate_constraint, DetectionReport, SeesawConfig,
    WitnessExport,
};

pub const EXIT_BAD_ARGS: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_IO: u8 = 4;

fn families_help() -> String {
    let mut s = String::from("State families:\n");
    for (name, params) in FAMILIES {
        s.push_str(&format!("  {name:<16} {params}\n"));
    }
    s
}

#[derive(Debug, Parser)]
#[command(name = "ewitness", version, about = "Nonlinear entanglement witnesses for bipartite qudit states")]
#[command(after_help = families_help())]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detection value 1 - ||R||_1 of a state.
    #[command(after_help = families_help())]
    Detect {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = BasisArg::Unit)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Construct the optimal witness and optionally write it as JSON.
    #[command(after_help = families_help())]
    Witness {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = BasisArg::Unit)]
        basis: BasisArg,
        /// Write the witness export to this path.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Positive-partial-transpose check.
    #[command(after_help = families_help())]
    Ppt {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Sweep a family over a parameter grid and write CSV or JSON.
    Scan(ScanArgs),
    /// Check witness nonnegativity on product states with a see-saw search.
    #[command(after_help = families_help())]
    Validate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = BasisArg::Unit)]
        basis: BasisArg,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// List the state families and their parameter ranges.
    Catalog {
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// horodecki-alpha | upb-tiles | horodecki-a | choi
    #[arg(long, required_unless_present = "json")]
    pub state: Option<String>,
    /// Load a density matrix from JSON ({"dA", "dB", "matrix": [[[re, im], ..], ..]}).
    #[arg(long, conflicts_with = "state")]
    pub json: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Comma-separated mu_1..mu_{d-1}; the last weight may be omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub mu: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// horodecki-alpha | horodecki-a | choi
    #[arg(long)]
    pub family: String,
    /// Local dimension for the choi family (3, 4 or 5).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Points per weight axis (choi).
    #[arg(long, default_value_t = 200)]
    pub mu_steps: usize,
    /// Points along p in [0, 1/d] (choi).
    #[arg(long, default_value_t = 100)]
    pub p_steps: usize,
    /// Evaluate detection through the correlation-matrix SVD.
    #[arg(long)]
    pub svd: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
    pub format: ScanFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    Unit,
    Generator,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Unit => BasisKind::Unit,
            BasisArg::Generator => BasisKind::Generator,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

fn missing(flag: &str, family: &str) -> Error {
    Error::Parameter(format!("--{flag} is required for --state {family}"))
}

impl StateArgs {
    pub fn spec(&self) -> Result<Option<StateSpec>> {
        let Some(family) = self.state.as_deref() else { return Ok(None) };
        let spec = match family {
            "horodecki-alpha" => StateSpec::HorodeckiAlpha { alpha: self.alpha.ok_or_else(|| missing("alpha", family))? },
            "upb-tiles" => StateSpec::UpbTiles,
            "horodecki-a" => StateSpec::HorodeckiA { a: self.a.ok_or_else(|| missing("a", family))? },
            "choi" => {
                let d = self.d.ok_or_else(|| missing("d", family))?;
                let p = self.p.ok_or_else(|| missing("p", family))?;
                let mu = self.mu.clone().ok_or_else(|| missing("mu", family))?;
                StateSpec::Choi(ChoiParams::with_inferred_mu(d, p, mu)?)
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        Ok(Some(spec))
    }

    pub fn load(&self) -> Result<(Option<StateSpec>, DensityMatrix)> {
        if let Some(path) = &self.json {
            return Ok((None, load_density_json(path)?));
        }
        let spec = self.spec()?.expect("clap requires --state or --json");
        let rho = spec.build()?;
        Ok((Some(spec), rho))
    }
}

#[derive(Serialize)]
struct DetectOutput<'a> {
    state: Option<&'a StateSpec>,
    basis: BasisKind,
    report: &'a DetectionReport,
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn state_label(spec: &Option<StateSpec>) -> String {
    match spec {
        None => "json input".to_string(),
        Some(s) => serde_json::to_string(s).unwrap_or_else(|_| s.family().to_string()),
    }
}

enum Outcome {
    Ok,
    ValidationFailed,
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Detect { state, basis, format } => {
            let (spec, rho) = state.load()?;
            let kind = BasisKind::from(basis);
            let report = detection_value(&rho, &kind.build(rho.dim_a())?, &kind.build(rho.dim_b())?)?;
            match format {
                OutputFormat::Json => {
                    print_json(out, &DetectOutput { state: spec.as_ref(), basis: kind, report: &report })?
                }
                OutputFormat::Text => {
                    writeln!(out, "state: {}", state_label(&spec))?;
                    writeln!(out, "basis: {}", kind.name())?;
                    writeln!(out, "nuclear_norm: {:.6}", report.nuclear_norm)?;
                    writeln!(out, "value: {:.6}", report.value)?;
                    writeln!(out, "detected: {}", report.detected)?;
                    writeln!(out, "status: {}", serde_json::to_value(report.status)?.as_str().unwrap_or(""))?;
                }
            }
        }
        Command::Witness { state, basis, emit, format } => {
            let (spec, rho) = state.load()?;
            let kind = BasisKind::from(basis);
            let (ba, bb) = (kind.build(rho.dim_a())?, kind.build(rho.dim_b())?);
            let report = detection_value(&rho, &ba, &bb)?;
            let w = build_witness(&rho, &ba, &bb)?;
            let export = WitnessExport::new(&w, &report);
            let constraint = validate_constraint(w.coefficients());
            if let Some(path) = &emit {
                let file = std::fs::File::create(path)?;
                serde_json::to_writer_pretty(std::io::BufWriter::new(file), &export)?;
            }
            match format {
                OutputFormat::Json => print_json(
                    out,
                    &json!({ "state": spec, "witness": export, "constraint": constraint }),
                )?,
                OutputFormat::Text => {
                    writeln!(out, "state: {}", state_label(&spec))?;
                    writeln!(out, "value: {:.6}", report.value)?;
                    writeln!(out, "sigma_max(A): {:.6}", constraint.max_singular_value)?;
                    writeln!(out, "constraint: {}", if constraint.pass { "pass" } else { "fail" })?;
                    if let Some(path) = &emit {
                        writeln!(out, "written: {}", path.display())?;
                    }
                }
            }
        }
        Command::Ppt { state, format } => {
            let (spec, rho) = state.load()?;
            let min = rho.min_partial_transpose_eigenvalue()?;
            let ppt = min >= -TOL.ppt;
            let closed: Option<ChoiReport> = match &spec {
                Some(StateSpec::Choi(params)) => Some(choi_report(params)),
                _ => None,
            };
            match format {
                OutputFormat::Json => print_json(
                    out,
                    &json!({
                        "state": spec,
                        "min_pt_eigenvalue": min,
                        "ppt": ppt,
                        "ppt_bound": closed.as_ref().map(|c| c.ppt_bound),
                    }),
                )?,
                OutputFormat::Text => {
                    writeln!(out, "state: {}", state_label(&spec))?;
                    writeln!(out, "min_pt_eigenvalue: {min:.6}")?;
                    writeln!(out, "ppt: {ppt}")?;
                    if let Some(c) = closed {
                        writeln!(out, "ppt_bound: {:.6}", c.ppt_bound)?;
                    }
                }
            }
        }
        Command::Scan(args) => {
            let output = match args.family.as_str() {
                "choi" => {
                    let d = args.d.ok_or_else(|| Error::Parameter("--d is required for --family choi".into()))?;
                    scan::scan_choi(ChoiScan { d, mu_steps: args.mu_steps, p_steps: args.p_steps, use_svd: args.svd })?
                }
                family => {
                    let (lo, hi) = match family {
                        "horodecki-alpha" => (0.0, 5.0),
                        "horodecki-a" => (0.02, 0.98),
                        other => return Err(Error::UnknownFamily(other.to_string())),
                    };
                    let grid = Grid::new(args.start.unwrap_or(lo), args.stop.unwrap_or(hi), args.steps.unwrap_or(49));
                    scan::scan_1d(family, grid)?
                }
            };
            let format = match args.format {
                ScanFormat::Csv => Format::Csv,
                ScanFormat::Json => Format::Json,
            };
            scan::emit_to_path(&output, format, &args.out)?;
            writeln!(out, "{}", output.summary())?;
        }
        Command::Validate { state, basis, restarts, iters, seed, format } => {
            let (spec, rho) = state.load()?;
            let kind = BasisKind::from(basis);
            let w = build_witness(&rho, &kind.build(rho.dim_a())?, &kind.build(rho.dim_b())?)?;
            let result = seesaw_min_separable(&w, SeesawConfig { restarts, iters, seed })?;
            let constraint = validate_constraint(w.coefficients());
            let pass = result.min_value >= -TOL.seesaw && constraint.pass;
            match format {
                OutputFormat::Json => print_json(
                    out,
                    &json!({
                        "state": spec,
                        "seesaw_min": result.min_value,
                        "constraint": constraint,
                        "pass": pass,
                    }),
                )?,
                OutputFormat::Text => {
                    writeln!(out, "state: {}", state_label(&spec))?;
                    writeln!(out, "seesaw_min: {:.6}", result.min_value)?;
                    writeln!(out, "sigma_max(A): {:.6}", constraint.max_singular_value)?;
                    writeln!(out, "result: {}", if pass { "pass" } else { "fail" })?;
                }
            }
            if !pass {
                return Ok(Outcome::ValidationFailed);
            }
        }
        Command::Catalog { format } => match format {
            OutputFormat::Json => {
                let list: Vec<_> = FAMILIES.iter().map(|(n, p)| json!({ "family": n, "parameters": p })).collect();
                print_json(out, &list)?
            }
            OutputFormat::Text => write!(out, "{}", families_help())?,
        },
    }
    Ok(Outcome::Ok)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_BAD_ARGS,
    }
}

/// Runs a parsed command, writing results to stdout and errors to stderr.
pub fn run(cli: Cli) -> ExitCode {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run_command(cli.command, &mut lock) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(EXIT_VALIDATION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
