//! Command-line interface: argument types, run records and command dispatch.
//!
//! Exit codes: `0` success, `1` residual failure, `2` parse, input or
//! precondition errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{admissible_branches, classify_fiber, FiberClassification, RicciBranch};
use crate::deform::{essential_kernel, DeformationSystem, KernelReport, ROUND_S1XSU2};
use crate::error::{Error, Result};
use crate::models::{catalog_entry, GeometrySpec, PhiFlag, SystemKind};
use crate::moduli::{moduli_dim, nsns_moduli_dim, IsometryClass, ModuliPoint, S3_ISOMETRY_RANK};
use crate::systems::{
    heterotic_soliton_residual, nsns_residual, null_parallel_residual, ResidualReport, SolitonConfig,
    DEFAULT_CHART_POINTS,
};

pub const RUN_SCHEMA: &str = "hetlab.run/1";
pub const DEFAULT_FRAME_TOL: f64 = 1e-10;
pub const DEFAULT_CHART_TOL: f64 = 1e-5;
pub const TOL_ENV: &str = "HETLAB_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hetlab", version, about = "Verify Heterotic soliton geometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the residuals of a catalog entry or geometry spec file.
    Verify(VerifyArgs),
    /// Print the admissible leaf Ricci branches for a given κ.
    Classify(ClassifyArgs),
    /// Moduli of manifolds of type S¹×S³.
    #[command(subcommand)]
    Moduli(ModuliCommand),
    /// Infinitesimal deformations of NS-NS pairs.
    #[command(subcommand)]
    Deform(DeformCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemArg {
    Heterotic,
    Nsns,
    NullParallel,
}

impl From<SystemKind> for SystemArg {
    fn from(k: SystemKind) -> Self {
        match k {
            SystemKind::Heterotic => SystemArg::Heterotic,
            SystemKind::Nsns => SystemArg::Nsns,
            SystemKind::NullParallel => SystemArg::NullParallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Frame,
    Chart,
    Both,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["spec", "catalog"]))]
pub struct VerifyArgs {
    /// Geometry spec file (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Catalog entry name.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Coupling κ; defaults to 1 for catalog entries and to the file value for specs.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Evaluator; defaults to the one the geometry is built for.
    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    #[arg(long, value_enum, default_value = "frame")]
    pub backend: BackendArg,
    /// Residual tolerance for every backend.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the run record to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for chart sample points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of chart sample points.
    #[arg(long, default_value_t = DEFAULT_CHART_POINTS)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub kappa: f64,
    /// Also classify the fiber of this catalog entry.
    #[arg(long)]
    pub catalog: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ModuliCommand {
    /// Canonical moduli point from torus angles or a rotation matrix.
    Canon(CanonArgs),
    /// Moduli dimensions for an isometry group of the given rank.
    Dim(DimArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["angles", "matrix"]))]
pub struct CanonArgs {
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    pub angles: Option<Vec<f64>>,
    /// Sixteen entries in row-major order.
    #[arg(long, num_args = 16, allow_negative_numbers = true)]
    pub matrix: Option<Vec<f64>>,
    /// Translation length.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long, default_value_t = S3_ISOMETRY_RANK)]
    pub rank: usize,
}

#[derive(Debug, Subcommand)]
pub enum DeformCommand {
    /// Essential deformations on the invariant slice.
    Kernel(KernelArgs),
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, default_value = ROUND_S1XSU2)]
    pub model: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub frame: f64,
    pub chart: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Verify {
        system: SystemArg,
        passed: bool,
        reports: Vec<ResidualReport>,
    },
    Classify {
        kappa: f64,
        branches: Vec<RicciBranch>,
        fiber: Option<FiberClassification>,
    },
    Moduli {
        point: ModuliPoint,
        input_angles: Option<(f64, f64)>,
    },
    Deform {
        kernel: KernelReport,
    },
}

/// A persisted run: command, input hash, tolerances and results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub command: String,
    pub spec_hash: Option<String>,
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub payload: Payload,
    /// Seconds since the Unix epoch.
    pub timestamp: Option<u64>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run record serialises")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{}:{}:{}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Process-level inputs that are not command-line arguments.
#[derive(Clone, Debug, Default)]
pub struct RunContext {
    /// Overrides both default tolerances.
    pub tol_override: Option<f64>,
    pub timestamp: Option<u64>,
}

impl RunContext {
    /// Reads `HETLAB_TOL`, and the timestamp from `SOURCE_DATE_EPOCH` or the clock.
    pub fn from_env() -> Result<Self> {
        let tol_override = match std::env::var(TOL_ENV) {
            Ok(v) => Some(parse_tol(&v).map_err(|e| Error::invalid(format!("{TOL_ENV}: {e}")))?),
            Err(_) => None,
        };
        let timestamp = match std::env::var("SOURCE_DATE_EPOCH") {
            Ok(v) => v.trim().parse().ok(),
            Err(_) => std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs()),
        };
        Ok(RunContext {
            tol_override,
            timestamp,
        })
    }

    pub fn tolerances(&self, cli_tol: Option<f64>) -> Tolerances {
        match cli_tol.or(self.tol_override) {
            Some(t) => Tolerances { frame: t, chart: t },
            None => Tolerances {
                frame: DEFAULT_FRAME_TOL,
                chart: DEFAULT_CHART_TOL,
            },
        }
    }
}

fn check_tol(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {t}")));
    }
    Ok(t)
}

fn parse_tol(s: &str) -> Result<f64> {
    let t: f64 = s.trim().parse().map_err(|e| Error::invalid(format!("{e}")))?;
    check_tol(t)
}

/// Result of running one command.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(err: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, ctx: &RunContext) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, ctx),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

pub fn run(cli: Cli, ctx: &RunContext) -> Outcome {
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, ctx),
        Command::Classify(a) => cmd_classify(&a, ctx),
        Command::Moduli(ModuliCommand::Canon(a)) => cmd_moduli_canon(&a, ctx),
        Command::Moduli(ModuliCommand::Dim(a)) => Ok(cmd_moduli_dim(&a)),
        Command::Deform(DeformCommand::Kernel(a)) => cmd_deform_kernel(&a, ctx),
    };
    result.unwrap_or_else(Outcome::error)
}

fn record(
    command: &str,
    spec_hash: Option<String>,
    tolerances: Tolerances,
    payload: Payload,
    ctx: &RunContext,
) -> RunRecord {
    RunRecord {
        schema: RUN_SCHEMA.to_string(),
        command: command.to_string(),
        spec_hash,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        tolerances,
        payload,
        timestamp: ctx.timestamp,
    }
}

fn save_if(out: &Option<PathBuf>, rec: &RunRecord) -> Result<()> {
    if let Some(path) = out {
        rec.save(path)?;
    }
    Ok(())
}

fn default_system(spec: &GeometrySpec) -> SystemArg {
    match spec.phi {
        PhiFlag::EqualAlpha => SystemArg::Nsns,
        PhiFlag::Zero if spec.alpha_norm_sq > 0.0 => SystemArg::NullParallel,
        _ => SystemArg::Heterotic,
    }
}

fn evaluate(system: SystemArg, cfg: &SolitonConfig) -> Result<ResidualReport> {
    match system {
        SystemArg::Heterotic => heterotic_soliton_residual(cfg),
        SystemArg::Nsns => nsns_residual(cfg),
        SystemArg::NullParallel => null_parallel_residual(cfg),
    }
}

/// Resolves the verify inputs to a spec, its frame configuration and the
/// default evaluator.
pub fn resolve_verify_input(args: &VerifyArgs) -> Result<(GeometrySpec, SolitonConfig, SystemArg)> {
    if let Some(k) = args.kappa {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::invalid(format!("κ must be positive, got {k}")));
        }
    }
    match (&args.catalog, &args.spec) {
        (Some(name), _) => {
            let entry = catalog_entry(name, args.kappa.unwrap_or(1.0))?;
            Ok((entry.spec(), entry.config()?, entry.system.into()))
        }
        (None, Some(path)) => {
            let mut spec = GeometrySpec::load(path)?;
            if let Some(k) = args.kappa {
                spec.kappa = k;
            }
            let cfg = spec.to_config()?;
            let system = default_system(&spec);
            Ok((spec, cfg, system))
        }
        (None, None) => Err(Error::invalid("one of --spec or --catalog is required")),
    }
}

fn format_report(out: &mut String, rep: &ResidualReport, tol: f64) {
    let verdict = if rep.passes(tol) { "PASS" } else { "FAIL" };
    let _ = writeln!(
        out,
        "{} system={} backend={} kappa={} points={} tol={:e} {}",
        rep.config,
        rep.system,
        rep.backend.as_str(),
        rep.kappa,
        rep.points,
        tol,
        verdict
    );
    for (name, v) in rep.residuals() {
        let _ = writeln!(out, "  {name:<22} {v:.3e}");
    }
    let d = &rep.derived;
    let _ = writeln!(
        out,
        "  |alpha|^2 = {}  2k|alpha|^2 = {}  ratio = {}",
        d.alpha_norm_sq,
        d.two_kappa_alpha_sq,
        d.ratio_tag.as_str()
    );
    if let Some(s) = d.s_h {
        let _ = writeln!(out, "  leaf scalar curvature = {s}");
    }
}

pub fn cmd_verify(args: &VerifyArgs, ctx: &RunContext) -> Result<Outcome> {
    let (spec, cfg, default) = resolve_verify_input(args)?;
    let system = args.system.unwrap_or(default);
    if let Some(t) = args.tol {
        check_tol(t)?;
    }
    let tolerances = ctx.tolerances(args.tol);
    let mut configs = Vec::new();
    if matches!(args.backend, BackendArg::Frame | BackendArg::Both) {
        configs.push((cfg.clone(), tolerances.frame));
    }
    if matches!(args.backend, BackendArg::Chart | BackendArg::Both) {
        configs.push((cfg.to_chart(args.points, args.seed)?, tolerances.chart));
    }
    let mut stdout = String::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for (c, tol) in &configs {
        let rep = evaluate(system, c)?;
        passed &= rep.passes(*tol);
        format_report(&mut stdout, &rep, *tol);
        reports.push(rep);
    }
    let rec = record(
        "verify",
        Some(sha256_hex(&spec.to_json())),
        tolerances,
        Payload::Verify {
            system,
            passed,
            reports,
        },
        ctx,
    );
    save_if(&args.out, &rec)?;
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_RESIDUAL },
        stdout,
        stderr: String::new(),
    })
}

pub fn cmd_classify(args: &ClassifyArgs, ctx: &RunContext) -> Result<Outcome> {
    let branches = admissible_branches(args.kappa)?;
    let mut stdout = String::new();
    let _ = writeln!(
        stdout,
        "{:<12} {:>11} {:>14} {:>14} {:>14} {:>14}",
        "branch", "2k|alpha|^2", "|alpha|^2", "mu1", "mu2", "s"
    );
    for b in &branches {
        let _ = writeln!(
            stdout,
            "{:<12} {:>11} {:>14.6} {:>14.6} {:>14.6} {:>14.6}",
            b.tag.as_str(),
            b.ratio,
            b.alpha_norm_sq,
            b.mu1,
            b.mu2,
            b.scalar_curvature()
        );
    }
    let fiber = match &args.catalog {
        Some(name) => {
            let entry = catalog_entry(name, args.kappa)?;
            let c = classify_fiber(&entry.fiber, args.kappa)?;
            let _ = writeln!(stdout, "{name}: spectrum {:?} -> {}", c.spectrum, c.label());
            Some(c)
        }
        None => None,
    };
    let rec = record(
        "classify",
        None,
        ctx.tolerances(None),
        Payload::Classify {
            kappa: args.kappa,
            branches,
            fiber,
        },
        ctx,
    );
    save_if(&args.out, &rec)?;
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}

pub fn cmd_moduli_canon(args: &CanonArgs, ctx: &RunContext) -> Result<Outcome> {
    let (point, input_angles) = match (&args.angles, &args.matrix) {
        (Some(a), _) => (ModuliPoint::new(args.lambda, a[0], a[1])?, Some((a[0], a[1]))),
        (None, Some(m)) => {
            let iso = IsometryClass::from_row_major(m)?;
            (ModuliPoint::from_isometry(args.lambda, &iso)?, None)
        }
        (None, None) => return Err(Error::invalid("one of --angles or --matrix is required")),
    };
    let (x, y) = point.angles();
    let stdout = format!("lambda={} angles=({x:.15}, {y:.15})\n", point.lambda());
    let rec = record(
        "moduli canon",
        None,
        ctx.tolerances(None),
        Payload::Moduli { point, input_angles },
        ctx,
    );
    save_if(&args.out, &rec)?;
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}

pub fn cmd_moduli_dim(args: &DimArgs) -> Outcome {
    Outcome {
        code: EXIT_OK,
        stdout: format!(
            "rank={} moduli_dim={} nsns_moduli_dim={}\n",
            args.rank,
            moduli_dim(args.rank),
            nsns_moduli_dim(args.rank)
        ),
        stderr: String::new(),
    }
}

pub fn cmd_deform_kernel(args: &KernelArgs, ctx: &RunContext) -> Result<Outcome> {
    let sys = DeformationSystem::model(&args.model)?;
    let kernel = essential_kernel(&sys)?;
    let mut stdout = String::new();
    let _ = writeln!(
        stdout,
        "model={} unknowns={} kernel_dimension={}",
        kernel.model, kernel.unknowns, kernel.dimension
    );
    let _ = writeln!(
        stdout,
        "max |lambda| = {:.1e}  max |f| = {:.1e}  max |tau_perp| = {:.1e}  beta rank = {}",
        kernel.max_lambda, kernel.max_f, kernel.max_tau_perp, kernel.beta_rank
    );
    for (i, el) in kernel.basis.iter().enumerate() {
        let beta: Vec<String> = el.decomposition.beta.iter().map(|b| format!("{b:+.6}")).collect();
        let _ = writeln!(stdout, "  [{i}] beta = ({})", beta.join(", "));
    }
    let rec = record(
        "deform kernel",
        None,
        ctx.tolerances(None),
        Payload::Deform { kernel },
        ctx,
    );
    save_if(&args.out, &rec)?;
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}
