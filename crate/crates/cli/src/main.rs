//! `sacenter`: field evaluation, unfolded regions, centers, sweeps and the
//! acceptance suite from the command line.
//!
//! Exit codes: 1 malformed input, 2 numerical failure, 3 failed theorem check.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sacenter_core::{Error, FieldParams, PolygonDomain};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
    Theorem(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Theorem(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Theorem(m) => write!(f, "theorem check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted { .. } => CliError::Numerical(e.to_string()),
            Error::TheoryViolation(_) => CliError::Theorem(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sacenter", version, about = "Solid-angle and Riesz centers of polygonal domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field value at a point or on a grid.
    Eval(FieldArgs),
    /// Value and gradient.
    Grad(FieldArgs),
    /// Value, gradient and Hessian (Laplacian on grids).
    Hess(FieldArgs),
    /// Locate the centers.
    Center(CenterArgs),
    /// The minimal unfolded region as JSON.
    Ufr(UfrArgs),
    /// Center locus over a list of heights.
    Sweep(SweepArgs),
    /// Self-energy, the integral of the solid angle over the domain.
    Energy(EnergyArgs),
    /// Run the acceptance suite.
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone)]
struct DomainArgs {
    /// Named fixture, e.g. `disc:1,512`, `two_discs:1,4,256`, `lshape`.
    #[arg(long, conflicts_with = "domain", required_unless_present = "domain")]
    fixture: Option<String>,
    /// Domain file `{"polygons": [[[x, y], ...], ...]}`.
    #[arg(long)]
    domain: Option<PathBuf>,
}

impl DomainArgs {
    fn load(&self) -> Result<PolygonDomain, CliError> {
        match (&self.fixture, &self.domain) {
            (Some(spec), _) => Ok(sacenter_core::fixtures::parse(spec)?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                Ok(PolygonDomain::from_json(&text)?)
            }
            (None, None) => Err(CliError::Input("give --fixture or --domain".into())),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct KernelArgs {
    /// Height of the light source (solid angle).
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    h: Option<f64>,
    /// Riesz exponent; the kernel is `r^(α-2)`, or `-ln r` for α = 2.
    #[arg(long)]
    alpha: Option<f64>,
}

impl KernelArgs {
    fn params(&self) -> Result<FieldParams, CliError> {
        Ok(match (self.h, self.alpha) {
            (Some(h), _) => FieldParams::solid_angle(h)?,
            (None, Some(a)) => FieldParams::riesz(a)?,
            (None, None) => return Err(CliError::Input("give --h or --alpha".into())),
        })
    }
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    /// Evaluation point `x1,x2`.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid", allow_hyphen_values = true)]
    at: Option<String>,
    /// Grid resolution `n` or `nx,ny` (each at least 2); writes CSV.
    #[arg(long)]
    grid: Option<String>,
    /// Grid bounds `x0,y0,x1,y1`; defaults to the hull's box grown by 20%.
    #[arg(long, requires = "grid", allow_hyphen_values = true)]
    bounds: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, default_value_t = 64)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directions of the unfolded-region scan.
    #[arg(long, default_value_t = sacenter_core::unfolded::DEFAULT_DIRECTIONS)]
    directions: usize,
    /// Scan step; defaults to diameter / 512.
    #[arg(long)]
    c_step: Option<f64>,
    /// Relative gradient tolerance for convergence.
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Relative value window for ties between maxima.
    #[arg(long)]
    value_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct CenterArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Print the full result as JSON instead of CSV rows.
    #[arg(long, conflicts_with = "report")]
    json: bool,
    /// Print the uniqueness report (solid angle only) as JSON.
    #[arg(long)]
    report: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct UfrArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = sacenter_core::unfolded::DEFAULT_DIRECTIONS)]
    directions: usize,
    #[arg(long)]
    c_step: Option<f64>,
    /// Vertex list as CSV instead of JSON; the distances go to stderr.
    #[arg(long, conflicts_with = "slabs")]
    csv: bool,
    /// Include every direction's slab in the JSON.
    #[arg(long)]
    slabs: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Domain for the 2D sweeps.
    #[arg(long, conflicts_with_all = ["domain", "interval"])]
    fixture: Option<String>,
    #[arg(long, conflicts_with = "interval")]
    domain: Option<PathBuf>,
    /// 1D sweep on `[-R,-1] ∪ [1,R]`: brute force next to the closed form.
    #[arg(long)]
    interval: Option<f64>,
    /// Heights, comma separated, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    hs: Vec<f64>,
    /// Distance of the center to the barycenter instead of the locus.
    #[arg(long, conflicts_with = "interval")]
    barycenter: bool,
    /// Grid step of the 1D brute force.
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnergyArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// `all` or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the reports as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SACENTER_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Input(format!("SACENTER_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Eval(a) => commands::field(a, commands::Order::Value),
        Command::Grad(a) => commands::field(a, commands::Order::Gradient),
        Command::Hess(a) => commands::field(a, commands::Order::Hessian),
        Command::Center(a) => commands::center(a),
        Command::Ufr(a) => commands::ufr(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Energy(a) => commands::energy(a),
        Command::Check(a) => commands::check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sacenter: {e}");
            ExitCode::from(e.code())
        }
    }
}
