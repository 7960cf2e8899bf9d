//! Command-line front end. All lengths share one unit, meters by convention.
//!
//! Exit codes: 0 success, 1 failed validation, 2 usage error,
//! 3 numerical, resource or I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytic::{Distribution, MaternCdf};
use crate::error::Error;
use crate::kernels::McpParams;
use crate::simulate::{
    palm_draws, sample_contact_distance, EmpiricalCdf, PalmMode, SimulationConfig,
};
use crate::validate::{ValidationReport, ValidationSuite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Censored fraction above which `simulate` suggests a larger `--r-max`.
const CENSOR_WARNING: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(
    name = "mcp-distance",
    version,
    about = "Contact and nearest-neighbor distance CDFs of the Matérn cluster process",
    after_help = "Lengths are unitless and shared across flags (meters by convention). \
                  The PPP column is 1 - exp(-m̄ λ_p π r²)."
)]
pub struct Cli {
    /// Suppress warnings on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic CDFs on a radius grid.
    Cdf(CdfArgs),
    /// Empirical CDFs from seeded Monte Carlo realizations.
    Simulate(SimulateArgs),
    /// KS, dominance, PPP-limit and cluster-radius ordering checks.
    Validate(ValidateArgs),
    /// Analytic CDFs for several cluster radii in one long table.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Parent intensity.
    #[arg(long, default_value_t = 20e-6, allow_negative_numbers = true)]
    pub lambda_p: f64,
    /// Mean number of offspring per cluster.
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    pub m_bar: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r_min: f64,
    #[arg(long, default_value_t = 160.0)]
    pub r_max: f64,
    /// Number of grid points, at least 2.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Geometric spacing; needs a positive `--r-min`.
    #[arg(long)]
    pub log_grid: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Number of realizations.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CdfArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Cluster radius.
    #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
    pub r_d: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Cluster radius; repeat for several.
    #[arg(long = "r-d", required = true, num_args = 1..)]
    pub r_d: Vec<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
    pub r_d: f64,
    /// Evaluation grid; its upper end is also the censoring radius.
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also dump the raw samples to `<PREFIX>.contact.txt` and
    /// `<PREFIX>.nn.txt`, one per line, censored samples as `inf`.
    #[arg(long, value_name = "PREFIX")]
    pub raw: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Ascending cluster radii for the PPP-limit and ordering checks.
    #[arg(long = "r-d", num_args = 1.., default_values_t = [20.0, 80.0, 320.0])]
    pub r_d: Vec<f64>,
    /// Cluster radius for the simulation-based checks.
    #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
    pub ks_r_d: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let quiet = cli.quiet;
    let result = match cli.command {
        Command::Cdf(a) => run_cdf(&a),
        Command::Sweep(a) => run_sweep(&a, quiet),
        Command::Simulate(a) => run_simulate(&a, quiet),
        Command::Validate(a) => run_validate(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Model(e) if is_usage_error(e) => EXIT_USAGE,
            CliError::Model(_) | CliError::Io { .. } => EXIT_NUMERICAL,
        }
    }
}

fn is_usage_error(e: &Error) -> bool {
    match e {
        Error::InvalidParameter { .. } | Error::InvalidGrid(_) => true,
        Error::AtRadius { source, .. } => is_usage_error(source),
        _ => false,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl GridArgs {
    /// The radius grid. Linear includes both ends; log is geometric.
    pub fn build(&self) -> CliResult<Vec<f64>> {
        if self.points < 2 {
            return Err(CliError::Usage(format!(
                "--points must be at least 2, got {}",
                self.points
            )));
        }
        if !(self.r_min.is_finite()
            && self.r_max.is_finite()
            && self.r_min >= 0.0
            && self.r_max > self.r_min)
        {
            return Err(CliError::Usage(format!(
                "need 0 <= --r-min < --r-max, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        let last = (self.points - 1) as f64;
        let grid: Vec<f64> = if self.log_grid {
            if self.r_min <= 0.0 {
                return Err(CliError::Usage(
                    "--log-grid needs a positive --r-min".into(),
                ));
            }
            let ratio = (self.r_max / self.r_min).ln();
            (0..self.points)
                .map(|i| self.r_min * (ratio * i as f64 / last).exp())
                .collect()
        } else {
            (0..self.points)
                .map(|i| self.r_min + (self.r_max - self.r_min) * i as f64 / last)
                .collect()
        };
        // Pin the ends so rounding never moves them.
        let mut grid = grid;
        grid[0] = self.r_min;
        *grid.last_mut().unwrap() = self.r_max;
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(
                "grid spacing underflows; use fewer points".into(),
            ));
        }
        Ok(grid)
    }
}

impl ModelArgs {
    fn params(&self, r_d: f64) -> CliResult<McpParams> {
        Ok(McpParams::new(self.lambda_p, self.m_bar, r_d)?)
    }
}

impl SimArgs {
    fn config(&self, r_max: f64) -> SimulationConfig {
        SimulationConfig::new(self.samples, r_max, self.seed).with_workers(self.workers)
    }
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_error(p, e))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_all<F>(path: Option<&Path>, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let label = path.unwrap_or(Path::new("<stdout>"));
    let mut out = open_output(path)?;
    f(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| io_error(label, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn tolerance(tol: f64) -> CliResult<f64> {
    if tol.is_finite() && tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!(
            "--tol must lie in (0, 1), got {tol}"
        )))
    }
}

/// `cdf`: header `r,contact,nearest_neighbor,ppp`, one row per radius.
pub fn run_cdf(args: &CdfArgs) -> CliResult<i32> {
    let grid = args.grid.build()?;
    let eval = MaternCdf::new(args.model.params(args.r_d)?).with_tolerance(tolerance(args.tol)?)?;
    let curve = eval.curve(&grid, &Distribution::ALL)?;
    write_all(args.output.out.as_deref(), |w| match args.output.format {
        Format::Csv => curve.write_csv(w),
        Format::Json => w.write_all(to_json(&curve).as_bytes()),
    })?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    r_d: f64,
    r: f64,
    contact: f64,
    nearest_neighbor: f64,
    ppp: f64,
}

/// `sweep`: long table `r_d,r,contact,nearest_neighbor,ppp`, in the order
/// the radii were given. Repeated radii are dropped with a warning.
pub fn run_sweep(args: &SweepArgs, quiet: bool) -> CliResult<i32> {
    let grid = args.grid.build()?;
    let tol = tolerance(args.tol)?;
    let mut radii: Vec<f64> = Vec::with_capacity(args.r_d.len());
    for &r_d in &args.r_d {
        if radii.contains(&r_d) {
            if !quiet {
                eprintln!("warning: dropping repeated --r-d {r_d}");
            }
        } else {
            radii.push(r_d);
        }
    }
    let mut rows = Vec::with_capacity(radii.len() * grid.len());
    for &r_d in &radii {
        let curve = MaternCdf::new(args.model.params(r_d)?)
            .with_tolerance(tol)?
            .curve(&grid, &Distribution::ALL)?;
        let col = |d| curve.values(d).unwrap();
        let (c, n, p) = (
            col(Distribution::Contact),
            col(Distribution::NearestNeighbor),
            col(Distribution::PppBaseline),
        );
        rows.extend(grid.iter().enumerate().map(|(i, &r)| SweepRow {
            r_d,
            r,
            contact: c[i],
            nearest_neighbor: n[i],
            ppp: p[i],
        }));
    }
    write_all(args.output.out.as_deref(), |w| match args.output.format {
        Format::Csv => {
            writeln!(w, "r_d,r,contact,nearest_neighbor,ppp")?;
            for row in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    row.r_d, row.r, row.contact, row.nearest_neighbor, row.ppp
                )?;
            }
            Ok(())
        }
        Format::Json => w.write_all(to_json(&rows).as_bytes()),
    })?;
    Ok(EXIT_OK)
}

/// Everything needed to reproduce a `simulate` run. Worker count is left
/// out because it does not affect the samples.
#[derive(Debug, Serialize)]
pub struct SimulationMeta {
    pub tool_version: &'static str,
    pub params: McpParams,
    pub seed: u64,
    pub n_samples: usize,
    pub r_max: f64,
    pub nn_sampler: &'static str,
    pub censored_contact: usize,
    pub censored_nn: usize,
}

#[derive(Debug, Serialize)]
struct SimulationOutput<'a> {
    meta: &'a SimulationMeta,
    r: &'a [f64],
    emp_contact: &'a [f64],
    emp_nn: &'a [f64],
}

/// `simulate`: empirical CDFs `r,emp_contact,emp_nn` on the grid. The
/// metadata goes to `<out>.meta.json`, or to stderr when writing to stdout.
/// JSON output embeds the metadata instead.
pub fn run_simulate(args: &SimulateArgs, quiet: bool) -> CliResult<i32> {
    let grid = args.grid.build()?;
    let params = args.model.params(args.r_d)?;
    let config = args.sim.config(args.grid.r_max);
    config.validate()?;

    let contact = sample_contact_distance(&params, &config)?;
    let palm = palm_draws(&params, &config, PalmMode::Full)?;
    let nn = EmpiricalCdf::from_samples(palm.iter().map(|d| d.distance), config.r_max)?;

    let meta = SimulationMeta {
        tool_version: env!("CARGO_PKG_VERSION"),
        params,
        seed: config.seed,
        n_samples: config.n_samples,
        r_max: config.r_max,
        nn_sampler: "palm",
        censored_contact: contact.n_censored(),
        censored_nn: nn.n_censored(),
    };
    if !quiet {
        for (name, e) in [("contact", &contact), ("nearest-neighbor", &nn)] {
            if e.censored_fraction() > CENSOR_WARNING {
                eprintln!(
                    "warning: {:.1}% of {name} samples censored at r_max = {}; consider a larger --r-max",
                    100.0 * e.censored_fraction(),
                    config.r_max
                );
            }
        }
    }

    let emp_contact = grid
        .iter()
        .map(|&r| contact.eval(r))
        .collect::<Result<Vec<_>, _>>()?;
    let emp_nn = grid
        .iter()
        .map(|&r| nn.eval(r))
        .collect::<Result<Vec<_>, _>>()?;
    let out = args.output.out.as_deref();
    match args.output.format {
        Format::Csv => {
            write_all(out, |w| {
                writeln!(w, "r,emp_contact,emp_nn")?;
                for (i, r) in grid.iter().enumerate() {
                    writeln!(w, "{r},{},{}", emp_contact[i], emp_nn[i])?;
                }
                Ok(())
            })?;
            let meta_json = to_json(&meta);
            match out {
                Some(p) => {
                    let mut meta_path = p.as_os_str().to_owned();
                    meta_path.push(".meta.json");
                    let meta_path = PathBuf::from(meta_path);
                    std::fs::write(&meta_path, meta_json).map_err(|e| io_error(&meta_path, e))?;
                }
                None => eprint!("{meta_json}"),
            }
        }
        Format::Json => {
            let doc = SimulationOutput {
                meta: &meta,
                r: &grid,
                emp_contact: &emp_contact,
                emp_nn: &emp_nn,
            };
            write_all(out, |w| w.write_all(to_json(&doc).as_bytes()))?;
        }
    }

    if let Some(prefix) = &args.raw {
        for (suffix, e) in [(".contact.txt", &contact), (".nn.txt", &nn)] {
            let mut path = prefix.as_os_str().to_owned();
            path.push(suffix);
            let path = PathBuf::from(path);
            write_all(Some(&path), |w| e.write_raw(w))?;
        }
    }
    Ok(EXIT_OK)
}

/// `validate`: builds the default suite from the flags and runs it.
pub fn run_validate(args: &ValidateArgs) -> CliResult<i32> {
    let grid = args.grid.build()?;
    let params = args.model.params(args.ks_r_d)?;
    if args.r_d.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(
            "--r-d values must be strictly ascending".into(),
        ));
    }
    let mut suite = ValidationSuite::new(params, args.sim.seed);
    suite.simulation = args.sim.config(args.grid.r_max);
    suite.grid = grid;
    suite.r_d_sweep = args.r_d.clone();
    run_validate_suite(&suite, args.output.out.as_deref(), args.output.format)
}

/// Runs `suite` and writes its report. Returns 0 when every check passes
/// and 1 otherwise; the report is written either way.
pub fn run_validate_suite(
    suite: &ValidationSuite,
    out: Option<&Path>,
    format: Format,
) -> CliResult<i32> {
    let report = suite.run()?;
    write_all(out, |w| match format {
        Format::Json => w.write_all(to_json(&report).as_bytes()),
        Format::Csv => write_report_csv(&report, w),
    })?;
    for failure in &report.failures {
        eprintln!("FAIL: {failure}");
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VALIDATION_FAILED
    })
}

/// One row per check: `check,value,threshold,passed`.
fn write_report_csv(report: &ValidationReport, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "check,value,threshold,passed")?;
    let k = &report.ks_contact;
    writeln!(w, "ks_contact,{},{},{}", k.statistic, k.threshold, k.passed)?;
    let k = &report.ks_nn;
    writeln!(
        w,
        "ks_nearest_neighbor,{},{},{}",
        k.statistic, k.threshold, k.passed
    )?;
    let t = &report.two_sample;
    writeln!(
        w,
        "palm_vs_window_p_value,{},{},{}",
        t.p_value, t.alpha, t.passed
    )?;
    for d in &report.dominance {
        writeln!(
            w,
            "dominance_violations_r_d_{},{},0,{}",
            d.params.r_d(),
            d.violations.len(),
            d.passed()
        )?;
    }
    let c = &report.convergence;
    for g in &c.gaps {
        writeln!(w, "ppp_gap_contact_r_d_{},{},,", g.r_d, g.contact_gap)?;
        writeln!(w, "ppp_gap_nn_r_d_{},{},,", g.r_d, g.nn_gap)?;
    }
    writeln!(
        w,
        "ppp_gap_contact_decreasing,{},,{}",
        c.contact_decreasing, c.contact_decreasing
    )?;
    let last = c.gaps.last().map_or(0.0, |g| g.contact_gap.max(g.nn_gap));
    writeln!(
        w,
        "ppp_gap_final,{},{},{}",
        last, c.threshold, c.final_gap_below_threshold
    )?;
    for o in &report.ordering {
        writeln!(
            w,
            "ordering_violations_r_d_{}_{},{},0,{}",
            o.r_d_small,
            o.r_d_large,
            o.contact_violations.len() + o.nn_violations.len(),
            o.passed()
        )?;
    }
    writeln!(w, "all,{},,{}", report.failures.len(), report.passed)
}
