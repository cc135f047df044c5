//! Command implementations for the `uav-tdma` binary.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use uav_tdma::baselines::{circle_trajectory, circular_init, rate_upper_bound, CircleSpec};
use uav_tdma::optimizer::{BcdConfig, SolveReport, SolveStatus};
use uav_tdma::scenario::{load_scenario, Point2, Scenario, Schedule, Trajectory};
use uav_tdma::scheme::SchemeRegistry;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] uav_tdma::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{0}")]
    Usage(String),
    #[error("every sweep entry failed")]
    SweepFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_config_error() => EXIT_CONFIG,
            CliError::Read { .. } | CliError::Usage(_) => EXIT_CONFIG,
            _ => EXIT_SOLVER,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "uav-tdma", version, about = "Max-min rate TDMA scheduling and trajectory design for a UAV base station")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one scenario with one scheme.
    Solve(SolveArgs),
    /// Run every scheme over a list of periods.
    Sweep(SweepArgs),
    /// Write only the circular initial trajectory.
    Init(InitArgs),
    /// List the available schemes.
    Schemes,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    /// Override the period T in seconds.
    #[arg(long)]
    pub period: Option<f64>,
    /// Target slot length in seconds; N = ceil(T / slot length).
    #[arg(long)]
    pub slot_length: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Stop when the fractional increase of the max-min rate drops below this.
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    /// Sub-slots per slot for binary schedule recovery.
    #[arg(long, default_value_t = 100)]
    pub tau: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// Reserved; no part of the solver is randomized yet.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SolverArgs {
    pub fn config(&self) -> BcdConfig {
        BcdConfig {
            epsilon: self.epsilon,
            tau: self.tau,
            max_outer_iters: self.max_iters,
            ..BcdConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub scenario: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, default_value = "proposed")]
    pub scheme: String,
    #[command(flatten)]
    pub period: PeriodArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Also write the trajectory sampled every this many seconds.
    #[arg(long)]
    pub decimate: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Comma-separated periods in seconds.
    #[arg(long, value_delimiter = ',', default_value = "30,60,90,120")]
    pub periods: Vec<f64>,
    /// Slot length used to derive N for each period; defaults to the
    /// scenario's own.
    #[arg(long)]
    pub slot_length: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct InitArgs {
    pub scenario: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Circle radius in meters instead of the automatic choice.
    #[arg(long)]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub period: PeriodArgs,
}

/// Formats like C's `%.9g`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn read_scenario(path: &Path) -> CliResult<Scenario> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(load_scenario(&text)?)
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(uav_tdma::Error::NonPositiveParameter(name.into()).into())
    }
}

fn apply_period(s: &Scenario, p: &PeriodArgs) -> CliResult<Scenario> {
    if p.period.is_none() && p.slot_length.is_none() {
        return Ok(s.clone());
    }
    let period = positive("period", p.period.unwrap_or(s.period_s()))?;
    let slot = positive("slot_length", p.slot_length.unwrap_or(s.slot_len_s()))?;
    Ok(s.with_period(period, Scenario::slots_for(period, slot))?)
}

struct Csv {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl Csv {
    fn create(dir: &Path, name: &str, header: &[&str]) -> CliResult<Self> {
        let path = dir.join(name);
        let mut writer = csv::Writer::from_path(&path).map_err(|source| CliError::Csv {
            path: path.clone(),
            source,
        })?;
        writer.write_record(header).map_err(|source| CliError::Csv {
            path: path.clone(),
            source,
        })?;
        Ok(Self { path, writer })
    }

    fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|source| CliError::Csv {
            path: self.path.clone(),
            source,
        })
    }

    fn finish(mut self) -> CliResult<()> {
        self.writer.flush().map_err(|source| CliError::Write {
            path: self.path.clone(),
            source,
        })
    }
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

/// Waypoints are written losslessly so a reloaded path keeps its exact
/// feasibility margin.
fn write_trajectory(dir: &Path, t: &Trajectory) -> CliResult<()> {
    let mut w = Csv::create(dir, "trajectory.csv", &["slot", "x_m", "y_m"])?;
    for (n, q) in t.waypoints().iter().enumerate() {
        w.row([(n + 1).to_string(), q.x.to_string(), q.y.to_string()])?;
    }
    w.finish()
}

fn write_schedule(dir: &Path, a: &Schedule) -> CliResult<()> {
    let mut w = Csv::create(dir, "schedule.csv", &["slot", "user", "alpha"])?;
    for n in 0..a.num_slots() {
        for i in 0..a.num_users() {
            w.row([(n + 1).to_string(), (i + 1).to_string(), fmt_num(a.get(i, n))])?;
        }
    }
    w.finish()
}

fn write_speed(dir: &Path, t: &Trajectory, slot_len: f64) -> CliResult<()> {
    let mut w = Csv::create(dir, "speed.csv", &["slot", "speed_mps"])?;
    for (n, v) in t.speeds(slot_len).into_iter().enumerate() {
        w.row([(n + 1).to_string(), fmt_num(v)])?;
    }
    w.finish()
}

fn write_binary_schedule(dir: &Path, a: &Schedule) -> CliResult<()> {
    let mut w = Csv::create(dir, "binary_schedule.csv", &["subslot", "user"])?;
    for n in 0..a.num_slots() {
        if let Some(i) = (0..a.num_users()).find(|&i| a.get(i, n) == 1.0) {
            w.row([(n + 1).to_string(), (i + 1).to_string()])?;
        }
    }
    w.finish()
}

fn write_trace(dir: &Path, r: &SolveReport) -> CliResult<()> {
    let mut w = Csv::create(dir, "trace.csv", &["iteration", "eta", "eta_lb"])?;
    for (k, eta) in r.eta_trace.iter().enumerate() {
        let lb = if k == 0 { String::new() } else { fmt_num(r.lb_trace[k - 1]) };
        w.row([k.to_string(), fmt_num(*eta), lb])?;
    }
    w.finish()
}

fn write_report(dir: &Path, s: &Scenario, r: &SolveReport) -> CliResult<()> {
    let mut w = Csv::create(dir, "report.csv", &["key", "value"])?;
    let starved: Vec<String> = r.starved_users.iter().map(|i| (i + 1).to_string()).collect();
    let rows = [
        ("scheme", r.scheme.clone()),
        ("status", r.status.as_str().to_string()),
        ("iterations", r.iterations.to_string()),
        ("period_s", fmt_num(s.period_s())),
        ("num_slots", s.num_slots().to_string()),
        ("eta_relaxed", fmt_num(r.eta_relaxed)),
        ("eta_binary", fmt_num(r.binary.eta)),
        ("binary_gap", fmt_num(r.binary_gap)),
        ("upper_bound", fmt_num(rate_upper_bound(s))),
        ("tau", r.binary.tau.to_string()),
        ("qcqp_fallbacks", r.qcqp_fallbacks.to_string()),
        ("starved_users", starved.join(" ")),
        ("wall_time_s", fmt_num(r.wall_time.as_secs_f64())),
    ];
    for (k, v) in rows {
        w.row([k.to_string(), v])?;
    }
    w.finish()
}

fn write_decimated(dir: &Path, t: &Trajectory, slot_len: f64, every_s: f64) -> CliResult<()> {
    let every_s = positive("decimate", every_s)?;
    let stride = ((every_s / slot_len).round() as usize).max(1);
    let mut w = Csv::create(dir, "trajectory_decimated.csv", &["t_s", "x_m", "y_m"])?;
    for (n, q) in t.waypoints().iter().enumerate().step_by(stride) {
        w.row([fmt_num(n as f64 * slot_len), fmt_num(q.x), fmt_num(q.y)])?;
    }
    w.finish()
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<SolveReport> {
    let s = apply_period(&read_scenario(&args.scenario)?, &args.period)?;
    let cfg = args.solver.config();
    cfg.validate()?;
    let registry = SchemeRegistry::default();
    let scheme = registry.get(&args.scheme)?;
    let report = scheme.run(&s, &cfg)?;

    ensure_dir(&args.out)?;
    write_trajectory(&args.out, &report.final_trajectory)?;
    write_schedule(&args.out, &report.final_schedule)?;
    write_speed(&args.out, &report.final_trajectory, s.slot_len_s())?;
    write_binary_schedule(&args.out, &report.binary.schedule)?;
    write_trace(&args.out, &report)?;
    write_report(&args.out, &s, &report)?;
    if let Some(every) = args.decimate {
        write_decimated(&args.out, &report.final_trajectory, s.slot_len_s(), every)?;
    }
    Ok(report)
}

/// One (period, scheme) row of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub period_s: f64,
    pub scheme: String,
    pub upper_bound: f64,
    pub outcome: Result<SolveReport, String>,
}

pub fn run_sweep(base: &Scenario, periods: &[f64], slot_len: f64, cfg: &BcdConfig) -> CliResult<Vec<SweepRow>> {
    let slot_len = positive("slot_length", slot_len)?;
    let registry = SchemeRegistry::default();
    let mut jobs = Vec::new();
    for &t in periods {
        let s = base.with_period(positive("period", t)?, Scenario::slots_for(t, slot_len))?;
        for name in registry.names() {
            jobs.push((s.clone(), name));
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(s, name)| SweepRow {
            period_s: s.period_s(),
            scheme: name.to_string(),
            upper_bound: rate_upper_bound(&s),
            outcome: registry
                .get(name)
                .and_then(|scheme| scheme.run(&s, cfg))
                .map_err(|e| e.to_string()),
        })
        .collect())
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<Vec<SweepRow>> {
    let base = read_scenario(&args.scenario)?;
    let cfg = args.solver.config();
    cfg.validate()?;
    if args.periods.is_empty() {
        return Err(CliError::Usage("no periods given".into()));
    }
    let slot_len = args.slot_length.unwrap_or(base.slot_len_s());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = pool.install(|| run_sweep(&base, &args.periods, slot_len, &cfg))?;

    ensure_dir(&args.out)?;
    let mut w = Csv::create(
        &args.out,
        "sweep.csv",
        &["T_s", "scheme", "eta_relaxed", "eta_binary", "upper_bound", "iters", "status"],
    )?;
    for row in &rows {
        let t = fmt_num(row.period_s);
        let ub = fmt_num(row.upper_bound);
        match &row.outcome {
            Ok(r) => w.row([
                t,
                row.scheme.clone(),
                fmt_num(r.eta_relaxed),
                fmt_num(r.binary.eta),
                ub,
                r.iterations.to_string(),
                r.status.as_str().to_string(),
            ])?,
            Err(msg) => {
                eprintln!("warning: T={} scheme={}: {msg}", row.period_s, row.scheme);
                w.row([t, row.scheme.clone(), String::new(), String::new(), ub, String::new(), "failed".into()])?
            }
        }
    }
    w.finish()?;
    if rows.iter().all(|r| r.outcome.is_err()) {
        return Err(CliError::SweepFailed);
    }
    Ok(rows)
}

pub fn cmd_init(args: &InitArgs) -> CliResult<(CircleSpec, Trajectory)> {
    let s = apply_period(&read_scenario(&args.scenario)?, &args.period)?;
    let (spec, t) = match args.radius {
        None => circular_init(&s)?,
        Some(radius) => {
            let spec = CircleSpec {
                center: Point2::centroid(s.users()),
                radius,
            };
            (spec, circle_trajectory(&s, &spec)?)
        }
    };
    ensure_dir(&args.out)?;
    write_trajectory(&args.out, &t)?;
    let mut w = Csv::create(&args.out, "circle.csv", &["center_x_m", "center_y_m", "radius_m"])?;
    w.row([fmt_num(spec.center.x), fmt_num(spec.center.y), fmt_num(spec.radius)])?;
    w.finish()?;
    Ok((spec, t))
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args).map(|r| {
            println!(
                "{}: eta_relaxed={} eta_binary={} iterations={} status={}",
                r.scheme,
                fmt_num(r.eta_relaxed),
                fmt_num(r.binary.eta),
                r.iterations,
                r.status.as_str()
            );
            if r.status == SolveStatus::MaxIters {
                eprintln!("warning: iteration limit reached before convergence");
            }
            if !r.starved_users.is_empty() {
                eprintln!("warning: users with no airtime: {:?}", r.starved_users);
            }
        }),
        Command::Sweep(args) => cmd_sweep(args).map(|rows| {
            println!("wrote {} rows to {}", rows.len(), args.out.join("sweep.csv").display());
        }),
        Command::Init(args) => cmd_init(args).map(|(spec, _)| {
            println!(
                "circle center=({}, {}) radius={}",
                fmt_num(spec.center.x),
                fmt_num(spec.center.y),
                fmt_num(spec.radius)
            );
        }),
        Command::Schemes => {
            for scheme in SchemeRegistry::default().iter() {
                println!("{:<10} {}", scheme.name(), scheme.description());
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
