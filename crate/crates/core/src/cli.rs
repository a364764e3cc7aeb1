//! Command-line front end. Parameters come from flags, then from a flat
//! `key = value` config file (`--config`), then from built-in defaults; the
//! default tolerance can be set with `EIKONAL_LINES_TOL`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{critical_angle, lsc_report, scan_mesh, sweep_gap};
use crate::costfn::JumpCost;
use crate::energy::{energy_gap, gap_report, GapReport, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fields::{competitor_field, one_d_transition, tiling_field, viscosity_field, PiecewiseField};
use crate::plot::write_svg;
use crate::raster::{default_bounds, flux_check, random_rectangles, sample_field};

pub const TOL_ENV: &str = "EIKONAL_LINES_TOL";

pub const VERDICT_COMPETITOR: &str = "COMPETITOR WINS";
pub const VERDICT_VISCOSITY: &str = "VISCOSITY WINS";
pub const LSC_CERTIFIED: &str = "LSC VIOLATION CERTIFIED: lim E(m_n) < E(m_0)";
pub const LSC_NOT_CERTIFIED: &str = "LSC VIOLATION NOT CERTIFIED";

const CONFIG_KEYS: &[&str] = &[
    "cost", "theta0", "tol", "seed", "p", "thetas", "theta-file", "ns", "grid", "out", "rects", "n", "probes",
];

#[derive(Debug, Parser)]
#[command(name = "eikonal-lines", version, about = "Line energies of eikonal vector fields on a disk with a kite")]
pub struct Cli {
    /// Flat `key = value` file; flags take precedence over its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies of the viscosity solution and the competitor, and their gap.
    Gap(GapArgs),
    /// Angle below which the competitor wins for the cost t^p.
    CriticalAngle(CriticalArgs),
    /// Gap table over a list of angles.
    Sweep(SweepArgs),
    /// Energies of the tiling sequence and their L1 distances to the straight wall.
    Lsc(LscArgs),
    /// Unit-norm, flux and trace certificates for every field.
    Check(CheckArgs),
    /// SVG figure of the domain and both fields.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct GapArgs {
    /// `power:<p>` or `table:<csv path>`.
    #[arg(long)]
    pub cost: Option<String>,
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub cost: Option<String>,
    /// Comma-separated angles.
    #[arg(long)]
    pub thetas: Option<String>,
    /// File with one angle per line (`#` comments allowed).
    #[arg(long)]
    pub theta_file: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LscArgs {
    #[arg(long)]
    pub cost: Option<String>,
    #[arg(long)]
    pub theta0: Option<f64>,
    /// Comma-separated tile counts.
    #[arg(long)]
    pub ns: Option<String>,
    /// Raster resolution `NXxNY` or `N`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub grid: Option<String>,
    /// Number of random rectangles for the flux check.
    #[arg(long)]
    pub rects: Option<usize>,
    /// Tile count of the tiling field.
    #[arg(long)]
    pub n: Option<usize>,
    /// Region probes per rectangle edge.
    #[arg(long)]
    pub probes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Entries of a flat `key = value` config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected `key = value`", lineno + 1)))?;
            let key = k.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse(format!("config line {}: unknown key `{}`", lineno + 1, k.trim())));
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(Config { entries })
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }
}

struct Resolver {
    config: Config,
}

impl Resolver {
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.config.get(key),
        }
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.pick(flag, key)?
            .ok_or_else(|| Error::Parse(format!("missing `--{key}` (flag or config entry)")))
    }

    fn tol(&self, flag: Option<f64>) -> Result<f64> {
        let tol = match self.pick(flag, "tol")? {
            Some(t) => t,
            None => match std::env::var(TOL_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{TOL_ENV}: cannot parse `{v}`")))?,
                Err(_) => DEFAULT_TOL,
            },
        };
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Domain {
                what: "tol",
                value: tol,
                range: "(0, +inf)",
            });
        }
        Ok(tol)
    }

    fn cost(&self, flag: Option<String>) -> Result<JumpCost> {
        JumpCost::from_spec(&self.require(flag, "cost")?)
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("{what}: cannot parse `{t}`"))))
        .collect()
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("grid: expected `NXxNY` or `N`, got `{s}`"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn read_theta_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty() && *l != "theta0")
        .map(|l| l.parse().map_err(|_| Error::Parse(format!("{}: cannot parse angle `{l}`", path.display()))))
        .collect()
}

/// Where CSV output goes: a file when a path is given, `stdout` otherwise.
fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Certificates were computed but at least one failed.
    CheckFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::CheckFailed => 1,
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let r = Resolver { config };
    let seed = r.pick(cli.seed, "seed")?.unwrap_or(0);
    match cli.command {
        Command::Gap(a) => cmd_gap(&r, a, out),
        Command::CriticalAngle(a) => cmd_critical_angle(&r, a, out, err),
        Command::Sweep(a) => cmd_sweep(&r, a, out),
        Command::Lsc(a) => cmd_lsc(&r, a, out),
        Command::Check(a) => cmd_check(&r, a, seed, out),
        Command::Plot(a) => cmd_plot(&r, a, out),
    }
}

fn cmd_gap(r: &Resolver, a: GapArgs, out: &mut dyn Write) -> Result<Outcome> {
    let f = r.cost(a.cost)?;
    let theta0 = r.require(a.theta0, "theta0")?;
    let tol = r.tol(a.tol)?;
    let report = gap_report(&f, theta0, tol)?;
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(GapReport::CSV_HEADER)?;
        w.write_record(report.csv_record())?;
        w.flush()?;
    }
    let verdict = if report.competitor_wins() {
        VERDICT_COMPETITOR
    } else {
        VERDICT_VISCOSITY
    };
    writeln!(out, "{verdict}")?;
    Ok(Outcome::Success)
}

fn cmd_critical_angle(r: &Resolver, a: CriticalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let p = r.require(a.p, "p")?;
    let tol = r.tol(a.tol)?;
    match critical_angle(p, tol) {
        Ok(res) => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "p", "theta_star", "bracket_lo", "bracket_hi", "gap_at_lo", "gap_at_hi", "iterations", "crossings",
            ])?;
            w.write_record([
                res.p.to_string(),
                res.theta_star.to_string(),
                res.bracket.0.to_string(),
                res.bracket.1.to_string(),
                res.gap_at_lo.to_string(),
                res.gap_at_hi.to_string(),
                res.iterations.to_string(),
                res.crossings.to_string(),
            ])?;
            w.flush()?;
            Ok(Outcome::Success)
        }
        Err(e @ Error::NoSignChange { .. }) => {
            let f = JumpCost::power(p)?;
            writeln!(err, "scanned mesh (theta0,gap):")?;
            for t in scan_mesh() {
                let g = energy_gap(&f, t, tol).map_or_else(|e| e.to_string(), |g| g.to_string());
                writeln!(err, "{t},{g}")?;
            }
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn cmd_sweep(r: &Resolver, a: SweepArgs, out: &mut dyn Write) -> Result<Outcome> {
    let f = r.cost(a.cost)?;
    let tol = r.tol(a.tol)?;
    let thetas = match (r.pick(a.thetas, "thetas")?, r.pick(a.theta_file, "theta-file")?) {
        (Some(list), _) => parse_list(&list, "thetas")?,
        (None, Some(path)) => read_theta_file(&path)?,
        (None, None) => return Err(Error::Parse("missing `--thetas` or `--theta-file`".into())),
    };
    let rows = sweep_gap(&f, &thetas, tol)?;
    let path: Option<PathBuf> = r.pick(a.out, "out")?;
    with_output(path.as_deref(), out, |o| {
        let mut w = csv::Writer::from_writer(o);
        w.write_record(["theta0", "gap", "E_viscosity", "E_competitor", "I1", "I2", "I3", "quad_err"])?;
        for row in &rows {
            w.write_record([
                row.theta0.to_string(),
                row.gap.to_string(),
                row.e_viscosity.to_string(),
                row.e_competitor.to_string(),
                row.components.i1.to_string(),
                row.components.i2.to_string(),
                row.components.i3.to_string(),
                row.quad_err.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    Ok(Outcome::Success)
}

fn cmd_lsc(r: &Resolver, a: LscArgs, out: &mut dyn Write) -> Result<Outcome> {
    let f = r.cost(a.cost)?;
    let theta0 = r.require(a.theta0, "theta0")?;
    let tol = r.tol(a.tol)?;
    let ns: Vec<usize> = parse_list(&r.pick(a.ns, "ns")?.unwrap_or_else(|| "1,2,4,8".into()), "ns")?;
    let grid = parse_grid(&r.pick(a.grid, "grid")?.unwrap_or_else(|| "1024x1024".into()))?;
    let report = lsc_report(theta0, &f, &ns, grid, tol)?;
    let path: Option<PathBuf> = r.pick(a.out, "out")?;
    with_output(path.as_deref(), out, |o| {
        let mut w = csv::Writer::from_writer(o);
        w.write_record(crate::analysis::LscReport::CSV_HEADER)?;
        for row in &report.rows {
            w.write_record([row.n.to_string(), row.energy.to_string(), row.l1_distance.to_string()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let energy_tol = 10.0 * tol + 1e-8 * report.energy_of_1d.abs();
    writeln!(out, "E(m_0) = {}", report.energy_of_1d)?;
    writeln!(out, "margin = {}", report.margin())?;
    if report.violation_certified(energy_tol) {
        writeln!(out, "{LSC_CERTIFIED}")?;
    } else {
        writeln!(out, "{LSC_NOT_CERTIFIED}")?;
    }
    Ok(Outcome::Success)
}

/// Thresholds of the certificates reported by `check`.
pub const NORM_THRESHOLD: f64 = 1e-12;
pub const FLUX_THRESHOLD: f64 = 1e-7;
pub const TRACE_THRESHOLD: f64 = 1e-12;

/// `max |m₊·ν − m₋·ν|` over `samples` parameters of every jump curve.
pub fn max_trace_gap(field: &PiecewiseField, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for c in field.jump_curves() {
        let (a, b) = c.parameter_range();
        for k in 0..samples {
            let s = a + (b - a) * (k as f64 + 0.5) / samples as f64;
            let nu = c.normal(s);
            worst = worst.max((c.trace_plus(s).dot(nu) - c.trace_minus(s).dot(nu)).abs());
        }
    }
    worst
}

fn cmd_check(r: &Resolver, a: CheckArgs, seed: u64, out: &mut dyn Write) -> Result<Outcome> {
    let theta0 = r.require(a.theta0, "theta0")?;
    let (nx, ny) = parse_grid(&r.pick(a.grid, "grid")?.unwrap_or_else(|| "512".into()))?;
    let rects = r.pick(a.rects, "rects")?.unwrap_or(1000);
    let n = r.pick(a.n, "n")?.unwrap_or(4);
    let probes = r.pick(a.probes, "probes")?.unwrap_or(16);
    let fields = [
        ("viscosity", viscosity_field(theta0)?),
        ("competitor", competitor_field(theta0)?),
        ("one-d-transition", one_d_transition(theta0)?),
        ("tiling", tiling_field(theta0, n)?),
    ];
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (name, field) in &fields {
        let grid = sample_field(field, default_bounds(field), nx, ny, 0.0)?;
        let norm = grid.max_norm_deviation();
        let flux = flux_check(field, &random_rectangles(field, rects, seed), probes)?;
        let trace = max_trace_gap(field, 1000);
        let pass = norm <= NORM_THRESHOLD && flux <= FLUX_THRESHOLD && trace <= TRACE_THRESHOLD;
        all_pass &= pass;
        rows.push([name.to_string(), norm.to_string(), flux.to_string(), trace.to_string(), pass.to_string()]);
    }
    let path: Option<PathBuf> = r.pick(a.out, "out")?;
    with_output(path.as_deref(), out, |o| {
        writeln!(o, "# seed = {seed}")?;
        let mut w = csv::Writer::from_writer(o);
        w.write_record(["field", "norm_deviation", "max_flux", "trace_gap", "pass"])?;
        for row in &rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    })?;
    if all_pass {
        writeln!(out, "ALL CERTIFICATES PASS")?;
        Ok(Outcome::Success)
    } else {
        writeln!(out, "CERTIFICATE FAILURE")?;
        Ok(Outcome::CheckFailed)
    }
}

fn cmd_plot(r: &Resolver, a: PlotArgs, out: &mut dyn Write) -> Result<Outcome> {
    let theta0 = r.require(a.theta0, "theta0")?;
    let path: PathBuf = r.pick(a.out, "out")?.unwrap_or_else(|| PathBuf::from("figure.svg"));
    write_svg(theta0, &path)?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(Outcome::Success)
}
