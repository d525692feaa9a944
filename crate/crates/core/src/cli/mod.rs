//! The `ifccr` command-line tool.
//!
//! ```text
//! ifccr classify        regime flags over a plane of two gains
//! ifccr region          support-function frontiers of bounds and schemes
//! ifccr compare         containment check between two frontier files
//! ifccr boundary-sweep  zero sets of the regime margins, per relay gain
//! ```
//!
//! Exit codes: 0 success (or contained), 1 containment violated, 2 usage
//! error, 3 numerically degenerate input.

pub mod config;

use crate::error::{Error, Result};
use crate::gauss::ChannelGains;
use crate::inner::{capacity_vsi, inner_frontier, Scheme};
use crate::io::{fmt_num, load_channel};
use crate::outer::{outer_frontier, OuterBound};
use crate::regimes::{classify, strong_margin_rx1, strong_margin_rx2, vsi_margin_rx1};
use crate::regions::{
    contains, read_frontiers_csv, write_frontiers_csv, ContainmentReport, Frontier, OptimizerConfig,
};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::{Axis, Plane, Preset, Selection, SweepConfig};

#[derive(Parser, Debug)]
#[command(
    name = "ifccr",
    version,
    about = "Rate regions of the Gaussian interference channel with a cognitive relay"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the interference regime over a plane of two gains.
    Classify(Common),
    /// Compute support-function frontiers for bounds and schemes.
    Region(Common),
    /// Check that every inner frontier lies inside every outer frontier.
    Compare(CompareArgs),
    /// Trace the regime boundaries over a plane for a list of relay gains.
    BoundarySweep(SweepArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// Channel file (`key = value` gains, optionally powers and noise variances).
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Built-in channel and plane: fig4, fig4-body, fig5, fig6, fig7.
    #[arg(long)]
    pub preset: Option<String>,
    /// Sweep config file with dotted keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Plane as `gain=min:max:steps,gain=min:max:steps`.
    #[arg(long)]
    pub plane: Option<String>,
    /// Achievable schemes, comma separated.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Outer bounds, comma separated.
    #[arg(long)]
    pub bound: Option<String>,
    /// Number of support directions in the first quadrant.
    #[arg(long)]
    pub directions: Option<usize>,
    /// Optimizer seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    /// Frontier CSV holding the inner bounds.
    #[arg(long)]
    pub inner: PathBuf,
    /// Frontier CSV holding the outer bounds.
    #[arg(long)]
    pub outer: PathBuf,
    /// Allowed excess of an inner support value, in bits.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Where to write the JSON report; standard output gets the text report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Relay gains `|h1c| = |h2c|`, comma separated.
    #[arg(long)]
    pub hc: Option<String>,
}

/// What a successful run concluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violation,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Violation => 1,
        }
    }
}

/// Entry point of the binary: parses `std::env::args`, honours
/// `IFCCR_THREADS`, and returns the exit status.
pub fn main_entry() -> i32 {
    if let Err(e) = init_threads() {
        eprintln!("ifccr: {e}");
        return e.exit_code();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(o) => o.exit_code(),
        Err(e) => {
            eprintln!("ifccr: {e}");
            e.exit_code()
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("IFCCR_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Usage(format!(
            "IFCCR_THREADS must be a positive integer, got '{v}'"
        ))
    })?;
    // A pool may already exist when embedded; keep it.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Runs a parsed command, writing primary output to `--out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Classify(c) => {
            let cfg = merge(c)?;
            with_output(&cfg.out, stdout, |w| cmd_classify(&cfg, w))?;
            Ok(Outcome::Ok)
        }
        Command::Region(c) => {
            let cfg = merge(c)?;
            with_output(&cfg.out, stdout, |w| cmd_region(&cfg, w))?;
            Ok(Outcome::Ok)
        }
        Command::Compare(a) => cmd_compare(a, stdout),
        Command::BoundarySweep(a) => {
            let mut cfg = merge(&a.common)?;
            if let Some(s) = &a.hc {
                cfg.hc = Some(config::parse_f64_list(s, "--hc")?);
            }
            with_output(&cfg.out, stdout, |w| cmd_boundary_sweep(&cfg, w))?;
            Ok(Outcome::Ok)
        }
    }
}

fn with_output(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| Error::Usage(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

/// Config file first, then flags.
pub fn merge(c: &Common) -> Result<SweepConfig> {
    let mut cfg = match &c.config {
        Some(p) => SweepConfig::load(p)?,
        None => SweepConfig::default(),
    };
    if let Some(p) = &c.preset {
        cfg.preset = Some(p.parse()?);
    }
    if let Some(p) = &c.channel {
        cfg.channel = Some(load_channel(p)?.gains);
    }
    if let Some(p) = &c.plane {
        cfg.plane = Some(p.parse()?);
    }
    let mut select = Vec::new();
    if let Some(s) = &c.scheme {
        for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            select.push(Selection::Scheme(name.parse()?));
        }
    }
    if let Some(s) = &c.bound {
        for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            select.push(Selection::Bound(name.parse()?));
        }
    }
    if c.scheme.is_some() || c.bound.is_some() {
        if select.is_empty() {
            return Err(Error::Usage("--scheme/--bound selection is empty".into()));
        }
        cfg.select = select;
    }
    if c.directions.is_some() {
        cfg.directions = c.directions;
    }
    if c.seed.is_some() {
        cfg.seed = c.seed;
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
    Ok(cfg)
}

fn base_channel(cfg: &SweepConfig) -> Result<ChannelGains> {
    cfg.channel
        .or_else(|| cfg.preset.map(|p| p.channel()))
        .ok_or_else(|| {
            Error::Usage("no channel: give --channel, --preset or a config with gains".into())
        })
}

fn optimizer(cfg: &SweepConfig) -> OptimizerConfig {
    let mut o = OptimizerConfig::default();
    if let Some(s) = cfg.seed {
        o.seed = s;
    }
    o
}

/// Header of the regime-plane CSV.
pub const PLANE_HEADER: [&str; 9] = [
    "h12",
    "h21",
    "strong_rx1",
    "strong_rx2",
    "vsi_rx1",
    "vsi_rx2",
    "strong_both",
    "degraded",
    "rho",
];

/// Regime flags at every plane cell. Columns are named after the plane axes;
/// flags are written as 0/1 and `rho` is empty unless the channel is degraded.
pub fn cmd_classify(cfg: &SweepConfig, w: &mut dyn Write) -> Result<()> {
    let base = base_channel(cfg)?;
    let plane = cfg
        .plane
        .clone()
        .or_else(|| cfg.preset.map(|p| p.plane()))
        .ok_or_else(|| {
            Error::Usage("classify needs --plane, a preset or plane.* config keys".into())
        })?;
    let cells = plane_cells(&base, &plane)?;
    let rows: Vec<Vec<String>> = cells
        .par_iter()
        .map(|(x, y, g)| {
            let r = classify(g);
            let b = |v: bool| if v { "1" } else { "0" }.to_string();
            vec![
                fmt_num(*x),
                fmt_num(*y),
                b(r.strong_rx1),
                b(r.strong_rx2),
                b(r.vsi_rx1),
                b(r.vsi_rx2),
                b(r.strong_both),
                b(r.degraded),
                r.rho.map(fmt_num).unwrap_or_default(),
            ]
        })
        .collect();
    let mut wr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = PLANE_HEADER.iter().map(|s| s.to_string()).collect();
    header[0] = plane.x.gain.clone();
    header[1] = plane.y.gain.clone();
    wr.write_record(&header)?;
    for r in rows {
        wr.write_record(&r)?;
    }
    wr.flush()?;
    Ok(())
}

/// The channels of a plane, `x` fastest.
fn plane_cells(base: &ChannelGains, plane: &Plane) -> Result<Vec<(f64, f64, ChannelGains)>> {
    let mut cells = Vec::with_capacity(plane.x.steps * plane.y.steps);
    for y in plane.y.values() {
        for x in plane.x.values() {
            let g = base
                .with(&plane.x.gain, Complex64::new(x, 0.0))?
                .with(&plane.y.gain, Complex64::new(y, 0.0))?;
            cells.push((x, y, g));
        }
    }
    Ok(cells)
}

/// Default selection: the Sato bound, the four scheme families, and every
/// other outer bound whose hypotheses hold for the channel.
pub fn default_selection(g: &ChannelGains) -> Vec<Selection> {
    let mut s = vec![Selection::Bound(OuterBound::Sato)];
    s.extend(Scheme::FAMILIES.iter().map(|f| Selection::Scheme(*f)));
    s.extend(
        OuterBound::ALL
            .iter()
            .filter(|b| **b != OuterBound::Sato && b.valid_for(g))
            .map(|b| Selection::Bound(*b)),
    );
    s
}

/// Frontiers for a channel. A capacity frontier is appended whenever a
/// regime that determines the capacity region applies.
pub fn region_frontiers(
    g: &ChannelGains,
    select: &[Selection],
    n: usize,
    opt: &OptimizerConfig,
) -> Result<Vec<Frontier>> {
    let mut out = Vec::with_capacity(select.len() + 1);
    for s in select {
        out.push(match s {
            Selection::Scheme(sc) => inner_frontier(g, *sc, n, opt)?,
            Selection::Bound(b) => outer_frontier(g, *b, n, opt)?,
        });
    }
    if let Some(mut cap) = capacity_vsi(g, n, opt)? {
        cap.source = "capacity".into();
        out.push(cap);
    }
    Ok(out)
}

pub fn cmd_region(cfg: &SweepConfig, w: &mut dyn Write) -> Result<()> {
    let g = base_channel(cfg)?;
    let n = cfg.directions.unwrap_or(64);
    if n < 2 {
        return Err(Error::Usage(format!("--directions must be >= 2, got {n}")));
    }
    let select = match (cfg.select.is_empty(), cfg.channel, cfg.preset) {
        (false, _, _) => cfg.select.clone(),
        (true, None, Some(p)) => p.curves(),
        (true, _, _) => default_selection(&g),
    };
    let frontiers = region_frontiers(&g, &select, n, &optimizer(cfg))?;
    write_frontiers_csv(&frontiers, w)
}

/// One inner/outer pair in a comparison.
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub inner: String,
    pub outer: String,
    #[serde(flatten)]
    pub report: ContainmentReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub contained: bool,
    pub tol: f64,
    pub max_gap: f64,
    pub worst_direction: [f64; 2],
    pub pairs: Vec<PairReport>,
}

/// Compares every inner frontier against every outer frontier.
pub fn compare_files(inner: &Path, outer: &Path, tol: f64) -> Result<CompareReport> {
    let read = |p: &Path| -> Result<Vec<Frontier>> {
        let f =
            File::open(p).map_err(|e| Error::Usage(format!("cannot read {}: {e}", p.display())))?;
        let v = read_frontiers_csv(f).map_err(|e| Error::Usage(format!("{}: {e}", p.display())))?;
        if v.is_empty() {
            return Err(Error::Usage(format!("{}: no frontier rows", p.display())));
        }
        Ok(v)
    };
    let (inner, outer) = (read(inner)?, read(outer)?);
    let mut pairs = Vec::new();
    for i in &inner {
        for o in &outer {
            pairs.push(PairReport {
                inner: i.source.clone(),
                outer: o.source.clone(),
                report: contains(o, i, tol)?,
            });
        }
    }
    let worst = pairs
        .iter()
        .max_by(|a, b| a.report.max_gap.total_cmp(&b.report.max_gap))
        .expect("at least one pair");
    Ok(CompareReport {
        contained: pairs.iter().all(|p| p.report.contained),
        tol,
        max_gap: worst.report.max_gap,
        worst_direction: worst.report.worst_direction,
        pairs,
    })
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    if !(a.tol >= 0.0) {
        return Err(Error::Usage(format!("--tol must be >= 0, got {}", a.tol)));
    }
    let r = compare_files(&a.inner, &a.outer, a.tol)?;
    for p in &r.pairs {
        writeln!(
            stdout,
            "{} in {}: {} (max gap {} bits at mu = ({}, {}))",
            p.inner,
            p.outer,
            if p.report.contained {
                "contained"
            } else {
                "VIOLATED"
            },
            fmt_num(p.report.max_gap),
            fmt_num(p.report.worst_direction[0]),
            fmt_num(p.report.worst_direction[1]),
        )?;
    }
    writeln!(
        stdout,
        "verdict: {} (tol {})",
        if r.contained { "contained" } else { "violated" },
        fmt_num(r.tol)
    )?;
    let json = serde_json::to_string_pretty(&r).expect("report serializes");
    match &a.out {
        Some(p) => std::fs::write(p, json + "\n")
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => writeln!(stdout, "{json}")?,
    }
    Ok(if r.contained {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

/// Header of the boundary-sweep CSV.
pub const BOUNDARY_HEADER: [&str; 5] = ["hc", "condition", "line", "h12", "h21"];

const BISECT_TOL: f64 = 1e-12;

/// Margins whose zero sets bound the regimes.
const MARGINS: [(&str, fn(&ChannelGains) -> f64); 3] = [
    ("vsi_rx1", vsi_margin_rx1),
    ("strong_rx1", strong_margin_rx1),
    ("strong_rx2", strong_margin_rx2),
];

/// Zero crossings of each regime margin along every grid line of the plane
/// (rows `line = x` run along `h12`, `line = y` along `h21`), refined by
/// bisection. The relay gains of the base channel are replaced by each `hc`.
pub fn cmd_boundary_sweep(cfg: &SweepConfig, w: &mut dyn Write) -> Result<()> {
    let hcs = cfg
        .hc
        .clone()
        .ok_or_else(|| Error::Usage("boundary-sweep needs --hc or an 'hc' config key".into()))?;
    if hcs.is_empty() {
        return Err(Error::Usage("the --hc list is empty".into()));
    }
    if let Some(h) = hcs.iter().find(|h| !(**h >= 0.0) || !h.is_finite()) {
        return Err(Error::Usage(format!(
            "relay gains must be finite and >= 0, got {h}"
        )));
    }
    let base = match (cfg.channel, cfg.preset) {
        (Some(g), _) => g,
        (None, Some(p)) => p.channel(),
        (None, None) => ChannelGains::real(1.0, 0.0, 0.0, 1.0, 1.0, 1.0)?,
    };
    let plane = cfg.plane.clone().unwrap_or_else(|| Preset::Fig4.plane());
    if plane.x.gain != "h12" || plane.y.gain != "h21" {
        return Err(Error::Usage(
            "boundary-sweep runs over the (h12, h21) plane".into(),
        ));
    }
    let (xs, ys) = (plane.x.values(), plane.y.values());
    let mut jobs = Vec::new();
    for &hc in &hcs {
        for (name, m) in MARGINS {
            for &y in &ys {
                jobs.push((hc, name, m, 'x', y));
            }
            for &x in &xs {
                jobs.push((hc, name, m, 'y', x));
            }
        }
    }
    let rows: Vec<Vec<[f64; 2]>> = jobs
        .par_iter()
        .map(|&(hc, _, margin, along, fixed)| -> Result<Vec<[f64; 2]>> {
            let g0 = base
                .with("h1c", Complex64::new(hc, 0.0))?
                .with("h2c", Complex64::new(hc, 0.0))?;
            let at = |t: f64| -> Result<f64> {
                let (h12, h21) = if along == 'x' { (t, fixed) } else { (fixed, t) };
                Ok(margin(
                    &g0.with("h12", Complex64::new(h12, 0.0))?
                        .with("h21", Complex64::new(h21, 0.0))?,
                ))
            };
            let ts = if along == 'x' { &xs } else { &ys };
            let vals = ts.iter().map(|&t| at(t)).collect::<Result<Vec<_>>>()?;
            let mut hits = Vec::new();
            for k in 0..ts.len() {
                if vals[k] == 0.0 {
                    hits.push(ts[k]);
                } else if k + 1 < ts.len() && vals[k] * vals[k + 1] < 0.0 {
                    let (mut lo, mut hi, mut flo) = (ts[k], ts[k + 1], vals[k]);
                    while hi - lo > BISECT_TOL * (1.0 + lo.abs().max(hi.abs())) {
                        let mid = 0.5 * (lo + hi);
                        let fm = at(mid)?;
                        if fm == 0.0 {
                            lo = mid;
                            hi = mid;
                            break;
                        }
                        if (fm < 0.0) == (flo < 0.0) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    hits.push(0.5 * (lo + hi));
                }
            }
            Ok(hits
                .into_iter()
                .map(|t| if along == 'x' { [t, fixed] } else { [fixed, t] })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(BOUNDARY_HEADER)?;
    for ((hc, name, _, along, _), pts) in jobs.iter().zip(rows) {
        for p in pts {
            wr.write_record([
                fmt_num(*hc),
                name.to_string(),
                along.to_string(),
                fmt_num(p[0]),
                fmt_num(p[1]),
            ])?;
        }
    }
    wr.flush()?;
    Ok(())
}
