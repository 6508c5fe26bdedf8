//! Command-line front end.
//!
//! `kcontact {list|check-hj|simulate|gauge} [--config FILE] [--example KEY]
//! [--set name=value ...] [--mode standard|evolution] [--out DIR] [--seed N]`
//!
//! Exit codes: 0 pass, 1 FAIL verdict, 2 config, 3 contract, 4 divergence,
//! 5 integrability.

pub mod commands;
pub mod config;

pub use commands::{
    check_hj, gauge_check, list_text, run_case, simulate, CheckHjReport, GaugeReport, Outcome,
    SimulateOutput, SimulateReport,
};
pub use config::{Plan, RunConfig};

use crate::error::{Error, Result};
use crate::grid::SolutionMap;
use crate::hdw::Residual;
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "kcontact",
    version,
    about = "k-contact Hamilton-Jacobi checks and field simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Example key (overrides the config).
    #[arg(long)]
    pub example: Option<String>,
    /// Parameter or run-setting override, repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub mode: Option<String>,
    /// Directory for report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List examples, sections and solutions.
    List {
        #[arg(long)]
        example: Option<String>,
    },
    /// Verify a section against the Hamilton-Jacobi equation.
    CheckHj(Common),
    /// Integrate a section, lift it and compute residuals.
    Simulate(Common),
    /// Compare the gauge kernel dimension with (n+1)(k^2-1).
    Gauge {
        /// `n=..`, `k=..` and optionally `points=..`.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn build_config(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(e) = &c.example {
        cfg.example = Some(e.clone());
    }
    if let Some(m) = &c.mode {
        cfg.mode = Some(m.clone());
    }
    if let Some(s) = c.seed {
        cfg.seed = Some(s);
    }
    if let Some(o) = &c.out {
        cfg.output = Some(config::OutputConfig {
            dir: Some(o.clone()),
        });
    }
    for s in &c.set {
        cfg.set(s)?;
    }
    Ok(cfg)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_file(dir: &Path, name: &str, body: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let p = dir.join(name);
    std::fs::write(&p, body).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))
}

/// Full-precision number formatting for CSV cells.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// CSV with columns t.., q.., p.., z.., r_q, r_p, r_z.
pub fn map_csv(map: &SolutionMap, residuals: &[Residual]) -> Result<Vec<u8>> {
    let chart = map
        .chart
        .ok_or_else(|| Error::Shape("CSV export needs a phase-space map".into()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (0..map.grid.k()).map(|a| format!("t{}", a + 1)).collect();
    header.extend((0..chart.n).map(|i| format!("q{}", i + 1)));
    for a in 0..chart.k {
        header.extend((0..chart.n).map(|i| format!("p{}_{}", a + 1, i + 1)));
    }
    header.extend((0..chart.k).map(|a| format!("z{}", a + 1)));
    header.extend(["r_q", "r_p", "r_z"].map(String::from));
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for (l, x) in map.values.iter().enumerate() {
        let mut row: Vec<String> = map
            .grid
            .node(&map.grid.multi_index(l))
            .into_iter()
            .map(fmt17)
            .collect();
        row.extend(x.iter().copied().map(fmt17));
        let r = residuals.get(l).copied().unwrap_or(Residual {
            r_q: f64::NAN,
            r_p: f64::NAN,
            r_z: f64::NAN,
        });
        row.extend([r.r_q, r.r_p, r.r_z].map(fmt17));
        w.write_record(&row).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn parse_gauge_args(set: &[String]) -> Result<(usize, usize, usize)> {
    let (mut n, mut k, mut points) = (None, None, 20usize);
    for s in set {
        let (name, v) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects name=value, got '{s}'")))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{name} must be a non-negative integer")))?;
        match name.trim() {
            "n" => n = Some(v),
            "k" => k = Some(v),
            "points" => points = v,
            other => {
                return Err(Error::Config(format!(
                    "gauge accepts n, k and points, not '{other}'"
                )))
            }
        }
    }
    match (n, k) {
        (Some(n), Some(k)) if n >= 1 && k >= 1 => Ok((n, k, points)),
        _ => Err(Error::Config(
            "gauge needs --set n=N --set k=K with N, K >= 1".into(),
        )),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match cli.command {
        Command::List { example } => {
            out.write_all(list_text(example.as_deref())?.as_bytes())
                .map_err(io)?;
            Ok(0)
        }
        Command::CheckHj(c) => {
            let plan = build_config(&c)?.resolve()?;
            let rep = check_hj(&plan)?;
            let json = to_json(&rep)?;
            if let Some(dir) = &plan.out {
                write_file(dir, "check_hj.json", json.as_bytes())?;
            }
            out.write_all(json.as_bytes()).map_err(io)?;
            Ok(rep.exit_code())
        }
        Command::Simulate(c) => {
            let plan = build_config(&c)?.resolve()?;
            let sim = simulate(&plan)?;
            let json = to_json(&sim.report)?;
            if let Some(dir) = &plan.out {
                write_file(dir, "summary.json", json.as_bytes())?;
                if let Some(m) = &sim.map {
                    write_file(dir, "psi.csv", &map_csv(m, &sim.residuals)?)?;
                }
            }
            out.write_all(json.as_bytes()).map_err(io)?;
            Ok(sim.report.exit_code())
        }
        Command::Gauge {
            set,
            seed,
            out: dir,
        } => {
            let (n, k, points) = parse_gauge_args(&set)?;
            let rep = gauge_check(n, k, points, seed.unwrap_or(config::DEFAULT_SEED))?;
            if let Some(dir) = &dir {
                write_file(dir, "gauge.json", to_json(&rep)?.as_bytes())?;
            }
            writeln!(out, "{}", rep.line()).map_err(io)?;
            Ok(match rep.verdict {
                crate::corpus::Verdict::Pass => 0,
                crate::corpus::Verdict::Fail => 1,
            })
        }
    }
}

/// Run with explicit arguments (including the program name) and streams;
/// returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Size the global thread pool from `KCONTACT_THREADS` if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("KCONTACT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}
