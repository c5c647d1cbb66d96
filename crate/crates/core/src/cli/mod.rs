//! The `riclab` command line. Every command renders its output to a string,
//! so the same code backs the binary and the tests.
//!
//! Exit codes: 0 success, 1 self-test failure, 2 usage or domain error,
//! 3 resource budget exceeded.

pub mod selftest;

use crate::bounds::{
    phase_curve, phase_rho_max, psi_bounds, srsr_condition_holds, RicPair, Route, PHASE_POINTS, PHASE_RHO_MIN,
};
use crate::error::Error;
use crate::fs::{FsConstants, FsTail};
use crate::lab::deviation::{mc_deviation_with, McConfig, Scale, Tail};
use crate::lab::ensemble::{Ensemble, EnsembleKind};
use crate::lab::ric::{empirical_ric, RicMode};
use crate::parallel;
use crate::rate::{GrowthPoint, RateKind, RateModel, C_FS_PROVEN};
use crate::recovery::experiment::{srsr_experiment, ExperimentConfig};
use crate::recovery::solver::SolverOptions;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "riclab",
    version,
    about = "RIC bounds, recovery phase transitions and Monte Carlo checks"
)]
pub struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// RIC upper bounds at one (delta, rhobar) point, as JSON.
    Bounds(BoundsArgs),
    /// Recovery threshold delta(rho) on a log grid, as CSV.
    PhaseCurve(PhaseArgs),
    /// Monte Carlo estimate of an extreme-eigenvalue deviation probability.
    McDev(McArgs),
    /// Empirical restricted isometry constants of one random matrix.
    RicExact(RicArgs),
    /// Seeded l1 recovery experiment.
    Recover(RecoverArgs),
    /// Explicit Rademacher constants and their consistency checks.
    FsConsts(FsArgs),
    /// Run the built-in oracle suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "ds")]
    pub model: RateKind,
    #[arg(long, default_value_t = 1.0)]
    pub c_tw: f64,
    /// No published value exists; defaults to 1 with a warning.
    #[arg(long)]
    pub c_lr: Option<f64>,
    #[arg(long, default_value_t = C_FS_PROVEN)]
    pub c_fs: f64,
}

impl ModelArgs {
    fn model(&self, warnings: &mut String) -> RateModel {
        if self.model == RateKind::Lr && self.c_lr.is_none() {
            let _ = writeln!(warnings, "warning: --c-lr not given, using the placeholder value 1");
        }
        if self.model == RateKind::Fs && self.c_fs > C_FS_PROVEN {
            let _ = writeln!(
                warnings,
                "warning: --c-fs {} exceeds the proven constant {C_FS_PROVEN}; results are not guaranteed",
                self.c_fs
            );
        }
        RateModel {
            kind: self.model,
            c_tw: self.c_tw,
            c_lr: self.c_lr.unwrap_or(1.0),
            c_fs: self.c_fs,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "singular")]
    pub route: Route,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub rhobar: f64,
    /// Evaluate outside 0 < rhobar < 2*rho0 (reported with admissible=false).
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "singular")]
    pub route: Route,
    #[arg(long, default_value_t = PHASE_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = PHASE_RHO_MIN)]
    pub rho_min: f64,
    /// Defaults to rho0*(1 - 1e-9).
    #[arg(long)]
    pub rho_max: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub ensemble: EnsembleKind,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub rhobar: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "either")]
    pub tail: Tail,
    #[arg(long, value_enum, default_value = "singular")]
    pub scale: Scale,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Prefactor constant of the Rademacher tail bound.
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    /// Require at least 54 rows, the smallest size covered by the Rademacher bound.
    #[arg(long)]
    pub check_fs_domain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RicArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub ensemble: EnsembleKind,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Number of supports in sampled mode.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RecoverArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub ensemble: EnsembleKind,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u64,
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    /// Per-entry noise standard deviation; noise above eta is rescaled.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub plants: u64,
    /// Compute exhaustive order-2s RICs of every matrix.
    #[arg(long)]
    pub ric_precheck: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    /// Include per-trial records.
    #[arg(long)]
    pub details: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FsArgs {
    /// Evaluate the tail bound for M rows (requires --n-cols and --eps).
    #[arg(long)]
    pub m_rows: Option<u64>,
    #[arg(long)]
    pub n_cols: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelftestArgs {
    /// Run a single suite.
    #[arg(long)]
    pub suite: Option<String>,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, stderr: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr,
        }
    }

    fn error(e: &Error, mut stderr: String) -> Self {
        let _ = writeln!(stderr, "error: {e}");
        Self {
            code: exit_code(e),
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable output");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct BoundsOut {
    model: RateKind,
    route: Route,
    delta: f64,
    rhobar: f64,
    t0: f64,
    psi_min: f64,
    psi_max: f64,
    admissible: bool,
}

pub fn cmd_bounds(a: &BoundsArgs) -> Outcome {
    let mut warn = String::new();
    let model = a.model.model(&mut warn);
    let run = || -> crate::Result<BoundsOut> {
        model.validate()?;
        let point = if a.force {
            GrowthPoint::relaxed(a.delta, a.rhobar)?
        } else {
            GrowthPoint::new(a.delta, a.rhobar)?
        };
        let r = psi_bounds(&model, &point, a.route)?;
        Ok(BoundsOut {
            model: model.kind,
            route: a.route,
            delta: point.delta,
            rhobar: point.rhobar,
            t0: r.t0,
            psi_min: r.psi_min,
            psi_max: r.psi_max,
            admissible: point.in_theorem_range(),
        })
    };
    match run() {
        Ok(out) => Outcome::ok(json(&out), warn),
        Err(e) => Outcome::error(&e, warn),
    }
}

pub fn cmd_phase_curve(a: &PhaseArgs) -> Outcome {
    let mut warn = String::new();
    let model = a.model.model(&mut warn);
    let hi = a.rho_max.unwrap_or_else(phase_rho_max);
    match phase_curve(&model, a.route, a.rho_min, hi, a.points) {
        Ok(rows) => {
            let mut out = String::from("# schema=1\nrho,delta_threshold,admissible\n");
            for r in rows {
                let _ = writeln!(out, "{:?},{:?},{}", r.rho, r.delta_threshold, r.admissible);
            }
            Outcome::ok(out, warn)
        }
        Err(e) => Outcome::error(&e, warn),
    }
}

pub fn cmd_mc_dev(a: &McArgs) -> Outcome {
    let mut warn = String::new();
    let model = a.model.model(&mut warn);
    let cfg = McConfig {
        ensemble: Ensemble {
            kind: a.ensemble,
            seed: a.seed,
        },
        n: a.n,
        rhobar: a.rhobar,
        t: a.t,
        trials: a.trials,
        tail: a.tail,
        scale: a.scale,
        model,
        c0: a.c0,
    };
    if a.check_fs_domain && cfg.rows() < crate::fs::MIN_ROWS {
        let e = Error::Domain(format!(
            "r = floor(rhobar*n) = {} is below the minimum of {} rows",
            cfg.rows(),
            crate::fs::MIN_ROWS
        ));
        return Outcome::error(&e, warn);
    }
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a McArgs,
        estimate: crate::lab::deviation::DeviationEstimate,
    }
    match model.validate().and_then(|_| mc_deviation_with(&cfg)) {
        Ok(estimate) => Outcome::ok(json(&Out { config: a, estimate }), warn),
        Err(e) => Outcome::error(&e, warn),
    }
}

pub fn cmd_ric_exact(a: &RicArgs) -> Outcome {
    let mode = match a.mode {
        ModeArg::Exhaustive => RicMode::Exhaustive,
        ModeArg::Sampled => RicMode::Sampled(a.samples),
    };
    let ens = Ensemble {
        kind: a.ensemble,
        seed: a.seed,
    };
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a RicArgs,
        ric: crate::lab::ric::EmpiricalRic,
        gamma: Option<f64>,
        kappa: Option<f64>,
        condition_holds: bool,
    }
    match empirical_ric(&ens, a.n, a.p, a.r, mode) {
        Ok(ric) => {
            let pair = RicPair {
                c_min: ric.c_min_hat,
                c_max: ric.c_max_hat,
            };
            let out = Out {
                config: a,
                ric,
                gamma: pair.gamma().ok(),
                kappa: pair.kappa().ok(),
                condition_holds: srsr_condition_holds(&pair),
            };
            Outcome::ok(json(&out), String::new())
        }
        Err(e) => Outcome::error(&e, String::new()),
    }
}

pub fn cmd_recover(a: &RecoverArgs) -> Outcome {
    let cfg = ExperimentConfig {
        ensemble: Ensemble {
            kind: a.ensemble,
            seed: a.seed,
        },
        n: a.n,
        p: a.p,
        s: a.s,
        eta: a.eta,
        noise_level: a.noise,
        trials: a.trials,
        plants: a.plants,
        ric_precheck: a.ric_precheck,
        solver: SolverOptions {
            max_iter: a.max_iter,
            ..SolverOptions::default()
        },
    };
    match srsr_experiment(&cfg) {
        Ok(mut summary) => {
            if !a.details {
                summary.trials.clear();
            }
            #[derive(Serialize)]
            struct Out<'a> {
                config: &'a RecoverArgs,
                summary: crate::recovery::experiment::ExperimentSummary,
            }
            Outcome::ok(json(&Out { config: a, summary }), String::new())
        }
        Err(e) => Outcome::error(&e, String::new()),
    }
}

pub fn cmd_fs_consts(a: &FsArgs) -> Outcome {
    let c = FsConstants::published();
    let chain = c.verify();
    let tail = match (a.m_rows, a.n_cols, a.eps) {
        (Some(m), Some(n), Some(eps)) => match c.fs_tail_bound(m, n, eps, a.c0) {
            Ok(t) => Some(t),
            Err(e) => return Outcome::error(&e, String::new()),
        },
        (None, None, None) => None,
        _ => {
            return Outcome::error(
                &Error::Domain("--m-rows, --n-cols and --eps must be given together".into()),
                String::new(),
            )
        }
    };
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a FsArgs,
        constants: FsConstants,
        c_fs_from_c_rad: f64,
        v_rad_from_c_rad: f64,
        chain: crate::fs::ChainReport,
        all_pass: bool,
        tail_bound: Option<FsTail>,
    }
    let mut warn = String::new();
    for e in chain.errata() {
        let _ = writeln!(
            warn,
            "note: known erratum detected: {} gives {:.1}, not {:.1}",
            e.name, e.lhs, e.rhs
        );
    }
    let out = Out {
        config: a,
        constants: c,
        c_fs_from_c_rad: c.c_fs_from_c_rad(),
        v_rad_from_c_rad: c.v_rad_from_c_rad(),
        all_pass: chain.all_pass(),
        chain,
        tail_bound: tail,
    };
    Outcome::ok(json(&out), warn)
}

pub fn cmd_selftest(a: &SelftestArgs) -> Outcome {
    let suites = match &a.suite {
        Some(name) => match selftest::find(name) {
            Some(s) => vec![s],
            None => {
                let names: Vec<_> = selftest::SUITES.iter().map(|s| s.name).collect();
                return Outcome::error(
                    &Error::Domain(format!("unknown suite {name:?}; known: {}", names.join(", "))),
                    String::new(),
                );
            }
        },
        None => selftest::SUITES.iter().collect(),
    };
    let reports: Vec<_> = suites.iter().map(|s| (s.name, (s.run)())).collect();
    let mut out = String::new();
    let mut err = String::new();
    let _ = writeln!(out, "{:<14} {:>6} {:>7}", "suite", "checks", "status");
    let mut failed = false;
    for (name, checks) in &reports {
        let bad: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        let _ = writeln!(
            out,
            "{:<14} {:>6} {:>7}",
            name,
            checks.len(),
            if bad.is_empty() { "ok" } else { "FAIL" }
        );
        for c in bad {
            failed = true;
            let _ = writeln!(err, "{name}: {} failed: {}", c.name, c.detail);
        }
    }
    Outcome {
        code: if failed { EXIT_SELFTEST } else { EXIT_OK },
        stdout: out,
        stderr: err,
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::PhaseCurve(a) => cmd_phase_curve(a),
        Command::McDev(a) => cmd_mc_dev(a),
        Command::RicExact(a) => cmd_ric_exact(a),
        Command::Recover(a) => cmd_recover(a),
        Command::FsConsts(a) => cmd_fs_consts(a),
        Command::Selftest(a) => cmd_selftest(a),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text, String::new())
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    if let Err(e) = parallel::configure_from_env() {
        return Outcome::error(&e, String::new());
    }
    let mut out = dispatch(&cli);
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &out.stdout) {
            let _ = writeln!(out.stderr, "error: cannot write {}: {e}", path.display());
            out.code = EXIT_USAGE;
        }
        out.stdout.clear();
    }
    out
}

/// Entry point for the binary: runs, prints, returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use std::io::Write;
    let out = run(args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(s: &str) -> Outcome {
        run(std::iter::once("riclab").chain(s.split_whitespace()))
    }

    #[test]
    fn bounds_ds_singular() {
        let o = run_args("bounds --model ds --route singular --delta 0.5 --rhobar 0.04");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert!((v["t0"].as_f64().unwrap() - 0.626_224).abs() < 1e-5);
        assert!((v["psi_max"].as_f64().unwrap() - 2.335_094).abs() < 1e-5);
        assert_eq!(v["admissible"], true);
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 8);
    }

    #[test]
    fn bounds_lr_warns() {
        let o = run_args("bounds --model lr --delta 0.5 --rhobar 0.04");
        assert_eq!(o.code, 0);
        assert!(o.stderr.contains("warning"));
    }

    #[test]
    fn bounds_out_of_range() {
        assert_eq!(run_args("bounds --delta 0.5 --rhobar 0.5").code, 2);
        let o = run_args("bounds --delta 0.5 --rhobar 0.5 --force");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("\"admissible\": false"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args("bounds --delta 0.5").code, 2);
        assert_eq!(run_args("nonsense").code, 2);
        assert_eq!(run_args("phase-curve --points 0").code, 2);
        assert_eq!(run_args("--help").code, 0);
    }

    #[test]
    fn phase_curve_rows() {
        let o = run_args("phase-curve --points 40");
        assert_eq!(o.code, 0);
        let lines: Vec<_> = o.stdout.lines().collect();
        assert_eq!(lines[0], "# schema=1");
        assert_eq!(lines[1], "rho,delta_threshold,admissible");
        assert_eq!(lines.len(), 42);
    }

    #[test]
    fn budget_exit() {
        let o = run_args("ric-exact --n 10 --p 60 --r 10");
        assert_eq!(o.code, 3);
    }

    #[test]
    fn fs_domain_flag() {
        let o = run_args("mc-dev --ensemble rademacher --n 100 --rhobar 0.2 --t 0.5 --trials 2 --check-fs-domain");
        assert_eq!(o.code, 2);
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_args("selftest --suite nope").code, 2);
    }
}
