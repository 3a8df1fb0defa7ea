//! Command-line front end: one subcommand per experiment, JSON and CSV output.
//!
//! Exit codes: 0 when every check passes, 2 when a numeric check fails,
//! 1 for usage, parameter and I/O errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::ArithmeticMode;
use crate::asllt::{self, LambdaRule, LogAverageMode, TargetSequence};
use crate::error::{Error, Result};
use crate::gaussian::{self, bounds_experiment, BoundParams, BoundReport};
use crate::model::WeightedBernoulliModel;
use crate::progressions::{self, DRange};
use crate::report::{Check, ExperimentReport};
use crate::{dickman, diophantine, fourier, partition, pmf};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "LLT_OUTPUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "llt", version, about = "Lattice local-limit experiments")]
pub struct Cli {
    /// Flat key=value file; keys are long flag names, flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// JSON report path. Defaults to $LLT_OUTPUT_DIR/<experiment>.json, else stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write the report table (or checks) as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact distribution of a weighted Bernoulli sum.
    Pmf(PmfArgs),
    /// Fourier inversion of the characteristic function.
    Invert(InvertArgs),
    /// Binomial point masses against the Gaussian with explicit log-error bound.
    Moivre(MoivreArgs),
    /// Supremum error of the local Gaussian approximation.
    Delta(ModelArgs),
    /// Inequality sweeps for the Gaussian error functionals.
    Bounds(BoundsArgs),
    /// Dickman distribution checks.
    Dickman(DickmanArgs),
    /// Counts of equal-sum tuples from {0, …, P−1}.
    Diophantine(DiophantineArgs),
    /// Partitions into distinct parts.
    Partition(PartitionArgs),
    /// Log-averaged local limit statistic for coin sums.
    Asllt(AslltArgs),
    /// Geometric random model for Burr's problem.
    Burr(BurrArgs),
    /// Progression probabilities against the theta estimate.
    Theta(ThetaArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Weights k_j.
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<u64>,
    /// Zero probabilities ϑ_j; one value is used for every weight.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub theta: Vec<f64>,
}

impl ModelArgs {
    pub fn model(&self) -> Result<WeightedBernoulliModel> {
        let probs = if self.theta.len() == 1 {
            vec![self.theta[0]; self.weights.len()]
        } else {
            self.theta.clone()
        };
        WeightedBernoulliModel::new(self.weights.clone(), probs)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Float64,
    Exact,
    Extended,
}

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "float64")]
    pub mode: ModeArg,
    /// Decimal digits for the extended mode.
    #[arg(long, default_value_t = 50)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Quadrature nodes; defaults to 2Σk_j + 2.
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MoivreArgs {
    #[arg(long, value_delimiter = ',', default_value = "50,100,500,1000")]
    pub n: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.7")]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundKindArg {
    Thm31,
    Thm32,
    Pointwise,
    Lemma36,
    Tails,
    Mills,
    Remark,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKindArg,
    /// Weights for thm32, pointwise and tails (default 1..=20).
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub theta: Vec<f64>,
    /// Target point for thm31.
    #[arg(long, default_value_t = 200)]
    pub n: u64,
    /// First weight for thm31 (default ⌈0.3n⌉).
    #[arg(long)]
    pub k: Option<u64>,
    /// Number of consecutive weights for thm31 (default n − k); ν for remark.
    #[arg(long)]
    pub nu: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.3)]
    pub rho: f64,
    /// Grid points (t-grid or Mills grid).
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 20)]
    pub m_max: u64,
    #[arg(long, default_value_t = 50)]
    pub k_max: u64,
    #[arg(long, default_value_t = 0.05)]
    pub tau: f64,
    #[arg(long, default_value_t = 3)]
    pub q: u32,
    #[arg(long, default_value_t = 0.9)]
    pub c: f64,
    #[arg(long, default_value_t = 10.0)]
    pub x_max: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DickmanCheck {
    Cdf,
    Llt,
    Cycle,
}

#[derive(Debug, Args)]
pub struct DickmanArgs {
    #[arg(long, value_enum, default_value = "llt")]
    pub check: DickmanCheck,
    #[arg(long, default_value_t = 400)]
    pub n: u64,
    /// x for llt, the x-grid for cdf.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct DiophantineArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, value_delimiter = ',', default_value = "100,200,300,400")]
    pub n: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    #[arg(long)]
    pub n: u64,
    /// Tilt; defaults to the saddle point.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AverageModeArg {
    Expectation,
    MonteCarlo,
}

#[derive(Debug, Args)]
pub struct AslltArgs {
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long = "N", default_value_t = 10_000)]
    pub n_max: u64,
    #[arg(long, value_enum, default_value = "expectation")]
    pub mode: AverageModeArg,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BurrArgs {
    /// Value rule: `j+1`, `2j+1`, or a prefix such as `1,3,7+2`.
    #[arg(long, default_value = "j+1")]
    pub lambda: String,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long = "N", default_value_t = 100_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
    pub n: Vec<u64>,
    /// Largest modulus; all 2 ≤ d ≤ n when absent.
    #[arg(long)]
    pub d_max: Option<u64>,
}

/// Builds the report for a parsed command.
pub fn execute(command: &Command) -> Result<ExperimentReport> {
    match command {
        Command::Pmf(a) => {
            let mode = match a.mode {
                ModeArg::Float64 => ArithmeticMode::Float64,
                ModeArg::Exact => ArithmeticMode::ExactRational,
                ModeArg::Extended => ArithmeticMode::extended(a.digits)?,
            };
            pmf::pmf_report(&a.model.model()?, mode)
        }
        Command::Invert(a) => fourier::inversion_report(&a.model.model()?, a.nodes),
        Command::Moivre(a) => {
            let r = gaussian::de_moivre_sweep(&a.n, &a.p, &a.gamma)?;
            Ok(bounds_experiment("moivre", &[r]))
        }
        Command::Delta(a) => gaussian::sup_error_report(&a.model()?),
        Command::Bounds(a) => bounds(a),
        Command::Dickman(a) => match a.check {
            DickmanCheck::Cdf => dickman::cdf_check(a.n, &a.x),
            DickmanCheck::Llt => {
                let x = *a.x.first().ok_or_else(|| Error::range("x is required"))?;
                dickman::llt_check(a.n, x)
            }
            DickmanCheck::Cycle => dickman::poisson_cycle_identity(a.n),
        },
        Command::Diophantine(a) => diophantine::asymptotic_report(a.p, &a.n),
        Command::Partition(a) => partition::partition_report(a.m, a.n, a.sigma),
        Command::Asllt(a) => {
            let mode = match a.mode {
                AverageModeArg::Expectation => LogAverageMode::Expectation,
                AverageModeArg::MonteCarlo => LogAverageMode::MonteCarlo { seed: a.seed },
            };
            asllt::bernoulli_experiment(mode, a.p, a.delta, a.n_max)
        }
        Command::Burr(a) => {
            let rule: LambdaRule = a.lambda.parse()?;
            let model = asllt::solve_r(&rule, a.a)?;
            let targets = TargetSequence::new(a.a, a.delta)?;
            asllt::burr_experiment(&model, &targets, a.n_max, a.seed)
        }
        Command::Theta(a) => {
            let range = a.d_max.map_or(DRange::Full, DRange::UpTo);
            progressions::error_scaling_study(range, &a.n)
        }
    }
}

fn bounds(a: &BoundsArgs) -> Result<ExperimentReport> {
    let theta0 = *a.theta.first().ok_or_else(|| Error::range("theta is required"))?;
    let listed = || -> Result<WeightedBernoulliModel> {
        let weights = if a.weights.is_empty() { (1..=20).collect() } else { a.weights.clone() };
        ModelArgs {
            weights,
            theta: a.theta.clone(),
        }
        .model()
    };
    let reports: Vec<BoundReport> = match a.kind {
        BoundKindArg::Thm31 => {
            let k = a.k.unwrap_or((0.3 * a.n as f64).ceil() as u64);
            let nu = a.nu.unwrap_or(a.n.saturating_sub(k));
            let model = WeightedBernoulliModel::consecutive(k, nu as usize, theta0)?;
            let params = BoundParams::with_delta_from_nu(&model, a.epsilon, a.rho)?;
            let r = gaussian::thm31_rhs(&model, &params, a.n)?;
            let mut out = bounds_experiment("bounds", std::slice::from_ref(&r.report));
            out.set_output("rhs_scale", r.rhs_scale);
            out.set_output("lhs_at_n", r.lhs_at_n);
            out.set_output("constant_at_n", r.constant_at_n);
            out.set_output("delta_admissible", r.delta_admissible);
            out.set_output("params", r.params);
            return Ok(out.input("kind", "thm31").input("n", a.n).input("k", k).input("nu", nu));
        }
        BoundKindArg::Thm32 => {
            let r = gaussian::thm32_check(&listed()?)?;
            let mut out = bounds_experiment("bounds", std::slice::from_ref(&r.report));
            out.set_output("theta_sum", r.theta_sum);
            out.set_output("sup_lhs", r.sup_lhs);
            out.set_output("n0", r.n0);
            out.set_output("centered_constant", r.centered_constant);
            return Ok(out.input("kind", "thm32").input("weights", listed()?.weights()));
        }
        BoundKindArg::Pointwise => {
            let r = gaussian::lemma_pointwise_bounds(&listed()?, &gaussian::symmetric_grid(a.points))?;
            let mut v = vec![r.modulus, r.expansion];
            v.extend(r.sine_sum);
            v
        }
        BoundKindArg::Lemma36 => vec![gaussian::lemma36_sweep(a.m_max, a.k_max, a.points)],
        BoundKindArg::Tails => {
            let r = gaussian::lemma_tail_bounds(&listed()?, a.tau, a.q, a.c)?;
            let mut out = bounds_experiment("bounds", &[r.outer_integral, r.period_integral]);
            out.set_output("phi_q", r.phi_q);
            out.set_output("nodes", r.nodes);
            return Ok(out.input("kind", "tails").input("tau", a.tau).input("q", a.q).input("c", a.c));
        }
        BoundKindArg::Mills => vec![gaussian::mills_sweep(a.x_max, a.points)?],
        BoundKindArg::Remark => {
            let nu = a.nu.unwrap_or(20);
            let r = gaussian::remark_norm_vs_count(nu, a.q)?;
            return Ok(ExperimentReport::new("bounds")
                .input("kind", "remark")
                .input("nu", nu)
                .input("q", a.q)
                .output("comparison", r));
        }
    };
    let kind = format!("{:?}", a.kind).to_lowercase();
    Ok(bounds_experiment("bounds", &reports).input("kind", kind))
}

/// Inserts `--key value` for every config entry whose flag is absent.
pub fn apply_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let path = strs.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            strs.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)?;
    let mut out = args;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let flag = format!("--{key}");
        let present = strs.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
        if !present {
            out.push(format!("{flag}={value}").into());
        }
    }
    Ok(out)
}

fn write_or_print(report: &ExperimentReport, cli: &Cli) -> Result<()> {
    let default_path = std::env::var_os(OUTPUT_DIR_ENV)
        .map(|dir| Path::new(&dir).join(format!("{}.json", report.experiment)));
    match cli.output.clone().or(default_path) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            report.write_json(&path)?
        }
        None => print!("{}", report.to_json()?),
    }
    if let Some(csv) = &cli.csv {
        report.write_csv(csv)?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
///
/// A leading `run` word is accepted and ignored.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if args.get(1).is_some_and(|a| a == "run") {
        args.remove(1);
    }
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = write_or_print(&report, &cli) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if report.pass {
        EXIT_PASS
    } else {
        for c in report.checks.iter().filter(|c| !c.pass) {
            eprintln!("check failed: {}", summarize(c));
        }
        EXIT_CHECK_FAILED
    }
}

fn summarize(c: &Check) -> String {
    format!("{} (value {}, reference {})", c.name, c.value, c.reference)
}
