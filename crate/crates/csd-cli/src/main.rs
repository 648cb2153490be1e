//! `csd` — goodness-of-fit testing for dependence structure.
//!
//! Subcommands: `test` (wild-bootstrap GoF test), `estimate` (exact,
//! streaming or random-feature CSD²), `sample` (synthetic copula data),
//! `bench` (scaling/power studies as CSV), `self-check` (finite-difference
//! and oracle suites).
//!
//! Exit codes: 0 ok / fail-to-reject, 1 input error, 2 config error,
//! 3 reject, 4 self-check failure.

mod io;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use csd::bench::{run_power, run_scaling, theta_for_tau, BenchGrid};
use csd::estimator::{
    csd_streaming, csd_v_statistic, pseudo_observations, wild_bootstrap_test, BootstrapOptions,
    CsdEstimate, PseudoSample, TestReport,
};
use csd::generators::{Family, GeneratorSpec};
use csd::kernel::{median_bandwidth, BaseKernelSpec, KernelKind};
use csd::models::CopulaModel;
use csd::rf::{draw_basis_for, rf_csd};
use csd::sampling::{sample, SamplerConfig};
use csd::stein::SteinKernelEvaluator;
use csd::CsdError;

const EXIT_INPUT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_REJECT: u8 = 3;
const EXIT_SELFCHECK: u8 = 4;

#[derive(Parser)]
#[command(name = "csd", version, about = "Copula-Stein discrepancy: dependence-aware goodness-of-fit")]
struct Cli {
    /// Worker threads (falls back to the CSD_THREADS env var, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Deterministic fixed-order reductions. Always honored — batch sums use
    /// a fixed block order regardless of thread count — the flag exists so
    /// configs can record it.
    #[arg(long, global = true, default_value_t = true, value_parser = clap::value_parser!(bool))]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wild-bootstrap goodness-of-fit test of data against a target copula.
    Test(TestArgs),
    /// Point estimate of the squared discrepancy (exact, streaming or RF).
    Estimate(EstimateArgs),
    /// Draw synthetic data from a copula model.
    Sample(SampleArgs),
    /// Scaling and power studies, written as CSV under a results directory.
    Bench(BenchArgs),
    /// Run the finite-difference and oracle verification suites.
    #[command(name = "self-check")]
    SelfCheck(SelfCheckArgs),
}

#[derive(Args)]
struct ModelKernelArgs {
    /// Target copula: inline JSON or a path to a JSON file.
    #[arg(long)]
    model: String,

    /// Base kernel bandwidth: a number, or "median" for the median heuristic.
    #[arg(long, default_value = "median")]
    bandwidth: String,

    /// Base kernel: "weighted_rbf" (boundary-weighted, calibrated level) or
    /// "rbf" (plain Gaussian; carries a null bias on the cube — diagnostics
    /// only).
    #[arg(long, default_value = "weighted_rbf")]
    kernel: String,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    mk: ModelKernelArgs,

    /// Input CSV (header row, one column per coordinate).
    #[arg(long)]
    input: PathBuf,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Input is already pseudo-observations on (0,1)^d; skip the rank
    /// transform.
    #[arg(long)]
    pseudo_obs: bool,

    /// Number of wild-bootstrap draws B.
    #[arg(long, default_value_t = 500)]
    bootstrap: usize,

    /// Test level α.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Seed for the bootstrap Rademacher weights.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Also dump the B bootstrap statistics as a one-column CSV.
    #[arg(long)]
    bootstrap_stats_csv: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    mk: ModelKernelArgs,

    /// Input CSV (header row, one column per coordinate).
    #[arg(long)]
    input: PathBuf,

    /// Write the JSON estimate here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Input is already pseudo-observations on (0,1)^d.
    #[arg(long)]
    pseudo_obs: bool,

    /// Streaming evaluation with this block size (O(block·d) working memory).
    #[arg(long, conflicts_with = "rf_features")]
    block: Option<usize>,

    /// Random-feature approximation with this many features.
    #[arg(long)]
    rf_features: Option<usize>,

    /// Seed for the random-feature basis.
    #[arg(long, default_value_t = 0)]
    rf_seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    /// Copula model: inline JSON or a path to a JSON file.
    #[arg(long)]
    model: String,

    /// Number of points to draw.
    #[arg(long)]
    n: usize,

    /// Sampler seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output CSV path; a JSON sidecar <output>.json records model, n, seed.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Results directory (created if missing).
    #[arg(long)]
    out: PathBuf,

    /// Base seed for all cells.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Comma-separated n grid for the scaling study.
    #[arg(long, default_value = "100,200,400,800")]
    n_list: String,

    /// Comma-separated d grid.
    #[arg(long, default_value = "2,4,8")]
    d_list: String,

    /// Comma-separated random-feature counts.
    #[arg(long, default_value = "64,256,1024")]
    m_list: String,

    /// Timing replicates per cell (median reported).
    #[arg(long, default_value_t = 5)]
    replicates: usize,

    /// Sample size for the power study.
    #[arg(long, default_value_t = 500)]
    power_n: usize,

    /// Replicates per power-study alternative.
    #[arg(long, default_value_t = 50)]
    power_replicates: usize,

    /// Bootstrap draws per power-study replicate.
    #[arg(long, default_value_t = 300)]
    bootstrap: usize,

    /// Power-study test level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct SelfCheckArgs {
    /// Fault-injection hook: flip the sign of one score component so the
    /// score-vs-FD check must fail (exercises the failure path).
    #[arg(long, hide = true)]
    inject_score_corruption: bool,
}

/// An error that knows its process exit code.
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Library errors map onto the exit-code contract: parameter/unsupported
/// problems are config errors, everything else is an input/data error.
fn classify(err: CsdError) -> Failure {
    let code = match &err {
        CsdError::InvalidParameter(_) | CsdError::Unsupported(_) => EXIT_CONFIG,
        _ => EXIT_INPUT,
    };
    fail(code, err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = resolve_threads(cli.threads) {
        // best effort: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = match cli.command {
        Command::Test(args) => cmd_test(args, cli.deterministic),
        Command::Estimate(args) => cmd_estimate(args, cli.deterministic),
        Command::Sample(args) => cmd_sample(args),
        Command::Bench(args) => cmd_bench(args),
        Command::SelfCheck(args) => selfcheck::run(args.inject_score_corruption),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var("CSD_THREADS").ok().and_then(|v| v.parse().ok()))
}

fn parse_model(spec: &str) -> CliResult<CopulaModel> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| fail(EXIT_CONFIG, format!("cannot read model file {spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| fail(EXIT_CONFIG, format!("invalid model spec: {e}")))
}

fn parse_kernel_kind(name: &str) -> CliResult<KernelKind> {
    match name {
        "rbf" => Ok(KernelKind::GaussianRbf),
        "weighted_rbf" | "weighted" => Ok(KernelKind::BoundaryWeightedRbf),
        other => Err(fail(EXIT_CONFIG, format!("unknown kernel kind {other:?} (rbf | weighted_rbf)"))),
    }
}

/// Resolve "--bandwidth median|<x>" against the sample; returns the kernel
/// spec plus the provenance string recorded in reports.
fn resolve_kernel(
    mk: &ModelKernelArgs,
    sample: &PseudoSample,
) -> CliResult<(BaseKernelSpec, String)> {
    let kind = parse_kernel_kind(&mk.kernel)?;
    if mk.bandwidth == "median" {
        let sigma = median_bandwidth(sample.points()).map_err(classify)?;
        Ok((BaseKernelSpec::new(kind, sigma).map_err(classify)?, "median".into()))
    } else {
        let sigma: f64 = mk
            .bandwidth
            .parse()
            .map_err(|_| fail(EXIT_CONFIG, format!("bandwidth must be a number or \"median\", got {:?}", mk.bandwidth)))?;
        Ok((BaseKernelSpec::new(kind, sigma).map_err(classify)?, "fixed".into()))
    }
}

fn load_sample(path: &PathBuf, pseudo_obs: bool, expect_dim: usize) -> CliResult<PseudoSample> {
    let raw = io::read_csv(path)?;
    if raw.is_empty() {
        return Err(fail(EXIT_INPUT, format!("{} holds no data rows", path.display())));
    }
    if raw[0].len() != expect_dim {
        return Err(fail(
            EXIT_INPUT,
            format!("input has {} columns but the model has dimension {expect_dim}", raw[0].len()),
        ));
    }
    if pseudo_obs {
        if raw.iter().flatten().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(fail(EXIT_INPUT, "--pseudo-obs given but values leave [0,1]"));
        }
        PseudoSample::direct(raw).map_err(classify)
    } else {
        pseudo_observations(&raw).map_err(classify)
    }
}

/// Everything needed to replay a run bit-exactly.
#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    model: &'a CopulaModel,
    kernel: BaseKernelSpec,
    bandwidth_source: String,
    input: String,
    pseudo_obs: bool,
    n: usize,
    d: usize,
    clamp_count: usize,
    deterministic: bool,
}

#[derive(Serialize)]
struct TestOutput<'a> {
    config: RunConfig<'a>,
    report: &'a TestReport,
}

fn cmd_test(args: TestArgs, deterministic: bool) -> CliResult<u8> {
    let model = parse_model(&args.mk.model)?;
    let sample = load_sample(&args.input, args.pseudo_obs, model.dim())?;
    let (kernel, bandwidth_source) = resolve_kernel(&args.mk, &sample)?;
    let eval = SteinKernelEvaluator::new(model.clone(), kernel);
    let opts = BootstrapOptions {
        draws: args.bootstrap,
        alpha: args.alpha,
        seed: args.seed,
        ..Default::default()
    };
    let report = wild_bootstrap_test(&sample, &eval, &opts).map_err(classify)?;

    if let Some(path) = &args.bootstrap_stats_csv {
        io::write_bootstrap_csv(path, &report.bootstrap_stats)?;
    }
    let out = TestOutput {
        config: RunConfig {
            command: "test",
            model: &model,
            kernel,
            bandwidth_source,
            input: args.input.display().to_string(),
            pseudo_obs: args.pseudo_obs,
            n: sample.n(),
            d: sample.dim(),
            clamp_count: sample.clamp_count(),
            deterministic,
        },
        report: &report,
    };
    io::emit_json(&out, args.output.as_deref())?;
    Ok(if report.reject { EXIT_REJECT } else { 0 })
}

#[derive(Serialize)]
struct EstimateOutput<'a> {
    config: RunConfig<'a>,
    estimate: &'a CsdEstimate,
    timing_ms: f64,
}

fn cmd_estimate(args: EstimateArgs, deterministic: bool) -> CliResult<u8> {
    let model = parse_model(&args.mk.model)?;
    let sample = load_sample(&args.input, args.pseudo_obs, model.dim())?;
    let (kernel, bandwidth_source) = resolve_kernel(&args.mk, &sample)?;
    let eval = SteinKernelEvaluator::new(model.clone(), kernel);

    let start = std::time::Instant::now();
    let estimate = if let Some(m) = args.rf_features {
        let basis = draw_basis_for(&kernel, m, model.dim(), args.rf_seed).map_err(classify)?;
        rf_csd(&sample, &model, &basis).map_err(classify)?
    } else if let Some(block) = args.block {
        csd_streaming(&sample, &eval, block).map_err(classify)?
    } else {
        csd_v_statistic(&sample, &eval).map_err(classify)?
    };
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;

    let out = EstimateOutput {
        config: RunConfig {
            command: "estimate",
            model: &model,
            kernel,
            bandwidth_source,
            input: args.input.display().to_string(),
            pseudo_obs: args.pseudo_obs,
            n: sample.n(),
            d: sample.dim(),
            clamp_count: sample.clamp_count(),
            deterministic,
        },
        estimate: &estimate,
        timing_ms,
    };
    io::emit_json(&out, args.output.as_deref())?;
    Ok(0)
}

fn cmd_sample(args: SampleArgs) -> CliResult<u8> {
    let model = parse_model(&args.model)?;
    let config = SamplerConfig { model, n: args.n, seed: args.seed };
    let s = sample(&config).map_err(classify)?;
    io::write_sample_csv(&args.output, &s)?;

    #[derive(Serialize)]
    struct Sidecar<'a> {
        model: &'a CopulaModel,
        n: usize,
        seed: u64,
        output: String,
    }
    let sidecar = Sidecar {
        model: &config.model,
        n: config.n,
        seed: config.seed,
        output: args.output.display().to_string(),
    };
    let sidecar_path = args.output.with_extension("csv.json");
    io::emit_json(&sidecar, Some(sidecar_path.as_path()))?;
    Ok(0)
}

fn parse_list(name: &str, text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| fail(EXIT_CONFIG, format!("bad {name} entry {tok:?}")))
        })
        .collect()
}

fn cmd_bench(args: BenchArgs) -> CliResult<u8> {
    std::fs::create_dir_all(&args.out)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot create {}: {e}", args.out.display())))?;

    let grid = BenchGrid {
        n_values: parse_list("n-list", &args.n_list)?,
        d_values: parse_list("d-list", &args.d_list)?,
        m_values: parse_list("m-list", &args.m_list)?,
        replicates: args.replicates,
        seed: args.seed,
    };
    let scaling = run_scaling(&grid).map_err(classify)?;
    let scaling_path = args.out.join("scaling.csv");
    io::write_csv_rows(&scaling_path, &scaling)?;

    // Power study: Clayton θ=2 target against a τ-matched Gumbel and a
    // Clayton θ grid bracketing the target's tail coefficient.
    let target =
        CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).map_err(classify)?;
    let tau = csd::bench::family_tau(Family::Clayton, 2.0).map_err(classify)?;
    let theta_g = theta_for_tau(Family::Gumbel, tau).map_err(classify)?;
    let mut alternatives = vec![(
        format!("gumbel_tau_matched(theta={theta_g:.6})"),
        CopulaModel::archimedean(GeneratorSpec::gumbel(theta_g).unwrap(), 2).map_err(classify)?,
    )];
    for th in [0.5, 1.0, 2.0, 4.0] {
        alternatives.push((
            format!("clayton(theta={th})"),
            CopulaModel::archimedean(GeneratorSpec::clayton(th).unwrap(), 2).map_err(classify)?,
        ));
    }
    let power = run_power(
        &target,
        &alternatives,
        args.power_n,
        args.power_replicates,
        args.bootstrap,
        args.alpha,
        csd::rng::split_seed(args.seed, 0xB0),
    )
    .map_err(classify)?;
    let power_path = args.out.join("power.csv");
    io::write_csv_rows(&power_path, &power)?;

    #[derive(Serialize)]
    struct Manifest {
        grid: BenchGrid,
        power_n: usize,
        power_replicates: usize,
        bootstrap: usize,
        alpha: f64,
        seed: u64,
        files: Vec<String>,
    }
    let manifest = Manifest {
        grid,
        power_n: args.power_n,
        power_replicates: args.power_replicates,
        bootstrap: args.bootstrap,
        alpha: args.alpha,
        seed: args.seed,
        files: vec!["scaling.csv".into(), "power.csv".into()],
    };
    io::emit_json(&manifest, Some(args.out.join("manifest.json").as_path()))?;
    eprintln!(
        "bench: wrote {} and {} ({} scaling cells, {} alternatives)",
        scaling_path.display(),
        power_path.display(),
        scaling.len(),
        power.len()
    );
    Ok(0)
}
