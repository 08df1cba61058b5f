//! Command-line surface: `factorize`, `synth`, `eval` and `bench`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use crate::baselines::{EvalConfig, Method};
use crate::error::Error;
use crate::io::{load_csv, preprocess, save_matrix_csv, save_vector_csv, PreprocessSpec};
use crate::matrix::frobenius_error;
use crate::model::mixed_product;
use crate::solver::{latitude_fit, InitMode, SolverConfig};
use crate::synth::{gen_planted, sweep, SweepAxis, SynthMode, SynthSpec};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "latitude",
    about = "Mixed linear-tropical matrix factorization toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit the mixed model to a CSV matrix and write factor files.
    Factorize(FactorizeArgs),
    /// Generate planted synthetic data.
    Synth(SynthArgs),
    /// Sweep an experiment axis and compare methods.
    Eval(EvalArgs),
    /// Measure per-iteration solver time across input sizes.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct FactorizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 40)]
    niter: usize,
    #[arg(long, default_value_t = 5.0, value_name = "M")]
    m_bound: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "nmf", value_parser = parse_init_mode)]
    init: InitMode,
    /// Comma-separated: meancenter,minsub,stddiv[,samplestd]
    #[arg(long, default_value = "")]
    preprocess: String,
    #[arg(long)]
    out_prefix: PathBuf,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn parse_init_mode(s: &str) -> Result<InitMode, String> {
    match s {
        "nmf" => Ok(InitMode::Nmf),
        "random" => Ok(InitMode::Random),
        other => Err(format!("unknown init mode `{other}` (expected nmf|random)")),
    }
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, default_value = "mixed")]
    mode: String,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 160)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    #[arg(long, default_value_t = 0.01)]
    noise: f64,
    #[arg(long, default_value_t = 5.0)]
    param_range: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    axis: String,
    /// Comma-separated axis values.
    #[arg(long)]
    values: String,
    #[arg(long, default_value = "latitude,nmf,svd")]
    methods: String,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 160)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    #[arg(long, default_value_t = 0.01)]
    noise: f64,
    #[arg(long, default_value_t = 40)]
    niter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated row counts.
    #[arg(long, default_value = "250,500,1000")]
    sizes: String,
    #[arg(long, default_value_t = 200)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    niter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// The JSON fit report written next to the factor files.
#[derive(Debug, Serialize, Deserialize)]
pub struct JsonReport {
    pub k: usize,
    pub niter: usize,
    #[serde(rename = "M")]
    pub m_bound: f64,
    pub seed: u64,
    pub init_mode: InitMode,
    pub abs_error: f64,
    pub rel_error: f64,
    pub error_trace: Vec<f64>,
    pub seconds_per_iteration: Vec<f64>,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Io(_) | Error::NonFinite { .. } | Error::NegativeEntry { .. } => 2,
        Error::Numerical(_) => 3,
        _ => 1,
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|e| Error::InvalidConfig(format!(
                "bad numeric value `{t}`: {e}"
            )))
        })
        .collect()
}

fn run_factorize(args: &FactorizeArgs) -> Result<(), Error> {
    let pre = PreprocessSpec::parse_flags(&args.preprocess)?;
    let loaded = load_csv(&args.input)?;
    let a = preprocess(&loaded.matrix, &pre);
    a.ensure_nonnegative()?;

    let mut cfg = SolverConfig::new(args.k).with_seed(args.seed);
    cfg.niter = args.niter;
    cfg.bound = args.m_bound;
    cfg.init_mode = args.init;

    let fit = || latitude_fit(&a, &cfg);
    let (fact, report) = if args.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build()
            .map_err(|e| Error::Numerical(e.to_string()))?;
        pool.install(fit)?
    } else {
        fit()?
    };

    let recon = mixed_product(&fact)?;
    let (abs_error, rel_error) = frobenius_error(&a, &recon)?;

    let prefix = args.out_prefix.to_string_lossy();
    save_matrix_csv(format!("{prefix}.B.csv"), &fact.b)?;
    save_matrix_csv(format!("{prefix}.C.csv"), &fact.c)?;
    save_vector_csv(format!("{prefix}.co.csv"), fact.params.co())?;
    save_vector_csv(format!("{prefix}.ro.csv"), fact.params.ro())?;
    save_matrix_csv(
        format!("{prefix}.alpha.csv"),
        &crate::model::alpha_matrix(&fact.params),
    )?;

    let json = JsonReport {
        k: args.k,
        niter: args.niter,
        m_bound: args.m_bound,
        seed: args.seed,
        init_mode: args.init,
        abs_error,
        rel_error,
        error_trace: report.error_trace,
        seconds_per_iteration: report.wall_time_per_iteration,
    };
    std::fs::write(
        format!("{prefix}.report.json"),
        serde_json::to_string_pretty(&json).map_err(|e| Error::Numerical(e.to_string()))?,
    )?;
    eprintln!("factorize: abs_error={abs_error} rel_error={rel_error}");
    Ok(())
}

fn run_synth(args: &SynthArgs) -> Result<(), Error> {
    let spec = SynthSpec {
        n: args.n,
        m: args.m,
        k_true: args.k,
        density: args.density,
        noise_sigma: args.noise,
        param_range: args.param_range,
        mode: args.mode.parse::<SynthMode>()?,
        seed: args.seed,
    };
    let (clean, noisy, truth) = gen_planted(&spec)?;
    let prefix = args.out_prefix.to_string_lossy();
    save_matrix_csv(format!("{prefix}.clean.csv"), &clean)?;
    save_matrix_csv(format!("{prefix}.noisy.csv"), &noisy)?;
    save_matrix_csv(format!("{prefix}.B.csv"), &truth.b)?;
    save_matrix_csv(format!("{prefix}.C.csv"), &truth.c)?;
    save_vector_csv(format!("{prefix}.co.csv"), truth.params.co())?;
    save_vector_csv(format!("{prefix}.ro.csv"), truth.params.ro())?;
    eprintln!("synth: wrote {}x{} matrices with prefix {prefix}", args.n, args.m);
    Ok(())
}

fn run_eval(args: &EvalArgs) -> Result<(), Error> {
    let axis = args.axis.parse::<SweepAxis>()?;
    let values = parse_f64_list(&args.values)?;
    if values.is_empty() {
        return Err(Error::InvalidConfig("no axis values given".into()));
    }
    let methods: Vec<Method> = args
        .methods
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Method>())
        .collect::<Result<_, _>>()?;
    if methods.contains(&Method::Lattrunc) && args.k < 2 {
        return Err(Error::InvalidConfig("lattrunc needs rank k >= 2".into()));
    }
    let spec = SynthSpec {
        n: args.n,
        m: args.m,
        k_true: args.k,
        density: args.density,
        noise_sigma: args.noise,
        seed: args.seed,
        ..SynthSpec::default()
    };
    let eval = EvalConfig {
        niter: args.niter,
        ..EvalConfig::default()
    };
    let table = sweep(&spec, axis, &values, &methods, args.repeats, &eval)?;
    let file = std::fs::File::create(&args.out)?;
    table.write_csv(std::io::BufWriter::new(file))?;
    eprintln!("eval: wrote {} rows to {}", table.rows.len(), args.out.display());
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Result<(), Error> {
    let sizes = parse_f64_list(&args.sizes)?;
    let mut out = String::from("n,k,niter,seconds_per_iteration\n");
    for &size in &sizes {
        let n = size.round() as usize;
        let spec = SynthSpec {
            n,
            m: args.m,
            k_true: args.k,
            seed: args.seed,
            ..SynthSpec::default()
        };
        let (_, noisy, _) = gen_planted(&spec)?;
        let mut cfg = SolverConfig::new(args.k).with_seed(args.seed);
        cfg.niter = args.niter;
        let (_, report) = latitude_fit(&noisy, &cfg)?;
        let mean_secs = report.wall_time_per_iteration.iter().sum::<f64>()
            / report.wall_time_per_iteration.len() as f64;
        out.push_str(&format!("{n},{},{},{mean_secs}\n", args.k, args.niter));
        eprintln!("bench: n={n} mean seconds/iteration={mean_secs}");
    }
    std::fs::write(&args.out, out)?;
    Ok(())
}

/// Parses the argument list (without the program name) and runs the
/// requested subcommand, returning the process exit code.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut full: Vec<String> = vec!["latitude".into()];
    full.extend(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Factorize(args) => run_factorize(args),
        Command::Synth(args) => run_synth(args),
        Command::Eval(args) => run_eval(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
