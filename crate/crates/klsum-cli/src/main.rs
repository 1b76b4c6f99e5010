//! `klsum` — command-line front end for the Kloosterman-sum toolkit.
//!
//! Subcommands: `sum` (one sum), `partial` (sweep to a cutoff, CSV),
//! `window` (windowed average), `tail` (Bessel-weighted tail), `exact`
//! (exact-formula coefficient), `phi` (integral transforms of the ramp
//! test function), and `verify` (the full verification suite).
//!
//! Configuration precedence is flags > `--config` JSON document >
//! defaults.  The merged "effective" config is embedded in every JSON
//! record, written as a `.meta.json` sidecar next to CSV files, and
//! echoed to stderr when a CSV goes to stdout — an artifact always
//! records how it was produced.
//!
//! Exit status: 0 success (for `verify`: all checks passed), 1 I/O or
//! failed verification, 2 invalid configuration, 3 numeric-regime
//! violation, 4 cache corruption.  Failures print a one-line JSON error
//! record to stderr.

mod config;
mod emit;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;
use klsum::cache::ResultCache;
use klsum::exact;
use klsum::kloosterman::{
    bessel_tail, kloosterman_sum, partial_sums, partial_sums_with_cache, windowed_average,
    BesselKind, KloostermanQuery, SamplePlan,
};
use klsum::quad::QuadValue;
use klsum::testfn;
use klsum::verify;
use klsum::{Error, Result};
use num_complex::Complex64;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

#[derive(Parser)]
#[command(
    name = "klsum",
    version,
    about = "Generalized Kloosterman sums with half-integral-weight multipliers",
    after_help = "Examples:\n  \
        klsum sum --multiplier theta --level 4 --m 1 --n 3 --c 16\n  \
        klsum partial --multiplier eta --conjugate --twist 3 --level 3 \
        --m 0 --n 1 --xmax 100000 --dyadic\n  \
        klsum exact --n 5 --cutoff 10000\n  \
        klsum phi --x 10000 --transform quarter --weight 1/2\n  \
        klsum verify"
)]
struct Cli {
    /// Load defaults from a JSON experiment-config document.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write the artifact to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Result-cache file (default: $KLSUM_CACHE_DIR/sums.cache.csv).
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,

    /// Worker threads for the sweep commands.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MultiplierArgs {
    /// Multiplier base: eta, theta, or trivial.
    #[arg(long, value_name = "BASE")]
    multiplier: Option<String>,

    /// Group level (defaults: eta 1, theta 4, trivial 1).
    #[arg(long)]
    level: Option<u64>,

    /// Twist by the real character of this modulus.
    #[arg(long, value_name = "Q")]
    twist: Option<u64>,

    /// Use the complex-conjugate multiplier.
    #[arg(long)]
    conjugate: bool,

    /// Weight override in halves (1 = 1/2, 3 = 3/2; sign must match
    /// conjugation).
    #[arg(long, value_name = "HALVES")]
    weight_halves: Option<i32>,
}

impl MultiplierArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(base) = &self.multiplier {
            cfg.multiplier = base.clone();
        }
        if self.level.is_some() {
            cfg.level = self.level;
        }
        if self.twist.is_some() {
            cfg.twist = self.twist;
        }
        if self.conjugate {
            cfg.conjugate = true;
        }
        if self.weight_halves.is_some() {
            cfg.weight_halves = self.weight_halves;
        }
    }
}

#[derive(Args)]
struct IndexArgs {
    /// First index m.
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i64>,

    /// Second index n.
    #[arg(long, allow_negative_numbers = true)]
    n: Option<i64>,
}

impl IndexArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one sum S(m, n, c, nu) and print a JSON record.
    Sum {
        #[command(flatten)]
        multiplier: MultiplierArgs,
        #[command(flatten)]
        indices: IndexArgs,
        /// The modulus c.
        #[arg(long)]
        c: Option<u64>,
    },

    /// Sweep partial sums over admissible moduli up to a cutoff; emit
    /// the series as CSV (c,s_re,s_im,run_re,run_im).
    Partial {
        #[command(flatten)]
        multiplier: MultiplierArgs,
        #[command(flatten)]
        indices: IndexArgs,
        /// Sweep cutoff X (rows cover admissible c <= X).
        #[arg(long = "xmax", value_name = "X")]
        x_max: Option<u64>,
        /// Keep only rows at dyadic cuts (largest admissible c <= 2^j).
        #[arg(long, conflicts_with = "grid")]
        dyadic: bool,
        /// Keep only rows at multiples of this spacing.
        #[arg(long, value_name = "STEP", conflicts_with = "dyadic")]
        grid: Option<u64>,
    },

    /// Average |S(m,n,c,nu)|/c over a modulus window [y, x] (JSON).
    Window {
        #[command(flatten)]
        multiplier: MultiplierArgs,
        #[command(flatten)]
        indices: IndexArgs,
        /// Window lower bound y.
        #[arg(long)]
        y: Option<u64>,
        /// Window upper bound x.
        #[arg(long)]
        x: Option<u64>,
    },

    /// Bessel-weighted tail sum over moduli above the transition scale
    /// (JSON).
    Tail {
        #[command(flatten)]
        multiplier: MultiplierArgs,
        #[command(flatten)]
        indices: IndexArgs,
        /// Cut coefficient: sum moduli c > alpha * sqrt(|m~ n~|).
        #[arg(long)]
        alpha: Option<f64>,
        /// Bessel family: I or J.
        #[arg(long, value_name = "I|J")]
        kind: Option<String>,
        /// Bessel index: 1/2 or 3/2.
        #[arg(long, value_name = "1/2|3/2")]
        beta: Option<String>,
        /// Truncation point.
        #[arg(long = "cmax", value_name = "C")]
        c_max: Option<u64>,
    },

    /// Exact-formula coefficient estimate at a truncation cutoff (JSON).
    Exact {
        /// Coefficient index n >= 1.
        #[arg(long)]
        n: Option<u64>,
        /// Truncation cutoff X (moduli c <= X enter the sum).
        #[arg(long, value_name = "X")]
        cutoff: Option<u64>,
    },

    /// Integral transforms of the ramp test function (JSON).
    Phi {
        /// Amplitude scale a (default 1).
        #[arg(long)]
        a: Option<f64>,
        /// Center scale x.
        #[arg(long)]
        x: Option<f64>,
        /// Ramp width T (default x^(1-delta)/2).
        #[arg(long = "t", value_name = "T")]
        t_big: Option<f64>,
        /// Relative ramp exponent delta (default 1/3).
        #[arg(long)]
        delta: Option<f64>,
        /// Ramp profile: smooth or linear.
        #[arg(long, value_name = "PROFILE")]
        profile: Option<String>,
        /// Transform: tilde, hat, or quarter.
        #[arg(long, value_name = "NAME")]
        transform: Option<String>,
        /// Spectral parameter r (tilde/hat).
        #[arg(long, allow_negative_numbers = true)]
        r: Option<f64>,
        /// Transform weight: 1/2 or 3/2 (hat/quarter).
        #[arg(long, value_name = "1/2|3/2")]
        weight: Option<String>,
    },

    /// Run the full verification suite and print a pass/fail table.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sum { .. } => "sum",
            Command::Partial { .. } => "partial",
            Command::Window { .. } => "window",
            Command::Tail { .. } => "tail",
            Command::Exact { .. } => "exact",
            Command::Phi { .. } => "phi",
            Command::Verify => "verify",
        }
    }
}

/// Parses "1/2" or "3/2" into halves.
fn parse_half_weight(text: &str) -> Result<i32> {
    match text {
        "1/2" => Ok(1),
        "3/2" => Ok(3),
        other => Err(invalid(format!(
            "unsupported half-integral index {other:?} (expected 1/2 or 3/2)"
        ))),
    }
}

/// Builds the effective config: defaults, then the `--config` file,
/// then every flag the user passed.
fn build_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.command = cli.command.name().into();
    if cli.output.is_some() {
        cfg.output = cli.output.clone();
    }
    if cli.cache.is_some() {
        cfg.cache = cli.cache.clone();
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }

    match &cli.command {
        Command::Sum {
            multiplier,
            indices,
            c,
        } => {
            multiplier.apply(&mut cfg);
            indices.apply(&mut cfg);
            if c.is_some() {
                cfg.c = *c;
            }
        }
        Command::Partial {
            multiplier,
            indices,
            x_max,
            dyadic,
            grid,
        } => {
            multiplier.apply(&mut cfg);
            indices.apply(&mut cfg);
            if x_max.is_some() {
                cfg.x_max = *x_max;
            }
            if *dyadic {
                cfg.sample = "dyadic".into();
            }
            if let Some(step) = grid {
                cfg.sample = "grid".into();
                cfg.grid_step = Some(*step);
            }
        }
        Command::Window {
            multiplier,
            indices,
            y,
            x,
        } => {
            multiplier.apply(&mut cfg);
            indices.apply(&mut cfg);
            match (y, x) {
                (Some(y), Some(x)) => cfg.window = Some((*y, *x)),
                (None, None) => {}
                _ => {
                    return Err(invalid(
                        "window bounds come as a pair: pass both --y and --x",
                    ))
                }
            }
        }
        Command::Tail {
            multiplier,
            indices,
            alpha,
            kind,
            beta,
            c_max,
        } => {
            multiplier.apply(&mut cfg);
            indices.apply(&mut cfg);
            if alpha.is_some() {
                cfg.alpha = *alpha;
            }
            if let Some(kind) = kind {
                cfg.kind = Some(kind.clone());
            }
            if let Some(beta) = beta {
                cfg.beta_halves = Some(parse_half_weight(beta)?);
            }
            if c_max.is_some() {
                cfg.x_max = *c_max;
            }
        }
        Command::Exact { n, cutoff } => {
            if let Some(n) = n {
                cfg.n = i64::try_from(*n)
                    .map_err(|_| invalid("coefficient index is out of range"))?;
            }
            if cutoff.is_some() {
                cfg.x_max = *cutoff;
            }
        }
        Command::Phi {
            a,
            x,
            t_big,
            delta,
            profile,
            transform,
            r,
            weight,
        } => {
            if a.is_some() {
                cfg.a = *a;
            }
            if x.is_some() {
                cfg.x = *x;
            }
            if t_big.is_some() {
                cfg.t_big = *t_big;
            }
            if delta.is_some() {
                cfg.delta = *delta;
            }
            if let Some(profile) = profile {
                cfg.profile = profile.clone();
            }
            if let Some(transform) = transform {
                cfg.transform = Some(transform.clone());
            }
            if r.is_some() {
                cfg.r = *r;
            }
            if let Some(weight) = weight {
                cfg.beta_halves = Some(parse_half_weight(weight)?);
            }
        }
        Command::Verify => {}
    }
    Ok(cfg)
}

#[cfg(feature = "parallel")]
fn configure_threads(cfg: &ExperimentConfig) -> Result<()> {
    if let Some(t) = cfg.threads {
        if t == 0 {
            return Err(invalid("thread count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| invalid(format!("cannot configure {t} worker threads: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.threads.is_some() {
        eprintln!("note: built without the parallel feature; --threads has no effect");
    }
    Ok(())
}

/// Writes `text` to the config's output path, or stdout when none.
/// File writes carry the path in the error message.
fn write_artifact(cfg: &ExperimentConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("writing {}: {e}", path.display()),
        ))
    })
}

/// CSV artifacts cannot embed the config without breaking their schema,
/// so file outputs get a `.meta.json` sidecar and stdout output echoes
/// the config to stderr.
fn write_csv_artifact(cfg: &ExperimentConfig, csv: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => {
            write_file(path, csv)?;
            write_file(&path.with_extension("meta.json"), &cfg.to_json())
        }
        None => {
            print!("{csv}");
            eprintln!(
                "{}",
                serde_json::to_string(cfg).expect("config serialization cannot fail")
            );
            Ok(())
        }
    }
}

fn open_cache(cfg: &ExperimentConfig) -> Result<ResultCache> {
    match cfg.cache_path() {
        Some(path) => ResultCache::open(path),
        None => Ok(ResultCache::in_memory()),
    }
}

fn sample_plan(cfg: &ExperimentConfig) -> Result<SamplePlan> {
    match cfg.sample.as_str() {
        "all" => Ok(SamplePlan::All),
        "dyadic" => Ok(SamplePlan::Dyadic),
        "grid" => {
            let step = cfg
                .grid_step
                .ok_or_else(|| invalid("grid sampling requires a step (--grid STEP)"))?;
            Ok(SamplePlan::Grid(step))
        }
        other => Err(invalid(format!(
            "unknown sample plan {other:?} (expected all, dyadic, or grid)"
        ))),
    }
}

fn run(cfg: &ExperimentConfig) -> Result<ExitCode> {
    configure_threads(cfg)?;
    match cfg.command.as_str() {
        "sum" => {
            let nu = cfg.multiplier_spec()?;
            let c = cfg
                .c
                .ok_or_else(|| invalid("sum requires the modulus --c"))?;
            let value = kloosterman_sum(&KloostermanQuery {
                m: cfg.m,
                n: cfg.n,
                nu,
                c,
            })?;
            write_artifact(cfg, &emit::sum_record(cfg, &value))?;
        }
        "partial" => {
            let nu = cfg.multiplier_spec()?;
            let x_max = cfg
                .x_max
                .ok_or_else(|| invalid("partial requires the sweep cutoff --xmax"))?;
            let plan = sample_plan(cfg)?;
            let series = match cfg.cache_path() {
                Some(_) => {
                    let mut cache = open_cache(cfg)?;
                    let series =
                        partial_sums_with_cache(&nu, cfg.m, cfg.n, x_max, plan, &mut cache)?;
                    cache.flush()?;
                    series
                }
                None => partial_sums(&nu, cfg.m, cfg.n, x_max, plan)?,
            };
            write_csv_artifact(cfg, &emit::series_csv(&series))?;
        }
        "window" => {
            let nu = cfg.multiplier_spec()?;
            let (y, x) = cfg
                .window
                .ok_or_else(|| invalid("window requires bounds --y and --x"))?;
            let avg = windowed_average(&nu, cfg.m, cfg.n, y as f64, x as f64)?;
            write_artifact(cfg, &emit::window_record(cfg, &avg))?;
        }
        "tail" => {
            let nu = cfg.multiplier_spec()?;
            let alpha = cfg
                .alpha
                .ok_or_else(|| invalid("tail requires the cut coefficient --alpha"))?;
            let kind = match cfg.kind.as_deref() {
                Some("I") => BesselKind::I,
                Some("J") => BesselKind::J,
                Some(other) => {
                    return Err(invalid(format!(
                        "unknown Bessel kind {other:?} (expected I or J)"
                    )))
                }
                None => return Err(invalid("tail requires the Bessel kind --kind")),
            };
            let beta = cfg.transform_weight()?;
            let c_max = cfg
                .x_max
                .ok_or_else(|| invalid("tail requires the truncation --cmax"))?;
            let tail = bessel_tail(&nu, cfg.m, cfg.n, alpha, kind, beta, c_max)?;
            write_artifact(cfg, &emit::tail_record(cfg, &tail))?;
        }
        "exact" => {
            let n = u64::try_from(cfg.n)
                .map_err(|_| invalid("exact requires a coefficient index n >= 1"))?;
            let cutoff = cfg
                .x_max
                .ok_or_else(|| invalid("exact requires the truncation --cutoff"))?;
            let mut cache = open_cache(cfg)?;
            let result = exact::mock_theta_coefficient_with_cache(n, cutoff, &mut cache)?;
            cache.flush()?;
            write_artifact(cfg, &emit::exact_record(cfg, &result))?;
        }
        "phi" => {
            let tf = cfg.test_function()?;
            let value: QuadValue = match cfg.transform.as_deref() {
                Some("tilde") => {
                    let r = cfg
                        .r
                        .ok_or_else(|| invalid("the tilde transform requires --r"))?;
                    let real = testfn::phi_tilde(&tf, r)?;
                    QuadValue {
                        value: Complex64::new(real.value, 0.0),
                        error_bound: real.error_bound,
                    }
                }
                Some("hat") => {
                    let r = cfg
                        .r
                        .ok_or_else(|| invalid("the hat transform requires --r"))?;
                    testfn::phi_hat(&tf, cfg.transform_weight()?, r)?
                }
                Some("quarter") => testfn::phi_hat_quarter(&tf, cfg.transform_weight()?)?,
                Some(other) => {
                    return Err(invalid(format!(
                        "unknown transform {other:?} (expected tilde, hat, or quarter)"
                    )))
                }
                None => {
                    return Err(invalid(
                        "phi requires a transform (--transform tilde|hat|quarter)",
                    ))
                }
            };
            write_artifact(cfg, &emit::phi_record(cfg, &value))?;
        }
        "verify" => {
            let mut cache = open_cache(cfg)?;
            let reports = run_verify(&mut cache);
            cache.flush()?;
            if cfg.output.is_some() {
                write_artifact(cfg, &emit::verify_record(cfg, &reports))?;
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                println!("all {} checks passed", reports.len());
            } else {
                println!("{failed} of {} checks FAILED", reports.len());
                return Ok(ExitCode::from(1));
            }
        }
        other => {
            return Err(invalid(format!("unknown command {other:?}")));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Runs the eight verification checks, printing each line as it lands.
fn run_verify(cache: &mut ResultCache) -> Vec<verify::CriterionReport> {
    let mut reports = Vec::with_capacity(8);
    let mut run = |report: verify::CriterionReport| {
        println!("{}", report.render());
        reports.push(report);
    };
    run(verify::criterion_1());
    run(verify::criterion_2());
    run(verify::criterion_3());
    run(verify::criterion_4());
    run(verify::criterion_5_with_cache(cache));
    run(verify::criterion_6());
    run(verify::criterion_7());
    run(verify::criterion_8_with_cache(cache));
    reports
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e),
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn fail(err: &Error) -> ExitCode {
    let (record, code) = emit::error_record(err);
    eprintln!("{record}");
    ExitCode::from(code as u8)
}
