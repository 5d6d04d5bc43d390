use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use dirfilter::bench::{self, BenchPlan, OutputFormat};
use dirfilter::coefficients;
use dirfilter::io::{read_image, save};
use dirfilter_core::calibration::{self, FitConfig, Regression, Sampling};
use dirfilter_core::metrics;
use dirfilter_core::noise::{corrupt_image_with_stats, ImpulseDistribution, NoiseParams};
use dirfilter_core::{
    apply_filter, BorderPolicy, FastAcosTable, FilterSpec, MinimaxPoly, MinimaxRole, MinkowskiOrder,
};

const SPEC_HELP: &str = "\
FILTER SPECS
  family[:strategy][:key=value]...

  family    identity | vmf | bvdf | ddf | cwddf | cwvmf | acwddf
  strategy  exact (default) | minimax | rgb
  keys      q=2..4          minimax degree (default 4)
            p=P             Minkowski order of distance terms (default 2)
            w=SIDE          odd window side (default 3)
            k=K             smoothing level of cwddf/cwvmf (default 2)
            lambda=L        first ACWDDF smoothing level (default 2)
            T=T             ACWDDF threshold (default 10.8)
            smoother=S      cwddf | cwvmf smoothing ordering (default cwddf)
            slope=S         rgb calibration slope (default 1.436437)
            intercept=C     rgb calibration intercept (default 0.027664)
            bp=P            Minkowski order in chromaticity space (default 2)

  examples  bvdf:minimax:q=4   acwddf:rgb:lambda=2:T=10.8   ddf:exact:p=2";

#[derive(Parser)]
#[command(name = "dirfilter", version, about = "Directional vector filters for color images", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corrupt an image with correlated impulsive noise.
    Noise(NoiseArgs),
    /// Apply one filter to an image.
    #[command(after_help = SPEC_HELP)]
    Filter(FilterArgs),
    /// Compare a test image against a reference (CSV: mae,psnr,ncd_x1000).
    Metrics(MetricsArgs),
    /// Time and score filters on noisy images.
    #[command(after_help = SPEC_HELP)]
    Bench(BenchArgs),
    /// Fit the angle against chromaticity distance over random vector pairs.
    Calibrate(CalibrateArgs),
    /// Measure the maximum error of the minimax polynomial table.
    VerifyMinimax(VerifyArgs),
}

#[derive(Args)]
struct NoiseArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Pixel corruption probability.
    #[arg(long, default_value_t = 0.10)]
    phi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Conditional probabilities of corrupting only red, green, blue.
    #[arg(long, num_args = 3, value_names = ["P1", "P2", "P3"], default_values_t = [0.25, 0.25, 0.25])]
    channels: Vec<f64>,
    /// uniform | salt-pepper
    #[arg(long, default_value = "uniform")]
    impulse: ImpulseDistribution,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long)]
    spec: FilterSpec,
    /// replicate | reflect
    #[arg(long, default_value = "replicate")]
    border: BorderPolicy,
    /// Filter row bands on all cores.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Omit the CSV header line.
    #[arg(long)]
    no_header: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Plan file; flags given alongside it override its settings.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long = "image")]
    images: Vec<PathBuf>,
    /// Noise levels, comma separated.
    #[arg(long = "phi", value_delimiter = ',')]
    phis: Vec<f64>,
    #[arg(long = "filter")]
    filters: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// csv | markdown
    #[arg(long)]
    format: Option<OutputFormat>,
    /// replicate | reflect
    #[arg(long)]
    border: Option<BorderPolicy>,
    /// Filter on all cores; speedups are not reported.
    #[arg(long)]
    parallel: bool,
    /// Write the report here instead of stdout.
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long, default_value_t = FitConfig::DEFAULT_PAIRS)]
    pairs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Minkowski order in chromaticity space.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// orthogonal | ordinary
    #[arg(long, default_value = "orthogonal")]
    regression: Regression,
    /// Draw integer channel values instead of continuous ones.
    #[arg(long)]
    integer: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1_000_000)]
    grid: usize,
    /// Coefficient table file (defaults to the shipped table).
    #[arg(long)]
    table: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Noise(a) => noise(a),
        Command::Filter(a) => filter(a),
        Command::Metrics(a) => metrics_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Calibrate(a) => calibrate(a),
        Command::VerifyMinimax(a) => verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn noise(a: NoiseArgs) -> Result<bool> {
    let img = read_image(&a.input)?;
    let params = NoiseParams {
        phi: a.phi,
        channel: [a.channels[0], a.channels[1], a.channels[2]],
        impulse: a.impulse,
        seed: a.seed,
    };
    let (noisy, counts) = corrupt_image_with_stats(&img, &params)?;
    save(&noisy, &a.output)?;
    eprintln!(
        "seed {}: corrupted {} of {} pixels",
        a.seed,
        counts.corrupted(),
        counts.total()
    );
    Ok(true)
}

fn filter(a: FilterArgs) -> Result<bool> {
    let img = read_image(&a.input)?;
    let out = if a.parallel {
        dirfilter::apply_filter_parallel(&img, &a.spec, a.border)?
    } else {
        apply_filter(&img, &a.spec, a.border)?
    };
    save(&out, &a.output)?;
    Ok(true)
}

fn metrics_cmd(a: MetricsArgs) -> Result<bool> {
    let reference = read_image(&a.reference)?;
    let test = read_image(&a.test)?;
    let m = metrics::evaluate(&reference, &test)?;
    if !a.no_header {
        println!("mae,psnr,ncd_x1000");
    }
    println!("{},{},{}", m.mae, m.psnr, m.ncd_x1000);
    Ok(true)
}

fn bench_cmd(a: BenchArgs) -> Result<bool> {
    let (mut plan, mut issues) = match &a.plan {
        Some(path) => {
            let parsed = bench::read_plan(path)?;
            (parsed.plan, parsed.issues)
        }
        None => (BenchPlan::new(Vec::new(), Vec::new()), Vec::new()),
    };
    plan.images.extend(a.images);
    if !a.phis.is_empty() {
        plan.phis = a.phis;
    }
    let (specs, bad) = bench::parse_filters(&a.filters);
    plan.filters.extend(specs);
    issues.extend(bad);
    if let Some(s) = a.seed {
        plan.seed = s;
    }
    if let Some(r) = a.repetitions {
        plan.repetitions = r;
    }
    if let Some(f) = a.format {
        plan.format = f;
    }
    if let Some(b) = a.border {
        plan.border = b;
    }
    plan.parallel |= a.parallel;

    let report = bench::run_bench(&plan)?;
    issues.extend(report.errors);

    let mut text = Vec::new();
    match plan.format {
        OutputFormat::Csv => bench::write_csv(&report.rows, &mut text)?,
        OutputFormat::Markdown => {
            writeln!(
                text,
                "seed {}, {} repetitions\n",
                plan.seed, plan.repetitions
            )?;
            text.extend(bench::markdown(&report.rows).into_bytes());
        }
    }
    match &a.output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(&text)?,
    }
    eprintln!("seed {}", plan.seed);
    for issue in &issues {
        eprintln!("skipped: {issue}");
    }
    Ok(issues.is_empty())
}

fn calibrate(a: CalibrateArgs) -> Result<bool> {
    let config = FitConfig {
        pairs: a.pairs,
        seed: a.seed,
        order: MinkowskiOrder::new(a.p)?,
        regression: a.regression,
        sampling: if a.integer {
            Sampling::Integer
        } else {
            Sampling::Continuous
        },
    };
    let fit = calibration::fit_with(&config)?;
    println!("pairs              {}", fit.sample_count);
    println!("seed               {}", config.seed);
    println!("partitions         {}", FitConfig::PARTITIONS);
    println!("sampling           {:?}", config.sampling);
    println!("regression         {:?}", fit.regression);
    println!("slope              {:.6}", fit.slope);
    println!("intercept          {:.6}", fit.intercept);
    println!("rms residual       {:.6}", fit.fit_error);
    println!("mean abs residual  {:.6}", fit.mean_abs_error);
    println!("mean residual      {:.3e}", fit.mean_residual);
    println!("perpendicular rms  {:.6}", fit.perpendicular_rms);
    println!("eigenvalue ratio   {:.6}", fit.eigenvalue_ratio);
    if fit.degenerate {
        eprintln!("warning: chromaticity distance has zero variance; fit is degenerate");
    }
    Ok(true)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let rows = match &a.table {
        Some(path) => coefficients::read_table(path)?,
        None => coefficients::shipped_table(),
    };
    let mut all_ok = true;
    println!("role  q  bound            measured         ratio   embedded");
    for row in &rows {
        let role = row.poly.role();
        let measured = calibration::verify_minimax(&row.poly, role, a.grid)?;
        let ratio = measured / row.poly.bound();
        let embedded = MinimaxPoly::builtin(role, row.degree).is_ok_and(|b| b == row.poly);
        all_ok &= (0.90..=1.05).contains(&ratio);
        println!(
            "{:<5} {}  {:.9e}  {:.9e}  {:.4}  {}",
            role.name(),
            row.degree,
            row.poly.bound(),
            measured,
            ratio,
            if embedded { "match" } else { "differs" }
        );
    }
    println!("\ncomposite inverse cosine on [0, 1]");
    for q in MinimaxPoly::DEGREES {
        let find = |role| {
            rows.iter()
                .find(|r| r.poly.role() == role && r.degree == q)
                .map(|r| r.poly)
        };
        if let (Some(acos), Some(asin)) = (
            find(MinimaxRole::AcosDirect),
            find(MinimaxRole::AsinComposed),
        ) {
            let table = FastAcosTable::from_polys(acos, asin)?;
            let err = calibration::fast_acos_max_error(&table, a.grid);
            println!("q={q}  max error {err:.9e}  (bound {:.9e})", table.bound());
        }
    }
    Ok(all_ok)
}
