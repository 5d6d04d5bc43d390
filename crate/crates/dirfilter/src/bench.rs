//! Benchmark harness: noise once per image and noise level, then time and
//! score each filter against the clean original.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use dirfilter_core::metrics::{self, MetricsReport};
use dirfilter_core::noise::{corrupt_image, NoiseParams};
use dirfilter_core::{apply_filter, BorderPolicy, DirectionalStrategy, FilterSpec, RasterImage};

use crate::io::read_image;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => bail!("unknown output format `{s}` (expected csv or markdown)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchPlan {
    pub images: Vec<PathBuf>,
    pub phis: Vec<f64>,
    pub filters: Vec<FilterSpec>,
    pub seed: u64,
    pub repetitions: usize,
    pub format: OutputFormat,
    pub border: BorderPolicy,
    /// Filter with the rayon row partition; speedups are then not reported.
    pub parallel: bool,
}

impl BenchPlan {
    pub const DEFAULT_PHIS: [f64; 2] = [0.10, 0.15];
    pub const DEFAULT_REPETITIONS: usize = 10;

    pub fn new(images: Vec<PathBuf>, filters: Vec<FilterSpec>) -> Self {
        BenchPlan {
            images,
            phis: Self::DEFAULT_PHIS.to_vec(),
            filters,
            seed: 0,
            repetitions: Self::DEFAULT_REPETITIONS,
            format: OutputFormat::Csv,
            border: BorderPolicy::Replicate,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        if let Some(phi) = self.phis.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            bail!("noise level {phi} outside [0, 1]");
        }
        for spec in &self.filters {
            spec.validate()
                .with_context(|| format!("filter `{spec}`"))?;
        }
        Ok(())
    }
}

/// A plan file parsed as far as possible; `issues` lists the items that
/// were skipped.
#[derive(Clone, Debug)]
pub struct ParsedPlan {
    pub plan: BenchPlan,
    pub issues: Vec<String>,
}

/// Parses filter specs, collecting the malformed ones instead of failing.
pub fn parse_filters<S: AsRef<str>>(texts: &[S]) -> (Vec<FilterSpec>, Vec<String>) {
    let mut specs = Vec::new();
    let mut issues = Vec::new();
    for t in texts {
        match t.as_ref().parse::<FilterSpec>() {
            Ok(s) => specs.push(s),
            Err(e) => issues.push(format!("filter `{}`: {e}", t.as_ref())),
        }
    }
    (specs, issues)
}

/// Parses the key-value plan format:
///
/// ```text
/// # comment
/// image = lenna.png          (repeatable; relative to the plan file)
/// phi = 0.10, 0.15           (comma-separated and/or repeatable)
/// filter = bvdf:exact        (repeatable)
/// seed = 42
/// repetitions = 10
/// format = csv | markdown
/// border = replicate | reflect
/// parallel = false
/// ```
pub fn parse_plan(text: &str, base: &Path) -> Result<ParsedPlan> {
    let mut plan = BenchPlan::new(Vec::new(), Vec::new());
    let mut phis = Vec::new();
    let mut filter_texts = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| anyhow!("plan line {}: expected `key = value`", n + 1))?;
        let ctx = || format!("plan line {}: `{key}`", n + 1);
        match key {
            "image" => plan.images.push(base.join(value)),
            "phi" => {
                for p in value.split(',') {
                    phis.push(p.trim().parse::<f64>().with_context(ctx)?);
                }
            }
            "filter" => filter_texts.push(value.to_string()),
            "seed" => plan.seed = value.parse().with_context(ctx)?,
            "repetitions" => plan.repetitions = value.parse().with_context(ctx)?,
            "format" => plan.format = value.parse().with_context(ctx)?,
            "border" => plan.border = value.parse().with_context(ctx)?,
            "parallel" => plan.parallel = value.parse().with_context(ctx)?,
            _ => bail!("plan line {}: unknown key `{key}`", n + 1),
        }
    }
    if !phis.is_empty() {
        plan.phis = phis;
    }
    let (filters, issues) = parse_filters(&filter_texts);
    plan.filters = filters;
    Ok(ParsedPlan { plan, issues })
}

pub fn read_plan(path: &Path) -> Result<ParsedPlan> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading plan {}", path.display()))?;
    parse_plan(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub phi: f64,
    pub filter: String,
    pub mae: f64,
    pub psnr: f64,
    pub ncd_x1000: f64,
    pub time_s: f64,
    /// Mean time of the same family's exact variant divided by this
    /// filter's mean time, when that variant is in the plan.
    pub speedup: Option<f64>,
}

impl BenchRow {
    fn new(image: &str, phi: f64, filter: String, m: &MetricsReport) -> Self {
        BenchRow {
            image: image.to_string(),
            phi,
            filter,
            mae: m.mae,
            psnr: m.psnr,
            ncd_x1000: m.ncd_x1000,
            time_s: m.time_seconds,
            speedup: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Items that could not be run.
    pub errors: Vec<String>,
}

/// Applies `spec` `repetitions` times, sequentially, and returns the last
/// output with the mean wall time. Fails if any repetition differs.
pub fn time_filter(
    img: &RasterImage,
    spec: &FilterSpec,
    border: BorderPolicy,
    repetitions: usize,
    parallel: bool,
) -> Result<(RasterImage, f64)> {
    let run = |img| {
        if parallel {
            crate::apply_filter_parallel(img, spec, border)
        } else {
            apply_filter(img, spec, border)
        }
    };
    let mut total = 0.0;
    let mut first: Option<RasterImage> = None;
    for _ in 0..repetitions.max(1) {
        let start = Instant::now();
        let out = std::hint::black_box(run(img)?);
        total += start.elapsed().as_secs_f64();
        match &first {
            None => first = Some(out),
            Some(f) if *f != out => {
                bail!("filter `{spec}` is not deterministic across repetitions")
            }
            Some(_) => {}
        }
    }
    Ok((
        first.expect("at least one repetition"),
        total / repetitions.max(1) as f64,
    ))
}

fn image_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn exact_variant(spec: &FilterSpec) -> FilterSpec {
    FilterSpec {
        strategy: DirectionalStrategy::Exact,
        ..*spec
    }
}

/// Runs every (image, noise level, filter) combination of `plan`.
pub fn run_bench(plan: &BenchPlan) -> Result<BenchReport> {
    plan.validate()?;
    let mut report = BenchReport::default();

    let mut images = Vec::new();
    for path in &plan.images {
        match read_image(path) {
            Ok(img) => images.push((image_id(path), img)),
            Err(e) => report.errors.push(format!("image {}: {e}", path.display())),
        }
    }

    for (id, clean) in &images {
        for &phi in &plan.phis {
            let noisy = corrupt_image(clean, &NoiseParams::new(phi, plan.seed))?;
            report.rows.push(BenchRow::new(
                id,
                phi,
                "none".into(),
                &metrics::evaluate(clean, &noisy)?,
            ));

            let mut ran = Vec::new();
            let mut times: HashMap<String, f64> = HashMap::new();
            for spec in &plan.filters {
                match time_filter(&noisy, spec, plan.border, plan.repetitions, plan.parallel) {
                    Ok((out, time)) => {
                        let mut m = metrics::evaluate(clean, &out)?;
                        m.time_seconds = time;
                        times.insert(spec.to_string(), time);
                        ran.push((report.rows.len(), *spec));
                        report
                            .rows
                            .push(BenchRow::new(id, phi, spec.to_string(), &m));
                    }
                    Err(e) => report.errors.push(format!("{id} phi={phi} {spec}: {e:#}")),
                }
            }
            if plan.parallel {
                continue;
            }
            for (i, spec) in ran {
                let row = &mut report.rows[i];
                if let Some(base) = times.get(&exact_variant(&spec).to_string()) {
                    if row.time_s > 0.0 {
                        row.speedup = Some(base / row.time_s);
                    }
                }
            }
        }
    }
    Ok(report)
}

pub const CSV_HEADER: [&str; 8] = [
    "image",
    "phi",
    "filter",
    "mae",
    "psnr",
    "ncd_x1000",
    "time_s",
    "speedup",
];

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.image.clone(),
            r.phi.to_string(),
            r.filter.clone(),
            r.mae.to_string(),
            r.psnr.to_string(),
            r.ncd_x1000.to_string(),
            r.time_s.to_string(),
            r.speedup.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(CSV_HEADER) {
        bail!("unexpected CSV header");
    }
    let mut rows = Vec::new();
    for (n, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .with_context(|| format!("CSV row {}: column {}", n + 1, CSV_HEADER[i]))
        };
        rows.push(BenchRow {
            image: rec[0].to_string(),
            phi: num(1)?,
            filter: rec[2].to_string(),
            mae: num(3)?,
            psnr: num(4)?,
            ncd_x1000: num(5)?,
            time_s: num(6)?,
            speedup: if rec[7].is_empty() {
                None
            } else {
                Some(num(7)?)
            },
        });
    }
    Ok(rows)
}

/// `mae,psnr,ncd_x1000,time_s` for a single metrics report.
pub fn metrics_csv_row(m: &MetricsReport) -> String {
    format!("{},{},{},{}", m.mae, m.psnr, m.ncd_x1000, m.time_seconds)
}

/// Fixed-width `MAE PSNR NCD TIME` row.
pub fn metrics_table_row(m: &MetricsReport) -> String {
    format!(
        "{:>8.3} {:>8} {:>8.3} {:>9.4}",
        m.mae,
        format_psnr(m.psnr),
        m.ncd_x1000,
        m.time_seconds
    )
}

fn format_psnr(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p:.3}")
    }
}

/// One table per (image, noise level) with rows in plan order.
pub fn markdown(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let mut current: Option<(&str, f64)> = None;
    for r in rows {
        if current != Some((&r.image, r.phi)) {
            if current.is_some() {
                out.push('\n');
            }
            current = Some((&r.image, r.phi));
            let _ = writeln!(out, "#### {}, phi = {:.2}\n", r.image, r.phi);
            out.push_str("| filter | MAE | PSNR | NCD | TIME | speedup |\n");
            out.push_str("|---|---:|---:|---:|---:|---:|\n");
        }
        let _ = writeln!(
            out,
            "| {} | {:.3} | {} | {:.3} | {:.4} | {} |",
            r.filter,
            r.mae,
            format_psnr(r.psnr),
            r.ncd_x1000,
            r.time_s,
            r.speedup.map(|s| format!("{s:.2}")).unwrap_or_default()
        );
    }
    out
}
