mod args;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Serialize;
use tecentroid::averaging::{dba, ikdba, kdba, kdtw_pwa, pkdtw_pwa};
use tecentroid::elastic::{ama, kdtw, kdtw_normalized};
use tecentroid::eval::{
    build_representatives, error_rate, loo_tune_nu_with, medoid, BuildOptions, EvalReport, Method,
};
use tecentroid::io::{fmt_f64, read_dataset, series_to_csv, write_dataset};
use tecentroid::preimage::preimage_search;
use tecentroid::{
    synth_fixtures, CentroidResult, Fixture, InertiaMeasure, KernelParams, LabeledDataset,
    PreimageConfig, TimeSeries, DEFAULT_NU_GRID,
};

use args::{
    AmaArgs, AvgArgs, AvgMethod, ClassifyArgs, Cli, Command, FixtureArgs, FixtureKind, GramArgs,
    KernelArgs, Ordering, SearchArgs, TuneArgs,
};

/// Everything that determines a run's output, echoed to stderr.
#[derive(Debug, Default, Serialize)]
struct RunConfig {
    subcommand: &'static str,
    inputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corridor: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ordering: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preimage: Option<PreimageConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture: Option<Fixture>,
    output: Option<PathBuf>,
    threads: usize,
    normalize: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the worker pool")?;
    }
    let mut config = RunConfig {
        output: cli.output.clone(),
        threads: rayon::current_num_threads(),
        normalize: cli.normalize,
        ..Default::default()
    };
    let ctx = Ctx {
        normalize: cli.normalize,
    };
    let text = match &cli.command {
        Command::Avg(a) => avg(&ctx, a, &mut config)?,
        Command::Classify(a) => classify(&ctx, a, &mut config)?,
        Command::TuneNu(a) => tune_nu(&ctx, a, &mut config)?,
        Command::Gram(a) => gram(&ctx, a, &mut config)?,
        Command::Ama(a) => ama_dump(&ctx, a, &mut config)?,
        Command::Fixtures(a) => fixtures(a, &mut config)?,
    };
    emit(cli.output.as_deref(), &text)
}

struct Ctx {
    normalize: bool,
}

impl Ctx {
    fn load(&self, path: &Path) -> Result<LabeledDataset> {
        let ds = read_dataset(path).with_context(|| format!("loading {}", path.display()))?;
        Ok(if self.normalize {
            ds.map_series(TimeSeries::z_normalized)
        } else {
            ds
        })
    }
}

fn announce(config: &RunConfig) -> Result<()> {
    eprintln!("run config: {}", serde_json::to_string(config)?);
    Ok(())
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn kernel_params(k: &KernelArgs) -> Result<KernelParams> {
    let params = KernelParams::new(k.nu)?;
    Ok(match k.corridor {
        Some(r) => params.with_corridor(r),
        None => params,
    })
}

fn preimage_config(s: &SearchArgs) -> PreimageConfig {
    PreimageConfig {
        budget: s.budget,
        initial_step: s.step,
        max_sweeps: s.sweeps,
        ..PreimageConfig::default()
    }
}

fn build_options(max_iter: usize, ordering: Ordering, search: &SearchArgs) -> BuildOptions {
    BuildOptions {
        max_iter,
        ordering: ordering.into(),
        preimage: preimage_config(search),
    }
}

fn ordering_name(o: Ordering) -> String {
    match o {
        Ordering::InputOrder => "input-order",
        Ordering::SimilarFirst => "similar-first",
    }
    .to_string()
}

fn trace_csv(result: &CentroidResult) -> String {
    let mut out = String::from("iteration,inertia\n");
    for (k, v) in result.inertia_trace.iter().enumerate() {
        let _ = writeln!(out, "{k},{}", fmt_f64(*v));
    }
    out
}

fn avg(ctx: &Ctx, a: &AvgArgs, config: &mut RunConfig) -> Result<String> {
    let method = a.method;
    config.subcommand = "avg";
    config.inputs = vec![a.input.clone()];
    config.method = Some(format!("{method:?}").to_lowercase());
    if method != AvgMethod::Dba {
        config.nu = Some(a.kernel.nu);
        config.corridor = a.kernel.corridor;
    }
    if matches!(method, AvgMethod::Dba | AvgMethod::Ikdba) {
        config.max_iter = Some(a.max_iter);
    }
    if method == AvgMethod::Ppwa {
        config.ordering = Some(ordering_name(a.ordering));
    }
    if method == AvgMethod::Preimage {
        config.preimage = Some(preimage_config(&a.search));
    }
    announce(config)?;

    let ds = ctx.load(&a.input)?;
    let set: Vec<&TimeSeries> = match &a.class {
        Some(label) => ds.class(label),
        None => ds.series(),
    };
    if set.is_empty() {
        bail!("no series with label '{}'", a.class.as_deref().unwrap_or_default());
    }
    let params = kernel_params(&a.kernel)?;
    let kernel_medoid = || medoid(&set, InertiaMeasure::KdtwSimilarity, &params).map(|(_, m)| m);

    let (result, trace) = match method {
        AvgMethod::Dba => {
            let (_, init) = medoid(&set, InertiaMeasure::DtwDistance, &params)?;
            let r = dba(&set, a.max_iter, &init)?;
            let t = trace_csv(&r);
            (r, Some(t))
        }
        AvgMethod::Kdba => (CentroidResult::single_pass(kdba(&kernel_medoid()?, &set, &params)?), None),
        AvgMethod::Ikdba => {
            let r = ikdba(&set, &params, a.max_iter, &kernel_medoid()?)?;
            let t = trace_csv(&r);
            (r, Some(t))
        }
        AvgMethod::Pwa => {
            if set.len() != 2 {
                bail!("pwa averages exactly two series, found {}", set.len());
            }
            (CentroidResult::single_pass(kdtw_pwa(set[0], set[1], &params)?), None)
        }
        AvgMethod::Ppwa => (
            CentroidResult::single_pass(pkdtw_pwa(&set, &params, a.ordering.into())?),
            None,
        ),
        AvgMethod::Preimage => {
            let run = preimage_search(&set, &params, &preimage_config(&a.search), &kernel_medoid()?)?;
            let t = run.trace_csv();
            (run.result, Some(t))
        }
    };
    if let Some(path) = &a.trace {
        let Some(t) = trace else {
            bail!("method {method:?} is single-pass and has no inertia trace");
        };
        emit(Some(path), &t)?;
    }
    Ok(series_to_csv(&result.centroid))
}

fn grid_or_default(grid: &Option<Vec<f64>>) -> Vec<f64> {
    grid.clone().unwrap_or_else(|| DEFAULT_NU_GRID.to_vec())
}

fn classify(ctx: &Ctx, a: &ClassifyArgs, config: &mut RunConfig) -> Result<String> {
    config.subcommand = "classify";
    config.inputs = vec![a.train.clone(), a.test.clone()];
    config.method = Some(a.method.to_string());
    let kernel = a.method.uses_kernel();
    if kernel {
        if a.tune_nu {
            config.grid = Some(grid_or_default(&a.grid));
        } else {
            config.nu = Some(a.kernel.nu);
        }
        config.corridor = a.kernel.corridor;
    } else if a.tune_nu {
        bail!("method '{}' is DTW-based and has no stiffness to tune", a.method);
    }
    if matches!(a.method, Method::Dba | Method::Ikdba) {
        config.max_iter = Some(a.max_iter);
    }
    if a.method == Method::PkdtwPwa {
        config.ordering = Some(ordering_name(a.ordering));
    }
    if a.method == Method::Preimage {
        config.preimage = Some(preimage_config(&a.search));
    }
    announce(config)?;

    let train = ctx.load(&a.train)?;
    let test = ctx.load(&a.test)?;
    let opts = build_options(a.max_iter, a.ordering, &a.search);
    let nu = if kernel && a.tune_nu {
        let grid = grid_or_default(&a.grid);
        let (nu, errors) = loo_tune_nu_with(&train, a.method, &grid, a.kernel.corridor, &opts)?;
        eprintln!("leave-one-out errors per nu: {errors:?}; selected nu = {}", fmt_f64(nu));
        nu
    } else {
        a.kernel.nu
    };
    let params = kernel_params(&KernelArgs {
        nu,
        corridor: a.kernel.corridor,
    })?;
    let reps = build_representatives(&train, a.method, &params, &opts)?;
    let err = error_rate(&reps, &test)?;

    let dataset = match &a.dataset {
        Some(d) => d.clone(),
        None => dataset_name(&a.train),
    };
    let mut report = EvalReport::new();
    report.push(&dataset, a.method.name(), err)?;
    Ok(report.to_csv())
}

/// File stem without a trailing `_TRAIN`.
fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    stem.strip_suffix("_TRAIN").unwrap_or(&stem).to_string()
}

fn tune_nu(ctx: &Ctx, a: &TuneArgs, config: &mut RunConfig) -> Result<String> {
    config.subcommand = "tune-nu";
    config.inputs = vec![a.train.clone()];
    config.method = Some(a.method.to_string());
    let grid = grid_or_default(&a.grid);
    config.grid = Some(grid.clone());
    config.corridor = a.corridor;
    config.max_iter = Some(a.max_iter);
    config.ordering = Some(ordering_name(a.ordering));
    announce(config)?;

    let train = ctx.load(&a.train)?;
    let opts = build_options(a.max_iter, a.ordering, &a.search);
    let (best, errors) = loo_tune_nu_with(&train, a.method, &grid, a.corridor, &opts)?;
    let mut out = String::from("nu,loo_errors,selected\n");
    for (nu, e) in grid.iter().zip(errors) {
        let _ = writeln!(out, "{},{e},{}", fmt_f64(*nu), *nu == best);
    }
    Ok(out)
}

fn gram(ctx: &Ctx, a: &GramArgs, config: &mut RunConfig) -> Result<String> {
    config.subcommand = "gram";
    config.inputs = vec![a.input.clone()];
    config.nu = Some(a.kernel.nu);
    config.corridor = a.kernel.corridor;
    announce(config)?;

    let ds = ctx.load(&a.input)?;
    let set = ds.series();
    let params = kernel_params(&a.kernel)?;
    let n = set.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values = {
        use rayon::prelude::*;
        cells
            .par_iter()
            .map(|&(i, j)| -> tecentroid::Result<f64> {
                if a.normalized {
                    kdtw_normalized(set[i], set[j], &params)
                } else {
                    let k = kdtw(set[i], set[j], &params)?;
                    if a.log {
                        Ok(k.ln())
                    } else {
                        k.value()
                    }
                }
            })
            .collect::<tecentroid::Result<Vec<_>>>()?
    };
    let mut m = vec![0.0; n * n];
    for (&(i, j), v) in cells.iter().zip(values) {
        m[i * n + j] = v;
        m[j * n + i] = v;
    }
    let mut out = String::new();
    for row in m.chunks(n) {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn ama_dump(ctx: &Ctx, a: &AmaArgs, config: &mut RunConfig) -> Result<String> {
    config.subcommand = "ama";
    config.inputs = vec![a.input.clone()];
    config.nu = Some(a.kernel.nu);
    config.corridor = a.kernel.corridor;
    announce(config)?;

    let ds = ctx.load(&a.input)?;
    let set = ds.series();
    if set.len() < 2 {
        bail!("the alignment matrix needs two series, found {}", set.len());
    }
    let params = kernel_params(&a.kernel)?;
    Ok(ama(set[0], set[1], &params)?.to_csv(a.kernel.nu))
}

fn fixtures(a: &FixtureArgs, config: &mut RunConfig) -> Result<String> {
    let fixture = match a.kind {
        FixtureKind::Triangles => Fixture::TrianglePair {
            len: a.len,
            first_peak: a.first_peak,
            second_peak: a.second_peak,
            half_width: a.half_width,
        },
        FixtureKind::SineHalfwave => Fixture::SineHalfwave {
            len: a.len,
            periods: a.periods,
        },
        FixtureKind::Pwm => Fixture::PwmLike {
            len: a.len,
            per_class: a.per_class,
            seed: a.seed,
        },
        FixtureKind::Cbf => Fixture::Cbf {
            per_class: a.per_class,
            seed: a.seed,
        },
    };
    config.subcommand = "fixtures";
    config.fixture = Some(fixture.clone());
    announce(config)?;
    Ok(write_dataset(&synth_fixtures(&fixture)?))
}
