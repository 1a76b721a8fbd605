use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::json;

use gspi_core::experiment::{
    self, dataset_specs, generate_dataset, histogram_csv, mixture_figure, profile_figures, run_cell,
    ExperimentConfig, GraphSpec, ResultRow, TheoryCheckConfig, RESULT_CSV_HEADER,
};
use gspi_core::features::{gspi_vector, spi_vector};
use gspi_core::kernels::gram;
use gspi_core::{BinningScheme, Graph, ModelParams};

use crate::args::{Common, FeaturesArgs, Figure, FigureArgs, KindArg, TheoryArgs};

/// Exit code 1 for `Config`, 2 for `Runtime`.
pub enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

type Outcome = std::result::Result<(), Failure>;

fn config<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Config(e.into())
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn set_jobs(jobs: Option<usize>) -> Outcome {
    if let Some(j) = jobs {
        if j == 0 {
            return Err(config(anyhow!("--jobs must be positive")));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(runtime)?;
    }
    Ok(())
}

fn resolve(common: &Common) -> std::result::Result<ExperimentConfig, Failure> {
    set_jobs(common.jobs)?;
    let cfg = common.resolve().map_err(config)?;
    cfg.validate().map_err(config)?;
    Ok(cfg)
}

fn write(path: &Path, contents: &str) -> Outcome {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(runtime)?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display())).map_err(runtime)
}

fn to_json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(runtime)?;
    s.push('\n');
    Ok(s)
}

pub fn cell_dir(out: &Path, n: usize, factor: f64) -> PathBuf {
    out.join(format!("n{n}_f{factor}"))
}

#[derive(Serialize)]
struct Manifest<'a> {
    params: ModelParams,
    q2: f64,
    cell_seed: u64,
    master_seed: u64,
    graphs: Vec<ManifestEntry<'a>>,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: String,
    #[serde(flatten)]
    spec: &'a GraphSpec,
    edges: usize,
}

fn class_dir(spec: &GraphSpec) -> &'static str {
    match spec.label.clusters() {
        1 => "one_cluster",
        _ => "two_cluster",
    }
}

pub fn generate(common: &Common) -> Outcome {
    let cfg = resolve(common)?;
    // every cell is checked before the first file is written
    let cells: Vec<(usize, f64, ModelParams)> = cfg
        .cells()
        .map(|(n, f)| ModelParams::from_factor(n, cfg.c0, f).map(|p| (n, f, p)))
        .collect::<gspi_core::Result<_>>()
        .map_err(config)?;
    for (n, factor, params) in cells {
        let seed = cfg.cell_seed(n, factor);
        let specs = dataset_specs(seed, cfg.graphs_per_class);
        let graphs = generate_dataset(&params, &specs).map_err(runtime)?;
        let dir = cell_dir(&common.out, n, factor);
        let mut entries = Vec::with_capacity(specs.len());
        for (spec, g) in specs.iter().zip(&graphs) {
            let file = format!("{}/g{:03}.edges", class_dir(spec), spec.index);
            write(&dir.join(&file), &g.to_edge_list())?;
            entries.push(ManifestEntry { file, spec, edges: g.edge_count() });
        }
        let manifest = Manifest { params, q2: params.q2, cell_seed: seed, master_seed: cfg.seed, graphs: entries };
        write(&dir.join("manifest.json"), &to_json(&manifest)?)?;
        eprintln!("wrote {} graphs to {}", graphs.len(), dir.display());
    }
    Ok(())
}

pub fn features(args: &FeaturesArgs) -> Outcome {
    let binning = BinningScheme::new(args.bin_width).map_err(config)?;
    let mut graphs = Vec::with_capacity(args.files.len());
    for path in &args.files {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(runtime)?;
        let g = Graph::from_edge_list(&text).with_context(|| format!("parsing {}", path.display())).map_err(runtime)?;
        graphs.push(g);
    }
    let mut lines = String::new();
    let gram_csv = match args.kind {
        KindArg::Spi => {
            let vs: Vec<_> = graphs.iter().map(spi_vector).collect();
            push_lines(&mut lines, &args.files, vs.iter().map(|v| v.to_json()))?;
            args.gram.as_ref().map(|_| gram(&vs, true)).transpose().map_err(runtime)?
        }
        KindArg::Gspi => {
            let vs = graphs.iter().map(|g| gspi_vector(g, binning)).collect::<gspi_core::Result<Vec<_>>>();
            let vs = vs.map_err(runtime)?;
            push_lines(&mut lines, &args.files, vs.iter().map(|v| v.to_json()))?;
            args.gram.as_ref().map(|_| gram(&vs, true)).transpose().map_err(runtime)?
        }
    };
    match &args.out {
        Some(path) => write(path, &lines)?,
        None => print!("{lines}"),
    }
    if let (Some(path), Some(g)) = (&args.gram, gram_csv) {
        write(path, &g.to_csv())?;
    }
    Ok(())
}

fn push_lines(out: &mut String, files: &[PathBuf], vectors: impl Iterator<Item = String>) -> Outcome {
    for (path, v) in files.iter().zip(vectors) {
        let features: serde_json::Value = serde_json::from_str(&v).map_err(runtime)?;
        let line = json!({ "file": path.display().to_string(), "features": features });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    Ok(())
}

#[derive(Serialize)]
struct CellFailure {
    n: usize,
    p2_factor: f64,
    error: String,
}

pub fn reproduce_table1(common: &Common) -> Outcome {
    let cfg = resolve(common)?;
    let mut rows: Vec<ResultRow> = Vec::new();
    let mut failures = Vec::new();
    let start = Instant::now();
    for (n, factor) in cfg.cells() {
        match run_cell(&cfg, n, factor) {
            Ok(pair) => {
                for r in &pair {
                    eprintln!("{:<4} n={n:<5} factor={factor:<4} accuracy={:.3} ({:.2}s)", r.kernel.name(), r.accuracy, r.wall_time);
                }
                rows.extend(pair);
            }
            Err(e) => {
                eprintln!("cell n={n} factor={factor} failed: {e}");
                failures.push(CellFailure { n, p2_factor: factor, error: e.to_string() });
            }
        }
    }
    eprintln!("total {:.2}s", start.elapsed().as_secs_f64());
    let mut csv = String::from(RESULT_CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    write(&common.out.join("table1.csv"), &csv)?;
    let report = json!({ "config": cfg, "rows": rows, "failures": failures });
    write(&common.out.join("table1.json"), &to_json(&report)?)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(runtime(anyhow!("{} of {} cells failed", failures.len(), failures.len() + rows.len() / 2)))
    }
}

pub fn emit_figures(args: &FigureArgs) -> Outcome {
    let cfg = resolve(&args.common)?;
    let binning = cfg.binning().map_err(config)?;
    let out = &args.common.out;
    let wants = |f: Figure| args.which.contains(&f);
    // the profile figures default to 100 graphs per class like the table runs
    if wants(Figure::Fig1) || wants(Figure::Fig2) {
        let params = ModelParams::from_factor(args.profile_n, cfg.c0, args.profile_factor).map_err(config)?;
        let start = Instant::now();
        let figs = profile_figures(&params, cfg.graphs_per_class, cfg.seed, binning).map_err(runtime)?;
        eprintln!("profile figures: {:.2}s", start.elapsed().as_secs_f64());
        if wants(Figure::Fig1) {
            write(&out.join("fig1.csv"), &figs.distance_csv())?;
        }
        if wants(Figure::Fig2) {
            write(&out.join("fig2.csv"), &figs.path_count_csv())?;
        }
    }
    if wants(Figure::Fig3) {
        if !args.mixture_n.is_multiple_of(2) || args.mixture_graphs == 0 {
            return Err(config(anyhow!("mixture figure needs an even node count and at least one graph")));
        }
        let start = Instant::now();
        let fig = mixture_figure(args.mixture_n, args.mixture_p2, args.mixture_q2, args.mixture_graphs, cfg.seed, 40)
            .map_err(config)?;
        eprintln!("mixture figure: {:.2}s", start.elapsed().as_secs_f64());
        write(&out.join("fig3.csv"), &fig.csv())?;
        write(&out.join("fig3_empirical.csv"), &histogram_csv(&fig.empirical))?;
        write(&out.join("fig3_prediction.csv"), &histogram_csv(&fig.prediction))?;
        eprintln!("smoothed empirical maxima: {:?}", fig.smoothed_maxima());
    }
    Ok(())
}

pub fn theory_check(args: &TheoryArgs) -> Outcome {
    set_jobs(args.common.jobs)?;
    let base = args.common.resolve().map_err(config)?;
    let n = args.common.n.as_ref().and_then(|v| v.first().copied()).unwrap_or(TheoryCheckConfig::default().n);
    let cfg = TheoryCheckConfig {
        n,
        c0: base.c0,
        p2_factor: args.factor,
        distances: args.distances.clone(),
        graphs_per_model: args.mc_graphs,
        sources_per_graph: args.sources,
        mixture_graphs: args.mixture_graphs,
        lemma_cases: args.lemma_cases,
        seed: base.seed,
        ..TheoryCheckConfig::default()
    };
    if cfg.graphs_per_model < 2 || cfg.sources_per_graph == 0 || cfg.distances.is_empty() {
        return Err(config(anyhow!("need at least 2 graphs, 1 source and 1 distance")));
    }
    ModelParams::from_factor(cfg.n, cfg.c0, cfg.p2_factor).map_err(config)?;
    let start = Instant::now();
    let report = experiment::theory_check(&cfg).map_err(runtime)?;
    eprintln!("theory check: {:.2}s", start.elapsed().as_secs_f64());
    for r in &report.theorem1 {
        eprintln!(
            "d={} ratio={:.4} tolerance={:.4} ratio_ok={} bounds_ok={}",
            r.moments.d, r.ratio, r.tolerance, r.ratio_ok, r.bounds_ok
        );
    }
    eprintln!("peaks pass={} lemma violations={}", report.peaks.pass, report.lemma.violations);
    write(&args.common.out.join("theory_check.json"), &to_json(&report)?)?;
    Ok(())
}
