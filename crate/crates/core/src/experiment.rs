//! Dataset generation and the end-to-end runs: cross-validated accuracy per
//! (kernel, n, factor) cell, averaged feature profiles for plotting, and the
//! Monte-Carlo comparison against the closed-form predictions.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{
    average_profiles, normalize, path_features, sssp_count, AveragedProfile, BinningScheme, UnitVector,
};
use crate::graph::{Graph, GraphLabel, ModelParams};
use crate::kernels::{format_sig, FeatureIndex};
use crate::learn::{kfold_eval, EvalReport, PegasosConfig};
use crate::rng::{derive_seed, rng_from_seed};
use crate::theory::{
    inclusion_exclusion_estimate, local_maxima, smooth, spi_expected_bounds, theorem1_factor,
    two_cluster_d2_prediction, MixtureModel, SpiExpectationBounds,
};

#[cfg(feature = "parallel")]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    pub c0: f64,
    pub p2_factors: Vec<f64>,
    pub graphs_per_class: usize,
    pub folds: usize,
    pub bin_width: u64,
    pub lambda: f64,
    /// SGD steps per training run; `None` = 100 per training sample.
    pub iterations: Option<usize>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: vec![200, 400, 600, 800, 1000],
            c0: 40.0,
            p2_factors: vec![1.2, 1.3, 1.4, 1.5],
            graphs_per_class: 100,
            folds: 10,
            bin_width: 1,
            lambda: 1e-4,
            iterations: None,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n_list.is_empty() || self.p2_factors.is_empty() {
            return bad("need at least one n and one p2 factor".into());
        }
        if self.graphs_per_class == 0 || self.folds < 2 || self.bin_width == 0 {
            return bad("graphs_per_class and bin_width must be positive and folds >= 2".into());
        }
        if 2 * self.graphs_per_class < self.folds {
            return bad(format!("{} graphs cannot fill {} folds", 2 * self.graphs_per_class, self.folds));
        }
        if !(self.lambda > 0.0) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if let Some(f) = self.p2_factors.iter().find(|&&f| !(f > 1.0)) {
            return bad(format!("p2 factor {f} must exceed 1"));
        }
        for &n in &self.n_list {
            if n % 2 != 0 {
                return Err(Error::OddNodeCount(n));
            }
            for &f in &self.p2_factors {
                ModelParams::from_factor(n, self.c0, f)?;
            }
        }
        Ok(())
    }

    pub fn binning(&self) -> Result<BinningScheme> {
        BinningScheme::new(self.bin_width)
    }

    pub fn pegasos(&self) -> PegasosConfig {
        PegasosConfig { lambda: self.lambda, iterations: self.iterations, project: true }
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.n_list.iter().flat_map(move |&n| self.p2_factors.iter().map(move |&f| (n, f)))
    }

    pub fn cell_seed(&self, n: usize, factor: f64) -> u64 {
        cell_seed(self.seed, n, factor)
    }
}

pub fn cell_seed(master: u64, n: usize, factor: f64) -> u64 {
    derive_seed(&[master, n as u64, factor.to_bits()])
}

pub fn graph_seed(cell_seed: u64, label: GraphLabel, index: usize) -> u64 {
    derive_seed(&[cell_seed, label.seed_tag(), index as u64])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub label: GraphLabel,
    pub index: usize,
    pub seed: u64,
}

/// One-cluster graphs first, then two-cluster graphs, each indexed from 0.
pub fn dataset_specs(cell_seed: u64, graphs_per_class: usize) -> Vec<GraphSpec> {
    [GraphLabel::OneCluster, GraphLabel::TwoCluster]
        .into_iter()
        .flat_map(|label| {
            (0..graphs_per_class).map(move |index| GraphSpec { label, index, seed: graph_seed(cell_seed, label, index) })
        })
        .collect()
}

pub fn generate_dataset(params: &ModelParams, specs: &[GraphSpec]) -> Result<Vec<Graph>> {
    par_map(specs, |s| params.sample(s.label, s.seed)).into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    #[serde(rename = "SPI")]
    Spi,
    #[serde(rename = "GSPI")]
    Gspi,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Spi => "SPI",
            KernelKind::Gspi => "GSPI",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub kernel: KernelKind,
    pub n: usize,
    pub p2_factor: f64,
    pub accuracy: f64,
    pub per_fold: Vec<f64>,
    /// Seconds; excluded from serialized output so reruns stay byte-identical.
    #[serde(skip)]
    pub wall_time: f64,
}

impl ResultRow {
    pub fn csv_line(&self) -> String {
        format!("{},{},{},{}", self.kernel.name(), self.n, self.p2_factor, format_sig(self.accuracy, 6))
    }
}

pub const RESULT_CSV_HEADER: &str = "kernel,n,p2_factor,accuracy";

/// Normalized SPI and GSPI vectors of every graph, in dataset order.
pub fn extract_units(graphs: &[Graph], binning: BinningScheme) -> Result<(Vec<UnitVector>, Vec<UnitVector>)> {
    let pairs = par_map(graphs, |g| -> Result<(UnitVector, UnitVector)> {
        let (spi, gspi) = path_features(g, binning)?;
        Ok((normalize(&spi)?, normalize(&gspi)?))
    });
    let mut spi = Vec::with_capacity(graphs.len());
    let mut gspi = Vec::with_capacity(graphs.len());
    for p in pairs {
        let (a, b) = p?;
        spi.push(a);
        gspi.push(b);
    }
    Ok((spi, gspi))
}

/// Cross-validates a linear SVM on normalized feature vectors.
pub fn evaluate_units(
    units: &[UnitVector],
    labels: &[f64],
    folds: usize,
    pegasos: &PegasosConfig,
    seed: u64,
) -> Result<EvalReport> {
    let index = FeatureIndex::build(units);
    let rows: Vec<_> = units.iter().map(|u| index.embed(u)).collect();
    kfold_eval(&rows, labels, index.dim(), folds, pegasos, seed)
}

/// Generates one cell's dataset and cross-validates both kernels on it.
/// Both kernels see the same graphs and the same fold assignment.
pub fn run_cell(config: &ExperimentConfig, n: usize, factor: f64) -> Result<[ResultRow; 2]> {
    let started = std::time::Instant::now();
    let params = ModelParams::from_factor(n, config.c0, factor)?;
    let seed = config.cell_seed(n, factor);
    let specs = dataset_specs(seed, config.graphs_per_class);
    let graphs = generate_dataset(&params, &specs)?;
    let labels: Vec<f64> = specs.iter().map(|s| s.label.sign()).collect();
    let (spi, gspi) = extract_units(&graphs, config.binning()?)?;
    let extracted = started.elapsed().as_secs_f64();
    let cv_seed = derive_seed(&[seed, 0xc5]);
    let mut rows = Vec::with_capacity(2);
    for (kind, units) in [(KernelKind::Spi, &spi), (KernelKind::Gspi, &gspi)] {
        let t = std::time::Instant::now();
        let report = evaluate_units(units, &labels, config.folds, &config.pegasos(), cv_seed)?;
        rows.push(ResultRow {
            kernel: kind,
            n,
            p2_factor: factor,
            accuracy: report.accuracy,
            per_fold: report.per_fold.iter().map(|f| f.accuracy).collect(),
            wall_time: extracted / 2.0 + t.elapsed().as_secs_f64(),
        });
    }
    let gspi_row = rows.pop().expect("two rows");
    let spi_row = rows.pop().expect("two rows");
    Ok([spi_row, gspi_row])
}

/// Per-class averaged source profiles (distance histogram and the `d = 2`
/// path-count histogram) for one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileFigures {
    pub params: ModelParams,
    pub one_cluster: AveragedProfile,
    pub two_cluster: AveragedProfile,
}

pub fn profile_figures(
    params: &ModelParams,
    graphs_per_class: usize,
    seed: u64,
    binning: BinningScheme,
) -> Result<ProfileFigures> {
    let cell = cell_seed(seed, params.n, 1.0 + params.alpha0);
    let specs = dataset_specs(cell, graphs_per_class);
    let graphs = generate_dataset(params, &specs)?;
    let (one, two) = graphs.split_at(graphs_per_class);
    Ok(ProfileFigures {
        params: *params,
        one_cluster: average_profiles(one, 2, binning)?,
        two_cluster: average_profiles(two, 2, binning)?,
    })
}

impl ProfileFigures {
    /// `x,one_cluster,two_cluster` with `x` the distance.
    pub fn distance_csv(&self) -> String {
        let max = self.one_cluster.spi.keys().chain(self.two_cluster.spi.keys()).copied().max().unwrap_or(0);
        aligned_csv(
            "x,one_cluster,two_cluster",
            (1..=max as u64).map(|d| vec![self.one_cluster.spi_at(d as u32), self.two_cluster.spi_at(d as u32)]),
            1,
        )
    }

    /// `x,one_cluster,two_cluster` with `x` the (binned) path count at distance 2.
    pub fn path_count_csv(&self) -> String {
        let max = self.one_cluster.gspi_d.keys().chain(self.two_cluster.gspi_d.keys()).copied().max().unwrap_or(0);
        aligned_csv(
            "x,one_cluster,two_cluster",
            (1..=max).map(|x| vec![self.one_cluster.gspi_at(x), self.two_cluster.gspi_at(x)]),
            1,
        )
    }

    pub fn distance_curves(&self) -> (Vec<f64>, Vec<f64>) {
        let max = self.one_cluster.spi.keys().chain(self.two_cluster.spi.keys()).copied().max().unwrap_or(0);
        (1..=max).map(|d| (self.one_cluster.spi_at(d), self.two_cluster.spi_at(d))).unzip()
    }

    pub fn path_count_curves(&self) -> (Vec<f64>, Vec<f64>) {
        let max = self.one_cluster.gspi_d.keys().chain(self.two_cluster.gspi_d.keys()).copied().max().unwrap_or(0);
        (1..=max).map(|x| (self.one_cluster.gspi_at(x), self.two_cluster.gspi_at(x))).unzip()
    }
}

fn aligned_csv(header: &str, rows: impl Iterator<Item = Vec<f64>>, first_x: u64) -> String {
    let mut out = format!("{header}\n");
    for (i, row) in rows.enumerate() {
        let _ = write!(out, "{}", first_x + i as u64);
        for v in row {
            let _ = write!(out, ",{}", format_sig(v, 12));
        }
        out.push('\n');
    }
    out
}

/// `x,value` rows for `x = 0, 1, ...`.
pub fn histogram_csv(values: &[f64]) -> String {
    aligned_csv("x,value", values.iter().map(|&v| vec![v]), 0)
}

/// Empirical two-cluster `d = 2` path-count histogram next to the mixture
/// prediction. Index `x` of both vectors is the path count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureFigure {
    pub n: usize,
    pub p2: f64,
    pub q2: f64,
    pub graphs: usize,
    pub empirical: Vec<f64>,
    pub prediction: Vec<f64>,
    pub mixture: MixtureModel,
}

impl MixtureFigure {
    pub fn csv(&self) -> String {
        aligned_csv(
            "x,empirical,mixture",
            self.empirical.iter().zip(&self.prediction).map(|(&e, &p)| vec![e, p]),
            0,
        )
    }

    pub fn smoothed_maxima(&self) -> Vec<usize> {
        local_maxima(&smooth(&self.empirical, 1))
    }
}

pub fn mixture_figure(n: usize, p2: f64, q2: f64, graphs: usize, seed: u64, x_max: usize) -> Result<MixtureFigure> {
    let mixture = two_cluster_d2_prediction(n, p2, q2)?;
    let base = derive_seed(&[seed, n as u64, p2.to_bits(), q2.to_bits()]);
    let specs: Vec<u64> = (0..graphs).map(|i| graph_seed(base, GraphLabel::TwoCluster, i)).collect();
    let sums = par_map(&specs, |&s| -> Result<Vec<f64>> {
        let g = crate::graph::planted_partition(n, p2, q2, s)?;
        let mut h = vec![0.0; x_max + 1];
        for src in 0..n {
            let r = sssp_count(&g, src)?;
            for t in 0..n {
                if r.dist[t] == 2 {
                    let x = (r.sigma[t] as usize).min(x_max);
                    h[x] += 1.0;
                }
            }
        }
        Ok(h)
    });
    let mut empirical = vec![0.0; x_max + 1];
    for h in sums {
        for (acc, v) in empirical.iter_mut().zip(h?) {
            *acc += v;
        }
    }
    let samples = (graphs * n) as f64;
    empirical.iter_mut().for_each(|v| *v /= samples);
    Ok(MixtureFigure { n, p2, q2, graphs, empirical, prediction: mixture.histogram(x_max as u64), mixture })
}

/// Monte-Carlo mean of `N_d` (nodes at distance `d` from a source) per model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMoments {
    pub d: u32,
    pub mean_one: f64,
    pub se_one: f64,
    pub mean_two: f64,
    pub se_two: f64,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    (mean, (var / k).sqrt())
}

/// Per-graph average of `N_d` over `sources` evenly spaced source nodes,
/// then mean and standard error across graphs.
pub fn distance_moments(
    params: &ModelParams,
    graphs_per_model: usize,
    sources: usize,
    distances: &[u32],
    seed: u64,
) -> Result<Vec<DistanceMoments>> {
    let cell = cell_seed(seed, params.n, 1.0 + params.alpha0);
    let specs = dataset_specs(cell, graphs_per_model);
    let n = params.n;
    let sources = sources.clamp(1, n);
    let per_graph = par_map(&specs, |s| -> Result<Vec<f64>> {
        let g = params.sample(s.label, s.seed)?;
        let mut counts = vec![0.0; distances.len()];
        for k in 0..sources {
            let r = sssp_count(&g, k * n / sources)?;
            for &d in &r.dist {
                if let Some(i) = distances.iter().position(|&x| x == d) {
                    counts[i] += 1.0;
                }
            }
        }
        Ok(counts.into_iter().map(|c| c / sources as f64).collect())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (one, two) = per_graph.split_at(graphs_per_model);
    Ok(distances
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let (mean_one, se_one) = mean_se(&one.iter().map(|v| v[i]).collect::<Vec<_>>());
            let (mean_two, se_two) = mean_se(&two.iter().map(|v| v[i]).collect::<Vec<_>>());
            DistanceMoments { d, mean_one, se_one, mean_two, se_two }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCheck {
    pub moments: DistanceMoments,
    pub ratio: f64,
    pub combined_se: f64,
    /// `2/(c0-1) + 3 · combined_se`.
    pub tolerance: f64,
    pub ratio_ok: bool,
    pub bounds: SpiExpectationBounds,
    pub bounds_ok: bool,
}

/// Compares the two models' mean `N_d` and each mean against the closed-form
/// bounds widened by three standard errors.
pub fn ratio_check(moments: &DistanceMoments, n: usize, c0: f64) -> Result<RatioCheck> {
    let m = moments;
    let ratio = m.mean_one / m.mean_two;
    // delta-method standard error of the ratio
    let combined_se = ratio * ((m.se_one / m.mean_one).powi(2) + (m.se_two / m.mean_two).powi(2)).sqrt();
    let tolerance = theorem1_factor(c0)? + 3.0 * combined_se;
    let bounds = spi_expected_bounds(n, c0, m.d)?;
    let bounds_ok = bounds.contains(m.mean_one, 3.0 * m.se_one) && bounds.contains(m.mean_two, 3.0 * m.se_two);
    Ok(RatioCheck {
        moments: m.clone(),
        ratio,
        combined_se,
        tolerance,
        ratio_ok: (ratio - 1.0).abs() <= tolerance,
        bounds,
        bounds_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoryCheckConfig {
    pub n: usize,
    pub c0: f64,
    pub p2_factor: f64,
    pub distances: Vec<u32>,
    pub graphs_per_model: usize,
    pub sources_per_graph: usize,
    pub mixture_n: usize,
    pub mixture_p2: f64,
    pub mixture_q2: f64,
    pub mixture_graphs: usize,
    pub lemma_cases: usize,
    pub seed: u64,
}

impl Default for TheoryCheckConfig {
    fn default() -> Self {
        TheoryCheckConfig {
            n: 1000,
            c0: 40.0,
            p2_factor: 1.5,
            distances: vec![2, 3],
            graphs_per_model: 200,
            sources_per_graph: 64,
            mixture_n: 400,
            mixture_p2: 0.18,
            mixture_q2: 0.0204,
            mixture_graphs: 500,
            lemma_cases: 10_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakCheck {
    pub mean_minus: f64,
    pub mean_plus: f64,
    pub mixture_maxima: Vec<usize>,
    pub empirical_maxima: Vec<usize>,
    pub smoothed_maxima: Vec<usize>,
    /// Two smoothed empirical maxima, each within 2 of a mixture mean.
    pub pass: bool,
}

pub fn peak_check(fig: &MixtureFigure) -> PeakCheck {
    let smoothed = fig.smoothed_maxima();
    let near = |x: usize, mu: f64| (x as f64 - mu).abs() <= 2.0;
    let pass = smoothed.len() == 2
        && near(smoothed[0], fig.mixture.mean_minus)
        && near(smoothed[1], fig.mixture.mean_plus);
    PeakCheck {
        mean_minus: fig.mixture.mean_minus,
        mean_plus: fig.mixture.mean_plus,
        mixture_maxima: local_maxima(&fig.prediction),
        empirical_maxima: local_maxima(&fig.empirical),
        smoothed_maxima: smoothed,
        pass,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaFuzz {
    pub cases: usize,
    pub violations: usize,
}

/// Random independent-event lists (`l <= 20`, all probabilities `<= 0.3`)
/// checked against the exact union `1 - prod(1 - p_i)`.
pub fn lemma_fuzz(cases: usize, seed: u64) -> LemmaFuzz {
    let mut rng = rng_from_seed(seed);
    let mut violations = 0;
    for _ in 0..cases {
        let l = rng.gen_range(0..=20);
        let eps = rng.gen_range(0.0..=0.3);
        let probs: Vec<f64> = (0..l).map(|_| rng.gen_range(0.0..=eps)).collect();
        let exact = 1.0 - probs.iter().map(|p| 1.0 - p).product::<f64>();
        let est = inclusion_exclusion_estimate(&probs).expect("probabilities in range");
        if !est.contains(exact) {
            violations += 1;
        }
    }
    LemmaFuzz { cases, violations }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryReport {
    pub config: TheoryCheckConfig,
    pub theorem1: Vec<RatioCheck>,
    pub peaks: PeakCheck,
    /// Mixture maxima at `p2 = q2 = p1`; one peak expected.
    pub collapsed_maxima: Vec<usize>,
    pub lemma: LemmaFuzz,
    /// Ratio checks, the peak check, the collapsed mixture and the envelope fuzz.
    pub pass: bool,
    /// Whether every Monte-Carlo mean also fell inside its closed-form bounds.
    pub bounds_pass: bool,
}

pub fn theory_check(cfg: &TheoryCheckConfig) -> Result<TheoryReport> {
    let params = ModelParams::from_factor(cfg.n, cfg.c0, cfg.p2_factor)?;
    let moments = distance_moments(&params, cfg.graphs_per_model, cfg.sources_per_graph, &cfg.distances, cfg.seed)?;
    let theorem1 = moments.iter().map(|m| ratio_check(m, cfg.n, cfg.c0)).collect::<Result<Vec<_>>>()?;
    let fig = mixture_figure(cfg.mixture_n, cfg.mixture_p2, cfg.mixture_q2, cfg.mixture_graphs, cfg.seed, 40)?;
    let peaks = peak_check(&fig);
    let p1 = cfg.c0 / cfg.n as f64;
    let collapsed_maxima = local_maxima(&two_cluster_d2_prediction(cfg.n, p1, p1)?.histogram(40));
    let lemma = lemma_fuzz(cfg.lemma_cases, derive_seed(&[cfg.seed, 0x1e]));
    let pass = theorem1.iter().all(|r| r.ratio_ok)
        && peaks.pass
        && collapsed_maxima.len() == 1
        && lemma.violations == 0;
    let bounds_pass = theorem1.iter().all(|r| r.bounds_ok);
    Ok(TheoryReport { config: cfg.clone(), theorem1, peaks, collapsed_maxima, lemma, pass, bounds_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig { n_list: vec![40], p2_factors: vec![1.5], graphs_per_class: 10, c0: 8.0, ..Default::default() }
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = ExperimentConfig { p2_factors: vec![1.0], ..tiny() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { n_list: vec![41], ..tiny() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { p2_factors: vec![3.0], ..tiny() };
        assert!(matches!(bad.validate(), Err(Error::InvalidQ2 { .. }) | Err(Error::InvalidParameter(_))));
        let parsed: ExperimentConfig = serde_json::from_str(r#"{"n_list":[200],"seed":9}"#).unwrap();
        assert_eq!(parsed.c0, 40.0);
        assert_eq!(parsed.seed, 9);
    }

    #[test]
    fn specs_are_order_independent() {
        let specs = dataset_specs(5, 3);
        assert_eq!(specs.len(), 6);
        assert_eq!(specs[4].seed, graph_seed(5, GraphLabel::TwoCluster, 1));
        assert_ne!(specs[0].seed, specs[3].seed);
    }

    #[test]
    fn cell_runs_are_deterministic() {
        let cfg = tiny();
        let a = run_cell(&cfg, 40, 1.5).unwrap();
        let b = run_cell(&cfg, 40, 1.5).unwrap();
        assert_eq!(a[0].per_fold, b[0].per_fold);
        assert_eq!(a[1].accuracy, b[1].accuracy);
        assert_eq!(a[0].kernel, KernelKind::Spi);
        assert!(a.iter().all(|r| (0.0..=1.0).contains(&r.accuracy)));
        assert_eq!(a[1].csv_line().split(',').count(), 4);
        assert!(a[1].csv_line().starts_with("GSPI,40,1.5,"));
    }

    #[test]
    fn mixture_figure_layout() {
        let fig = mixture_figure(40, 0.5, 0.1, 4, 3, 20).unwrap();
        assert_eq!(fig.empirical.len(), 21);
        assert_eq!(fig.empirical[0], 0.0);
        let csv = fig.csv();
        assert!(csv.starts_with("x,empirical,mixture\n0,0,"));
        assert_eq!(csv.lines().count(), 22);
    }

    #[test]
    fn lemma_fuzz_small() {
        assert_eq!(lemma_fuzz(500, 4).violations, 0);
    }
}
