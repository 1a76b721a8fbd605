//! Shortest-path distances and shortest-path counts by BFS, and the SPI/GSPI
//! feature vectors built from them.
//!
//! The path count of a node is accumulated in the same BFS pass that assigns
//! its distance: when `v` is first discovered from `u` it inherits `sigma[u]`,
//! and every later neighbour `u'` one level up adds `sigma[u']`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const UNREACHABLE: u32 = u32::MAX;

/// Single-source distances and shortest-path counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsspResult {
    pub source: usize,
    pub dist: Vec<u32>,
    /// Number of distinct shortest paths from `source`, saturating at `u64::MAX`.
    pub sigma: Vec<u64>,
    /// First node whose count saturated, if any.
    pub overflow: Option<usize>,
}

impl SsspResult {
    pub fn is_reachable(&self, v: usize) -> bool {
        self.dist[v] != UNREACHABLE
    }

    fn check_overflow(&self) -> Result<()> {
        match self.overflow {
            Some(target) => Err(Error::PathCountOverflow { source_node: self.source, target }),
            None => Ok(()),
        }
    }
}

/// BFS from `source` recording distance and shortest-path multiplicity.
pub fn sssp_count(g: &Graph, source: usize) -> Result<SsspResult> {
    let n = g.node_count();
    if source >= n {
        return Err(Error::NodeOutOfRange { node: source, n });
    }
    let mut dist = vec![UNREACHABLE; n];
    let mut sigma = vec![0u64; n];
    let mut overflow = None;
    let mut queue = VecDeque::with_capacity(n);
    dist[source] = 0;
    sigma[source] = 1;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        let su = sigma[u];
        for &w in g.neighbors(u) {
            let w = w as usize;
            if dist[w] == UNREACHABLE {
                dist[w] = next;
                queue.push_back(w);
            }
            if dist[w] == next {
                match sigma[w].checked_add(su) {
                    Some(s) => sigma[w] = s,
                    None => {
                        sigma[w] = u64::MAX;
                        overflow.get_or_insert(w);
                    }
                }
            }
        }
    }
    Ok(SsspResult { source, dist, sigma, overflow })
}

/// Fixed-width grouping of raw path counts: `bin(x) = ceil(x / width)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinningScheme {
    width: u64,
}

impl BinningScheme {
    pub const RAW: BinningScheme = BinningScheme { width: 1 };

    pub fn new(width: u64) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParameter("bin width must be positive".into()));
        }
        Ok(BinningScheme { width })
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn bin(&self, x: u64) -> u64 {
        x.div_ceil(self.width)
    }
}

impl Default for BinningScheme {
    fn default() -> Self {
        Self::RAW
    }
}

/// A coordinate of an SPI (`Distance`) or GSPI (`DistanceCount`) feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureKey {
    Distance(u32),
    DistanceCount(u32, u64),
}

/// Common view over SPI and GSPI vectors used by kernels and normalization.
pub trait FeatureVector {
    /// Bin width for GSPI vectors, `None` for SPI.
    fn binning(&self) -> Option<BinningScheme>;
    /// Nonzero entries in ascending key order.
    fn entries(&self) -> Vec<(FeatureKey, u64)>;
}

/// Number of unordered node pairs at each distance `d >= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpiVector {
    pub counts: BTreeMap<u32, u64>,
}

/// Number of unordered node pairs at distance `d` whose shortest-path count
/// falls in bin `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GspiVector {
    pub binning: BinningScheme,
    pub counts: BTreeMap<(u32, u64), u64>,
}

impl SpiVector {
    pub fn get(&self, d: u32) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `{"type":"spi","binning":1,"entries":[[d,count],...]}`
    pub fn to_json(&self) -> String {
        let entries: Vec<(u32, u64)> = self.counts.iter().map(|(&d, &c)| (d, c)).collect();
        serde_json::to_string(&FeatureDump { kind: "spi", binning: 1, entries }).expect("serializable")
    }
}

impl GspiVector {
    pub fn get(&self, d: u32, bin: u64) -> u64 {
        self.counts.get(&(d, bin)).copied().unwrap_or(0)
    }

    /// Sums over the path-count axis, recovering the SPI vector.
    pub fn marginalize(&self) -> SpiVector {
        let mut counts = BTreeMap::new();
        for (&(d, _), &c) in &self.counts {
            *counts.entry(d).or_insert(0) += c;
        }
        SpiVector { counts }
    }

    /// `{"type":"gspi","binning":B,"entries":[[d,x,count],...]}`
    pub fn to_json(&self) -> String {
        let entries: Vec<(u32, u64, u64)> = self.counts.iter().map(|(&(d, x), &c)| (d, x, c)).collect();
        serde_json::to_string(&FeatureDump { kind: "gspi", binning: self.binning.width(), entries })
            .expect("serializable")
    }
}

#[derive(Serialize)]
struct FeatureDump<E> {
    #[serde(rename = "type")]
    kind: &'static str,
    binning: u64,
    entries: Vec<E>,
}

impl FeatureVector for SpiVector {
    fn binning(&self) -> Option<BinningScheme> {
        None
    }

    fn entries(&self) -> Vec<(FeatureKey, u64)> {
        self.counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&d, &c)| (FeatureKey::Distance(d), c))
            .collect()
    }
}

impl FeatureVector for GspiVector {
    fn binning(&self) -> Option<BinningScheme> {
        Some(self.binning)
    }

    fn entries(&self) -> Vec<(FeatureKey, u64)> {
        self.counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&(d, b), &c)| (FeatureKey::DistanceCount(d, b), c))
            .collect()
    }
}

/// Both feature vectors of `g` from one BFS per source. Each unordered pair
/// `{s, t}` is counted once, from its smaller endpoint; unreachable pairs are
/// skipped.
pub fn path_features(g: &Graph, binning: BinningScheme) -> Result<(SpiVector, GspiVector)> {
    let mut gspi = BTreeMap::new();
    for s in 0..g.node_count() {
        let r = sssp_count(g, s)?;
        for t in (s + 1)..g.node_count() {
            if !r.is_reachable(t) {
                continue;
            }
            if r.sigma[t] == u64::MAX {
                return Err(Error::PathCountOverflow { source_node: s, target: t });
            }
            *gspi.entry((r.dist[t], binning.bin(r.sigma[t]))).or_insert(0u64) += 1;
        }
    }
    let gspi = GspiVector { binning, counts: gspi };
    Ok((gspi.marginalize(), gspi))
}

pub fn spi_vector(g: &Graph) -> SpiVector {
    let mut counts = BTreeMap::new();
    for s in 0..g.node_count() {
        let r = sssp_count(g, s).expect("source in range");
        for t in (s + 1)..g.node_count() {
            if r.is_reachable(t) {
                *counts.entry(r.dist[t]).or_insert(0u64) += 1;
            }
        }
    }
    SpiVector { counts }
}

pub fn gspi_vector(g: &Graph, binning: BinningScheme) -> Result<GspiVector> {
    path_features(g, binning).map(|(_, gspi)| gspi)
}

/// Per-source view: how many nodes sit at each distance from `source`, and,
/// at distance `d_focus`, how many have each (binned) number of shortest paths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SourceProfile {
    pub spi: BTreeMap<u32, u64>,
    pub gspi_d: BTreeMap<u64, u64>,
}

pub fn source_profile(g: &Graph, source: usize, d_focus: u32, binning: BinningScheme) -> Result<SourceProfile> {
    if d_focus == 0 {
        return Err(Error::InvalidParameter("d_focus must be at least 1".into()));
    }
    let r = sssp_count(g, source)?;
    r.check_overflow()?;
    let mut profile = SourceProfile::default();
    for t in 0..g.node_count() {
        let d = r.dist[t];
        if t == source || d == UNREACHABLE {
            continue;
        }
        *profile.spi.entry(d).or_insert(0) += 1;
        if d == d_focus {
            *profile.gspi_d.entry(binning.bin(r.sigma[t])).or_insert(0) += 1;
        }
    }
    Ok(profile)
}

/// Source profile averaged over every source of every graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AveragedProfile {
    pub spi: BTreeMap<u32, f64>,
    pub gspi_d: BTreeMap<u64, f64>,
    pub samples: usize,
}

impl AveragedProfile {
    /// Accumulates raw sums; call [`AveragedProfile::finish`] to divide.
    fn add(&mut self, p: &SourceProfile) {
        for (&d, &c) in &p.spi {
            *self.spi.entry(d).or_insert(0.0) += c as f64;
        }
        for (&x, &c) in &p.gspi_d {
            *self.gspi_d.entry(x).or_insert(0.0) += c as f64;
        }
        self.samples += 1;
    }

    fn merge(mut self, other: AveragedProfile) -> Self {
        for (d, c) in other.spi {
            *self.spi.entry(d).or_insert(0.0) += c;
        }
        for (x, c) in other.gspi_d {
            *self.gspi_d.entry(x).or_insert(0.0) += c;
        }
        self.samples += other.samples;
        self
    }

    fn finish(mut self) -> Self {
        let k = self.samples as f64;
        self.spi.values_mut().for_each(|v| *v /= k);
        self.gspi_d.values_mut().for_each(|v| *v /= k);
        self
    }

    pub fn spi_at(&self, d: u32) -> f64 {
        self.spi.get(&d).copied().unwrap_or(0.0)
    }

    pub fn gspi_at(&self, x: u64) -> f64 {
        self.gspi_d.get(&x).copied().unwrap_or(0.0)
    }
}

fn graph_profile_sums(g: &Graph, d_focus: u32, binning: BinningScheme) -> Result<AveragedProfile> {
    let mut acc = AveragedProfile::default();
    for s in 0..g.node_count() {
        acc.add(&source_profile(g, s, d_focus, binning)?);
    }
    Ok(acc)
}

/// Mean source profile over all `(graph, source)` pairs of a dataset.
pub fn average_profiles(graphs: &[Graph], d_focus: u32, binning: BinningScheme) -> Result<AveragedProfile> {
    if graphs.is_empty() {
        return Err(Error::InvalidParameter("cannot average an empty dataset".into()));
    }
    #[cfg(feature = "parallel")]
    let sums = {
        use rayon::prelude::*;
        graphs
            .par_iter()
            .map(|g| graph_profile_sums(g, d_focus, binning))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let sums = graphs
        .iter()
        .map(|g| graph_profile_sums(g, d_focus, binning))
        .collect::<Result<Vec<_>>>()?;
    Ok(sums.into_iter().fold(AveragedProfile::default(), AveragedProfile::merge).finish())
}

/// Feature vector scaled to unit Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVector {
    pub binning: Option<BinningScheme>,
    pub entries: BTreeMap<FeatureKey, f64>,
}

impl UnitVector {
    pub fn norm(&self) -> f64 {
        self.entries.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(k, a)| large.entries.get(k).map(|b| a * b))
            .sum()
    }
}

pub fn normalize<V: FeatureVector + ?Sized>(v: &V) -> Result<UnitVector> {
    let entries = v.entries();
    let norm = entries.iter().map(|&(_, c)| (c as f64) * (c as f64)).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(UnitVector {
        binning: v.binning(),
        entries: entries.into_iter().map(|(k, c)| (k, c as f64 / norm)).collect(),
    })
}

/// Re-normalizes an already real-valued vector. Idempotent up to rounding.
pub fn renormalize(v: &UnitVector) -> Result<UnitVector> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(UnitVector {
        binning: v.binning,
        entries: v.entries.iter().filter(|(_, &x)| x != 0.0).map(|(&k, &x)| (k, x / norm)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::erdos_renyi;
    use crate::testing::*;
    use proptest::prelude::*;

    #[test]
    fn sssp_on_c4_and_p3() {
        let r = sssp_count(&cycle(4), 0).unwrap();
        assert_eq!(r.dist, vec![0, 1, 2, 1]);
        assert_eq!(r.sigma, vec![1, 1, 2, 1]);
        let r = sssp_count(&path(3), 0).unwrap();
        assert_eq!(r.dist, vec![0, 1, 2]);
        assert_eq!(r.sigma, vec![1, 1, 1]);
        assert!(r.overflow.is_none());
    }

    #[test]
    fn sssp_marks_other_components_unreachable() {
        let g = Graph::from_edges(4, &[(0, 1)], false).unwrap();
        let r = sssp_count(&g, 0).unwrap();
        assert_eq!(r.dist[2], UNREACHABLE);
        assert_eq!(r.sigma[2], 0);
        assert!(sssp_count(&g, 4).is_err());
    }

    #[test]
    fn sigma_overflow_is_flagged() {
        // A chain of 70 diamonds doubles the path count at each stage.
        let stages = 70;
        let mut edges = Vec::new();
        for k in 0..stages {
            let a = 3 * k;
            edges.extend([(a, a + 1), (a, a + 2), (a + 1, a + 3), (a + 2, a + 3)]);
        }
        let g = Graph::from_edges(3 * stages + 1, &edges, false).unwrap();
        let r = sssp_count(&g, 0).unwrap();
        assert_eq!(r.sigma[3 * 10], 1 << 10);
        assert!(r.overflow.is_some());
        assert!(matches!(gspi_vector(&g, BinningScheme::RAW), Err(Error::PathCountOverflow { .. })));
    }

    #[test]
    fn spi_and_gspi_examples() {
        assert_eq!(spi_vector(&path(3)).counts, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(spi_vector(&complete(4)).counts, BTreeMap::from([(1, 6)]));
        assert_eq!(spi_vector(&cycle(4)).counts, BTreeMap::from([(1, 4), (2, 2)]));

        let raw = BinningScheme::RAW;
        assert_eq!(gspi_vector(&cycle(4), raw).unwrap().counts, BTreeMap::from([((1, 1), 4), ((2, 2), 2)]));
        assert_eq!(gspi_vector(&complete(4), raw).unwrap().counts, BTreeMap::from([((1, 1), 6)]));
        let b2 = BinningScheme::new(2).unwrap();
        assert_eq!(gspi_vector(&cycle(4), b2).unwrap().counts, BTreeMap::from([((1, 1), 4), ((2, 1), 2)]));
    }

    #[test]
    fn binning_arithmetic() {
        let b = BinningScheme::new(10).unwrap();
        assert_eq!(b.bin(1), 1);
        assert_eq!(b.bin(10), 1);
        assert_eq!(b.bin(11), 2);
        assert!(BinningScheme::new(0).is_err());
    }

    #[test]
    fn source_profile_examples() {
        let raw = BinningScheme::RAW;
        let p = source_profile(&cycle(4), 0, 2, raw).unwrap();
        assert_eq!(p.spi, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(p.gspi_d, BTreeMap::from([(2, 1)]));
        let p = source_profile(&star(4), 0, 2, raw).unwrap();
        assert_eq!(p.spi, BTreeMap::from([(1, 4)]));
        assert!(p.gspi_d.is_empty());
        let p = source_profile(&star(4), 1, 2, raw).unwrap();
        assert_eq!(p.spi, BTreeMap::from([(1, 1), (2, 3)]));
        assert_eq!(p.gspi_d, BTreeMap::from([(1, 3)]));
        assert!(source_profile(&star(4), 1, 0, raw).is_err());
    }

    #[test]
    fn averaged_profiles() {
        let raw = BinningScheme::RAW;
        let one = average_profiles(&[cycle(4)], 2, raw).unwrap();
        assert_eq!(one.spi, BTreeMap::from([(1, 2.0), (2, 1.0)]));
        let two = average_profiles(&[cycle(4), cycle(4)], 2, raw).unwrap();
        assert_eq!(one.spi, two.spi);
        assert_eq!(one.gspi_d, two.gspi_d);
        assert!(average_profiles(&[], 2, raw).is_err());
    }

    #[test]
    fn mean_degree_matches_binomial() {
        let (n, p) = (600, 40.0 / 600.0);
        let graphs: Vec<_> = (0..100).map(|i| erdos_renyi(n, p, 900 + i).unwrap()).collect();
        let avg = average_profiles(&graphs, 2, BinningScheme::RAW).unwrap();
        let mean = (n - 1) as f64 * p;
        // Mean degree of one graph is 2m/n, with variance 4·Var(m)/n².
        let pairs = (n * (n - 1) / 2) as f64;
        let se = (4.0 * pairs * p * (1.0 - p) / (n * n) as f64 / 100.0).sqrt();
        assert!((avg.spi_at(1) - mean).abs() < 4.0 * se, "{} vs {mean}", avg.spi_at(1));
    }

    #[test]
    fn normalize_examples() {
        let v = SpiVector { counts: BTreeMap::from([(1, 3), (2, 4)]) };
        let u = normalize(&v).unwrap();
        assert!((u.entries[&FeatureKey::Distance(1)] - 0.6).abs() < 1e-15);
        assert!((u.entries[&FeatureKey::Distance(2)] - 0.8).abs() < 1e-15);
        let v = SpiVector { counts: BTreeMap::from([(1, 2), (2, 1), (3, 0)]) };
        let u = normalize(&v).unwrap();
        assert_eq!(u.entries.len(), 2);
        assert!((u.entries[&FeatureKey::Distance(1)] - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        let again = renormalize(&u).unwrap();
        for (k, x) in &u.entries {
            assert!((again.entries[k] - x).abs() < 1e-15);
        }
        assert_eq!(normalize(&SpiVector::default()), Err(Error::ZeroVector));
        let single = Graph::from_edges(1, &[], false).unwrap();
        assert_eq!(normalize(&spi_vector(&single)), Err(Error::ZeroVector));
    }

    #[test]
    fn json_dumps_are_sorted_and_stable() {
        assert_eq!(spi_vector(&cycle(4)).to_json(), r#"{"type":"spi","binning":1,"entries":[[1,4],[2,2]]}"#);
        let g = gspi_vector(&cycle(4), BinningScheme::RAW).unwrap();
        assert_eq!(g.to_json(), r#"{"type":"gspi","binning":1,"entries":[[1,1,4],[2,2,2]]}"#);
    }

    proptest! {
        #[test]
        fn sssp_matches_path_enumeration(g in small_graph(10)) {
            for s in 0..g.node_count() {
                let r = sssp_count(&g, s).unwrap();
                let (dist, sigma) = brute_force_paths(&g, s);
                prop_assert_eq!(&r.dist, &dist);
                prop_assert_eq!(&r.sigma, &sigma);
            }
        }

        #[test]
        fn gspi_marginalizes_to_spi(g in small_graph(14), width in prop::sample::select(vec![1u64, 2, 3, 10])) {
            let gspi = gspi_vector(&g, BinningScheme::new(width).unwrap()).unwrap();
            let spi = spi_vector(&g);
            prop_assert_eq!(gspi.marginalize(), spi.clone());
            let n = g.node_count() as u64;
            prop_assert!(spi.total_pairs() <= n * (n - 1) / 2);
            // distance-1 pairs always have exactly one shortest path
            for &(d, b) in gspi.counts.keys() {
                if d == 1 { prop_assert_eq!(b, 1); }
            }
        }

        #[test]
        fn spi_is_invariant_under_relabeling(g in small_graph(12), seed in any::<u64>()) {
            let h = relabel(&g, seed);
            prop_assert_eq!(spi_vector(&g), spi_vector(&h));
            prop_assert_eq!(
                gspi_vector(&g, BinningScheme::RAW).unwrap(),
                gspi_vector(&h, BinningScheme::RAW).unwrap()
            );
        }

        #[test]
        fn normalized_vectors_have_unit_norm(g in small_graph(12)) {
            let spi = spi_vector(&g);
            prop_assume!(spi.total_pairs() > 0);
            let u = normalize(&spi).unwrap();
            prop_assert!((u.norm() - 1.0).abs() < 1e-12);
        }
    }
}
