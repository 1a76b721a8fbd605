//! Undirected simple graphs and the two random models used to build
//! datasets: Erdős–Rényi `G(n, p1)` and the balanced planted partition
//! `G(n/2, n/2, p2, q2)`.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, GraphRng};

/// Class of a generated graph. The discriminant doubles as the SVM label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphLabel {
    OneCluster = 1,
    TwoCluster = -1,
}

impl GraphLabel {
    pub fn sign(self) -> f64 {
        self as i32 as f64
    }

    pub fn from_sign(y: f64) -> Self {
        if y >= 0.0 {
            GraphLabel::OneCluster
        } else {
            GraphLabel::TwoCluster
        }
    }

    /// Number of planted clusters, as written in edge-list headers.
    pub fn clusters(self) -> u8 {
        match self {
            GraphLabel::OneCluster => 1,
            GraphLabel::TwoCluster => 2,
        }
    }

    pub fn from_clusters(c: u8) -> Option<Self> {
        match c {
            1 => Some(GraphLabel::OneCluster),
            2 => Some(GraphLabel::TwoCluster),
            _ => None,
        }
    }

    /// Stable small integer used when deriving per-graph seeds.
    pub fn seed_tag(self) -> u64 {
        match self {
            GraphLabel::OneCluster => 1,
            GraphLabel::TwoCluster => 2,
        }
    }
}

/// Undirected simple graph over nodes `0..n` with sorted adjacency lists.
///
/// Two-cluster graphs remember their block split: nodes `0..n/2` form V⁺,
/// the rest V⁻.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
    plus_block: Option<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], two_blocks: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph needs at least one node".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("duplicate edge at node {v}")));
            }
        }
        let g = Graph {
            adjacency,
            edge_count: edges.len(),
            plus_block: two_blocks.then_some(n / 2),
        };
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Size of V⁺ for two-cluster graphs.
    pub fn plus_block(&self) -> Option<usize> {
        self.plus_block
    }

    /// `Some(true)` if `v` is in V⁺, `Some(false)` for V⁻, `None` without a partition.
    pub fn in_plus_block(&self, v: usize) -> Option<bool> {
        self.plus_block.map(|h| v < h)
    }

    pub fn label(&self) -> GraphLabel {
        if self.plus_block.is_some() {
            GraphLabel::TwoCluster
        } else {
            GraphLabel::OneCluster
        }
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        let mut half_edges = 0usize;
        for (v, list) in self.adjacency.iter().enumerate() {
            half_edges += list.len();
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidParameter(format!("adjacency of {v} not strictly sorted")));
                }
            }
            for &u in list {
                let u = u as usize;
                if u >= n {
                    return Err(Error::NodeOutOfRange { node: u, n });
                }
                if u == v {
                    return Err(Error::InvalidParameter(format!("self-loop at node {v}")));
                }
                if !self.has_edge(u, v) {
                    return Err(Error::InvalidParameter(format!("edge {v}-{u} is not symmetric")));
                }
            }
        }
        if half_edges != 2 * self.edge_count {
            return Err(Error::InvalidParameter("edge count out of sync with adjacency".into()));
        }
        Ok(())
    }

    /// Serializes to the edge-list text format:
    /// a `n m clusters` header followed by one `u v` line per edge, `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + self.edge_count * 10);
        let _ = writeln!(out, "{} {} {}", self.node_count(), self.edge_count, self.label().clusters());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, reason: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: 1, reason: "expected header `n m clusters`".into() });
        }
        let num = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|e| Error::Parse { line, reason: format!("{s:?}: {e}") })
        };
        let n = num(fields[0], 1)?;
        let m = num(fields[1], 1)?;
        let label = u8::try_from(num(fields[2], 1)?)
            .ok()
            .and_then(GraphLabel::from_clusters)
            .ok_or(Error::Parse { line: 1, reason: "cluster label must be 1 or 2".into() })?;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            let mut it = line.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse { line: i + 1, reason: "expected `u v`".into() });
            };
            edges.push((num(a, i + 1)?, num(b, i + 1)?));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        if label == GraphLabel::TwoCluster && n % 2 != 0 {
            return Err(Error::OddNodeCount(n));
        }
        Graph::from_edges(n, &edges, label == GraphLabel::TwoCluster)
    }
}

/// Edge density of the planted-partition cross block that keeps the expected
/// edge count equal to `G(n, p1)`.
pub fn derive_q2(n: usize, p1: f64, p2: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let q2 = 2.0 * p1 - p2 - 2.0 * (p1 - p2) / n as f64;
    if !(q2 > 0.0 && q2 < 1.0) {
        return Err(Error::InvalidQ2 { n, p1, p2, q2 });
    }
    Ok(q2)
}

/// Parameters of one dataset cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub c0: f64,
    pub alpha0: f64,
    pub p1: f64,
    pub p2: f64,
    pub q2: f64,
}

impl ModelParams {
    /// `p1 = c0/n`, `p2 = factor·p1`, `q2` balanced.
    pub fn from_factor(n: usize, c0: f64, factor: f64) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::OddNodeCount(n));
        }
        let p1 = c0 / n as f64;
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::InvalidParameter(format!("p1 = c0/n = {p1} is not in (0,1)")));
        }
        let p2 = factor * p1;
        if !(p2 > 0.0 && p2 < 1.0) {
            return Err(Error::InvalidParameter(format!("p2 = {p2} is not in (0,1)")));
        }
        let q2 = derive_q2(n, p1, p2)?;
        Ok(ModelParams { n, c0, alpha0: factor - 1.0, p1, p2, q2 })
    }

    pub fn one_cluster(&self, seed: u64) -> Result<Graph> {
        erdos_renyi(self.n, self.p1, seed)
    }

    pub fn two_cluster(&self, seed: u64) -> Result<Graph> {
        planted_partition(self.n, self.p2, self.q2, seed)
    }

    pub fn sample(&self, label: GraphLabel, seed: u64) -> Result<Graph> {
        match label {
            GraphLabel::OneCluster => self.one_cluster(seed),
            GraphLabel::TwoCluster => self.two_cluster(seed),
        }
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

/// Visits all pairs `i < j` in lexicographic order, drawing one uniform per
/// pair, and keeps the pair when the draw falls below `prob(i, j)`.
fn sample_pairs(n: usize, rng: &mut GraphRng, prob: impl Fn(usize, usize) -> f64) -> (Vec<Vec<u32>>, usize) {
    let mut adjacency = vec![Vec::new(); n];
    let mut m = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let u: f64 = rng.gen();
            if u < prob(i, j) {
                adjacency[i].push(j as u32);
                adjacency[j].push(i as u32);
                m += 1;
            }
        }
    }
    // Pairs are emitted in (i, j) order, so every list is already sorted.
    (adjacency, m)
}

/// Samples `G(n, p)`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    check_prob("p1", p)?;
    let mut rng = rng_from_seed(seed);
    let (adjacency, edge_count) = sample_pairs(n, &mut rng, |_, _| p);
    Ok(Graph { adjacency, edge_count, plus_block: None })
}

/// Samples `G(n/2, n/2, p, q)`: probability `p` inside V⁺ = `0..n/2` and inside
/// V⁻, probability `q` across.
pub fn planted_partition(n: usize, p: f64, q: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddNodeCount(n));
    }
    check_prob("p2", p)?;
    check_prob("q2", q)?;
    let half = n / 2;
    let mut rng = rng_from_seed(seed);
    let (adjacency, edge_count) =
        sample_pairs(n, &mut rng, |i, j| if (i < half) == (j < half) { p } else { q });
    Ok(Graph { adjacency, edge_count, plus_block: Some(half) })
}

/// Closed-form expected edge counts `(E[m] of G(n,p1), E[m] of the planted model)`.
pub fn expected_edges(n: usize, p1: f64, p2: f64, q2: f64) -> (f64, f64) {
    let nf = n as f64;
    let half = nf / 2.0;
    let er = nf * (nf - 1.0) / 2.0 * p1;
    let planted = 2.0 * half * (half - 1.0) / 2.0 * p2 + half * half * q2;
    (er, planted)
}
