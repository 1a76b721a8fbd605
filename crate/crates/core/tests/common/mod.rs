//! Independent oracles and small fixtures shared by unit and integration tests.
//!
//! Nothing here calls into the BFS, kernel or theory code paths it is used to
//! check.
#![allow(dead_code, clippy::needless_range_loop)]

use gspi_core::graph::Graph;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges, false).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges, false).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &edges, false).unwrap()
}

/// `K_{1,leaves}` with the centre at node 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges, false).unwrap()
}

/// Random graph with `1..=max_n` nodes and edge density drawn from 0.2..0.8.
pub fn random_small_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let p = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8][rng.gen_range(0..7)];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges, false).unwrap()
}

pub fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    any::<u64>().prop_map(move |seed| random_small_graph(&mut ChaCha8Rng::seed_from_u64(seed), max_n))
}

pub fn relabel(g: &Graph, seed: u64) -> Graph {
    let n = g.node_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let edges: Vec<_> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(n, &edges, false).unwrap()
}

const NONE: u32 = u32::MAX;

/// Distances and shortest-path counts by exhaustive enumeration of simple
/// paths: for `len = 1, 2, ...` every simple path of exactly `len` edges from
/// `source` is listed, and targets not yet reached take `len` as distance
/// and the number of such paths as count.
pub fn brute_force_paths(g: &Graph, source: usize) -> (Vec<u32>, Vec<u64>) {
    let n = g.node_count();
    let mut dist = vec![NONE; n];
    let mut sigma = vec![0u64; n];
    dist[source] = 0;
    sigma[source] = 1;
    for len in 1..n {
        let mut counts = vec![0u64; n];
        let mut on_path = vec![false; n];
        on_path[source] = true;
        walk(g, source, len, &mut on_path, &mut counts);
        for t in 0..n {
            if dist[t] == NONE && counts[t] > 0 {
                dist[t] = len as u32;
                sigma[t] = counts[t];
            }
        }
    }
    (dist, sigma)
}

fn walk(g: &Graph, at: usize, remaining: usize, on_path: &mut [bool], counts: &mut [u64]) {
    for &w in g.neighbors(at) {
        let w = w as usize;
        if on_path[w] {
            continue;
        }
        if remaining == 1 {
            counts[w] += 1;
        } else {
            on_path[w] = true;
            walk(g, w, remaining - 1, on_path, counts);
            on_path[w] = false;
        }
    }
}

/// `(distance, path count)` of every unordered connected pair, from the
/// brute-force oracle.
pub fn pair_multiset(g: &Graph) -> Vec<(u32, u64)> {
    let mut out = Vec::new();
    for s in 0..g.node_count() {
        let (dist, sigma) = brute_force_paths(g, s);
        for t in (s + 1)..g.node_count() {
            if dist[t] != NONE {
                out.push((dist[t], sigma[t]));
            }
        }
    }
    out
}

/// SPI kernel as the double sum of distance indicators over both multisets.
pub fn spi_double_sum(a: &Graph, b: &Graph) -> u64 {
    let (da, db) = (pair_multiset(a), pair_multiset(b));
    let mut k = 0;
    for &(d1, _) in &da {
        for &(d2, _) in &db {
            k += u64::from(d1 == d2);
        }
    }
    k
}

/// GSPI kernel as the indicator sum over pairs of node pairs, matching both
/// distance and (binned) shortest-path count.
pub fn gspi_indicator_sum(a: &Graph, b: &Graph, width: u64) -> u64 {
    let bin = |x: u64| x.div_ceil(width);
    let (da, db) = (pair_multiset(a), pair_multiset(b));
    let mut k = 0;
    for &(d1, t1) in &da {
        for &(d2, t2) in &db {
            k += u64::from(d1 == d2 && bin(t1) == bin(t2));
        }
    }
    k
}

/// Exact union probability of independent events.
pub fn independent_union(probs: &[f64]) -> f64 {
    1.0 - probs.iter().map(|p| 1.0 - p).product::<f64>()
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_min_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}
