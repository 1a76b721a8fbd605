//! SPI and GSPI kernels evaluated as explicit inner products, dataset-wide
//! feature indexing, and Gram matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{normalize, FeatureKey, FeatureVector, GspiVector, SpiVector, UnitVector};

/// SPI kernel: `sum_d n_d(a) n_d(b)`.
pub fn k_spi(a: &SpiVector, b: &SpiVector) -> f64 {
    let k: u128 = a
        .counts
        .iter()
        .filter_map(|(d, &x)| b.counts.get(d).map(|&y| x as u128 * y as u128))
        .sum();
    k as f64
}

/// GSPI kernel: `sum_{d,b} n_{d,b}(a) n_{d,b}(b)`. Both vectors must share a
/// binning scheme.
pub fn k_gspi(a: &GspiVector, b: &GspiVector) -> Result<f64> {
    if a.binning != b.binning {
        return Err(Error::BinningMismatch { left: a.binning.width(), right: b.binning.width() });
    }
    let k: u128 = a
        .counts
        .iter()
        .filter_map(|(key, &x)| b.counts.get(key).map(|&y| x as u128 * y as u128))
        .sum();
    Ok(k as f64)
}

/// Kernel between two raw vectors of the same kind.
pub fn kernel<V: FeatureVector>(a: &V, b: &V) -> Result<f64> {
    if a.binning() != b.binning() {
        let w = |v: &V| v.binning().map_or(0, |s| s.width());
        return Err(Error::BinningMismatch { left: w(a), right: w(b) });
    }
    let bmap: BTreeMap<FeatureKey, u64> = b.entries().into_iter().collect();
    let k: u128 = a
        .entries()
        .into_iter()
        .filter_map(|(key, x)| bmap.get(&key).map(|&y| x as u128 * y as u128))
        .sum();
    Ok(k as f64)
}

/// Maps feature keys seen anywhere in a dataset to dense column ids, in
/// ascending key order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureIndex {
    keys: Vec<FeatureKey>,
}

impl FeatureIndex {
    pub fn build<'a>(vectors: impl IntoIterator<Item = &'a UnitVector>) -> Self {
        let mut keys: Vec<FeatureKey> = vectors.into_iter().flat_map(|v| v.entries.keys().copied()).collect();
        keys.sort_unstable();
        keys.dedup();
        FeatureIndex { keys }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[FeatureKey] {
        &self.keys
    }

    pub fn position(&self, key: &FeatureKey) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    /// Sparse `(column, value)` row; keys unknown to the index are dropped.
    pub fn embed(&self, v: &UnitVector) -> SparseRow {
        v.entries
            .iter()
            .filter_map(|(k, &x)| self.position(k).map(|i| (i, x)))
            .collect()
    }
}

pub type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub values: Vec<Vec<f64>>,
    pub normalized: bool,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.values[i][i]).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.values[i][j] == self.values[j][i]))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.size();
        if n == 0 {
            return 0.0;
        }
        let m = DMatrix::from_fn(n, n, |i, j| self.values[i][j]);
        m.symmetric_eigenvalues().min()
    }

    /// `i,j,value` rows for the upper triangle including the diagonal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,value\n");
        for i in 0..self.size() {
            for j in i..self.size() {
                let _ = writeln!(out, "{i},{j},{}", format_sig(self.values[i][j], 12));
            }
        }
        out
    }
}

/// Formats with `digits` significant digits, trailing zeros trimmed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", digits - 1, v)
    }
}

/// Pairwise kernel matrix. With `normalize` each vector is first scaled to
/// unit norm, giving a cosine-similarity matrix with unit diagonal.
pub fn gram<V: FeatureVector + Sync>(vectors: &[V], normalize_first: bool) -> Result<GramMatrix> {
    if let Some(first) = vectors.first() {
        for v in vectors {
            if v.binning() != first.binning() {
                let w = |v: &V| v.binning().map_or(0, |s| s.width());
                return Err(Error::BinningMismatch { left: w(first), right: w(v) });
            }
        }
    }
    let rows: Vec<UnitVector> = if normalize_first {
        vectors.iter().map(normalize).collect::<Result<_>>()?
    } else {
        vectors
            .iter()
            .map(|v| UnitVector {
                binning: v.binning(),
                entries: v.entries().into_iter().map(|(k, c)| (k, c as f64)).collect(),
            })
            .collect()
    };
    Ok(gram_of_rows(&rows, normalize_first))
}

/// Gram matrix of already-embedded real vectors.
pub fn gram_of_rows(rows: &[UnitVector], normalized: bool) -> GramMatrix {
    let n = rows.len();
    let upper = |i: usize| -> Vec<f64> { (i..n).map(|j| rows[i].dot(&rows[j])).collect() };
    #[cfg(feature = "parallel")]
    let tri: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(upper).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let tri: Vec<Vec<f64>> = (0..n).map(upper).collect();
    let mut values = vec![vec![0.0; n]; n];
    for (i, row) in tri.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + off;
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    GramMatrix { values, normalized }
}
