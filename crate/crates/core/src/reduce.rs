//! One-dimensional reductions of a dataset.
//!
//! Three reductions feed the multimodality tests: the sorted set of pairwise
//! Euclidean distances, the scores on the first principal component of the
//! centered data, and the "classic" flattening of every matrix entry into one
//! sorted sequence.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// An ordered one-dimensional sample of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    sorted: bool,
}

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a series needs at least 2 values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("series contains a non-finite value".into()));
        }
        let sorted = values.windows(2).all(|w| w[0] <= w[1]);
        Ok(Self { values, sorted })
    }

    /// Builds a series and sorts it.
    pub fn new_sorted(values: Vec<f64>) -> Result<Self> {
        Self::new(values).map(Series::into_sorted)
    }

    pub fn into_sorted(mut self) -> Self {
        if !self.sorted {
            self.values.sort_by(f64::total_cmp);
            self.sorted = true;
        }
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        if self.sorted {
            self.values[0]
        } else {
            self.values.iter().copied().fold(f64::INFINITY, f64::min)
        }
    }

    pub fn max(&self) -> f64 {
        if self.sorted {
            self.values[self.values.len() - 1]
        } else {
            self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        }
    }

    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample standard deviation (`n - 1` denominator).
    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (self.values.len() - 1) as f64).sqrt()
    }
}

/// All `n(n-1)/2` Euclidean distances between distinct observations, sorted.
pub fn pairwise_distances(data: &Dataset) -> Series {
    let n = data.rows();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        let a = data.row(i);
        for j in (i + 1)..n {
            let b = data.row(j);
            let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            out.push(ss.sqrt());
        }
    }
    out.sort_unstable_by(f64::total_cmp);
    Series { values: out, sorted: true }
}

/// Scores of every observation on the first principal component of the
/// column-centered data.
///
/// The top direction comes from the `d × d` sample covariance when `d <= n`
/// and from the `n × n` Gram matrix otherwise. The sign is fixed so that the
/// lexicographically smallest observation scores `<= 0`.
pub fn first_principal_component(data: &Dataset) -> Result<Series> {
    let (n, d) = (data.rows(), data.cols());
    let means = data.column_means();
    let centered = DMatrix::from_fn(n, d, |i, j| data.get(i, j) - means[j]);
    if centered.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateData("every column is constant; no principal direction".into()));
    }

    let mut scores: Vec<f64> = if d <= n {
        let cov = (centered.transpose() * &centered) / (n - 1) as f64;
        let eig = SymmetricEigen::new(cov);
        let top = argmax(eig.eigenvalues.as_slice());
        let dir = eig.eigenvectors.column(top).into_owned();
        (&centered * dir).iter().copied().collect()
    } else {
        // Centered = U S V^T, so the scores X v_1 equal u_1 * s_1.
        let gram = &centered * centered.transpose();
        let eig = SymmetricEigen::new(gram);
        let top = argmax(eig.eigenvalues.as_slice());
        let s = eig.eigenvalues[top].max(0.0).sqrt();
        eig.eigenvectors.column(top).iter().map(|u| u * s).collect()
    };

    let anchor = (0..n)
        .min_by(|&a, &b| {
            data.row(a)
                .iter()
                .zip(data.row(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    if scores[anchor] > 0.0 {
        scores.iter_mut().for_each(|s| *s = -*s);
    }
    Series::new(scores)
}

fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Every entry of the matrix as one sorted sequence of length `n·d`.
pub fn classic_flatten(data: &Dataset) -> Series {
    let mut values = data.values().to_vec();
    values.sort_unstable_by(f64::total_cmp);
    Series { values, sorted: true }
}
