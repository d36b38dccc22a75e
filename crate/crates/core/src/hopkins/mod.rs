//! Hopkins statistic for spatial randomness, with an exact Beta(m, m)
//! decision rule.
//!
//! Orientation: `H = Σw / (Σu + Σw)`, where `w` are nearest-neighbor distances
//! of sampled real points and `u` those of pseudo points. Clustered data
//! shrinks `w`, so small `H` means structure. The test is one-sided: the data
//! is called clusterable when `H` falls below the `α` quantile of Beta(m, m).

pub mod beta;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed::{derived_rng, label, StreamRng};

pub use beta::{beta_cdf, beta_quantile, ln_gamma};

/// Smallest dataset the statistic accepts.
pub const MIN_ROWS: usize = 10;

/// How pseudo points are generated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PseudoPoints {
    /// Each coordinate drawn from the observed values of that feature.
    Resample,
    /// Each coordinate uniform between that feature's minimum and maximum.
    #[default]
    BoundingBox,
}

impl std::str::FromStr for PseudoPoints {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "resample" => Ok(Self::Resample),
            "bounding-box" | "box" => Ok(Self::BoundingBox),
            other => Err(Error::InvalidArgument(format!("unknown pseudo-point mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HopkinsConfig {
    /// Fraction of rows sampled; `m = max(1, floor(rate·n))`.
    pub rate: f64,
    pub alpha: f64,
    pub pseudo: PseudoPoints,
}

impl Default for HopkinsConfig {
    fn default() -> Self {
        Self { rate: 0.10, alpha: 0.05, pseudo: PseudoPoints::BoundingBox }
    }
}

impl HopkinsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate <= 0.5) {
            return Err(Error::InvalidArgument(format!("Hopkins sampling rate must lie in (0, 0.5], got {}", self.rate)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn sample_count(&self, n: usize) -> usize {
        ((self.rate * n as f64).floor() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopkinsResult {
    pub h: f64,
    pub m: usize,
    /// `α` quantile of Beta(m, m).
    pub threshold: f64,
    /// Beta(m, m) CDF at `h`.
    pub p_value: f64,
    pub clusterable: bool,
}

/// One evaluation of the Hopkins statistic.
pub fn hopkins_statistic(data: &Dataset, config: &HopkinsConfig, rng: &mut StreamRng) -> Result<HopkinsResult> {
    config.validate()?;
    let (n, d) = (data.rows(), data.cols());
    if n < MIN_ROWS {
        return Err(Error::TooFewRows { required: MIN_ROWS, actual: n });
    }
    let m = config.sample_count(n);

    let mut sum_w = 0.0;
    for i in index::sample(rng, n, m) {
        let p = data.row(i);
        sum_w += nearest_distance(data, p, Some(i));
    }

    let bounds: Vec<(f64, f64)> = match config.pseudo {
        PseudoPoints::Resample => Vec::new(),
        PseudoPoints::BoundingBox => (0..d)
            .map(|j| {
                let col = data.column(j);
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect(),
    };
    let mut point = vec![0.0; d];
    let mut sum_u = 0.0;
    for _ in 0..m {
        for (j, v) in point.iter_mut().enumerate() {
            *v = match config.pseudo {
                PseudoPoints::Resample => data.get(rng.random_range(0..n), j),
                PseudoPoints::BoundingBox => {
                    let (lo, hi) = bounds[j];
                    lo + (hi - lo) * rng.random::<f64>()
                }
            };
        }
        sum_u += nearest_distance(data, &point, None);
    }

    let total = sum_u + sum_w;
    if total.is_nan() || total <= 0.0 {
        return Err(Error::DegenerateData("all points coincide; Hopkins statistic undefined".into()));
    }
    let h = sum_w / total;
    let mm = m as f64;
    let threshold = beta_quantile(config.alpha, mm, mm)?;
    let p_value = beta_cdf(h, mm, mm)?;
    Ok(HopkinsResult { h, m, threshold, p_value, clusterable: h < threshold })
}

/// Share of `runs` independent evaluations that call the data clusterable.
///
/// Run `r` uses a stream derived from `(seed, r)`.
pub fn hopkins_repeated(data: &Dataset, runs: usize, config: &HopkinsConfig, seed: u64) -> Result<f64> {
    Ok(hopkins_runs(data, runs, config, seed)?.clusterable_fraction)
}

/// Summary of repeated Hopkins evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopkinsRuns {
    pub clusterable_fraction: f64,
    pub mean_h: f64,
    pub mean_p_value: f64,
    /// The first run, reported when a single verdict is needed.
    pub first: HopkinsResult,
}

pub fn hopkins_runs(data: &Dataset, runs: usize, config: &HopkinsConfig, seed: u64) -> Result<HopkinsRuns> {
    if runs < 1 {
        return Err(Error::InvalidArgument("Hopkins needs at least one run".into()));
    }
    let results: Vec<HopkinsResult> = (0..runs)
        .into_par_iter()
        .map(|r| hopkins_statistic(data, config, &mut derived_rng(seed, &[label::HOPKINS, r as u64])))
        .collect::<Result<_>>()?;
    let k = results.len() as f64;
    Ok(HopkinsRuns {
        clusterable_fraction: results.iter().filter(|r| r.clusterable).count() as f64 / k,
        mean_h: results.iter().map(|r| r.h).sum::<f64>() / k,
        mean_p_value: results.iter().map(|r| r.p_value).sum::<f64>() / k,
        first: results[0],
    })
}

fn nearest_distance(data: &Dataset, p: &[f64], skip: Option<usize>) -> f64 {
    let mut best = f64::INFINITY;
    for (i, row) in data.iter_rows().enumerate() {
        if Some(i) == skip {
            continue;
        }
        let mut ss = 0.0;
        for (a, b) in row.iter().zip(p) {
            let t = a - b;
            ss += t * t;
            if ss >= best {
                break;
            }
        }
        best = best.min(ss);
    }
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    fn grid(n: usize) -> Dataset {
        let rows: Vec<[f64; 2]> = (0..n).map(|i| [(i % 7) as f64, (i / 7) as f64]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn sample_count_floor_with_minimum() {
        let c = HopkinsConfig::default();
        assert_eq!(c.sample_count(10), 1);
        assert_eq!(c.sample_count(19), 1);
        assert_eq!(c.sample_count(51), 5);
        assert_eq!(c.sample_count(5), 1);
    }

    #[test]
    fn too_few_rows() {
        let d = grid(9);
        let e = hopkins_statistic(&d, &HopkinsConfig::default(), &mut rng_from_seed(1)).unwrap_err();
        assert_eq!(e, Error::TooFewRows { required: 10, actual: 9 });
    }

    #[test]
    fn identical_points_are_degenerate() {
        let d = Dataset::from_rows(&[[1.0, 1.0]; 12]).unwrap();
        let e = hopkins_statistic(&d, &HopkinsConfig::default(), &mut rng_from_seed(1)).unwrap_err();
        assert!(e.is_degeneracy());
    }

    #[test]
    fn result_is_consistent_and_reproducible() {
        let d = grid(40);
        for pseudo in [PseudoPoints::Resample, PseudoPoints::BoundingBox] {
            let cfg = HopkinsConfig { pseudo, ..Default::default() };
            let a = hopkins_statistic(&d, &cfg, &mut rng_from_seed(3)).unwrap();
            let b = hopkins_statistic(&d, &cfg, &mut rng_from_seed(3)).unwrap();
            assert_eq!(a, b);
            assert!((0.0..=1.0).contains(&a.h));
            assert_eq!(a.m, 4);
            assert_eq!(a.clusterable, a.h < a.threshold);
            assert_eq!(a.clusterable, a.p_value < cfg.alpha);
        }
    }

    #[test]
    fn bad_rate() {
        let cfg = HopkinsConfig { rate: 0.6, ..Default::default() };
        assert!(hopkins_statistic(&grid(20), &cfg, &mut rng_from_seed(1)).is_err());
        assert!(hopkins_repeated(&grid(20), 0, &HopkinsConfig::default(), 1).is_err());
    }
}
