//! Synthetic scenario generators: Gaussian and noncentral-t clusters,
//! outliers, background noise, concentric circles and vertical lines.
//!
//! The built-in catalog holds 31 benchmark scenarios (rows 1 to 31). User
//! scenarios are built from the same [`ClusterSpec`] vocabulary.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ComponentKind {
    /// Independent normal coordinates.
    Gaussian { mean: Vec<f64>, sd: f64 },
    /// Independent noncentral-t coordinates, `(Z + λ_j) / sqrt(χ²_df / df)`.
    NoncentralT { df: f64, noncentrality: Vec<f64> },
    /// Gaussian whose mean is drawn once per dataset, uniformly in `[lower, upper]` per dimension.
    Outlier { lower: Vec<f64>, upper: Vec<f64>, sd: f64 },
    /// Wide Gaussian background noise.
    Noise { mean: Vec<f64>, sd: f64 },
    /// Points on a circle in the plane at uniform angles.
    Circle { radius: f64, center: [f64; 2] },
    /// Points with fixed `x` and normal `y`.
    VerticalLine { x: f64, y_mean: f64, y_sd: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub size: usize,
    #[serde(flatten)]
    pub kind: ComponentKind,
}

impl ClusterSpec {
    pub fn gaussian(size: usize, mean: &[f64], sd: f64) -> Self {
        Self { size, kind: ComponentKind::Gaussian { mean: mean.to_vec(), sd } }
    }

    pub fn noncentral_t(size: usize, df: f64, noncentrality: &[f64]) -> Self {
        Self { size, kind: ComponentKind::NoncentralT { df, noncentrality: noncentrality.to_vec() } }
    }

    pub fn outlier(lower: &[f64], upper: &[f64], sd: f64) -> Self {
        Self { size: 1, kind: ComponentKind::Outlier { lower: lower.to_vec(), upper: upper.to_vec(), sd } }
    }

    pub fn noise(size: usize, mean: &[f64], sd: f64) -> Self {
        Self { size, kind: ComponentKind::Noise { mean: mean.to_vec(), sd } }
    }

    pub fn circle(size: usize, radius: f64) -> Self {
        Self { size, kind: ComponentKind::Circle { radius, center: [0.0, 0.0] } }
    }

    pub fn vertical_line(size: usize, x: f64, y_mean: f64, y_sd: f64) -> Self {
        Self { size, kind: ComponentKind::VerticalLine { x, y_mean, y_sd } }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ComponentKind::Gaussian { mean, .. } | ComponentKind::Noise { mean, .. } => mean.len(),
            ComponentKind::NoncentralT { noncentrality, .. } => noncentrality.len(),
            ComponentKind::Outlier { lower, .. } => lower.len(),
            ComponentKind::Circle { .. } | ComponentKind::VerticalLine { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.size < 1 {
            return bad("component size must be >= 1".into());
        }
        if self.dim() < 1 {
            return bad("component must have at least one dimension".into());
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match &self.kind {
            ComponentKind::Gaussian { mean, sd } | ComponentKind::Noise { mean, sd } => {
                if !(*sd > 0.0 && sd.is_finite()) || !finite(mean) {
                    return bad(format!("gaussian component needs finite means and sd > 0, got sd {sd}"));
                }
            }
            ComponentKind::NoncentralT { df, noncentrality } => {
                if !(*df >= 1.0 && df.is_finite()) || !finite(noncentrality) {
                    return bad(format!("noncentral-t component needs df >= 1, got {df}"));
                }
            }
            ComponentKind::Outlier { lower, upper, sd } => {
                if lower.len() != upper.len() {
                    return bad("outlier bounds differ in length".into());
                }
                if !(*sd > 0.0 && sd.is_finite()) || lower.iter().zip(upper).any(|(a, b)| !(a < b && b.is_finite())) {
                    return bad("outlier component needs lower < upper and sd > 0".into());
                }
            }
            ComponentKind::Circle { radius, center } => {
                if !(*radius > 0.0 && radius.is_finite()) || !finite(center) {
                    return bad(format!("circle radius must be > 0, got {radius}"));
                }
            }
            ComponentKind::VerticalLine { x, y_mean, y_sd } => {
                if !(*y_sd > 0.0 && y_sd.is_finite()) || !x.is_finite() || !y_mean.is_finite() {
                    return bad(format!("line needs finite position and sd > 0, got sd {y_sd}"));
                }
            }
        }
        Ok(())
    }

    fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) -> Result<()> {
        match &self.kind {
            ComponentKind::Gaussian { mean, sd } | ComponentKind::Noise { mean, sd } => {
                for _ in 0..self.size {
                    out.extend(mean.iter().map(|m| m + sd * sample_standard_normal(rng)));
                }
            }
            ComponentKind::NoncentralT { df, noncentrality } => {
                let chi = ChiSquared::new(*df).map_err(|e| Error::InvalidArgument(e.to_string()))?;
                for _ in 0..self.size {
                    for lambda in noncentrality {
                        let z = sample_standard_normal(rng);
                        let v: f64 = chi.sample(rng);
                        out.push((z + lambda) / (v / df).sqrt());
                    }
                }
            }
            ComponentKind::Outlier { lower, upper, sd } => {
                let mean: Vec<f64> =
                    lower.iter().zip(upper).map(|(a, b)| sample_uniform(*a, *b, rng)).collect::<Result<_>>()?;
                for _ in 0..self.size {
                    out.extend(mean.iter().map(|m| m + sd * sample_standard_normal(rng)));
                }
            }
            ComponentKind::Circle { radius, center } => {
                for _ in 0..self.size {
                    let theta = 2.0 * PI * rng.random::<f64>();
                    out.push(center[0] + radius * theta.cos());
                    out.push(center[1] + radius * theta.sin());
                }
            }
            ComponentKind::VerticalLine { x, y_mean, y_sd } => {
                for _ in 0..self.size {
                    out.push(*x);
                    out.push(y_mean + y_sd * sample_standard_normal(rng));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub row_id: u32,
    pub description: String,
    pub expected_n: usize,
    pub expected_d: usize,
    pub components: Vec<ClusterSpec>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidArgument(format!("scenario {} has no components", self.row_id)));
        }
        for c in &self.components {
            c.validate()?;
            if c.dim() != self.expected_d {
                return Err(Error::InvalidArgument(format!(
                    "scenario {}: component of dimension {} in a {}-dimensional scenario",
                    self.row_id,
                    c.dim(),
                    self.expected_d
                )));
            }
        }
        let total: usize = self.components.iter().map(|c| c.size).sum();
        if total != self.expected_n {
            return Err(Error::InvalidArgument(format!(
                "scenario {}: components hold {total} points, expected {}",
                self.row_id, self.expected_n
            )));
        }
        Ok(())
    }

    /// Sizes of the components, in generation order.
    pub fn component_sizes(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.size).collect()
    }
}

/// Draws a dataset for `scenario`; rows appear component by component.
pub fn generate(scenario: &Scenario, seed: u64) -> Result<Dataset> {
    scenario.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(scenario.expected_n * scenario.expected_d);
    for c in &scenario.components {
        c.sample_into(&mut rng, &mut values)?;
    }
    Dataset::new(scenario.expected_n, scenario.expected_d, values)
}

pub fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn sample_chi_square<R: Rng + ?Sized>(df: f64, rng: &mut R) -> Result<f64> {
    if !(df >= 1.0 && df.is_finite()) {
        return Err(Error::InvalidArgument(format!("chi-square needs df >= 1, got {df}")));
    }
    let chi = ChiSquared::new(df).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(chi.sample(rng))
}

pub fn sample_uniform<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("uniform needs a < b, got ({a}, {b})")));
    }
    Ok(a + (b - a) * rng.random::<f64>())
}

fn fill(d: usize, v: f64) -> Vec<f64> {
    vec![v; d]
}

fn scenario(row_id: u32, description: &str, expected_d: usize, components: Vec<ClusterSpec>) -> Scenario {
    let expected_n = components.iter().map(|c| c.size).sum();
    Scenario { row_id, description: description.into(), expected_n, expected_d, components }
}

/// The 31 built-in benchmark scenarios, ordered by row.
pub fn scenario_catalog() -> Vec<Scenario> {
    use ClusterSpec as C;
    let g = |n: usize, mean: &[f64], sd: f64| C::gaussian(n, mean, sd);
    let t2 = |n: usize, df: f64, lambda: f64| C::noncentral_t(n, df, &[lambda, lambda]);
    vec![
        scenario(1, "one Gaussian cluster, 2-D", 2, vec![g(50, &[100.0, 100.0], 2.0)]),
        scenario(2, "one Gaussian cluster, 3-D", 3, vec![g(50, &fill(3, 100.0), 2.0)]),
        scenario(3, "one Gaussian cluster, 10-D", 10, vec![g(50, &fill(10, 2.0), 2.0)]),
        scenario(4, "one Gaussian cluster, 50-D", 50, vec![g(100, &fill(50, 2.0), 2.0)]),
        scenario(
            5,
            "Gaussian cluster of 50 plus one outlier",
            2,
            vec![g(50, &[50.0, 50.0], 2.0), C::outlier(&[60.0, 60.0], &[65.0, 65.0], 2.0)],
        ),
        scenario(
            6,
            "Gaussian cluster of 250 plus one outlier",
            2,
            vec![g(250, &[50.0, 50.0], 2.0), C::outlier(&[60.0, 60.0], &[65.0, 65.0], 2.0)],
        ),
        scenario(
            7,
            "Gaussian cluster of 50 plus three outliers",
            2,
            vec![
                g(50, &[50.0, 50.0], 2.0),
                C::outlier(&[40.0, 55.0], &[45.0, 60.0], 2.0),
                C::outlier(&[65.0, 65.0], &[70.0, 70.0], 2.0),
                C::outlier(&[65.0, 45.0], &[70.0, 50.0], 2.0),
            ],
        ),
        scenario(8, "one noncentral-t cluster, df 5", 2, vec![t2(100, 5.0, 100.0)]),
        scenario(9, "one noncentral-t cluster, df 10", 2, vec![t2(100, 10.0, 100.0)]),
        scenario(10, "one noncentral-t cluster, df 15", 2, vec![t2(100, 15.0, 100.0)]),
        scenario(
            11,
            "two separated Gaussian clusters",
            2,
            vec![g(50, &[30.0, 30.0], 2.0), g(50, &[50.0, 50.0], 2.0)],
        ),
        scenario(
            12,
            "three nearby Gaussian clusters",
            2,
            vec![g(50, &[30.0, 20.0], 2.0), g(50, &[40.0, 20.0], 2.0), g(50, &[35.0, 30.0], 2.0)],
        ),
        scenario(
            13,
            "three Gaussian clusters with wide background noise",
            2,
            vec![
                g(50, &[30.0, 40.0], 2.0),
                g(50, &[70.0, 40.0], 2.0),
                g(50, &[50.0, 80.0], 2.0),
                C::noise(80, &[50.0, 50.0], 20.0),
            ],
        ),
        scenario(
            14,
            "three Gaussian clusters of different spread",
            2,
            vec![g(50, &[30.0, 20.0], 1.0), g(50, &[40.0, 20.0], 3.0), g(50, &[35.0, 30.0], 5.0)],
        ),
        scenario(
            15,
            "three Gaussian clusters of unequal size",
            2,
            vec![g(100, &[35.0, 40.0], 2.0), g(66, &[65.0, 40.0], 2.0), g(33, &[50.0, 60.0], 2.0)],
        ),
        scenario(
            16,
            "three separated Gaussian clusters",
            2,
            vec![g(50, &[35.0, 40.0], 2.0), g(50, &[65.0, 40.0], 2.0), g(50, &[50.0, 60.0], 2.0)],
        ),
        scenario(
            17,
            "three Gaussian clusters along the diagonal",
            2,
            vec![g(50, &[20.0, 20.0], 2.0), g(50, &[40.0, 40.0], 2.0), g(50, &[60.0, 60.0], 2.0)],
        ),
        scenario(
            18,
            "two Gaussian clusters, 10-D",
            10,
            vec![g(50, &fill(10, 10.0), 2.0), g(50, &fill(10, 20.0), 2.0)],
        ),
        scenario(
            19,
            "four Gaussian clusters, 10-D",
            10,
            vec![
                g(50, &fill(10, 10.0), 2.0),
                g(50, &fill(10, 20.0), 2.0),
                g(50, &fill(10, 60.0), 2.0),
                g(50, &fill(10, 80.0), 2.0),
            ],
        ),
        scenario(
            20,
            "two Gaussian clusters, 50-D",
            50,
            vec![g(100, &fill(50, 5.0), 2.0), g(100, &fill(50, 10.0), 2.0)],
        ),
        scenario(
            21,
            "two overlapping Gaussian clusters, 50-D",
            50,
            vec![g(100, &fill(50, 3.0), 2.0), g(100, &fill(50, 6.0), 2.0)],
        ),
        scenario(22, "two noncentral-t clusters, df 5", 2, vec![t2(100, 5.0, 50.0), t2(100, 5.0, 150.0)]),
        scenario(23, "two noncentral-t clusters, df 10", 2, vec![t2(100, 10.0, 50.0), t2(100, 10.0, 150.0)]),
        scenario(24, "two noncentral-t clusters, df 15", 2, vec![t2(100, 15.0, 50.0), t2(100, 15.0, 150.0)]),
        scenario(25, "unit circle", 2, vec![C::circle(50, 1.0)]),
        scenario(26, "two concentric circles", 2, (1..=2).map(|r| C::circle(50, r as f64)).collect()),
        scenario(27, "three concentric circles", 2, (1..=3).map(|r| C::circle(50, r as f64)).collect()),
        scenario(28, "five concentric circles", 2, (1..=5).map(|r| C::circle(50, r as f64)).collect()),
        scenario(29, "one vertical line", 2, vec![C::vertical_line(100, 50.0, 50.0, 25.0)]),
        scenario(
            30,
            "two parallel vertical lines",
            2,
            vec![C::vertical_line(100, 30.0, 50.0, 25.0), C::vertical_line(100, 55.0, 50.0, 25.0)],
        ),
        scenario(
            31,
            "circle with a vertical line beside it",
            2,
            vec![C::circle(100, 3.0), C::vertical_line(100, 5.0, 0.0, 2.0)],
        ),
    ]
}

/// Catalog entry for `row`.
pub fn scenario_by_row(row: u32) -> Result<Scenario> {
    scenario_catalog()
        .into_iter()
        .find(|s| s.row_id == row)
        .ok_or_else(|| Error::InvalidArgument(format!("no scenario row {row}; rows are 1..=31")))
}

/// The catalog as JSON lines, one scenario per line.
pub fn catalog_document() -> String {
    let mut out = String::new();
    for s in scenario_catalog() {
        out.push_str(&serde_json::to_string(&s).expect("scenario serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_validates() {
        let cat = scenario_catalog();
        assert_eq!(cat.len(), 31);
        for (i, s) in cat.iter().enumerate() {
            assert_eq!(s.row_id as usize, i + 1);
            s.validate().unwrap();
        }
        assert_eq!(cat[12].expected_n, 230);
        assert_eq!((cat[3].expected_n, cat[3].expected_d), (100, 50));
        assert_eq!(cat[14].component_sizes(), vec![100, 66, 33]);
    }

    #[test]
    fn invalid_components_rejected() {
        assert!(ClusterSpec::gaussian(0, &[0.0], 1.0).validate().is_err());
        assert!(ClusterSpec::gaussian(3, &[0.0], 0.0).validate().is_err());
        assert!(ClusterSpec::circle(3, -1.0).validate().is_err());
        assert!(ClusterSpec::noncentral_t(3, 0.5, &[1.0]).validate().is_err());
        let mut s = scenario_by_row(1).unwrap();
        s.expected_d = 3;
        assert!(generate(&s, 1).is_err());
    }

    #[test]
    fn catalog_document_round_trips() {
        let doc = catalog_document();
        let parsed: Vec<Scenario> = doc.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(parsed, scenario_catalog());
    }

    #[test]
    fn primitive_contracts() {
        let mut rng = rng_from_seed(1);
        assert!(sample_uniform(1.0, 1.0, &mut rng).is_err());
        assert!(sample_chi_square(0.5, &mut rng).is_err());
        assert!(sample_chi_square(3.0, &mut rng).unwrap() > 0.0);
    }
}
