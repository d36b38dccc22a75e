//! The seven clusterability methods and the single-dataset entry points.
//!
//! Every method reports a p-value where smaller means more evidence of
//! structure, and a dataset is called clusterable when `p_value < alpha`.
//! Hopkins is mapped onto this scale through the Beta(m, m) CDF of `H`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{standardize, Dataset, StandardizationMode};
use crate::error::{Error, Result};
use crate::hopkins::{hopkins_runs, HopkinsConfig, PseudoPoints};
use crate::reduce::{classic_flatten, first_principal_component, pairwise_distances, Series};
use crate::seed::{derive_seed, label};
use crate::unimodality::dip::{dip_statistic, DipNull, DEFAULT_DIP_REPLICATES};
use crate::unimodality::kde::KdeGrid;
use crate::unimodality::silverman::{silverman_test, SilvermanConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodId {
    DipDist,
    SilvDist,
    Hopkins,
    ClassicDip,
    ClassicSilv,
    PcaDip,
    PcaSilv,
}

impl MethodId {
    pub const ALL: [MethodId; 7] = [
        MethodId::DipDist,
        MethodId::SilvDist,
        MethodId::Hopkins,
        MethodId::ClassicDip,
        MethodId::ClassicSilv,
        MethodId::PcaDip,
        MethodId::PcaSilv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::DipDist => "dip-dist",
            MethodId::SilvDist => "silv-dist",
            MethodId::Hopkins => "hopkins",
            MethodId::ClassicDip => "classic-dip",
            MethodId::ClassicSilv => "classic-silv",
            MethodId::PcaDip => "pca-dip",
            MethodId::PcaSilv => "pca-silv",
        }
    }

    /// Position in [`MethodId::ALL`]; also the method's seed-derivation index.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Parses `all` or a comma-separated list of method names.
    pub fn parse_list(s: &str) -> Result<Vec<MethodId>> {
        let s = s.trim();
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let list: Vec<MethodId> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(Error::InvalidArgument("method list is empty".into()));
        }
        Ok(list)
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|m| m.name()).collect();
            Error::InvalidArgument(format!("unknown method '{s}'; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssessmentConfig {
    pub alpha: f64,
    pub dip_null_replicates: usize,
    /// When set, dip p-values use one cached null table per sample size,
    /// simulated from this seed, instead of a fresh table per assessment.
    pub shared_dip_null: Option<u64>,
    pub silverman_bootstrap: usize,
    pub silverman_calibrated: bool,
    pub silverman_tolerance: f64,
    pub kde_grid: KdeGrid,
    pub hopkins_rate: f64,
    pub hopkins_runs: usize,
    pub hopkins_pseudo: PseudoPoints,
    pub seed: u64,
    pub standardization: StandardizationMode,
}

impl Default for AssessmentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            dip_null_replicates: DEFAULT_DIP_REPLICATES,
            shared_dip_null: None,
            silverman_bootstrap: 999,
            silverman_calibrated: true,
            silverman_tolerance: 1e-3,
            kde_grid: KdeGrid::default(),
            hopkins_rate: 0.10,
            hopkins_runs: 1,
            hopkins_pseudo: PseudoPoints::BoundingBox,
            seed: 0,
            standardization: StandardizationMode::None,
        }
    }
}

impl AssessmentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.dip_null_replicates < 1 || self.silverman_bootstrap < 1 || self.hopkins_runs < 1 {
            return bad("replicate and run counts must be >= 1".into());
        }
        if !(self.silverman_tolerance > 0.0 && self.silverman_tolerance < 1.0) {
            return bad(format!("silverman tolerance must lie in (0, 1), got {}", self.silverman_tolerance));
        }
        self.kde_grid.validate()?;
        self.hopkins().validate()
    }

    pub fn silverman(&self) -> SilvermanConfig {
        SilvermanConfig {
            replicates: self.silverman_bootstrap,
            calibrated: self.silverman_calibrated,
            alpha: self.alpha,
            tolerance: self.silverman_tolerance,
            grid: self.kde_grid,
        }
    }

    pub fn hopkins(&self) -> HopkinsConfig {
        HopkinsConfig { rate: self.hopkins_rate, alpha: self.alpha, pseudo: self.hopkins_pseudo }
    }

    /// Seed of `method`'s random streams; independent of which other methods run.
    pub fn method_seed(&self, method: MethodId) -> u64 {
        derive_seed(self.seed, &[label::METHOD, method.index() as u64])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub method: MethodId,
    /// Dip, critical bandwidth or Hopkins `H`, depending on the method.
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub clusterable: bool,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub runtime_seconds: f64,
    /// Share of clusterable runs when Hopkins is repeated.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub clusterable_fraction: Option<f64>,
}

/// Outcome of one method inside [`assess_all_lenient`].
#[derive(Debug, Clone, PartialEq)]
pub enum MethodOutcome {
    Ok(Verdict),
    Failed { method: MethodId, error: Error },
}

impl MethodOutcome {
    pub fn method(&self) -> MethodId {
        match self {
            MethodOutcome::Ok(v) => v.method,
            MethodOutcome::Failed { method, .. } => *method,
        }
    }
}

/// Runs one method on `data`.
///
/// `runtime_seconds` covers the reduction and the test only.
pub fn assess(data: &Dataset, method: MethodId, config: &AssessmentConfig) -> Result<Verdict> {
    assess_inner(data, method, config).map_err(|e| Error::Method { method: method.name().into(), source: Box::new(e) })
}

fn assess_inner(data: &Dataset, method: MethodId, config: &AssessmentConfig) -> Result<Verdict> {
    config.validate()?;
    let seed = config.method_seed(method);
    let data = standardize(data, config.standardization)?;
    let start = Instant::now();

    let mut fraction = None;
    let (statistic, p_value) = match method {
        MethodId::DipDist => dip_on(pairwise_distances(&data), config, seed)?,
        MethodId::ClassicDip => dip_on(classic_flatten(&data), config, seed)?,
        MethodId::PcaDip => dip_on(first_principal_component(&data)?, config, seed)?,
        MethodId::SilvDist => silverman_on(pairwise_distances(&data), config, seed)?,
        MethodId::ClassicSilv => silverman_on(classic_flatten(&data), config, seed)?,
        MethodId::PcaSilv => silverman_on(first_principal_component(&data)?, config, seed)?,
        MethodId::Hopkins => {
            let runs = hopkins_runs(&data, config.hopkins_runs, &config.hopkins(), seed)?;
            if config.hopkins_runs > 1 {
                fraction = Some(runs.clusterable_fraction);
            }
            (runs.first.h, runs.first.p_value)
        }
    };
    let runtime_seconds = start.elapsed().as_secs_f64();

    Ok(Verdict {
        method,
        statistic,
        p_value,
        alpha: config.alpha,
        clusterable: p_value < config.alpha,
        n: data.rows(),
        d: data.cols(),
        seed: config.seed,
        runtime_seconds,
        clusterable_fraction: fraction,
    })
}

fn dip_on(series: Series, config: &AssessmentConfig, seed: u64) -> Result<(f64, f64)> {
    let series = series.into_sorted();
    let dip = dip_statistic(&series)?;
    let m = series.len();
    let p = match config.shared_dip_null {
        Some(null_seed) => shared_dip_null(m, config.dip_null_replicates, null_seed)?.p_value(dip),
        None => DipNull::simulate(m, config.dip_null_replicates, seed)?.p_value(dip),
    };
    Ok((dip, p))
}

fn silverman_on(series: Series, config: &AssessmentConfig, seed: u64) -> Result<(f64, f64)> {
    let r = silverman_test(&series, &config.silverman(), seed)?;
    Ok((r.h_crit, r.p_value))
}

type NullKey = (usize, usize, u64);
type NullCache = Mutex<HashMap<NullKey, Arc<OnceLock<Arc<DipNull>>>>>;

fn null_cache() -> &'static NullCache {
    static CACHE: OnceLock<NullCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Dip null table for sample size `m`, simulated once per process and reused.
pub fn shared_dip_null(m: usize, replicates: usize, seed: u64) -> Result<Arc<DipNull>> {
    let cell = {
        let mut map = null_cache().lock().unwrap_or_else(|p| p.into_inner());
        map.entry((m, replicates, seed)).or_default().clone()
    };
    if let Some(t) = cell.get() {
        return Ok(t.clone());
    }
    let table = Arc::new(DipNull::simulate(m, replicates, seed)?);
    Ok(cell.get_or_init(|| table).clone())
}

/// Runs every method in `methods`, in order; the first failure aborts.
pub fn assess_all(data: &Dataset, methods: &[MethodId], config: &AssessmentConfig) -> Result<Vec<Verdict>> {
    assess_all_lenient(data, methods, config)?
        .into_iter()
        .map(|o| match o {
            MethodOutcome::Ok(v) => Ok(v),
            MethodOutcome::Failed { error, .. } => Err(error),
        })
        .collect()
}

/// Runs every method in `methods`; failures become [`MethodOutcome::Failed`].
pub fn assess_all_lenient(
    data: &Dataset,
    methods: &[MethodId],
    config: &AssessmentConfig,
) -> Result<Vec<MethodOutcome>> {
    if methods.is_empty() {
        return Err(Error::InvalidArgument("method list is empty".into()));
    }
    config.validate()?;
    Ok(methods
        .par_iter()
        .map(|&m| match assess(data, m, config) {
            Ok(v) => MethodOutcome::Ok(v),
            Err(error) => MethodOutcome::Failed { method: m, error },
        })
        .collect())
}
