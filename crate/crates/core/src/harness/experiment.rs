//! Replicated rejection-rate experiments over catalog scenarios.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{assess, AssessmentConfig, MethodId};
use crate::seed::{derive_seed, label, RNG_ALGORITHM};
use crate::simgen::{generate, scenario_by_row, Scenario};

pub const DEFAULT_REPLICATES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub rows: Vec<u32>,
    pub methods: Vec<MethodId>,
    pub replicates: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub parallelism: Option<usize>,
    /// Method settings; `seed` is replaced per replicate.
    pub config: AssessmentConfig,
}

impl ExperimentSpec {
    /// Default settings with a dip null table shared across replicates.
    pub fn new(rows: Vec<u32>, methods: Vec<MethodId>, replicates: usize, seed: u64) -> Self {
        let config = AssessmentConfig { shared_dip_null: Some(derive_seed(seed, &[label::DIP_NULL])), ..Default::default() };
        Self { rows, methods, replicates, seed, parallelism: None, config }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidArgument("experiment needs at least one row and one method".into()));
        }
        if self.replicates < 1 {
            return Err(Error::InvalidArgument("experiment needs at least one replicate".into()));
        }
        if self.parallelism == Some(0) {
            return Err(Error::InvalidArgument("parallelism must be >= 1".into()));
        }
        self.config.validate()
    }
}

/// Seed of replicate `replicate`'s dataset for scenario `row`.
pub fn dataset_seed(base: u64, row: u32, replicate: usize) -> u64 {
    derive_seed(base, &[label::DATASET, row as u64, replicate as u64])
}

/// Seed of the assessments run on that dataset.
pub fn assessment_seed(base: u64, row: u32, replicate: usize) -> u64 {
    derive_seed(base, &[label::ASSESS, row as u64, replicate as u64])
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub clusterable: usize,
    /// Replicates on which the method hit a statistical degeneracy; counted as not clusterable.
    pub failures: usize,
    pub replicates: usize,
}

impl Cell {
    pub fn proportion(&self) -> f64 {
        self.clusterable as f64 / self.replicates as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub seed: u64,
    pub alpha: f64,
    pub replicates: usize,
    pub version: String,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionTable {
    pub rows: Vec<u32>,
    pub methods: Vec<MethodId>,
    /// `cells[i][j]` belongs to `rows[i]` and `methods[j]`.
    pub cells: Vec<Vec<Cell>>,
    pub metadata: TableMetadata,
}

impl RejectionTable {
    pub fn cell(&self, row: u32, method: MethodId) -> Option<Cell> {
        let i = self.rows.iter().position(|&r| r == row)?;
        let j = self.methods.iter().position(|&m| m == method)?;
        Some(self.cells[i][j])
    }

    pub fn proportion(&self, row: u32, method: MethodId) -> Option<f64> {
        self.cell(row, method).map(|c| c.proportion())
    }
}

/// Clusterable proportions for every (row, method) over fresh datasets.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RejectionTable> {
    spec.validate()?;
    let scenarios: Vec<Scenario> = spec.rows.iter().map(|&r| scenario_by_row(r)).collect::<Result<_>>()?;
    match spec.parallelism {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?
            .install(|| run_on_pool(spec, &scenarios)),
        None => run_on_pool(spec, &scenarios),
    }
}

fn run_on_pool(spec: &ExperimentSpec, scenarios: &[Scenario]) -> Result<RejectionTable> {
    let jobs: Vec<(usize, usize)> =
        (0..scenarios.len()).flat_map(|i| (0..spec.replicates).map(move |r| (i, r))).collect();

    // Each job yields one outcome per method: Some(clusterable) or None for a degeneracy.
    let outcomes: Vec<(usize, Vec<Option<bool>>)> = jobs
        .par_iter()
        .map(|&(i, rep)| {
            let sc = &scenarios[i];
            let data = generate(sc, dataset_seed(spec.seed, sc.row_id, rep))?;
            let config = AssessmentConfig { seed: assessment_seed(spec.seed, sc.row_id, rep), ..spec.config.clone() };
            let flags = spec
                .methods
                .iter()
                .map(|&m| match assess(&data, m, &config) {
                    Ok(v) => Ok(Some(v.clusterable)),
                    Err(e) if e.is_degeneracy() => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((i, flags))
        })
        .collect::<Result<_>>()?;

    let mut cells = vec![vec![Cell { replicates: spec.replicates, ..Default::default() }; spec.methods.len()]; scenarios.len()];
    for (i, flags) in outcomes {
        for (cell, flag) in cells[i].iter_mut().zip(flags) {
            match flag {
                Some(true) => cell.clusterable += 1,
                Some(false) => {}
                None => cell.failures += 1,
            }
        }
    }

    Ok(RejectionTable {
        rows: spec.rows.clone(),
        methods: spec.methods.clone(),
        cells,
        metadata: TableMetadata {
            seed: spec.seed,
            alpha: spec.config.alpha,
            replicates: spec.replicates,
            version: env!("CARGO_PKG_VERSION").into(),
            rng: RNG_ALGORITHM.into(),
        },
    })
}
