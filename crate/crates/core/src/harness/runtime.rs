//! Mean wall-clock cost of each method on catalog scenarios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{assess, AssessmentConfig, MethodId};
use crate::seed::{derive_seed, label};
use crate::simgen::{generate, scenario_by_row};

use super::experiment::{assessment_seed, dataset_seed};

pub const MIN_REPEATS: usize = 10;
pub const DEFAULT_REPEATS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeTable {
    pub rows: Vec<u32>,
    pub methods: Vec<MethodId>,
    /// Mean seconds per assessment; `seconds[i][j]` belongs to `rows[i]` and `methods[j]`.
    pub seconds: Vec<Vec<f64>>,
    pub repeats: usize,
    pub hardware_note: String,
}

impl RuntimeTable {
    pub fn mean_seconds(&self, row: u32, method: MethodId) -> Option<f64> {
        let i = self.rows.iter().position(|&r| r == row)?;
        let j = self.methods.iter().position(|&m| m == method)?;
        Some(self.seconds[i][j])
    }
}

/// Default bench settings: the dip null table is shared, so its one-off
/// simulation happens during warm-up and the timed runs look it up.
pub fn bench_config(seed: u64) -> AssessmentConfig {
    AssessmentConfig { shared_dip_null: Some(derive_seed(seed, &[label::DIP_NULL])), ..Default::default() }
}

/// Times `assess` on `repeats` fresh datasets per (row, method), after one
/// untimed warm-up. Runs sequentially on the calling thread's pool.
pub fn run_runtime_bench(
    rows: &[u32],
    methods: &[MethodId],
    repeats: usize,
    config: &AssessmentConfig,
    seed: u64,
) -> Result<RuntimeTable> {
    if repeats < MIN_REPEATS {
        return Err(Error::InvalidArgument(format!("bench needs at least {MIN_REPEATS} repeats, got {repeats}")));
    }
    if rows.is_empty() || methods.is_empty() {
        return Err(Error::InvalidArgument("bench needs at least one row and one method".into()));
    }
    config.validate()?;

    let mut seconds = Vec::with_capacity(rows.len());
    for &row in rows {
        let scenario = scenario_by_row(row)?;
        let mut line = Vec::with_capacity(methods.len());
        for &method in methods {
            let warm = generate(&scenario, dataset_seed(seed, row, usize::MAX))?;
            assess(&warm, method, config)?;
            let mut total = 0.0;
            for rep in 0..repeats {
                let data = generate(&scenario, dataset_seed(seed, row, rep))?;
                let cfg = AssessmentConfig { seed: assessment_seed(seed, row, rep), ..config.clone() };
                total += assess(&data, method, &cfg)?.runtime_seconds;
            }
            line.push(total / repeats as f64);
        }
        seconds.push(line);
    }

    Ok(RuntimeTable {
        rows: rows.to_vec(),
        methods: methods.to_vec(),
        seconds,
        repeats,
        hardware_note: hardware_note(),
    })
}

fn hardware_note() -> String {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!("{} {}, {threads} hardware threads, {} worker threads", std::env::consts::OS, std::env::consts::ARCH, rayon::current_num_threads())
}
