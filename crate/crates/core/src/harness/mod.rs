//! Experiment runner, runtime benchmark, file assessment and rendering.

pub mod experiment;
pub mod render;
pub mod runtime;

use std::fs::File;
use std::path::Path;

pub use experiment::{
    assessment_seed, dataset_seed, run_experiment, Cell, ExperimentSpec, RejectionTable, TableMetadata,
    DEFAULT_REPLICATES,
};
pub use render::{
    format_p_value, format_proportion, render_outcomes, render_rejection, render_runtime, render_verdicts,
    OutputFormat,
};
pub use runtime::{bench_config, run_runtime_bench, RuntimeTable, DEFAULT_REPEATS, MIN_REPEATS};

use crate::dataset::{load_matrix, Delimiter};
use crate::error::{Error, Result};
use crate::pipeline::{assess_all, assess_all_lenient, AssessmentConfig, MethodId, MethodOutcome, Verdict};

/// Hopkins repetitions used when assessing a single file.
pub const FILE_MODE_HOPKINS_RUNS: usize = 100;

/// Loads a delimited file and runs `methods` on it; the first method failure aborts.
pub fn assess_file(
    path: &Path,
    has_header: bool,
    methods: &[MethodId],
    config: &AssessmentConfig,
) -> Result<Vec<Verdict>> {
    let data = load_matrix(open(path)?, has_header, Delimiter::Auto)?;
    assess_all(&data, methods, config)
}

/// Like [`assess_file`], but failed methods become error records.
pub fn assess_file_lenient(
    path: &Path,
    has_header: bool,
    methods: &[MethodId],
    config: &AssessmentConfig,
) -> Result<Vec<MethodOutcome>> {
    let data = load_matrix(open(path)?, has_header, Delimiter::Auto)?;
    assess_all_lenient(&data, methods, config)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
