//! Clusterability assessment: does a dataset have cluster structure at all?
//!
//! Seven methods are available. Two reduce the data to one dimension in three
//! ways (pairwise distances, first principal component, flattened entries)
//! and test the result for multimodality with the dip test or Silverman's
//! bandwidth test; the seventh is the Hopkins spatial-randomness statistic.
//!
//! ```
//! use clusterability::{assess, generate, scenario_by_row, AssessmentConfig, MethodId};
//!
//! let data = generate(&scenario_by_row(11).unwrap(), 7).unwrap();
//! let config = AssessmentConfig { dip_null_replicates: 200, ..Default::default() };
//! let verdict = assess(&data, MethodId::DipDist, &config).unwrap();
//! assert!(verdict.clusterable);
//! ```

pub mod dataset;
pub mod error;
pub mod harness;
pub mod hopkins;
pub mod pipeline;
pub mod reduce;
pub mod seed;
pub mod simgen;
pub mod unimodality;

pub use dataset::{load_matrix, parse_matrix, standardize, Dataset, Delimiter, StandardizationMode};
pub use error::{Error, Result};
pub use hopkins::{beta_cdf, beta_quantile, hopkins_repeated, hopkins_statistic, HopkinsConfig, HopkinsResult, PseudoPoints};
pub use pipeline::{assess, assess_all, assess_all_lenient, AssessmentConfig, MethodId, MethodOutcome, Verdict};
pub use reduce::{classic_flatten, first_principal_component, pairwise_distances, Series};
pub use simgen::{generate, scenario_by_row, scenario_catalog, ClusterSpec, ComponentKind, Scenario};
