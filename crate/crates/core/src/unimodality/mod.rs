//! Multimodality tests on one-dimensional samples: Hartigan's dip test and
//! Silverman's critical-bandwidth test.

pub mod dip;
pub mod kde;
pub mod silverman;

pub use dip::{dip_pvalue, dip_statistic, dip_test, DipNull, DipResult, DEFAULT_DIP_REPLICATES};
pub use kde::{count_local_maxima, count_modes, KdeGrid, KdeMethod, KdeSpec};
pub use silverman::{critical_bandwidth, hall_york_lambda, silverman_test, SilvermanConfig, SilvermanResult};
