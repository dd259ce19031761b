//! Campaign configuration, the four commands, and their reports.
//!
//! Exit-code contract: 0 when every recorded property holds, 1 when at
//! least one is violated, 2 when the input cannot be evaluated.

mod commands;
mod config;
mod report;

pub use commands::{
    cmd_decompose, cmd_mixed_volume, cmd_probe_cone, cmd_verify, ExitStatus, Outcome,
};
pub use config::{
    CandidateSpec, ConeConfig, MixedConfig, NRange, OutputConfig, OutputFormat, ProductTermSpec,
    RunConfig,
};
pub use report::{
    strip_timing, CheckRecord, ReportDocument, Summary, TrialRecord, SCHEMA_VERSION, TIMING_KEYS,
};
