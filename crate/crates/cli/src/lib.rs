//! Library side of the `nmwork` binary: scenario running, CSV/manifest
//! emission and the verification harness, kept callable so integration
//! tests can drive them directly.

pub mod scenario;
pub mod verify;

pub use scenario::{
    csv_header, csv_string, run_preset, run_scenario, run_scenario_serial, write_csv, ModelConfig,
    NoiseTarget, Preset, Rate3Kind, Row, RunError, RunManifest, RunOutput, ScenarioConfig,
};
pub use verify::{report, run_all, CheckResult};
