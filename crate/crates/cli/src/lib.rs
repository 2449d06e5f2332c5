//! Scenario runner around the jetbundle library: TOML configs in, CSV
//! traces and conservation diagnostics out.

pub mod check;
pub mod config;
pub mod scenario;

pub use config::{parse_config, print_config, Preset, ScenarioConfig};
pub use scenario::{build_field, emit_csv, render_csv, run_scenario, RunArtifact};
