//! Scenario files, bundled presets, run artifacts, replay and sweep grids.

mod artifacts;
mod grid;
mod presets;
mod replay;
mod scenario_file;

pub use artifacts::{
    events_jsonl, summary_json, timeseries_csv, trajectory_svg, write_artifacts, RunArtifacts, TIMESERIES_HEADER,
};
pub use grid::{apply_case, load_grid, parse_grid, run_grid, set_path, GridCase};
pub use presets::{preset, preset_names, preset_source, preset_value, resolve_scenario};
pub use replay::{load_relay_settings, read_trajectory, replay};
pub use scenario_file::{
    load_scenario, parse_scenario, parse_value, scenario_from_value, scenario_to_value, serialize_scenario,
    ScenarioFile,
};
