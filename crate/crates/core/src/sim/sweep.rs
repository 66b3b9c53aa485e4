use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{run, SimResult};
use super::scenario::Scenario;
use crate::error::Result;
use crate::relay::{RelayEvent, Verdict};

/// Headline numbers of a run, as written to `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub verdict: Verdict,
    pub los_t: Option<f64>,
    pub events: Vec<RelayEvent>,
    pub peak_delta_pll_deg: f64,
    pub peak_delta_s_deg: f64,
    pub peak_angle_sum_deg: f64,
    pub min_v_pcc_pu: f64,
    pub steps: usize,
    pub nonconverged_steps: usize,
    pub max_opc_identity_deg: Option<f64>,
}

impl RunSummary {
    pub fn of(res: &SimResult) -> Self {
        RunSummary {
            scenario: res.scenario.name.clone(),
            verdict: res.verdict,
            los_t: res.los,
            events: res.relay_events.clone(),
            peak_delta_pll_deg: res.peak_abs(|r| r.delta_pll),
            peak_delta_s_deg: res.peak_abs(|r| r.delta_s),
            peak_angle_sum_deg: res.peak_abs(|r| r.angle_sum),
            min_v_pcc_pu: res.records.iter().map(|r| r.v_pcc).fold(f64::INFINITY, f64::min),
            steps: res.stats.steps,
            nonconverged_steps: res.stats.nonconverged,
            max_opc_identity_deg: res.stats.max_opc_identity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<O> {
    pub input: O,
    /// Summary on success, error text otherwise.
    pub outcome: std::result::Result<RunSummary, String>,
}

/// Runs `base` once per grid entry, in parallel, keeping input order.
///
/// `apply` turns the base scenario and one grid entry into the scenario to
/// run; a failure there or in the run is recorded in that row only.
pub fn sweep<O, F>(base: &Scenario, grid: &[O], apply: F) -> Vec<SweepRow<O>>
where
    O: Clone + Send + Sync,
    F: Fn(&Scenario, &O) -> Result<Scenario> + Sync,
{
    grid.par_iter()
        .map(|o| {
            let outcome = apply(base, o)
                .and_then(|sc| run(&sc))
                .map(|res| RunSummary::of(&res))
                .map_err(|e| e.to_string());
            SweepRow {
                input: o.clone(),
                outcome,
            }
        })
        .collect()
}
