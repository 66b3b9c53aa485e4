//! Shared fixtures for the criterion benches.

use gflswing_core::io::preset;
use gflswing_core::{run, ImpedanceSample, Scenario};

/// A preset cut to `seconds` of simulated time after its start.
pub fn shortened(name: &str, seconds: f64) -> Scenario {
    let mut sc = preset(name).expect("bundled preset");
    sc.sim.t_end = sc.sim.t_start + seconds;
    sc.events.retain(|e| e.t <= sc.sim.t_end);
    if sc.events.len() == 1 {
        sc.events.clear();
    }
    sc
}

/// The relay-visible impedance samples of a full preset run.
pub fn recorded_trajectory(name: &str) -> (Scenario, Vec<ImpedanceSample>) {
    let sc = preset(name).expect("bundled preset");
    let res = run(&sc).expect("preset runs");
    let samples = res
        .records
        .iter()
        .filter(|r| r.region.is_some())
        .map(|r| ImpedanceSample::ohm(r.t, r.z))
        .collect();
    (sc, samples)
}
