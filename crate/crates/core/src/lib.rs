//! Phasor-domain power-swing simulator for grid-following converters with a
//! dual-blinder power-swing-blocking / out-of-step-tripping relay.
//!
//! The crate is organised bottom-up:
//!
//! - [`phasor`]: complex phasors, per-unit bases, unwrapped angles.
//! - [`vsc`]: PLL, dq measurement, CPF/OPC current references, FRT.
//! - [`network`]: two-line network solution and impedance loci.
//! - [`relay`]: blinder settings, crossing state machine, LOS oracle.
//! - [`sim`]: fixed-step engine and parallel sweeps.
//! - [`io`]: scenario files, bundled presets and run artifacts.

// `!(x > 0.0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod network;
pub mod phasor;
pub mod relay;
pub mod sim;
pub mod vsc;

pub use error::{Error, Result};
pub use network::{
    apparent_impedance, predict_locus_gfl, predict_locus_opc, sg_apparent_impedance, solve_pcc,
    Fault, ImpedanceSample, ImpedanceUnit, NetworkParams, NetworkSolution, Topology,
};
pub use phasor::{from_per_unit, to_per_unit, unwrap, PerUnitBase, Phasor, Quantity, UnwrappedAngle};
pub use vsc::{
    alpha0_of, current_refs_fault, current_refs_normal, measure_dq, phi_of, pll_step, ControlMode,
    CurrentCommand, DqVoltage, FrtParams, GainScaling, PllParams, PllState,
};
pub use relay::{
    blinder_resistance, classify_run, los_oracle, relay_step, timer_settings, BlinderSettings,
    Region, RelayEvent, RelayEventKind, RelayState, TimerSettings, Verdict,
};
pub use sim::{run, sweep, RunSummary, Scenario, SimParams, SimResult, StepRecord, TimelineEvent, TimelineEventKind};
pub use io::{load_scenario, preset, write_artifacts, RunArtifacts};
