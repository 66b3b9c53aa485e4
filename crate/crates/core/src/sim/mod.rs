//! Deterministic fixed-step simulation of the converter, network and relay.
//!
//! Only the PLL carries state; the network is algebraic and resolved at every
//! step (and every RK4 stage) against the current references.

mod algebraic;
mod engine;
mod scenario;
mod sweep;

pub use algebraic::{resolve_algebraic_loop, ControlSwitch, LoopOutcome};
pub use engine::{run, RunStats, SimResult, StepFlags, StepRecord};
pub use scenario::{Scenario, SimParams, TimelineEvent, TimelineEventKind};
pub use sweep::{sweep, RunSummary, SweepRow};
