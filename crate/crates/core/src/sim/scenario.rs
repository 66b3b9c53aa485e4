use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkParams;
use crate::phasor::PerUnitBase;
use crate::relay::{BlinderSettings, TimerSettings, DEFAULT_LOS_WINDOW};
use crate::vsc::{ControlMode, FrtParams, PllParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimelineEventKind {
    /// Bolted three-phase fault on `line` at `position` from the PCC end.
    ApplyFault { line: u8, position: f64 },
    /// Breakers on `open_line` open, clearing the fault.
    ClearFault { open_line: u8 },
    SetMode { mode: ControlMode },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimelineEvent {
    pub t: f64,
    pub kind: TimelineEventKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub dt: f64,
    /// Time of the first recorded step.
    pub t_start: f64,
    pub t_end: f64,
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub los_window: f64,
    /// Length of the pre-run settle that locks the PLL, s.
    pub settle: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            dt: 1e-4,
            t_start: 0.0,
            t_end: 1.0,
            fp_tol: 1e-10,
            fp_max_iter: 50,
            los_window: DEFAULT_LOS_WINDOW,
            settle: 2.0,
        }
    }
}

impl SimParams {
    pub fn n_steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt).round() as usize
    }

    /// Index of the first step at or after `t`.
    pub fn step_of(&self, t: f64) -> usize {
        let k = ((t - self.t_start) / self.dt - 1e-9).ceil();
        k.max(0.0) as usize
    }

    pub fn time_of(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }
}

/// Everything needed for one deterministic run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub base: PerUnitBase,
    pub network: NetworkParams,
    pub mode: ControlMode,
    pub pll: PllParams,
    pub frt: FrtParams,
    pub blinders: BlinderSettings,
    pub timers: TimerSettings,
    pub events: Vec<TimelineEvent>,
    pub sim: SimParams,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.network.validate()?;
        self.pll.validate()?;
        self.frt.validate()?;
        self.mode.validate(&self.frt)?;
        self.blinders.validate()?;
        self.timers.validate()?;

        let s = &self.sim;
        if !(s.dt > 0.0 && s.dt <= 1e-3) {
            return Err(Error::invalid("sim.dt_s", format!("must be in (0, 1 ms], got {}", s.dt)));
        }
        if !(s.t_end > s.t_start) {
            return Err(Error::invalid("sim.t_end_s", "must exceed t_start_s"));
        }
        if !(s.fp_tol > 0.0) {
            return Err(Error::invalid("sim.fp_tol", "must be > 0"));
        }
        if s.fp_max_iter == 0 {
            return Err(Error::invalid("sim.fp_max_iter", "must be >= 1"));
        }
        if !(s.los_window >= 0.0) {
            return Err(Error::invalid("sim.los_window_s", "must be >= 0"));
        }
        if !(s.settle >= 0.0) {
            return Err(Error::invalid("sim.settle_s", "must be >= 0"));
        }

        let mut faulted = false;
        let mut line2_in = true;
        let mut last_t = f64::NEG_INFINITY;
        for (i, ev) in self.events.iter().enumerate() {
            let field = format!("events[{i}]");
            if !ev.t.is_finite() || ev.t < last_t {
                return Err(Error::invalid(field, "event times must be finite and nondecreasing"));
            }
            if ev.t >= s.t_end {
                return Err(Error::invalid(field, "event after t_end_s"));
            }
            last_t = ev.t;
            match ev.kind {
                TimelineEventKind::ApplyFault { line, position } => {
                    if line != 2 {
                        return Err(Error::invalid(field, "faults are supported on line 2 only"));
                    }
                    if faulted || !line2_in {
                        return Err(Error::invalid(field, "line 2 is already faulted or open"));
                    }
                    crate::network::Topology::faulted(position)
                        .validate(&self.network)
                        .map_err(|e| Error::invalid(format!("events[{i}].position"), e.to_string()))?;
                    faulted = true;
                }
                TimelineEventKind::ClearFault { open_line } => {
                    if open_line != 2 {
                        return Err(Error::invalid(field, "only line 2 can be opened"));
                    }
                    if !faulted {
                        return Err(Error::invalid(field, "clear_fault without a preceding apply_fault"));
                    }
                    faulted = false;
                    line2_in = false;
                }
                TimelineEventKind::SetMode { mode } => mode.validate(&self.frt)?,
            }
        }
        Ok(())
    }

    /// Post-fault transfer reactance (filter, line 1, source) in ohms.
    pub fn x_total_ohm(&self) -> f64 {
        (self.network.z_f + self.network.z_l1 + self.network.z_r).im * self.base.z_base()
    }
}
