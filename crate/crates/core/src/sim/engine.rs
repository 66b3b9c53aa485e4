//! Fixed-step time loop.

use serde::{Deserialize, Serialize};

use super::algebraic::{resolve_algebraic_loop, ControlSwitch, LoopOutcome};
use super::scenario::{Scenario, TimelineEventKind};
use crate::error::{Error, Result};
use crate::network::{ImpedanceSample, Topology};
use crate::phasor::{Phasor, UnwrappedAngle};
use crate::relay::{classify_run, los_oracle, relay_step, Region, RelayEvent, RelayState, Verdict};
use crate::vsc::{alpha0_of, pll_step_coupled, ControlMode, DqVoltage, GainScaling, PllParams, PllState};

/// Per-step status bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StepFlags(pub u8);

impl StepFlags {
    pub const FAULT_ACTIVE: u8 = 1 << 0;
    pub const FRT: u8 = 1 << 1;
    pub const LINE2_OUT: u8 = 1 << 2;
    pub const DEGENERATE: u8 = 1 << 3;
    pub const NONCONVERGED: u8 = 1 << 4;
    pub const RELAY_BLANKED: u8 = 1 << 5;

    pub fn has(self, bit: u8) -> bool {
        self.0 & bit != 0
    }

    fn set(&mut self, bit: u8, on: bool) {
        if on {
            self.0 |= bit;
        }
    }
}

/// One recorded step. Angles are unwrapped degrees, impedance in ohms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub v_pcc: f64,
    pub delta_pcc: f64,
    pub delta_pll: f64,
    pub delta_s: f64,
    pub phi: f64,
    pub angle_sum: f64,
    pub i_g: f64,
    pub f_pll: f64,
    pub z: Phasor,
    pub region: Option<Region>,
    pub psb: bool,
    pub fault_decl: bool,
    pub ost: bool,
    pub flags: StepFlags,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub steps: usize,
    pub nonconverged: usize,
    pub degenerate: usize,
    pub max_iterations: usize,
    pub max_kcl_residual: f64,
    /// Largest `|φ + δ_PLL − δ_PCC − α0|` over normal-mode OPC steps, degrees.
    pub max_opc_identity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub scenario: Scenario,
    pub records: Vec<StepRecord>,
    pub relay_events: Vec<RelayEvent>,
    pub los: Option<f64>,
    pub verdict: Verdict,
    pub stats: RunStats,
}

impl SimResult {
    pub fn peak_abs<F: Fn(&StepRecord) -> f64>(&self, f: F) -> f64 {
        self.records.iter().map(|r| f(r).abs()).filter(|x| x.is_finite()).fold(0.0, f64::max)
    }
}

struct Engine<'a> {
    sc: &'a Scenario,
    topo: Topology,
    mode: ControlMode,
    frt_on: bool,
    v_guess: Phasor,
    last_vq: f64,
}

impl Engine<'_> {
    fn switch(&self) -> ControlSwitch {
        if self.frt_on {
            ControlSwitch::FaultRideThrough
        } else {
            ControlSwitch::Normal(self.mode)
        }
    }

    fn solve(&self, delta_pll: f64) -> Result<LoopOutcome> {
        let s = &self.sc.sim;
        resolve_algebraic_loop(
            self.v_guess,
            delta_pll,
            &self.switch(),
            &self.sc.frt,
            &self.sc.network,
            &self.topo,
            s.fp_tol,
            s.fp_max_iter,
        )
    }

    /// `vq` seen by the PLL at a trial angle; held when the voltage collapses.
    fn vq_at(&self, delta_pll: f64) -> Result<f64> {
        let out = self.solve(delta_pll)?;
        let v = out.solution.v_pcc;
        if v.magnitude() < self.sc.frt.v_eps {
            return Ok(self.last_vq);
        }
        Ok(DqVoltage::from_phasor(v, delta_pll).vq)
    }

    fn pll_advance(&self, state: PllState, params: &PllParams, dt: f64) -> Result<PllState> {
        pll_step_coupled(state, dt, params, |d| self.vq_at(d))
    }
}

/// Runs a scenario to completion.
pub fn run(sc: &Scenario) -> Result<SimResult> {
    sc.validate()?;
    let sim = &sc.sim;
    let n = sim.n_steps();
    let omega0 = sc.pll.omega0;

    let mut eng = Engine {
        sc,
        topo: Topology::NORMAL,
        mode: sc.mode,
        frt_on: false,
        v_guess: Phasor::new(sc.network.e_r, 0.0),
        last_vq: 0.0,
    };

    // Apply anything scheduled at or before the first step before settling.
    let mut schedule: Vec<(usize, TimelineEventKind)> =
        sc.events.iter().map(|e| (sim.step_of(e.t), e.kind)).collect();
    schedule.sort_by_key(|&(k, _)| k);
    let mut next_event = 0;

    // Lock the PLL to the pre-event operating point with a stiff
    // proportional-only loop, then hand over with a zero integrator.
    let mut pll = PllState::locked(0.0, omega0);
    if sim.settle > 0.0 {
        let settle = PllParams {
            kp: 100.0,
            ki: 0.0,
            gain_scaling: GainScaling::RadPerSecond,
            ..sc.pll
        };
        let steps = (sim.settle / sim.dt).round() as usize;
        for _ in 0..steps {
            let out = eng.solve(pll.delta_pll.degrees())?;
            eng.v_guess = out.solution.v_pcc;
            pll = eng.pll_advance(pll, &settle, sim.dt)?;
        }
        pll.xi = 0.0;
        pll.omega_pll = omega0;
    }
    pll.theta_pll = UnwrappedAngle::from_degrees(pll.delta_pll.degrees() + (omega0 * sim.t_start).to_degrees());

    let alpha0 = |mode: &ControlMode| match *mode {
        ControlMode::Opc { p_ref, q_ref } => alpha0_of(p_ref, q_ref).ok(),
        ControlMode::Cpf { .. } => None,
    };

    let mut relay = RelayState::default();
    let mut events = Vec::new();
    let mut records = Vec::with_capacity(n + 1);
    let mut stats = RunStats::default();
    let mut first_failure: Option<(f64, f64)> = None;
    let mut prev: Option<StepRecord> = None;

    for k in 0..=n {
        let t = sim.time_of(k);

        while next_event < schedule.len() && schedule[next_event].0 <= k {
            match schedule[next_event].1 {
                TimelineEventKind::ApplyFault { position, .. } => eng.topo = Topology::faulted(position),
                TimelineEventKind::ClearFault { .. } => {
                    eng.topo = Topology::LINE2_OUT;
                    eng.frt_on = false;
                }
                TimelineEventKind::SetMode { mode } => eng.mode = mode,
            }
            next_event += 1;
        }
        let fault_active = eng.topo.fault.is_some();

        let d_pll = pll.delta_pll.degrees();
        let mut out = eng.solve(d_pll)?;
        if fault_active && !eng.frt_on && out.solution.v_pcc.magnitude() < sc.frt.entry_voltage {
            eng.frt_on = true;
            out = eng.solve(d_pll)?;
        }
        eng.v_guess = out.solution.v_pcc;

        let sol = out.solution;
        let cmd = out.command;
        let dq = DqVoltage::from_phasor(sol.v_pcc, d_pll);
        if sol.v_pcc.magnitude() >= sc.frt.v_eps {
            eng.last_vq = dq.vq;
        }

        let mut flags = StepFlags::default();
        flags.set(StepFlags::FAULT_ACTIVE, fault_active);
        flags.set(StepFlags::FRT, eng.frt_on);
        flags.set(StepFlags::LINE2_OUT, !eng.topo.line2_in);
        flags.set(StepFlags::DEGENERATE, sol.degenerate || cmd.degenerate);
        flags.set(StepFlags::NONCONVERGED, !out.converged);
        flags.set(StepFlags::RELAY_BLANKED, fault_active);

        stats.steps += 1;
        stats.max_iterations = stats.max_iterations.max(out.iterations);
        stats.max_kcl_residual = stats.max_kcl_residual.max(sol.kcl_residual);
        if flags.has(StepFlags::DEGENERATE) {
            stats.degenerate += 1;
        }
        if !out.converged {
            stats.nonconverged += 1;
            first_failure.get_or_insert((t, out.residual));
        }
        if let (false, Some(a0)) = (eng.frt_on, alpha0(&eng.mode)) {
            if !flags.has(StepFlags::DEGENERATE) {
                let r = crate::vsc::opc_identity_residual(cmd.phi, d_pll, sol.delta_pcc, a0).abs();
                stats.max_opc_identity = Some(stats.max_opc_identity.map_or(r, |m: f64| m.max(r)));
            }
        }

        let z_ohm = if sol.i_line1.magnitude() > 0.0 {
            (sol.v_pcc / sol.i_line1).scale(sc.base.z_base())
        } else {
            Phasor::new(f64::NAN, f64::NAN)
        };
        // Blanked samples carry no region so a replay of the trace skips them.
        let region = (!fault_active && z_ohm.is_finite()).then(|| sc.blinders.region(z_ohm));

        if !fault_active {
            let (next, ev) = relay_step(relay, &ImpedanceSample::ohm(t, z_ohm), &sc.blinders, &sc.timers)?;
            relay = next;
            events.extend(ev);
        }

        let unwrap = |p: Option<f64>, x: f64| match p {
            Some(p) => UnwrappedAngle::from_degrees(p).unwrap(x).degrees(),
            None => x,
        };
        let delta_pcc = unwrap(prev.map(|r| r.delta_pcc), sol.delta_pcc);
        let delta_s = unwrap(prev.map(|r| r.delta_s), sol.delta_s);
        let phi = unwrap(prev.map(|r| r.phi), cmd.phi);
        let rec = StepRecord {
            t,
            v_pcc: sol.v_pcc.magnitude(),
            delta_pcc,
            delta_pll: d_pll,
            delta_s,
            phi,
            angle_sum: phi + d_pll,
            i_g: cmd.i_mag,
            f_pll: (omega0 + sc.pll.delta_omega(eng.last_vq, pll.xi)) / (2.0 * std::f64::consts::PI),
            z: z_ohm,
            region,
            psb: relay.psb_latched(),
            fault_decl: relay.fault_declared(),
            ost: relay.ost_latched(),
            flags,
        };
        records.push(rec);
        prev = Some(rec);

        if k < n {
            pll = eng.pll_advance(pll, &sc.pll, sim.dt)?;
        }
    }

    if stats.nonconverged as f64 > 1e-3 * stats.steps as f64 {
        let (first_t, residual) = first_failure.unwrap_or((f64::NAN, f64::NAN));
        return Err(Error::NonConvergence {
            failed: stats.nonconverged,
            total: stats.steps,
            first_t,
            residual,
        });
    }

    let series: Vec<(f64, UnwrappedAngle)> = records
        .iter()
        .map(|r| (r.t, UnwrappedAngle::from_degrees(r.delta_pll)))
        .collect();
    let los = los_oracle(&series, sim.los_window);
    let verdict = classify_run(&events, los);

    Ok(SimResult {
        scenario: sc.clone(),
        records,
        relay_events: events,
        los,
        verdict,
        stats,
    })
}
