//! Dual-blinder crossing state machine.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::settings::{BlinderSettings, Region, TimerSettings};
use crate::error::{Error, Result};
use crate::network::{ImpedanceSample, ImpedanceUnit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelayEventKind {
    PsbBlock,
    FaultDeclared,
    OstTrip,
    StableSwingDeclared,
    Reset,
}

impl fmt::Display for RelayEventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelayEvent {
    pub t: f64,
    pub kind: RelayEventKind,
}

/// Outcome of one completed transit through all three blinders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transit {
    Fault,
    StableSwing,
    UnstableSwing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum Phase {
    Idle,
    OuterCrossed { t_o: f64 },
    MiddleCrossed { t_o: f64, t_m: f64, psb: bool },
    InnerCrossed { t_o: f64, t_m: f64, t_i: f64, classification: Transit },
    /// Transit classified and the trajectory has left the inner zone again.
    Latched { classification: Transit },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelayState {
    pub phase: Phase,
    /// `None` until the first sample arrives.
    pub last_region: Option<Region>,
    pub last_t: Option<f64>,
}

impl Default for RelayState {
    fn default() -> Self {
        RelayState {
            phase: Phase::Idle,
            last_region: None,
            last_t: None,
        }
    }
}

impl RelayState {
    /// True from a PSB block until the next reset.
    pub fn psb_latched(&self) -> bool {
        match self.phase {
            Phase::MiddleCrossed { psb, .. } => psb,
            Phase::InnerCrossed { classification, .. } | Phase::Latched { classification } => {
                classification != Transit::Fault
            }
            _ => false,
        }
    }

    pub fn fault_declared(&self) -> bool {
        match self.phase {
            Phase::MiddleCrossed { psb, .. } => !psb,
            Phase::InnerCrossed { classification, .. } | Phase::Latched { classification } => {
                classification == Transit::Fault
            }
            _ => false,
        }
    }

    pub fn ost_latched(&self) -> bool {
        matches!(
            self.phase,
            Phase::InnerCrossed { classification: Transit::UnstableSwing, .. }
                | Phase::Latched { classification: Transit::UnstableSwing }
        )
    }
}

/// Feeds one impedance sample (in ohms) through the detector.
///
/// The first sample only establishes the starting region. A sample that
/// jumps several regions is treated as crossing each blinder in turn at the
/// sample time.
pub fn relay_step(
    state: RelayState,
    sample: &ImpedanceSample,
    blinders: &BlinderSettings,
    timers: &TimerSettings,
) -> Result<(RelayState, Vec<RelayEvent>)> {
    if sample.unit != ImpedanceUnit::Ohm {
        return Err(Error::invalid("sample.unit", "relay expects impedances in ohms"));
    }
    let t = sample.t;
    if let Some(prev) = state.last_t {
        if t < prev {
            return Err(Error::TimeRegression { prev, got: t });
        }
    }
    let mut next = RelayState {
        last_t: Some(t),
        ..state
    };
    let mut events = Vec::new();
    if !sample.z.is_finite() {
        return Ok((next, events));
    }

    let region = blinders.region(sample.z);
    let Some(prev) = state.last_region else {
        next.last_region = Some(region);
        return Ok((next, events));
    };

    let (from, to) = (prev.depth(), region.depth());
    let mut phase = state.phase;
    if to > from {
        for level in from + 1..=to {
            phase = cross_inward(phase, level, t, timers, &mut events);
        }
    } else {
        for level in (to + 1..=from).rev() {
            phase = cross_outward(phase, level, t, &mut events);
        }
    }
    next.phase = phase;
    next.last_region = Some(region);
    Ok((next, events))
}

fn cross_inward(phase: Phase, level: u8, t: f64, timers: &TimerSettings, events: &mut Vec<RelayEvent>) -> Phase {
    match (level, phase) {
        (1, Phase::Idle) => Phase::OuterCrossed { t_o: t },
        (2, Phase::OuterCrossed { t_o }) => {
            let psb = t - t_o > timers.dt_psb;
            let kind = if psb {
                RelayEventKind::PsbBlock
            } else {
                RelayEventKind::FaultDeclared
            };
            events.push(RelayEvent { t, kind });
            Phase::MiddleCrossed { t_o, t_m: t, psb }
        }
        (3, Phase::MiddleCrossed { t_o, t_m, psb }) => {
            let ost = t - t_o > timers.dt_ost;
            let kind = if ost {
                RelayEventKind::OstTrip
            } else {
                RelayEventKind::StableSwingDeclared
            };
            events.push(RelayEvent { t, kind });
            let classification = match (psb, ost) {
                (false, _) => Transit::Fault,
                (true, true) => Transit::UnstableSwing,
                (true, false) => Transit::StableSwing,
            };
            Phase::InnerCrossed {
                t_o,
                t_m,
                t_i: t,
                classification,
            }
        }
        // Re-entry after a classified transit, or a start inside the
        // blinders, does not restart timing until the next reset.
        _ => phase,
    }
}

fn cross_outward(phase: Phase, level: u8, t: f64, events: &mut Vec<RelayEvent>) -> Phase {
    match (level, phase) {
        (3, Phase::InnerCrossed { classification, .. }) => Phase::Latched { classification },
        (1, Phase::Idle) => Phase::Idle,
        (1, _) => {
            events.push(RelayEvent {
                t,
                kind: RelayEventKind::Reset,
            });
            Phase::Idle
        }
        _ => phase,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasor::Phasor;
    use proptest::prelude::*;

    fn settings() -> (BlinderSettings, TimerSettings) {
        (
            BlinderSettings::new(7.2, 6.0, 4.2).unwrap(),
            TimerSettings::from_cycles(1.5, 2.5, 50.0).unwrap(),
        )
    }

    fn feed(samples: &[(f64, f64)]) -> Vec<RelayEvent> {
        let (b, tm) = settings();
        let mut s = RelayState::default();
        let mut out = Vec::new();
        for &(t, r) in samples {
            let (ns, ev) = relay_step(s, &ImpedanceSample::ohm(t, Phasor::new(r, 2.0)), &b, &tm).unwrap();
            s = ns;
            out.extend(ev);
        }
        out
    }

    fn kinds(ev: &[RelayEvent]) -> Vec<RelayEventKind> {
        ev.iter().map(|e| e.kind).collect()
    }

    #[test]
    fn maloperation_transit_is_ost_maloperation() {
        let ev = feed(&[(30.80, -10.0), (30.879, -7.0), (30.918, -5.9), (30.976, -4.0)]);
        assert_eq!(kinds(&ev), [RelayEventKind::PsbBlock, RelayEventKind::OstTrip]);
        assert_eq!(ev[0].t, 30.918);
        assert_eq!(ev[1].t, 30.976);
    }

    #[test]
    fn fast_transit_declares_fault() {
        let ev = feed(&[(30.7, -10.0), (30.793, -7.0), (30.806, -5.9), (30.824, -4.0)]);
        assert_eq!(
            kinds(&ev),
            [RelayEventKind::FaultDeclared, RelayEventKind::StableSwingDeclared]
        );
    }

    #[test]
    fn never_entering_outer_is_silent() {
        let ev = feed(&[(0.0, -10.0), (1.0, -9.0), (2.0, 8.0), (3.0, 50.0)]);
        assert!(ev.is_empty());
    }

    #[test]
    fn first_sample_only_initializes() {
        assert!(feed(&[(0.0, 0.0)]).is_empty());
        // Starting inside and leaving does not reset an idle relay.
        assert!(feed(&[(0.0, 0.0), (1.0, 10.0)]).is_empty());
    }

    #[test]
    fn exit_resets_and_rearms() {
        let ev = feed(&[
            (0.0, -10.0),
            (1.0, -7.0),
            (2.0, -5.0),
            (3.0, -10.0),
            (4.0, -7.0),
            (4.001, -5.0),
        ]);
        assert_eq!(
            kinds(&ev),
            [
                RelayEventKind::PsbBlock,
                RelayEventKind::Reset,
                RelayEventKind::FaultDeclared
            ]
        );
    }

    #[test]
    fn jump_crosses_every_blinder_at_sample_time() {
        let ev = feed(&[(0.0, -10.0), (0.5, 0.0)]);
        assert_eq!(
            kinds(&ev),
            [RelayEventKind::FaultDeclared, RelayEventKind::StableSwingDeclared]
        );
        assert!(ev.iter().all(|e| e.t == 0.5));
    }

    #[test]
    fn latched_until_outer_exit() {
        let (b, tm) = settings();
        let mut s = RelayState::default();
        for (t, r) in [(0.0, -10.0), (1.0, -7.0), (2.0, -5.0), (3.0, 0.0), (4.0, -5.0)] {
            s = relay_step(s, &ImpedanceSample::ohm(t, Phasor::new(r, 0.0)), &b, &tm).unwrap().0;
        }
        assert_eq!(
            s.phase,
            Phase::Latched {
                classification: Transit::UnstableSwing
            }
        );
        assert!(s.psb_latched() && s.ost_latched());
        let (s, ev) = relay_step(s, &ImpedanceSample::ohm(5.0, Phasor::new(-20.0, 0.0)), &b, &tm).unwrap();
        assert_eq!(kinds(&ev), [RelayEventKind::Reset]);
        assert_eq!(s.phase, Phase::Idle);
    }

    #[test]
    fn time_regression_rejected() {
        let (b, tm) = settings();
        let s = relay_step(RelayState::default(), &ImpedanceSample::ohm(1.0, Phasor::ZERO), &b, &tm)
            .unwrap()
            .0;
        let err = relay_step(s, &ImpedanceSample::ohm(0.5, Phasor::ZERO), &b, &tm).unwrap_err();
        assert!(matches!(err, Error::TimeRegression { .. }));
    }

    #[test]
    fn per_unit_samples_rejected() {
        let (b, tm) = settings();
        let s = ImpedanceSample {
            t: 0.0,
            z: Phasor::ZERO,
            unit: ImpedanceUnit::PerUnit,
        };
        assert!(relay_step(RelayState::default(), &s, &b, &tm).is_err());
    }

    proptest! {
        #[test]
        fn random_walk_safety(steps in proptest::collection::vec((0.0f64..0.02, -12.0f64..12.0), 1..300)) {
            let (b, tm) = settings();
            let mut s = RelayState::default();
            let mut t = 0.0;
            let mut all = Vec::new();
            for (dt, r) in steps {
                t += dt;
                let prev_phase = s.phase;
                let (ns, ev) = relay_step(s, &ImpedanceSample::ohm(t, Phasor::new(r, 1.0)), &b, &tm).unwrap();
                if let Phase::InnerCrossed { t_o, t_m, t_i, .. } = ns.phase {
                    prop_assert!(t_o <= t_m && t_m <= t_i);
                    let reachable = matches!(
                        prev_phase,
                        Phase::MiddleCrossed { .. }
                            | Phase::OuterCrossed { .. }
                            | Phase::Idle
                            | Phase::InnerCrossed { .. }
                    );
                    prop_assert!(reachable);
                }
                for e in &ev {
                    prop_assert!(e.t >= t);
                }
                all.extend(ev);
                s = ns;
            }
            prop_assert!(all.windows(2).all(|w| w[0].t <= w[1].t));
            // Every OST decision is preceded by a PSB decision in the same transit.
            let mut armed = false;
            for e in &all {
                match e.kind {
                    RelayEventKind::PsbBlock | RelayEventKind::FaultDeclared => armed = true,
                    RelayEventKind::OstTrip | RelayEventKind::StableSwingDeclared => {
                        prop_assert!(armed);
                        armed = false;
                    }
                    RelayEventKind::Reset => armed = false,
                }
            }
        }

        #[test]
        fn replay_is_deterministic(rs in proptest::collection::vec(-12.0f64..12.0, 1..100)) {
            let samples: Vec<(f64, f64)> = rs.iter().enumerate().map(|(k, &r)| (k as f64 * 0.01, r)).collect();
            prop_assert_eq!(feed(&samples), feed(&samples));
        }
    }
}
