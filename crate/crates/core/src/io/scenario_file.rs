//! TOML scenario schema and its conversion to and from [`Scenario`].
//!
//! Each section maps onto one part of the scenario. Alternative spellings of
//! the same quantity (inductance vs. per-unit impedance, blinder angles vs.
//! resistances, timer cycles vs. seconds) are mutually exclusive.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkParams;
use crate::phasor::{PerUnitBase, Phasor};
use crate::relay::{timer_settings, BlinderAngles, BlinderSettings, TimerSettings};
use crate::sim::{Scenario, SimParams, TimelineEvent, TimelineEventKind};
use crate::vsc::{ControlMode, FrtParams, GainScaling, PllParams};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseSection>,
    pub network: NetworkSection,
    pub control: ControlSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pll: Option<PllSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frt: Option<FrtSection>,
    pub relay: RelaySection,
    pub timers: TimersSection,
    pub sim: SimSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<EventSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_base_kv: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_base_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_base_mva: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_base_va: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0_hz: Option<f64>,
}

/// An impedance given as an inductance, in per unit, or in ohms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpedanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_mh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_ohm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_ohm: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_r_pu: Option<f64>,
    pub filter: ImpedanceSpec,
    pub line1: ImpedanceSpec,
    pub line2: ImpedanceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ImpedanceSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSection {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_ref_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iq_ref_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_ref_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_ref_pu: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PllSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ki: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_lim_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain_scaling: Option<GainScaling>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrtSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadband_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_max_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_eps_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry_voltage_pu: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaySection {
    /// Outer, middle, inner swing angles in degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles_deg: Option<[f64; 3]>,
    /// Transfer reactance for the angle form; defaults to filter + line 1 + source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_total_ohm: Option<f64>,
    /// Outer, middle, inner resistances in ohms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistances_ohm: Option<[f64; 3]>,
    /// Reporting-only angles accompanying explicit resistances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from_angles_deg: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilt_deg: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimersSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psb_cycles: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ost_cycles: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psb_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ost_s: Option<f64>,
    /// Slip frequency: derives the thresholds from the blinder angles when
    /// no explicit interval is given, otherwise recorded for reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_swing_hz: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_start_s: Option<f64>,
    pub t_end_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp_max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub los_window_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settle_s: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSection {
    pub t_s: f64,
    /// `apply_fault`, `clear_fault` or `set_mode`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_line: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_ref_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iq_ref_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_ref_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_ref_pu: Option<f64>,
}

/// Default fault position along line 2 when an `apply_fault` omits it.
pub const DEFAULT_FAULT_POSITION: f64 = 0.05;

fn one_of<T: Copy>(field: &str, a: (&str, Option<T>), b: (&str, Option<T>)) -> Result<Option<(usize, T)>> {
    match (a.1, b.1) {
        (Some(_), Some(_)) => Err(Error::invalid(field, format!("give either {} or {}, not both", a.0, b.0))),
        (Some(x), None) => Ok(Some((0, x))),
        (None, Some(x)) => Ok(Some((1, x))),
        (None, None) => Ok(None),
    }
}

fn base_of(s: &Option<BaseSection>) -> Result<PerUnitBase> {
    let d = PerUnitBase::standard();
    let Some(s) = s else { return Ok(d) };
    let v = match one_of("base", ("v_base_kv", s.v_base_kv), ("v_base_v", s.v_base_v))? {
        Some((0, kv)) => kv * 1e3,
        Some((_, v)) => v,
        None => d.v_base,
    };
    let sb = match one_of("base", ("s_base_mva", s.s_base_mva), ("s_base_va", s.s_base_va))? {
        Some((0, mva)) => mva * 1e6,
        Some((_, va)) => va,
        None => d.s_base,
    };
    PerUnitBase::new(v, sb, s.f0_hz.unwrap_or(d.f0))
}

fn impedance_of(field: &str, z: &ImpedanceSpec, base: &PerUnitBase) -> Result<Phasor> {
    let has_pu = z.r_pu.is_some() || z.x_pu.is_some();
    let has_ohm = z.r_ohm.is_some() || z.x_ohm.is_some();
    let forms = [z.l_mh.is_some(), has_pu, has_ohm].iter().filter(|&&b| b).count();
    if forms != 1 {
        return Err(Error::invalid(
            field,
            "give exactly one of l_mh, (r_pu, x_pu) or (r_ohm, x_ohm)",
        ));
    }
    let zb = base.z_base();
    let p = if let Some(l) = z.l_mh {
        Phasor::new(0.0, base.reactance_ohm_from_mh(l) / zb)
    } else if has_pu {
        Phasor::new(z.r_pu.unwrap_or(0.0), z.x_pu.unwrap_or(0.0))
    } else {
        Phasor::new(z.r_ohm.unwrap_or(0.0) / zb, z.x_ohm.unwrap_or(0.0) / zb)
    };
    if !p.is_finite() || p.re < 0.0 || p.im < 0.0 {
        return Err(Error::invalid(field, "components must be finite and non-negative"));
    }
    Ok(p)
}

fn mode_of(
    field: &str,
    mode: &str,
    id: Option<f64>,
    iq: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
) -> Result<ControlMode> {
    match mode {
        "cpf" => {
            if p.is_some() || q.is_some() {
                return Err(Error::invalid(field, "cpf mode takes id_ref_pu/iq_ref_pu, not p_ref_pu/q_ref_pu"));
            }
            Ok(ControlMode::Cpf {
                id_ref: id.ok_or_else(|| Error::invalid(field, "cpf mode needs id_ref_pu"))?,
                iq_ref: iq.unwrap_or(0.0),
            })
        }
        "opc" => {
            if id.is_some() || iq.is_some() {
                return Err(Error::invalid(field, "opc mode takes p_ref_pu/q_ref_pu, not id_ref_pu/iq_ref_pu"));
            }
            Ok(ControlMode::Opc {
                p_ref: p.ok_or_else(|| Error::invalid(field, "opc mode needs p_ref_pu"))?,
                q_ref: q.unwrap_or(0.0),
            })
        }
        other => Err(Error::invalid(field, format!("unknown mode `{other}` (expected cpf or opc)"))),
    }
}

fn angles(a: [f64; 3]) -> BlinderAngles {
    BlinderAngles {
        outer: a[0],
        middle: a[1],
        inner: a[2],
    }
}

impl ScenarioFile {
    pub fn into_scenario(self, default_name: &str) -> Result<Scenario> {
        let base = base_of(&self.base)?;
        let n = &self.network;
        let network = NetworkParams {
            e_r: n.e_r_pu.unwrap_or(1.0),
            z_f: impedance_of("network.filter", &n.filter, &base)?,
            z_l1: impedance_of("network.line1", &n.line1, &base)?,
            z_l2: impedance_of("network.line2", &n.line2, &base)?,
            z_r: match &n.source {
                Some(z) => impedance_of("network.source", z, &base)?,
                None => Phasor::ZERO,
            },
        };

        let c = &self.control;
        let mode = mode_of("control", &c.mode, c.id_ref_pu, c.iq_ref_pu, c.p_ref_pu, c.q_ref_pu)?;

        let d = PllParams::standard();
        let pll = match &self.pll {
            None => PllParams {
                omega0: base.omega0(),
                ..d
            },
            Some(p) => PllParams {
                kp: p.kp.unwrap_or(d.kp),
                ki: p.ki.unwrap_or(d.ki),
                omega0: base.omega0(),
                f_lim: p.f_lim_hz.unwrap_or(d.f_lim),
                gain_scaling: p.gain_scaling.unwrap_or(d.gain_scaling),
            },
        };

        let d = FrtParams::default();
        let frt = match &self.frt {
            None => d,
            Some(f) => FrtParams {
                k_factor: f.k_factor.unwrap_or(d.k_factor),
                deadband: f.deadband_pu.unwrap_or(d.deadband),
                i_max: f.i_max_pu.unwrap_or(d.i_max),
                v_eps: f.v_eps_pu.unwrap_or(d.v_eps),
                entry_voltage: f.entry_voltage_pu.unwrap_or(d.entry_voltage),
            },
        };

        let r = &self.relay;
        let tilt = r.tilt_deg.unwrap_or(90.0);
        let blinders = match (r.angles_deg, r.resistances_ohm) {
            (Some(a), None) => {
                if r.derived_from_angles_deg.is_some() {
                    return Err(Error::invalid("relay", "derived_from_angles_deg goes with resistances_ohm"));
                }
                let x_total = r
                    .x_total_ohm
                    .unwrap_or_else(|| (network.z_f + network.z_l1 + network.z_r).im * base.z_base());
                BlinderSettings {
                    tilt,
                    ..BlinderSettings::from_angles(x_total, angles(a))?
                }
            }
            (None, Some(rs)) => {
                if r.x_total_ohm.is_some() {
                    return Err(Error::invalid("relay", "x_total_ohm goes with angles_deg"));
                }
                BlinderSettings {
                    r_outer: rs[0],
                    r_middle: rs[1],
                    r_inner: rs[2],
                    tilt,
                    angles: r.derived_from_angles_deg.map(angles),
                }
            }
            _ => {
                return Err(Error::invalid(
                    "relay",
                    "give exactly one of angles_deg or resistances_ohm",
                ))
            }
        };
        blinders.validate()?;

        let t = &self.timers;
        let cycles = t.psb_cycles.is_some() || t.ost_cycles.is_some();
        let secs = t.psb_s.is_some() || t.ost_s.is_some();
        let timers = match (cycles, secs) {
            (true, true) => return Err(Error::invalid("timers", "give cycles or seconds, not both")),
            (true, false) => TimerSettings {
                f_swing: t.f_swing_hz,
                ..TimerSettings::from_cycles(
                    t.psb_cycles.ok_or_else(|| Error::invalid("timers.psb_cycles", "missing"))?,
                    t.ost_cycles.ok_or_else(|| Error::invalid("timers.ost_cycles", "missing"))?,
                    base.f0,
                )?
            },
            (false, true) => TimerSettings {
                dt_psb: t.psb_s.ok_or_else(|| Error::invalid("timers.psb_s", "missing"))?,
                dt_ost: t.ost_s.ok_or_else(|| Error::invalid("timers.ost_s", "missing"))?,
                f0: base.f0,
                f_swing: t.f_swing_hz,
            },
            (false, false) => {
                let fs = t
                    .f_swing_hz
                    .ok_or_else(|| Error::invalid("timers", "give psb/ost intervals or f_swing_hz"))?;
                let a = blinders
                    .angles
                    .ok_or_else(|| Error::invalid("timers.f_swing_hz", "needs blinder angles to derive from"))?;
                timer_settings(a.outer, a.middle, a.inner, base.f0, fs)?
            }
        };
        timers.validate()?;

        let s = &self.sim;
        let d = SimParams::default();
        let sim = SimParams {
            dt: s.dt_s.unwrap_or(d.dt),
            t_start: s.t_start_s.unwrap_or(d.t_start),
            t_end: s.t_end_s,
            fp_tol: s.fp_tol.unwrap_or(d.fp_tol),
            fp_max_iter: s.fp_max_iter.unwrap_or(d.fp_max_iter),
            los_window: s.los_window_s.unwrap_or(d.los_window),
            settle: s.settle_s.unwrap_or(d.settle),
        };

        let mut events = Vec::with_capacity(self.events.len());
        for (i, e) in self.events.iter().enumerate() {
            let field = format!("events[{i}]");
            let extra_mode = e.mode.is_some()
                || e.id_ref_pu.is_some()
                || e.iq_ref_pu.is_some()
                || e.p_ref_pu.is_some()
                || e.q_ref_pu.is_some();
            let kind = match e.kind.as_str() {
                "apply_fault" if e.open_line.is_none() && !extra_mode => TimelineEventKind::ApplyFault {
                    line: e.line.unwrap_or(2),
                    position: e.position.unwrap_or(DEFAULT_FAULT_POSITION),
                },
                "clear_fault" if e.line.is_none() && e.position.is_none() && !extra_mode => {
                    TimelineEventKind::ClearFault {
                        open_line: e.open_line.unwrap_or(2),
                    }
                }
                "set_mode" if e.line.is_none() && e.position.is_none() && e.open_line.is_none() => {
                    let m = e.mode.as_deref().ok_or_else(|| Error::invalid(&field, "set_mode needs mode"))?;
                    TimelineEventKind::SetMode {
                        mode: mode_of(&field, m, e.id_ref_pu, e.iq_ref_pu, e.p_ref_pu, e.q_ref_pu)?,
                    }
                }
                "apply_fault" | "clear_fault" | "set_mode" => {
                    return Err(Error::invalid(field, format!("fields do not match kind `{}`", e.kind)))
                }
                other => {
                    return Err(Error::invalid(
                        field,
                        format!("unknown kind `{other}` (expected apply_fault, clear_fault or set_mode)"),
                    ))
                }
            };
            events.push(TimelineEvent { t: e.t_s, kind });
        }

        let sc = Scenario {
            name: self.name.unwrap_or_else(|| default_name.to_string()),
            base,
            network,
            mode,
            pll,
            frt,
            blinders,
            timers,
            events,
            sim,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Canonical file form of a scenario: SI base units, per-unit impedances,
    /// explicit resistances and intervals in seconds.
    pub fn from_scenario(sc: &Scenario) -> Self {
        let pu = |z: Phasor| ImpedanceSpec {
            r_pu: Some(z.re),
            x_pu: Some(z.im),
            ..ImpedanceSpec::default()
        };
        let control = |m: &ControlMode| match *m {
            ControlMode::Cpf { id_ref, iq_ref } => ("cpf", Some(id_ref), Some(iq_ref), None, None),
            ControlMode::Opc { p_ref, q_ref } => ("opc", None, None, Some(p_ref), Some(q_ref)),
        };
        let (mode, id, iq, p, q) = control(&sc.mode);
        let b = &sc.blinders;
        ScenarioFile {
            name: Some(sc.name.clone()),
            base: Some(BaseSection {
                v_base_v: Some(sc.base.v_base),
                s_base_va: Some(sc.base.s_base),
                f0_hz: Some(sc.base.f0),
                ..BaseSection::default()
            }),
            network: NetworkSection {
                e_r_pu: Some(sc.network.e_r),
                filter: pu(sc.network.z_f),
                line1: pu(sc.network.z_l1),
                line2: pu(sc.network.z_l2),
                source: Some(pu(sc.network.z_r)),
            },
            control: ControlSection {
                mode: mode.into(),
                id_ref_pu: id,
                iq_ref_pu: iq,
                p_ref_pu: p,
                q_ref_pu: q,
            },
            pll: Some(PllSection {
                kp: Some(sc.pll.kp),
                ki: Some(sc.pll.ki),
                f_lim_hz: Some(sc.pll.f_lim),
                gain_scaling: Some(sc.pll.gain_scaling),
            }),
            frt: Some(FrtSection {
                k_factor: Some(sc.frt.k_factor),
                deadband_pu: Some(sc.frt.deadband),
                i_max_pu: Some(sc.frt.i_max),
                v_eps_pu: Some(sc.frt.v_eps),
                entry_voltage_pu: Some(sc.frt.entry_voltage),
            }),
            relay: RelaySection {
                resistances_ohm: Some([b.r_outer, b.r_middle, b.r_inner]),
                derived_from_angles_deg: b.angles.map(|a| [a.outer, a.middle, a.inner]),
                tilt_deg: Some(b.tilt),
                ..RelaySection::default()
            },
            timers: TimersSection {
                psb_s: Some(sc.timers.dt_psb),
                ost_s: Some(sc.timers.dt_ost),
                f_swing_hz: sc.timers.f_swing,
                ..TimersSection::default()
            },
            sim: SimSection {
                dt_s: Some(sc.sim.dt),
                t_start_s: Some(sc.sim.t_start),
                t_end_s: sc.sim.t_end,
                fp_tol: Some(sc.sim.fp_tol),
                fp_max_iter: Some(sc.sim.fp_max_iter),
                los_window_s: Some(sc.sim.los_window),
                settle_s: Some(sc.sim.settle),
            },
            events: sc
                .events
                .iter()
                .map(|e| match e.kind {
                    TimelineEventKind::ApplyFault { line, position } => EventSection {
                        t_s: e.t,
                        kind: "apply_fault".into(),
                        line: Some(line),
                        position: Some(position),
                        ..EventSection::default()
                    },
                    TimelineEventKind::ClearFault { open_line } => EventSection {
                        t_s: e.t,
                        kind: "clear_fault".into(),
                        open_line: Some(open_line),
                        ..EventSection::default()
                    },
                    TimelineEventKind::SetMode { mode } => {
                        let (m, id, iq, p, q) = control(&mode);
                        EventSection {
                            t_s: e.t,
                            kind: "set_mode".into(),
                            mode: Some(m.into()),
                            id_ref_pu: id,
                            iq_ref_pu: iq,
                            p_ref_pu: p,
                            q_ref_pu: q,
                            ..EventSection::default()
                        }
                    }
                })
                .collect(),
        }
    }
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn parse_error(origin: &str, src: &str, e: toml::de::Error) -> Error {
    let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
    Error::Parse {
        path: origin.to_string(),
        line,
        column,
        message: e.message().to_string(),
    }
}

/// Parses scenario text; `origin` names the source in error messages.
pub fn parse_scenario(src: &str, origin: &str) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(src).map_err(|e| parse_error(origin, src, e))?;
    let stem = Path::new(origin)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario");
    file.into_scenario(stem)
}

/// Parses raw TOML into a generic value (for sweep overrides).
pub fn parse_value(src: &str, origin: &str) -> Result<toml::Value> {
    toml::from_str(src).map_err(|e| parse_error(origin, src, e))
}

pub fn scenario_from_value(value: toml::Value, origin: &str) -> Result<Scenario> {
    let file: ScenarioFile = value.try_into().map_err(|e: toml::de::Error| Error::Parse {
        path: origin.to_string(),
        line: 0,
        column: 0,
        message: e.message().to_string(),
    })?;
    file.into_scenario(origin)
}

pub fn scenario_to_value(sc: &Scenario) -> toml::Value {
    toml::Value::try_from(ScenarioFile::from_scenario(sc)).expect("scenario file is always representable")
}

pub fn serialize_scenario(sc: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from_scenario(sc)).expect("scenario file is always representable")
}

/// Loads a scenario from a file path.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&src, &path.display().to_string())
}
