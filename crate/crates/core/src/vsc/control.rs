//! dq measurement, current references and the control angle φ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::{wrap_deg, Phasor};

/// Sign of the q-axis reactive current injected during a voltage dip.
///
/// Negative `iq` in the PLL frame is capacitive: it raises the PCC voltage
/// through an inductive grid.
pub const FRT_CAPACITIVE_SIGN: f64 = -1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ControlMode {
    /// Constant power factor: fixed dq current references.
    Cpf { id_ref: f64, iq_ref: f64 },
    /// Open-loop power control: references follow the measured voltage.
    Opc { p_ref: f64, q_ref: f64 },
}

impl ControlMode {
    pub fn validate(&self, frt: &FrtParams) -> Result<()> {
        match *self {
            ControlMode::Cpf { id_ref, iq_ref } => {
                if !(id_ref.is_finite() && iq_ref.is_finite()) {
                    return Err(Error::invalid("control", "references must be finite"));
                }
                let mag = id_ref.hypot(iq_ref);
                if mag > frt.i_max * (1.0 + 1e-12) {
                    return Err(Error::invalid(
                        "control",
                        format!("CPF magnitude {mag} exceeds i_max {}", frt.i_max),
                    ));
                }
                if mag == 0.0 {
                    return Err(Error::invalid("control", "CPF references are both zero"));
                }
            }
            ControlMode::Opc { p_ref, q_ref } => {
                alpha0_of(p_ref, q_ref).map_err(|_| Error::invalid("control.p_ref", "must be > 0"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrtParams {
    /// Reactive current per p.u. of voltage dip beyond the deadband.
    pub k_factor: f64,
    pub deadband: f64,
    pub i_max: f64,
    /// Voltage floor for normalizations, p.u.
    pub v_eps: f64,
    /// FRT engages when a fault is active and |V_PCC| drops below this, p.u.
    pub entry_voltage: f64,
}

impl Default for FrtParams {
    fn default() -> Self {
        FrtParams {
            k_factor: 2.0,
            deadband: 0.1,
            i_max: 1.0,
            v_eps: 1e-4,
            entry_voltage: 0.9,
        }
    }
}

impl FrtParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("frt.k_factor", self.k_factor >= 0.0 && self.k_factor.is_finite(), "must be >= 0"),
            ("frt.deadband", (0.0..1.0).contains(&self.deadband), "must be in [0, 1)"),
            ("frt.i_max", self.i_max > 0.0 && self.i_max.is_finite(), "must be > 0"),
            ("frt.v_eps", self.v_eps > 0.0 && self.v_eps.is_finite(), "must be > 0"),
            ("frt.entry_voltage", self.entry_voltage > 0.0 && self.entry_voltage.is_finite(), "must be > 0"),
        ];
        for (field, ok, reason) in checks {
            if !ok {
                return Err(Error::invalid(field, reason));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DqVoltage {
    pub vd: f64,
    pub vq: f64,
}

impl DqVoltage {
    /// Projects a PCC phasor onto a frame rotated by `delta_pll_deg`.
    pub fn from_phasor(v: Phasor, delta_pll_deg: f64) -> Self {
        let r = v.rotate(-delta_pll_deg);
        DqVoltage { vd: r.re, vq: r.im }
    }

    pub fn magnitude(&self) -> f64 {
        self.vd.hypot(self.vq)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurrentCommand {
    pub id_ref: f64,
    pub iq_ref: f64,
    pub i_mag: f64,
    /// Control angle, degrees.
    pub phi: f64,
    /// Set when a normalization hit the `v_eps` floor.
    #[serde(default)]
    pub degenerate: bool,
}

impl CurrentCommand {
    pub fn from_dq(id_ref: f64, iq_ref: f64) -> Self {
        CurrentCommand {
            id_ref,
            iq_ref,
            i_mag: id_ref.hypot(iq_ref),
            phi: iq_ref.atan2(id_ref).to_degrees(),
            degenerate: false,
        }
    }

    /// Scales down to `i_max` if needed, keeping the angle.
    fn limited(self, i_max: f64) -> Self {
        if self.i_mag <= i_max {
            return self;
        }
        let k = i_max / self.i_mag;
        CurrentCommand {
            id_ref: self.id_ref * k,
            iq_ref: self.iq_ref * k,
            i_mag: i_max,
            ..self
        }
    }

    /// Grid-frame current phasor `I_g∠(φ + δ_PLL)`.
    pub fn to_grid(&self, delta_pll_deg: f64) -> Phasor {
        Phasor::new(self.id_ref, self.iq_ref).rotate(delta_pll_deg)
    }
}

pub fn measure_dq(v_pcc_mag: f64, delta_pcc_deg: f64, delta_pll_deg: f64) -> DqVoltage {
    let a = (delta_pcc_deg - delta_pll_deg).to_radians();
    DqVoltage {
        vd: v_pcc_mag * a.cos(),
        vq: v_pcc_mag * a.sin(),
    }
}

/// Instantaneous phase voltages `V·cos(ωt + δ − k·120°)`, k = 0, 1, 2.
pub fn abc_from_phasor(v_mag: f64, delta_deg: f64, omega_t_rad: f64) -> [f64; 3] {
    let base = omega_t_rad + delta_deg.to_radians();
    std::array::from_fn(|k| v_mag * (base - k as f64 * 2.0 * std::f64::consts::FRAC_PI_3).cos())
}

/// Amplitude-invariant Park transform at frame angle `theta_rad`.
///
/// The q row is `−sin(θ − k·120°)` so that a positive `vq` means the voltage
/// leads the frame.
pub fn park(abc: [f64; 3], theta_rad: f64) -> DqVoltage {
    let mut vd = 0.0;
    let mut vq = 0.0;
    for (k, x) in abc.iter().enumerate() {
        let a = theta_rad - k as f64 * 2.0 * std::f64::consts::FRAC_PI_3;
        vd += x * a.cos();
        vq -= x * a.sin();
    }
    DqVoltage {
        vd: 2.0 / 3.0 * vd,
        vq: 2.0 / 3.0 * vq,
    }
}

/// References in normal operation, limited to `i_max`.
pub fn current_refs_normal(mode: &ControlMode, v: DqVoltage, frt: &FrtParams) -> CurrentCommand {
    match *mode {
        ControlMode::Cpf { id_ref, iq_ref } => CurrentCommand::from_dq(id_ref, iq_ref).limited(frt.i_max),
        ControlMode::Opc { p_ref, q_ref } => {
            let mag = v.magnitude();
            let m = mag.max(frt.v_eps);
            // (vd + j·vq)(P + j·Q)/|v|, i.e. the current leads v by α0.
            let id = (p_ref * v.vd - q_ref * v.vq) / m;
            let iq = (p_ref * v.vq + q_ref * v.vd) / m;
            let mut cmd = CurrentCommand::from_dq(id, iq).limited(frt.i_max);
            cmd.degenerate = mag < frt.v_eps;
            cmd
        }
    }
}

/// Fault ride-through references: reactive priority, active current fills the rest.
pub fn current_refs_fault(v_pcc_mag: f64, frt: &FrtParams) -> CurrentCommand {
    let dv = 1.0 - v_pcc_mag;
    let iq_abs = (frt.k_factor * (dv - frt.deadband).max(0.0)).min(frt.i_max);
    let id = (frt.i_max * frt.i_max - iq_abs * iq_abs).max(0.0).sqrt();
    CurrentCommand::from_dq(id, FRT_CAPACITIVE_SIGN * iq_abs)
}

pub fn phi_of(cmd: &CurrentCommand) -> Result<f64> {
    if cmd.id_ref == 0.0 && cmd.iq_ref == 0.0 {
        return Err(Error::ZeroCurrent("control angle undefined"));
    }
    Ok(cmd.iq_ref.atan2(cmd.id_ref).to_degrees())
}

pub fn alpha0_of(p_ref: f64, q_ref: f64) -> Result<f64> {
    if !(p_ref > 0.0) || !q_ref.is_finite() {
        return Err(Error::invalid("p_ref", format!("must be > 0, got {p_ref}")));
    }
    Ok((q_ref / p_ref).atan().to_degrees())
}

/// `φ + δ_PLL − (δ_PCC + α0)` wrapped to (−180°, 180°]; zero in OPC mode.
pub fn opc_identity_residual(phi: f64, delta_pll: f64, delta_pcc: f64, alpha0: f64) -> f64 {
    wrap_deg(phi + delta_pll - delta_pcc - alpha0)
}
