//! Phasor solution of the two-line test network and impedance loci.
//!
//! ```text
//!   VSC --Z_f-- PCC --Z_L1-------- B --Z_R-- E_R∠0
//!                 \--Z_L2 (fault)--/
//! ```
//!
//! All quantities are per unit on the converter base. The relay sits at the
//! PCC end of line 1 and measures `V_PCC` and the line-1 current.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::{PerUnitBase, Phasor};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Remote source magnitude; its angle is the reference.
    pub e_r: f64,
    pub z_f: Phasor,
    pub z_l1: Phasor,
    pub z_l2: Phasor,
    pub z_r: Phasor,
}

impl NetworkParams {
    /// Purely inductive network from millihenry values.
    pub fn from_inductances_mh(base: &PerUnitBase, l_f: f64, l_1: f64, l_2: f64) -> Self {
        let x = |l| Phasor::new(0.0, base.reactance_ohm_from_mh(l) / base.z_base());
        NetworkParams {
            e_r: 1.0,
            z_f: x(l_f),
            z_l1: x(l_1),
            z_l2: x(l_2),
            z_r: Phasor::ZERO,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_r > 0.0 && self.e_r.is_finite()) {
            return Err(Error::invalid("network.e_r", "must be > 0"));
        }
        for (field, z, strict) in [
            ("network.z_f", self.z_f, false),
            ("network.z_l1", self.z_l1, true),
            ("network.z_l2", self.z_l2, true),
            ("network.z_r", self.z_r, false),
        ] {
            if !z.is_finite() || z.re < 0.0 || z.im < 0.0 {
                return Err(Error::invalid(field, "components must be finite and non-negative"));
            }
            if strict && z.magnitude() == 0.0 {
                return Err(Error::invalid(field, "line impedance must be nonzero"));
            }
        }
        Ok(())
    }

    /// Grid impedance seen from the PCC with line 2 open.
    pub fn z_g(&self) -> Phasor {
        self.z_l1 + self.z_r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fault {
    /// Electrical position along line 2 from the PCC end, in [0, 1].
    pub position: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub line2_in: bool,
    pub fault: Option<Fault>,
}

impl Topology {
    pub const NORMAL: Topology = Topology {
        line2_in: true,
        fault: None,
    };
    pub const LINE2_OUT: Topology = Topology {
        line2_in: false,
        fault: None,
    };

    pub fn faulted(position: f64) -> Self {
        Topology {
            line2_in: true,
            fault: Some(Fault { position }),
        }
    }

    pub fn validate(&self, net: &NetworkParams) -> Result<()> {
        if let Some(f) = self.fault {
            if !self.line2_in {
                return Err(Error::invalid("topology", "fault requires line 2 in service"));
            }
            if !(0.0..=1.0).contains(&f.position) {
                return Err(Error::invalid("fault.position", "must be in [0, 1]"));
            }
            if f.position == 1.0 && net.z_r.magnitude() == 0.0 {
                return Err(Error::invalid(
                    "fault.position",
                    "p = 1 shorts the ideal remote source (z_r = 0)",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSolution {
    pub v_pcc: Phasor,
    pub delta_pcc: f64,
    pub i_line1: Phasor,
    /// Converter internal voltage behind the filter.
    pub e_s: Phasor,
    pub delta_s: f64,
    /// Largest current mismatch over the PCC and remote nodes.
    pub kcl_residual: f64,
    /// Bolted fault at the PCC itself: V_PCC forced to zero.
    pub degenerate: bool,
}

fn inv(z: Phasor) -> Phasor {
    Phasor::new(1.0, 0.0) / z
}

/// Solves the network for a converter current `inj` given in the grid frame.
pub fn solve_pcc(inj: Phasor, net: &NetworkParams, topo: &Topology) -> Result<NetworkSolution> {
    topo.validate(net)?;
    let e_r = Phasor::new(net.e_r, 0.0);
    let ideal_source = net.z_r.magnitude() == 0.0;
    let y1 = inv(net.z_l1);

    // Shunt admittance at PCC and B from a bolted fault, plus the series
    // line-2 admittance when it is healthy. `None` marks an infinite shunt.
    let (y_pb, y_p_gnd, y_b_gnd): (Phasor, Option<Phasor>, Option<Phasor>) = match topo.fault {
        None if topo.line2_in => (y1 + inv(net.z_l2), Some(Phasor::ZERO), Some(Phasor::ZERO)),
        None => (y1, Some(Phasor::ZERO), Some(Phasor::ZERO)),
        Some(Fault { position: p }) => {
            let near = (p > 0.0).then(|| inv(net.z_l2.scale(p)));
            let far = (p < 1.0).then(|| inv(net.z_l2.scale(1.0 - p)));
            (y1, near, far)
        }
    };

    let (v_p, v_b, degenerate) = match (y_p_gnd, ideal_source) {
        (None, true) => (Phasor::ZERO, e_r, true),
        (None, false) => {
            let y_r = inv(net.z_r);
            let y_bb = y_pb + y_r + y_b_gnd.unwrap_or(Phasor::ZERO);
            (Phasor::ZERO, (e_r * y_r) / y_bb, true)
        }
        (Some(ypg), true) => ((inj + e_r * y_pb) / (y_pb + ypg), e_r, false),
        (Some(ypg), false) => match y_b_gnd {
            None => ((inj) / (y_pb + ypg), Phasor::ZERO, false),
            Some(ybg) => {
                // [y_pb+ypg, −y_pb; −y_pb, y_pb+ybg+y_r] [V_P; V_B] = [I; E_R·y_r]
                let y_r = inv(net.z_r);
                let a = y_pb + ypg;
                let d = y_pb + ybg + y_r;
                let det = a * d - y_pb * y_pb;
                let v_p = (inj * d + y_pb * e_r * y_r) / det;
                let v_b = (a * e_r * y_r + y_pb * inj) / det;
                (v_p, v_b, false)
            }
        },
    };

    let i_line1 = (v_p - v_b) * y1;
    let kcl_residual = if degenerate {
        0.0
    } else {
        let mut out_p = (v_p - v_b) * y_pb;
        if let Some(ypg) = y_p_gnd {
            out_p = out_p + v_p * ypg;
        }
        let r_p = (inj - out_p).magnitude();
        let r_b = if ideal_source {
            0.0
        } else {
            let y_r = inv(net.z_r);
            let into_b = (v_p - v_b) * y_pb;
            let out_b = (v_b - e_r) * y_r + y_b_gnd.map_or(Phasor::ZERO, |y| v_b * y);
            if y_b_gnd.is_none() {
                0.0
            } else {
                (into_b - out_b).magnitude()
            }
        };
        r_p.max(r_b)
    };

    let e_s = v_p + inj * net.z_f;
    Ok(NetworkSolution {
        v_pcc: v_p,
        delta_pcc: v_p.angle_deg(),
        i_line1,
        e_s,
        delta_s: e_s.angle_deg(),
        kcl_residual,
        degenerate,
    })
}

pub fn apparent_impedance(v: Phasor, i: Phasor) -> Result<Phasor> {
    if i.magnitude() == 0.0 {
        return Err(Error::ZeroCurrent("apparent impedance"));
    }
    Ok(v / i)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpedanceUnit {
    #[default]
    Ohm,
    PerUnit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceSample {
    pub t: f64,
    pub z: Phasor,
    pub unit: ImpedanceUnit,
}

impl ImpedanceSample {
    pub fn ohm(t: f64, z: Phasor) -> Self {
        ImpedanceSample {
            t,
            z,
            unit: ImpedanceUnit::Ohm,
        }
    }

    /// Same sample expressed in ohms.
    pub fn to_ohm(&self, base: &PerUnitBase) -> Self {
        match self.unit {
            ImpedanceUnit::Ohm => *self,
            ImpedanceUnit::PerUnit => ImpedanceSample::ohm(self.t, self.z.scale(base.z_base())),
        }
    }
}

/// Impedance seen at the PCC for a converter injecting `i_g∠angle_sum`.
pub fn predict_locus_gfl(e_r: f64, i_g: f64, z_g: Phasor, angle_sum: f64) -> Phasor {
    let radius = e_r / i_g;
    let a = (-angle_sum).to_radians();
    Phasor::new(radius * a.cos(), radius * a.sin()) + z_g
}

/// OPC form: the angle sum collapses to `δ_PCC + α0`.
pub fn predict_locus_opc(e_r: f64, i_g: f64, z_g: Phasor, delta_pcc: f64, alpha0: f64) -> Phasor {
    predict_locus_gfl(e_r, i_g, z_g, delta_pcc + alpha0)
}

/// Two-source apparent impedance at the sending end.
///
/// `E_S = n∠δ`, `E_R = 1∠0`, `z_t` the total impedance between the sources
/// and `z_s` the sending-source impedance behind the relay.
pub fn sg_apparent_impedance(n: f64, delta: f64, z_s: Phasor, z_t: Phasor) -> Result<Phasor> {
    if !(n > 0.0) {
        return Err(Error::invalid("n", format!("must be > 0, got {n}")));
    }
    let es = Phasor::from_polar(n, delta)?;
    let diff = es - Phasor::new(1.0, 0.0);
    if diff.magnitude() < 1e-15 {
        return Err(Error::ZeroCurrent("coincident sources"));
    }
    Ok(es * z_t / diff - z_s)
}

/// Signed distance proxy of `z` from the n = 1 swing line (perpendicular
/// bisector of `z_t` offset by `−z_s`). Zero on the line.
pub fn sg_side_of_midline(z: Phasor, z_s: Phasor, z_t: Phasor) -> f64 {
    let rel = z + z_s - z_t.scale(0.5);
    (rel * z_t.conj()).re / z_t.magnitude()
}
