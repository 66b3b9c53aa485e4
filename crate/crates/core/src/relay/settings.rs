use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::Phasor;

/// Blinder resistance for a swing angle `delta_deg` across total reactance `x_total`.
///
/// `R = (X_T/2)·cot(δ/2)`: the distance from the electrical centre at which the
/// two-source locus sees the sources `δ` apart.
pub fn blinder_resistance(x_total: f64, delta_deg: f64) -> Result<f64> {
    if !(x_total > 0.0 && x_total.is_finite()) {
        return Err(Error::invalid("x_total", format!("must be > 0, got {x_total}")));
    }
    if !(delta_deg > 0.0 && delta_deg < 360.0) {
        return Err(Error::invalid("delta", format!("must be in (0°, 360°), got {delta_deg}")));
    }
    let half = (delta_deg / 2.0).to_radians();
    Ok(x_total / 2.0 * half.cos() / half.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlinderAngles {
    pub outer: f64,
    pub middle: f64,
    pub inner: f64,
}

impl BlinderAngles {
    pub const STANDARD: BlinderAngles = BlinderAngles {
        outer: 90.0,
        middle: 100.0,
        inner: 120.0,
    };

    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.outer && self.outer < self.middle && self.middle < self.inner && self.inner < 180.0;
        if !ok {
            return Err(Error::invalid(
                "relay.angles_deg",
                "ordering 0 < outer < middle < inner < 180 violated",
            ));
        }
        Ok(())
    }
}

/// Resistances in ohms of the outer, middle and inner blinder pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlinderSettings {
    pub r_outer: f64,
    pub r_middle: f64,
    pub r_inner: f64,
    /// Angle of the blinder lines in the R-X plane, degrees (90° = vertical).
    pub tilt: f64,
    /// Angles the resistances were computed from, kept for reporting.
    pub angles: Option<BlinderAngles>,
}

impl BlinderSettings {
    pub fn new(r_outer: f64, r_middle: f64, r_inner: f64) -> Result<Self> {
        let b = BlinderSettings {
            r_outer,
            r_middle,
            r_inner,
            tilt: 90.0,
            angles: None,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn from_angles(x_total: f64, angles: BlinderAngles) -> Result<Self> {
        angles.validate()?;
        let b = BlinderSettings {
            r_outer: blinder_resistance(x_total, angles.outer)?,
            r_middle: blinder_resistance(x_total, angles.middle)?,
            r_inner: blinder_resistance(x_total, angles.inner)?,
            tilt: 90.0,
            angles: Some(angles),
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let ordered = self.r_outer > self.r_middle && self.r_middle > self.r_inner && self.r_inner > 0.0;
        if !ordered || !self.r_outer.is_finite() {
            return Err(Error::invalid(
                "relay.resistances_ohm",
                format!(
                    "ordering r_outer > r_middle > r_inner > 0 violated ({}, {}, {})",
                    self.r_outer, self.r_middle, self.r_inner
                ),
            ));
        }
        if !(self.tilt > 0.0 && self.tilt < 180.0) {
            return Err(Error::invalid("relay.tilt_deg", "must be in (0°, 180°)"));
        }
        if let Some(a) = self.angles {
            a.validate()?;
        }
        Ok(())
    }

    /// Signed distance of `z` from the line through the origin at `tilt`.
    pub fn distance(&self, z: Phasor) -> f64 {
        z.rotate(90.0 - self.tilt).re
    }

    pub fn region(&self, z: Phasor) -> Region {
        let d = self.distance(z).abs();
        if d > self.r_outer {
            Region::Outside
        } else if d > self.r_middle {
            Region::BetweenOM
        } else if d > self.r_inner {
            Region::BetweenMI
        } else {
            Region::InsideI
        }
    }
}

/// Where an impedance lies relative to the three blinder pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Outside,
    #[serde(rename = "between_o_m")]
    BetweenOM,
    #[serde(rename = "between_m_i")]
    BetweenMI,
    InsideI,
}

impl Region {
    pub fn depth(self) -> u8 {
        self as u8
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Outside => "outside",
            Region::BetweenOM => "between_o_m",
            Region::BetweenMI => "between_m_i",
            Region::InsideI => "inside_i",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Region::Outside, Region::BetweenOM, Region::BetweenMI, Region::InsideI]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimerSettings {
    /// Outer-to-middle transit threshold, s.
    pub dt_psb: f64,
    /// Outer-to-inner transit threshold, s.
    pub dt_ost: f64,
    pub f0: f64,
    /// Slip frequency the thresholds were derived from, if any.
    pub f_swing: Option<f64>,
}

impl TimerSettings {
    pub fn from_cycles(psb_cycles: f64, ost_cycles: f64, f0: f64) -> Result<Self> {
        let t = TimerSettings {
            dt_psb: psb_cycles / f0,
            dt_ost: ost_cycles / f0,
            f0,
            f_swing: None,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f0 > 0.0) {
            return Err(Error::invalid("timers.f0", "must be > 0"));
        }
        if !(self.dt_psb > 0.0) {
            return Err(Error::invalid("timers.psb", "must be > 0"));
        }
        if !(self.dt_ost > self.dt_psb) {
            return Err(Error::invalid("timers.ost", "must exceed the PSB interval"));
        }
        Ok(())
    }

    pub fn psb_cycles(&self) -> f64 {
        self.dt_psb * self.f0
    }

    pub fn ost_cycles(&self) -> f64 {
        self.dt_ost * self.f0
    }
}

/// Transit-time thresholds for a swing slipping at `f_swing` Hz.
///
/// Returned unvalidated so degenerate spreads (δ_M = δ_O) can be inspected.
pub fn timer_settings(
    delta_o: f64,
    delta_m: f64,
    delta_i: f64,
    f0: f64,
    f_swing: f64,
) -> Result<TimerSettings> {
    if !(f0 > 0.0) {
        return Err(Error::invalid("f0", "must be > 0"));
    }
    if !(f_swing > 0.0) {
        return Err(Error::invalid("f_swing", "must be > 0"));
    }
    let cycles = |spread: f64| spread * f0 / (360.0 * f_swing);
    Ok(TimerSettings {
        dt_psb: cycles(delta_m - delta_o) / f0,
        dt_ost: cycles(delta_i - delta_o) / f0,
        f0,
        f_swing: Some(f_swing),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn maloperation_resistances() {
        assert!((blinder_resistance(14.4, 90.0).unwrap() - 7.2).abs() < 1e-12);
        assert!((blinder_resistance(14.4, 120.0).unwrap() - 4.157).abs() < 1e-3);
        assert!((blinder_resistance(14.4, 100.0).unwrap() - 6.042).abs() < 1e-3);
    }

    #[test]
    fn case_iv_resistances() {
        let r = |d| blinder_resistance(12.0, d).unwrap();
        assert!(rel(r(90.0), 6.0) < 1e-12);
        assert!(rel(r(100.0), 5.03) < 2e-3);
        assert!(rel(r(120.0), 3.46) < 2e-3);
    }

    #[test]
    fn half_turn_is_zero_and_limits_rejected() {
        assert!(blinder_resistance(14.4, 180.0).unwrap().abs() < 1e-12);
        assert!(blinder_resistance(14.4, 0.0).is_err());
        assert!(blinder_resistance(14.4, 360.0).is_err());
        assert!(blinder_resistance(0.0, 90.0).is_err());
    }

    #[test]
    fn timer_examples() {
        let t = timer_settings(90.0, 100.0, 120.0, 50.0, 1.0).unwrap();
        assert!((t.psb_cycles() - 1.3889).abs() < 1e-4);
        assert!((t.dt_psb - 0.02778).abs() < 1e-5);
        assert!((t.ost_cycles() - 4.1667).abs() < 1e-4);

        let t = timer_settings(90.0, 90.0, 120.0, 50.0, 1.0).unwrap();
        assert_eq!(t.psb_cycles(), 0.0);
        assert!(t.validate().is_err());

        let t = TimerSettings::from_cycles(1.5, 2.5, 50.0).unwrap();
        assert!((t.dt_psb - 0.03).abs() < 1e-15 && (t.dt_ost - 0.05).abs() < 1e-15);
    }

    #[test]
    fn ordering_enforced() {
        assert!(BlinderSettings::new(7.2, 6.0, 4.2).is_ok());
        let err = BlinderSettings::new(7.2, 4.0, 4.2).unwrap_err().to_string();
        assert!(err.contains("ordering"), "{err}");
        assert!(BlinderSettings::from_angles(14.4, BlinderAngles { outer: 100.0, middle: 90.0, inner: 120.0 }).is_err());
    }

    #[test]
    fn regions_vertical_blinders() {
        let b = BlinderSettings::new(7.2, 6.0, 4.2).unwrap();
        assert_eq!(b.region(Phasor::new(-8.0, 3.0)), Region::Outside);
        assert_eq!(b.region(Phasor::new(-6.5, 30.0)), Region::BetweenOM);
        assert_eq!(b.region(Phasor::new(5.0, -3.0)), Region::BetweenMI);
        assert_eq!(b.region(Phasor::new(0.0, 100.0)), Region::InsideI);
    }

    #[test]
    fn tilted_blinders_measure_perpendicular_distance() {
        let b = BlinderSettings {
            tilt: 75.0,
            ..BlinderSettings::new(7.2, 6.0, 4.2).unwrap()
        };
        // A point on the tilted axis is at zero distance.
        let on_axis = Phasor::from_polar(20.0, 75.0).unwrap();
        assert!(b.distance(on_axis).abs() < 1e-12);
        let off = on_axis + Phasor::from_polar(5.0, -15.0).unwrap();
        assert!((b.distance(off) - 5.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn resistance_strictly_decreasing(a in 0.01f64..359.0, d in 0.001f64..0.99) {
            let b = a + d;
            prop_assert!(blinder_resistance(10.0, a).unwrap() > blinder_resistance(10.0, b).unwrap());
        }
    }
}
