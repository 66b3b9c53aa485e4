//! Complex phasors, per-unit bases and continuous angle tracking.
//!
//! Angles cross the public API in degrees; trigonometry happens in radians
//! inside the constructors and accessors.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wraps an angle in degrees to (−180°, 180°].
pub fn wrap_deg(angle: f64) -> f64 {
    let mut a = angle % 360.0;
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}

/// Complex value whose unit (p.u., V, A or Ω) is given by context.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Phasor {
    pub re: f64,
    pub im: f64,
}

impl Phasor {
    pub const ZERO: Phasor = Phasor { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Phasor { re, im }
    }

    pub fn from_polar(magnitude: f64, angle_deg: f64) -> Result<Self> {
        if magnitude < 0.0 || magnitude.is_nan() {
            return Err(Error::NegativeMagnitude(magnitude));
        }
        let a = angle_deg.to_radians();
        Ok(Phasor::new(magnitude * a.cos(), magnitude * a.sin()))
    }

    pub fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Argument in degrees, in (−180°, 180°].
    pub fn angle_deg(self) -> f64 {
        // atan2 already returns (−π, π]; the wrap only normalizes −180 to 180.
        wrap_deg(self.im.atan2(self.re).to_degrees())
    }

    pub fn to_polar(self) -> (f64, f64) {
        (self.magnitude(), self.angle_deg())
    }

    pub fn conj(self) -> Self {
        Phasor::new(self.re, -self.im)
    }

    /// Rotates by `angle_deg` (multiplication by 1∠angle).
    pub fn rotate(self, angle_deg: f64) -> Self {
        let a = angle_deg.to_radians();
        (self.to_complex() * Complex64::from_polar(1.0, a)).into()
    }

    pub fn scale(self, k: f64) -> Self {
        Phasor::new(self.re * k, self.im * k)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for Phasor {
    fn from(c: Complex64) -> Self {
        Phasor::new(c.re, c.im)
    }
}

impl From<Phasor> for Complex64 {
    fn from(p: Phasor) -> Self {
        p.to_complex()
    }
}

macro_rules! phasor_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Phasor {
            type Output = Phasor;
            fn $method(self, rhs: Phasor) -> Phasor {
                self.to_complex().$method(rhs.to_complex()).into()
            }
        }
    };
}

phasor_binop!(Add, add);
phasor_binop!(Sub, sub);
phasor_binop!(Mul, mul);
phasor_binop!(Div, div);

impl Neg for Phasor {
    type Output = Phasor;
    fn neg(self) -> Phasor {
        Phasor::new(-self.re, -self.im)
    }
}

/// Physical quantity carried by a phasor, selecting the per-unit divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Impedance,
    /// Line-to-line voltage.
    Voltage,
    /// Line current; base is S/(√3·V_LL).
    Current,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerUnitBase {
    /// Line-to-line voltage base in volts.
    pub v_base: f64,
    /// Three-phase power base in VA.
    pub s_base: f64,
    /// Nominal frequency in Hz.
    pub f0: f64,
}

impl PerUnitBase {
    pub fn new(v_base: f64, s_base: f64, f0: f64) -> Result<Self> {
        let base = PerUnitBase { v_base, s_base, f0 };
        base.validate()?;
        Ok(base)
    }

    /// 220 kV, 3025 MVA, 50 Hz.
    pub fn standard() -> Self {
        PerUnitBase {
            v_base: 220e3,
            s_base: 3025e6,
            f0: 50.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("base.v_base", self.v_base),
            ("base.s_base", self.s_base),
            ("base.f0", self.f0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn z_base(&self) -> f64 {
        self.v_base * self.v_base / self.s_base
    }

    pub fn i_base(&self) -> f64 {
        self.s_base / (3f64.sqrt() * self.v_base)
    }

    pub fn omega0(&self) -> f64 {
        2.0 * PI * self.f0
    }

    /// Reactance in ohms of an inductance given in millihenry at f0.
    pub fn reactance_ohm_from_mh(&self, l_mh: f64) -> f64 {
        self.omega0() * l_mh * 1e-3
    }

    fn divisor(&self, kind: Quantity) -> f64 {
        match kind {
            Quantity::Impedance => self.z_base(),
            Quantity::Voltage => self.v_base,
            Quantity::Current => self.i_base(),
        }
    }
}

pub fn to_per_unit(x: Phasor, base: &PerUnitBase, kind: Quantity) -> Result<Phasor> {
    base.validate()?;
    Ok(x.scale(1.0 / base.divisor(kind)))
}

pub fn from_per_unit(x: Phasor, base: &PerUnitBase, kind: Quantity) -> Result<Phasor> {
    base.validate()?;
    Ok(x.scale(base.divisor(kind)))
}

/// An angle in degrees that stays continuous across the ±180° seam.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnwrappedAngle(f64);

impl UnwrappedAngle {
    pub const fn from_degrees(value: f64) -> Self {
        UnwrappedAngle(value)
    }

    pub fn from_radians(value: f64) -> Self {
        UnwrappedAngle(value.to_degrees())
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0.to_radians()
    }

    pub fn wrapped(self) -> f64 {
        wrap_deg(self.0)
    }

    /// Advances to the branch of `new_wrapped` nearest the current value.
    pub fn unwrap(self, new_wrapped: f64) -> Self {
        unwrap(self, new_wrapped)
    }
}

/// Picks the representative of `new_wrapped` (mod 360°) closest to `prev`.
pub fn unwrap(prev: UnwrappedAngle, new_wrapped: f64) -> UnwrappedAngle {
    let step = wrap_deg(new_wrapped - prev.0);
    UnwrappedAngle(prev.0 + step)
}
