//! Synchronous-reference-frame PLL.
//!
//! The loop tracks the PCC voltage angle by driving `vq` to zero through a
//! PI controller. State is kept as the deviation `δ_PLL = θ_PLL − ω0·t`
//! so long runs do not lose precision in the angle that actually matters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::UnwrappedAngle;

/// How the PI gains map a per-unit `vq` to a frequency deviation in rad/s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainScaling {
    /// `Δω = ω0·(kp·vq + ki·ξ)`.
    PerUnit,
    /// `Δω = kp·vq + ki·ξ`.
    RadPerSecond,
    /// `Δω = kp·vq + ω0·ki·ξ`: proportional path in rad/s, integral path in p.u.
    #[default]
    Hybrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PllParams {
    pub kp: f64,
    pub ki: f64,
    /// Nominal angular frequency, rad/s.
    pub omega0: f64,
    /// Frequency deviation limit, Hz.
    pub f_lim: f64,
    pub gain_scaling: GainScaling,
}

impl PllParams {
    /// Gains of the reference converter at 50 Hz.
    pub fn standard() -> Self {
        PllParams {
            kp: 0.57,
            ki: 0.0616,
            omega0: 2.0 * std::f64::consts::PI * 50.0,
            f_lim: 5.0,
            gain_scaling: GainScaling::Hybrid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("pll.kp", self.kp >= 0.0 && self.kp.is_finite(), "must be >= 0"),
            ("pll.ki", self.ki >= 0.0 && self.ki.is_finite(), "must be >= 0"),
            ("pll.omega0", self.omega0 > 0.0 && self.omega0.is_finite(), "must be > 0"),
            ("pll.f_lim", self.f_lim > 0.0 && self.f_lim.is_finite(), "must be > 0"),
        ];
        for (field, ok, reason) in checks {
            if !ok {
                return Err(Error::invalid(field, reason));
            }
        }
        Ok(())
    }

    /// Clamp bound on `|ω − ω0|`, rad/s.
    pub fn omega_limit(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.f_lim
    }

    /// Frequency deviation in rad/s after the limiter.
    pub fn delta_omega(&self, vq: f64, xi: f64) -> f64 {
        let raw = match self.gain_scaling {
            GainScaling::PerUnit => self.omega0 * (self.kp * vq + self.ki * xi),
            GainScaling::RadPerSecond => self.kp * vq + self.ki * xi,
            GainScaling::Hybrid => self.kp * vq + self.omega0 * self.ki * xi,
        };
        let lim = self.omega_limit();
        raw.clamp(-lim, lim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PllState {
    /// Absolute PLL phase, degrees.
    pub theta_pll: UnwrappedAngle,
    /// Integral of `vq`, p.u.·s.
    pub xi: f64,
    /// Output frequency, rad/s.
    pub omega_pll: f64,
    /// `θ_PLL − ω0·t`, degrees.
    pub delta_pll: UnwrappedAngle,
}

impl PllState {
    pub fn locked(delta_pll_deg: f64, omega0: f64) -> Self {
        PllState {
            theta_pll: UnwrappedAngle::from_degrees(delta_pll_deg),
            xi: 0.0,
            omega_pll: omega0,
            delta_pll: UnwrappedAngle::from_degrees(delta_pll_deg),
        }
    }

    pub fn f_pll_hz(&self) -> f64 {
        self.omega_pll / (2.0 * std::f64::consts::PI)
    }
}

/// Advances the PLL by `dt` with `vq` held constant over the step.
pub fn pll_step(state: PllState, vq: f64, dt: f64, params: &PllParams) -> Result<PllState> {
    pll_step_coupled(state, dt, params, |_| Ok(vq))
}

/// Classic RK4 on `(δ, ξ)` where `vq` is re-evaluated at every stage.
///
/// `vq_of` receives the trial `δ_PLL` in degrees; for the simulator it solves
/// the network algebraic loop at that angle.
pub fn pll_step_coupled<F>(state: PllState, dt: f64, params: &PllParams, mut vq_of: F) -> Result<PllState>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveStep(dt));
    }
    let d0 = state.delta_pll.radians();
    let xi0 = state.xi;

    let mut deriv = |d: f64, xi: f64| -> Result<(f64, f64)> {
        let vq = vq_of(d.to_degrees())?;
        Ok((params.delta_omega(vq, xi), vq))
    };

    let k1 = deriv(d0, xi0)?;
    let k2 = deriv(d0 + 0.5 * dt * k1.0, xi0 + 0.5 * dt * k1.1)?;
    let k3 = deriv(d0 + 0.5 * dt * k2.0, xi0 + 0.5 * dt * k2.1)?;
    let k4 = deriv(d0 + dt * k3.0, xi0 + dt * k3.1)?;

    let dd = dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
    let xi = xi0 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    let dd_deg = dd.to_degrees();

    Ok(PllState {
        theta_pll: UnwrappedAngle::from_degrees(
            state.theta_pll.degrees() + (params.omega0 * dt).to_degrees() + dd_deg,
        ),
        xi,
        omega_pll: params.omega0 + params.delta_omega(k4.1, xi),
        delta_pll: UnwrappedAngle::from_degrees(state.delta_pll.degrees() + dd_deg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(scaling: GainScaling) -> PllParams {
        PllParams {
            gain_scaling: scaling,
            ..PllParams::standard()
        }
    }

    #[test]
    fn zero_vq_free_runs_at_nominal() {
        let p = params(GainScaling::PerUnit);
        let dt = 1e-4;
        let n = 10_000;
        let mut s = PllState::locked(0.0, p.omega0);
        for _ in 0..n {
            s = pll_step(s, 0.0, dt, &p).unwrap();
        }
        assert_eq!(s.omega_pll, p.omega0);
        assert_eq!(s.delta_pll.degrees(), 0.0);
        let expect = (p.omega0 * n as f64 * dt).to_degrees();
        assert!((s.theta_pll.degrees() - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn unit_vq_hits_frequency_clamp() {
        let p = PllParams {
            ki: 0.0,
            ..params(GainScaling::PerUnit)
        };
        // 0.57 p.u. of ω0 is ~179 rad/s, far above the 5 Hz limiter.
        assert_eq!(p.delta_omega(1.0, 0.0), 2.0 * std::f64::consts::PI * 5.0);
        let s = pll_step(PllState::locked(0.0, p.omega0), 1.0, 1e-4, &p).unwrap();
        assert!((s.omega_pll - p.omega0 - p.omega_limit()).abs() < 1e-12);
    }

    #[test]
    fn zero_gains_open_loop() {
        for scaling in [GainScaling::PerUnit, GainScaling::RadPerSecond, GainScaling::Hybrid] {
            let p = PllParams {
                kp: 0.0,
                ki: 0.0,
                ..params(scaling)
            };
            let mut s = PllState::locked(12.0, p.omega0);
            for vq in [1.0, -0.4, 3.0] {
                s = pll_step(s, vq, 1e-3, &p).unwrap();
                assert_eq!(s.omega_pll, p.omega0);
            }
            assert_eq!(s.delta_pll.degrees(), 12.0);
        }
    }

    #[test]
    fn non_positive_dt_rejected() {
        let p = PllParams::standard();
        let s = PllState::locked(0.0, p.omega0);
        assert!(matches!(pll_step(s, 0.0, 0.0, &p), Err(Error::NonPositiveStep(_))));
        assert!(pll_step(s, 0.0, -1e-4, &p).is_err());
    }

    #[test]
    fn scalings_differ_as_documented() {
        let (vq, xi) = (0.01, 0.02);
        let w0 = PllParams::standard().omega0;
        let pu = params(GainScaling::PerUnit).delta_omega(vq, xi);
        let rs = params(GainScaling::RadPerSecond).delta_omega(vq, xi);
        let hy = params(GainScaling::Hybrid).delta_omega(vq, xi);
        assert!((pu - w0 * (0.57 * vq + 0.0616 * xi)).abs() < 1e-12);
        assert!((rs - (0.57 * vq + 0.0616 * xi)).abs() < 1e-12);
        assert!((hy - (0.57 * vq + w0 * 0.0616 * xi)).abs() < 1e-12);
    }

    #[test]
    fn constant_vq_integrates_exactly() {
        // With a linear right-hand side RK4 is exact: ξ = vq·t, δ = kp·vq·t + ki'·vq·t²/2.
        let p = params(GainScaling::RadPerSecond);
        let vq = 0.01;
        let dt = 1e-3;
        let mut s = PllState::locked(0.0, p.omega0);
        for _ in 0..100 {
            s = pll_step(s, vq, dt, &p).unwrap();
        }
        let t: f64 = 0.1;
        assert!((s.xi - vq * t).abs() < 1e-15);
        let d = p.kp * vq * t + p.ki * vq * t * t / 2.0;
        assert!((s.delta_pll.radians() - d).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn frequency_never_leaves_band(
            vqs in proptest::collection::vec(-5.0f64..5.0, 1..200),
            k in 0usize..3,
        ) {
            let scaling = [GainScaling::PerUnit, GainScaling::RadPerSecond, GainScaling::Hybrid][k];
            let p = params(scaling);
            let mut s = PllState::locked(0.0, p.omega0);
            for vq in vqs {
                s = pll_step(s, vq, 1e-3, &p).unwrap();
                prop_assert!((s.omega_pll - p.omega0).abs() <= p.omega_limit() * (1.0 + 1e-12));
            }
        }

        #[test]
        fn theta_tracks_delta(vqs in proptest::collection::vec(-1.0f64..1.0, 1..100)) {
            let p = PllParams::standard();
            let dt = 1e-4;
            let mut s = PllState::locked(0.0, p.omega0);
            for vq in &vqs {
                s = pll_step(s, *vq, dt, &p).unwrap();
            }
            let wt = (p.omega0 * dt * vqs.len() as f64).to_degrees();
            prop_assert!((s.theta_pll.degrees() - wt - s.delta_pll.degrees()).abs() < 1e-9);
        }
    }
}
