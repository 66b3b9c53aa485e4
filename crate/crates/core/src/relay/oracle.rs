//! Ground truth for synchronism and the verdict that compares it to the relay.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::detector::{RelayEvent, RelayEventKind};
use crate::phasor::UnwrappedAngle;

/// Default time `|δ_PLL|` must stay beyond 180° before loss of synchronism is confirmed.
pub const DEFAULT_LOS_WINDOW: f64 = 0.1;

/// Earliest time at which `|δ_PLL|` exceeds 180° and stays there for `window` seconds.
///
/// A run that ends before the window elapses is not confirmed.
pub fn los_oracle(series: &[(f64, UnwrappedAngle)], window: f64) -> Option<f64> {
    let mut start: Option<f64> = None;
    for &(t, d) in series {
        if d.degrees().abs() > 180.0 {
            let t0 = *start.get_or_insert(t);
            if t - t0 >= window {
                return Some(t0);
            }
        } else {
            start = None;
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    PsbMaloperation,
    OstMaloperation,
    MissedUnstable,
    MissedBlock,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Correct => "correct",
            Verdict::PsbMaloperation => "psb_maloperation",
            Verdict::OstMaloperation => "ost_maloperation",
            Verdict::MissedUnstable => "missed_unstable",
            Verdict::MissedBlock => "missed_block",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares what the relay did with what the oracle says happened.
///
/// - stable swing with an OST trip: `ost_maloperation`
/// - stable swing declared a fault and never blocked: `missed_block`
/// - unstable swing without an OST trip: `psb_maloperation` if it was
///   blocked as a recoverable swing, otherwise `missed_unstable`
pub fn classify_run(events: &[RelayEvent], los: Option<f64>) -> Verdict {
    let has = |k: RelayEventKind| events.iter().any(|e| e.kind == k);
    let ost = has(RelayEventKind::OstTrip);
    let psb = has(RelayEventKind::PsbBlock);
    let fault = has(RelayEventKind::FaultDeclared);
    match los {
        None if ost => Verdict::OstMaloperation,
        None if fault && !psb => Verdict::MissedBlock,
        None => Verdict::Correct,
        Some(_) if ost => Verdict::Correct,
        Some(_) if psb => Verdict::PsbMaloperation,
        Some(_) => Verdict::MissedUnstable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(rate: f64, t_cross: f64) -> Vec<(f64, UnwrappedAngle)> {
        (0..40_000)
            .map(|k| {
                let t = 29.0 + k as f64 * 1e-4;
                (t, UnwrappedAngle::from_degrees(180.0 + rate * (t - t_cross)))
            })
            .collect()
    }

    #[test]
    fn constant_angle_never_fires() {
        let s: Vec<_> = (0..1000).map(|k| (k as f64 * 0.01, UnwrappedAngle::from_degrees(30.0))).collect();
        assert_eq!(los_oracle(&s, DEFAULT_LOS_WINDOW), None);
    }

    #[test]
    fn ramp_fires_at_crossing() {
        let t = los_oracle(&ramp(100.0, 31.0), DEFAULT_LOS_WINDOW).unwrap();
        assert!((t - 31.0).abs() < 2e-4, "{t}");
        // Negative divergence counts too.
        let neg: Vec<_> = ramp(100.0, 31.0)
            .into_iter()
            .map(|(t, d)| (t, UnwrappedAngle::from_degrees(-d.degrees())))
            .collect();
        assert!((los_oracle(&neg, DEFAULT_LOS_WINDOW).unwrap() - 31.0).abs() < 2e-4);
    }

    #[test]
    fn damped_swing_peaking_below_half_turn() {
        let s: Vec<_> = (0..30_000)
            .map(|k| {
                let t = k as f64 * 1e-4;
                let d = 44.0 + 51.0 * (-0.8 * t).exp() * (6.0 * t).sin().abs();
                (t, UnwrappedAngle::from_degrees(d))
            })
            .collect();
        assert_eq!(los_oracle(&s, DEFAULT_LOS_WINDOW), None);
    }

    #[test]
    fn brief_excursion_is_not_confirmed() {
        let s: Vec<_> = (0..1000)
            .map(|k| {
                let t = k as f64 * 1e-3;
                let d = if (0.3..0.35).contains(&t) { 190.0 } else { 170.0 };
                (t, UnwrappedAngle::from_degrees(d))
            })
            .collect();
        assert_eq!(los_oracle(&s, DEFAULT_LOS_WINDOW), None);
    }

    #[test]
    fn verdict_examples() {
        let ev = |kinds: &[RelayEventKind]| -> Vec<RelayEvent> {
            kinds.iter().map(|&kind| RelayEvent { t: 1.0, kind }).collect()
        };
        use RelayEventKind::*;
        assert_eq!(classify_run(&ev(&[PsbBlock, OstTrip]), None), Verdict::OstMaloperation);
        assert_eq!(classify_run(&ev(&[]), Some(31.0)), Verdict::MissedUnstable);
        assert_eq!(classify_run(&ev(&[]), None), Verdict::Correct);
        assert_eq!(
            classify_run(&ev(&[FaultDeclared, StableSwingDeclared]), Some(31.0)),
            Verdict::MissedUnstable
        );
        assert_eq!(classify_run(&ev(&[PsbBlock, StableSwingDeclared]), Some(31.0)), Verdict::PsbMaloperation);
        assert_eq!(classify_run(&ev(&[PsbBlock, OstTrip]), Some(31.0)), Verdict::Correct);
        assert_eq!(classify_run(&ev(&[FaultDeclared]), None), Verdict::MissedBlock);
        assert_eq!(classify_run(&ev(&[PsbBlock, Reset]), None), Verdict::Correct);
    }
}
