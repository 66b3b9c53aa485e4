//! Dual-blinder power-swing blocking and out-of-step tripping.

mod detector;
mod oracle;
mod settings;

pub use detector::{relay_step, Phase, RelayEvent, RelayEventKind, RelayState, Transit};
pub use oracle::{classify_run, los_oracle, Verdict, DEFAULT_LOS_WINDOW};
pub use settings::{
    blinder_resistance, timer_settings, BlinderAngles, BlinderSettings, Region, TimerSettings,
};
