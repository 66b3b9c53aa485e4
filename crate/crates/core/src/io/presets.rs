//! Bundled scenarios for the reference operating cases.

use crate::error::{Error, Result};
use crate::sim::Scenario;

use super::scenario_file::{parse_scenario, parse_value};

const PRESETS: &[(&str, &str)] = &[
    ("maloperation", include_str!("../../presets/maloperation.toml")),
    ("case_i_a", include_str!("../../presets/case_i_a.toml")),
    ("case_i_b", include_str!("../../presets/case_i_b.toml")),
    ("case_ii_a", include_str!("../../presets/case_ii_a.toml")),
    ("case_ii_b", include_str!("../../presets/case_ii_b.toml")),
    ("case_iii", include_str!("../../presets/case_iii.toml")),
    ("case_iv", include_str!("../../presets/case_iv.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Accepts `case_iv`, `case_iv.toml` or `presets/case_iv.toml`.
fn lookup(name: &str) -> Option<(&'static str, &'static str)> {
    let stem = name.rsplit(['/', '\\']).next().unwrap_or(name);
    let stem = stem.strip_suffix(".toml").unwrap_or(stem);
    PRESETS.iter().copied().find(|(n, _)| *n == stem)
}

pub fn preset_source(name: &str) -> Result<&'static str> {
    lookup(name)
        .map(|(_, s)| s)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

pub fn preset(name: &str) -> Result<Scenario> {
    let (n, src) = lookup(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    parse_scenario(src, &format!("{n}.toml"))
}

pub fn preset_value(name: &str) -> Result<toml::Value> {
    let (n, src) = lookup(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    parse_value(src, &format!("{n}.toml"))
}

/// Loads a file if `spec` names one, otherwise a bundled preset.
pub fn resolve_scenario(spec: &str) -> Result<Scenario> {
    let path = std::path::Path::new(spec);
    if path.is_file() {
        return super::load_scenario(path);
    }
    match lookup(spec) {
        Some(_) => preset(spec),
        None => super::load_scenario(path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::TimelineEventKind;
    use crate::vsc::ControlMode;

    #[test]
    fn all_presets_load() {
        for n in preset_names() {
            let sc = preset(n).unwrap_or_else(|e| panic!("{n}: {e}"));
            assert_eq!(sc.name, n);
        }
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(preset("presets/case_i_a.toml").unwrap().name, "case_i_a");
        assert!(matches!(preset("case_v"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn case_iv_settings() {
        let sc = preset("case_iv").unwrap();
        let zb = sc.base.z_base();
        assert!((sc.network.z_l1.im * zb - 8.796).abs() < 1e-3);
        assert_eq!(sc.mode, ControlMode::Opc { p_ref: 1.0, q_ref: -0.2 });
        assert_eq!(sc.blinders.r_outer, 6.0);
        assert_eq!(sc.blinders.r_middle, 5.03);
        assert_eq!(sc.blinders.r_inner, 3.46);
        assert_eq!(sc.timers.psb_cycles(), 1.5);
        assert_eq!(sc.events[1].t, 31.0);
        assert_eq!(sc.events[1].kind, TimelineEventKind::ClearFault { open_line: 2 });
    }
}
