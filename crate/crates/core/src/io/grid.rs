//! Sweep grids: labelled overrides applied to a base scenario.
//!
//! ```toml
//! [[case]]
//! label = "longer_line"
//! set = { "network.line1.l_mh" = 20.0, "control.iq_ref_pu" = -0.1 }
//!
//! [[case]]
//! label = "case_iv"
//! preset = "case_iv"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{sweep, Scenario, SweepRow};

use super::presets::preset_value;
use super::scenario_file::{parse_value, scenario_from_value, scenario_to_value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCase {
    pub label: String,
    /// Start from this preset instead of the base scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Dotted paths into the scenario file; array elements by index.
    #[serde(default)]
    pub set: toml::Table,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    case: Vec<GridCase>,
}

pub fn parse_grid(src: &str, origin: &str) -> Result<Vec<GridCase>> {
    let file: GridFile = parse_value(src, origin)?.try_into().map_err(|e: toml::de::Error| Error::Parse {
        path: origin.into(),
        line: 0,
        column: 0,
        message: e.message().to_string(),
    })?;
    Ok(file.case)
}

pub fn load_grid(path: &Path) -> Result<Vec<GridCase>> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_grid(&src, &path.display().to_string())
}

/// Keys made redundant when `key` is set, so alternative spellings of one
/// quantity never coexist.
fn displaced(key: &str) -> &'static [&'static str] {
    match key {
        "l_mh" => &["r_pu", "x_pu", "r_ohm", "x_ohm"],
        "r_pu" | "x_pu" => &["l_mh", "r_ohm", "x_ohm"],
        "r_ohm" | "x_ohm" => &["l_mh", "r_pu", "x_pu"],
        "angles_deg" => &["resistances_ohm", "derived_from_angles_deg"],
        "resistances_ohm" => &["angles_deg", "x_total_ohm"],
        "psb_cycles" | "ost_cycles" => &["psb_s", "ost_s"],
        "psb_s" | "ost_s" => &["psb_cycles", "ost_cycles"],
        "id_ref_pu" | "iq_ref_pu" => &["p_ref_pu", "q_ref_pu"],
        "p_ref_pu" | "q_ref_pu" => &["id_ref_pu", "iq_ref_pu"],
        "v_base_kv" => &["v_base_v"],
        "v_base_v" => &["v_base_kv"],
        "s_base_mva" => &["s_base_va"],
        "s_base_va" => &["s_base_mva"],
        _ => &[],
    }
}

/// Sets `path` (dotted, numeric segments index arrays) inside `root`,
/// creating intermediate tables.
pub fn set_path(root: &mut toml::Value, path: &str, value: toml::Value) -> Result<()> {
    let bad = |why: &str| Error::invalid(format!("set.{path}"), why.to_string());
    let segs: Vec<&str> = path.split('.').collect();
    if segs.iter().any(|s| s.is_empty()) {
        return Err(bad("empty path segment"));
    }
    let (last, parents) = segs.split_last().expect("non-empty");
    let mut cur = root;
    for seg in parents {
        cur = match cur {
            toml::Value::Table(t) => t
                .entry(seg.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new())),
            toml::Value::Array(a) => {
                let i: usize = seg.parse().map_err(|_| bad("expected an array index"))?;
                a.get_mut(i).ok_or_else(|| bad("array index out of range"))?
            }
            _ => return Err(bad("path descends into a scalar")),
        };
    }
    match cur {
        toml::Value::Table(t) => {
            for k in displaced(last) {
                t.remove(*k);
            }
            t.insert(last.to_string(), value);
        }
        toml::Value::Array(a) => {
            let i: usize = last.parse().map_err(|_| bad("expected an array index"))?;
            *a.get_mut(i).ok_or_else(|| bad("array index out of range"))? = value;
        }
        _ => return Err(bad("path descends into a scalar")),
    }
    Ok(())
}

/// Builds the scenario for one grid entry.
pub fn apply_case(base: &Scenario, case: &GridCase) -> Result<Scenario> {
    let mut v = match &case.preset {
        Some(p) => preset_value(p)?,
        None => scenario_to_value(base),
    };
    for (k, x) in &case.set {
        set_path(&mut v, k, x.clone())?;
    }
    if let toml::Value::Table(t) = &mut v {
        t.insert("name".into(), toml::Value::String(case.label.clone()));
    }
    scenario_from_value(v, &case.label)
}

pub fn run_grid(base: &Scenario, grid: &[GridCase]) -> Vec<SweepRow<GridCase>> {
    sweep(base, grid, apply_case)
}
