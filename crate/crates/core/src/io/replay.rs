//! Offline relay replay over a recorded impedance trajectory.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::network::ImpedanceSample;
use crate::phasor::Phasor;
use crate::relay::{relay_step, BlinderSettings, RelayEvent, RelayState, TimerSettings};

use super::scenario_file::{
    parse_scenario, parse_value, BaseSection, RelaySection, ScenarioFile, TimersSection,
};

/// Reads `t_s`, `z_re_ohm`, `z_im_ohm` from a CSV with a header row.
///
/// Other columns are ignored. When a `region` column is present, rows with
/// an empty region (samples the relay never saw) are skipped.
pub fn read_trajectory(path: &Path) -> Result<Vec<ImpedanceSample>> {
    let csv_err = |e| Error::Csv {
        path: path.to_path_buf(),
        source: e,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let missing = |name: &str| Error::invalid(path.display().to_string(), format!("missing column `{name}`"));
    let (it, ire, iim) = (
        col("t_s").ok_or_else(|| missing("t_s"))?,
        col("z_re_ohm").ok_or_else(|| missing("z_re_ohm"))?,
        col("z_im_ohm").ok_or_else(|| missing("z_im_ohm"))?,
    );
    let iregion = col("region");

    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if iregion.is_some_and(|i| rec.get(i).is_some_and(|s| s.trim().is_empty())) {
            continue;
        }
        let field = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("").trim();
            s.parse().map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line: n + 2,
                column: i + 1,
                message: format!("`{s}` is not a number"),
            })
        };
        out.push(ImpedanceSample::ohm(field(it)?, Phasor::new(field(ire)?, field(iim)?)));
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelayFile {
    base: Option<BaseSection>,
    relay: RelaySection,
    timers: TimersSection,
}

/// Relay settings from either a full scenario or a file holding only
/// `[relay]`, `[timers]` and optionally `[base]`.
pub fn load_relay_settings(path: &Path) -> Result<(BlinderSettings, TimerSettings)> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let origin = path.display().to_string();
    let value = parse_value(&src, &origin)?;
    if value.get("network").is_some() {
        let sc = parse_scenario(&src, &origin)?;
        return Ok((sc.blinders, sc.timers));
    }
    let rf: RelayFile = toml::from_str(&src).map_err(|e: toml::de::Error| Error::Parse {
        path: origin.clone(),
        line: 0,
        column: 0,
        message: e.message().to_string(),
    })?;
    if rf.relay.angles_deg.is_some() && rf.relay.x_total_ohm.is_none() {
        return Err(Error::invalid("relay.x_total_ohm", "required for angle settings without a network"));
    }
    // Reuse the scenario builder with a placeholder network and control.
    let stub = ScenarioFile {
        base: rf.base,
        relay: rf.relay,
        timers: rf.timers,
        network: toml::from_str("filter = { x_pu = 0.2 }\nline1 = { x_pu = 0.7 }\nline2 = { x_pu = 0.04 }")
            .expect("static"),
        control: toml::from_str("mode = \"cpf\"\nid_ref_pu = 1.0").expect("static"),
        sim: toml::from_str("t_end_s = 1.0").expect("static"),
        ..ScenarioFile::default()
    };
    let sc = stub.into_scenario("relay")?;
    Ok((sc.blinders, sc.timers))
}

/// Feeds samples through a fresh relay; non-finite samples are skipped.
pub fn replay(
    samples: &[ImpedanceSample],
    blinders: &BlinderSettings,
    timers: &TimerSettings,
) -> Result<Vec<RelayEvent>> {
    let mut state = RelayState::default();
    let mut events = Vec::new();
    for s in samples {
        let (next, ev) = relay_step(state, s, blinders, timers)?;
        state = next;
        events.extend(ev);
    }
    Ok(events)
}
