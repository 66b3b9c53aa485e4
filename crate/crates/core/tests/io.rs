use std::fs;
use std::path::Path;

use gflswing_core::io::{
    events_jsonl, load_relay_settings, load_scenario, parse_scenario, preset, preset_names, read_trajectory, replay,
    serialize_scenario, summary_json, timeseries_csv, write_artifacts, TIMESERIES_HEADER,
};
use gflswing_core::{run, ImpedanceSample, Phasor, Scenario};

fn golden_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/steady_head.csv")
}

fn short_steady() -> Scenario {
    let mut sc = preset("case_i_b").unwrap();
    sc.events.clear();
    sc.sim.t_end = 29.001;
    sc
}

#[test]
fn every_preset_round_trips() {
    for name in preset_names() {
        let sc = preset(name).unwrap();
        let text = serialize_scenario(&sc);
        let back = parse_scenario(&text, "again.toml").unwrap();
        assert_eq!(sc, back, "{name}");
        assert_eq!(serialize_scenario(&back), text);
    }
}

#[test]
fn scenario_file_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("mine.toml");
    fs::write(&p, serialize_scenario(&preset("case_iii").unwrap())).unwrap();
    let sc = load_scenario(&p).unwrap();
    assert_eq!(sc.name, "case_iii");
    assert!(load_scenario(&dir.path().join("missing.toml")).unwrap_err().to_string().contains("missing.toml"));
}

#[test]
fn timeseries_matches_golden() {
    let csv = timeseries_csv(&run(&short_steady()).unwrap());
    assert!(csv.starts_with(&format!("{TIMESERIES_HEADER}\n")));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(golden_path().parent().unwrap()).unwrap();
        fs::write(golden_path(), &csv).unwrap();
    }
    assert_eq!(csv, fs::read_to_string(golden_path()).unwrap());
}

#[test]
fn artifacts_are_byte_deterministic() {
    let sc = preset("maloperation").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = write_artifacts(&run(&sc).unwrap(), a.path()).unwrap();
    let fb = write_artifacts(&run(&sc).unwrap(), b.path()).unwrap();
    for (x, y) in [
        (&fa.timeseries, &fb.timeseries),
        (&fa.events, &fb.events),
        (&fa.trajectory, &fb.trajectory),
        (&fa.summary, &fb.summary),
    ] {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
    }

    let events = fs::read_to_string(&fa.events).unwrap();
    let kinds: Vec<String> = events
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["kind"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(&kinds[..2], ["PsbBlock", "OstTrip"]);

    let svg = fs::read_to_string(&fa.trajectory).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<line").count(), 8, "two axes and three blinder pairs");
    assert!(svg.contains("<circle") && svg.contains("<polyline"));
}

#[test]
fn quiet_run_has_empty_event_log() {
    let res = run(&preset("case_i_a").unwrap()).unwrap();
    assert_eq!(events_jsonl(&res), "");
    let summary: serde_json::Value = serde_json::from_str(&summary_json(&res)).unwrap();
    assert_eq!(summary["summary"]["verdict"], "correct");
    assert!(summary["summary"]["los_t"].is_null());
    let outer = &summary["blinders"]["outer"];
    assert_eq!(outer["ohm"], 3.93);
    assert!((outer["pu"].as_f64().unwrap() - 3.93 / 16.0).abs() < 1e-12);
}

#[test]
fn replaying_a_trace_reproduces_its_events() {
    let sc = preset("maloperation").unwrap();
    let res = run(&sc).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = write_artifacts(&res, dir.path()).unwrap();

    let samples = read_trajectory(&files.timeseries).unwrap();
    assert!(samples.len() < res.records.len(), "blanked rows skipped");
    let relay = dir.path().join("relay.toml");
    fs::write(
        &relay,
        "[relay]\nresistances_ohm = [7.2, 6.0, 4.2]\nderived_from_angles_deg = [90.0, 100.0, 120.0]\n\n[timers]\npsb_cycles = 1.5\nost_cycles = 2.5\n",
    )
    .unwrap();
    let (b, t) = load_relay_settings(&relay).unwrap();
    let replayed = replay(&samples, &b, &t).unwrap();
    assert_eq!(replayed.len(), res.relay_events.len());
    for (x, y) in replayed.iter().zip(&res.relay_events) {
        assert_eq!(x.kind, y.kind);
        assert!((x.t - y.t).abs() < 1e-6);
    }

    // A full scenario file works as relay settings too.
    let full = dir.path().join("full.toml");
    fs::write(&full, serialize_scenario(&sc)).unwrap();
    assert_eq!(load_relay_settings(&full).unwrap(), (b, t));
}

#[test]
fn replay_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z.csv");
    fs::write(&p, "t_s,z_re_ohm\n0,1\n").unwrap();
    assert!(read_trajectory(&p).unwrap_err().to_string().contains("z_im_ohm"));
    fs::write(&p, "t_s,z_re_ohm,z_im_ohm\n0,1,x\n").unwrap();
    assert!(read_trajectory(&p).unwrap_err().to_string().contains(":2:3"));

    let relay = dir.path().join("relay.toml");
    fs::write(&relay, "[relay]\nangles_deg = [90.0, 100.0, 120.0]\n[timers]\nf_swing_hz = 1.0\n").unwrap();
    assert!(load_relay_settings(&relay).is_err());
    fs::write(
        &relay,
        "[relay]\nangles_deg = [90.0, 100.0, 120.0]\nx_total_ohm = 14.4\n[timers]\nf_swing_hz = 1.0\n",
    )
    .unwrap();
    let (b, t) = load_relay_settings(&relay).unwrap();
    assert!((b.r_middle - 6.042).abs() < 1e-3);
    assert!((t.ost_cycles() - 4.1667).abs() < 1e-4);
}

#[test]
fn replay_rejects_time_regression() {
    let samples = vec![
        ImpedanceSample::ohm(1.0, Phasor::new(20.0, 0.0)),
        ImpedanceSample::ohm(0.5, Phasor::new(20.0, 0.0)),
    ];
    let sc = preset("maloperation").unwrap();
    assert!(replay(&samples, &sc.blinders, &sc.timers).is_err());
}
