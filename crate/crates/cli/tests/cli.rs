use std::fs;
use std::process::{Command, Output};

fn gflswing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gflswing"))
        .args(args)
        .env_remove("GFLSWING_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn blinders_prints_resistances() {
    let o = gflswing(&["blinders", "--x-total", "14.4", "--angles", "90,100,120"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for v in ["7.200", "6.042", "4.157"] {
        assert!(out.contains(v), "{out}");
    }
}

#[test]
fn timers_prints_cycles() {
    let o = gflswing(&["timers", "--angles", "90,100,120", "--f0", "50", "--fswing", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("1.389 cycles") && out.contains("4.167 cycles"), "{out}");
}

#[test]
fn run_quiet_preset_writes_empty_event_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let o = gflswing(&["run", "presets/case_i_a.toml", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out.join("events.jsonl")).unwrap(), "");
    for f in ["timeseries.csv", "trajectory.svg", "summary.json"] {
        assert!(out.join(f).is_file());
    }
}

#[test]
fn run_uses_output_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gflswing"))
        .args(["run", "maloperation"])
        .env("GFLSWING_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let events = fs::read_to_string(dir.path().join("maloperation/events.jsonl")).unwrap();
    let first: Vec<&str> = events.lines().take(2).collect();
    assert!(first[0].contains("PsbBlock") && first[1].contains("OstTrip"), "{events}");
    assert!(stdout(&o).contains("ost_maloperation"));
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let src = gflswing(&["presets", "--show", "case_i_a"]);
    let text = stdout(&src).replace("[3.93, 3.35, 2.27]", "[3.93, 2.0, 2.27]");
    fs::write(&bad, text).unwrap();
    let o = gflswing(&["run", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ordering"));

    assert_eq!(gflswing(&["run", "no_such_preset"]).status.code(), Some(2));
    assert_eq!(gflswing(&["blinders", "--bogus"]).status.code(), Some(2));
    assert_eq!(gflswing(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn solver_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("starved.toml");
    let text = stdout(&gflswing(&["presets", "--show", "case_ii_a"]))
        .replace("settle_s = 2.0", "settle_s = 2.0\nfp_max_iter = 1\nfp_tol = 1e-15");
    fs::write(&p, text).unwrap();
    let o = gflswing(&["run", p.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn locus_emits_csv() {
    let o = gflswing(&["locus", "--model", "gfl", "--zg", "0,0.7", "--from", "0", "--to", "90", "--step", "90"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["angle_deg,r_pu,x_pu", "0.000,1.000000,0.700000", "90.000,0.000000,-0.300000"]);

    let o = gflswing(&["locus", "--model", "sg", "--n", "1", "--from", "-20", "--to", "20", "--step", "10"]);
    let out = stdout(&o);
    // The coincident-source point at 0° is skipped; the rest lie on x = 0.35.
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",0.350000")), "{out}");
}

#[test]
fn replay_reproduces_run_events() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert!(gflswing(&["run", "maloperation", "--out", out.to_str().unwrap()]).status.success());
    let scenario = dir.path().join("maloperation.toml");
    fs::write(&scenario, stdout(&gflswing(&["presets", "--show", "maloperation"]))).unwrap();
    let o = gflswing(&[
        "replay",
        "--trajectory",
        out.join("timeseries.csv").to_str().unwrap(),
        "--relay",
        scenario.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let recorded = fs::read_to_string(out.join("events.jsonl")).unwrap();
    let kinds = |s: &str| -> Vec<String> {
        s.lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["kind"].to_string())
            .collect()
    };
    assert_eq!(kinds(&stdout(&o)), kinds(&recorded));
}

#[test]
fn sweep_prints_one_row_per_case() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.toml");
    fs::write(
        &grid,
        r#"
[[case]]
label = "as_is"

[[case]]
label = "broken"
set = { "relay.resistances_ohm" = [1.0, 2.0, 3.0] }

[[case]]
label = "opc"
set = { "control.mode" = "opc", "control.p_ref_pu" = 1.0 }
"#,
    )
    .unwrap();
    let o = gflswing(&["sweep", "--base", "case_i_a", "--grid", grid.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["label"], "as_is");
    assert_eq!(rows[0]["verdict"], "correct");
    assert!(rows[1]["error"].as_str().unwrap().contains("ordering"));
    assert_eq!(rows[2]["verdict"], "correct");
}

#[test]
fn presets_are_listed() {
    let out = stdout(&gflswing(&["presets"]));
    for n in ["maloperation", "case_i_a", "case_i_b", "case_ii_a", "case_ii_b", "case_iii", "case_iv"] {
        assert!(out.contains(n), "{out}");
    }
}
