//! Run outputs: time series, relay events, summary and an R-X plot.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{Error, Result};
use crate::sim::{RunSummary, SimResult, StepRecord};

pub const TIMESERIES_HEADER: &str = "t_s,v_pcc_pu,delta_pcc_deg,delta_pll_deg,delta_s_deg,phi_deg,angle_sum_deg,ig_pu,f_pll_hz,z_re_ohm,z_im_ohm,region,psb,fault_decl,ost";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunArtifacts {
    pub timeseries: PathBuf,
    pub events: PathBuf,
    pub trajectory: PathBuf,
    pub summary: PathBuf,
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        "NaN".into()
    }
}

fn row(r: &StepRecord) -> String {
    let b = |x: bool| if x { "1" } else { "0" };
    format!(
        "{:.6},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.t,
        num(r.v_pcc),
        num(r.delta_pcc),
        num(r.delta_pll),
        num(r.delta_s),
        num(r.phi),
        num(r.angle_sum),
        num(r.i_g),
        num(r.f_pll),
        num(r.z.re),
        num(r.z.im),
        r.region.map_or("", |g| g.as_str()),
        b(r.psb),
        b(r.fault_decl),
        b(r.ost),
    )
}

pub fn timeseries_csv(res: &SimResult) -> String {
    let mut s = String::with_capacity(160 * (res.records.len() + 1));
    s.push_str(TIMESERIES_HEADER);
    s.push('\n');
    for r in &res.records {
        s.push_str(&row(r));
    }
    s
}

pub fn events_jsonl(res: &SimResult) -> String {
    res.relay_events
        .iter()
        .map(|e| serde_json::to_string(e).expect("event serializes") + "\n")
        .collect()
}

pub fn summary_json(res: &SimResult) -> String {
    let sc = &res.scenario;
    let zb = sc.base.z_base();
    let b = &sc.blinders;
    let blinder = |r: f64| json!({ "ohm": r, "pu": r / zb });
    let v = json!({
        "summary": RunSummary::of(res),
        "z_base_ohm": zb,
        "blinders": {
            "outer": blinder(b.r_outer),
            "middle": blinder(b.r_middle),
            "inner": blinder(b.r_inner),
            "tilt_deg": b.tilt,
        },
        "timers": {
            "psb_s": sc.timers.dt_psb,
            "ost_s": sc.timers.dt_ost,
            "psb_cycles": sc.timers.psb_cycles(),
            "ost_cycles": sc.timers.ost_cycles(),
        },
        "stats": res.stats,
    });
    serde_json::to_string_pretty(&v).expect("summary serializes") + "\n"
}

/// Plot window in ohms: (r_min, r_max, x_min, x_max).
fn view(res: &SimResult, center: (f64, f64), radius: f64) -> (f64, f64, f64, f64) {
    let b = &res.scenario.blinders;
    let reach = b.r_outer * 2.5;
    let (mut r0, mut r1) = (-reach, reach);
    let (mut x0, mut x1) = (-reach, reach);
    if radius.is_finite() && radius > 0.0 && radius < 1e3 {
        r0 = r0.min(center.0 - radius);
        r1 = r1.max(center.0 + radius);
        x0 = x0.min(center.1 - radius);
        x1 = x1.max(center.1 + radius);
    }
    let pad = 0.05 * (r1 - r0).max(x1 - x0);
    (r0 - pad, r1 + pad, x0 - pad, x1 + pad)
}

pub fn trajectory_svg(res: &SimResult) -> String {
    const W: f64 = 640.0;
    let sc = &res.scenario;
    let zb = sc.base.z_base();
    let zg = sc.network.z_g().scale(zb);
    let ig = res.records.last().map_or(0.0, |r| r.i_g);
    let radius = if ig > 0.0 { sc.network.e_r / ig * zb } else { f64::NAN };
    let (r0, r1, x0, x1) = view(res, (zg.re, zg.im), radius);
    let span = (r1 - r0).max(x1 - x0);
    let k = W / span;
    let px = |r: f64| (r - r0) * k;
    let py = |x: f64| W - (x - x0) * k;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">"#
    );
    let _ = writeln!(s, r#"<title>{} impedance trajectory (ohm)</title>"#, sc.name);
    let _ = writeln!(s, r##"<rect width="{W}" height="{W}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="0" x2="{:.2}" y2="{W}" stroke="#999999" stroke-width="0.5"/>"##,
        px(0.0),
        px(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{:.2}" x2="{W}" y2="{:.2}" stroke="#999999" stroke-width="0.5"/>"##,
        py(0.0),
        py(0.0)
    );

    // Blinders are lines at signed distance ±R along the unit normal.
    let b = &sc.blinders;
    let tilt = b.tilt.to_radians();
    let (dx, dy) = (tilt.cos(), tilt.sin());
    let (nx, ny) = (dy, -dx);
    for (r, colour) in [(b.r_outer, "#2a7ab0"), (b.r_middle, "#e08a00"), (b.r_inner, "#c0392b")] {
        for side in [1.0, -1.0] {
            let (cx, cy) = (side * r * nx, side * r * ny);
            let l = 2.0 * span;
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1"/>"#,
                px(cx - l * dx),
                py(cy - l * dy),
                px(cx + l * dx),
                py(cy + l * dy)
            );
        }
    }

    if radius.is_finite() && radius < 1e3 {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#7f7f7f" stroke-dasharray="4 3"/>"##,
            px(zg.re),
            py(zg.im),
            radius * k
        );
    }

    // Only samples the relay saw; decimated to keep the file small.
    let seen: Vec<&StepRecord> = res.records.iter().filter(|r| r.region.is_some()).collect();
    let stride = (seen.len() / 4000).max(1);
    let mut pts = String::new();
    for r in seen.iter().step_by(stride) {
        let (x, y) = (px(r.z.re).clamp(-W, 2.0 * W), py(r.z.im).clamp(-W, 2.0 * W));
        let _ = write!(pts, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#111111" stroke-width="1.2"/>"##,
        pts.trim_end()
    );
    s.push_str("</svg>\n");
    s
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Writes the four run files into `out_dir`, creating it if needed.
pub fn write_artifacts(res: &SimResult, out_dir: &Path) -> Result<RunArtifacts> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let a = RunArtifacts {
        timeseries: out_dir.join("timeseries.csv"),
        events: out_dir.join("events.jsonl"),
        trajectory: out_dir.join("trajectory.svg"),
        summary: out_dir.join("summary.json"),
    };
    write(&a.timeseries, &timeseries_csv(res))?;
    write(&a.events, &events_jsonl(res))?;
    write(&a.trajectory, &trajectory_svg(res))?;
    write(&a.summary, &summary_json(res))?;
    Ok(a)
}
