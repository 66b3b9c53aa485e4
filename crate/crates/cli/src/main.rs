//! `gflswing`: run power-swing scenarios and inspect relay settings.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gflswing_core::io::{
    load_grid, load_relay_settings, preset_names, preset_source, read_trajectory, replay, resolve_scenario, run_grid,
    write_artifacts,
};
use gflswing_core::relay::BlinderAngles;
use gflswing_core::{
    alpha0_of, predict_locus_gfl, predict_locus_opc, run, sg_apparent_impedance, timer_settings, BlinderSettings,
    Error, Phasor, RunSummary,
};

#[derive(Parser)]
#[command(name = "gflswing", version, about = "Power-swing simulator for grid-following converters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or bundled preset and write its artifacts.
    Run {
        /// Path to a scenario TOML, or a preset name.
        scenario: String,
        /// Output directory (defaults to `<GFLSWING_OUT or out>/<scenario name>`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "GFLSWING_OUT", default_value = "out", hide_env_values = true)]
        out_root: PathBuf,
    },
    /// Blinder resistances from the transfer reactance and swing angles.
    Blinders {
        #[arg(long = "x-total", value_name = "OHM")]
        x_total: f64,
        #[arg(long, value_delimiter = ',', value_name = "DEG,DEG,DEG")]
        angles: Vec<f64>,
        /// Also print per-unit values on this impedance base.
        #[arg(long = "z-base", value_name = "OHM")]
        z_base: Option<f64>,
    },
    /// PSB and OST timer thresholds for a given slip frequency.
    Timers {
        #[arg(long, value_delimiter = ',', value_name = "DEG,DEG,DEG")]
        angles: Vec<f64>,
        #[arg(long, default_value_t = 50.0)]
        f0: f64,
        #[arg(long)]
        fswing: f64,
    },
    /// Predicted impedance locus as CSV (`angle_deg,r,x`).
    Locus {
        #[arg(long, value_enum)]
        model: LocusModel,
        /// Remote source magnitude, p.u. (gfl, opc).
        #[arg(long = "e-r", default_value_t = 1.0)]
        e_r: f64,
        /// Converter current magnitude, p.u. (gfl, opc).
        #[arg(long, default_value_t = 1.0)]
        ig: f64,
        /// Grid impedance behind the relay as `r,x` p.u. (gfl, opc).
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.7])]
        zg: Vec<f64>,
        #[arg(long = "p-ref", default_value_t = 1.0)]
        p_ref: f64,
        #[arg(long = "q-ref", default_value_t = 0.0)]
        q_ref: f64,
        /// Source magnitude ratio (sg).
        #[arg(long, default_value_t = 1.0)]
        n: f64,
        /// Sending-source impedance `r,x` p.u. (sg).
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.2])]
        zs: Vec<f64>,
        /// Total impedance between the sources `r,x` p.u. (sg).
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.1])]
        zt: Vec<f64>,
        #[arg(long, default_value_t = -180.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 180.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 5.0)]
        step: f64,
        /// Scale the output to ohms on this impedance base.
        #[arg(long = "z-base", value_name = "OHM")]
        z_base: Option<f64>,
    },
    /// Feed a recorded impedance trajectory through the relay.
    Replay {
        /// CSV with `t_s,z_re_ohm,z_im_ohm` columns (e.g. a run's timeseries.csv).
        #[arg(long)]
        trajectory: PathBuf,
        /// Scenario file or a file with `[relay]` and `[timers]` sections.
        #[arg(long)]
        relay: PathBuf,
    },
    /// Run a grid of overrides against a base scenario, in parallel.
    Sweep {
        #[arg(long)]
        base: String,
        #[arg(long)]
        grid: PathBuf,
    },
    /// List the bundled presets.
    Presets {
        /// Print the TOML of one preset.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LocusModel {
    Gfl,
    Opc,
    Sg,
}

/// Exit code for a failure: 2 for bad input, 3 when the solver gives up.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence { .. } | Error::ZeroCurrent(_)) => 3,
        _ => 2,
    }
}

fn stdout() -> std::io::StdoutLock<'static> {
    std::io::stdout().lock()
}

fn arity(flag: &str, v: &[f64], n: usize) -> anyhow::Result<()> {
    if v.len() != n {
        return Err(Error::Invalid {
            field: flag.into(),
            reason: format!("expected {n} comma-separated values, got {}", v.len()),
        }
        .into());
    }
    Ok(())
}

fn pair(flag: &str, v: &[f64]) -> anyhow::Result<Phasor> {
    arity(flag, v, 2)?;
    Ok(Phasor::new(v[0], v[1]))
}

fn angles(v: &[f64]) -> anyhow::Result<BlinderAngles> {
    arity("--angles", v, 3)?;
    Ok(BlinderAngles {
        outer: v[0],
        middle: v[1],
        inner: v[2],
    })
}

fn cmd_run(scenario: &str, out: Option<PathBuf>, out_root: &Path) -> anyhow::Result<()> {
    let sc = resolve_scenario(scenario)?;
    let dir = out.unwrap_or_else(|| out_root.join(&sc.name));
    let res = run(&sc)?;
    write_artifacts(&res, &dir)?;
    let s = RunSummary::of(&res);
    writeln!(stdout(), "scenario   {}", s.scenario)?;
    writeln!(stdout(), "verdict    {}", s.verdict)?;
    writeln!(stdout(), "los        {}", s.los_t.map_or("none".into(), |t| format!("{t:.4} s")))?;
    for e in &s.events {
        writeln!(stdout(), "event      {:.4} s  {}", e.t, e.kind)?;
    }
    writeln!(stdout(), "peak δ_PLL {:.2}°", s.peak_delta_pll_deg)?;
    writeln!(stdout(), "peak δ_S   {:.2}°", s.peak_delta_s_deg)?;
    writeln!(stdout(), "output     {}", dir.display())?;
    Ok(())
}

fn cmd_blinders(x_total: f64, a: &[f64], z_base: Option<f64>) -> anyhow::Result<()> {
    let b = BlinderSettings::from_angles(x_total, angles(a)?)?;
    for (name, r) in [("outer", b.r_outer), ("middle", b.r_middle), ("inner", b.r_inner)] {
        match z_base {
            Some(zb) => writeln!(stdout(), "{name:<6} {r:.3} Ω ({:.4} p.u.)", r / zb)?,
            None => writeln!(stdout(), "{name:<6} {r:.3} Ω")?,
        }
    }
    Ok(())
}

fn cmd_timers(a: &[f64], f0: f64, fswing: f64) -> anyhow::Result<()> {
    let a = angles(a)?;
    let t = timer_settings(a.outer, a.middle, a.inner, f0, fswing)?;
    t.validate()?;
    writeln!(stdout(), "psb {:.3} cycles ({:.5} s)", t.psb_cycles(), t.dt_psb)?;
    writeln!(stdout(), "ost {:.3} cycles ({:.5} s)", t.ost_cycles(), t.dt_ost)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_locus(
    model: LocusModel,
    e_r: f64,
    ig: f64,
    zg: Phasor,
    p_ref: f64,
    q_ref: f64,
    n: f64,
    zs: Phasor,
    zt: Phasor,
    from: f64,
    to: f64,
    step: f64,
    z_base: Option<f64>,
) -> anyhow::Result<()> {
    if !(step > 0.0) || !(to >= from) {
        return Err(Error::Invalid {
            field: "angle range".into(),
            reason: "need --step > 0 and --to >= --from".into(),
        }
        .into());
    }
    if matches!(model, LocusModel::Gfl | LocusModel::Opc) && !(ig > 0.0) {
        return Err(Error::Invalid {
            field: "ig".into(),
            reason: "must be > 0".into(),
        }
        .into());
    }
    let alpha0 = match model {
        LocusModel::Opc => alpha0_of(p_ref, q_ref)?,
        _ => 0.0,
    };
    let scale = z_base.unwrap_or(1.0);
    let unit = if z_base.is_some() { "ohm" } else { "pu" };
    let mut w = stdout();
    writeln!(w, "angle_deg,r_{unit},x_{unit}")?;
    let count = ((to - from) / step + 1e-9).floor() as usize;
    for k in 0..=count {
        let a = from + k as f64 * step;
        let z = match model {
            LocusModel::Gfl => Some(predict_locus_gfl(e_r, ig, zg, a)),
            LocusModel::Opc => Some(predict_locus_opc(e_r, ig, zg, a, alpha0)),
            // The two sources coincide at δ = 0 for n = 1; skip that point.
            LocusModel::Sg => sg_apparent_impedance(n, a, zs, zt).ok(),
        };
        if let Some(z) = z {
            let z = z.scale(scale);
            writeln!(w, "{a:.3},{:.6},{:.6}", z.re, z.im)?;
        }
    }
    Ok(())
}

fn cmd_replay(trajectory: &Path, relay: &Path) -> anyhow::Result<()> {
    let samples = read_trajectory(trajectory)?;
    let (b, t) = load_relay_settings(relay)?;
    for e in replay(&samples, &b, &t)? {
        writeln!(stdout(), "{}", serde_json::to_string(&e)?)?;
    }
    Ok(())
}

fn cmd_sweep(base: &str, grid: &Path) -> anyhow::Result<()> {
    let base = resolve_scenario(base)?;
    let grid = load_grid(grid)?;
    for row in run_grid(&base, &grid) {
        let line = match &row.outcome {
            Ok(s) => serde_json::json!({
                "label": row.input.label,
                "verdict": s.verdict,
                "los_t": s.los_t,
                "events": s.events,
                "peak_delta_pll_deg": s.peak_delta_pll_deg,
            }),
            Err(e) => serde_json::json!({ "label": row.input.label, "error": e }),
        };
        writeln!(stdout(), "{line}")?;
    }
    Ok(())
}

fn cmd_presets(show: Option<String>) -> anyhow::Result<()> {
    if let Some(name) = show {
        write!(stdout(), "{}", preset_source(&name)?)?;
        return Ok(());
    }
    for name in preset_names() {
        let src = preset_source(name)?;
        let about = src.lines().next().and_then(|l| l.strip_prefix("# ")).unwrap_or("");
        writeln!(stdout(), "{name:<13} {about}")?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { scenario, out, out_root } => cmd_run(&scenario, out, &out_root),
        Command::Blinders { x_total, angles, z_base } => cmd_blinders(x_total, &angles, z_base),
        Command::Timers { angles, f0, fswing } => cmd_timers(&angles, f0, fswing),
        Command::Locus {
            model,
            e_r,
            ig,
            zg,
            p_ref,
            q_ref,
            n,
            zs,
            zt,
            from,
            to,
            step,
            z_base,
        } => cmd_locus(
            model,
            e_r,
            ig,
            pair("--zg", &zg)?,
            p_ref,
            q_ref,
            n,
            pair("--zs", &zs)?,
            pair("--zt", &zt)?,
            from,
            to,
            step,
            z_base,
        ),
        Command::Replay { trajectory, relay } => cmd_replay(&trajectory, &relay),
        Command::Sweep { base, grid } => cmd_sweep(&base, &grid),
        Command::Presets { show } => cmd_presets(show),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe (e.g. `| head`) is not an error.
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
