//! Runs bundled presets and prints their headline numbers.
//!
//! `cargo run --release --example run_preset -- case_iii maloperation`

use gflswing_core::io::{preset, preset_names};
use gflswing_core::{run, RunSummary};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<String> = if args.is_empty() {
        preset_names().map(String::from).collect()
    } else {
        args
    };
    for name in names {
        let sc = match preset(&name) {
            Ok(sc) => sc,
            Err(e) => {
                eprintln!("{name}: {e}");
                continue;
            }
        };
        let t0 = std::time::Instant::now();
        match run(&sc) {
            Ok(res) => {
                let s = RunSummary::of(&res);
                let events: Vec<String> = s.events.iter().map(|e| format!("{}@{:.4}", e.kind, e.t)).collect();
                println!(
                    "{name:<10} verdict={:<16} los={:?} peak δPLL={:.1}° δS={:.1}° δPLL+φ={:.1}° Vmin={:.3} [{}] {:.2}s",
                    s.verdict.as_str(),
                    s.los_t,
                    s.peak_delta_pll_deg,
                    s.peak_delta_s_deg,
                    s.peak_angle_sum_deg,
                    s.min_v_pcc_pu,
                    events.join(" "),
                    t0.elapsed().as_secs_f64()
                );
            }
            Err(e) => println!("{name}: run failed: {e}"),
        }
    }
}
