use criterion::{criterion_group, criterion_main, Criterion};
use gflswing_bench::shortened;
use gflswing_core::io::preset;
use gflswing_core::{run, sweep};

fn runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("run");
    g.sample_size(10);
    for name in ["maloperation", "case_ii_b"] {
        let sc = preset(name).unwrap();
        g.bench_function(name, |b| b.iter(|| run(&sc).unwrap()));
    }
    let steady = shortened("case_i_a", 0.5);
    g.bench_function("steady 0.5 s", |b| b.iter(|| run(&steady).unwrap()));
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let base = preset("case_i_a").unwrap();
    let grid: Vec<f64> = (0..8).map(|k| 12.0 + k as f64).collect();
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("line1 inductance x8", |b| {
        b.iter(|| {
            sweep(&base, &grid, |sc, &l1| {
                let mut sc = sc.clone();
                sc.network.z_l1.im = sc.base.reactance_ohm_from_mh(l1) / sc.base.z_base();
                Ok(sc)
            })
        })
    });
    g.finish();
}

criterion_group!(benches, runs, sweeps);
criterion_main!(benches);
