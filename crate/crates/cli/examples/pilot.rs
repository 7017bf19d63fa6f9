// Scratch pilot runs for budget/threshold calibration. Not part of the deliverable surface.
use std::time::Instant;

use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::landscape::*;
use shallow_landscape::linalg::Matrix;
use shallow_landscape::network::{quadratic_global_certificate, Dataset, NetworkParams};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;
use shallow_landscape_cli::commands::run_sweep_pooled;

fn criterion3(trials_per_seed: usize, seeds: u64, max_iters: u64) {
    let t0 = Instant::now();
    let (d, k, n) = (10usize, 20usize, 50usize);
    let mut ok = 0u32;
    let mut total = 0u32;
    let mut iters_sum = 0u64;
    let mut cert_ok = 0u32;
    for seed in 0..seeds {
        let data = generate_dataset(&GeneratorConfig::random_labels(d, n, 1000 + seed)).unwrap();
        let v: Vec<f64> = (0..k).map(|l| if l < 10 { 1.0 } else { -1.0 }).collect();
        for t in 0..trials_per_seed {
            let mut rng = CounterRng::new(2000 + seed, t as u64);
            let mut start = init_random(k, d, &mut rng);
            start.v_mut().copy_from_slice(&v);
            let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters, loss_tol: 1e-20, grad_tol: 3e-9, record_every: 0, stall_window: 4000 };
            let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, false, t as u64, InitKind::Random).unwrap();
            total += 1;
            iters_sum += rec.iters_used;
            if rec.final_loss <= 1e-8 {
                ok += 1;
                if quadratic_global_certificate(&rec.final_params, &data).unwrap().is_global { cert_ok += 1; }
            }
        }
    }
    println!("criterion3: {ok}/{total} converged (cert {cert_ok}), avg iters {}, wall {:?}", iters_sum / total as u64, t0.elapsed());
}

fn quad_k_sweep(weights: usize, inits: usize, seeds: Vec<u64>, max_iters: u64) {
    let t0 = Instant::now();
    let configs: Vec<SweepConfig> = seeds.iter().map(|&s| SweepConfig {
        n: 100, fixed: FixedDim::D(20), sweep: (1..=10).collect(), planted: true, teacher: TeacherWidth::MatchStudent, v_policy: OutputWeightPolicy::Rademacher,
        weights_per_point: weights, inits_per_weight: inits,
        activation: Activation::Quadratic, master_seed: s,
        gd: GdConfig { step: StepSize::AdaptiveCurvature, max_iters, loss_tol: 1e-10, grad_tol: 1e-8, record_every: 0, stall_window: 4000 },
        train_v: true,
    }).collect();
    let table = run_sweep_pooled(&configs).unwrap();
    for r in &table.rows { println!("  k={}: {}/{} = {:.2}", r.param, r.successes, r.trials, r.probability()); }
    println!("quad k-sweep crossing: {:?}, wall {:?}", table.logistic.as_ref().and_then(|f| f.crossing), t0.elapsed());
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(|s| s.as_str()) {
        Some("c3") => criterion3(40, 1, 250_000),
        Some("c3full") => criterion3(40, 5, 150_000),
        Some("quadk") => quad_k_sweep(5, 5, vec![1], 3000),
        Some("quadk2") => quad_k_sweep(10, 10, vec![1, 2], 5000),
        _ => eprintln!("pilot c3|c3full|quadk|quadk2"),
    }
}
