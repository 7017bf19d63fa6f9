use std::time::Instant;
use shallow_landscape::activations::Activation;
use shallow_landscape::landscape::*;
use shallow_landscape::optimizer::*;
use shallow_landscape_cli::commands::run_sweep_pooled;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let tol: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5e-7);
    let weights: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    let t0 = Instant::now();
    let cfg = SweepConfig {
        n: 100, fixed: FixedDim::K(5), sweep: vec![12, 16, 20, 22, 24, 26, 30, 34, 38], planted: true,
        teacher: TeacherWidth::InputRank, v_policy: OutputWeightPolicy::BalancedSigns,
        weights_per_point: weights, inits_per_weight: 10,
        activation: Activation::Quadratic, master_seed: 11,
        gd: GdConfig { step: StepSize::AdaptiveCurvature, max_iters: 120_000, loss_tol: tol, grad_tol: 1e-8, record_every: 0, stall_window: 8000 },
        train_v: false,
    };
    let table = run_sweep_pooled(&[cfg]).unwrap();
    for r in &table.rows { println!("  d={}: {}/{} = {:.2}", r.param, r.successes, r.trials, r.probability()); }
    println!("crossing: {:?}  wall {:?}", table.logistic.as_ref().and_then(|f| f.crossing), t0.elapsed());
}
