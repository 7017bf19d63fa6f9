use std::time::Instant;
use shallow_landscape::activations::Activation;
use shallow_landscape::landscape::*;
use shallow_landscape::optimizer::*;
use shallow_landscape_cli::commands::run_sweep_pooled;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let t0 = Instant::now();
    let configs: Vec<SweepConfig> = (1..=seeds).map(|s| SweepConfig {
        n: 100, fixed: FixedDim::D(20), sweep: (1..=10).collect(), planted: true,
        teacher: TeacherWidth::InputRank, v_policy: OutputWeightPolicy::BalancedSigns,
        weights_per_point: 10, inits_per_weight: 10,
        activation: Activation::Quadratic, master_seed: s,
        gd: GdConfig { step: StepSize::AdaptiveCurvature, max_iters: 200_000, loss_tol: 5e-7, grad_tol: 1e-8, record_every: 0, stall_window: 8000 },
        train_v: false,
    }).collect();
    let table = run_sweep_pooled(&configs).unwrap();
    for r in &table.rows { println!("  k={}: {}/{} = {:.2}", r.param, r.successes, r.trials, r.probability()); }
    println!("crossing: {:?}  wall {:?}", table.logistic.as_ref().and_then(|f| f.crossing), t0.elapsed());
}
