use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let budget: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(250_000);
    let (d, n) = (20usize, 100usize);
    for k in [4usize, 5, 6, 7, 8, 10] {
        let mut ok = 0;
        let mut total = 0;
        let mut sum_iters = 0u64;
        let t0 = Instant::now();
        for wi in 0..3u64 {
            // Full-rank teacher: k* = d, all-one output weights.
            let data = generate_dataset(&GeneratorConfig::planted(d, n, d, Activation::Quadratic, 800 + wi)).unwrap();
            for t in 0..8u64 {
                let mut rng = CounterRng::new(60 + wi, t);
                let start = init_random(k, d, &mut rng);
                let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters: budget, loss_tol: 5e-7, grad_tol: 1e-8, record_every: 0, stall_window: 4000 };
                let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, true, t, InitKind::Random).unwrap();
                total += 1;
                sum_iters += rec.iters_used;
                if rec.reached_global { ok += 1; }
            }
        }
        println!("k={k}: {ok}/{total}  avg_iters {}  wall {:?}", sum_iters / total as u64, t0.elapsed());
    }
}
