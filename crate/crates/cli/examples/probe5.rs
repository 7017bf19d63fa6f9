use std::time::Instant;
use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let k: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let budget: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(500_000);
    let inits: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(12);
    let (d, n) = (20usize, 100usize);
    let mut ok = 0u32;
    let mut iters_ok = Vec::new();
    let mut iters_fail = Vec::new();
    let t0 = Instant::now();
    for wi in 0..3u64 {
        let data = generate_dataset(&GeneratorConfig::planted(d, n, k, Activation::Quadratic, 700 + wi)).unwrap();
        for t in 0..inits {
            let mut rng = CounterRng::new(90 + wi, t);
            let start = init_random(k, d, &mut rng);
            let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters: budget, loss_tol: 5e-7, grad_tol: 1e-8, record_every: 0, stall_window: 4000 };
            let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, true, t, InitKind::Random).unwrap();
            if rec.reached_global { ok += 1; iters_ok.push(rec.iters_used); }
            else { iters_fail.push((rec.iters_used, rec.final_loss, format!("{:?}", rec.classification))); }
        }
    }
    iters_ok.sort();
    println!("k={k} budget={budget}: {ok}/{} wall {:?}", 3 * inits, t0.elapsed());
    println!("  converged iters: {:?}", iters_ok);
    for (it, l, c) in &iters_fail { println!("  fail: iters {it} loss {l:.2e} {c}"); }
}
