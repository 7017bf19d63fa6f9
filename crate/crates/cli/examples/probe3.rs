use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let k: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let max_iters: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(50_000);
    let (d, n) = (20usize, 100usize);
    let data = generate_dataset(&GeneratorConfig::planted(d, n, k, Activation::Quadratic, 99)).unwrap();
    for trial in 0..3u64 {
        let mut rng = CounterRng::new(5, trial);
        let start = init_random(k, d, &mut rng);
        let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters, loss_tol: 1e-10, grad_tol: 1e-8, record_every: max_iters / 10, stall_window: 0 };
        let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, true, trial, InitKind::Random).unwrap();
        print!("trial {trial}: ");
        for (t, l) in &rec.loss_trace { print!("{t}:{l:.2e} "); }
        println!("\n  -> {:?} loss {:.3e} iters {} step {:.2e}", rec.classification, rec.final_loss, rec.iters_used, rec.final_step);
    }
}
