use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let budget: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(500_000);
    let stall: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8000);
    let (d, n) = (20usize, 100usize);
    for k in [7usize, 8] {
        for wi in 0..3u64 {
            let data = generate_dataset(&GeneratorConfig::planted(d, n, d, Activation::Quadratic, 800 + wi)).unwrap();
            for t in 0..8u64 {
                let mut rng = CounterRng::new(60 + wi, t);
                let start = init_random(k, d, &mut rng);
                let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters: budget, loss_tol: 5e-7, grad_tol: 1e-8, record_every: 0, stall_window: stall };
                let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, true, t, InitKind::Random).unwrap();
                if !rec.reached_global {
                    println!("k={k} w{wi} t{t}: {:?} loss {:.3e} iters {}", rec.classification, rec.final_loss, rec.iters_used);
                }
            }
        }
        println!("-- k={k} done");
    }
}
