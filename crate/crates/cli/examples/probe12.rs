use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let train_v: bool = args.get(1).map(|s| s == "trainv").unwrap_or(false);
    let tol: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5e-7);
    let (d, n) = (20usize, 100usize);
    for k in [6usize, 7, 8, 9] {
        let mut ok = 0;
        let mut camps = 0;
        for wi in 0..3u64 {
            let data = generate_dataset(&GeneratorConfig::planted(d, n, d, Activation::Quadratic, 800 + wi)).unwrap();
            for t in 0..8u64 {
                let mut rng = CounterRng::new(60 + wi, t);
                let start = init_random(k, d, &mut rng);
                let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters: 400_000, loss_tol: tol, grad_tol: 1e-8, record_every: 0, stall_window: 16_000 };
                let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, train_v, t, InitKind::Random).unwrap();
                let _ = train_v;
                if rec.reached_global { ok += 1; } else if rec.final_loss > 1e-2 { camps += 1; }
            }
        }
        println!("k={k} train_v={train_v} tol={tol:.0e}: {ok}/24 (camps {camps})");
    }
}
