use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).cloned().unwrap_or_else(|| "balanced".into());
    let (d, n) = (20usize, 100usize);
    for k in [5usize, 6, 7, 8] {
        let mut ok = 0;
        let mut fail_signs = Vec::new();
        for wi in 0..3u64 {
            let data = generate_dataset(&GeneratorConfig::planted(d, n, d, Activation::Quadratic, 800 + wi)).unwrap();
            for t in 0..8u64 {
                let mut rng = CounterRng::new(60 + wi, t);
                let mut start = init_random(k, d, &mut rng);
                if mode == "balanced" {
                    for (l, vl) in start.v_mut().iter_mut().enumerate() {
                        *vl = if l % 2 == 0 { 1.0 } else { -1.0 };
                    }
                }
                let plus = start.v().iter().filter(|v| **v > 0.0).count();
                let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters: 400_000, loss_tol: 5e-7, grad_tol: 1e-8, record_every: 0, stall_window: 16_000 };
                let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, false, t, InitKind::Random).unwrap();
                if rec.reached_global { ok += 1; } else { fail_signs.push((plus, k - plus, format!("{:.1e}", rec.final_loss))); }
            }
        }
        println!("k={k} {mode}: {ok}/24  failures(plus,minus,loss): {fail_signs:?}");
    }
}
