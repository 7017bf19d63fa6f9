use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{generate_dataset, GeneratorConfig};
use shallow_landscape::optimizer::*;
use shallow_landscape::rng::CounterRng;

fn main() {
    let (n, k) = (100usize, 5usize);
    for d in [22usize, 24, 26] {
        let mut iters: Vec<(u64, bool)> = Vec::new();
        for wi in 0..2u64 {
            let data = generate_dataset(&GeneratorConfig::planted(d, n, d, Activation::Quadratic, 900 + wi)).unwrap();
            for t in 0..5u64 {
                let mut rng = CounterRng::new(70 + wi, t);
                let mut start = init_random(k, d, &mut rng);
                for (l, vl) in start.v_mut().iter_mut().enumerate() { *vl = if l % 2 == 0 { 1.0 } else { -1.0 }; }
                let cfg = GdConfig { step: StepSize::AdaptiveCurvature, max_iters: 400_000, loss_tol: 5e-7, grad_tol: 1e-8, record_every: 0, stall_window: 8000 };
                let rec = gd_run(&start, &data, &Activation::Quadratic, &cfg, false, t, InitKind::Random).unwrap();
                iters.push((rec.iters_used, rec.reached_global));
            }
        }
        println!("d={d}: {iters:?}");
    }
}
