//! Implementations behind the CLI subcommands.

use std::path::{Path, PathBuf};

use shallow_landscape::activations::Activation;
use shallow_landscape::gen::{self, GeneratorConfig, LabelKind, VStarKind, WeightScheme};
use shallow_landscape::landscape::{
    self, deterministic_full_rank_inputs, jacobian_spectrum_check, logistic_fit,
    quartic_moment_check, sample_covariance_check, self_khatri_rao_rank, ExperimentTable,
    LandscapeError, SweepConfig,
};
use shallow_landscape::linalg::Matrix;
use shallow_landscape::network::{
    grad_w, loss_and_residuals, negative_curvature_direction, quadratic_global_certificate,
    NegativeCurvature,
};
use shallow_landscape::optimizer::{
    calibrate_smoothness, classify_point, gd_run, init_near_planted, init_random,
    near_planted_radii, CalibrationConstants, GdConfig, HessianScope, InitKind,
    DEFAULT_SMOOTHNESS_C,
};
use shallow_landscape::rng::CounterRng;

use crate::config::SweepConfigFile;
use crate::formats::{self, FormatError};
use crate::manifest::write_manifest;
use crate::pool::run_indexed;

#[derive(Debug)]
pub enum CliError {
    Format(FormatError),
    Config(String),
    Landscape(LandscapeError),
    Other(String),
    /// A verification command ran to completion and the checked property
    /// failed.
    CheckFailed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Format(e) => write!(f, "{e}"),
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Landscape(e) => write!(f, "{e}"),
            CliError::Other(msg) => write!(f, "{msg}"),
            CliError::CheckFailed(msg) => write!(f, "check failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e)
    }
}

impl From<LandscapeError> for CliError {
    fn from(e: LandscapeError) -> Self {
        CliError::Landscape(e)
    }
}

fn other(e: impl std::fmt::Display) -> CliError {
    CliError::Other(e.to_string())
}

pub fn parse_v_star(s: &str, k: usize) -> Result<VStarKind, CliError> {
    if s == "one" {
        return Ok(VStarKind::AllOne);
    }
    if let Some(rest) = s.strip_prefix("nu:") {
        let nu: f64 = rest.parse().map_err(|_| CliError::Config(format!("bad nu in '{s}'")))?;
        return Ok(VStarKind::AllNu(nu));
    }
    if let Some(rest) = s.strip_prefix("mixed:") {
        let mut parts = rest.splitn(2, ',');
        let plus: usize = parts
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| CliError::Config(format!("bad mixed counts in '{s}'")))?;
        let minus: usize = parts
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| CliError::Config(format!("bad mixed counts in '{s}'")))?;
        if plus + minus != k {
            return Err(CliError::Config(format!("mixed:{plus},{minus} must sum to k = {k}")));
        }
        return Ok(VStarKind::MixedSign { plus, minus });
    }
    Err(CliError::Config(format!("unknown v-star pattern '{s}' (one | nu:x | mixed:p,m)")))
}

pub fn parse_weight_scheme(s: &str) -> Result<WeightScheme, CliError> {
    if s == "gaussian" {
        return Ok(WeightScheme::GaussianOverSqrtD);
    }
    if let Some(rest) = s.strip_prefix("bounded:") {
        let vals: Vec<f64> = rest
            .split(',')
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Config(format!("bad bounds in '{s}'")))?;
        if vals.len() != 4 {
            return Err(CliError::Config("bounded scheme needs vmin,vmax,wmin,wmax".into()));
        }
        return Ok(WeightScheme::Bounded {
            v_min: vals[0],
            v_max: vals[1],
            w_min: vals[2],
            w_max: vals[3],
        });
    }
    Err(CliError::Config(format!("unknown weight scheme '{s}' (gaussian | bounded:a,b,c,d)")))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_gen_data(
    d: usize,
    n: usize,
    k: usize,
    activation: &str,
    labels: &str,
    v_star: &str,
    weight_scheme: &str,
    seed: u64,
    out: &Path,
    force: bool,
) -> Result<(), CliError> {
    let label_kind = match labels {
        "planted" => LabelKind::Planted,
        "random" => LabelKind::GaussianRandom,
        _ => return Err(CliError::Config(format!("labels must be planted|random, got '{labels}'"))),
    };
    let cfg = GeneratorConfig {
        d,
        n,
        k,
        label_kind,
        activation: Activation::parse(activation).map_err(other)?,
        weight_scheme: parse_weight_scheme(weight_scheme)?,
        v_star: parse_v_star(v_star, k)?,
        master_seed: seed,
    };
    let data = gen::generate_dataset(&cfg).map_err(other)?;
    formats::save_dataset(out, &data, force)?;
    let config_text = format!(
        "gen-data d={d} n={n} k={k} activation={activation} labels={labels} v_star={v_star} scheme={weight_scheme} seed={seed}"
    );
    let mut outputs: Vec<PathBuf> = vec![out.to_path_buf()];
    if data.planted().is_some() {
        outputs.push(formats::planted_sibling(out));
    }
    let refs: Vec<&Path> = outputs.iter().map(|p| p.as_path()).collect();
    write_manifest("gen-data", &config_text, seed, &refs, force)?;
    eprintln!("wrote {} ({} samples, d = {d})", out.display(), data.n());
    Ok(())
}

pub struct TrainArgs<'a> {
    pub data: &'a Path,
    pub activation: Option<&'a str>,
    pub alpha: &'a str,
    pub max_iters: u64,
    pub loss_tol: f64,
    pub grad_tol: f64,
    pub record_every: u64,
    pub seed: u64,
    pub train_v: bool,
    pub init: &'a str,
    pub init_scale: f64,
    pub k: Option<usize>,
    pub trace: Option<&'a Path>,
    pub out: Option<&'a Path>,
    pub force: bool,
}

pub fn cmd_train(args: &TrainArgs) -> Result<(), CliError> {
    let data = formats::load_dataset(args.data)?;
    let activation = match args.activation {
        Some(label) => Activation::parse(label).map_err(other)?,
        None => {
            data.planted()
                .map(|p| p.activation)
                .ok_or_else(|| CliError::Config("--activation required (dataset is not planted)".into()))?
        }
    };
    let step = crate::config::parse_step(args.alpha).map_err(CliError::Config)?;
    let cfg = GdConfig {
        step,
        max_iters: args.max_iters,
        loss_tol: args.loss_tol,
        grad_tol: args.grad_tol,
        record_every: args.record_every,
        stall_window: 0,
    };

    let mut rng = CounterRng::new(args.seed, 0);
    let (start, init_kind) = match args.init {
        "random" => {
            let k = args
                .k
                .or_else(|| data.planted().map(|p| p.params.k()))
                .ok_or_else(|| CliError::Config("--k required for random init on non-planted data".into()))?;
            (init_random(k, data.d(), &mut rng), InitKind::Random)
        }
        "near-planted" => {
            let planted = data
                .planted()
                .ok_or_else(|| CliError::Config("near-planted init needs planted provenance".into()))?;
            let class = planted.activation.classify(&[0.5, 1.0, 2.0]).map_err(other)?;
            let cal = CalibrationConstants { c_init: args.init_scale, ..Default::default() };
            let (r_w, r_v) =
                near_planted_radii(&planted.params, data.n(), class, &cal).map_err(other)?;
            (init_near_planted(&planted.params, r_w, r_v, &mut rng), InitKind::NearPlanted)
        }
        path => (formats::load_params(Path::new(path))?, InitKind::Custom),
    };

    let record = gd_run(&start, &data, &activation, &cfg, args.train_v, args.seed, init_kind)
        .map_err(other)?;
    let jsonl = formats::trial_record_to_jsonl(&record);
    match args.out {
        Some(path) => {
            formats::write_output(path, &jsonl, args.force)?;
            let config_text = format!(
                "train data={} activation={activation} alpha={} seed={} train_v={}",
                args.data.display(),
                args.alpha,
                args.seed,
                args.train_v
            );
            write_manifest("train", &config_text, args.seed, &[path], args.force)?;
        }
        None => print!("{jsonl}"),
    }
    if let Some(trace_path) = args.trace {
        formats::write_output(trace_path, &formats::trace_to_csv(&record), args.force)?;
    }
    Ok(())
}

/// Run a sweep config (pooling its master seeds) on the worker pool.
pub fn run_sweep_pooled(configs: &[SweepConfig]) -> Result<ExperimentTable, CliError> {
    let mut per_seed = Vec::with_capacity(configs.len());
    for cfg in configs {
        let cells = cfg.sweep.len() * cfg.weights_per_point;
        let results = run_indexed(cells, |idx| {
            let point = idx / cfg.weights_per_point;
            let weight = idx % cfg.weights_per_point;
            landscape::run_weight_cell(cfg, point, weight)
        })?;
        per_seed.push(landscape::aggregate_cells(cfg, &results));
    }
    let mut table = ExperimentTable::merge(&per_seed)?;
    table.logistic = logistic_fit(&table.fit_points()).ok();
    Ok(table)
}

pub fn cmd_landscape_sweep(
    config_path: &Path,
    out: &Path,
    dat: Option<&Path>,
    fit_out: Option<&Path>,
    force: bool,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path).map_err(FormatError::from)?;
    let file: SweepConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", config_path.display())))?;
    let configs = file.to_core().map_err(CliError::Config)?;
    let table = run_sweep_pooled(&configs)?;

    formats::write_output(out, &formats::table_to_csv(&table), force)?;
    let mut outputs: Vec<&Path> = vec![out];
    if let Some(dat_path) = dat {
        formats::write_output(dat_path, &formats::table_to_dat(&table), force)?;
        outputs.push(dat_path);
    }
    if let Some(fit_path) = fit_out {
        if let Some(fit) = &table.logistic {
            formats::write_output(fit_path, &formats::fit_to_json(fit), force)?;
            outputs.push(fit_path);
        }
    }
    write_manifest("landscape sweep", &text, file.master_seeds[0], &outputs, force)?;
    for row in &table.rows {
        eprintln!("param {:>4}: {}/{} = {:.3}", row.param, row.successes, row.trials, row.probability());
    }
    if let Some(fit) = &table.logistic {
        match fit.crossing {
            Some(c) => eprintln!("logistic crossing at {c:.3}"),
            None => eprintln!("no logistic crossing (flags {:?})", fit.flags),
        }
    }
    Ok(())
}

pub fn cmd_fit_logistic(results: &Path, out: Option<&Path>, force: bool) -> Result<(), CliError> {
    let text = std::fs::read_to_string(results).map_err(FormatError::from)?;
    let table = formats::table_from_csv(results, &text)?;
    let fit = logistic_fit(&table.fit_points())?;
    let json = formats::fit_to_json(&fit);
    match out {
        Some(path) => {
            formats::write_output(path, &json, force)?;
            write_manifest("fit-logistic", &text, 0, &[path], force)?;
        }
        None => print!("{json}"),
    }
    Ok(())
}

/// Certificate verification of weights against a dataset.
pub fn cmd_verify(data_path: &Path, params_path: &Path, activation: &str) -> Result<(), CliError> {
    let data = formats::load_dataset(data_path)?;
    let params = formats::load_params(params_path)?;
    let act = Activation::parse(activation).map_err(other)?;
    let eval = loss_and_residuals(&params, &data, &act).map_err(other)?;
    let grad_norm = grad_w(&params, &data, &act).map_err(other)?.frobenius_norm();
    if matches!(act, Activation::Quadratic) {
        let cert = quadratic_global_certificate(&params, &data).map_err(other)?;
        let neg = negative_curvature_direction(&params, &data).map_err(other)?;
        let (has_descent, curvature) = match &neg {
            NegativeCurvature::Direction { curvature, .. } => (true, *curvature),
            NegativeCurvature::None { .. } => (false, 0.0),
        };
        println!(
            "{{\"loss\":{},\"grad_w_norm\":{},\"is_global\":{},\"residual_matrix_norm\":{},\"negative_curvature\":{},\"curvature\":{}}}",
            eval.loss, grad_norm, cert.is_global, cert.residual_matrix_norm, has_descent, curvature
        );
    } else {
        let report =
            classify_point(&params, &data, &act, grad_norm.max(1e-12), 1e-6, HessianScope::Joint)
                .map_err(other)?;
        println!(
            "{{\"loss\":{},\"grad_norm\":{},\"min_hessian_eig\":{},\"approx_local_min\":{}}}",
            report.loss, report.grad_norm, report.min_hessian_eig, report.is_approx_local_min
        );
    }
    Ok(())
}

/// Thresholds frozen from the calibration command; regression-tested by the
/// acceptance suite.
pub mod calibrated {
    /// Floor on `σ_min(J)/(σ_min(W)·d)` at `(d, k, n) = (8, 8, 32)`,
    /// softplus(10), 50 trials.
    pub const SPECTRUM_LOWER_FLOOR: f64 = 0.05;
    /// Ceiling on `σ_max(J)/(σ_max(W)·√(nk))` in the same setting.
    pub const SPECTRUM_UPPER_CEILING: f64 = 3.0;
    /// Max allowed spread (max/min) of the upper ratio across trials.
    pub const SPECTRUM_UPPER_SPREAD: f64 = 10.0;
    /// Quartic-moment deviation ceiling at `n = 50·d·ln d`, `d = 6`.
    pub const QUARTIC_OP_RATIO_MAX: f64 = 0.5;
    /// Sample-covariance deviation ceiling at `d = 10`, `n = 4000`.
    pub const COVARIANCE_OP_MAX: f64 = 0.25;
}

pub fn cmd_verify_xkrx(d: usize, trials: usize, seed: u64) -> Result<(), CliError> {
    // Deterministic construction over the full range, then random draws.
    for dd in 1..=d.min(8) {
        for n in 1..=dd * (dd + 1) / 2 {
            let x = deterministic_full_rank_inputs(dd, n)?;
            let check = self_khatri_rao_rank(&x)?;
            if !check.full_rank {
                return Err(CliError::CheckFailed(format!(
                    "deterministic inputs d = {dd}, n = {n}: sigma_min {}",
                    check.sigma_min
                )));
            }
        }
    }
    let mut rng = CounterRng::new(seed, 0);
    let span = d * (d + 1) / 2;
    for trial in 0..trials {
        let n = d + (rng.next_u64() as usize) % (span - d + 1);
        let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
        let check = self_khatri_rao_rank(&x)?;
        if !check.full_rank {
            return Err(CliError::CheckFailed(format!(
                "gaussian trial {trial} (d = {d}, n = {n}): sigma_min {}",
                check.sigma_min
            )));
        }
    }
    println!(
        "{{\"check\":\"xkrx\",\"d\":{d},\"deterministic\":\"pass\",\"gaussian_trials\":{trials},\"pass\":true}}"
    );
    Ok(())
}

pub fn cmd_verify_spectrum(
    d: usize,
    k: usize,
    n: usize,
    trials: usize,
    activation: &str,
    seed: u64,
) -> Result<(), CliError> {
    let act = Activation::parse(activation).map_err(other)?;
    let reports = jacobian_spectrum_check(trials, d, k, n, &act, seed)?;
    let lower_min = reports.iter().map(|r| r.lower_ratio).fold(f64::INFINITY, f64::min);
    let upper_max = reports.iter().map(|r| r.upper_ratio).fold(0.0, f64::max);
    let upper_min = reports.iter().map(|r| r.upper_ratio).fold(f64::INFINITY, f64::min);
    let spread = upper_max / upper_min.max(f64::MIN_POSITIVE);
    println!(
        "{{\"check\":\"spectrum\",\"d\":{d},\"k\":{k},\"n\":{n},\"trials\":{trials},\"lower_ratio_min\":{lower_min},\"upper_ratio_max\":{upper_max},\"upper_spread\":{spread}}}"
    );
    if lower_min <= 0.0 {
        return Err(CliError::CheckFailed(format!("non-positive lower ratio {lower_min}")));
    }
    if d == 8 && k == 8 && n == 32 {
        if lower_min < calibrated::SPECTRUM_LOWER_FLOOR {
            return Err(CliError::CheckFailed(format!(
                "lower ratio {lower_min} under calibrated floor {}",
                calibrated::SPECTRUM_LOWER_FLOOR
            )));
        }
        if upper_max > calibrated::SPECTRUM_UPPER_CEILING {
            return Err(CliError::CheckFailed(format!(
                "upper ratio {upper_max} over calibrated ceiling {}",
                calibrated::SPECTRUM_UPPER_CEILING
            )));
        }
        if spread > calibrated::SPECTRUM_UPPER_SPREAD {
            return Err(CliError::CheckFailed(format!("upper-ratio spread {spread}")));
        }
    }
    Ok(())
}

/// The `{20, 80, 320}·d·ln d` sample schedule used by the concentration
/// checks.
pub fn concentration_schedule(d: usize) -> [usize; 3] {
    let base = (d as f64) * (d as f64).ln();
    [
        (20.0 * base).round() as usize,
        (80.0 * base).round() as usize,
        (320.0 * base).round() as usize,
    ]
}

pub fn cmd_verify_quartic(d: usize, trials: usize, seed: u64) -> Result<(), CliError> {
    let a = Matrix::identity(d);
    let mut means = Vec::new();
    for (idx, n) in concentration_schedule(d).into_iter().enumerate() {
        let stats = quartic_moment_check(&a, n, trials, seed + idx as u64)?;
        println!(
            "{{\"check\":\"quartic\",\"d\":{d},\"n\":{n},\"op_mean\":{},\"op_max\":{},\"nuclear_mean\":{}}}",
            stats.op_mean, stats.op_max, stats.nuclear_mean
        );
        means.push(stats.op_mean);
    }
    if !(means[0] > means[1] && means[1] > means[2]) {
        return Err(CliError::CheckFailed(format!("deviation means not decreasing: {means:?}")));
    }
    Ok(())
}

pub fn cmd_verify_covariance(d: usize, trials: usize, seed: u64) -> Result<(), CliError> {
    let mut means = Vec::new();
    for (idx, n) in concentration_schedule(d).into_iter().enumerate() {
        let stats = sample_covariance_check(d, n, trials, seed + idx as u64)?;
        println!(
            "{{\"check\":\"covariance\",\"d\":{d},\"n\":{n},\"op_mean\":{},\"op_max\":{}}}",
            stats.op_mean, stats.op_max
        );
        means.push(stats.op_mean);
    }
    if !(means[0] > means[1] && means[1] > means[2]) {
        return Err(CliError::CheckFailed(format!("deviation means not decreasing: {means:?}")));
    }
    Ok(())
}

pub fn cmd_calibrate(seed: u64, trials: usize) -> Result<(), CliError> {
    let mut instances = Vec::new();
    let mut rng = CounterRng::new(seed, 0);
    for trial in 0..trials {
        let act =
            if trial % 2 == 0 { Activation::Softplus { b: 10.0 } } else { Activation::Tanh };
        let k = 4 + trial % 7;
        let d = 3 + trial % 5;
        let n = 4 * d;
        let cfg = GeneratorConfig::planted(d, n, k, act, rng.next_u64());
        let data = gen::generate_dataset(&cfg).map_err(other)?;
        let teacher = data.planted().expect("planted").params.clone();
        instances.push((teacher, data, act));
    }
    let fitted = calibrate_smoothness(&instances, 1.2).map_err(other)?;
    let spectrum =
        jacobian_spectrum_check(50, 8, 8, 32, &Activation::Softplus { b: 10.0 }, seed)?;
    let lower_min = spectrum.iter().map(|r| r.lower_ratio).fold(f64::INFINITY, f64::min);
    let upper_max = spectrum.iter().map(|r| r.upper_ratio).fold(0.0, f64::max);
    println!(
        "{{\"smoothness_c_fitted\":{fitted},\"smoothness_c_frozen\":{DEFAULT_SMOOTHNESS_C},\"spectrum_lower_min\":{lower_min},\"spectrum_upper_max\":{upper_max},\"spectrum_floor_frozen\":{},\"spectrum_ceiling_frozen\":{}}}",
        calibrated::SPECTRUM_LOWER_FLOOR,
        calibrated::SPECTRUM_UPPER_CEILING
    );
    if fitted > DEFAULT_SMOOTHNESS_C {
        return Err(CliError::CheckFailed(format!(
            "fitted smoothness constant {fitted} exceeds frozen default {DEFAULT_SMOOTHNESS_C}"
        )));
    }
    Ok(())
}
