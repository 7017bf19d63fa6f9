//! Experiment harness: phase-transition sweeps, logistic fits of success
//! probabilities, and numerical verification of the spectral and
//! concentration claims behind them.
//!
//! The central experiment asks: for a planted model with teacher weights
//! `W*` and all-one output weights, does gradient descent from random
//! initializations always reach a global optimum? For each sweep value a
//! number of teachers are drawn, each attacked from several random
//! initializations; a teacher counts as a success only when *every*
//! initialization converges to global tolerance. The resulting empirical
//! probabilities rise from 0 to 1 as the parameter count `kd` passes the
//! sample count `n`, and a Bernoulli-logistic fit locates the crossing.
//!
//! Every trial draws its randomness from a counter stream addressed by
//! `(master_seed, point, weight, init)`, so cells can be computed in any
//! order (or on any thread) and still reproduce bit-for-bit.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::activations::Activation;
use crate::gen::{self, GenError, GeneratorConfig, LabelKind, VStarKind, WeightScheme};
use crate::linalg::{self, khatri_rao, svd, sym_eigen, Matrix, RANK_TOL};
use crate::network::{jacobian, Dataset, NetworkError, NetworkParams};
use crate::optimizer::{gd_run, init_random, GdConfig, InitKind, OptimizerError};
use crate::rng::CounterRng;

#[derive(Debug, Clone, PartialEq)]
pub enum LandscapeError {
    InvalidConfig(String),
    Gen(GenError),
    Network(NetworkError),
    Optimizer(OptimizerError),
    Linalg(linalg::LinalgError),
    /// Logistic fit preconditions not met (fewer than two usable points).
    DegenerateFit(String),
}

impl core::fmt::Display for LandscapeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LandscapeError::InvalidConfig(msg) => write!(f, "invalid sweep config: {msg}"),
            LandscapeError::Gen(e) => write!(f, "{e}"),
            LandscapeError::Network(e) => write!(f, "{e}"),
            LandscapeError::Optimizer(e) => write!(f, "{e}"),
            LandscapeError::Linalg(e) => write!(f, "{e}"),
            LandscapeError::DegenerateFit(msg) => write!(f, "degenerate logistic fit: {msg}"),
        }
    }
}

impl core::error::Error for LandscapeError {}

impl From<GenError> for LandscapeError {
    fn from(e: GenError) -> Self {
        LandscapeError::Gen(e)
    }
}

impl From<NetworkError> for LandscapeError {
    fn from(e: NetworkError) -> Self {
        LandscapeError::Network(e)
    }
}

impl From<OptimizerError> for LandscapeError {
    fn from(e: OptimizerError) -> Self {
        LandscapeError::Optimizer(e)
    }
}

impl From<linalg::LinalgError> for LandscapeError {
    fn from(e: linalg::LinalgError) -> Self {
        LandscapeError::Linalg(e)
    }
}

/// Which dimension stays fixed while the other sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedDim {
    /// `d` fixed; sweep values are `k`.
    D(usize),
    /// `k` fixed; sweep values are `d`.
    K(usize),
}

/// How the student's output weights are initialized in sweep trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputWeightPolicy {
    /// i.i.d. ±1 entries, fresh per trial.
    Rademacher,
    /// Fixed alternating signs, `⌈k/2⌉` positive and `⌊k/2⌋` negative.
    ///
    /// Used with `train_v = false` this is the saddle-analysis setting:
    /// the sign pattern of `v` caps how many positive/negative eigenvalues
    /// the fitted Gram `WᵀD_vW` can have, and an unbalanced random draw is
    /// structurally unable to express the generic solutions, which shows
    /// up as spurious plateau failures unrelated to the landscape claim
    /// under test.
    BalancedSigns,
}

/// Hidden width of the teacher network generating planted labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeacherWidth {
    /// Teacher width equals the student width at each sweep point.
    MatchStudent,
    /// Teacher width equals the input dimension, so the quadratic teacher
    /// Gram matrix has full rank and a student of width `k` can fit the
    /// labels exactly only when the rank-`k` parameter count
    /// `kd − k(k−1)/2` reaches `n`. This is the regime whose success
    /// probability transitions with over-parameterization.
    InputRank,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub fixed: FixedDim,
    /// Strictly increasing values of the varying dimension.
    pub sweep: Vec<usize>,
    /// Planted labels (all-one teacher output weights) vs Gaussian labels.
    pub planted: bool,
    /// Teacher width for planted labels.
    pub teacher: TeacherWidth,
    /// Output-weight initialization for the student.
    pub v_policy: OutputWeightPolicy,
    /// Teacher draws per sweep value.
    pub weights_per_point: usize,
    /// Random initializations per teacher; all must converge for success.
    pub inits_per_weight: usize,
    pub activation: Activation,
    pub master_seed: u64,
    pub gd: GdConfig,
    /// Train the output weights too (the planted sweeps do).
    pub train_v: bool,
}

impl SweepConfig {
    fn validate(&self) -> Result<(), LandscapeError> {
        if self.sweep.is_empty() || self.weights_per_point == 0 || self.inits_per_weight == 0 {
            return Err(LandscapeError::InvalidConfig(String::from("counts must be ≥ 1")));
        }
        if !self.sweep.windows(2).all(|w| w[0] < w[1]) {
            return Err(LandscapeError::InvalidConfig(String::from(
                "sweep values must be strictly increasing",
            )));
        }
        if self.sweep.iter().any(|&p| p == 0) {
            return Err(LandscapeError::InvalidConfig(String::from("sweep values must be ≥ 1")));
        }
        Ok(())
    }

    /// `(d, k)` for the given sweep value.
    pub fn dims_at(&self, param: usize) -> (usize, usize) {
        match self.fixed {
            FixedDim::D(d) => (d, param),
            FixedDim::K(k) => (param, k),
        }
    }
}

/// One sweep-table row: successes are teachers whose every initialization
/// converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: usize,
    pub successes: u64,
    pub trials: u64,
}

impl SweepRow {
    pub fn probability(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTable {
    pub rows: Vec<SweepRow>,
    pub logistic: Option<LogisticFit>,
}

impl ExperimentTable {
    /// Pool counts across tables over the same sweep grid (aggregation is
    /// associative and order independent).
    pub fn merge(tables: &[ExperimentTable]) -> Result<ExperimentTable, LandscapeError> {
        let first = tables
            .first()
            .ok_or_else(|| LandscapeError::InvalidConfig(String::from("no tables to merge")))?;
        let mut rows = first.rows.clone();
        for table in &tables[1..] {
            if table.rows.len() != rows.len()
                || table.rows.iter().zip(&rows).any(|(a, b)| a.param != b.param)
            {
                return Err(LandscapeError::InvalidConfig(String::from(
                    "tables cover different sweep grids",
                )));
            }
            for (acc, row) in rows.iter_mut().zip(&table.rows) {
                acc.successes += row.successes;
                acc.trials += row.trials;
            }
        }
        Ok(ExperimentTable { rows, logistic: None })
    }

    pub fn fit_points(&self) -> Vec<(f64, u64, u64)> {
        self.rows.iter().map(|r| (r.param as f64, r.successes, r.trials)).collect()
    }
}

/// Result of one teacher draw: did every initialization converge?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightCell {
    pub param: usize,
    pub weight_index: usize,
    pub all_converged: bool,
    pub converged_inits: u32,
    pub total_inits: u32,
}

// Stream addressing within a sweep seed: disjoint id spaces for dataset
// draws and initializations.
fn cell_stream(point: usize, weight: usize) -> u64 {
    0x4000_0000_0000_0000 | ((point as u64) << 32) | weight as u64
}

fn init_stream(point: usize, weight: usize, init: usize) -> u64 {
    0x8000_0000_0000_0000 | ((point as u64) << 40) | ((weight as u64) << 20) | init as u64
}

/// Run the trials of one `(sweep value, teacher)` cell. Deterministic in
/// `(cfg.master_seed, point_index, weight_index)`; divergent runs count as
/// failures, never as errors.
pub fn run_weight_cell(
    cfg: &SweepConfig,
    point_index: usize,
    weight_index: usize,
) -> Result<WeightCell, LandscapeError> {
    cfg.validate()?;
    let param = *cfg
        .sweep
        .get(point_index)
        .ok_or_else(|| LandscapeError::InvalidConfig(String::from("point index out of range")))?;
    let (d, k) = cfg.dims_at(param);
    let teacher_k = match cfg.teacher {
        TeacherWidth::MatchStudent => k,
        TeacherWidth::InputRank => d,
        TeacherWidth::Fixed(width) => width,
    };
    let gen_seed = CounterRng::new(cfg.master_seed, cell_stream(point_index, weight_index))
        .next_u64();
    let gen_cfg = GeneratorConfig {
        d,
        n: cfg.n,
        k: teacher_k,
        label_kind: if cfg.planted { LabelKind::Planted } else { LabelKind::GaussianRandom },
        activation: cfg.activation,
        weight_scheme: WeightScheme::GaussianOverSqrtD,
        v_star: VStarKind::AllOne,
        master_seed: gen_seed,
    };
    let data = gen::generate_dataset(&gen_cfg)?;
    let mut converged = 0u32;
    for init in 0..cfg.inits_per_weight {
        let mut rng =
            CounterRng::new(cfg.master_seed, init_stream(point_index, weight_index, init));
        let mut start = init_random(k, d, &mut rng);
        if matches!(cfg.v_policy, OutputWeightPolicy::BalancedSigns) {
            for (l, vl) in start.v_mut().iter_mut().enumerate() {
                *vl = if l % 2 == 0 { 1.0 } else { -1.0 };
            }
        }
        match gd_run(&start, &data, &cfg.activation, &cfg.gd, cfg.train_v, gen_seed, InitKind::Random)
        {
            Ok(record) if record.reached_global => converged += 1,
            Ok(_) => {}
            Err(OptimizerError::Diverged { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(WeightCell {
        param,
        weight_index,
        all_converged: converged as usize == cfg.inits_per_weight,
        converged_inits: converged,
        total_inits: cfg.inits_per_weight as u32,
    })
}

/// Aggregate cells into a table (cells may arrive in any order).
pub fn aggregate_cells(cfg: &SweepConfig, cells: &[WeightCell]) -> ExperimentTable {
    let mut rows: Vec<SweepRow> =
        cfg.sweep.iter().map(|&param| SweepRow { param, successes: 0, trials: 0 }).collect();
    for cell in cells {
        if let Some(row) = rows.iter_mut().find(|r| r.param == cell.param) {
            row.trials += 1;
            if cell.all_converged {
                row.successes += 1;
            }
        }
    }
    ExperimentTable { rows, logistic: None }
}

/// Sequential sweep over all `(point, weight)` cells.
pub fn spurious_minima_sweep(cfg: &SweepConfig) -> Result<ExperimentTable, LandscapeError> {
    cfg.validate()?;
    let mut cells = Vec::with_capacity(cfg.sweep.len() * cfg.weights_per_point);
    for point in 0..cfg.sweep.len() {
        for weight in 0..cfg.weights_per_point {
            cells.push(run_weight_cell(cfg, point, weight)?);
        }
    }
    let mut table = aggregate_cells(cfg, &cells);
    table.logistic = logistic_fit(&table.fit_points()).ok();
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FitFlags {
    /// Complete separation detected; the fit used a ridge penalty.
    pub separation: bool,
    pub ridge_used: bool,
    /// All-0 / all-1 data or non-positive slope: no crossing reported.
    pub no_crossing: bool,
}

/// Maximum-likelihood Bernoulli-logistic fit of aggregated counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticFit {
    pub intercept: f64,
    pub slope: f64,
    /// Parameter value where the fitted curve crosses probability 1/2.
    pub crossing: Option<f64>,
    pub flags: FitFlags,
}

/// Fit `P(success | x) = 1/(1+e^{-(β₀+β₁x)})` to `(x, successes, trials)`
/// triples by damped Newton iterations on the log-likelihood.
///
/// Complete separation gets a `1e-6` ridge and a flag; all-0/all-1 data and
/// non-positive slopes yield `crossing = None` with the no-crossing flag.
pub fn logistic_fit(points: &[(f64, u64, u64)]) -> Result<LogisticFit, LandscapeError> {
    let pts: Vec<(f64, f64, f64)> = points
        .iter()
        .filter(|(_, _, t)| *t > 0)
        .map(|&(x, s, t)| (x, s as f64, t as f64))
        .collect();
    {
        let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        xs.dedup();
        if xs.len() < 2 {
            return Err(LandscapeError::DegenerateFit(format!(
                "{} distinct sweep values",
                xs.len()
            )));
        }
    }

    let total_s: f64 = pts.iter().map(|p| p.1).sum();
    let total_t: f64 = pts.iter().map(|p| p.2).sum();
    let mut flags = FitFlags::default();
    if total_s == 0.0 || total_s == total_t {
        flags.no_crossing = true;
        let p = ((total_s + 0.5) / (total_t + 1.0)).clamp(1e-12, 1.0 - 1e-12);
        return Ok(LogisticFit {
            intercept: Float::ln(p / (1.0 - p)),
            slope: 0.0,
            crossing: None,
            flags,
        });
    }

    // Complete separation: every point is 0% or 100% and the classes are
    // split by a threshold in x.
    let degenerate = pts.iter().all(|&(_, s, t)| s == 0.0 || s == t);
    if degenerate {
        let max_zero = pts
            .iter()
            .filter(|&&(_, s, _)| s == 0.0)
            .map(|p| p.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_one = pts
            .iter()
            .filter(|&&(_, s, t)| s == t)
            .map(|p| p.0)
            .fold(f64::INFINITY, f64::min);
        let max_one = pts
            .iter()
            .filter(|&&(_, s, t)| s == t)
            .map(|p| p.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_zero = pts
            .iter()
            .filter(|&&(_, s, _)| s == 0.0)
            .map(|p| p.0)
            .fold(f64::INFINITY, f64::min);
        if max_zero < min_one || max_one < min_zero {
            flags.separation = true;
            flags.ridge_used = true;
        }
    }
    let ridge = if flags.ridge_used { 1e-6 } else { 0.0 };

    // Damped Newton on the (possibly ridged) log-likelihood.
    let mean_x = pts.iter().map(|p| p.0 * p.2).sum::<f64>() / total_t;
    let mut beta = [Float::ln(
        ((total_s + 0.5) / (total_t - total_s + 0.5)).clamp(1e-12, 1e12),
    ), 0.0];
    let ll = |b: &[f64; 2]| -> f64 {
        let mut acc = 0.0;
        for &(x, s, t) in &pts {
            let eta = b[0] + b[1] * (x - mean_x);
            // log(1+e^eta) evaluated stably.
            let softplus = eta.max(0.0) + Float::ln_1p(Float::exp(-Float::abs(eta)));
            acc += s * eta - t * softplus;
        }
        acc - 0.5 * ridge * (b[0] * b[0] + b[1] * b[1])
    };
    for _ in 0..200 {
        let mut g = [-ridge * beta[0], -ridge * beta[1]];
        let mut h = [[ridge, 0.0], [0.0, ridge]];
        for &(x, s, t) in &pts {
            let xc = x - mean_x;
            let eta = beta[0] + beta[1] * xc;
            let p = if eta >= 0.0 {
                1.0 / (1.0 + Float::exp(-eta))
            } else {
                let e = Float::exp(eta);
                e / (1.0 + e)
            };
            let wgt = (t * p * (1.0 - p)).max(1e-12);
            g[0] += s - t * p;
            g[1] += (s - t * p) * xc;
            h[0][0] += wgt;
            h[0][1] += wgt * xc;
            h[1][1] += wgt * xc * xc;
        }
        h[1][0] = h[0][1];
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if Float::abs(det) < 1e-300 {
            break;
        }
        let step = [
            (h[1][1] * g[0] - h[0][1] * g[1]) / det,
            (-h[1][0] * g[0] + h[0][0] * g[1]) / det,
        ];
        // Halve until the likelihood does not decrease.
        let base = ll(&beta);
        let mut damping = 1.0;
        let mut next = beta;
        for _ in 0..40 {
            next = [beta[0] + damping * step[0], beta[1] + damping * step[1]];
            if ll(&next) >= base - 1e-12 {
                break;
            }
            damping *= 0.5;
        }
        let delta = Float::abs(next[0] - beta[0]) + Float::abs(next[1] - beta[1]);
        beta = next;
        if delta < 1e-12 {
            break;
        }
    }

    let slope = beta[1];
    let intercept = beta[0] - slope * mean_x;
    let crossing = if slope > 1e-12 {
        Some(-intercept / slope)
    } else {
        flags.no_crossing = true;
        None
    };
    Ok(LogisticFit { intercept, slope, crossing, flags })
}

/// Weighted isotonic (non-decreasing) least squares via pool-adjacent
/// violators; inputs must be sorted by x.
pub fn isotonic_fit(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    let mut level: Vec<f64> = Vec::with_capacity(values.len());
    let mut weight: Vec<f64> = Vec::with_capacity(values.len());
    let mut count: Vec<usize> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        level.push(v);
        weight.push(w);
        count.push(1);
        while level.len() >= 2 && level[level.len() - 2] > level[level.len() - 1] {
            let (l1, w1, c1) = (level.pop().unwrap(), weight.pop().unwrap(), count.pop().unwrap());
            let last = level.len() - 1;
            let merged_w = weight[last] + w1;
            level[last] = (level[last] * weight[last] + l1 * w1) / merged_w;
            weight[last] = merged_w;
            count[last] += c1;
        }
    }
    let mut out = Vec::with_capacity(values.len());
    for ((l, _), c) in level.iter().zip(&weight).zip(&count) {
        for _ in 0..*c {
            out.push(*l);
        }
    }
    out
}

/// RMSE trace of one random-label fit.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseTrace {
    pub k: usize,
    pub final_rmse: f64,
    /// `(iteration, √loss)` samples.
    pub trace: Vec<(u64, f64)>,
    pub reached_budget: bool,
}

/// Fit `x ↦ 1ᵀφ(Wx)` (output weights frozen at one) to random-label data
/// for each width in `k_list`, recording `√L` traces.
pub fn random_label_experiment(
    d: usize,
    n: usize,
    k_list: &[usize],
    act: &Activation,
    master_seed: u64,
    gd: &GdConfig,
) -> Result<Vec<RmseTrace>, LandscapeError> {
    let data = gen::generate_dataset(&GeneratorConfig::random_labels(d, n, master_seed))?;
    let mut out = Vec::with_capacity(k_list.len());
    for (idx, &k) in k_list.iter().enumerate() {
        let mut rng = CounterRng::new(master_seed, 0x7000_0000_0000_0000 | idx as u64);
        let mut start = init_random(k, d, &mut rng);
        for vl in start.v_mut() {
            *vl = 1.0;
        }
        match gd_run(&start, &data, act, gd, false, master_seed, InitKind::Random) {
            Ok(record) => {
                let trace: Vec<(u64, f64)> =
                    record.loss_trace.iter().map(|&(t, l)| (t, l.max(0.0).sqrt())).collect();
                out.push(RmseTrace {
                    k,
                    final_rmse: record.final_loss.max(0.0).sqrt(),
                    trace,
                    reached_budget: record.iters_used >= gd.max_iters,
                });
            }
            Err(OptimizerError::Diverged { iter }) => {
                out.push(RmseTrace {
                    k,
                    final_rmse: f64::INFINITY,
                    trace: vec![(iter, f64::INFINITY)],
                    reached_budget: false,
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Outcome of the self-Khatri-Rao rank test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankCheck {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub full_rank: bool,
}

/// Smallest singular value of `X ∗ X` and whether it clears the rank
/// tolerance (full column rank needs `n ≤ d(d+1)/2` since the columns live
/// in the symmetric-product span).
pub fn self_khatri_rao_rank(x: &Matrix) -> Result<RankCheck, LandscapeError> {
    let kr = khatri_rao(x, x)?;
    let decomp = svd(&kr)?;
    let sigma_min = if kr.cols() > kr.rows() { 0.0 } else { decomp.sigma_min() };
    let sigma_max = decomp.sigma_max();
    let full_rank =
        sigma_min > RANK_TOL * sigma_max * kr.rows().max(kr.cols()) as f64 && sigma_max > 0.0;
    Ok(RankCheck { sigma_min, sigma_max, full_rank })
}

/// Deterministic input matrix whose self-Khatri-Rao product has full column
/// rank for every `n ≤ d(d+1)/2`: the standard basis vectors followed by
/// the pairwise sums `eᵢ + eⱼ`, `i < j`.
pub fn deterministic_full_rank_inputs(d: usize, n: usize) -> Result<Matrix, LandscapeError> {
    if d == 0 || n == 0 || n > d * (d + 1) / 2 {
        return Err(LandscapeError::InvalidConfig(format!(
            "need 1 ≤ n ≤ d(d+1)/2, got d = {d}, n = {n}"
        )));
    }
    let mut x = Matrix::zeros(d, n);
    let mut col = 0;
    for i in 0..d {
        if col == n {
            break;
        }
        *x.at_mut(i, col) = 1.0;
        col += 1;
    }
    'outer: for i in 0..d {
        for j in (i + 1)..d {
            if col == n {
                break 'outer;
            }
            *x.at_mut(i, col) = 1.0;
            *x.at_mut(j, col) = 1.0;
            col += 1;
        }
    }
    Ok(x)
}

/// Jacobian spectrum relative to the weight spectrum for one random draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumReport {
    pub sigma_min_j: f64,
    pub sigma_max_j: f64,
    /// `σ_min(J) / (σ_min(W) d)`.
    pub lower_ratio: f64,
    /// `σ_max(J) / (σ_max(W) √(nk))`.
    pub upper_ratio: f64,
    /// `σ_min(J) / d` (the scaling when the curvature moment vanishes).
    pub lower_ratio_unit: f64,
}

/// Weight bounds used by [`jacobian_spectrum_check`] draws.
pub const SPECTRUM_BOUNDS: (f64, f64, f64, f64) = (0.8, 1.2, 0.8, 1.2);

/// Sample `trials` random instances and report where the Jacobian spectrum
/// sits relative to `σ_min(W)·d` and `σ_max(W)·√(nk)`.
pub fn jacobian_spectrum_check(
    trials: usize,
    d: usize,
    k: usize,
    n: usize,
    act: &Activation,
    master_seed: u64,
) -> Result<Vec<SpectrumReport>, LandscapeError> {
    if k < d || n < d {
        return Err(LandscapeError::InvalidConfig(format!(
            "need k ≥ d and n ≥ d, got d = {d}, k = {k}, n = {n}"
        )));
    }
    let (v_min, v_max, w_min, w_max) = SPECTRUM_BOUNDS;
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let seed = CounterRng::new(master_seed, 0x3000_0000_0000_0000 | trial as u64).next_u64();
        let cfg = GeneratorConfig {
            d,
            n,
            k,
            label_kind: LabelKind::Planted,
            activation: *act,
            weight_scheme: WeightScheme::Bounded { v_min, v_max, w_min, w_max },
            v_star: VStarKind::AllOne,
            master_seed: seed,
        };
        let data = gen::generate_dataset(&cfg)?;
        let params = data.planted().expect("planted by construction").params.clone();
        out.push(spectrum_report(&params, &data, act)?);
    }
    Ok(out)
}

/// Spectrum report for explicit weights and data.
pub fn spectrum_report(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
) -> Result<SpectrumReport, LandscapeError> {
    let j = jacobian(params, data, act)?;
    let j_svd = svd(&j)?;
    let w_svd = svd(params.w())?;
    let d = params.d() as f64;
    let nk = (data.n() * params.k()) as f64;
    let sigma_min_j = if j.cols() > j.rows() { 0.0 } else { j_svd.sigma_min() };
    let sigma_max_j = j_svd.sigma_max();
    Ok(SpectrumReport {
        sigma_min_j,
        sigma_max_j,
        lower_ratio: sigma_min_j / (w_svd.sigma_min() * d).max(f64::MIN_POSITIVE),
        upper_ratio: sigma_max_j / (w_svd.sigma_max() * nk.sqrt()).max(f64::MIN_POSITIVE),
        lower_ratio_unit: sigma_min_j / d,
    })
}

/// Max/mean deviation ratios over trials, in operator and nuclear norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationStats {
    pub op_max: f64,
    pub op_mean: f64,
    pub nuclear_max: f64,
    pub nuclear_mean: f64,
    pub trials: usize,
}

/// Concentration of the Gaussian quartic form: for PSD `A`, the deviation
/// `(1/n)Σᵢ(xᵢᵀAxᵢ)xᵢxᵢᵀ − (2A + tr(A) I)` shrinks relative to `tr(A)` as
/// `n` grows. Reports both the operator-norm and nuclear-norm ratios (the
/// two norms bound different arguments; both are tracked).
pub fn quartic_moment_check(
    a: &Matrix,
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<DeviationStats, LandscapeError> {
    if a.rows() != a.cols() {
        return Err(LandscapeError::InvalidConfig(String::from("A must be square")));
    }
    let eig = sym_eigen(a)?;
    let trace: f64 = (0..a.rows()).map(|i| a.at(i, i)).sum();
    if eig.values.last().copied().unwrap_or(0.0) < -1e-10 * eig.values[0].max(1.0) {
        return Err(LandscapeError::InvalidConfig(String::from("A must be PSD")));
    }
    let d = a.rows();
    let mut op_ratios = Vec::with_capacity(trials);
    let mut nuc_ratios = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = CounterRng::new(master_seed, 0x5000_0000_0000_0000 | trial as u64);
        let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
        // c_i = xᵢᵀA xᵢ; deviation = X D_c Xᵀ/n − 2A − tr(A) I.
        let ax = a.matmul(&x)?;
        let mut scaled = x.clone();
        for i in 0..n {
            let mut c = 0.0;
            for row in 0..d {
                c += x.at(row, i) * ax.at(row, i);
            }
            for row in 0..d {
                *scaled.at_mut(row, i) *= c / n as f64;
            }
        }
        let mut dev = scaled.matmul(&x.transpose())?.sub(&a.scale(2.0))?;
        for i in 0..d {
            *dev.at_mut(i, i) -= trace;
        }
        let dev_svd = svd(&dev)?;
        let denom = trace.max(f64::MIN_POSITIVE);
        op_ratios.push(dev_svd.sigma_max() / denom);
        nuc_ratios.push(dev_svd.singular_values.iter().sum::<f64>() / denom);
    }
    Ok(stats_from(&op_ratios, &nuc_ratios))
}

/// Deviation of the sample covariance from identity, `‖(1/n)XXᵀ − I‖`.
pub fn sample_covariance_check(
    d: usize,
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<DeviationStats, LandscapeError> {
    let mut op_ratios = Vec::with_capacity(trials);
    let mut nuc_ratios = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = CounterRng::new(master_seed, 0x6000_0000_0000_0000 | trial as u64);
        let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
        let mut cov = x.matmul(&x.transpose())?.scale(1.0 / n as f64);
        for i in 0..d {
            *cov.at_mut(i, i) -= 1.0;
        }
        let dev_svd = svd(&cov)?;
        op_ratios.push(dev_svd.sigma_max());
        nuc_ratios.push(dev_svd.singular_values.iter().sum::<f64>());
    }
    Ok(stats_from(&op_ratios, &nuc_ratios))
}

fn stats_from(op: &[f64], nuc: &[f64]) -> DeviationStats {
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len().max(1) as f64;
    DeviationStats {
        op_max: op.iter().copied().fold(0.0, f64::max),
        op_mean: mean(op),
        nuclear_max: nuc.iter().copied().fold(0.0, f64::max),
        nuclear_mean: mean(nuc),
        trials: op.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::StepSize;

    #[test]
    fn logistic_fit_symmetric_data() {
        let fit = logistic_fit(&[(0.0, 0, 10), (1.0, 5, 10), (2.0, 10, 10)]).unwrap();
        let crossing = fit.crossing.expect("slope is positive");
        assert!((crossing - 1.0).abs() < 1e-6, "crossing {crossing}");
    }

    #[test]
    fn logistic_fit_flat_data_has_no_crossing() {
        let fit = logistic_fit(&[(0.0, 5, 10), (1.0, 5, 10), (2.0, 5, 10)]).unwrap();
        assert!(fit.flags.no_crossing);
        assert!(fit.crossing.is_none());
        assert!(fit.slope.abs() < 1e-6);
    }

    #[test]
    fn logistic_fit_all_zero_and_all_one() {
        let fit = logistic_fit(&[(0.0, 0, 10), (1.0, 0, 10)]).unwrap();
        assert!(fit.flags.no_crossing);
        let fit = logistic_fit(&[(0.0, 10, 10), (1.0, 10, 10)]).unwrap();
        assert!(fit.flags.no_crossing);
    }

    #[test]
    fn logistic_fit_flags_separation() {
        let fit = logistic_fit(&[(0.0, 0, 10), (1.0, 0, 10), (2.0, 10, 10), (3.0, 10, 10)])
            .unwrap();
        assert!(fit.flags.separation);
        assert!(fit.flags.ridge_used);
        let crossing = fit.crossing.expect("separated but ridged");
        assert!((1.0..=2.0).contains(&crossing), "crossing {crossing}");
    }

    #[test]
    fn logistic_fit_recovers_generating_model() {
        // Oracle: Bernoulli draws from a known logistic with crossing at 8.
        let beta0 = -4.0;
        let beta1 = 0.5;
        let mut rng = CounterRng::new(404, 0);
        let mut points = Vec::new();
        for x in [2.0f64, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0] {
            let p = 1.0 / (1.0 + (-(beta0 + beta1 * x)).exp());
            let trials = 200u64;
            let successes = (0..trials).filter(|_| rng.uniform() < p).count() as u64;
            points.push((x, successes, trials));
        }
        let fit = logistic_fit(&points).unwrap();
        let crossing = fit.crossing.expect("positive slope");
        assert!((crossing - 8.0).abs() < 0.8, "crossing {crossing}");
    }

    #[test]
    fn logistic_fit_depends_only_on_counts() {
        let a = [(1.0, 2, 10), (2.0, 5, 10), (3.0, 9, 10)];
        let b = [(3.0, 9, 10), (1.0, 2, 10), (2.0, 5, 10)];
        let fa = logistic_fit(&a).unwrap();
        let fb = logistic_fit(&b).unwrap();
        assert!((fa.crossing.unwrap() - fb.crossing.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn logistic_fit_needs_two_points() {
        assert!(matches!(
            logistic_fit(&[(1.0, 3, 10)]),
            Err(LandscapeError::DegenerateFit(_))
        ));
    }

    #[test]
    fn isotonic_fit_is_monotone_and_preserves_means() {
        let values = [0.1, 0.3, 0.2, 0.5, 0.4, 0.9];
        let weights = [1.0; 6];
        let fit = isotonic_fit(&values, &weights);
        for pair in fit.windows(2) {
            assert!(pair[0] <= pair[1] + 1e-15);
        }
        let mean_in: f64 = values.iter().sum();
        let mean_out: f64 = fit.iter().sum();
        assert!((mean_in - mean_out).abs() < 1e-12);
    }

    #[test]
    fn deterministic_inputs_have_full_rank_khatri_rao() {
        for d in 1..=5usize {
            let cap = d * (d + 1) / 2;
            for n in 1..=cap {
                let x = deterministic_full_rank_inputs(d, n).unwrap();
                let check = self_khatri_rao_rank(&x).unwrap();
                assert!(check.full_rank, "d = {d}, n = {n}: {check:?}");
            }
            assert!(deterministic_full_rank_inputs(d, cap + 1).is_err());
        }
    }

    #[test]
    fn khatri_rao_rank_hand_case() {
        // Columns e1, e2, e1+e2 in d = 2.
        let x = Matrix::new(2, 3, vec![1.0, 0.0, 1.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(self_khatri_rao_rank(&x).unwrap().full_rank);
        // One column beyond the symmetric span: never full rank.
        let over = deterministic_full_rank_inputs(3, 6).unwrap();
        let mut wide = Matrix::zeros(3, 7);
        for i in 0..3 {
            for j in 0..6 {
                *wide.at_mut(i, j) = over.at(i, j);
            }
        }
        *wide.at_mut(0, 6) = 0.3;
        *wide.at_mut(1, 6) = -1.1;
        *wide.at_mut(2, 6) = 0.7;
        assert!(!self_khatri_rao_rank(&wide).unwrap().full_rank);
    }

    #[test]
    fn gaussian_inputs_full_rank_in_valid_range() {
        let mut rng = CounterRng::new(88, 0);
        for trial in 0..10 {
            let d = 6;
            let n = 6 + (trial * 15) % 16; // within [6, 21]
            let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
            assert!(self_khatri_rao_rank(&x).unwrap().full_rank, "n = {n}");
        }
    }

    #[test]
    fn spectrum_identity_weights_reduce_to_self_khatri_rao() {
        let mut rng = CounterRng::new(89, 0);
        let d = 4;
        let n = 8;
        let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
        let params = NetworkParams::new(vec![1.0; d], Matrix::identity(d)).unwrap();
        let data = Dataset::new(x.clone(), vec![0.0; n]).unwrap();
        let report = spectrum_report(&params, &data, &Activation::Quadratic).unwrap();
        let kr = khatri_rao(&x, &x).unwrap();
        let kr_svd = svd(&kr).unwrap();
        assert!((report.sigma_max_j - 2.0 * kr_svd.sigma_max()).abs() <= 1e-10 * report.sigma_max_j);
        assert!(
            (report.sigma_min_j - 2.0 * kr_svd.sigma_min()).abs()
                <= 1e-8 * report.sigma_max_j.max(1.0)
        );
    }

    #[test]
    fn spectrum_check_ratios_positive() {
        let reports =
            jacobian_spectrum_check(5, 4, 4, 10, &Activation::Softplus { b: 10.0 }, 17).unwrap();
        assert_eq!(reports.len(), 5);
        for r in reports {
            assert!(r.lower_ratio > 0.0, "{r:?}");
            assert!(r.upper_ratio.is_finite() && r.upper_ratio > 0.0);
        }
    }

    #[test]
    fn quartic_moment_zero_matrix() {
        let stats = quartic_moment_check(&Matrix::zeros(3, 3), 20, 3, 5).unwrap();
        assert_eq!(stats.op_max, 0.0);
        assert_eq!(stats.nuclear_max, 0.0);
    }

    #[test]
    fn quartic_moment_rejects_non_psd() {
        let a = Matrix::new(2, 2, vec![1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            quartic_moment_check(&a, 10, 2, 5),
            Err(LandscapeError::InvalidConfig(_))
        ));
    }

    #[test]
    fn quartic_moment_concentrates_with_n() {
        let d = 4;
        let a = Matrix::identity(d);
        let small = quartic_moment_check(&a, 40, 8, 21).unwrap();
        let large = quartic_moment_check(&a, 640, 8, 22).unwrap();
        assert!(
            large.op_mean < small.op_mean,
            "op mean did not shrink: {} vs {}",
            large.op_mean,
            small.op_mean
        );
    }

    #[test]
    fn sample_covariance_scalar_case() {
        let stats = sample_covariance_check(1, 1, 1, 3).unwrap();
        let mut rng = CounterRng::new(3, 0x6000_0000_0000_0000);
        let x = rng.gaussian();
        assert!((stats.op_max - (x * x - 1.0).abs()).abs() < 1e-12);
    }

    #[test]
    fn sample_covariance_concentrates_with_n() {
        let d = 6;
        let mut prev = f64::INFINITY;
        for n in [50usize, 800] {
            let stats = sample_covariance_check(d, n, 10, 9).unwrap();
            assert!(stats.op_mean < prev, "n = {n}: {} !< {prev}", stats.op_mean);
            prev = stats.op_mean;
        }
    }

    fn tiny_sweep_config() -> SweepConfig {
        SweepConfig {
            n: 6,
            fixed: FixedDim::D(2),
            sweep: vec![1, 4],
            planted: true,
            teacher: TeacherWidth::MatchStudent,
            v_policy: OutputWeightPolicy::Rademacher,
            weights_per_point: 2,
            inits_per_weight: 2,
            activation: Activation::Quadratic,
            master_seed: 2024,
            gd: GdConfig {
                step: StepSize::AdaptiveCurvature,
                max_iters: 4000,
                loss_tol: 1e-10,
                grad_tol: 1e-9,
                record_every: 0,
            },
            train_v: true,
        }
    }

    #[test]
    fn sweep_probabilities_are_valid_frequencies() {
        let table = spurious_minima_sweep(&tiny_sweep_config()).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert_eq!(row.trials, 2);
            assert!(row.successes <= row.trials);
            assert!((0.0..=1.0).contains(&row.probability()));
        }
        // The well-over-parameterized point should do at least as well as
        // the under-parameterized one.
        assert!(table.rows[1].successes >= table.rows[0].successes);
    }

    #[test]
    fn sweep_is_deterministic_and_cells_commute() {
        let cfg = tiny_sweep_config();
        let a = spurious_minima_sweep(&cfg).unwrap();
        // Recompute cells in reverse order; aggregation must not care.
        let mut cells = Vec::new();
        for point in (0..cfg.sweep.len()).rev() {
            for weight in (0..cfg.weights_per_point).rev() {
                cells.push(run_weight_cell(&cfg, point, weight).unwrap());
            }
        }
        let b = aggregate_cells(&cfg, &cells);
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn table_merge_pools_counts() {
        let t1 = ExperimentTable {
            rows: vec![SweepRow { param: 1, successes: 3, trials: 10 }],
            logistic: None,
        };
        let t2 = ExperimentTable {
            rows: vec![SweepRow { param: 1, successes: 5, trials: 10 }],
            logistic: None,
        };
        let merged = ExperimentTable::merge(&[t1, t2]).unwrap();
        assert_eq!(merged.rows[0].successes, 8);
        assert_eq!(merged.rows[0].trials, 20);
        let t3 = ExperimentTable {
            rows: vec![SweepRow { param: 2, successes: 0, trials: 10 }],
            logistic: None,
        };
        assert!(ExperimentTable::merge(&[merged, t3]).is_err());
    }

    #[test]
    fn random_label_traces_are_deterministic() {
        let gd = GdConfig {
            step: StepSize::AdaptiveCurvature,
            max_iters: 500,
            loss_tol: 1e-8,
            grad_tol: 1e-9,
            record_every: 100,
        };
        let a =
            random_label_experiment(3, 10, &[2, 6], &Activation::Quadratic, 55, &gd).unwrap();
        let b =
            random_label_experiment(3, 10, &[2, 6], &Activation::Quadratic, 55, &gd).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        for trace in &a {
            assert!(!trace.trace.is_empty());
        }
    }
}
