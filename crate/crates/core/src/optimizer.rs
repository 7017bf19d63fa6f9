//! Gradient descent, convergence constants, initialization schemes, and
//! approximate-local-minimum classification.
//!
//! The updates are plain simultaneous gradient descent: both `v` and `W`
//! step from the gradients of the same iterate,
//! `v_{τ+1} = v_τ − α ∇_v L`, `W_{τ+1} = W_τ − α ∇_W L`.
//!
//! Step sizes come in three flavors. `Fixed` is the caller's number.
//! `Auto` resolves to `1/β` before the first step, where the smoothness
//! bound `β = (3C²σ²_max(W) + 8v²_max BL + 4B²w²_max + 2φ²(0))k` is
//! evaluated from the planted weights when the dataset has them and from
//! the starting point otherwise; the constant `C` is a calibration
//! parameter fitted so that `β` dominates observed Hessian norms (see
//! [`CalibrationConstants`]). `AdaptiveCurvature` tracks the largest
//! Hessian eigenvalue along the run with warm-started power iterations and
//! keeps `α` just under its inverse; experiment sweeps use it because `1/β`
//! is several times too conservative far from a planted optimum.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::activations::{Activation, MomentClass};
use crate::linalg::{self, norm2, sym_eigen, Matrix};
use crate::network::{
    self, full_hessian, hvp, loss_and_grads, negative_curvature_direction, nuclear_norm_of_planted_gram,
    quadratic_global_certificate, Dataset, NegativeCurvature, NetworkError, NetworkParams,
    HESSIAN_ASSEMBLY_CAP,
};
use crate::rng::CounterRng;

#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerError {
    Network(NetworkError),
    /// The loss became non-finite at the given iterate.
    Diverged { iter: u64 },
    Unsupported(String),
}

impl core::fmt::Display for OptimizerError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OptimizerError::Network(e) => write!(f, "{e}"),
            OptimizerError::Diverged { iter } => {
                write!(f, "gradient descent diverged at iteration {iter}")
            }
            OptimizerError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for OptimizerError {}

impl From<NetworkError> for OptimizerError {
    fn from(e: NetworkError) -> Self {
        OptimizerError::Network(e)
    }
}

impl From<linalg::LinalgError> for OptimizerError {
    fn from(e: linalg::LinalgError) -> Self {
        OptimizerError::Network(NetworkError::Linalg(e))
    }
}

/// Unspecified absolute constants of the convergence theory, exposed as
/// calibration parameters. The defaults were fitted once by the
/// `calibrate` command: `c_smoothness` is the smallest value (plus 20%
/// margin) for which the `β` formula dominates the largest observed
/// Hessian eigenvalue over random planted instances with `d, k ≤ 10`; the
/// others are order-one placeholders that only scale diagnostic radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationConstants {
    /// `C` in the smoothness bound `β`.
    pub c_smoothness: f64,
    /// `c` in the gradient lower bound `m_L`.
    pub c_lower: f64,
    /// `C` in the gradient upper bound `m_U`.
    pub c_upper: f64,
    /// `C'` in the Jacobian perturbation bound (sets the trust radius).
    pub c_perturbation: f64,
    /// `C₀` scaling the near-planted initialization radii.
    pub c_init: f64,
}

impl Default for CalibrationConstants {
    fn default() -> Self {
        CalibrationConstants {
            c_smoothness: DEFAULT_SMOOTHNESS_C,
            c_lower: 1.0,
            c_upper: 1.0,
            c_perturbation: 1.0,
            c_init: 1.0,
        }
    }
}

/// Fitted by `calibrate_smoothness`; see [`CalibrationConstants`].
pub const DEFAULT_SMOOTHNESS_C: f64 = 1.1;

/// Step-size policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    /// `1/β` resolved before the first step.
    Auto,
    /// Follow `SAFETY / λ_max(∇²L)` with periodic re-estimation.
    AdaptiveCurvature,
}

/// Gradient descent configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdConfig {
    pub step: StepSize,
    pub max_iters: u64,
    /// Reaching this loss counts as a global optimum.
    pub loss_tol: f64,
    /// Stopping threshold on the Frobenius norm of the full gradient.
    pub grad_tol: f64,
    /// Record every this-many iterations in the loss trace (0 = endpoints
    /// only).
    pub record_every: u64,
    /// Abort as budget-exhausted when the loss drops by less than 1% over
    /// this many iterations while still far from `loss_tol` (0 disables).
    /// A budget policy for large failure-heavy sweeps; runs cut here would
    /// not have reached tolerance within any comparable budget.
    pub stall_window: u64,
}

impl Default for GdConfig {
    fn default() -> Self {
        GdConfig {
            step: StepSize::Auto,
            max_iters: 100_000,
            loss_tol: 1e-10,
            grad_tol: 1e-8,
            record_every: 0,
            stall_window: 0,
        }
    }
}

/// Required relative loss decrease per stall window.
const STALL_MIN_DROP: f64 = 0.01;

/// How a finished run is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunClassification {
    /// Loss tolerance reached, or a gradient-stationary endpoint certified
    /// globally optimal.
    Global,
    /// Gradient-stationary endpoint with no negative-curvature certificate.
    ApproxLocalMin,
    /// Gradient-stationary endpoint with a certified descent direction.
    SaddleWithNegCurv,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Random,
    NearPlanted,
    Custom,
}

/// Outcome of one gradient descent run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub init_kind: InitKind,
    pub final_loss: f64,
    pub iters_used: u64,
    /// Sampled `(iteration, loss)` pairs; always contains the first and
    /// last evaluation.
    pub loss_trace: Vec<(u64, f64)>,
    /// True iff `final_loss ≤ loss_tol`.
    pub reached_global: bool,
    pub classification: RunClassification,
    pub final_params: NetworkParams,
    /// Step size in effect at the last iteration.
    pub final_step: f64,
}

/// Convergence constants of the local analysis around planted weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceConstants {
    pub beta: f64,
    /// PL-type gradient lower-bound factor `m_L = ½c²σ²_min(W)d²/n`.
    pub m_lower: f64,
    /// Gradient upper-bound factor `m_U = (9/2)C²σ²_max(W)k`.
    pub m_upper: f64,
    /// Sup-norm bound factor on `∇_v L`.
    pub m_upper_v: f64,
    /// Trust radius `R = (c/4C')σ_min(W)√(d/n)`.
    pub trust_radius: f64,
}

fn derivative_bounds(
    act: &Activation,
    params: &NetworkParams,
    data: Option<&Dataset>,
) -> Result<(f64, f64), OptimizerError> {
    let l = act
        .deriv2_bound()
        .ok_or_else(|| OptimizerError::Unsupported(String::from("activation without φ'' bound")))?;
    let b = match act.deriv1_bound() {
        Some(b) => b,
        None => {
            // Quadratic fallback: bound |φ'| empirically over the dataset.
            let data = data.ok_or_else(|| {
                OptimizerError::Unsupported(String::from(
                    "unbounded φ' needs a dataset for the empirical bound",
                ))
            })?;
            let z = params.w().matmul(data.x())?;
            let mut bound = 0.0f64;
            for i in 0..z.rows() {
                for &entry in z.row(i) {
                    bound = bound.max(Float::abs(act.deriv(entry).map_err(NetworkError::from)?));
                }
            }
            bound.max(1e-8)
        }
    };
    Ok((b, l))
}

/// Smoothness bound `β = (3C²σ²_max(W) + 8v²_max BL + 4B²w²_max + 2φ²(0))k`.
///
/// `reference` supplies the weight scales; pass the planted weights when
/// they exist, the starting point otherwise.
pub fn compute_beta(
    reference: &NetworkParams,
    act: &Activation,
    data: Option<&Dataset>,
    cal: &CalibrationConstants,
) -> Result<f64, OptimizerError> {
    let (b, l) = derivative_bounds(act, reference, data)?;
    let sigma_max = linalg::svd(reference.w())?.sigma_max();
    let v_max = linalg::norm_inf(reference.v());
    let w_max = reference.max_row_norm();
    let phi0 = act.value(0.0);
    let c = cal.c_smoothness;
    let k = reference.k() as f64;
    Ok((3.0 * c * c * sigma_max * sigma_max + 8.0 * v_max * v_max * b * l
        + 4.0 * b * b * w_max * w_max
        + 2.0 * phi0 * phi0)
        * k)
}

/// Convergence constants around the given planted weights.
pub fn convergence_constants(
    planted: &NetworkParams,
    act: &Activation,
    n: usize,
    class: MomentClass,
    cal: &CalibrationConstants,
) -> Result<ConvergenceConstants, OptimizerError> {
    let beta = compute_beta(planted, act, None, cal)?;
    let svd = linalg::svd(planted.w())?;
    let sigma_max = svd.sigma_max();
    // With an identically-zero curvature moment the spectral floor of the
    // Jacobian no longer scales with σ_min(W); the constants use 1 instead.
    let sigma_min_eff = match class {
        MomentClass::NonzeroSlopeZeroCurvature => 1.0,
        _ => svd.sigma_min(),
    };
    let d = planted.d() as f64;
    let k = planted.k() as f64;
    let nf = n as f64;
    let (b, l) = derivative_bounds(act, planted, None).unwrap_or((1.0, 1.0));
    let _ = l;
    let phi0 = act.value(0.0);
    let w_max = planted.max_row_norm();
    let m_lower = 0.5 * cal.c_lower * cal.c_lower * sigma_min_eff * sigma_min_eff * d * d / nf;
    let m_upper = 4.5 * cal.c_upper * cal.c_upper * sigma_max * sigma_max * k;
    let m_upper_v = 4.0 * phi0 * phi0 + 128.0 * b * b + 128.0 * b * b * w_max * w_max;
    let trust_radius =
        cal.c_lower / (4.0 * cal.c_perturbation) * sigma_min_eff * (d / nf).sqrt();
    Ok(ConvergenceConstants { beta, m_lower, m_upper, m_upper_v, trust_radius })
}

/// Initialization radii for local convergence experiments:
/// `r_W = C₀ σ³_min/σ_max · d^2.5/(n^1.5 k)` and
/// `r_v = C₀ σ³_min/σ_max · d^2.5/(n^1.5 k^1.5)`, with `σ_min` replaced by
/// one for zero-curvature-moment activations.
pub fn near_planted_radii(
    planted: &NetworkParams,
    n: usize,
    class: MomentClass,
    cal: &CalibrationConstants,
) -> Result<(f64, f64), OptimizerError> {
    let svd = linalg::svd(planted.w())?;
    let sigma_max = svd.sigma_max();
    let sigma_min_eff = match class {
        MomentClass::NonzeroSlopeZeroCurvature => 1.0,
        _ => svd.sigma_min(),
    };
    let d = planted.d() as f64;
    let k = planted.k() as f64;
    let nf = n as f64;
    let shared = cal.c_init * sigma_min_eff.powi(3) / sigma_max * d.powf(2.5) / nf.powf(1.5);
    Ok((shared / k, shared / k.powf(1.5)))
}

/// Random initialization: `v` with ±1 entries, `W` with `N(0,1)/√d` entries.
pub fn init_random(k: usize, d: usize, rng: &mut CounterRng) -> NetworkParams {
    let v: Vec<f64> = (0..k).map(|_| rng.rademacher()).collect();
    let scale = 1.0 / (d as f64).sqrt();
    let w = Matrix::from_fn(k, d, |_, _| rng.gaussian() * scale);
    NetworkParams::new(v, w).expect("generated weights are finite")
}

/// Perturb planted weights: `W₀ = W* + r_W · E` with `E` uniform on the
/// Frobenius sphere, and `v₀` entrywise uniform within `±r_v` of `v*`.
pub fn init_near_planted(
    planted: &NetworkParams,
    r_w: f64,
    r_v: f64,
    rng: &mut CounterRng,
) -> NetworkParams {
    let k = planted.k();
    let d = planted.d();
    let mut dir = Matrix::from_fn(k, d, |_, _| rng.gaussian());
    let nrm = dir.frobenius_norm();
    if nrm > 0.0 {
        dir = dir.scale(r_w / nrm);
    }
    let w = planted.w().add(&dir).expect("same shape");
    let v: Vec<f64> =
        planted.v().iter().map(|&vl| vl + r_v * (2.0 * rng.uniform() - 1.0)).collect();
    NetworkParams::new(v, w).expect("generated weights are finite")
}

const ADAPT_INTERVAL: u64 = 400;
const ADAPT_SAFETY: f64 = 0.9;
/// Floor on the adaptive safety factor; keeps transient instabilities from
/// collapsing the step to zero.
const ADAPT_MIN_SAFETY: f64 = ADAPT_SAFETY / 64.0;
const ADAPT_POWER_ITERS: usize = 12;

/// Largest Hessian eigenvalue at `params` via matrix-free power iteration,
/// warm-started from `seed_vec` when given.
fn estimate_hessian_norm(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    train_v: bool,
    warm: Option<&[f64]>,
    iters: usize,
) -> Result<(f64, Vec<f64>), OptimizerError> {
    let k = params.k();
    let d = params.d();
    let dim = k * d + if train_v { k } else { 0 };
    let start: Vec<f64> = match warm {
        Some(w) if w.len() == dim => w.to_vec(),
        _ => {
            let mut rng = CounterRng::new(0x5eed, dim as u64);
            (0..dim).map(|_| rng.gaussian()).collect()
        }
    };
    let mut failure: Option<OptimizerError> = None;
    let matvec = |x: &[f64]| -> Vec<f64> {
        let dir_w = Matrix::new(k, d, x[..k * d].to_vec()).unwrap_or_else(|_| Matrix::zeros(k, d));
        let dir_v = if train_v { Some(&x[k * d..]) } else { None };
        match hvp(params, data, act, &dir_w, dir_v.map(|s| &s[..])) {
            Ok((hw, hv)) => {
                let mut out = network::vec_weights(&hw);
                if let Some(hv) = hv {
                    out.extend_from_slice(&hv);
                }
                out
            }
            Err(e) => {
                failure = Some(e.into());
                vec![0.0; dim]
            }
        }
    };
    let (lambda, vector) = linalg::power_iteration(dim, matvec, &start, iters);
    match failure {
        Some(e) => Err(e),
        None => Ok((lambda, vector)),
    }
}

/// Run gradient descent from `params0`.
///
/// Updates are simultaneous in `v` and `W` (when `train_v`); the run stops
/// on `loss ≤ loss_tol`, on full-gradient norm `≤ grad_tol` (the endpoint
/// is then classified), or on budget exhaustion. A non-finite loss aborts
/// with [`OptimizerError::Diverged`].
pub fn gd_run(
    params0: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    cfg: &GdConfig,
    train_v: bool,
    seed: u64,
    init_kind: InitKind,
) -> Result<TrialRecord, OptimizerError> {
    let mut params = params0.clone();
    let mut trace: Vec<(u64, f64)> = Vec::new();
    let mut alpha = match cfg.step {
        StepSize::Fixed(a) => {
            if !(a > 0.0) {
                return Err(OptimizerError::Unsupported(String::from("step size must be > 0")));
            }
            a
        }
        StepSize::Auto => {
            let reference = data.planted().map(|p| &p.params).unwrap_or(params0);
            let beta = compute_beta(reference, act, Some(data), &CalibrationConstants::default())?;
            if beta <= 0.0 {
                return Err(OptimizerError::Unsupported(String::from("non-positive smoothness bound")));
            }
            1.0 / beta
        }
        StepSize::AdaptiveCurvature => 0.0, // resolved below
    };
    let adaptive = matches!(cfg.step, StepSize::AdaptiveCurvature);
    let mut eig_vec: Option<Vec<f64>> = None;
    let mut safety = ADAPT_SAFETY;
    if adaptive {
        let (lambda, vector) =
            estimate_hessian_norm(&params, data, act, train_v, None, 3 * ADAPT_POWER_ITERS)?;
        alpha = if lambda > 0.0 { safety / lambda } else { 1.0 };
        eig_vec = Some(vector);
    }

    let mut prev_loss = f64::INFINITY;
    let mut stall_anchor = f64::INFINITY;
    let mut iter: u64 = 0;
    loop {
        let (eval, gw, gv) = loss_and_grads(&params, data, act, train_v)?;
        if !eval.loss.is_finite() {
            return Err(OptimizerError::Diverged { iter });
        }
        let record = cfg.record_every > 0 && iter % cfg.record_every == 0;
        if record || iter == 0 {
            trace.push((iter, eval.loss));
        }
        let mut stalled_out = false;
        if cfg.stall_window > 0 && iter % cfg.stall_window == 0 {
            if eval.loss > stall_anchor * (1.0 - STALL_MIN_DROP) && eval.loss > 1e4 * cfg.loss_tol
            {
                stalled_out = true;
            }
            stall_anchor = eval.loss;
        }
        if eval.loss <= cfg.loss_tol {
            if !record && iter > 0 {
                trace.push((iter, eval.loss));
            }
            return Ok(TrialRecord {
                seed,
                init_kind,
                final_loss: eval.loss,
                iters_used: iter,
                loss_trace: trace,
                reached_global: true,
                classification: RunClassification::Global,
                final_params: params,
                final_step: alpha,
            });
        }
        let grad_sq = {
            let mut s = gw.frobenius_norm();
            s *= s;
            if let Some(gv) = &gv {
                let nv = norm2(gv);
                s += nv * nv;
            }
            s
        };
        if grad_sq.sqrt() <= cfg.grad_tol || iter >= cfg.max_iters || stalled_out {
            if !record && iter > 0 {
                trace.push((iter, eval.loss));
            }
            let classification = if iter >= cfg.max_iters || stalled_out {
                RunClassification::BudgetExhausted
            } else {
                classify_stationary_endpoint(&params, data, act)?
            };
            return Ok(TrialRecord {
                seed,
                init_kind,
                final_loss: eval.loss,
                iters_used: iter,
                loss_trace: trace,
                reached_global: eval.loss <= cfg.loss_tol,
                classification,
                final_params: params,
                final_step: alpha,
            });
        }

        if adaptive {
            // Only a relative increase counts as instability; near a
            // stationary point the loss jitters at roundoff level.
            let unstable = eval.loss > prev_loss * (1.0 + 1e-9);
            if unstable {
                safety = (safety * 0.5).max(ADAPT_MIN_SAFETY);
            }
            if iter % ADAPT_INTERVAL == 0 || unstable {
                if !unstable {
                    // Recover cautiously after clean windows.
                    safety = (safety * 1.25).min(ADAPT_SAFETY);
                }
                let (lambda, vector) = estimate_hessian_norm(
                    &params,
                    data,
                    act,
                    train_v,
                    eig_vec.as_deref(),
                    ADAPT_POWER_ITERS,
                )?;
                if lambda > 0.0 {
                    alpha = safety / lambda;
                }
                eig_vec = Some(vector);
            }
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(OptimizerError::Diverged { iter });
            }
        }
        prev_loss = eval.loss;

        // Simultaneous update from the gradients of this iterate.
        let stepped_w = params.w().sub(&gw.scale(alpha))?;
        *params.w_mut() = stepped_w;
        if let Some(gv) = gv {
            for (vl, gl) in params.v_mut().iter_mut().zip(gv.iter()) {
                *vl -= alpha * gl;
            }
        }
        iter += 1;
    }
}

/// Classify a gradient-stationary endpoint. Quadratic activations get the
/// certificate/negative-curvature analysis; other activations default to
/// an approximate local minimum (callers wanting eigenvalues run
/// [`classify_point`]).
fn classify_stationary_endpoint(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
) -> Result<RunClassification, OptimizerError> {
    if !matches!(act, Activation::Quadratic) {
        return Ok(RunClassification::ApproxLocalMin);
    }
    let cert = quadratic_global_certificate(params, data)?;
    if cert.is_global {
        return Ok(RunClassification::Global);
    }
    match negative_curvature_direction(params, data)? {
        NegativeCurvature::Direction { .. } => Ok(RunClassification::SaddleWithNegCurv),
        NegativeCurvature::None { .. } => Ok(RunClassification::ApproxLocalMin),
    }
}

/// Which parameters the Hessian is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HessianScope {
    /// `∇²_W L` only, i.e. `v` is held fixed.
    WeightsOnly,
    /// The joint Hessian in `(vec(W), v)`.
    Joint,
}

/// Smallest Hessian eigenvalue to absolute tolerance `tol`.
///
/// Dense Jacobi is used while the parameter count stays under the assembly
/// cap; larger problems switch to shifted power iteration on Hessian-vector
/// products.
pub fn min_hessian_eig(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    tol: f64,
    scope: HessianScope,
) -> Result<f64, OptimizerError> {
    let k = params.k();
    let d = params.d();
    let dim = match scope {
        HessianScope::WeightsOnly => k * d,
        HessianScope::Joint => k * d + k,
    };
    if dim + k <= HESSIAN_ASSEMBLY_CAP {
        let h = full_hessian(params, data, act)?;
        let block = match scope {
            HessianScope::Joint => h,
            HessianScope::WeightsOnly => Matrix::from_fn(k * d, k * d, |a, b| h.at(a, b)),
        };
        let eig = sym_eigen(&block)?;
        return Ok(*eig.values.last().expect("non-empty spectrum"));
    }
    // Matrix-free: λ_min = λ_shift - λ_max(λ_shift I - H) for any
    // λ_shift ≥ λ_max(H).
    let train_v = matches!(scope, HessianScope::Joint);
    let (lambda_max, warm) =
        estimate_hessian_norm(params, data, act, train_v, None, 300)?;
    let shift = Float::abs(lambda_max) * 1.05 + tol;
    let mut failure: Option<OptimizerError> = None;
    let matvec = |x: &[f64]| -> Vec<f64> {
        let dir_w = Matrix::new(k, d, x[..k * d].to_vec()).unwrap_or_else(|_| Matrix::zeros(k, d));
        let dir_v = if train_v { Some(&x[k * d..]) } else { None };
        match hvp(params, data, act, &dir_w, dir_v.map(|s| &s[..])) {
            Ok((hw, hv)) => {
                let mut out = network::vec_weights(&hw);
                if let Some(hv) = hv {
                    out.extend_from_slice(&hv);
                }
                for (o, xi) in out.iter_mut().zip(x.iter()) {
                    *o = shift * xi - *o;
                }
                out
            }
            Err(e) => {
                failure = Some(e.into());
                vec![0.0; dim]
            }
        }
    };
    let (lambda_shifted, _) = linalg::power_iteration(dim, matvec, &warm, 2000);
    match failure {
        Some(e) => Err(e),
        None => Ok(shift - lambda_shifted),
    }
}

/// Report of the approximate-local-minimum test at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxMinReport {
    pub eps_g: f64,
    pub eps_h: f64,
    pub grad_norm: f64,
    pub min_hessian_eig: f64,
    pub loss: f64,
    /// Loss bound certified for quadratic planted models with uniform
    /// same-sign output weights; absent otherwise.
    pub certified_loss_bound: Option<f64>,
    pub is_approx_local_min: bool,
}

/// Test the approximate-local-minimum condition
/// `‖∇L‖ ≤ ε_g` and `∇²L ⪰ −ε_H I` at `params`.
///
/// For quadratic planted datasets with `v = ν·1` (ν matching the sign of
/// the planted output weights) the report also carries the certified bound
/// `(ε_g/√ν)·max(√(1+14N), 4ε_g/√ν) + (ε_H/2ν)·N` with
/// `N = ‖W*ᵀD_{v*}W*‖_*`.
pub fn classify_point(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    eps_g: f64,
    eps_h: f64,
    scope: HessianScope,
) -> Result<ApproxMinReport, OptimizerError> {
    if !(eps_g >= 0.0 && eps_h >= 0.0) {
        return Err(OptimizerError::Unsupported(String::from("tolerances must be non-negative")));
    }
    let eval = network::loss_and_residuals(params, data, act)?;
    let gw = network::grad_w(params, data, act)?;
    let grad_norm = match scope {
        HessianScope::WeightsOnly => gw.frobenius_norm(),
        HessianScope::Joint => {
            let gv = network::grad_v(params, data, act)?;
            let nw = gw.frobenius_norm();
            let nv = norm2(&gv);
            (nw * nw + nv * nv).sqrt()
        }
    };
    let min_eig = min_hessian_eig(params, data, act, 1e-10, scope)?;
    let is_approx_local_min = grad_norm <= eps_g && min_eig >= -eps_h;

    let certified_loss_bound = match (data.planted(), act) {
        (Some(planted), Activation::Quadratic) => {
            uniform_output_weight(params.v()).and_then(|nu| {
                let planted_sign_ok = planted
                    .params
                    .v()
                    .iter()
                    .filter(|x| **x != 0.0)
                    .all(|&x| x.signum() == nu.signum());
                if !planted_sign_ok || nu <= 0.0 {
                    return None;
                }
                let gram = nuclear_norm_of_planted_gram(&planted.params).ok()?;
                let root_nu = nu.sqrt();
                let bound = eps_g / root_nu * (1.0 + 14.0 * gram).sqrt().max(4.0 * eps_g / root_nu)
                    + eps_h / (2.0 * nu) * gram;
                Some(bound)
            })
        }
        _ => None,
    };

    Ok(ApproxMinReport {
        eps_g,
        eps_h,
        grad_norm,
        min_hessian_eig: min_eig,
        loss: eval.loss,
        certified_loss_bound,
        is_approx_local_min,
    })
}

/// The common value of `v` when all entries coincide (exactly), else None.
fn uniform_output_weight(v: &[f64]) -> Option<f64> {
    let first = v[0];
    if v.iter().all(|&x| x == first) {
        Some(first)
    } else {
        None
    }
}

/// Least-squares fit of `ln L` against the iteration index over the trace
/// points with `lo < loss < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Slope of `ln L` per iteration (negative when converging).
    pub log_slope: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn fit_geometric_rate(trace: &[(u64, f64)], lo: f64, hi: f64) -> Option<RateFit> {
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .filter(|(_, loss)| *loss > lo && *loss < hi && loss.is_finite())
        .map(|(t, loss)| (*t as f64, Float::ln(*loss)))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sty = 0.0;
    let mut syy = 0.0;
    for (t, y) in &pts {
        stt += (t - mean_t) * (t - mean_t);
        sty += (t - mean_t) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if stt == 0.0 || syy == 0.0 {
        return None;
    }
    let slope = sty / stt;
    let r_squared = (sty * sty) / (stt * syy);
    Some(RateFit { log_slope: slope, r_squared, points: pts.len() })
}

/// Smallest smoothness constant `C` for which `β(C) ≥ λ_max(∇²L)` on every
/// provided instance, evaluated at points inside the trust region.
pub fn calibrate_smoothness(
    instances: &[(NetworkParams, Dataset, Activation)],
    margin: f64,
) -> Result<f64, OptimizerError> {
    let mut needed_sq = 0.0f64;
    for (planted, data, act) in instances {
        let h = full_hessian(planted, data, act)?;
        let lambda_max = sym_eigen(&h)?.values[0];
        let (b, l) = derivative_bounds(act, planted, Some(data))?;
        let sigma_max = linalg::svd(planted.w())?.sigma_max();
        let v_max = linalg::norm_inf(planted.v());
        let w_max = planted.max_row_norm();
        let phi0 = act.value(0.0);
        let k = planted.k() as f64;
        let base = 8.0 * v_max * v_max * b * l + 4.0 * b * b * w_max * w_max + 2.0 * phi0 * phi0;
        let c_sq = (lambda_max / k - base) / (3.0 * sigma_max * sigma_max);
        needed_sq = needed_sq.max(c_sq);
    }
    Ok((needed_sq.max(0.0)).sqrt() * margin)
}
