//! The one-hidden-layer model `x ↦ vᵀφ(Wx)`, its loss, and analytic
//! derivatives.
//!
//! Conventions used throughout:
//!
//! - `W ∈ ℝᵏˣᵈ` holds the input-hidden weights with row `ℓ` the weight
//!   vector of hidden unit `ℓ`; `v ∈ ℝᵏ` holds the hidden-output weights.
//! - The data matrix `X ∈ ℝᵈˣⁿ` has samples as columns; residuals are
//!   `rᵢ = vᵀφ(Wxᵢ) − yᵢ` and the loss is `L = (1/2n) ‖r‖²`.
//! - Weight matrices are flattened row-major (hidden unit major), so the
//!   flattened gradient satisfies `vec(∇_W L) = (1/n) J r` with the
//!   Jacobian `J = D_v φ'(WX) ∗ X ∈ ℝᵏᵈˣⁿ` (`∗` the Khatri-Rao product,
//!   column `i` made of the `k` blocks `v_ℓ φ'(w_ℓᵀxᵢ) xᵢ`).
//! - The Hessian in `v` is `(1/n) φ(WX) φ(WX)ᵀ`, carrying the same `1/n`
//!   normalization as the loss.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::activations::{Activation, ActivationError};
use crate::linalg::{dot, khatri_rao, norm2, sym_eigen, Matrix};
use crate::linalg::{LinalgError, RANK_TOL};

/// Relative tolerance of the quadratic global-optimality certificate.
pub const CERT_TOL: f64 = 1e-8;

/// A curvature this far below zero counts as a genuine descent direction.
pub const CURV_TOL: f64 = 1e-9;

/// Dense Hessians are assembled only up to this many parameters.
pub const HESSIAN_ASSEMBLY_CAP: usize = 2500;

/// Planted labels must regenerate to this absolute tolerance.
pub const PLANTED_REGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkError {
    Shape(String),
    Linalg(LinalgError),
    Activation(ActivationError),
    /// `kd + k` exceeded [`HESSIAN_ASSEMBLY_CAP`]; use the matrix-free paths.
    HessianTooLarge { params: usize, cap: usize },
    /// Planted provenance does not regenerate the stored labels.
    PlantedMismatch { max_err: f64 },
}

impl core::fmt::Display for NetworkError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NetworkError::Shape(msg) => write!(f, "shape error: {msg}"),
            NetworkError::Linalg(e) => write!(f, "{e}"),
            NetworkError::Activation(e) => write!(f, "{e}"),
            NetworkError::HessianTooLarge { params, cap } => {
                write!(f, "dense Hessian with {params} parameters exceeds cap {cap}")
            }
            NetworkError::PlantedMismatch { max_err } => {
                write!(f, "planted labels do not regenerate (max error {max_err:e})")
            }
        }
    }
}

impl core::error::Error for NetworkError {}

impl From<LinalgError> for NetworkError {
    fn from(e: LinalgError) -> Self {
        NetworkError::Linalg(e)
    }
}

impl From<ActivationError> for NetworkError {
    fn from(e: ActivationError) -> Self {
        NetworkError::Activation(e)
    }
}

/// The weight pair `(v, W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    v: Vec<f64>,
    w: Matrix,
}

impl NetworkParams {
    pub fn new(v: Vec<f64>, w: Matrix) -> Result<Self, NetworkError> {
        if v.is_empty() || v.len() != w.rows() {
            return Err(NetworkError::Shape(format!(
                "v has {} entries but W has {} rows",
                v.len(),
                w.rows()
            )));
        }
        if !v.iter().all(|x| x.is_finite()) || !w.is_finite() {
            return Err(NetworkError::Shape(String::from("non-finite weight")));
        }
        Ok(NetworkParams { v, w })
    }

    pub fn k(&self) -> usize {
        self.v.len()
    }

    pub fn d(&self) -> usize {
        self.w.cols()
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn v_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }

    pub fn w_mut(&mut self) -> &mut Matrix {
        &mut self.w
    }

    /// Largest row norm of `W`.
    pub fn max_row_norm(&self) -> f64 {
        (0..self.w.rows()).map(|l| norm2(self.w.row(l))).fold(0.0, f64::max)
    }
}

/// Ground-truth provenance of a planted dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    pub params: NetworkParams,
    pub activation: Activation,
}

/// Inputs `X ∈ ℝᵈˣⁿ` (columns are samples) and labels `y ∈ ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Matrix,
    y: Vec<f64>,
    planted: Option<Planted>,
}

impl Dataset {
    pub fn new(x: Matrix, y: Vec<f64>) -> Result<Self, NetworkError> {
        if x.cols() != y.len() || y.is_empty() {
            return Err(NetworkError::Shape(format!(
                "X has {} columns but y has {} entries",
                x.cols(),
                y.len()
            )));
        }
        if !y.iter().all(|x| x.is_finite()) {
            return Err(NetworkError::Shape(String::from("non-finite label")));
        }
        Ok(Dataset { x, y, planted: None })
    }

    /// Attach planted provenance, checking that it regenerates the labels.
    pub fn with_planted(mut self, planted: Planted) -> Result<Self, NetworkError> {
        let regen = forward(&planted.params, &self.x, &planted.activation)?;
        let max_err = regen
            .iter()
            .zip(&self.y)
            .map(|(a, b)| Float::abs(a - b))
            .fold(0.0, f64::max);
        if max_err > PLANTED_REGEN_TOL {
            return Err(NetworkError::PlantedMismatch { max_err });
        }
        self.planted = Some(planted);
        Ok(self)
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn d(&self) -> usize {
        self.x.rows()
    }

    pub fn n(&self) -> usize {
        self.x.cols()
    }

    pub fn planted(&self) -> Option<&Planted> {
        self.planted.as_ref()
    }
}

/// Loss value and the residual vector it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEval {
    pub loss: f64,
    pub residuals: Vec<f64>,
}

fn check_shapes(params: &NetworkParams, x: &Matrix) -> Result<(), NetworkError> {
    if params.w.cols() != x.rows() {
        return Err(NetworkError::Shape(format!(
            "W is {}x{} but X has {} rows",
            params.w.rows(),
            params.w.cols(),
            x.rows()
        )));
    }
    Ok(())
}

/// Apply `φ` entrywise.
fn map_matrix(z: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let mut out = z.clone();
    for x in out.data_mut() {
        *x = f(*x);
    }
    out
}

fn map_matrix_checked(
    z: &Matrix,
    f: impl Fn(f64) -> Result<f64, ActivationError>,
) -> Result<Matrix, NetworkError> {
    let mut out = z.clone();
    for x in out.data_mut() {
        *x = f(*x)?;
    }
    Ok(out)
}

/// `ŷᵢ = Σ_ℓ v_ℓ φ(⟨w_ℓ, xᵢ⟩)` for every column of `x`.
pub fn forward(params: &NetworkParams, x: &Matrix, act: &Activation) -> Result<Vec<f64>, NetworkError> {
    check_shapes(params, x)?;
    let z = params.w.matmul(x)?;
    let phi = map_matrix(&z, |t| act.value(t));
    Ok(phi.tr_mul_vec(&params.v)?)
}

pub fn loss_and_residuals(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
) -> Result<LossEval, NetworkError> {
    let yhat = forward(params, &data.x, act)?;
    let residuals: Vec<f64> = yhat.iter().zip(&data.y).map(|(a, b)| a - b).collect();
    let loss = 0.5 * dot(&residuals, &residuals) / data.n() as f64;
    Ok(LossEval { loss, residuals })
}

/// `∇_W L = D_v (1/n) Σᵢ rᵢ φ'(Wxᵢ) xᵢᵀ`, a `k×d` matrix.
pub fn grad_w(params: &NetworkParams, data: &Dataset, act: &Activation) -> Result<Matrix, NetworkError> {
    let eval = loss_and_residuals(params, data, act)?;
    grad_w_with_residuals(params, data, act, &eval.residuals)
}

fn grad_w_with_residuals(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    residuals: &[f64],
) -> Result<Matrix, NetworkError> {
    let n = data.n() as f64;
    let z = params.w.matmul(&data.x)?;
    let mut p1 = map_matrix_checked(&z, |t| act.deriv(t))?;
    // Scale column i by rᵢ, row ℓ by v_ℓ / n, then contract with Xᵀ>.
    for l in 0..p1.rows() {
        let scale = params.v[l] / n;
        let row = p1.row_mut(l);
        for (i, entry) in row.iter_mut().enumerate() {
            *entry *= scale * residuals[i];
        }
    }
    Ok(p1.matmul(&data.x.transpose())?)
}

/// Quadratic-activation form of the same gradient: `2 D_v W G` with
/// `G = (1/n) Σᵢ rᵢ xᵢxᵢᵀ`.
pub fn grad_w_quadratic(params: &NetworkParams, data: &Dataset) -> Result<Matrix, NetworkError> {
    let eval = loss_and_residuals(params, data, &Activation::Quadratic)?;
    let g = residual_moment_matrix(data, &eval.residuals)?;
    let mut out = params.w.matmul(&g)?;
    for l in 0..out.rows() {
        let scale = 2.0 * params.v[l];
        for entry in out.row_mut(l) {
            *entry *= scale;
        }
    }
    Ok(out)
}

/// `G = (1/n) Σᵢ rᵢ xᵢxᵢᵀ = (1/n) X D_r Xᵀ`.
pub fn residual_moment_matrix(data: &Dataset, residuals: &[f64]) -> Result<Matrix, NetworkError> {
    if residuals.len() != data.n() {
        return Err(NetworkError::Shape(String::from("residual length")));
    }
    let n = data.n() as f64;
    let scaled: Vec<f64> = residuals.iter().map(|r| r / n).collect();
    Ok(crate::linalg::weighted_gram(&data.x, &scaled)?)
}

/// `∇_v L = (1/n) φ(WX) r`.
pub fn grad_v(params: &NetworkParams, data: &Dataset, act: &Activation) -> Result<Vec<f64>, NetworkError> {
    let eval = loss_and_residuals(params, data, act)?;
    grad_v_with_residuals(params, data, act, &eval.residuals)
}

fn grad_v_with_residuals(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    residuals: &[f64],
) -> Result<Vec<f64>, NetworkError> {
    let n = data.n() as f64;
    let z = params.w.matmul(&data.x)?;
    let phi = map_matrix(&z, |t| act.value(t));
    let mut out = phi.mul_vec(residuals)?;
    for g in out.iter_mut() {
        *g /= n;
    }
    Ok(out)
}

/// Loss, residuals, and gradients from one shared forward pass. This is the
/// hot path of gradient descent; the quadratic activation takes the cheaper
/// `2 D_v W G` route.
pub fn loss_and_grads(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    train_v: bool,
) -> Result<(LossEval, Matrix, Option<Vec<f64>>), NetworkError> {
    check_shapes(params, &data.x)?;
    let n = data.n() as f64;
    let z = params.w.matmul(&data.x)?;
    let phi = match act {
        Activation::Quadratic => map_matrix(&z, |t| t * t),
        _ => map_matrix(&z, |t| act.value(t)),
    };
    let yhat = phi.tr_mul_vec(&params.v)?;
    let residuals: Vec<f64> = yhat.iter().zip(&data.y).map(|(a, b)| a - b).collect();
    let loss = 0.5 * dot(&residuals, &residuals) / n;
    let gw = match act {
        Activation::Quadratic => {
            let g = residual_moment_matrix(data, &residuals)?;
            let mut out = params.w.matmul(&g)?;
            for l in 0..out.rows() {
                let scale = 2.0 * params.v[l];
                for entry in out.row_mut(l) {
                    *entry *= scale;
                }
            }
            out
        }
        _ => {
            let mut p1 = map_matrix_checked(&z, |t| act.deriv(t))?;
            for l in 0..p1.rows() {
                let scale = params.v[l] / n;
                let row = p1.row_mut(l);
                for (i, entry) in row.iter_mut().enumerate() {
                    *entry *= scale * residuals[i];
                }
            }
            p1.matmul(&data.x.transpose())?
        }
    };
    let gv = if train_v {
        let mut out = phi.mul_vec(&residuals)?;
        for g in out.iter_mut() {
            *g /= n;
        }
        Some(out)
    } else {
        None
    };
    Ok((LossEval { loss, residuals }, gw, gv))
}

/// Flatten a `k×d` matrix in the hidden-unit-major (row-major) order used
/// for all `vec(·)` identities in this crate.
pub fn vec_weights(m: &Matrix) -> Vec<f64> {
    m.data().to_vec()
}

/// Inverse of [`vec_weights`].
pub fn unvec_weights(v: &[f64], k: usize, d: usize) -> Result<Matrix, NetworkError> {
    if v.len() != k * d {
        return Err(NetworkError::Shape(format!("cannot reshape {} entries to {k}x{d}", v.len())));
    }
    Ok(Matrix::new(k, d, v.to_vec())?)
}

/// The `kd×n` Jacobian `J = D_v φ'(WX) ∗ X`: column `i` stacks the blocks
/// `v_ℓ φ'(w_ℓᵀxᵢ) xᵢ` for `ℓ = 1..k`.
pub fn jacobian(params: &NetworkParams, data: &Dataset, act: &Activation) -> Result<Matrix, NetworkError> {
    check_shapes(params, &data.x)?;
    let z = params.w.matmul(&data.x)?;
    let mut p1 = map_matrix_checked(&z, |t| act.deriv(t))?;
    for l in 0..p1.rows() {
        let vl = params.v[l];
        for entry in p1.row_mut(l) {
            *entry *= vl;
        }
    }
    Ok(khatri_rao(&p1, &data.x)?)
}

/// Quadratic-activation form `J = 2 D_v (WX) ∗ X`.
pub fn jacobian_quadratic(params: &NetworkParams, data: &Dataset) -> Result<Matrix, NetworkError> {
    check_shapes(params, &data.x)?;
    let mut zx = params.w.matmul(&data.x)?;
    for l in 0..zx.rows() {
        let scale = 2.0 * params.v[l];
        for entry in zx.row_mut(l) {
            *entry *= scale;
        }
    }
    Ok(khatri_rao(&zx, &data.x)?)
}

/// `vec(U)ᵀ ∇²_W L vec(U)`:
/// `(1/n) Σᵢ rᵢ xᵢᵀUᵀD_vD_{φ''(Wxᵢ)}Uxᵢ + (1/n) Σᵢ (vᵀD_{φ'(Wxᵢ)}Uxᵢ)²`.
pub fn hessian_quadform_w(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    u: &Matrix,
) -> Result<f64, NetworkError> {
    if u.rows() != params.k() || u.cols() != params.d() {
        return Err(NetworkError::Shape(format!(
            "direction is {}x{}, expected {}x{}",
            u.rows(),
            u.cols(),
            params.k(),
            params.d()
        )));
    }
    let eval = loss_and_residuals(params, data, act)?;
    let n = data.n() as f64;
    let z = params.w.matmul(&data.x)?;
    let ux = u.matmul(&data.x)?;
    let mut total = 0.0;
    for i in 0..data.n() {
        let mut curvature_term = 0.0;
        let mut gauss_newton = 0.0;
        for l in 0..params.k() {
            let zi = z.at(l, i);
            let uxi = ux.at(l, i);
            curvature_term += params.v[l] * act.deriv2(zi)? * uxi * uxi;
            gauss_newton += params.v[l] * act.deriv(zi)? * uxi;
        }
        total += eval.residuals[i] * curvature_term + gauss_newton * gauss_newton;
    }
    Ok(total / n)
}

/// `∇²_v L = (1/n) φ(WX) φ(WX)ᵀ`, a PSD `k×k` matrix.
pub fn hessian_v(params: &NetworkParams, data: &Dataset, act: &Activation) -> Result<Matrix, NetworkError> {
    check_shapes(params, &data.x)?;
    let z = params.w.matmul(&data.x)?;
    let phi = map_matrix(&z, |t| act.value(t));
    Ok(phi.matmul(&phi.transpose())?.scale(1.0 / data.n() as f64))
}

/// Dense `(kd+k)×(kd+k)` Hessian in `(vec(W), v)` order.
///
/// Assembled only while `kd + k` stays under [`HESSIAN_ASSEMBLY_CAP`];
/// larger problems should use [`hvp`] and matrix-free iteration.
pub fn full_hessian(params: &NetworkParams, data: &Dataset, act: &Activation) -> Result<Matrix, NetworkError> {
    let k = params.k();
    let d = params.d();
    let total = k * d + k;
    if total > HESSIAN_ASSEMBLY_CAP {
        return Err(NetworkError::HessianTooLarge { params: total, cap: HESSIAN_ASSEMBLY_CAP });
    }
    check_shapes(params, &data.x)?;
    let n = data.n() as f64;
    let eval = loss_and_residuals(params, data, act)?;
    let z = params.w.matmul(&data.x)?;
    let p1 = map_matrix_checked(&z, |t| act.deriv(t))?;
    let p2 = map_matrix_checked(&z, |t| act.deriv2(t))?;
    let phi = map_matrix(&z, |t| act.value(t));

    let mut h = Matrix::zeros(total, total);
    // W-W block: (1/n) J Jᵀ plus the residual curvature block diagonal.
    let jac = jacobian(params, data, act)?;
    for a in 0..k * d {
        for b in a..k * d {
            let mut s = dot(jac.row(a), jac.row(b)) / n;
            let (la, ja) = (a / d, a % d);
            let (lb, jb) = (b / d, b % d);
            if la == lb {
                let mut blockdiag = 0.0;
                for i in 0..data.n() {
                    blockdiag += eval.residuals[i]
                        * p2.at(la, i)
                        * data.x.at(ja, i)
                        * data.x.at(jb, i);
                }
                s += params.v[la] * blockdiag / n;
            }
            *h.at_mut(a, b) = s;
            *h.at_mut(b, a) = s;
        }
    }
    // v-v block.
    for p in 0..k {
        for q in p..k {
            let s = dot(phi.row(p), phi.row(q)) / n;
            *h.at_mut(k * d + p, k * d + q) = s;
            *h.at_mut(k * d + q, k * d + p) = s;
        }
    }
    // Cross block: ∂²L/∂v_q ∂W_{ℓj}.
    for q in 0..k {
        for l in 0..k {
            for j in 0..d {
                let mut s = 0.0;
                for i in 0..data.n() {
                    let mut term = params.v[l] * p1.at(l, i) * phi.at(q, i);
                    if q == l {
                        term += eval.residuals[i] * p1.at(l, i);
                    }
                    s += term * data.x.at(j, i);
                }
                s /= n;
                *h.at_mut(k * d + q, l * d + j) = s;
                *h.at_mut(l * d + j, k * d + q) = s;
            }
        }
    }
    Ok(h)
}

/// Hessian-vector product `∇²L · (Ξ, ζ)` without assembling the Hessian.
///
/// Returns the `W`-part as a `k×d` matrix and the `v`-part as a `k`-vector.
/// With `dir_v = None` the output `v`-part is skipped and the product is the
/// pure `W`-block action (the Hessian of `L` as a function of `W` alone).
pub fn hvp(
    params: &NetworkParams,
    data: &Dataset,
    act: &Activation,
    dir_w: &Matrix,
    dir_v: Option<&[f64]>,
) -> Result<(Matrix, Option<Vec<f64>>), NetworkError> {
    if dir_w.rows() != params.k() || dir_w.cols() != params.d() {
        return Err(NetworkError::Shape(String::from("direction shape")));
    }
    if let Some(zeta) = dir_v {
        if zeta.len() != params.k() {
            return Err(NetworkError::Shape(String::from("direction shape")));
        }
    }
    check_shapes(params, &data.x)?;
    let k = params.k();
    let n = data.n();
    let nf = n as f64;
    let z = params.w.matmul(&data.x)?;
    let p1 = map_matrix_checked(&z, |t| act.deriv(t))?;
    let p2 = map_matrix_checked(&z, |t| act.deriv2(t))?;
    let phi = map_matrix(&z, |t| act.value(t));
    let yhat = phi.tr_mul_vec(&params.v)?;
    let residuals: Vec<f64> = yhat.iter().zip(&data.y).map(|(a, b)| a - b).collect();
    let ux = dir_w.matmul(&data.x)?;

    // Directional derivative of each residual.
    let mut s = vec![0.0; n];
    for i in 0..n {
        let mut si = 0.0;
        for l in 0..k {
            si += params.v[l] * p1.at(l, i) * ux.at(l, i);
            if let Some(zeta) = dir_v {
                si += zeta[l] * phi.at(l, i);
            }
        }
        s[i] = si;
    }

    // W-part: (1/n) [D_ζ φ'(Z) D_r + D_v (φ''(Z)∘UX) D_r + D_v φ'(Z) D_s] Xᵀ
    let mut coeff = Matrix::zeros(k, n);
    for l in 0..k {
        let zeta_l = dir_v.map_or(0.0, |z| z[l]);
        for i in 0..n {
            let mut c = params.v[l] * (p2.at(l, i) * ux.at(l, i) * residuals[i] + p1.at(l, i) * s[i]);
            c += zeta_l * p1.at(l, i) * residuals[i];
            *coeff.at_mut(l, i) = c / nf;
        }
    }
    let h_w = coeff.matmul(&data.x.transpose())?;

    let h_v = if dir_v.is_some() {
        let mut out = vec![0.0; k];
        for (l, out_l) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..n {
                acc += p1.at(l, i) * ux.at(l, i) * residuals[i] + phi.at(l, i) * s[i];
            }
            *out_l = acc / nf;
        }
        Some(out)
    } else {
        None
    };
    Ok((h_w, h_v))
}

/// Nuclear norm of the planted Gram matrix `WᵀD_vW`.
pub fn nuclear_norm_of_planted_gram(planted: &NetworkParams) -> Result<f64, NetworkError> {
    let mut dvw = planted.w().clone();
    for l in 0..planted.k() {
        let vl = planted.v()[l];
        for entry in dvw.row_mut(l) {
            *entry *= vl;
        }
    }
    let gram = planted.w().transpose().matmul(&dvw)?;
    Ok(crate::linalg::nuclear_norm(&gram)?)
}

/// Outcome of the quadratic global-optimality test.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalCertificate {
    pub is_global: bool,
    /// `‖(1/n) Σᵢ rᵢxᵢxᵢᵀ‖_F`, the quantity that must vanish at a global
    /// optimum of the quadratic-activation loss.
    pub residual_matrix_norm: f64,
}

/// Global optimality certificate for the quadratic activation.
///
/// With `φ(z) = z²` the loss is convex in `M = WᵀD_vW`, so
/// `(1/n) Σᵢ rᵢxᵢxᵢᵀ = 0` certifies a global optimum regardless of the
/// labels. The norm is compared against [`CERT_TOL`] relative to the scale
/// `1 + ‖(1/n) Σᵢ yᵢxᵢxᵢᵀ‖_F`.
pub fn quadratic_global_certificate(
    params: &NetworkParams,
    data: &Dataset,
) -> Result<GlobalCertificate, NetworkError> {
    let eval = loss_and_residuals(params, data, &Activation::Quadratic)?;
    let g = residual_moment_matrix(data, &eval.residuals)?;
    let scale_matrix = residual_moment_matrix(data, data.y())?;
    let norm = g.frobenius_norm();
    Ok(GlobalCertificate {
        is_global: norm <= CERT_TOL * (1.0 + scale_matrix.frobenius_norm()),
        residual_matrix_norm: norm,
    })
}

/// Why no negative-curvature direction was returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoCurvatureReason {
    /// Neither sign-restricted block of `D_v W` is rank deficient, so the
    /// rank-one construction does not apply here.
    SignBlocksFullRank,
    /// Candidate directions exist but none has curvature below `-CURV_TOL`.
    CurvatureNotNegative,
    /// `v` has no strictly positive and no strictly negative entries.
    NoSignedEntries,
}

/// Result of the saddle-direction construction.
#[derive(Debug, Clone, PartialEq)]
pub enum NegativeCurvature {
    /// A rank-one direction `U = abᵀ` with `vec(U)ᵀ∇²_W L vec(U) < 0`.
    Direction { u: Matrix, curvature: f64 },
    None { reason: NoCurvatureReason },
}

/// Search for a rank-one negative-curvature direction of the
/// quadratic-activation loss at `params`.
///
/// For each sign class `S` of `v` (strictly positive / strictly negative
/// entries), a left null vector `a` of `(D_vW)_S` makes the Gauss-Newton
/// term of the quadratic form vanish for `U = abᵀ`, leaving
/// `2(aᵀD_va) bᵀ((1/n)Σᵢrᵢxᵢxᵢᵀ)b`; `b` is then the extreme eigenvector
/// that drives this negative. Null vectors are read off the spectral
/// decomposition of the Gram matrix `(D_vW)_S (D_vW)_Sᵀ`.
pub fn negative_curvature_direction(
    params: &NetworkParams,
    data: &Dataset,
) -> Result<NegativeCurvature, NetworkError> {
    let k = params.k();
    let d = params.d();
    let positive: Vec<usize> = (0..k).filter(|&l| params.v[l] > 0.0).collect();
    let negative: Vec<usize> = (0..k).filter(|&l| params.v[l] < 0.0).collect();
    if positive.is_empty() && negative.is_empty() {
        return Ok(NegativeCurvature::None { reason: NoCurvatureReason::NoSignedEntries });
    }

    let eval = loss_and_residuals(params, data, &Activation::Quadratic)?;
    let g = residual_moment_matrix(data, &eval.residuals)?;
    let g_eig = sym_eigen(&g)?;

    let mut dv_w = params.w.clone();
    for l in 0..k {
        let vl = params.v[l];
        for entry in dv_w.row_mut(l) {
            *entry *= vl;
        }
    }

    let mut any_null = false;
    let mut best: Option<(Matrix, f64)> = None;
    for sign_set in [&positive, &negative] {
        if sign_set.is_empty() {
            continue;
        }
        let block = dv_w.select_rows(sign_set)?;
        let gram = block.matmul(&block.transpose())?;
        let eig = sym_eigen(&gram)?;
        let lambda_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
        let lambda_min = eig.values.last().copied().unwrap_or(0.0).max(0.0);
        let rank_floor = RANK_TOL * lambda_max.sqrt() * sign_set.len().max(d) as f64;
        if lambda_min.sqrt() > rank_floor {
            continue;
        }
        any_null = true;
        // Embed the null vector of the restricted block back into ℝᵏ.
        let mut a = vec![0.0; k];
        for (pos, &l) in sign_set.iter().enumerate() {
            a[l] = eig.vectors.at(pos, eig.values.len() - 1);
        }
        let a_dv_a: f64 = (0..k).map(|l| params.v[l] * a[l] * a[l]).sum();
        if a_dv_a == 0.0 {
            continue;
        }
        // Extreme eigenvector of sign(aᵀD_va)·G: most negative direction of
        // the product (aᵀD_va)·bᵀGb.
        let b: Vec<f64> = if a_dv_a > 0.0 {
            g_eig.vectors.col(g_eig.values.len() - 1)
        } else {
            g_eig.vectors.col(0)
        };
        let mut u = Matrix::zeros(k, d);
        for l in 0..k {
            for j in 0..d {
                *u.at_mut(l, j) = a[l] * b[j];
            }
        }
        let curvature = hessian_quadform_w(params, data, &Activation::Quadratic, &u)?;
        match &best {
            Some((_, c)) if *c <= curvature => {}
            _ => best = Some((u, curvature)),
        }
    }

    match best {
        Some((u, curvature)) if curvature <= -CURV_TOL => {
            Ok(NegativeCurvature::Direction { u, curvature })
        }
        _ if !any_null => Ok(NegativeCurvature::None { reason: NoCurvatureReason::SignBlocksFullRank }),
        _ => Ok(NegativeCurvature::None { reason: NoCurvatureReason::CurvatureNotNegative }),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rng::CounterRng;

    pub(crate) fn random_instance(
        rng: &mut CounterRng,
        k: usize,
        d: usize,
        n: usize,
    ) -> (NetworkParams, Dataset) {
        let w = Matrix::from_fn(k, d, |_, _| rng.gaussian());
        let v: Vec<f64> = (0..k).map(|_| rng.gaussian()).collect();
        let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
        let y: Vec<f64> = (0..n).map(|_| rng.gaussian()).collect();
        (NetworkParams::new(v, w).unwrap(), Dataset::new(x, y).unwrap())
    }

    fn planted_instance(
        rng: &mut CounterRng,
        act: &Activation,
        k: usize,
        d: usize,
        n: usize,
    ) -> (NetworkParams, Dataset) {
        let w = Matrix::from_fn(k, d, |_, _| rng.gaussian() / (d as f64).sqrt());
        let v: Vec<f64> = (0..k).map(|_| rng.rademacher()).collect();
        let params = NetworkParams::new(v, w).unwrap();
        let x = Matrix::from_fn(d, n, |_, _| rng.gaussian());
        let y = forward(&params, &x, act).unwrap();
        let data = Dataset::new(x, y)
            .unwrap()
            .with_planted(Planted { params: params.clone(), activation: *act })
            .unwrap();
        (params, data)
    }

    #[test]
    fn forward_hand_examples() {
        let params = NetworkParams::new(vec![1.0, 1.0], Matrix::identity(2)).unwrap();
        let x = Matrix::new(2, 1, vec![1.0, 2.0]).unwrap();
        let out = forward(&params, &x, &Activation::Quadratic).unwrap();
        assert_eq!(out, vec![5.0]);

        let zero_v = NetworkParams::new(vec![0.0, 0.0], Matrix::identity(2)).unwrap();
        for act in [Activation::Quadratic, Activation::Tanh, Activation::Softplus { b: 10.0 }] {
            assert_eq!(forward(&zero_v, &x, &act).unwrap(), vec![0.0]);
        }
    }

    #[test]
    fn planted_labels_regenerate() {
        let mut rng = CounterRng::new(1, 0);
        let (params, data) = planted_instance(&mut rng, &Activation::Quadratic, 4, 3, 6);
        let eval = loss_and_residuals(&params, &data, &Activation::Quadratic).unwrap();
        assert!(eval.loss < 1e-24);
        let yhat = forward(&params, data.x(), &Activation::Quadratic).unwrap();
        for (a, b) in yhat.iter().zip(data.y()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn planted_mismatch_is_rejected() {
        let mut rng = CounterRng::new(2, 0);
        let (params, data) = planted_instance(&mut rng, &Activation::Tanh, 3, 2, 5);
        let mut y = data.y().to_vec();
        y[0] += 1.0;
        let bad = Dataset::new(data.x().clone(), y)
            .unwrap()
            .with_planted(Planted { params, activation: Activation::Tanh });
        assert!(matches!(bad, Err(NetworkError::PlantedMismatch { .. })));
    }

    #[test]
    fn loss_matches_unvectorized_oracle() {
        let mut rng = CounterRng::new(3, 0);
        for act in
            [Activation::Quadratic, Activation::Softplus { b: 10.0 }, Activation::Tanh, Activation::Erf]
        {
            let (params, data) = random_instance(&mut rng, 4, 3, 7);
            let eval = loss_and_residuals(&params, &data, &act).unwrap();
            // Independent oracle: naive per-sample double loop.
            let mut total = 0.0;
            for i in 0..data.n() {
                let mut yhat = 0.0;
                for l in 0..params.k() {
                    let mut z = 0.0;
                    for j in 0..params.d() {
                        z += params.w().at(l, j) * data.x().at(j, i);
                    }
                    yhat += params.v()[l] * act.value(z);
                }
                let r = yhat - data.y()[i];
                assert!((r - eval.residuals[i]).abs() <= 1e-13 * r.abs().max(1.0));
                total += r * r;
            }
            let oracle = 0.5 * total / data.n() as f64;
            assert!((eval.loss - oracle).abs() <= 1e-13 * oracle.max(1.0));
        }
    }

    #[test]
    fn loss_offset_by_one_gives_half() {
        let mut rng = CounterRng::new(4, 0);
        let (params, data) = random_instance(&mut rng, 3, 2, 5);
        let yhat = forward(&params, data.x(), &Activation::Tanh).unwrap();
        let shifted: Vec<f64> = yhat.iter().map(|v| v + 1.0).collect();
        let data2 = Dataset::new(data.x().clone(), shifted).unwrap();
        let eval = loss_and_residuals(&params, &data2, &Activation::Tanh).unwrap();
        assert!((eval.loss - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gradients_vanish_at_planted_point() {
        let mut rng = CounterRng::new(5, 0);
        let (params, data) = planted_instance(&mut rng, &Activation::Softplus { b: 10.0 }, 4, 3, 8);
        let act = Activation::Softplus { b: 10.0 };
        assert!(grad_w(&params, &data, &act).unwrap().max_abs() < 1e-12);
        let gv = grad_v(&params, &data, &act).unwrap();
        assert!(crate::linalg::norm_inf(&gv) < 1e-12);
    }

    #[test]
    fn grad_v_single_unit_example() {
        // k=1, quadratic, W=(1,0), n=1, x=e1, y=0, v=(1): r=1, grad_v = φ(1).
        let params =
            NetworkParams::new(vec![1.0], Matrix::new(1, 2, vec![1.0, 0.0]).unwrap()).unwrap();
        let x = Matrix::new(2, 1, vec![1.0, 0.0]).unwrap();
        let data = Dataset::new(x, vec![0.0]).unwrap();
        let gv = grad_v(&params, &data, &Activation::Quadratic).unwrap();
        assert!((gv[0] - 1.0).abs() < 1e-15);
    }

    fn fd_grad_w(params: &NetworkParams, data: &Dataset, act: &Activation) -> Matrix {
        let mut out = Matrix::zeros(params.k(), params.d());
        for l in 0..params.k() {
            for j in 0..params.d() {
                let h = 1e-6 * (1.0 + params.w().at(l, j).abs());
                let mut plus = params.clone();
                *plus.w_mut().at_mut(l, j) += h;
                let mut minus = params.clone();
                *minus.w_mut().at_mut(l, j) -= h;
                let lp = loss_and_residuals(&plus, data, act).unwrap().loss;
                let lm = loss_and_residuals(&minus, data, act).unwrap().loss;
                *out.at_mut(l, j) = (lp - lm) / (2.0 * h);
            }
        }
        out
    }

    fn fd_grad_v(params: &NetworkParams, data: &Dataset, act: &Activation) -> Vec<f64> {
        (0..params.k())
            .map(|l| {
                let h = 1e-6 * (1.0 + params.v()[l].abs());
                let mut plus = params.clone();
                plus.v_mut()[l] += h;
                let mut minus = params.clone();
                minus.v_mut()[l] -= h;
                let lp = loss_and_residuals(&plus, data, act).unwrap().loss;
                let lm = loss_and_residuals(&minus, data, act).unwrap().loss;
                (lp - lm) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = CounterRng::new(6, 0);
        for act in [
            Activation::Quadratic,
            Activation::Softplus { b: 10.0 },
            Activation::Sigmoid { b: 4.0 },
            Activation::Erf,
            Activation::Tanh,
        ] {
            for _ in 0..6 {
                let (params, data) = random_instance(&mut rng, 4, 3, 6);
                let gw = grad_w(&params, &data, &act).unwrap();
                let fd = fd_grad_w(&params, &data, &act);
                for l in 0..4 {
                    for j in 0..3 {
                        let a = gw.at(l, j);
                        let b = fd.at(l, j);
                        assert!(
                            (a - b).abs() <= 1e-5 * a.abs().max(1.0),
                            "{act} grad_w[{l}][{j}]: {a} vs {b}"
                        );
                    }
                }
                let gv = grad_v(&params, &data, &act).unwrap();
                let fdv = fd_grad_v(&params, &data, &act);
                for l in 0..4 {
                    assert!(
                        (gv[l] - fdv[l]).abs() <= 1e-5 * gv[l].abs().max(1.0),
                        "{act} grad_v[{l}]: {} vs {}",
                        gv[l],
                        fdv[l]
                    );
                }
            }
        }
    }

    #[test]
    fn quadratic_gradient_specialization_agrees() {
        let mut rng = CounterRng::new(7, 0);
        for _ in 0..10 {
            let (params, data) = random_instance(&mut rng, 5, 3, 8);
            let generic = grad_w(&params, &data, &Activation::Quadratic).unwrap();
            let special = grad_w_quadratic(&params, &data).unwrap();
            let diff = generic.sub(&special).unwrap().max_abs();
            assert!(diff <= 1e-12 * generic.max_abs().max(1.0), "diff {diff}");
        }
    }

    #[test]
    fn jacobian_identities() {
        let mut rng = CounterRng::new(8, 0);
        for _ in 0..5 {
            let (params, data) = random_instance(&mut rng, 4, 3, 6);
            // Quadratic specialization.
            let j_generic = jacobian(&params, &data, &Activation::Quadratic).unwrap();
            let j_special = jacobian_quadratic(&params, &data).unwrap();
            assert!(j_generic.sub(&j_special).unwrap().max_abs() <= 1e-12);

            // vec(∇_W L) = (1/n) J r for every smooth activation.
            for act in [Activation::Quadratic, Activation::Tanh, Activation::Softplus { b: 4.0 }] {
                let eval = loss_and_residuals(&params, &data, &act).unwrap();
                let j = jacobian(&params, &data, &act).unwrap();
                let jr = j.mul_vec(&eval.residuals).unwrap();
                let gw = grad_w(&params, &data, &act).unwrap();
                let flat = vec_weights(&gw);
                let n = data.n() as f64;
                for (a, b) in flat.iter().zip(jr.iter()) {
                    assert!((a - b / n).abs() <= 1e-12, "{act}: {a} vs {}", b / n);
                }
            }
        }
    }

    #[test]
    fn jacobian_zero_output_weights() {
        let mut rng = CounterRng::new(9, 0);
        let (mut params, data) = random_instance(&mut rng, 3, 2, 4);
        for vl in params.v_mut() {
            *vl = 0.0;
        }
        let j = jacobian(&params, &data, &Activation::Tanh).unwrap();
        assert_eq!(j.max_abs(), 0.0);
    }

    #[test]
    fn hessian_quadform_cases() {
        let mut rng = CounterRng::new(10, 0);
        let act = Activation::Softplus { b: 4.0 };
        let (params, data) = planted_instance(&mut rng, &act, 4, 3, 8);
        // Residuals vanish, so the quadratic form is a sum of squares.
        for _ in 0..5 {
            let u = Matrix::from_fn(4, 3, |_, _| rng.gaussian());
            let q = hessian_quadform_w(&params, &data, &act, &u).unwrap();
            assert!(q >= -1e-12, "q = {q}");
        }
        let zero = Matrix::zeros(4, 3);
        assert_eq!(hessian_quadform_w(&params, &data, &act, &zero).unwrap(), 0.0);
    }

    #[test]
    fn hessian_quadform_matches_second_differences() {
        let mut rng = CounterRng::new(11, 0);
        for act in [Activation::Quadratic, Activation::Tanh, Activation::Sigmoid { b: 4.0 }] {
            let (params, data) = random_instance(&mut rng, 3, 3, 6);
            for _ in 0..3 {
                let u = Matrix::from_fn(3, 3, |_, _| rng.gaussian());
                let q = hessian_quadform_w(&params, &data, &act, &u).unwrap();
                let h = 1e-4;
                let shifted = |sign: f64| {
                    let mut p = params.clone();
                    let stepped = p.w().add(&u.scale(sign * h)).unwrap();
                    *p.w_mut() = stepped;
                    loss_and_residuals(&p, &data, &act).unwrap().loss
                };
                let fd = (shifted(1.0) - 2.0 * loss_and_residuals(&params, &data, &act).unwrap().loss
                    + shifted(-1.0))
                    / (h * h);
                assert!(
                    (q - fd).abs() <= 1e-4 * q.abs().max(1.0),
                    "{act}: quadform {q} vs second difference {fd}"
                );
            }
        }
    }

    #[test]
    fn hessian_v_properties() {
        // φ(WX) = 0 for tanh at W = 0.
        let params = NetworkParams::new(vec![1.0, -2.0], Matrix::zeros(2, 3)).unwrap();
        let mut rng = CounterRng::new(12, 0);
        let x = Matrix::from_fn(3, 4, |_, _| rng.gaussian());
        let data = Dataset::new(x, vec![1.0; 4]).unwrap();
        let h = hessian_v(&params, &data, &Activation::Tanh).unwrap();
        assert_eq!(h.max_abs(), 0.0);

        // Single sample: rank at most one.
        let (params, _) = random_instance(&mut rng, 3, 2, 5);
        let x1 = Matrix::from_fn(2, 1, |_, _| rng.gaussian());
        let data1 = Dataset::new(x1, vec![0.3]).unwrap();
        let h1 = hessian_v(&params, &data1, &Activation::Tanh).unwrap();
        let eig = sym_eigen(&h1).unwrap();
        assert!(eig.values[0] >= -1e-12);
        for &lambda in &eig.values[1..] {
            assert!(lambda.abs() < 1e-12);
        }

        // PSD and consistent with finite differences of grad_v.
        let (params, data) = random_instance(&mut rng, 4, 3, 7);
        let h = hessian_v(&params, &data, &Activation::Erf).unwrap();
        let eig = sym_eigen(&h).unwrap();
        assert!(*eig.values.last().unwrap() >= -1e-10);
        let hfd = {
            let mut out = Matrix::zeros(4, 4);
            for l in 0..4 {
                let h_step = 1e-6 * (1.0 + params.v()[l].abs());
                let mut plus = params.clone();
                plus.v_mut()[l] += h_step;
                let mut minus = params.clone();
                minus.v_mut()[l] -= h_step;
                let gp = grad_v(&plus, &data, &Activation::Erf).unwrap();
                let gm = grad_v(&minus, &data, &Activation::Erf).unwrap();
                for q in 0..4 {
                    *out.at_mut(q, l) = (gp[q] - gm[q]) / (2.0 * h_step);
                }
            }
            out
        };
        assert!(h.sub(&hfd).unwrap().max_abs() <= 1e-5 * h.max_abs().max(1.0));
    }

    #[test]
    fn full_hessian_is_symmetric_and_matches_quadforms() {
        let mut rng = CounterRng::new(13, 0);
        for act in [Activation::Quadratic, Activation::Tanh] {
            let (params, data) = random_instance(&mut rng, 3, 2, 6);
            let h = full_hessian(&params, &data, &act).unwrap();
            assert!(h.sub(&h.transpose()).unwrap().max_abs() <= 1e-10);
            // W block against hessian_quadform_w.
            let kd = 6;
            for _ in 0..4 {
                let u = Matrix::from_fn(3, 2, |_, _| rng.gaussian());
                let flat = vec_weights(&u);
                let mut quad = 0.0;
                for a in 0..kd {
                    for b in 0..kd {
                        quad += flat[a] * h.at(a, b) * flat[b];
                    }
                }
                let direct = hessian_quadform_w(&params, &data, &act, &u).unwrap();
                assert!(
                    (quad - direct).abs() <= 1e-10 * direct.abs().max(1.0),
                    "{act}: {quad} vs {direct}"
                );
            }
            // v block equals hessian_v.
            let hv = hessian_v(&params, &data, &act).unwrap();
            for p in 0..3 {
                for q in 0..3 {
                    assert!((h.at(kd + p, kd + q) - hv.at(p, q)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn full_hessian_matches_finite_differences_scalar_case() {
        // k = d = 1: the 2x2 Hessian in (W11, v1).
        let params = NetworkParams::new(vec![0.7], Matrix::new(1, 1, vec![1.3]).unwrap()).unwrap();
        let x = Matrix::new(1, 3, vec![0.5, -1.0, 2.0]).unwrap();
        let data = Dataset::new(x, vec![0.2, -0.3, 1.0]).unwrap();
        let act = Activation::Tanh;
        let h = full_hessian(&params, &data, &act).unwrap();
        let step = 1e-4;
        let loss_at = |dw: f64, dv: f64| {
            let mut p = params.clone();
            *p.w_mut().at_mut(0, 0) += dw;
            p.v_mut()[0] += dv;
            loss_and_residuals(&p, &data, &act).unwrap().loss
        };
        let l0 = loss_at(0.0, 0.0);
        let h_ww = (loss_at(step, 0.0) - 2.0 * l0 + loss_at(-step, 0.0)) / (step * step);
        let h_vv = (loss_at(0.0, step) - 2.0 * l0 + loss_at(0.0, -step)) / (step * step);
        let h_wv = (loss_at(step, step) - loss_at(step, -step) - loss_at(-step, step)
            + loss_at(-step, -step))
            / (4.0 * step * step);
        assert!((h.at(0, 0) - h_ww).abs() <= 1e-4 * h_ww.abs().max(1.0));
        assert!((h.at(1, 1) - h_vv).abs() <= 1e-4 * h_vv.abs().max(1.0));
        assert!((h.at(0, 1) - h_wv).abs() <= 1e-4 * h_wv.abs().max(1.0));
    }

    #[test]
    fn full_hessian_respects_cap() {
        let params = NetworkParams::new(vec![1.0; 60], Matrix::zeros(60, 50)).unwrap();
        let x = Matrix::zeros(50, 2);
        let data = Dataset::new(x, vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            full_hessian(&params, &data, &Activation::Quadratic),
            Err(NetworkError::HessianTooLarge { .. })
        ));
    }

    #[test]
    fn hvp_matches_dense_hessian() {
        let mut rng = CounterRng::new(14, 0);
        for act in [Activation::Quadratic, Activation::Softplus { b: 4.0 }] {
            let (params, data) = random_instance(&mut rng, 3, 2, 5);
            let h = full_hessian(&params, &data, &act).unwrap();
            let kd = 6;
            for _ in 0..4 {
                let dir_w = Matrix::from_fn(3, 2, |_, _| rng.gaussian());
                let dir_v: Vec<f64> = (0..3).map(|_| rng.gaussian()).collect();
                let (hw, hv) = hvp(&params, &data, &act, &dir_w, Some(&dir_v)).unwrap();
                let mut flat = vec_weights(&dir_w);
                flat.extend_from_slice(&dir_v);
                let dense = h.mul_vec(&flat).unwrap();
                let flat_hw = vec_weights(&hw);
                for i in 0..kd {
                    assert!(
                        (dense[i] - flat_hw[i]).abs() <= 1e-10 * dense[i].abs().max(1.0),
                        "{act} W part {i}"
                    );
                }
                let hv = hv.unwrap();
                for q in 0..3 {
                    assert!(
                        (dense[kd + q] - hv[q]).abs() <= 1e-10 * dense[kd + q].abs().max(1.0),
                        "{act} v part {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn hvp_without_v_direction_is_w_block_action() {
        let mut rng = CounterRng::new(15, 0);
        let act = Activation::Tanh;
        let (params, data) = random_instance(&mut rng, 3, 2, 5);
        let h = full_hessian(&params, &data, &act).unwrap();
        let dir_w = Matrix::from_fn(3, 2, |_, _| rng.gaussian());
        let (hw, hv) = hvp(&params, &data, &act, &dir_w, None).unwrap();
        assert!(hv.is_none());
        let flat = vec_weights(&dir_w);
        let flat_hw = vec_weights(&hw);
        for a in 0..6 {
            let expect: f64 = (0..6).map(|b| h.at(a, b) * flat[b]).sum();
            assert!((flat_hw[a] - expect).abs() <= 1e-10 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn certificate_at_planted_point() {
        let mut rng = CounterRng::new(16, 0);
        let (params, data) = planted_instance(&mut rng, &Activation::Quadratic, 4, 3, 6);
        let cert = quadratic_global_certificate(&params, &data).unwrap();
        assert!(cert.is_global);
        assert!(cert.residual_matrix_norm < 1e-12);
    }

    #[test]
    fn certificate_rejects_zero_weights_on_generic_labels() {
        let mut rng = CounterRng::new(17, 0);
        let x = Matrix::from_fn(3, 6, |_, _| rng.gaussian());
        let y: Vec<f64> = (0..6).map(|_| rng.gaussian() + 2.0).collect();
        let data = Dataset::new(x, y).unwrap();
        let params = NetworkParams::new(vec![1.0, -1.0, 0.5, 0.2], Matrix::zeros(4, 3)).unwrap();
        let cert = quadratic_global_certificate(&params, &data).unwrap();
        assert!(!cert.is_global);
        assert!(cert.residual_matrix_norm > 0.1);
    }

    #[test]
    fn negative_curvature_at_global_point_is_none() {
        let mut rng = CounterRng::new(18, 0);
        let (params, data) = planted_instance(&mut rng, &Activation::Quadratic, 4, 3, 6);
        let out = negative_curvature_direction(&params, &data).unwrap();
        assert!(matches!(out, NegativeCurvature::None { .. }), "{out:?}");
    }

    #[test]
    fn negative_curvature_scalar_toy() {
        // W = 0 (2x1), v = (1, -1), one sample x = 1, y = 1: r = -1 and the
        // rank-one direction from either sign class has curvature -2.
        let params = NetworkParams::new(vec![1.0, -1.0], Matrix::zeros(2, 1)).unwrap();
        let x = Matrix::new(1, 1, vec![1.0]).unwrap();
        let data = Dataset::new(x, vec![1.0]).unwrap();
        match negative_curvature_direction(&params, &data).unwrap() {
            NegativeCurvature::Direction { u, curvature } => {
                assert!((curvature - (-2.0)).abs() < 1e-12, "curvature {curvature}");
                // Brute force over all unit rank-one sign choices: -2 is the
                // most negative value attainable.
                let mut brute_best = 0.0f64;
                for a0 in [-1.0, 0.0, 1.0] {
                    for a1 in [-1.0, 0.0, 1.0] {
                        let nrm = (a0 * a0 + a1 * a1) as f64;
                        if nrm == 0.0 {
                            continue;
                        }
                        let cand = Matrix::new(2, 1, vec![a0 / nrm.sqrt(), a1 / nrm.sqrt()]).unwrap();
                        let q = hessian_quadform_w(&params, &data, &Activation::Quadratic, &cand)
                            .unwrap();
                        brute_best = brute_best.min(q);
                    }
                }
                assert!((brute_best - (-2.0)).abs() < 1e-12);
                assert!(u.frobenius_norm() > 0.0);
            }
            other => panic!("expected a direction, got {other:?}"),
        }
    }

    #[test]
    fn negative_curvature_found_at_zero_weights() {
        // W = 0 with mixed-sign v: both sign blocks are rank deficient and
        // the returned curvature must match the quadratic form exactly while
        // staying above the dense W-block minimum eigenvalue.
        let mut rng = CounterRng::new(19, 0);
        let d = 3;
        let k = 6;
        let x = Matrix::from_fn(d, 8, |_, _| rng.gaussian());
        let y: Vec<f64> = (0..8).map(|_| rng.gaussian()).collect();
        let data = Dataset::new(x, y).unwrap();
        let v: Vec<f64> = (0..k).map(|l| if l < 3 { 1.0 } else { -1.0 }).collect();
        let params = NetworkParams::new(v, Matrix::zeros(k, d)).unwrap();
        match negative_curvature_direction(&params, &data).unwrap() {
            NegativeCurvature::Direction { u, curvature } => {
                assert!(curvature < 0.0);
                let direct = hessian_quadform_w(&params, &data, &Activation::Quadratic, &u).unwrap();
                assert!((curvature - direct).abs() <= 1e-10 * direct.abs().max(1.0));
                // Oracle: dense W-block Hessian minimum eigenvalue divided by
                // ‖U‖² lower-bounds the curvature.
                let h = full_hessian(&params, &data, &Activation::Quadratic).unwrap();
                let kd = k * d;
                let wblock = Matrix::from_fn(kd, kd, |a, b| h.at(a, b));
                let lambda_min = *sym_eigen(&wblock).unwrap().values.last().unwrap();
                let norm_sq = u.frobenius_norm() * u.frobenius_norm();
                assert!(curvature >= lambda_min * norm_sq - 1e-10);
            }
            other => panic!("expected a direction, got {other:?}"),
        }
    }

    #[test]
    fn negative_curvature_reports_unsigned_weights() {
        let params = NetworkParams::new(vec![0.0, 0.0], Matrix::zeros(2, 2)).unwrap();
        let x = Matrix::identity(2);
        let data = Dataset::new(x, vec![1.0, 1.0]).unwrap();
        match negative_curvature_direction(&params, &data).unwrap() {
            NegativeCurvature::None { reason } => {
                assert_eq!(reason, NoCurvatureReason::NoSignedEntries)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fused_loss_and_grads_agree_with_separate_paths() {
        let mut rng = CounterRng::new(20, 0);
        for act in [Activation::Quadratic, Activation::Softplus { b: 10.0 }] {
            let (params, data) = random_instance(&mut rng, 4, 3, 7);
            let (eval, gw, gv) = loss_and_grads(&params, &data, &act, true).unwrap();
            let eval2 = loss_and_residuals(&params, &data, &act).unwrap();
            assert!((eval.loss - eval2.loss).abs() <= 1e-15 * eval2.loss.max(1.0));
            let gw2 = grad_w(&params, &data, &act).unwrap();
            assert!(gw.sub(&gw2).unwrap().max_abs() <= 1e-12 * gw2.max_abs().max(1.0));
            let gv2 = grad_v(&params, &data, &act).unwrap();
            for (a, b) in gv.unwrap().iter().zip(gv2.iter()) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
