//! Dense real matrix and vector kernels.
//!
//! Everything is `f64`, row-major, and allocated up front; shapes at play
//! in this crate stay well under 500×500, so the simple O(n³) algorithms
//! here (one-sided Jacobi SVD, cyclic Jacobi eigensolver) are both fast
//! enough and accurate to near machine precision.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Relative tolerance defining "full column rank": the smallest singular
/// value must exceed `RANK_TOL * sigma_max * max(rows, cols)`.
pub const RANK_TOL: f64 = 1e-10;

/// Jacobi rotation threshold on the normalized off-diagonal mass.
const JACOBI_TOL: f64 = 1e-12;

/// Sweep cap for both Jacobi solvers.
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// Operand shapes are incompatible with the requested operation.
    DimensionMismatch(String),
    /// A matrix was constructed from, or asked to hold, NaN/Inf entries.
    NonFinite,
    /// Construction with zero rows or columns, or an entry count that does
    /// not match the declared shape.
    BadShape(String),
    /// The input was required to have full column rank but does not.
    RankDeficient { sigma_min: f64, sigma_max: f64 },
    /// An iterative solver hit its sweep cap before converging.
    NoConvergence { sweeps: usize, off_diagonal: f64 },
}

impl core::fmt::Display for LinalgError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LinalgError::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            LinalgError::NonFinite => write!(f, "non-finite matrix entry"),
            LinalgError::BadShape(msg) => write!(f, "bad shape: {msg}"),
            LinalgError::RankDeficient { sigma_min, sigma_max } => {
                write!(f, "rank-deficient input: sigma_min={sigma_min:e}, sigma_max={sigma_max:e}")
            }
            LinalgError::NoConvergence { sweeps, off_diagonal } => {
                write!(f, "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")
            }
        }
    }
}

impl core::error::Error for LinalgError {}

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Validating constructor: shape must be non-empty and consistent, all
    /// entries finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::BadShape(format!("{rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadShape(format!(
                "{rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        if rows.is_empty() {
            return Err(LinalgError::BadShape(String::from("no rows")));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::BadShape(String::from("ragged rows")));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Matrix::new(rows.len(), cols, data)
    }

    /// Column vector from a slice.
    pub fn column_vector(v: &[f64]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        // (i, k, j) order keeps the inner loop contiguous in both operands.
        for i in 0..self.rows {
            let arow = self.row(i);
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &aik) in arow.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    /// `A x` for a slice `x` of length `cols`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * vec[{}]",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `Aᵀ x` for a slice `x` of length `rows`.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{}ᵀ * vec[{}]",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i).iter()) {
                *o += xi * a;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(Float::abs(*x)))
    }

    /// Frobenius inner product `⟨A, B⟩ = Σᵢⱼ AᵢⱼBᵢⱼ`.
    pub fn frobenius_dot(&self, other: &Matrix) -> Result<f64, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(&a, &b)| a * b).sum())
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a == 0.0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        *out.at_mut(i * other.rows + p, j * other.cols + q) = a * other.at(p, q);
                    }
                }
            }
        }
        out
    }

    /// Keep only the listed rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Matrix, LinalgError> {
        if indices.is_empty() {
            return Err(LinalgError::BadShape(String::from("no rows selected")));
        }
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            if i >= self.rows {
                return Err(LinalgError::BadShape(format!("row {i} out of {}", self.rows)));
            }
            data.extend_from_slice(self.row(i));
        }
        Ok(Matrix { rows: indices.len(), cols: self.cols, data })
    }
}

/// Symmetric weighted Gram matrix `X D_w Xᵀ` (a `rows×rows` matrix from a
/// `rows×n` input and `n` weights), computed on the upper triangle only
/// and mirrored.
pub fn weighted_gram(x: &Matrix, weights: &[f64]) -> Result<Matrix, LinalgError> {
    if weights.len() != x.cols {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} weights for {} columns",
            weights.len(),
            x.cols
        )));
    }
    let d = x.rows;
    let mut scaled = x.clone();
    for i in 0..d {
        for (entry, &w) in scaled.row_mut(i).iter_mut().zip(weights.iter()) {
            *entry *= w;
        }
    }
    let mut out = Matrix::zeros(d, d);
    for i in 0..d {
        let si = scaled.row(i);
        for j in i..d {
            let v = dot(si, x.row(j));
            *out.at_mut(i, j) = v;
            *out.at_mut(j, i) = v;
        }
    }
    Ok(out)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(Float::abs(*x)))
}

/// Khatri-Rao product: column `j` of the result is `A[:,j] ⊗ B[:,j]`.
pub fn khatri_rao(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.cols != b.cols {
        return Err(LinalgError::DimensionMismatch(format!(
            "khatri_rao: {} vs {} columns",
            a.cols, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows * b.rows, a.cols);
    for j in 0..a.cols {
        for i in 0..a.rows {
            let aij = a.at(i, j);
            for p in 0..b.rows {
                *out.at_mut(i * b.rows + p, j) = aij * b.at(p, j);
            }
        }
    }
    Ok(out)
}

/// Entrywise (Hadamard) product.
pub fn hadamard(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    a.zip_with(b, |x, y| x * y)
}

/// Thin singular value decomposition `A = U Σ Vᵀ`.
///
/// `u` is `m×r` and `v` is `n×r` with orthonormal columns, `r = min(m, n)`,
/// and the singular values are non-increasing and non-negative.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// `U Σ Vᵀ`, for reconstruction checks.
    pub fn reconstruct(&self) -> Matrix {
        let r = self.singular_values.len();
        let mut scaled = self.u.clone();
        for j in 0..r {
            for i in 0..scaled.rows {
                *scaled.at_mut(i, j) *= self.singular_values[j];
            }
        }
        scaled.matmul(&self.v.transpose()).expect("shape fixed by construction")
    }
}

/// One-sided Jacobi SVD.
///
/// Columns of the working copy are rotated pairwise until all are mutually
/// orthogonal to relative tolerance `1e-12`; singular values are then the
/// column norms. Wide inputs are handled by factoring the transpose.
pub fn svd(a: &Matrix) -> Result<SvdResult, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if a.rows < a.cols {
        let t = svd(&a.transpose())?;
        return Ok(SvdResult { u: t.v, singular_values: t.singular_values, v: t.u });
    }
    let m = a.rows;
    let n = a.cols;
    // Work on columns: b[j] is the j-th column of the evolving matrix.
    let mut b: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v = Matrix::identity(n);

    // Rotations preserve the Frobenius norm, so this floor is stable:
    // columns this small carry singular values at roundoff level and
    // rotating them against each other never converges.
    let floor = f64::EPSILON * a.frobenius_norm();
    let floor_sq = floor * floor;

    let mut converged = false;
    let mut last_off = 0.0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        last_off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = dot(&b[p], &b[p]);
                let aqq = dot(&b[q], &b[q]);
                let apq = dot(&b[p], &b[q]);
                let denom = (app * aqq).sqrt();
                if denom == 0.0 || app <= floor_sq || aqq <= floor_sq {
                    continue;
                }
                let ratio = Float::abs(apq) / denom;
                last_off = last_off.max(ratio);
                if ratio <= JACOBI_TOL {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = Float::signum(zeta) / (Float::abs(zeta) + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let bp = b[p][i];
                    let bq = b[q][i];
                    b[p][i] = c * bp - s * bq;
                    b[q][i] = s * bp + c * bq;
                }
                for i in 0..n {
                    let vp = v.at(i, p);
                    let vq = v.at(i, q);
                    *v.at_mut(i, p) = c * vp - s * vq;
                    *v.at_mut(i, q) = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_diagonal: last_off });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = b.iter().map(|c| norm2(c)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("norms are finite"));

    let mut u = Matrix::zeros(m, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut v_sorted = Matrix::zeros(n, n);
    let sigma_max = norms[order[0]];
    for (pos, &j) in order.iter().enumerate() {
        singular_values.push(norms[j]);
        for i in 0..n {
            *v_sorted.at_mut(i, pos) = v.at(i, j);
        }
        if norms[j] > sigma_max * f64::EPSILON * m as f64 && norms[j] > 0.0 {
            for i in 0..m {
                *u.at_mut(i, pos) = b[j][i] / norms[j];
            }
        }
    }
    complete_orthonormal_columns(&mut u, &singular_values, sigma_max);
    Ok(SvdResult { u, singular_values, v: v_sorted })
}

/// Replace the (zero) left singular vectors of numerically-null directions
/// with an orthonormal completion, so `u` always has orthonormal columns.
fn complete_orthonormal_columns(u: &mut Matrix, sigma: &[f64], sigma_max: f64) {
    let m = u.rows;
    let n = u.cols;
    for j in 0..n {
        if sigma[j] > sigma_max * f64::EPSILON * m as f64 && sigma[j] > 0.0 {
            continue;
        }
        // Gram-Schmidt a standard basis vector against everything so far.
        let mut chosen = None;
        for e in 0..m {
            let mut cand = vec![0.0; m];
            cand[e] = 1.0;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let col: Vec<f64> = (0..m).map(|i| u.at(i, k)).collect();
                let proj = dot(&cand, &col);
                for i in 0..m {
                    cand[i] -= proj * col[i];
                }
            }
            let nrm = norm2(&cand);
            if nrm > 0.5 {
                for x in cand.iter_mut() {
                    *x /= nrm;
                }
                chosen = Some(cand);
                break;
            }
        }
        if let Some(cand) = chosen {
            for i in 0..m {
                *u.at_mut(i, j) = cand[i];
            }
        }
    }
}

/// Largest singular value.
pub fn operator_norm(a: &Matrix) -> Result<f64, LinalgError> {
    Ok(svd(a)?.sigma_max())
}

/// Sum of singular values.
pub fn nuclear_norm(a: &Matrix) -> Result<f64, LinalgError> {
    Ok(svd(a)?.singular_values.iter().sum())
}

/// Symmetric eigendecomposition `A = S Λ Sᵀ` by cyclic Jacobi rotations.
///
/// `values` are sorted in decreasing order; column `j` of `vectors` is the
/// eigenvector for `values[j]`. The input must be symmetric to within
/// `1e-10` times its Frobenius norm.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

pub fn sym_eigen(a: &Matrix) -> Result<SymEigen, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::DimensionMismatch(format!("sym_eigen on {}x{}", a.rows, a.cols)));
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows;
    let scale = a.frobenius_norm();
    for i in 0..n {
        for j in (i + 1)..n {
            if Float::abs(a.at(i, j) - a.at(j, i)) > 1e-10 * scale.max(1.0) {
                return Err(LinalgError::BadShape(format!(
                    "not symmetric at ({i},{j}): {} vs {}",
                    a.at(i, j),
                    a.at(j, i)
                )));
            }
        }
    }
    let mut w = a.clone();
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (w.at(i, j) + w.at(j, i));
            *w.at_mut(i, j) = s;
            *w.at_mut(j, i) = s;
        }
    }
    let mut vectors = Matrix::identity(n);
    let mut converged = n <= 1;
    let mut last_off = 0.0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if n <= 1 {
            break;
        }
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += w.at(i, j) * w.at(i, j);
            }
        }
        last_off = (2.0 * off).sqrt();
        if last_off <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.at(p, q);
                if Float::abs(apq) <= 1e-300 {
                    continue;
                }
                let app = w.at(p, p);
                let aqq = w.at(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = Float::signum(theta) / (Float::abs(theta) + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let wip = w.at(i, p);
                    let wiq = w.at(i, q);
                    *w.at_mut(i, p) = c * wip - s * wiq;
                    *w.at_mut(i, q) = s * wip + c * wiq;
                }
                for i in 0..n {
                    let wpi = w.at(p, i);
                    let wqi = w.at(q, i);
                    *w.at_mut(p, i) = c * wpi - s * wqi;
                    *w.at_mut(q, i) = s * wpi + c * wqi;
                }
                for i in 0..n {
                    let vip = vectors.at(i, p);
                    let viq = vectors.at(i, q);
                    *vectors.at_mut(i, p) = c * vip - s * viq;
                    *vectors.at_mut(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_diagonal: last_off });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| w.at(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("diag is finite"));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut sorted = Matrix::zeros(n, n);
    for (pos, &j) in order.iter().enumerate() {
        for i in 0..n {
            *sorted.at_mut(i, pos) = vectors.at(i, j);
        }
    }
    Ok(SymEigen { values, vectors: sorted })
}

/// Left inverse `M` of a full-column-rank `k×d` matrix: `M A = I_d`.
///
/// Rank deficiency (relative to [`RANK_TOL`]) is reported as an error so
/// callers can branch on it.
pub fn pseudo_left_inverse(a: &Matrix) -> Result<Matrix, LinalgError> {
    let decomp = svd(a)?;
    let sigma_max = decomp.sigma_max();
    let sigma_min = decomp.sigma_min();
    if a.rows < a.cols || sigma_min <= RANK_TOL * sigma_max * a.rows.max(a.cols) as f64 {
        return Err(LinalgError::RankDeficient { sigma_min, sigma_max });
    }
    // M = V Σ⁻¹ Uᵀ
    let d = a.cols;
    let mut scaled_v = decomp.v.clone();
    for j in 0..d {
        for i in 0..d {
            *scaled_v.at_mut(i, j) /= decomp.singular_values[j];
        }
    }
    scaled_v.matmul(&decomp.u.transpose())
}

/// Largest-magnitude eigenvalue estimate of a symmetric operator given as a
/// matrix-free matvec, by power iteration. Returns `(eigenvalue, vector)`.
pub fn power_iteration(
    dim: usize,
    mut matvec: impl FnMut(&[f64]) -> Vec<f64>,
    start: &[f64],
    iters: usize,
) -> (f64, Vec<f64>) {
    let mut x: Vec<f64> = start.to_vec();
    let nrm = norm2(&x);
    if nrm == 0.0 {
        x = vec![0.0; dim];
        x[0] = 1.0;
    } else {
        for xi in x.iter_mut() {
            *xi /= nrm;
        }
    }
    let mut lambda = 0.0;
    for _ in 0..iters {
        let y = matvec(&x);
        lambda = dot(&x, &y);
        let ny = norm2(&y);
        if ny == 0.0 {
            return (0.0, x);
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    (lambda, x)
}
