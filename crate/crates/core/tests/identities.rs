//! Property tests for the matrix-product identities the derivative algebra
//! rests on, over randomized shapes.

use proptest::prelude::*;
use shallow_landscape::linalg::{
    dot, hadamard, khatri_rao, norm_inf, svd, Matrix,
};

fn finite_entry() -> impl Strategy<Value = f64> {
    // Moderate range keeps products well inside f64.
    prop::num::f64::NORMAL.prop_map(|x| (x % 7.0) * 0.5).prop_filter("finite", |x| x.is_finite())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(finite_entry(), rows * cols)
        .prop_map(move |data| Matrix::new(rows, cols, data).expect("finite entries"))
}

fn shaped_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(r, c)| matrix(r, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Gram identity of the Khatri-Rao product:
    /// (A ∗ B)ᵀ(A ∗ B) = (AᵀA) ∘ (BᵀB).
    #[test]
    fn khatri_rao_gram_identity(
        (a, b) in (1..=8usize, 1..=8usize, 1..=8usize)
            .prop_flat_map(|(m, n, p)| (matrix(m, p), matrix(n, p)))
    ) {
        let kr = khatri_rao(&a, &b).unwrap();
        let lhs = kr.transpose().matmul(&kr).unwrap();
        let gram_a = a.transpose().matmul(&a).unwrap();
        let gram_b = b.transpose().matmul(&b).unwrap();
        let rhs = hadamard(&gram_a, &gram_b).unwrap();
        let scale = lhs.max_abs().max(1.0);
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-10 * scale);
    }

    /// u ⊗ (Mv) = D_M (u ⊗ v), with D_M block diagonal holding m copies
    /// of M.
    #[test]
    fn kronecker_block_diagonal_identity(
        (u, m, v) in (1..=6usize, 1..=6usize, 1..=6usize)
            .prop_flat_map(|(mu, k, nv)| (
                prop::collection::vec(finite_entry(), mu),
                matrix(k, nv),
                prop::collection::vec(finite_entry(), nv),
            ))
    ) {
        let mv = m.mul_vec(&v).unwrap();
        let u_mat = Matrix::column_vector(&u);
        let lhs = u_mat.kron(&Matrix::column_vector(&mv));

        // Block diagonal with |u| copies of M.
        let k = m.rows();
        let n = m.cols();
        let mut dm = Matrix::zeros(u.len() * k, u.len() * n);
        for blk in 0..u.len() {
            for i in 0..k {
                for j in 0..n {
                    *dm.at_mut(blk * k + i, blk * n + j) = m.at(i, j);
                }
            }
        }
        let uv = u_mat.kron(&Matrix::column_vector(&v));
        let rhs = dm.matmul(&uv).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12 * lhs.max_abs().max(1.0));
    }

    /// (a ⊗ b)ᵀ vec(M) = bᵀ M a under column-stacking vectorization.
    #[test]
    fn kronecker_vec_pairing_identity(
        (a, b, m) in (1..=6usize, 1..=6usize)
            .prop_flat_map(|(ma, nb)| (
                prop::collection::vec(finite_entry(), ma),
                prop::collection::vec(finite_entry(), nb),
                matrix(nb, ma),
            ))
    ) {
        let ab = Matrix::column_vector(&a).kron(&Matrix::column_vector(&b));
        // vec stacks columns: entry (i, j) of M lands at j*rows + i.
        let mut vec_m = Vec::with_capacity(m.rows() * m.cols());
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                vec_m.push(m.at(i, j));
            }
        }
        let lhs = dot(&ab.col(0), &vec_m);
        let ma = m.mul_vec(&a).unwrap();
        let rhs = dot(&b, &ma);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    /// ‖v‖_∞ σ_min(A) ≤ σ_max(D_v A) for A with k ≤ d.
    ///
    /// The bound needs every basis vector of ℝᵏ reachable as Au (full row
    /// rank); tall matrices admit counterexamples (e.g. A = (ε; 2.5; 2)
    /// with v = (2, 2, 0)), so shapes are restricted to the provable case.
    #[test]
    fn diagonal_scaling_singular_value_bound(
        (v, a) in (1..=7usize, 0..=6usize)
            .prop_flat_map(|(k, extra)| (
                prop::collection::vec(finite_entry(), k),
                matrix(k, k + extra),
            ))
    ) {
        let mut dva = a.clone();
        for l in 0..a.rows() {
            let vl = v[l];
            for entry in dva.row_mut(l) {
                *entry *= vl;
            }
        }
        let sigma_min_a = svd(&a).unwrap().sigma_min();
        let sigma_max_dva = svd(&dva).unwrap().sigma_max();
        prop_assert!(
            norm_inf(&v) * sigma_min_a <= sigma_max_dva + 1e-10 * sigma_max_dva.max(1.0)
        );
    }

    /// Singular values are invariant under row and column permutations.
    #[test]
    fn singular_values_permutation_invariant(a in shaped_matrix(7)) {
        let mut permuted = a.clone();
        if a.rows() > 1 {
            for j in 0..a.cols() {
                let t = permuted.at(0, j);
                *permuted.at_mut(0, j) = permuted.at(a.rows() - 1, j);
                *permuted.at_mut(a.rows() - 1, j) = t;
            }
        }
        if a.cols() > 1 {
            for i in 0..a.rows() {
                let t = permuted.at(i, 0);
                *permuted.at_mut(i, 0) = permuted.at(i, a.cols() - 1);
                *permuted.at_mut(i, a.cols() - 1) = t;
            }
        }
        let sa = svd(&a).unwrap().singular_values;
        let sp = svd(&permuted).unwrap().singular_values;
        let scale = sa.first().copied().unwrap_or(0.0).max(1.0);
        for (x, y) in sa.iter().zip(sp.iter()) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }
}
