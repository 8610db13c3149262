//! Dense complex-matrix kernels.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. The Hermitian
//! eigensolver is nalgebra's Householder tridiagonalisation + implicit QR;
//! this module adds sorting, positivity tests, the operator modulus and a
//! simultaneous diagonaliser for commuting Hermitian pairs.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Default tolerance used across the crate.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Eigenvalues of |Q|, |E| in `[-CLAMP_BAND, 0)` are rounded up to zero.
pub const CLAMP_BAND: f64 = 1e-10;

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Diagonal complex matrix with real entries.
pub fn real_diag(d: &[f64]) -> ComplexMatrix {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { re(d[i]) } else { Complex64::ZERO })
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Spectral (operator 2-) norm, the largest singular value.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// `‖H − H*‖` in the operator norm.
pub fn hermitian_residual(h: &ComplexMatrix) -> f64 {
    op_norm(&(h - h.adjoint()))
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Block-diagonal `a ⊕ b`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Eigendecomposition `H = U diag(λ) U*` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.eigenvectors * real_diag(&self.eigenvalues) * self.eigenvectors.adjoint()
    }

    /// Applies `f` to the spectrum: `U diag(f(λ)) U*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        &self.eigenvectors * real_diag(&mapped) * self.eigenvectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of the Hermitian part `(H + H*)/2`.
pub fn hermitian_eig(h: &ComplexMatrix) -> HermitianEig {
    let n = h.nrows();
    if n == 0 {
        return HermitianEig {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let sym = (h + h.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Positive semidefiniteness up to `eps`: minimum eigenvalue `≥ −eps`.
pub fn is_psd(h: &ComplexMatrix, eps: f64) -> Result<bool> {
    let residual = hermitian_residual(h);
    if residual > eps {
        return Err(Error::NotHermitian { residual, eps });
    }
    Ok(hermitian_eig(h).min() >= -eps)
}

/// Operator modulus `|M| = (M*M)^{1/2}`.
pub fn modulus(m: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eig(&(m.adjoint() * m)).apply(|l| l.max(0.0).sqrt())
}

/// Result of [`simultaneous_diagonalize`].
#[derive(Debug, Clone)]
pub struct JointDiagonalization {
    pub unitary: ComplexMatrix,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Diagonalises a commuting Hermitian pair with a single unitary.
///
/// `A` is diagonalised first; eigenvalues closer than `1e-8·(1+‖A‖)` form a
/// cluster, and `B` compressed to each cluster's eigenspace is diagonalised
/// inside it.
pub fn simultaneous_diagonalize(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    eps: f64,
) -> Result<JointDiagonalization> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "pair shapes {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    for m in [a, b] {
        let residual = hermitian_residual(m);
        if residual > eps * (1.0 + op_norm(m)) {
            return Err(Error::NotHermitian { residual, eps });
        }
    }
    let norm_a = op_norm(a);
    let norm_b = op_norm(b);
    let residual = op_norm(&commutator(a, b));
    let bound = eps * (1.0 + norm_a * norm_b);
    if residual > bound {
        return Err(Error::CommutatorTooLarge { residual, bound });
    }

    let n = a.nrows();
    let eig_a = hermitian_eig(a);
    let gap = 1e-8 * (1.0 + norm_a);
    let mut unitary = ComplexMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig_a.eigenvalues[end] - eig_a.eigenvalues[end - 1] <= gap {
            end += 1;
        }
        let basis = eig_a.eigenvectors.columns(start, end - start).into_owned();
        let compressed = basis.adjoint() * b * &basis;
        let inner = hermitian_eig(&compressed);
        let rotated = &basis * &inner.eigenvectors;
        unitary.columns_mut(start, end - start).copy_from(&rotated);
        start = end;
    }

    let da = unitary.adjoint() * a * &unitary;
    let db = unitary.adjoint() * b * &unitary;
    Ok(JointDiagonalization {
        a: (0..n).map(|i| da[(i, i)].re).collect(),
        b: (0..n).map(|i| db[(i, i)].re).collect(),
        unitary,
    })
}

/// Inverse of a Hermitian positive definite matrix by reciprocal eigenvalues,
/// returned together with the 2-norm condition number.
pub fn inverse_pd(h: &ComplexMatrix) -> Option<(ComplexMatrix, f64)> {
    let eig = hermitian_eig(h);
    let lo = eig.min();
    if lo <= 0.0 {
        return None;
    }
    Some((eig.apply(|l| 1.0 / l), eig.max() / lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
        ComplexMatrix::from_row_iterator(
            rows,
            cols,
            entries.iter().map(|&(r, i)| Complex64::new(r, i)),
        )
    }

    #[test]
    fn modulus_of_scalar() {
        let m = real_diag(&[-2.0]);
        assert!((modulus(&m)[(0, 0)] - re(2.0)).norm() < 1e-14);
    }

    #[test]
    fn modulus_of_nilpotent() {
        let m = cm(2, 2, &[(0., 0.), (1., 0.), (0., 0.), (0., 0.)]);
        let md = modulus(&m);
        assert!((md - real_diag(&[0.0, 1.0])).norm() < 1e-12);
    }

    #[test]
    fn modulus_of_unitary_is_identity() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = cm(2, 2, &[(h, 0.), (0., h), (0., h), (h, 0.)]);
        assert!((modulus(&u) - identity(2)).norm() < 1e-12);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&identity(3), 1e-9).unwrap());
        assert!(!is_psd(&real_diag(&[1.0, -1e-3]), 1e-9).unwrap());
        assert!(is_psd(&real_diag(&[0.0]), 1e-9).unwrap());
        let skew = cm(2, 2, &[(0., 0.), (1., 0.), (0., 0.), (0., 0.)]);
        assert!(matches!(is_psd(&skew, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn simultaneous_diagonal_pair() {
        let r = simultaneous_diagonalize(&real_diag(&[1., 2.]), &real_diag(&[3., 4.]), 1e-9)
            .unwrap();
        assert!((r.unitary.map(|z| z.norm()) - identity(2).map(|z| z.norm())).norm() < 1e-12);
        assert_eq!(r.a, vec![1.0, 2.0]);
        assert_eq!(r.b, vec![3.0, 4.0]);
    }

    #[test]
    fn simultaneous_degenerate_a() {
        let swap = cm(2, 2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)]);
        let r = simultaneous_diagonalize(&identity(2), &swap, 1e-9).unwrap();
        assert!((r.a[0] - 1.0).abs() < 1e-12 && (r.a[1] - 1.0).abs() < 1e-12);
        assert!((r.b[0] + 1.0).abs() < 1e-12 && (r.b[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simultaneous_rejects_noncommuting() {
        let swap = cm(2, 2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)]);
        let err = simultaneous_diagonalize(&real_diag(&[1., 2.]), &swap, 1e-9).unwrap_err();
        assert!(matches!(err, Error::CommutatorTooLarge { .. }));
    }

    #[test]
    fn eig_matches_characteristic_roots_2x2() {
        // [[a, b], [b̄, d]] has roots (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2).
        let cases = [(2.0, (1.0, 1.0), -1.0), (0.5, (0.0, 0.3), 0.5), (3.0, (0.0, 0.0), 1.0)];
        for (a, (br, bi), d) in cases {
            let h = cm(2, 2, &[(a, 0.), (br, bi), (br, -bi), (d, 0.)]);
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + br * br + bi * bi).sqrt();
            let eig = hermitian_eig(&h);
            assert!((eig.eigenvalues[0] - (mid - rad)).abs() < 1e-12);
            assert!((eig.eigenvalues[1] - (mid + rad)).abs() < 1e-12);
            let u = &eig.eigenvectors;
            assert!((u.adjoint() * u - identity(2)).norm() < 1e-12);
            assert!((eig.reconstruct() - &h).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_pd_condition() {
        let (inv, cond) = inverse_pd(&real_diag(&[2.0, 4.0])).unwrap();
        assert!((inv - real_diag(&[0.5, 0.25])).norm() < 1e-14);
        assert!((cond - 2.0).abs() < 1e-14);
        assert!(inverse_pd(&real_diag(&[0.0, 1.0])).is_none());
    }
}
