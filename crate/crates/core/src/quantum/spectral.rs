//! Spectral calculus for Hermitian matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// `(A + A†) / 2`.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `max |A - A†|`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = hermitize(a).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(a: &CMatrix) -> DVector<f64> {
    let mut v: Vec<f64> = hermitize(a).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    DVector::from_vec(v)
}

/// `U diag(g(λ)) U†`, re-Hermitised.
pub fn from_spectrum(values: &DVector<f64>, vectors: &CMatrix, g: impl Fn(f64) -> f64) -> CMatrix {
    let d = CMatrix::from_diagonal(&values.map(|l| Complex64::new(g(l), 0.0)));
    hermitize(&(vectors * d * vectors.adjoint()))
}

/// `g(A)` for Hermitian `A`.
pub fn hermitian_function(a: &CMatrix, g: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    from_spectrum(&values, &vectors, g)
}

pub fn real_to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|v| Complex64::new(v, 0.0))
}
