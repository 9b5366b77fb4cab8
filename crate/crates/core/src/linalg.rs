//! Dense complex linear algebra shared by the simulators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Wraps an angle into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x.rem_euclid(two_pi);
    if y > std::f64::consts::PI {
        y -= two_pi;
    }
    y
}

pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
///
/// Real symmetric input takes the real solver, which is several times faster.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension { expected: m.nrows(), got: m.ncols() });
    }
    let n = m.nrows();
    let (values, vectors): (Vec<f64>, CMatrix) = if max_imag(m) == 0.0 {
        let real = DMatrix::<f64>::from_fn(n, n, |i, j| m[(i, j)].re);
        let eig = SymmetricEigen::try_new(real, f64::EPSILON, 0).ok_or(Error::Eigen)?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0).ok_or(Error::Eigen)?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok((sorted_values, sorted_vectors))
}

/// Trace norm of a Hermitian matrix divided by two.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let diff = a - b;
    let (values, _) = hermitian_eigen(&diff)?;
    Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
}

pub fn trace(m: &CMatrix) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// V diag(d) V^dagger.
pub fn from_spectrum(vectors: &CMatrix, diag: &[C64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, d) in diag.iter().enumerate() {
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= d;
        }
    }
    scaled * vectors.adjoint()
}

/// V^dagger A V.
pub fn conjugate_into(vectors: &CMatrix, a: &CMatrix) -> CMatrix {
    vectors.adjoint() * a * vectors
}
