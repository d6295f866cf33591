//! Dense helpers over `nalgebra` plus a small CSR matrix for the solver's
//! inner loop.

use crate::clifford::{C64, ZERO};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

pub type CMatrix = DMatrix<C64>;

/// Max-abs entry of `M - M†`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max-abs entry of `M + M†`.
pub fn antihermiticity_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] + m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix (only the lower triangle is
/// read).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

/// Ascending eigenvalues with matching eigenvector columns.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_square_finite(m)?;
    if m.nrows() == 0 {
        return Ok((Vec::new(), m.clone()));
    }
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Lower Cholesky factor of a Hermitian positive definite matrix.
pub fn cholesky_lower(m: &CMatrix) -> Result<CMatrix> {
    check_square_finite(m)?;
    m.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::NotHyperbolic("matrix is not positive definite".into()))
}

/// Eigenvalues of `P⁻¹ A` for Hermitian `A` and Hermitian positive definite
/// `P`, through the congruent Hermitian matrix `L⁻¹ A L⁻†`.
///
/// Returns the ascending eigenvalues and eigenvectors of `P⁻¹ A` (columns,
/// `v = L⁻† w`).
pub fn generalized_hermitian_eigen(a: &CMatrix, p: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let l = cholesky_lower(p)?;
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotHyperbolic("singular Cholesky factor".into()))?;
    let congruent = &l_inv * a * l_inv.adjoint();
    let (values, w) = hermitian_eigen(&hermitian_part(&congruent))?;
    Ok((values, l_inv.adjoint() * w))
}

pub fn spectral_radius_generalized(a: &CMatrix, p: &CMatrix) -> Result<f64> {
    let (values, _) = generalized_hermitian_eigen(a, p)?;
    Ok(values.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// Compressed sparse rows; only exact zeros are dropped so algebraic
/// structure survives the conversion unchanged.
#[derive(Clone, Debug)]
pub struct Csr {
    nrows: usize,
    ncols: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Csr {
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut row_start = Vec::with_capacity(m.nrows() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != ZERO {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_start.push(cols.len());
        }
        Self {
            nrows: m.nrows(),
            ncols: m.ncols(),
            row_start,
            cols,
            vals,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `y += alpha · A x`.
    #[inline]
    pub fn mul_add(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi += alpha * acc;
        }
    }

    /// `y = A x`.
    #[inline]
    pub fn mul_into(&self, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }
}
