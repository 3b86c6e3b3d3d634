//! Dense complex linear algebra on small matrices (dim ≤ 64).
//!
//! Conventions: row-major indexing everywhere, and in tensor products the
//! first factor is the most significant index, so `kron(a, b)` places entry
//! `a[(i,j)] * b[(k,l)]` at row `i*b.nrows()+k`, column `j*b.ncols()+l`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Hard cap on matrix dimension; keeps every operation comfortably dense.
pub const MAX_DIM: usize = 64;

/// Tolerance for type-level structure checks (Hermiticity, traces, norms).
pub const TOL_STRUCTURE: f64 = 1e-10;

/// Tolerance for reconstruction residuals of decompositions.
pub const TOL_RESIDUAL: f64 = 1e-9;

/// Eigenvalues and probabilities below this are treated as zero rank.
pub const RANK_CUTOFF: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Largest entry magnitude; the max norm used by all tolerance checks.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Kronecker product with the first factor most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) <= tol
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs(&(m.adjoint() * m - identity(m.nrows()))) <= tol
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::validation("dimension must be positive"));
    }
    if dim > MAX_DIM {
        return Err(Error::validation(format!(
            "dimension {dim} exceeds supported maximum {MAX_DIM}"
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues sorted ascending with matching eigenvector columns.
/// Rejects non-Hermitian input (max-norm deviation above `TOL_STRUCTURE`) and
/// checks the reconstruction residual against `TOL_RESIDUAL`.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::validation(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_dim(m.nrows())?;
    if !is_hermitian(m, TOL_STRUCTURE) {
        return Err(Error::validation(format!(
            "matrix is not Hermitian within {TOL_STRUCTURE:e} (deviation {:.3e})",
            max_abs(&(m - m.adjoint()))
        )));
    }
    // Symmetrize first so the solver sees an exactly Hermitian input.
    let h = (m + m.adjoint()).scale(0.5);
    let max_iters = 10_000;
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, max_iters)
        .ok_or_else(|| {
            Error::numerical(format!(
                "Hermitian eigensolver did not converge within {max_iters} iterations"
            ))
        })?;

    let dim = m.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }

    let recon = &vectors
        * CMatrix::from_diagonal(&DVector::from_iterator(dim, values.iter().map(|&v| cr(v))))
        * vectors.adjoint();
    let residual = max_abs(&(&h - recon));
    if residual > TOL_RESIDUAL {
        return Err(Error::numerical(format!(
            "eigendecomposition residual {residual:.3e} exceeds {TOL_RESIDUAL:e}"
        )));
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_first_factor_most_significant() {
        // diag(0,1) ⊗ I + I ⊗ diag(0,1) = diag(0,1,1,2)
        let h = CMatrix::from_diagonal(&DVector::from_vec(vec![cr(0.0), cr(1.0)]));
        let id = identity(2);
        let joint = kron(&h, &id) + kron(&id, &h);
        let expected = [0.0, 1.0, 1.0, 2.0];
        for (i, &e) in expected.iter().enumerate() {
            assert!((joint[(i, i)] - cr(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn eig_sorted_and_reconstructs() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[cr(1.0), c(0.0, -1.0), c(0.0, 1.0), cr(3.0)],
        );
        let (vals, vecs) = eig_hermitian(&m).unwrap();
        assert!(vals[0] <= vals[1]);
        assert!((vals[0] - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!((vals[1] - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(is_unitary(&vecs, 1e-12));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(matches!(eig_hermitian(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn eig_rejects_oversized() {
        let m = identity(MAX_DIM + 1);
        assert!(eig_hermitian(&m).is_err());
    }
}
