//! Finite-dimensional quantum thermodynamics toolkit.
//!
//! Everything here works on dense complex matrices (dimension ≤ 64). The crate
//! covers passive states and work extraction (`work`), majorization order
//! (`majorization`), energy-preserving unital channels (`channel`), the
//! passive-energy entanglement measure for bipartite states (`measure`), and
//! ergotropic-gap analysis of three-qubit states (`tripartite`). `linalg`,
//! `states` and `random` hold the shared primitives; `json` the wire formats.

pub mod error;
pub mod json;
pub mod linalg;
pub mod channel;
pub mod majorization;
pub mod measure;
pub mod random;
pub mod states;
pub mod tripartite;
pub mod work;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use states::{DensityMatrix, Hamiltonian, PureState, Spectrum};

#[cfg(test)]
mod probe {
    use nalgebra::{Complex, DMatrix};

    // Sanity-check the nalgebra facilities the crate is built on: Hermitian
    // eigendecomposition, SVD and QR must all work on DMatrix<Complex<f64>>.
    #[test]
    fn nalgebra_complex_support() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(3.0, 0.0)]);
        let eig = m.clone().symmetric_eigen();
        // eigenvalues of [[1, -i],[i, 3]] are 2 ± sqrt(2)
        let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!((vals[1] - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        let recon = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|x| c(x, 0.0)))
            * eig.eigenvectors.adjoint();
        assert!((&m - recon).iter().all(|x| x.norm() < 1e-12));

        let svd = m.clone().svd(true, true);
        let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
        assert!(sv[0] >= sv[1], "singular values not descending: {sv:?}");

        let qr = m.qr();
        let q = qr.q();
        assert!((q.adjoint() * &q - DMatrix::identity(2, 2)).iter().all(|x| x.norm() < 1e-12));
    }
}
