//! Quantum state and Hamiltonian types, plus the three structural maps the
//! rest of the crate leans on: partial trace, energy dephasing, and Schmidt
//! decomposition.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{
    self, cr, eig_hermitian, kron, max_abs, CMatrix, CVector, MAX_DIM, RANK_CUTOFF, TOL_RESIDUAL,
    TOL_STRUCTURE,
};

/// Eigenvalues of a Hamiltonian closer than this are treated as one
/// degenerate level when building energy projectors.
pub const ENERGY_GROUP_TOL: f64 = 1e-9;

/// A probability spectrum: the eigenvalues of a density matrix, stored
/// non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    probs: Vec<f64>,
}

impl Spectrum {
    /// Validates and sorts. Entries in [-1e-10, 0) are clamped to zero;
    /// anything further outside [0, 1] or a total off 1 by more than 1e-10
    /// is rejected.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::validation("spectrum must be non-empty"));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::validation("spectrum entries must be finite"));
            }
            if *p < -TOL_STRUCTURE || *p > 1.0 + TOL_STRUCTURE {
                return Err(Error::validation(format!(
                    "spectrum entry {p} outside [0, 1]"
                )));
            }
            *p = p.clamp(0.0, 1.0);
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TOL_STRUCTURE {
            return Err(Error::validation(format!(
                "spectrum sums to {sum}, expected 1"
            )));
        }
        probs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Spectrum { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Number of entries above the rank cutoff (1e-12).
    pub fn rank(&self) -> usize {
        self.probs.iter().filter(|&&p| p > RANK_CUTOFF).count()
    }

    /// Copy padded with trailing zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Result<Vec<f64>> {
        if len < self.probs.len() {
            return Err(Error::validation(format!(
                "cannot pad spectrum of length {} down to {len}",
                self.probs.len()
            )));
        }
        let mut out = self.probs.clone();
        out.resize(len, 0.0);
        Ok(out)
    }

    /// Shannon entropy in nats, with 0·ln 0 = 0.
    pub fn entropy_nats(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entropy_nats() / std::f64::consts::LN_2
    }
}

/// A Hamiltonian given by its spectral data: energies sorted non-decreasing
/// and a unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    energies: Vec<f64>,
    basis: CMatrix,
}

impl Hamiltonian {
    /// Diagonal Hamiltonian in the computational basis. Energies may arrive
    /// in any order; they are sorted and the basis columns permuted to match.
    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        let dim = energies.len();
        Self::new(energies, linalg::identity(dim))
    }

    pub fn new(energies: Vec<f64>, basis: CMatrix) -> Result<Self> {
        let dim = energies.len();
        if dim == 0 {
            return Err(Error::validation("Hamiltonian must have positive dimension"));
        }
        if dim > MAX_DIM {
            return Err(Error::validation(format!(
                "dimension {dim} exceeds supported maximum {MAX_DIM}"
            )));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::validation("energies must be finite"));
        }
        if basis.nrows() != dim || basis.ncols() != dim {
            return Err(Error::validation(format!(
                "eigenbasis is {}x{}, expected {dim}x{dim}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        if !linalg::is_unitary(&basis, TOL_STRUCTURE) {
            return Err(Error::validation("eigenbasis is not unitary within 1e-10"));
        }
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| energies[i].partial_cmp(&energies[j]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&i| energies[i]).collect();
        let mut cols = CMatrix::zeros(dim, dim);
        for (dst, &src) in order.iter().enumerate() {
            cols.set_column(dst, &basis.column(src));
        }
        Ok(Hamiltonian {
            energies: sorted,
            basis: cols,
        })
    }

    /// Spectral decomposition of an arbitrary Hermitian matrix.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let (energies, basis) = eig_hermitian(m)?;
        Ok(Hamiltonian { energies, basis })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Energies, non-decreasing.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn matrix(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.energies.iter().map(|&e| cr(e)),
        ));
        &self.basis * d * self.basis.adjoint()
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_energy(&self) -> f64 {
        self.energies[self.dim() - 1]
    }

    /// Indices of each degenerate level, grouped by chaining energies closer
    /// than `ENERGY_GROUP_TOL`.
    pub fn energy_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        for i in 1..self.dim() {
            if self.energies[i] - self.energies[i - 1] <= ENERGY_GROUP_TOL {
                groups.last_mut().unwrap().push(i);
            } else {
                groups.push(vec![i]);
            }
        }
        groups
    }

    pub fn ground_degeneracy(&self) -> usize {
        self.energy_groups()[0].len()
    }

    /// Non-interacting sum H⊗I + I⊗H' on the product space, energies
    /// re-sorted with the product eigenbasis permuted to match.
    pub fn tensor_sum(&self, other: &Hamiltonian) -> Result<Hamiltonian> {
        let (da, db) = (self.dim(), other.dim());
        if da * db > MAX_DIM {
            return Err(Error::validation(format!(
                "joint dimension {} exceeds supported maximum {MAX_DIM}",
                da * db
            )));
        }
        let mut energies = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                energies.push(self.energies[i] + other.energies[j]);
            }
        }
        Hamiltonian::new(energies, kron(&self.basis, &other.basis))
    }
}

/// A density matrix; construction checks Hermiticity, unit trace and
/// positivity, and caches the eigenvalues found along the way.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
    evals: Vec<f64>, // ascending, clamped to [0, 1]
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::validation(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_STRUCTURE || tr.im.abs() > TOL_STRUCTURE {
            return Err(Error::validation(format!(
                "trace is {tr}, expected 1 within 1e-10"
            )));
        }
        let (evals, _) = eig_hermitian(&mat)?;
        if let Some(&low) = evals.first() {
            if low < -TOL_STRUCTURE {
                return Err(Error::validation(format!(
                    "negative eigenvalue {low:.3e}; matrix is not positive semidefinite"
                )));
            }
        }
        let evals = evals.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(DensityMatrix { mat, evals })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::validation(format!("bad dimension {dim}")));
        }
        Ok(DensityMatrix {
            mat: linalg::identity(dim).scale(1.0 / dim as f64),
            evals: vec![1.0 / dim as f64; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues sorted non-increasing, as a probability spectrum.
    pub fn spectrum(&self) -> Spectrum {
        let mut probs = self.evals.clone();
        probs.reverse();
        // Eigenvalues of a valid density matrix already satisfy the Spectrum
        // invariants up to clamping done at construction.
        Spectrum { probs }
    }

    /// Full eigendecomposition, eigenvalues ascending.
    pub fn eig(&self) -> Result<(Vec<f64>, CMatrix)> {
        eig_hermitian(&self.mat)
    }

    /// Tr(ρH). The imaginary part is checked to vanish and dropped.
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64> {
        if h.dim() != self.dim() {
            return Err(Error::validation(format!(
                "state dimension {} does not match Hamiltonian dimension {}",
                self.dim(),
                h.dim()
            )));
        }
        let tr = (&self.mat * h.matrix()).trace();
        if tr.im.abs() > TOL_RESIDUAL {
            return Err(Error::numerical(format!(
                "energy has imaginary part {:.3e}",
                tr.im
            )));
        }
        Ok(tr.re)
    }
}

/// A pure state on a tensor product of subsystems. Amplitudes are stored
/// exactly normalized, row-major with the first subsystem most significant.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: Vec<usize>,
    amps: CVector,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::validation("subsystem dimensions must be positive"));
        }
        let total: usize = dims.iter().product();
        if total > MAX_DIM {
            return Err(Error::validation(format!(
                "total dimension {total} exceeds supported maximum {MAX_DIM}"
            )));
        }
        if amps.len() != total {
            return Err(Error::validation(format!(
                "amplitude vector has length {}, expected {total}",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > TOL_STRUCTURE {
            return Err(Error::validation(format!(
                "state norm is {norm}, expected 1 within 1e-10"
            )));
        }
        Ok(PureState {
            dims,
            amps: amps.scale(1.0 / norm),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// |ψ⟩⟨ψ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let mat = &self.amps * self.amps.adjoint();
        let mut evals = vec![0.0; self.dim()];
        evals[self.dim() - 1] = 1.0;
        DensityMatrix { mat, evals }
    }

    /// Product state ψ ⊗ φ, first factor most significant.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self.amps.kronecker(&other.amps);
        PureState::new(dims, amps)
    }

    /// Reinterpret the factor structure without touching amplitudes.
    pub fn regroup(&self, dims: Vec<usize>) -> Result<PureState> {
        PureState::new(dims, self.amps.clone())
    }
}

fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        digits[k] = idx % d;
        idx /= d;
    }
    digits
}

fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    for (k, &d) in dims.iter().enumerate() {
        idx = idx * d + digits[k];
    }
    idx
}

/// Partial trace over every subsystem not listed in `keep`. `keep` must be
/// strictly increasing; an empty `keep` traces everything and returns the
/// 1×1 matrix [1].
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::validation(format!(
            "subsystem dimensions {dims:?} multiply to {total}, state has dimension {}",
            rho.dim()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::validation(format!(
            "keep indices {keep:?} must be strictly increasing and below {}",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = keep_dims.iter().product::<usize>().max(1);
    let dt: usize = traced_dims.iter().product::<usize>().max(1);

    let mut out = CMatrix::zeros(dk, dk);
    let mut full_row = vec![0usize; dims.len()];
    let mut full_col = vec![0usize; dims.len()];
    for ik in 0..dk {
        let row_digits = unflatten(ik, &keep_dims);
        for jk in 0..dk {
            let col_digits = unflatten(jk, &keep_dims);
            let mut acc = linalg::cr(0.0);
            for t in 0..dt {
                let t_digits = unflatten(t, &traced_dims);
                for (pos, &sub) in keep.iter().enumerate() {
                    full_row[sub] = row_digits[pos];
                    full_col[sub] = col_digits[pos];
                }
                for (pos, &sub) in traced.iter().enumerate() {
                    full_row[sub] = t_digits[pos];
                    full_col[sub] = t_digits[pos];
                }
                acc += rho.matrix()[(flatten(&full_row, dims), flatten(&full_col, dims))];
            }
            out[(ik, jk)] = acc;
        }
    }
    DensityMatrix::new(out)
}

/// Pinch ρ onto the energy eigenspaces of `h`: blocks joining different
/// energy levels are zeroed in the eigenbasis of `h`.
pub fn dephase(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    if h.dim() != rho.dim() {
        return Err(Error::validation(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            rho.dim(),
            h.dim()
        )));
    }
    let v = h.basis();
    let mut in_basis = v.adjoint() * rho.matrix() * v;
    let groups = h.energy_groups();
    let mut group_of = vec![0usize; h.dim()];
    for (g, members) in groups.iter().enumerate() {
        for &m in members {
            group_of[m] = g;
        }
    }
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            if group_of[i] != group_of[j] {
                in_basis[(i, j)] = linalg::cr(0.0);
            }
        }
    }
    DensityMatrix::new(v * in_basis * v.adjoint())
}

/// Result of a Schmidt decomposition: squared coefficients (a spectrum) and
/// the matching orthonormal bases, one column per coefficient.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Spectrum,
    pub left: CMatrix,
    pub right: CMatrix,
}

/// Schmidt decomposition of a bipartite pure state.
pub fn schmidt(psi: &PureState) -> Result<Schmidt> {
    if psi.dims().len() != 2 {
        return Err(Error::validation(format!(
            "Schmidt decomposition needs exactly two subsystems, got {:?}",
            psi.dims()
        )));
    }
    let (da, db) = (psi.dims()[0], psi.dims()[1]);
    let mut m = CMatrix::zeros(da, db);
    for i in 0..da {
        for j in 0..db {
            m[(i, j)] = psi.amplitudes()[i * db + j];
        }
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.ok_or_else(|| Error::numerical("SVD did not return U"))?;
    let vt = svd
        .v_t
        .ok_or_else(|| Error::numerical("SVD did not return V"))?;
    let r = svd.singular_values.len();

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let mut left = CMatrix::zeros(da, r);
    let mut right = CMatrix::zeros(db, r);
    let mut coeffs = Vec::with_capacity(r);
    for (dst, &src) in order.iter().enumerate() {
        let s = svd.singular_values[src];
        coeffs.push(s * s);
        left.set_column(dst, &u.column(src));
        right.set_column(dst, &vt.row(src).adjoint());
    }

    let mut recon = CMatrix::zeros(da, db);
    for (k, &c) in coeffs.iter().enumerate() {
        recon += (left.column(k) * right.column(k).adjoint()).scale(c.sqrt());
    }
    let residual = max_abs(&(&m - recon));
    if residual > TOL_RESIDUAL {
        return Err(Error::numerical(format!(
            "Schmidt reconstruction residual {residual:.3e} exceeds {TOL_RESIDUAL:e}"
        )));
    }
    Ok(Schmidt {
        coefficients: Spectrum::new(coeffs)?,
        left,
        right,
    })
}
