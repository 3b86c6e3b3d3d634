//! Seeded random ensembles. Every sampler takes the generator as an explicit
//! argument; pair with `rng_from_seed` for reproducible runs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{c, identity, max_abs, CMatrix, CVector};
use crate::states::{DensityMatrix, PureState, Spectrum};
use crate::{Error, linalg};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut impl Rng) -> linalg::C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix: independent standard complex Gaussian entries.
fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix
/// U = Q·diag(r_kk/|r_kk|).
pub fn haar_unitary(rng: &mut impl Rng, dim: usize) -> Result<CMatrix> {
    if dim == 0 || dim > linalg::MAX_DIM {
        return Err(Error::validation(format!("bad dimension {dim}")));
    }
    if dim == 1 {
        let z = gaussian_complex(rng);
        return Ok(CMatrix::from_element(1, 1, z / z.norm()));
    }
    let g = ginibre(rng, dim, dim);
    let qr = g.qr();
    let r = qr.r();
    let q = qr.q();
    let phases = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                linalg::cr(1.0)
            } else {
                d / d.norm()
            }
        } else {
            linalg::cr(0.0)
        }
    });
    let u = q * phases;
    debug_assert!(max_abs(&(u.adjoint() * &u - identity(dim))) < 1e-10);
    Ok(u)
}

/// Hilbert-Schmidt-distributed density matrix: GG†/Tr(GG†).
pub fn random_density(rng: &mut impl Rng, dim: usize) -> Result<DensityMatrix> {
    if dim == 0 || dim > linalg::MAX_DIM {
        return Err(Error::validation(format!("bad dimension {dim}")));
    }
    let g = ginibre(rng, dim, dim);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr))
}

/// Uniform (Fubini-Study) pure state on the given factor structure.
pub fn random_pure(rng: &mut impl Rng, dims: &[usize]) -> Result<PureState> {
    let total: usize = dims.iter().product();
    if total == 0 || total > linalg::MAX_DIM {
        return Err(Error::validation(format!("bad dimensions {dims:?}")));
    }
    let mut amps = CVector::from_fn(total, |_, _| gaussian_complex(rng));
    amps = amps.scale(1.0 / amps.norm());
    PureState::new(dims.to_vec(), amps)
}

/// Flat-Dirichlet probability vector, sorted non-increasing.
pub fn random_spectrum(rng: &mut impl Rng, dim: usize) -> Result<Spectrum> {
    if dim == 0 {
        return Err(Error::validation("bad dimension 0"));
    }
    let mut w: Vec<f64> = (0..dim)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    Spectrum::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(7);
        for dim in [1, 2, 5, 8] {
            let u = haar_unitary(&mut rng, dim).unwrap();
            assert!(linalg::is_unitary(&u, 1e-10), "dim {dim}");
        }
    }

    #[test]
    fn random_density_is_valid_and_full_rank() {
        let mut rng = rng_from_seed(11);
        let rho = random_density(&mut rng, 6).unwrap();
        assert_eq!(rho.spectrum().rank(), 6);
    }

    #[test]
    fn same_seed_same_draw() {
        let a = random_density(&mut rng_from_seed(3), 4).unwrap();
        let b = random_density(&mut rng_from_seed(3), 4).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let u1 = haar_unitary(&mut rng_from_seed(5), 4).unwrap();
        let u2 = haar_unitary(&mut rng_from_seed(5), 4).unwrap();
        assert_eq!(u1, u2);
    }

    #[test]
    fn random_spectrum_sums_to_one() {
        let mut rng = rng_from_seed(13);
        let s = random_spectrum(&mut rng, 5).unwrap();
        assert!((s.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(s.probs().windows(2).all(|w| w[0] >= w[1]));
    }
}
