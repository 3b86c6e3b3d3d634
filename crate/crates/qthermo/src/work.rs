//! Passive states and the work content of finite quantum systems.
//!
//! The passive state ρ^p of ρ places the eigenvalues of ρ, sorted
//! non-increasing, on the energy levels of H, sorted non-decreasing; no
//! cyclic unitary process can extract work from it. Ergotropy is the energy
//! gap to ρ^p, thermodynamic work the gap to the entropy-matched Gibbs
//! state, and single-shot work the min-relative-entropy distance from the
//! dephased state to the Gibbs state at the bath temperature.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{self, cr, max_abs, CMatrix, RANK_CUTOFF, TOL_STRUCTURE};
use crate::states::{dephase, DensityMatrix, Hamiltonian, Spectrum};

/// Upper edge of the bisection bracket used for entropy matching.
pub const BETA_MAX: f64 = 1e6;

/// Eigenvalues of a state closer than this are treated as one degenerate
/// level during simultaneous diagonalization.
const EIGENVALUE_GROUP_TOL: f64 = 1e-8;

/// Unit for entropy values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyBase {
    Nats,
    Bits,
}

impl EntropyBase {
    fn from_nats(&self, nats: f64) -> f64 {
        match self {
            EntropyBase::Nats => nats,
            EntropyBase::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

/// The passive state of ρ with respect to H.
pub fn passive_state(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::validation(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            rho.dim(),
            h.dim()
        )));
    }
    let probs = rho.spectrum();
    let v = h.basis();
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        h.dim(),
        probs.probs().iter().map(|&p| cr(p)),
    ));
    DensityMatrix::new(v * diag * v.adjoint())
}

/// Energy of the passive arrangement: the spectrum, already non-increasing,
/// dotted against the non-decreasing energies. A spectrum shorter than the
/// Hamiltonian is padded with zeros at the high-energy end.
pub fn passive_energy(spectrum: &Spectrum, h: &Hamiltonian) -> Result<f64> {
    if spectrum.len() > h.dim() {
        return Err(Error::validation(format!(
            "spectrum has {} entries but the Hamiltonian only {} levels",
            spectrum.len(),
            h.dim()
        )));
    }
    Ok(spectrum
        .probs()
        .iter()
        .zip(h.energies())
        .map(|(&p, &e)| p * e)
        .sum())
}

/// Maximum work extractable by a cyclic unitary process:
/// W_e = Tr(ρH) − Tr(ρ^p H).
pub fn ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let internal = rho.energy(h)?;
    Ok(internal - passive_energy(&rho.spectrum(), h)?)
}

/// A Gibbs state together with the inverse temperature and log-partition
/// function that produced it. `beta` may be ±∞, selecting the uniform
/// mixture on the extreme energy level; `log_z` is NaN there, since ln Z
/// diverges in the limit.
#[derive(Debug, Clone)]
pub struct ThermalState {
    pub beta: f64,
    pub log_z: f64,
    pub state: DensityMatrix,
}

impl ThermalState {
    /// Populations in energy order (non-decreasing energies).
    pub fn populations(&self, h: &Hamiltonian) -> Vec<f64> {
        let v = h.basis();
        let in_basis = v.adjoint() * self.state.matrix() * v;
        (0..h.dim()).map(|i| in_basis[(i, i)].re).collect()
    }
}

fn gibbs_populations(h: &Hamiltonian, beta: f64) -> (Vec<f64>, f64) {
    let d = h.dim();
    if beta.is_infinite() {
        let group = if beta > 0.0 {
            h.energy_groups().first().unwrap().clone()
        } else {
            h.energy_groups().last().unwrap().clone()
        };
        let mut probs = vec![0.0; d];
        for &i in &group {
            probs[i] = 1.0 / group.len() as f64;
        }
        return (probs, f64::NAN);
    }
    let exps: Vec<f64> = h.energies().iter().map(|&e| -beta * e).collect();
    let shift = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exps.iter().map(|&x| (x - shift).exp()).collect();
    let z_shifted: f64 = weights.iter().sum();
    let probs = weights.iter().map(|&w| w / z_shifted).collect();
    (probs, shift + z_shifted.ln())
}

/// Gibbs state e^{−βH}/Z for β ∈ [−∞, +∞].
pub fn gibbs_state(h: &Hamiltonian, beta: f64) -> Result<ThermalState> {
    if beta.is_nan() {
        return Err(Error::validation("beta must not be NaN"));
    }
    let (probs, log_z) = gibbs_populations(h, beta);
    let v = h.basis();
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        h.dim(),
        probs.iter().map(|&p| cr(p)),
    ));
    let state = DensityMatrix::new(v * diag * v.adjoint())?;
    Ok(ThermalState { beta, log_z, state })
}

fn entropy_of(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

fn mean_energy(probs: &[f64], energies: &[f64]) -> f64 {
    probs.iter().zip(energies).map(|(&p, &e)| p * e).sum()
}

/// Find β ≥ 0 with S(τ_β) equal to the target entropy (in nats), by
/// bisection on [0, 1e6]. S(τ_β) decreases from ln d at β = 0 to ln g₀ at
/// β → ∞, so targets at the edges return 0 and +∞; anything outside
/// [ln g₀, ln d] is a domain error.
pub fn match_beta_by_entropy(s_target_nats: f64, h: &Hamiltonian) -> Result<f64> {
    if !s_target_nats.is_finite() {
        return Err(Error::domain("entropy target must be finite"));
    }
    let d = h.dim() as f64;
    let g0 = h.ground_degeneracy() as f64;
    let (s_min, s_max) = (g0.ln(), d.ln());
    if s_target_nats < s_min - TOL_STRUCTURE || s_target_nats > s_max + TOL_STRUCTURE {
        return Err(Error::domain(format!(
            "entropy target {s_target_nats} outside attainable range [{s_min}, {s_max}]"
        )));
    }
    if s_target_nats >= s_max - 1e-12 {
        return Ok(0.0);
    }
    if s_target_nats <= s_min + 1e-12 {
        return Ok(f64::INFINITY);
    }
    let entropy_at = |beta: f64| entropy_of(&gibbs_populations(h, beta).0);
    let (mut lo, mut hi) = (0.0, BETA_MAX);
    if entropy_at(hi) > s_target_nats + TOL_STRUCTURE {
        return Err(Error::numerical(format!(
            "entropy target {s_target_nats} not reached at beta = {BETA_MAX}"
        )));
    }
    let mut mid = 0.0;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let s = entropy_at(mid);
        if (s - s_target_nats).abs() <= 1e-12 {
            return Ok(mid);
        }
        if s > s_target_nats {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = entropy_at(mid);
    if (s - s_target_nats).abs() > TOL_STRUCTURE {
        return Err(Error::numerical(format!(
            "bisection stalled at beta = {mid} with entropy error {:.3e}",
            (s - s_target_nats).abs()
        )));
    }
    Ok(mid)
}

/// Everything the work analysis of a single state produces.
#[derive(Debug, Clone)]
pub struct WorkReport {
    pub internal_energy: f64,
    pub passive_energy: f64,
    pub ergotropy: f64,
    pub thermodynamic_work: f64,
    /// β of the entropy-matched Gibbs state (may be +∞).
    pub matched_beta: f64,
    pub entropy_nats: f64,
    pub entropy_bits: f64,
}

/// Full work report: ergotropy against the passive state and thermodynamic
/// work against the entropy-matched Gibbs state.
pub fn thermodynamic_work(rho: &DensityMatrix, h: &Hamiltonian) -> Result<WorkReport> {
    let spectrum = rho.spectrum();
    let s_nats = spectrum.entropy_nats();
    let internal = rho.energy(h)?;
    let e_passive = passive_energy(&spectrum, h)?;
    let beta = match_beta_by_entropy(s_nats, h)?;
    let (tau_probs, _) = gibbs_populations(h, beta);
    let e_thermal = mean_energy(&tau_probs, h.energies());
    Ok(WorkReport {
        internal_energy: internal,
        passive_energy: e_passive,
        ergotropy: internal - e_passive,
        thermodynamic_work: internal - e_thermal,
        matched_beta: beta,
        entropy_nats: s_nats,
        entropy_bits: s_nats / std::f64::consts::LN_2,
    })
}

/// Rényi entropy S_α of the spectrum of ρ. α ranges over [0, ∞]; the three
/// special points are handled by their limits (log-rank, von Neumann,
/// min-entropy) on exact match.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64, base: EntropyBase) -> Result<f64> {
    spectrum_renyi(&rho.spectrum(), alpha, base)
}

/// Rényi entropy straight from a spectrum.
pub fn spectrum_renyi(spectrum: &Spectrum, alpha: f64, base: EntropyBase) -> Result<f64> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::domain(format!(
            "Rényi order must lie in [0, ∞], got {alpha}"
        )));
    }
    let nats = if alpha == 0.0 {
        (spectrum.rank() as f64).ln()
    } else if alpha == 1.0 {
        spectrum.entropy_nats()
    } else if alpha.is_infinite() {
        -spectrum.probs()[0].ln()
    } else {
        let sum: f64 = spectrum
            .probs()
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p.powf(alpha))
            .sum();
        sum.ln() / (1.0 - alpha)
    };
    Ok(base.from_nats(nats))
}

/// Common eigenbasis of a commuting pair: eigenvalues of ρ are grouped, and
/// σ is re-diagonalized inside each degenerate group. Returns the two
/// eigenvalue lists in the shared basis order.
fn simultaneous_eigenvalues(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (pvals, pvecs) = rho.eig()?;
    let sigma_in = pvecs.adjoint() * sigma.matrix() * &pvecs;
    let d = rho.dim();
    let mut qvals = vec![0.0; d];
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && pvals[end] - pvals[end - 1] <= EIGENVALUE_GROUP_TOL {
            end += 1;
        }
        if end - start == 1 {
            qvals[start] = sigma_in[(start, start)].re;
        } else {
            let block = sigma_in.view((start, start), (end - start, end - start)).into_owned();
            let (bvals, _) = linalg::eig_hermitian(&block)?;
            qvals[start..end].copy_from_slice(&bvals);
        }
        start = end;
    }
    Ok((pvals, qvals))
}

/// −ln Tr(Π_ρ σ): the α → 0 limit of the Rényi divergence. +∞ when σ has
/// no weight on the support of ρ.
fn min_divergence(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let (pvals, pvecs) = rho.eig()?;
    if pvals.iter().all(|&p| p > RANK_CUTOFF) {
        // full support: Π = I and Tr(Πσ) = 1 exactly
        return Ok(0.0);
    }
    let mut overlap = 0.0;
    for i in 0..rho.dim() {
        if pvals[i] > RANK_CUTOFF {
            let col = pvecs.column(i);
            overlap += (col.adjoint() * sigma.matrix() * col)[(0, 0)].re;
        }
    }
    if overlap <= RANK_CUTOFF {
        return Ok(f64::INFINITY);
    }
    Ok(-overlap.min(1.0).ln())
}

/// Rényi divergence D_α(ρ‖σ) in nats for commuting pairs, α ∈ [0, 2].
/// Support violations yield +∞. Non-commuting inputs are rejected.
pub fn renyi_divergence(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::validation(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    if alpha.is_nan() || !(0.0..=2.0).contains(&alpha) {
        return Err(Error::domain(format!(
            "divergence order must lie in [0, 2], got {alpha}"
        )));
    }
    let comm = max_abs(&linalg::commutator(rho.matrix(), sigma.matrix()));
    if comm > TOL_STRUCTURE {
        return Err(Error::domain(format!(
            "inputs do not commute (‖[ρ,σ]‖ = {comm:.3e}); only commuting pairs are supported"
        )));
    }
    if alpha == 0.0 {
        return min_divergence(rho, sigma);
    }
    let (pvals, qvals) = simultaneous_eigenvalues(rho, sigma)?;
    if alpha == 1.0 {
        let mut acc = 0.0;
        for (&p, &q) in pvals.iter().zip(&qvals) {
            if p > RANK_CUTOFF {
                if q <= RANK_CUTOFF {
                    return Ok(f64::INFINITY);
                }
                acc += p * (p.ln() - q.ln());
            }
        }
        return Ok(acc.max(0.0));
    }
    let mut trace = 0.0;
    for (&p, &q) in pvals.iter().zip(&qvals) {
        let (p, q) = (p.max(0.0), q.max(0.0));
        if p <= RANK_CUTOFF {
            continue;
        }
        if q <= RANK_CUTOFF {
            if alpha > 1.0 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        trace += p.powf(alpha) * q.powf(1.0 - alpha);
    }
    if trace <= RANK_CUTOFF {
        return Ok(f64::INFINITY);
    }
    Ok(trace.ln() / (alpha - 1.0))
}

/// Single-shot (deterministic) extractable work at inverse temperature β:
/// W_S = (1/β)·D₀(dephase(ρ, H) ‖ τ_β). Zero exactly when the dephased
/// state has full support.
pub fn single_shot_work(rho: &DensityMatrix, h: &Hamiltonian, beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::domain(format!(
            "single-shot work needs a finite positive beta, got {beta}"
        )));
    }
    let dephased = dephase(rho, h)?;
    let tau = gibbs_state(h, beta)?;
    let d0 = min_divergence(&dephased, &tau.state)?;
    Ok((d0 / beta).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::random::{haar_unitary, random_density, rng_from_seed};
    use crate::states::PureState;
    use crate::CVector;

    fn diag_density(probs: &[f64]) -> DensityMatrix {
        let d = probs.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = cr(p);
        }
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn passive_arrangement_on_three_levels() {
        let h = Hamiltonian::from_energies(vec![-1.0, 0.0, 1.0]).unwrap();
        let rho = diag_density(&[0.15, 0.7, 0.15]);
        let p = passive_state(&rho, &h).unwrap();
        let expected = diag_density(&[0.7, 0.15, 0.15]);
        assert!(max_abs(&(p.matrix() - expected.matrix())) < 1e-12);
        assert!((passive_energy(&rho.spectrum(), &h).unwrap() - (-0.55)).abs() < 1e-12);
        assert!((ergotropy(&rho, &h).unwrap() - 0.55).abs() < 1e-12);

        let sigma = diag_density(&[0.49, 0.02, 0.49]);
        assert!((passive_energy(&sigma.spectrum(), &h).unwrap() - (-0.47)).abs() < 1e-12);
        assert!((ergotropy(&sigma, &h).unwrap() - 0.47).abs() < 1e-12);
    }

    #[test]
    fn passive_energy_pads_with_zeros() {
        let h = Hamiltonian::from_energies(vec![0.0, 1.0, 5.0]).unwrap();
        let s = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert!((passive_energy(&s, &h).unwrap() - 0.5).abs() < 1e-15);
        let too_long = Spectrum::new(vec![0.25; 4]).unwrap();
        assert!(passive_energy(&too_long, &h).is_err());
    }

    #[test]
    fn ergotropy_is_unitarily_invariant_in_spectrum() {
        let mut rng = rng_from_seed(31);
        let h = Hamiltonian::from_energies(vec![0.0, 0.3, 1.1, 2.0]).unwrap();
        let rho = random_density(&mut rng, 4).unwrap();
        let ep = passive_energy(&rho.spectrum(), &h).unwrap();
        for _ in 0..20 {
            let u = haar_unitary(&mut rng, 4).unwrap();
            let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
            assert!((passive_energy(&rotated.spectrum(), &h).unwrap() - ep).abs() < 1e-10);
        }
    }

    #[test]
    fn gibbs_two_level_closed_form() {
        let h = Hamiltonian::from_energies(vec![0.0, 1.0]).unwrap();
        let tau = gibbs_state(&h, 2f64.ln()).unwrap();
        let pops = tau.populations(&h);
        assert!((pops[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((pops[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!((tau.log_z - 1.5f64.ln()).abs() < 1e-14);
        // β = 0 is maximally mixed
        let flat = gibbs_state(&h, 0.0).unwrap();
        assert!((flat.populations(&h)[0] - 0.5).abs() < 1e-15);
        assert!((flat.log_z - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gibbs_infinite_beta_projects_on_extreme_levels() {
        let h = Hamiltonian::from_energies(vec![0.0, 0.0, 1.0]).unwrap();
        let cold = gibbs_state(&h, f64::INFINITY).unwrap();
        assert_eq!(cold.populations(&h), vec![0.5, 0.5, 0.0]);
        assert!(cold.log_z.is_nan());
        let hot = gibbs_state(&h, f64::NEG_INFINITY).unwrap();
        assert_eq!(hot.populations(&h), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn gibbs_is_passive_for_positive_beta() {
        let h = Hamiltonian::from_energies(vec![-0.5, 0.1, 0.7, 2.0]).unwrap();
        for beta in [0.3, 1.0, 4.0] {
            let tau = gibbs_state(&h, beta).unwrap();
            assert!(ergotropy(&tau.state, &h).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn beta_matching_two_level_closed_form() {
        // S(0.7, 0.3) is matched by e^{−β} = 3/7
        let h = Hamiltonian::from_energies(vec![0.0, 1.0]).unwrap();
        let s = Spectrum::new(vec![0.7, 0.3]).unwrap().entropy_nats();
        let beta = match_beta_by_entropy(s, &h).unwrap();
        assert!((beta - (7f64 / 3.0).ln()).abs() < 1e-9, "beta = {beta}");
    }

    #[test]
    fn beta_matching_edges_and_domain() {
        let h = Hamiltonian::from_energies(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(match_beta_by_entropy(3f64.ln(), &h).unwrap(), 0.0);
        assert_eq!(match_beta_by_entropy(0.0, &h).unwrap(), f64::INFINITY);
        assert!(matches!(
            match_beta_by_entropy(3f64.ln() + 1e-6, &h),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            match_beta_by_entropy(-1e-6, &h),
            Err(Error::Domain(_))
        ));
        // degenerate ground level raises the floor to ln 2
        let hd = Hamiltonian::from_energies(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(match_beta_by_entropy(2f64.ln() - 1e-13, &hd).unwrap(), f64::INFINITY);
        assert!(match_beta_by_entropy(0.5, &hd).is_err());
    }

    #[test]
    fn work_report_orders_ergotropy_below_thermodynamic_work() {
        let mut rng = rng_from_seed(37);
        let h = Hamiltonian::from_energies(vec![0.0, 0.4, 1.0, 1.7]).unwrap();
        for _ in 0..50 {
            let rho = random_density(&mut rng, 4).unwrap();
            let report = thermodynamic_work(&rho, &h).unwrap();
            assert!(report.ergotropy >= -1e-12);
            assert!(report.ergotropy <= report.thermodynamic_work + 1e-9);
            assert!(
                (report.ergotropy - (report.internal_energy - report.passive_energy)).abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn renyi_entropy_special_points_and_ordering() {
        let rho = diag_density(&[0.7, 0.15, 0.15]);
        let ln2 = std::f64::consts::LN_2;
        let s0 = renyi_entropy(&rho, 0.0, EntropyBase::Bits).unwrap();
        assert!((s0 - 3f64.ln() / ln2).abs() < 1e-12);
        let s1 = renyi_entropy(&rho, 1.0, EntropyBase::Bits).unwrap();
        assert!((s1 - 1.18129).abs() < 1e-4);
        let s2 = renyi_entropy(&rho, 2.0, EntropyBase::Bits).unwrap();
        assert!((s2 + 0.535f64.log2()).abs() < 1e-12);
        let sinf = renyi_entropy(&rho, f64::INFINITY, EntropyBase::Bits).unwrap();
        assert!((sinf + 0.7f64.log2()).abs() < 1e-12);
        // non-increasing in α
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 5.0, f64::INFINITY];
        for w in grid.windows(2) {
            let a = renyi_entropy(&rho, w[0], EntropyBase::Nats).unwrap();
            let b = renyi_entropy(&rho, w[1], EntropyBase::Nats).unwrap();
            assert!(a >= b - 1e-12, "S_{} < S_{}", w[0], w[1]);
        }
        assert!(renyi_entropy(&rho, -0.5, EntropyBase::Nats).is_err());
    }

    #[test]
    fn renyi_entropy_of_pure_state_vanishes() {
        let psi = PureState::new(vec![2], CVector::from_vec(vec![cr(1.0), cr(0.0)])).unwrap();
        for alpha in [0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            let s = renyi_entropy(&psi.density(), alpha, EntropyBase::Nats).unwrap();
            assert!(s.abs() < 1e-12, "alpha {alpha}: {s}");
        }
    }

    #[test]
    fn divergence_vanishes_on_identical_states() {
        let rho = diag_density(&[0.5, 0.3, 0.2]);
        for alpha in [0.0, 0.5, 1.0, 1.5, 2.0] {
            let d = renyi_divergence(&rho, &rho, alpha).unwrap();
            assert!(d.abs() < 1e-12, "alpha {alpha}: {d}");
        }
    }

    #[test]
    fn divergence_rejects_non_commuting_and_bad_alpha() {
        let rho = diag_density(&[0.8, 0.2]);
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.5), c(0.2, 0.0), c(0.2, 0.0), cr(0.5)]);
        let sigma = DensityMatrix::new(m).unwrap();
        assert!(matches!(
            renyi_divergence(&rho, &sigma, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(renyi_divergence(&rho, &rho, 2.5).is_err());
    }

    #[test]
    fn divergence_kl_closed_form_and_support() {
        let rho = diag_density(&[0.9, 0.1]);
        let sigma = diag_density(&[0.5, 0.5]);
        let expected = 0.9 * (0.9f64 / 0.5).ln() + 0.1 * (0.1f64 / 0.5).ln();
        assert!((renyi_divergence(&rho, &sigma, 1.0).unwrap() - expected).abs() < 1e-12);
        // σ misses part of ρ's support: +∞ for α ≥ 1, finite for α < 1
        let tight = diag_density(&[1.0, 0.0]);
        let wide = diag_density(&[0.5, 0.5]);
        assert!(renyi_divergence(&wide, &tight, 1.5).unwrap().is_infinite());
        assert!(renyi_divergence(&wide, &tight, 0.5).unwrap().is_finite());
        assert!(renyi_divergence(&tight, &wide, 0.0).unwrap() - 2f64.ln() < 1e-12);
    }

    #[test]
    fn divergence_handles_degenerate_blocks() {
        // ρ has a degenerate eigenvalue; σ distinguishes the block
        let rho = diag_density(&[0.4, 0.4, 0.2]);
        let sigma = diag_density(&[0.5, 0.3, 0.2]);
        let d2 = renyi_divergence(&rho, &sigma, 2.0).unwrap();
        let expected = (0.4f64.powi(2) / 0.5 + 0.4f64.powi(2) / 0.3 + 0.2f64.powi(2) / 0.2)
            .ln();
        assert!((d2 - expected).abs() < 1e-10);
    }

    #[test]
    fn single_shot_work_zero_iff_full_support() {
        let h = Hamiltonian::from_energies(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let full = diag_density(&[0.275, 0.55, 0.125, 0.05]);
        for beta in [0.5, 1.0, 2.0] {
            assert_eq!(single_shot_work(&full, &h, beta).unwrap(), 0.0);
        }
        let partial = diag_density(&[0.35, 0.35, 0.3, 0.0]);
        for beta in [0.5f64, 1.0, 2.0] {
            let w = single_shot_work(&partial, &h, beta).unwrap();
            let z_support = 1.0 + (-beta).exp() + (-2.0 * beta).exp();
            let expected = (1.0 + (-3.0 * beta).exp() / z_support).ln() / beta;
            assert!((w - expected).abs() < 1e-12, "beta {beta}: {w} vs {expected}");
        }
        assert!(single_shot_work(&full, &h, 0.0).is_err());
        assert!(single_shot_work(&full, &h, -1.0).is_err());
        assert!(single_shot_work(&full, &h, f64::INFINITY).is_err());
    }

    #[test]
    fn single_shot_work_counts_coherent_support_after_dephasing() {
        // |+⟩ dephases to I/2, which has full support: W_S = 0
        let h = Hamiltonian::from_energies(vec![0.0, 1.0]).unwrap();
        let amps = CVector::from_vec(vec![cr(std::f64::consts::FRAC_1_SQRT_2); 2]);
        let plus = PureState::new(vec![2], amps).unwrap();
        assert_eq!(single_shot_work(&plus.density(), &h, 1.0).unwrap(), 0.0);
        // while the ground state keeps W_S = (1/β)ln Z > 0
        let ground = diag_density(&[1.0, 0.0]);
        let w = single_shot_work(&ground, &h, 1.0).unwrap();
        assert!((w - (1.0 + (-1f64).exp()).ln()).abs() < 1e-12);
    }
}
