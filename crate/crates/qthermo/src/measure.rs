//! Passive energy of the reduced state as an entanglement measure.
//!
//! For a bipartite pure state, the passive-state energy of either marginal
//! is an LU-invariant, concave, LOCC-monotone function of the Schmidt
//! coefficients; with the right two-level Hamiltonians it reproduces the
//! full Vidal monotone family. Per-copy and asymptotic variants quantify
//! many-copy behaviour, and the ergotropic gap extends the idea to mixed
//! bipartite states via local versus global work extraction.

use crate::error::{Error, Result};
use crate::linalg::RANK_CUTOFF;
use crate::states::{partial_trace, schmidt, DensityMatrix, Hamiltonian, PureState, Spectrum};
use crate::work::{gibbs_state, match_beta_by_entropy, passive_energy};

/// A pure-state decomposition of a mixed bipartite state.
#[derive(Debug, Clone)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::validation(
                "decomposition needs matching, non-empty weight and state lists",
            ));
        }
        if weights.iter().any(|&w| !(w >= -1e-12)) {
            return Err(Error::validation("decomposition weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::validation(format!(
                "decomposition weights sum to {total}, expected 1"
            )));
        }
        let dims = states[0].dims().to_vec();
        if dims.len() != 2 || states.iter().any(|s| s.dims() != dims) {
            return Err(Error::validation(
                "decomposition states must share one bipartite factor structure",
            ));
        }
        Ok(Decomposition { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    /// The mixture Σ wᵢ |ψᵢ⟩⟨ψᵢ|.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        let d = self.states[0].dim();
        let mut m = crate::CMatrix::zeros(d, d);
        for (w, psi) in self.weights.iter().zip(&self.states) {
            m += (psi.amplitudes() * psi.amplitudes().adjoint()).scale(*w);
        }
        DensityMatrix::new(m)
    }
}

/// A measure evaluation tagged with how many copies it refers to.
#[derive(Debug, Clone, Copy)]
pub struct MeasureValue {
    pub value: f64,
    pub copies: u32,
}

fn bipartite_marginal_spectrum(psi: &PureState) -> Result<Spectrum> {
    if psi.dims().len() != 2 {
        return Err(Error::validation(format!(
            "need a bipartite state, got {} subsystems",
            psi.dims().len()
        )));
    }
    Ok(schmidt(psi)?.coefficients)
}

fn check_local_hamiltonian(psi: &PureState, h_a: &Hamiltonian) -> Result<()> {
    if h_a.dim() < psi.dims()[0] {
        return Err(Error::validation(format!(
            "local Hamiltonian has {} levels, subsystem A has dimension {}",
            h_a.dim(),
            psi.dims()[0]
        )));
    }
    Ok(())
}

/// 𝓔(ψ) = E(ρ_A^p): the passive energy of the reduced state of subsystem A
/// (the first factor) against `h_a`. A Hamiltonian larger than the
/// subsystem is allowed; the spectrum is padded with zeros.
pub fn measure_pure(psi: &PureState, h_a: &Hamiltonian) -> Result<f64> {
    check_local_hamiltonian(psi, h_a)?;
    let coeffs = bipartite_marginal_spectrum(psi)?;
    passive_energy(&coeffs, h_a)
}

/// Vidal's monotone E_k(ψ) = Σ_{i ≥ k} λ_i over the Schmidt coefficients
/// sorted non-increasing; k is 1-indexed and E_1 = 1.
pub fn vidal_monotone(psi: &PureState, k: usize) -> Result<f64> {
    let coeffs = bipartite_marginal_spectrum(psi)?;
    if k == 0 || k > coeffs.len() {
        return Err(Error::domain(format!(
            "k = {k} outside 1..={}",
            coeffs.len()
        )));
    }
    Ok(coeffs.probs()[k - 1..].iter().sum())
}

/// Largest probability with which ψ can be converted to φ by LOCC:
/// p = min_k E_k(ψ)/E_k(φ), ratios with E_k(φ) = 0 skipped.
pub fn conversion_probability(psi: &PureState, phi: &PureState) -> Result<f64> {
    let a = bipartite_marginal_spectrum(psi)?;
    let b = bipartite_marginal_spectrum(phi)?;
    let n = a.len().max(b.len());
    let (pa, pb) = (a.padded(n)?, b.padded(n)?);
    let mut p = 1.0f64;
    let (mut ta, mut tb) = (1.0f64, 1.0f64);
    for k in 0..n {
        if tb > RANK_CUTOFF {
            p = p.min((ta / tb).max(0.0));
        }
        ta -= pa[k];
        tb -= pb[k];
    }
    Ok(p.min(1.0))
}

/// Ergotropic gap of a bipartite state: local passive energies minus the
/// global one, Δ = E(ρ_X^p) + E(ρ_Y^p) − E(ρ_XY^p), with the joint
/// Hamiltonian H_X⊗I + I⊗H_Y.
pub fn ergotropic_gap(
    rho_xy: &DensityMatrix,
    h_x: &Hamiltonian,
    h_y: &Hamiltonian,
) -> Result<f64> {
    let (dx, dy) = (h_x.dim(), h_y.dim());
    if dx * dy != rho_xy.dim() {
        return Err(Error::validation(format!(
            "Hamiltonians imply dimension {}x{} = {}, state has {}",
            dx,
            dy,
            dx * dy,
            rho_xy.dim()
        )));
    }
    let dims = [dx, dy];
    let rho_x = partial_trace(rho_xy, &dims, &[0])?;
    let rho_y = partial_trace(rho_xy, &dims, &[1])?;
    let h_joint = h_x.tensor_sum(h_y)?;
    let local = passive_energy(&rho_x.spectrum(), h_x)?
        + passive_energy(&rho_y.spectrum(), h_y)?;
    let global = passive_energy(&rho_xy.spectrum(), &h_joint)?;
    Ok(local - global)
}

/// Per-copy measure 𝓔ⁿ(ψ) = 𝓔(ψ^⊗n)/n for n ∈ {1, 2, 3}, evaluated
/// directly on the n-fold product spectrum against the n-fold summed
/// energies — no 4ⁿ-dimensional state is ever built.
pub fn per_copy_measure(psi: &PureState, n: u32, h_a: &Hamiltonian) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::domain(format!("copies must lie in 1..=3, got {n}")));
    }
    check_local_hamiltonian(psi, h_a)?;
    let d_a = psi.dims()[0];
    if d_a.pow(n) > 64 {
        return Err(Error::domain(format!(
            "{d_a}^{n} copies exceed the supported joint dimension 64"
        )));
    }
    let coeffs = bipartite_marginal_spectrum(psi)?;

    let mut probs = vec![1.0f64];
    let mut energies = vec![0.0f64];
    for _ in 0..n {
        probs = probs
            .iter()
            .flat_map(|&p| coeffs.probs().iter().map(move |&q| p * q))
            .collect();
        energies = energies
            .iter()
            .flat_map(|&e| h_a.energies().iter().map(move |&f| e + f))
            .collect();
    }
    probs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    energies.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total: f64 = probs.iter().zip(&energies).map(|(&p, &e)| p * e).sum();
    Ok(total / n as f64)
}

/// Asymptotic (regularized) measure: energy of the Gibbs state whose
/// entropy matches the reduced state, 𝓔^∞(ψ) = Tr(τ_β H_A) with
/// S(τ_β) = S(ρ_A).
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticMeasure {
    /// entropy-matched inverse temperature (may be +∞)
    pub beta: f64,
    pub value: f64,
}

pub fn asymptotic_measure(psi: &PureState, h_a: &Hamiltonian) -> Result<AsymptoticMeasure> {
    check_local_hamiltonian(psi, h_a)?;
    let coeffs = bipartite_marginal_spectrum(psi)?;
    let beta = match_beta_by_entropy(coeffs.entropy_nats(), h_a)?;
    let tau = gibbs_state(h_a, beta)?;
    let value = tau.state.energy(h_a)?;
    Ok(AsymptoticMeasure { beta, value })
}

/// Convex-roof upper bound from an explicit decomposition:
/// Σ wᵢ 𝓔(ψᵢ) ≥ 𝓔(ρ). The decomposition must reproduce ρ within 1e-9.
pub fn measure_mixed_upper_bound(
    rho: &DensityMatrix,
    dec: &Decomposition,
    h_a: &Hamiltonian,
) -> Result<f64> {
    let mix = dec.mixture()?;
    if mix.dim() != rho.dim() {
        return Err(Error::validation(format!(
            "decomposition dimension {} does not match state dimension {}",
            mix.dim(),
            rho.dim()
        )));
    }
    let dev = crate::linalg::max_abs(&(mix.matrix() - rho.matrix()));
    if dev > 1e-9 {
        return Err(Error::validation(format!(
            "decomposition misses the state by {dev:.3e} (> 1e-9)"
        )));
    }
    let mut total = 0.0;
    for (w, psi) in dec.weights().iter().zip(dec.states()) {
        total += w * measure_pure(psi, h_a)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use crate::random::{random_pure, rng_from_seed};
    use crate::CVector;

    fn qubit_h() -> Hamiltonian {
        Hamiltonian::from_energies(vec![0.0, 1.0]).unwrap()
    }

    fn two_qubit_pure(l0: f64) -> PureState {
        let mut amps = CVector::zeros(4);
        amps[0] = cr(l0.sqrt());
        amps[3] = cr((1.0 - l0).sqrt());
        PureState::new(vec![2, 2], amps).unwrap()
    }

    #[test]
    fn bell_scores_half_product_zero() {
        let h = qubit_h();
        assert!((measure_pure(&two_qubit_pure(0.5), &h).unwrap() - 0.5).abs() < 1e-12);
        assert!(measure_pure(&two_qubit_pure(1.0), &h).unwrap().abs() < 1e-15);
    }

    #[test]
    fn measure_matches_reduced_passive_energy() {
        let mut rng = rng_from_seed(71);
        let h = Hamiltonian::from_energies(vec![0.0, 0.7, 1.5]).unwrap();
        for _ in 0..25 {
            let psi = random_pure(&mut rng, &[3, 4]).unwrap();
            let direct = measure_pure(&psi, &h).unwrap();
            let rho_a = partial_trace(&psi.density(), &[3, 4], &[0]).unwrap();
            let via_marginal = passive_energy(&rho_a.spectrum(), &h).unwrap();
            assert!((direct - via_marginal).abs() < 1e-10);
        }
    }

    #[test]
    fn vidal_family_edges() {
        let bell = two_qubit_pure(0.5);
        assert!((vidal_monotone(&bell, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((vidal_monotone(&bell, 2).unwrap() - 0.5).abs() < 1e-12);
        assert!(vidal_monotone(&bell, 0).is_err());
        assert!(vidal_monotone(&bell, 3).is_err());
    }

    #[test]
    fn vidal_equals_measure_under_step_hamiltonians() {
        let mut rng = rng_from_seed(73);
        for _ in 0..25 {
            let psi = random_pure(&mut rng, &[4, 4]).unwrap();
            for k in 1..=4usize {
                let mut steps = vec![0.0; k - 1];
                steps.extend(std::iter::repeat(1.0).take(4 - k + 1));
                let h_k = Hamiltonian::from_energies(steps).unwrap();
                let e_k = vidal_monotone(&psi, k).unwrap();
                let m = measure_pure(&psi, &h_k).unwrap();
                assert!((e_k - m).abs() < 1e-10, "k = {k}: {e_k} vs {m}");
            }
        }
    }

    #[test]
    fn conversion_probability_cases() {
        let skew = two_qubit_pure(0.6);
        let bell = two_qubit_pure(0.5);
        // E_2 ratio 0.4/0.5
        assert!((conversion_probability(&skew, &bell).unwrap() - 0.8).abs() < 1e-12);
        // Bell reaches anything two-qubit deterministically
        assert!((conversion_probability(&bell, &skew).unwrap() - 1.0).abs() < 1e-12);
        // Schmidt rank cannot grow, even probabilistically
        let product = two_qubit_pure(1.0);
        assert_eq!(conversion_probability(&product, &bell).unwrap(), 0.0);
    }

    #[test]
    fn ergotropic_gap_of_pure_states_doubles_local_passive_energy() {
        let h = qubit_h();
        for l0 in [0.5, 0.6, 0.75, 0.9] {
            let psi = two_qubit_pure(l0);
            let gap = ergotropic_gap(&psi.density(), &h, &h).unwrap();
            assert!((gap - 2.0 * (1.0 - l0)).abs() < 1e-10, "λ = {l0}");
        }
        // product of maximally mixed marginals has no gap
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(ergotropic_gap(&rho, &h, &h).unwrap().abs() < 1e-10);
    }

    #[test]
    fn per_copy_chain_and_qubit_additivity() {
        let h = qubit_h();
        let psi = two_qubit_pure(0.7);
        let e1 = per_copy_measure(&psi, 1, &h).unwrap();
        let e2 = per_copy_measure(&psi, 2, &h).unwrap();
        let e3 = per_copy_measure(&psi, 3, &h).unwrap();
        assert!((e1 - 0.3).abs() < 1e-12);
        // qubit marginals are additive: the chain is flat
        assert!((e1 - e2).abs() < 1e-12);
        assert!((e2 - e3).abs() < 1e-12);
        assert!(per_copy_measure(&psi, 0, &h).is_err());
        assert!(per_copy_measure(&psi, 4, &h).is_err());
    }

    #[test]
    fn per_copy_strictness_depends_on_the_ladder() {
        // qutrit marginal √0.5|00⟩+√0.3|11⟩+√0.2|22⟩
        let mut amps = CVector::zeros(9);
        amps[0] = cr(0.5f64.sqrt());
        amps[4] = cr(0.3f64.sqrt());
        amps[8] = cr(0.2f64.sqrt());
        let psi = PureState::new(vec![3, 3], amps).unwrap();
        // equally spaced ladder: two copies extract exactly twice as much
        let h_lin = Hamiltonian::from_energies(vec![0.0, 1.0, 2.0]).unwrap();
        let e1 = per_copy_measure(&psi, 1, &h_lin).unwrap();
        let e2 = per_copy_measure(&psi, 2, &h_lin).unwrap();
        assert!((e1 - 0.7).abs() < 1e-12);
        assert!((e2 - 0.7).abs() < 1e-12);
        // anharmonic ladder: strictly cheaper per copy
        let h_anh = Hamiltonian::from_energies(vec![0.0, 1.0, 3.0]).unwrap();
        let f1 = per_copy_measure(&psi, 1, &h_anh).unwrap();
        let f2 = per_copy_measure(&psi, 2, &h_anh).unwrap();
        assert!((f1 - 0.9).abs() < 1e-12);
        assert!((f2 - 0.895).abs() < 1e-12);
        assert!(f2 < f1 - 1e-3);
    }

    #[test]
    fn asymptotic_measure_closed_form_and_limits() {
        let h = qubit_h();
        // marginal (0.7, 0.3): β = ln(7/3), τ_β = (0.7, 0.3), energy 0.3
        let am = asymptotic_measure(&two_qubit_pure(0.7), &h).unwrap();
        assert!((am.beta - (7f64 / 3.0).ln()).abs() < 1e-9);
        assert!((am.value - 0.3).abs() < 1e-10);
        // Bell: β = 0, maximally mixed, energy 1/2
        let bell = asymptotic_measure(&two_qubit_pure(0.5), &h).unwrap();
        assert_eq!(bell.beta, 0.0);
        assert!((bell.value - 0.5).abs() < 1e-12);
        // product: β = ∞, ground state, energy 0
        let prod = asymptotic_measure(&two_qubit_pure(1.0), &h).unwrap();
        assert!(prod.beta.is_infinite());
        assert_eq!(prod.value, 0.0);
    }

    #[test]
    fn asymptotic_satisfies_entropy_identity() {
        // E(τ_β) = (S − ln Z)/β for finite positive β
        let mut rng = rng_from_seed(79);
        let h = Hamiltonian::from_energies(vec![0.0, 0.8, 1.7]).unwrap();
        for _ in 0..20 {
            let psi = random_pure(&mut rng, &[3, 3]).unwrap();
            let am = asymptotic_measure(&psi, &h).unwrap();
            if !am.beta.is_finite() || am.beta <= 1e-8 {
                continue;
            }
            let tau = gibbs_state(&h, am.beta).unwrap();
            let s = tau.state.spectrum().entropy_nats();
            let identity = (s - tau.log_z) / am.beta;
            assert!((identity - am.value).abs() < 1e-8);
        }
    }

    #[test]
    fn mixed_upper_bound_checks_the_mixture() {
        let h = qubit_h();
        let bell = two_qubit_pure(0.5);
        let dec = Decomposition::new(vec![1.0], vec![bell.clone()]).unwrap();
        let bound = measure_mixed_upper_bound(&bell.density(), &dec, &h).unwrap();
        assert!((bound - 0.5).abs() < 1e-12);
        // decomposition of a different state is rejected
        let skew = two_qubit_pure(0.8);
        assert!(measure_mixed_upper_bound(&skew.density(), &dec, &h).is_err());
    }
}
