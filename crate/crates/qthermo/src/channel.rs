//! Energy-preserving unital channels and their monotone structure.
//!
//! A channel here is a Kraus family whose operators all commute with the
//! system Hamiltonian and that resolves the identity from both sides.
//! Channels are sampled microscopically: a Haar-random block unitary on each
//! joint eigenspace of the pair (ε_S, ε_E) acts on system ⊗ environment,
//! with the environment in a Gibbs state; tracing the environment out yields
//! the Kraus family. Every function of H_S — in particular every Gibbs
//! state, at any inverse temperature — is a fixed point of such a channel.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, commutator, identity, max_abs, CMatrix, MAX_DIM};
use crate::random::haar_unitary;
use crate::states::{DensityMatrix, Hamiltonian};
use crate::work::{
    gibbs_state, passive_energy, single_shot_work, spectrum_renyi, EntropyBase,
};

/// Residual allowed on the channel's defining algebraic identities, and the
/// slack allowed on every monotone comparison.
pub const EPO_TOL: f64 = 1e-9;

/// Kraus operators with smaller max-norm are dropped when sampling; they
/// carry no weight at the working tolerances.
const KRAUS_DROP_TOL: f64 = 1e-14;

/// A thermal environment: its Hamiltonian and inverse temperature (±∞ allowed).
#[derive(Debug, Clone)]
pub struct EnvironmentSpec {
    pub hamiltonian: Hamiltonian,
    pub beta: f64,
}

/// An energy-preserving unital channel in Kraus form.
#[derive(Debug, Clone)]
pub struct EpoChannel {
    system: Hamiltonian,
    kraus: Vec<CMatrix>,
}

/// Residuals of the three defining identities of an `EpoChannel`.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub kraus_count: usize,
    /// ‖Σ M†M − I‖ (trace preservation)
    pub completeness_residual: f64,
    /// ‖Σ MM† − I‖ (unitality)
    pub unitality_residual: f64,
    /// max over k of ‖[M_k, H_S]‖
    pub commutation_residual: f64,
    pub pass: bool,
}

fn channel_residuals(system: &Hamiltonian, kraus: &[CMatrix]) -> ValidationReport {
    let d = system.dim();
    let h = system.matrix();
    let mut complete = CMatrix::zeros(d, d);
    let mut unital = CMatrix::zeros(d, d);
    let mut comm: f64 = 0.0;
    for m in kraus {
        complete += m.adjoint() * m;
        unital += m * m.adjoint();
        comm = comm.max(max_abs(&commutator(m, &h)));
    }
    let completeness = max_abs(&(complete - identity(d)));
    let unitality = max_abs(&(unital - identity(d)));
    ValidationReport {
        kraus_count: kraus.len(),
        completeness_residual: completeness,
        unitality_residual: unitality,
        commutation_residual: comm,
        pass: completeness <= EPO_TOL && unitality <= EPO_TOL && comm <= EPO_TOL,
    }
}

impl EpoChannel {
    /// Accepts the Kraus family only if completeness, unitality and
    /// commutation with the system Hamiltonian all hold within `EPO_TOL`.
    pub fn new(system: Hamiltonian, kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::validation("channel needs at least one Kraus operator"));
        }
        let d = system.dim();
        for (k, m) in kraus.iter().enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::validation(format!(
                    "Kraus operator {k} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let report = channel_residuals(&system, &kraus);
        if report.completeness_residual > EPO_TOL {
            return Err(Error::validation(format!(
                "Kraus family is not trace-preserving (residual {:.3e})",
                report.completeness_residual
            )));
        }
        if report.unitality_residual > EPO_TOL {
            return Err(Error::validation(format!(
                "Kraus family is not unital (residual {:.3e})",
                report.unitality_residual
            )));
        }
        if report.commutation_residual > EPO_TOL {
            return Err(Error::validation(format!(
                "Kraus operator fails to commute with H (residual {:.3e})",
                report.commutation_residual
            )));
        }
        Ok(EpoChannel { system, kraus })
    }

    pub fn system(&self) -> &Hamiltonian {
        &self.system
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }
}

/// Residual report for an existing channel (already within tolerance by
/// construction; useful on deserialized input).
pub fn validate_epo(channel: &EpoChannel) -> ValidationReport {
    channel_residuals(&channel.system, &channel.kraus)
}

/// Residual report for a Kraus family that may not qualify as an
/// `EpoChannel` at all — failures land in the report instead of an error.
pub fn validate_epo_parts(system: &Hamiltonian, kraus: &[CMatrix]) -> ValidationReport {
    channel_residuals(system, kraus)
}

/// Sample a channel by drawing an independent Haar-random unitary on each
/// joint (ε_S, ε_E) eigenspace and contracting the environment in its Gibbs
/// state.
pub fn sample_epo_channel(
    h_s: &Hamiltonian,
    env: &EnvironmentSpec,
    rng: &mut impl Rng,
) -> Result<EpoChannel> {
    let (ds, de) = (h_s.dim(), env.hamiltonian.dim());
    if ds * de > MAX_DIM {
        return Err(Error::validation(format!(
            "joint dimension {} exceeds supported maximum {MAX_DIM}",
            ds * de
        )));
    }
    // Block unitary in the product eigenbasis: joint index (i, j) = i·dE + j.
    let dj = ds * de;
    let mut u = CMatrix::zeros(dj, dj);
    for sg in h_s.energy_groups() {
        for eg in env.hamiltonian.energy_groups() {
            let idx: Vec<usize> = sg
                .iter()
                .flat_map(|&i| eg.iter().map(move |&j| i * de + j))
                .collect();
            let block = haar_unitary(rng, idx.len())?;
            for (r, &ir) in idx.iter().enumerate() {
                for (c, &ic) in idx.iter().enumerate() {
                    u[(ir, ic)] = block[(r, c)];
                }
            }
        }
    }
    // environment weights in energy order, matching the eigenbasis indexing
    let pops = gibbs_state(&env.hamiltonian, env.beta)?.populations(&env.hamiltonian);

    let vs = h_s.basis();
    let mut kraus = Vec::new();
    for j in 0..de {
        let w = pops[j];
        if w <= 0.0 {
            continue;
        }
        for l in 0..de {
            // M_{(l,j)} = √w_j · V_S ⟨l|U'|j⟩ V_S† with the d_S×d_S slice
            // U'[i·dE+l, i'·dE+j]
            let slice = CMatrix::from_fn(ds, ds, |i, ip| u[(i * de + l, ip * de + j)]);
            let m = vs * slice * vs.adjoint() * linalg::cr(w.sqrt());
            if max_abs(&m) > KRAUS_DROP_TOL {
                kraus.push(m);
            }
        }
    }
    EpoChannel::new(h_s.clone(), kraus)
}

/// Apply the channel: Σ M ρ M†.
pub fn apply(channel: &EpoChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = channel.system.dim();
    if rho.dim() != d {
        return Err(Error::validation(format!(
            "state dimension {} does not match channel dimension {d}",
            rho.dim()
        )));
    }
    let mut out = CMatrix::zeros(d, d);
    for m in &channel.kraus {
        out += m * rho.matrix() * m.adjoint();
    }
    DensityMatrix::new(out)
}

/// One monotone comparison; the convention is pass ⇔ lhs ≤ rhs + EPO_TOL.
#[derive(Debug, Clone)]
pub struct MonotoneCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// The seven monotone families evaluated across one application of a channel.
#[derive(Debug, Clone)]
pub struct MonotoneReport {
    pub checks: Vec<MonotoneCheck>,
    pub all_pass: bool,
}

fn check(name: &str, lhs: f64, rhs: f64) -> MonotoneCheck {
    MonotoneCheck {
        name: name.to_string(),
        lhs,
        rhs,
        pass: lhs <= rhs + EPO_TOL,
    }
}

/// Evaluate every monotone the channel must respect on the given input:
/// spectrum majorization, the Rényi entropy grid, passive energy, ergotropy,
/// single-shot work at `beta_bath`, mean-energy invariance, and free energy
/// at `beta_bath`.
pub fn monotone_report(
    rho: &DensityMatrix,
    channel: &EpoChannel,
    beta_bath: f64,
) -> Result<MonotoneReport> {
    if !(beta_bath.is_finite() && beta_bath > 0.0) {
        return Err(Error::domain(format!(
            "bath inverse temperature must be finite and positive, got {beta_bath}"
        )));
    }
    let h = &channel.system;
    let out = apply(channel, rho)?;
    let (spec_in, spec_out) = (rho.spectrum(), out.spectrum());
    let mut checks = Vec::new();

    // output spectrum must be majorized by the input spectrum
    let (a, b) = (spec_in.probs(), spec_out.probs());
    let mut worst = f64::NEG_INFINITY;
    let (mut sa, mut sb) = (0.0, 0.0);
    for k in 0..a.len() {
        sa += a[k];
        sb += b[k];
        worst = worst.max(sb - sa);
    }
    checks.push(check("spectrum_majorization", worst, 0.0));

    for alpha in [0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
        let s_in = spectrum_renyi(&spec_in, alpha, EntropyBase::Nats)?;
        let s_out = spectrum_renyi(&spec_out, alpha, EntropyBase::Nats)?;
        let label = if alpha.is_infinite() {
            "renyi_entropy_alpha_inf".to_string()
        } else {
            format!("renyi_entropy_alpha_{alpha}")
        };
        checks.push(check(&label, s_in, s_out));
    }

    checks.push(check(
        "passive_energy",
        passive_energy(&spec_in, h)?,
        passive_energy(&spec_out, h)?,
    ));

    let e_in = rho.energy(h)?;
    let e_out = out.energy(h)?;
    checks.push(check(
        "ergotropy",
        e_out - passive_energy(&spec_out, h)?,
        e_in - passive_energy(&spec_in, h)?,
    ));
    checks.push(check(
        "single_shot_work",
        single_shot_work(&out, h, beta_bath)?,
        single_shot_work(rho, h, beta_bath)?,
    ));
    checks.push(check("energy_invariance", (e_out - e_in).abs(), 0.0));
    checks.push(check(
        "free_energy",
        e_out - spec_out.entropy_nats() / beta_bath,
        e_in - spec_in.entropy_nats() / beta_bath,
    ));

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(MonotoneReport { checks, all_pass })
}
