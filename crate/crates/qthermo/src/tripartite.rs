//! Ergotropic-gap analysis of three-party states.
//!
//! For three qubits with H = |1⟩⟨1| on each site, the three bipartite-cut
//! gaps form a signature that separates the canonical entanglement families:
//! GHZ-like states give three equal gaps, W-like states an unequal triple,
//! biseparable states exactly one vanishing entry, and product states all
//! zeros. GHZ and the symmetric W can collide in the signature; the gap of
//! the state dephased in its own marginal basis tells them apart. On qubits
//! the A-side gaps obey an exact monogamy identity,
//! Δ_{A|BC} = Δ_{A|B} + Δ_{A|C}; in higher dimensions it relaxes to ≤.

use crate::error::{Error, Result};
use crate::linalg::{self, cr, kron, CMatrix, CVector, TOL_STRUCTURE};
use crate::measure::ergotropic_gap;
use crate::states::{partial_trace, DensityMatrix, Hamiltonian, PureState};
use crate::work::passive_energy;

/// Default decision tolerance for the classifier.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// The three bipartite cuts of an A ⊗ B ⊗ C state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    ABc,
    BAc,
    CAb,
}

/// Which pair is entangled in a biseparable state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisepPair {
    AB,
    AC,
    BC,
}

/// Ergotropic gaps across the three cuts.
#[derive(Debug, Clone, Copy)]
pub struct GapSignature {
    pub a_bc: f64,
    pub b_ac: f64,
    pub c_ab: f64,
}

impl GapSignature {
    pub fn as_array(&self) -> [f64; 3] {
        [self.a_bc, self.b_ac, self.c_ab]
    }
}

/// SLOCC-style label produced by `classify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassLabel {
    Ghz,
    W,
    BisepAbC,
    BisepAcB,
    BisepBcA,
    Product,
    AmbiguousGhzOrW,
}

impl ClassLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::Ghz => "GHZ",
            ClassLabel::W => "W",
            ClassLabel::BisepAbC => "BisepAB_C",
            ClassLabel::BisepAcB => "BisepAC_B",
            ClassLabel::BisepBcA => "BisepBC_A",
            ClassLabel::Product => "Product",
            ClassLabel::AmbiguousGhzOrW => "AmbiguousGHZorW",
        }
    }
}

/// Everything the classifier looked at.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub label: ClassLabel,
    pub signature: GapSignature,
    /// filled when the dephased-gap discriminator had to run
    pub dephased_gap: Option<f64>,
    pub rule: String,
}

fn default_bases() -> [CMatrix; 3] {
    [linalg::identity(2), linalg::identity(2), linalg::identity(2)]
}

fn checked_bases(bases: Option<&[CMatrix; 3]>) -> Result<[CMatrix; 3]> {
    let bases = match bases {
        None => return Ok(default_bases()),
        Some(b) => b.clone(),
    };
    for (i, b) in bases.iter().enumerate() {
        if b.nrows() != 2 || b.ncols() != 2 || !linalg::is_unitary(b, TOL_STRUCTURE) {
            return Err(Error::validation(format!(
                "local basis {i} must be a 2x2 unitary"
            )));
        }
    }
    Ok(bases)
}

fn three_qubit_from_terms(
    terms: &[(usize, usize, usize, linalg::C64)],
    bases: &[CMatrix; 3],
) -> Result<PureState> {
    let mut amps = CVector::zeros(8);
    for &(a, b, c, w) in terms {
        for i in 0..8 {
            let (ia, ib, ic) = (i >> 2 & 1, i >> 1 & 1, i & 1);
            amps[i] += w * bases[0][(ia, a)] * bases[1][(ib, b)] * bases[2][(ic, c)];
        }
    }
    PureState::new(vec![2, 2, 2], amps)
}

/// √λmax |ψ₁ψ₂ψ₃⟩ + e^{iφ}√(1−λmax) |ψ₁⊥ψ₂⊥ψ₃⊥⟩ in the given local bases
/// (computational by default).
pub fn make_ghz(lam_max: f64, phase: f64, bases: Option<&[CMatrix; 3]>) -> Result<PureState> {
    if !(0.0..=1.0).contains(&lam_max) {
        return Err(Error::validation(format!(
            "weight {lam_max} outside [0, 1]"
        )));
    }
    let bases = checked_bases(bases)?;
    let w0 = cr(lam_max.sqrt());
    let w1 = linalg::c(0.0, phase).exp() * (1.0 - lam_max).sqrt();
    three_qubit_from_terms(&[(0, 0, 0, w0), (1, 1, 1, w1)], &bases)
}

/// √λ₁ |ψ₁ψ₂ψ₃⊥⟩ + e^{iφ₁}√λ₂ |ψ₁ψ₂⊥ψ₃⟩ + e^{iφ₂}√λ₃ |ψ₁⊥ψ₂ψ₃⟩ with
/// λ₁ ≥ λ₂ ≥ λ₃ ≥ 0 summing to one.
pub fn make_w(
    lambdas: [f64; 3],
    phases: [f64; 2],
    bases: Option<&[CMatrix; 3]>,
) -> Result<PureState> {
    let [l1, l2, l3] = lambdas;
    if l1 < l2 - 1e-12 || l2 < l3 - 1e-12 || l3 < -1e-12 {
        return Err(Error::validation(format!(
            "weights must be sorted non-increasing and nonnegative, got {lambdas:?}"
        )));
    }
    if ((l1 + l2 + l3) - 1.0).abs() > TOL_STRUCTURE {
        return Err(Error::validation(format!(
            "weights sum to {}, expected 1",
            l1 + l2 + l3
        )));
    }
    let bases = checked_bases(bases)?;
    let w1 = cr(l1.max(0.0).sqrt());
    let w2 = linalg::c(0.0, phases[0]).exp() * l2.max(0.0).sqrt();
    let w3 = linalg::c(0.0, phases[1]).exp() * l3.max(0.0).sqrt();
    three_qubit_from_terms(&[(0, 0, 1, w1), (0, 1, 0, w2), (1, 0, 0, w3)], &bases)
}

/// Biseparable state: the named pair carries √(1−p_min)|ψψ'⟩ + √p_min|ψ⊥ψ'⊥⟩
/// and the remaining party sits in its first basis vector.
pub fn make_bisep(
    pair: BisepPair,
    p_min: f64,
    bases: Option<&[CMatrix; 3]>,
) -> Result<PureState> {
    if !(0.0..=0.5 + 1e-12).contains(&p_min) {
        return Err(Error::validation(format!(
            "p_min = {p_min} outside [0, 1/2]"
        )));
    }
    let bases = checked_bases(bases)?;
    let big = cr((1.0 - p_min).sqrt());
    let small = cr(p_min.sqrt());
    let terms: Vec<(usize, usize, usize, linalg::C64)> = match pair {
        BisepPair::AB => vec![(0, 0, 0, big), (1, 1, 0, small)],
        BisepPair::AC => vec![(0, 0, 0, big), (1, 0, 1, small)],
        BisepPair::BC => vec![(0, 0, 0, big), (0, 1, 1, small)],
    };
    three_qubit_from_terms(&terms, &bases)
}

fn qubit_ladder() -> Hamiltonian {
    Hamiltonian::from_energies(vec![0.0, 1.0]).unwrap()
}

fn ladder(dim: usize) -> Result<Hamiltonian> {
    Hamiltonian::from_energies((0..dim).map(|i| i as f64).collect())
}

/// Ergotropic gap across one cut of a pure three-qubit state, with
/// H = |1⟩⟨1| on every site.
pub fn cut_gap(psi: &PureState, cut: Cut) -> Result<f64> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::validation(format!(
            "cut gaps are defined for three qubits, got dims {:?}",
            psi.dims()
        )));
    }
    let h1 = qubit_ladder();
    let keep_single = match cut {
        Cut::ABc => 0usize,
        Cut::BAc => 1,
        Cut::CAb => 2,
    };
    let rest: Vec<usize> = (0..3).filter(|&i| i != keep_single).collect();
    let rho = psi.density();
    let single = partial_trace(&rho, &[2, 2, 2], &[keep_single])?;
    let pair = partial_trace(&rho, &[2, 2, 2], &rest)?;
    let h_pair = h1.tensor_sum(&h1)?;
    let h_all = h_pair.tensor_sum(&h1)?;
    let local = passive_energy(&single.spectrum(), &h1)?
        + passive_energy(&pair.spectrum(), &h_pair)?;
    let global = passive_energy(&rho.spectrum(), &h_all)?;
    Ok(local - global)
}

/// All three cut gaps.
pub fn gap_signature(psi: &PureState) -> Result<GapSignature> {
    Ok(GapSignature {
        a_bc: cut_gap(psi, Cut::ABc)?,
        b_ac: cut_gap(psi, Cut::BAc)?,
        c_ab: cut_gap(psi, Cut::CAb)?,
    })
}

/// The three A-side gaps of the monogamy relation, computed with ladder
/// Hamiltonians diag(0, 1, …) on each subsystem. For qubits,
/// Δ_{A|BC} = Δ_{A|B} + Δ_{A|C} exactly; in higher dimensions only ≤ holds.
#[derive(Debug, Clone, Copy)]
pub struct MonogamyReport {
    pub gap_a_bc: f64,
    pub gap_a_b: f64,
    pub gap_a_c: f64,
}

pub fn monogamy_decompose(psi: &PureState) -> Result<MonogamyReport> {
    if psi.dims().len() != 3 {
        return Err(Error::validation(format!(
            "need a tripartite state, got {} subsystems",
            psi.dims().len()
        )));
    }
    let (da, db, dc) = (psi.dims()[0], psi.dims()[1], psi.dims()[2]);
    let (ha, hb, hc) = (ladder(da)?, ladder(db)?, ladder(dc)?);
    let rho = psi.density();
    let dims = [da, db, dc];

    let rho_bipartite = psi.regroup(vec![da, db * dc])?.density();
    let gap_a_bc = ergotropic_gap(&rho_bipartite, &ha, &hb.tensor_sum(&hc)?)?;
    let gap_a_b = ergotropic_gap(&partial_trace(&rho, &dims, &[0, 1])?, &ha, &hb)?;
    let gap_a_c = ergotropic_gap(&partial_trace(&rho, &dims, &[0, 2])?, &ha, &hc)?;
    Ok(MonogamyReport {
        gap_a_bc,
        gap_a_b,
        gap_a_c,
    })
}

fn product_basis(bases: &[CMatrix; 3]) -> CMatrix {
    kron(&kron(&bases[0], &bases[1]), &bases[2])
}

fn dephased_gap_of_diagonal(diag: &[f64; 8]) -> Result<f64> {
    let h1 = qubit_ladder();
    // marginal populations straight off the diagonal
    let mut singles = [[0.0f64; 2]; 3];
    for (idx, &p) in diag.iter().enumerate() {
        singles[0][(idx >> 2) & 1] += p;
        singles[1][(idx >> 1) & 1] += p;
        singles[2][idx & 1] += p;
    }
    let mut local = 0.0;
    for pops in singles {
        let spec = crate::states::Spectrum::new(pops.to_vec())?;
        local += passive_energy(&spec, &h1)?;
    }
    let h_all = h1.tensor_sum(&h1)?.tensor_sum(&h1)?;
    let spec = crate::states::Spectrum::new(diag.to_vec())?;
    Ok(local - passive_energy(&spec, &h_all)?)
}

/// Gap of a pure three-qubit state after dephasing every site in the
/// declared product basis: Δ_{A|B|C} = Σ_X E(ρ_X^p) − E(ρ_ABC^p).
pub fn dephased_gap_pure(psi: &PureState, bases: Option<&[CMatrix; 3]>) -> Result<f64> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::validation(format!(
            "dephased gap is defined for three qubits, got dims {:?}",
            psi.dims()
        )));
    }
    let bases = checked_bases(bases)?;
    let b = product_basis(&bases);
    let rotated = b.adjoint() * psi.amplitudes();
    let mut diag = [0.0f64; 8];
    for i in 0..8 {
        diag[i] = rotated[i].norm_sqr();
    }
    dephased_gap_of_diagonal(&diag)
}

/// Same gap for a state that is already diagonal in the declared product
/// basis; anything off-diagonal above 1e-10 is a basis mismatch.
pub fn dephased_gap_diagonal(
    rho: &DensityMatrix,
    bases: Option<&[CMatrix; 3]>,
) -> Result<f64> {
    if rho.dim() != 8 {
        return Err(Error::validation(format!(
            "dephased gap is defined for three qubits, state has dimension {}",
            rho.dim()
        )));
    }
    let bases = checked_bases(bases)?;
    let b = product_basis(&bases);
    let rotated = b.adjoint() * rho.matrix() * &b;
    let mut diag = [0.0f64; 8];
    let mut off = 0.0f64;
    for i in 0..8 {
        diag[i] = rotated[(i, i)].re;
        for j in 0..8 {
            if i != j {
                off = off.max(rotated[(i, j)].norm());
            }
        }
    }
    if off > TOL_STRUCTURE {
        return Err(Error::validation(format!(
            "state is not diagonal in the declared product basis (off-diagonal {off:.3e})"
        )));
    }
    dephased_gap_of_diagonal(&diag)
}

/// Recover each party's own basis as the eigenbasis of its marginal, larger
/// population first. Fails (None) when some marginal is too close to
/// maximally mixed for the basis to mean anything.
fn marginal_bases(psi: &PureState, tol: f64) -> Result<Option<[CMatrix; 3]>> {
    let rho = psi.density();
    let mut out = Vec::with_capacity(3);
    for x in 0..3usize {
        let m = partial_trace(&rho, &[2, 2, 2], &[x])?;
        let (vals, vecs) = m.eig()?;
        if (vals[1] - vals[0]).abs() <= tol {
            return Ok(None);
        }
        // eig returns ascending; canonical order puts the heavy vector first
        let mut b = CMatrix::zeros(2, 2);
        b.set_column(0, &vecs.column(1));
        b.set_column(1, &vecs.column(0));
        out.push(b);
    }
    Ok(Some([out[0].clone(), out[1].clone(), out[2].clone()]))
}

/// Classify a three-qubit pure state by its gap signature, falling back to
/// the dephased-gap discriminator when GHZ and symmetric W collide.
pub fn classify(psi: &PureState, tol: f64) -> Result<ClassReport> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::validation(format!(
            "classifier works on three qubits, got dims {:?}",
            psi.dims()
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::validation(format!("bad tolerance {tol}")));
    }
    let signature = gap_signature(psi)?;
    let g = signature.as_array();
    let zero = [g[0].abs() <= tol, g[1].abs() <= tol, g[2].abs() <= tol];
    let report = |label, dephased_gap, rule: String| {
        Ok(ClassReport {
            label,
            signature,
            dephased_gap,
            rule,
        })
    };
    match zero.iter().filter(|&&z| z).count() {
        3 => report(ClassLabel::Product, None, "all three cut gaps vanish".into()),
        1 => {
            let (label, lone) = if zero[0] {
                (ClassLabel::BisepBcA, "A|BC")
            } else if zero[1] {
                (ClassLabel::BisepAcB, "B|AC")
            } else {
                (ClassLabel::BisepAbC, "C|AB")
            };
            report(
                label,
                None,
                format!("exactly one vanishing cut gap, at {lone}"),
            )
        }
        2 => report(
            ClassLabel::AmbiguousGhzOrW,
            None,
            "two vanishing cut gaps match no canonical family".into(),
        ),
        _ => {
            let spread = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - g.iter().cloned().fold(f64::INFINITY, f64::min);
            if spread > tol {
                return report(
                    ClassLabel::W,
                    None,
                    "unequal nonzero signature (GHZ signatures are always equal)".into(),
                );
            }
            let Some(bases) = marginal_bases(psi, tol)? else {
                return report(
                    ClassLabel::AmbiguousGhzOrW,
                    None,
                    "marginals are maximally mixed; own basis unrecoverable".into(),
                );
            };
            let dg = dephased_gap_pure(psi, Some(&bases))?;
            let mean = (g[0] + g[1] + g[2]) / 3.0;
            if (dg - mean).abs() <= tol {
                report(
                    ClassLabel::Ghz,
                    Some(dg),
                    "dephased gap equals the common cut gap".into(),
                )
            } else if (dg - 0.5 * mean).abs() <= tol {
                report(
                    ClassLabel::W,
                    Some(dg),
                    "dephased gap is half the common cut gap".into(),
                )
            } else {
                report(
                    ClassLabel::AmbiguousGhzOrW,
                    Some(dg),
                    "dephased gap matches neither canonical pattern".into(),
                )
            }
        }
    }
}
