//! Wire formats and the canonical JSON writer.
//!
//! Every file the tools read or write uses one convention: UTF-8, object
//! keys sorted, floats printed with 17 significant digits so equal values
//! produce equal bytes and golden files stay stable. Non-finite floats have
//! no JSON representation and serialize as `null`; β values, which must
//! survive a round trip even at ±∞, travel as the strings `"inf"` and
//! `"-inf"` instead.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::io::{self, Write};

use crate::channel::{EpoChannel, MonotoneReport, ValidationReport};
use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, CMatrix, CVector};
use crate::states::{DensityMatrix, Hamiltonian, PureState, Spectrum};
use crate::tripartite::{ClassReport, GapSignature, MonogamyReport};
use crate::work::WorkReport;

struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        // 16 digits after the point in scientific notation = 17 significant
        // digits, enough to reproduce any f64 exactly on parse.
        write!(writer, "{value:.16e}")
    }
}

/// Render a JSON value in the canonical form described in the module docs.
/// `serde_json`'s map is a BTreeMap, so keys come out sorted by default.
pub fn canonical_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::validation(format!("invalid JSON: {e}")))
}

/// β rendered so that the sentinels survive: finite → number, ±∞ → string.
pub fn beta_value(beta: f64) -> Value {
    if beta == f64::INFINITY {
        json!("inf")
    } else if beta == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(beta)
    }
}

/// Inverse of `beta_value`, also used for the `--beta` flag.
pub fn parse_beta(text: &str) -> Result<f64> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        s => s
            .parse::<f64>()
            .ok()
            .filter(|b| !b.is_nan())
            .ok_or_else(|| Error::validation(format!("cannot parse beta from {text:?}"))),
    }
}

fn grid(rows: usize, cols: usize, name: &str, data: &[Vec<f64>]) -> Result<()> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::validation(format!(
            "{name} must be a {rows}x{cols} array of numbers"
        )));
    }
    Ok(())
}

/// Complex matrix as {"dims":[rows,cols], "re":[[…]], "im":[[…]]};
/// `im` may be omitted on input for a real matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixWire {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixWire {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = (m.nrows(), m.ncols());
        let pick = |f: fn(&crate::linalg::C64) -> f64| -> Vec<Vec<f64>> {
            (0..rows)
                .map(|i| (0..cols).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixWire {
            dims: vec![rows, cols],
            re: pick(|z| z.re),
            im: Some(pick(|z| z.im)),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let &[rows, cols] = self.dims.as_slice() else {
            return Err(Error::validation(format!(
                "matrix dims must be [rows, cols], got {:?}",
                self.dims
            )));
        };
        if rows == 0 || cols == 0 {
            return Err(Error::validation("matrix dims must be positive"));
        }
        grid(rows, cols, "re", &self.re)?;
        if let Some(im) = &self.im {
            grid(rows, cols, "im", im)?;
        }
        Ok(CMatrix::from_fn(rows, cols, |i, j| {
            c(
                self.re[i][j],
                self.im.as_ref().map_or(0.0, |im| im[i][j]),
            )
        }))
    }
}

/// Pure state as {"dims":[d1,d2,…], "re":[…], "im":[…]} with flat
/// amplitude arrays in row-major subsystem order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureStateWire {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl PureStateWire {
    pub fn from_state(psi: &PureState) -> Self {
        let amps = psi.amplitudes();
        PureStateWire {
            dims: psi.dims().to_vec(),
            re: amps.iter().map(|z| z.re).collect(),
            im: Some(amps.iter().map(|z| z.im).collect()),
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        let total: usize = self.dims.iter().product();
        if self.re.len() != total || self.im.as_ref().is_some_and(|im| im.len() != total) {
            return Err(Error::validation(format!(
                "dims {:?} imply {total} amplitudes, got re:{} im:{}",
                self.dims,
                self.re.len(),
                self.im.as_ref().map_or(self.re.len(), |im| im.len())
            )));
        }
        let amps = CVector::from_fn(total, |i, _| {
            c(self.re[i], self.im.as_ref().map_or(0.0, |im| im[i]))
        });
        PureState::new(self.dims.clone(), amps)
    }
}

/// Hamiltonian as {"energies":[…]} plus an optional eigenbasis
/// ({"basis_re","basis_im"}); without one the energies sit on the diagonal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianWire {
    pub energies: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_im: Option<Vec<Vec<f64>>>,
}

impl HamiltonianWire {
    pub fn from_hamiltonian(h: &Hamiltonian) -> Self {
        let d = h.dim();
        let v = h.basis();
        let identity = max_abs(&(v - crate::linalg::identity(d))) == 0.0;
        let basis = (!identity).then(|| MatrixWire::from_matrix(v));
        HamiltonianWire {
            energies: h.energies().to_vec(),
            basis_re: basis.as_ref().map(|b| b.re.clone()),
            basis_im: basis.and_then(|b| b.im),
        }
    }

    pub fn to_hamiltonian(&self) -> Result<Hamiltonian> {
        match (&self.basis_re, &self.basis_im) {
            (None, None) => Hamiltonian::from_energies(self.energies.clone()),
            (re, im) => {
                let d = self.energies.len();
                let wire = MatrixWire {
                    dims: vec![d, d],
                    re: re
                        .clone()
                        .ok_or_else(|| Error::validation("basis_im given without basis_re"))?,
                    im: im.clone(),
                };
                Hamiltonian::new(self.energies.clone(), wire.to_matrix()?)
            }
        }
    }
}

/// Bare spectrum as {"probs":[…]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumWire {
    pub probs: Vec<f64>,
}

impl SpectrumWire {
    pub fn from_spectrum(s: &Spectrum) -> Self {
        SpectrumWire {
            probs: s.probs().to_vec(),
        }
    }

    pub fn to_spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.probs.clone())
    }
}

/// Channel as {"H_S": hamiltonian, "kraus": [matrix, …]}; reading one
/// re-validates completeness, unitality, and energy commutation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpoChannelWire {
    #[serde(rename = "H_S")]
    pub h_s: HamiltonianWire,
    pub kraus: Vec<MatrixWire>,
}

impl EpoChannelWire {
    pub fn from_channel(ch: &EpoChannel) -> Self {
        EpoChannelWire {
            h_s: HamiltonianWire::from_hamiltonian(ch.system()),
            kraus: ch.kraus().iter().map(MatrixWire::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<EpoChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        EpoChannel::new(self.h_s.to_hamiltonian()?, kraus)
    }
}

/// Any state-like input file: a bare spectrum, a pure state (flat `re`),
/// or a density matrix (nested `re`).
#[derive(Debug, Clone)]
pub enum StateInput {
    Spectrum(Spectrum),
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateInput {
    pub fn from_value(v: &Value) -> Result<StateInput> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::validation("state file must be a JSON object"))?;
        if obj.contains_key("probs") {
            let wire: SpectrumWire = from_value(v)?;
            return Ok(StateInput::Spectrum(wire.to_spectrum()?));
        }
        match obj.get("re") {
            Some(Value::Array(rows)) if rows.first().is_some_and(Value::is_array) => {
                let wire: MatrixWire = from_value(v)?;
                Ok(StateInput::Density(DensityMatrix::new(wire.to_matrix()?)?))
            }
            Some(Value::Array(_)) => {
                let wire: PureStateWire = from_value(v)?;
                Ok(StateInput::Pure(wire.to_state()?))
            }
            _ => Err(Error::validation(
                "state file needs either \"probs\" or \"re\"",
            )),
        }
    }

    /// Eigenvalues, non-increasing — defined for every input kind.
    pub fn spectrum(&self) -> Spectrum {
        match self {
            StateInput::Spectrum(s) => s.clone(),
            StateInput::Pure(p) => p.density().spectrum(),
            StateInput::Density(d) => d.spectrum(),
        }
    }

    /// Full density matrix; a bare spectrum carries no basis and is refused.
    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            StateInput::Spectrum(_) => Err(Error::validation(
                "this command needs a full state; a bare spectrum has no basis",
            )),
            StateInput::Pure(p) => Ok(p.density()),
            StateInput::Density(d) => Ok(d.clone()),
        }
    }

    pub fn pure(&self) -> Result<PureState> {
        match self {
            StateInput::Pure(p) => Ok(p.clone()),
            _ => Err(Error::validation("this command needs a pure state")),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            StateInput::Spectrum(s) => s.len(),
            StateInput::Pure(p) => p.dim(),
            StateInput::Density(d) => d.dim(),
        }
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::validation(e.to_string()))
}

pub fn work_report_value(r: &WorkReport) -> Value {
    json!({
        "internal_energy": r.internal_energy,
        "passive_energy": r.passive_energy,
        "ergotropy": r.ergotropy,
        "thermodynamic_work": r.thermodynamic_work,
        "matched_beta": beta_value(r.matched_beta),
        "entropy_nats": r.entropy_nats,
        "entropy_bits": r.entropy_bits,
    })
}

pub fn validation_report_value(r: &ValidationReport) -> Value {
    json!({
        "kraus_count": r.kraus_count,
        "completeness_residual": r.completeness_residual,
        "unitality_residual": r.unitality_residual,
        "commutation_residual": r.commutation_residual,
        "pass": r.pass,
    })
}

pub fn monotone_report_value(r: &MonotoneReport) -> Value {
    json!({
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "lhs": c.lhs,
            "rhs": c.rhs,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
        "all_pass": r.all_pass,
    })
}

pub fn gap_signature_value(s: &GapSignature) -> Value {
    json!({
        "gap_A_BC": s.a_bc,
        "gap_B_AC": s.b_ac,
        "gap_C_AB": s.c_ab,
    })
}

pub fn monogamy_value(m: &MonogamyReport) -> Value {
    json!({
        "gap_A_BC": m.gap_a_bc,
        "gap_A_B": m.gap_a_b,
        "gap_A_C": m.gap_a_c,
        "slack": m.gap_a_b + m.gap_a_c - m.gap_a_bc,
    })
}

pub fn class_report_value(r: &ClassReport) -> Value {
    json!({
        "label": r.label.as_str(),
        "signature": gap_signature_value(&r.signature),
        "dephased_gap": r.dephased_gap,
        "rule": r.rule,
    })
}
