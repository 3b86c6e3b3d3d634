//! `qthermo` — batch JSON commands over the library.
//!
//! Every command reads JSON files, writes one canonical JSON value to
//! stdout (or `--output`), and exits 0. Bad input exits 2, out-of-domain
//! requests exit 3; either way stderr carries a single machine-readable
//! object {"code", "message", "path"}.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand};
use serde_json::{json, Value};

use qthermo::channel::{
    sample_epo_channel, validate_epo_parts, EnvironmentSpec,
};
use qthermo::json::{
    beta_value, canonical_string, class_report_value, gap_signature_value, monogamy_value, parse_beta, validation_report_value, work_report_value,
    EpoChannelWire, StateInput,
};
use qthermo::majorization;
use qthermo::measure::{
    asymptotic_measure, conversion_probability, ergotropic_gap, measure_pure, per_copy_measure,
    vidal_monotone,
};
use qthermo::random::rng_from_seed;
use qthermo::states::Hamiltonian;
use qthermo::tripartite::{
    classify, dephased_gap_diagonal, dephased_gap_pure, gap_signature, monogamy_decompose,
    CLASSIFY_TOL,
};
use qthermo::work::{
    ergotropy, gibbs_state, passive_energy, single_shot_work, spectrum_renyi, thermodynamic_work,
    EntropyBase,
};

#[derive(Parser)]
#[command(
    name = "qthermo",
    version,
    about = "Passive states, extractable work, and entanglement gaps over JSON files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// State or channel file; repeat for commands that take two
    #[arg(long, global = true, action = ArgAction::Append, value_name = "FILE")]
    input: Vec<PathBuf>,

    /// Hamiltonian file; repeat for commands that take two
    #[arg(long, global = true, action = ArgAction::Append, value_name = "FILE")]
    hamiltonian: Vec<PathBuf>,

    /// Rényi order
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Inverse temperature: a number, "inf", or "-inf"
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,

    /// Tensor copies for per-copy quantities
    #[arg(long, global = true)]
    copies: Option<u32>,

    /// RNG seed for sampling commands
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Decision tolerance where one applies
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the result here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Passive populations and passive-state energy
    Passive,
    /// Unitarily extractable work W_e
    Ergotropy,
    /// Gibbs state of a Hamiltonian at --beta
    Gibbs,
    /// Thermodynamic work against the entropy-matched Gibbs state
    Wth,
    /// Rényi entropy of order --alpha
    Renyi,
    /// Rényi divergence between two commuting states
    Divergence,
    /// Single-shot work at bath temperature --beta
    Wsingle,
    /// Majorization relation between two spectra
    Majorize,
    /// Sample an energy-preserving channel
    #[command(name = "epo-sample")]
    EpoSample,
    /// Validate a channel file's defining identities
    #[command(name = "epo-verify")]
    EpoVerify,
    /// Entanglement as the reduced state's passive energy
    Measure,
    /// Vidal monotones of a bipartite pure state
    Vidal,
    /// Optimal single-copy conversion probability
    #[command(name = "convert-prob")]
    ConvertProb,
    /// Ergotropic gap of a bipartite state
    Egap,
    /// Per-copy measure at --copies
    Percopy,
    /// Asymptotic measure via the entropy-matched Gibbs energy
    Asymptotic,
    /// Gap signature across the three cuts of three qubits
    #[command(name = "cut-gaps")]
    CutGaps,
    /// A-side gap decomposition of a tripartite pure state
    Monogamy,
    /// Gap of the state dephased in the product basis
    #[command(name = "dephased-gap")]
    DephasedGap,
    /// GHZ/W/biseparable/product label from gap data
    #[command(name = "classify3")]
    Classify3,
    /// Energy-entropy diagram points for a state
    Diagram,
}

struct CliError {
    code: u8,
    message: String,
    path: Option<PathBuf>,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
            path: None,
        }
    }

    fn at(mut self, path: &Path) -> Self {
        self.path.get_or_insert_with(|| path.to_path_buf());
        self
    }

    fn to_value(&self) -> Value {
        json!({
            "code": self.code,
            "message": self.message,
            "path": self.path.as_ref().map(|p| p.display().to_string()),
        })
    }
}

impl From<qthermo::Error> for CliError {
    fn from(e: qthermo::Error) -> Self {
        let code = match &e {
            qthermo::Error::Validation(_) => 2,
            qthermo::Error::Domain(_) | qthermo::Error::Numerical(_) => 3,
        };
        CliError {
            code,
            message: e.to_string(),
            path: None,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_value(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError {
            code: 2,
            message: format!("cannot read file: {e}"),
            path: Some(path.to_path_buf()),
        }
    })?;
    qthermo::json::parse(&text).map_err(|e| CliError::from(e).at(path))
}

fn one_of<'a>(paths: &'a [PathBuf], idx: usize, flag: &str, needed: usize) -> CliResult<&'a Path> {
    paths.get(idx).map(PathBuf::as_path).ok_or_else(|| {
        CliError::validation(format!(
            "this command needs {flag} {needed} time(s), got {}",
            paths.len()
        ))
    })
}

fn state_at(cli: &Cli, idx: usize, needed: usize) -> CliResult<StateInput> {
    let path = one_of(&cli.input, idx, "--input", needed)?;
    StateInput::from_value(&read_value(path)?).map_err(|e| CliError::from(e).at(path))
}

fn ham_at(cli: &Cli, idx: usize, needed: usize) -> CliResult<Hamiltonian> {
    let path = one_of(&cli.hamiltonian, idx, "--hamiltonian", needed)?;
    let wire: qthermo::json::HamiltonianWire = serde_json::from_value(read_value(path)?)
        .map_err(|e| CliError::validation(e.to_string()).at(path))?;
    wire.to_hamiltonian().map_err(|e| CliError::from(e).at(path))
}

fn alpha_flag(cli: &Cli) -> CliResult<f64> {
    cli.alpha
        .ok_or_else(|| CliError::validation("this command needs --alpha"))
}

fn beta_flag(cli: &Cli) -> CliResult<f64> {
    let text = cli
        .beta
        .as_deref()
        .ok_or_else(|| CliError::validation("this command needs --beta"))?;
    Ok(parse_beta(text)?)
}

fn entropy_pair(spectrum: &qthermo::states::Spectrum, alpha: f64) -> CliResult<(f64, f64)> {
    Ok((
        spectrum_renyi(spectrum, alpha, EntropyBase::Nats)?,
        spectrum_renyi(spectrum, alpha, EntropyBase::Bits)?,
    ))
}

fn run(cli: &Cli) -> CliResult<Value> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::validation(format!(
                "--tol must be a positive finite number, got {tol}"
            )));
        }
    }
    match cli.command {
        Command::Passive => {
            let state = state_at(cli, 0, 1)?;
            let h = ham_at(cli, 0, 1)?;
            let spectrum = state.spectrum();
            let energy = passive_energy(&spectrum, &h)?;
            Ok(json!({
                "passive_energy": energy,
                "populations": spectrum.padded(h.dim())?,
                "energies": h.energies(),
            }))
        }
        Command::Ergotropy => {
            let rho = state_at(cli, 0, 1)?.density()?;
            let h = ham_at(cli, 0, 1)?;
            Ok(json!({ "W_e": ergotropy(&rho, &h)? }))
        }
        Command::Gibbs => {
            let h = ham_at(cli, 0, 1)?;
            let tau = gibbs_state(&h, beta_flag(cli)?)?;
            Ok(json!({
                "beta": beta_value(tau.beta),
                "log_z": tau.log_z,
                "populations": tau.populations(&h),
                "energies": h.energies(),
            }))
        }
        Command::Wth => {
            let rho = state_at(cli, 0, 1)?.density()?;
            let h = ham_at(cli, 0, 1)?;
            Ok(work_report_value(&thermodynamic_work(&rho, &h)?))
        }
        Command::Renyi => {
            let state = state_at(cli, 0, 1)?;
            let alpha = alpha_flag(cli)?;
            let (nats, bits) = entropy_pair(&state.spectrum(), alpha)?;
            Ok(json!({ "alpha": alpha, "S_nats": nats, "S_bits": bits }))
        }
        Command::Divergence => {
            let rho = state_at(cli, 0, 2)?.density()?;
            let sigma = state_at(cli, 1, 2)?.density()?;
            let alpha = alpha_flag(cli)?;
            let d = qthermo::work::renyi_divergence(&rho, &sigma, alpha)?;
            Ok(json!({ "alpha": alpha, "D_nats": d, "finite": d.is_finite() }))
        }
        Command::Wsingle => {
            let rho = state_at(cli, 0, 1)?.density()?;
            let h = ham_at(cli, 0, 1)?;
            let beta = beta_flag(cli)?;
            Ok(json!({ "beta": beta_value(beta), "W_S": single_shot_work(&rho, &h, beta)? }))
        }
        Command::Majorize => {
            let p = state_at(cli, 0, 2)?.spectrum();
            let q = state_at(cli, 1, 2)?.spectrum();
            let tol = cli.tol.unwrap_or(majorization::MAJORIZE_TOL);
            Ok(json!({ "relation": majorization::compare(&p, &q, tol).as_str() }))
        }
        Command::EpoSample => {
            let h_s = ham_at(cli, 0, 1)?;
            let h_e = match cli.hamiltonian.get(1) {
                Some(_) => ham_at(cli, 1, 2)?,
                None => Hamiltonian::from_energies(vec![0.0, 0.0, 1.0, 1.0])?,
            };
            let env = EnvironmentSpec {
                hamiltonian: h_e,
                beta: cli.beta.as_deref().map(parse_beta).transpose()?.unwrap_or(1.0),
            };
            let mut rng = rng_from_seed(cli.seed.unwrap_or(0));
            let channel = sample_epo_channel(&h_s, &env, &mut rng)?;
            Ok(serde_json::to_value(EpoChannelWire::from_channel(&channel))
                .expect("wire types serialize"))
        }
        Command::EpoVerify => {
            let path = one_of(&cli.input, 0, "--input", 1)?;
            let wire: EpoChannelWire = serde_json::from_value(read_value(path)?)
                .map_err(|e| CliError::validation(e.to_string()).at(path))?;
            let h_s = wire.h_s.to_hamiltonian().map_err(|e| CliError::from(e).at(path))?;
            let kraus = wire
                .kraus
                .iter()
                .map(|m| m.to_matrix())
                .collect::<qthermo::Result<Vec<_>>>()
                .map_err(|e| CliError::from(e).at(path))?;
            let d = h_s.dim();
            if kraus.is_empty() || kraus.iter().any(|m| m.nrows() != d || m.ncols() != d) {
                return Err(CliError::validation(format!(
                    "channel file must carry {d}x{d} Kraus operators"
                ))
                .at(path));
            }
            // invariant failures belong in the report, not the exit code
            Ok(validation_report_value(&validate_epo_parts(&h_s, &kraus)))
        }
        Command::Measure => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            let h_a = ham_at(cli, 0, 1)?;
            Ok(json!({ "measure": measure_pure(&psi, &h_a)? }))
        }
        Command::Vidal => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            if psi.dims().len() != 2 {
                return Err(CliError::validation(format!(
                    "vidal needs a bipartite state, got {} subsystems",
                    psi.dims().len()
                )));
            }
            let n = psi.dims()[0].min(psi.dims()[1]);
            let monotones = (1..=n)
                .map(|k| vidal_monotone(&psi, k))
                .collect::<qthermo::Result<Vec<_>>>()?;
            Ok(json!({ "monotones": monotones }))
        }
        Command::ConvertProb => {
            let psi = state_at(cli, 0, 2)?.pure()?;
            let phi = state_at(cli, 1, 2)?.pure()?;
            Ok(json!({ "probability": conversion_probability(&psi, &phi)? }))
        }
        Command::Egap => {
            let rho = state_at(cli, 0, 1)?.density()?;
            let h_x = ham_at(cli, 0, 2)?;
            let h_y = ham_at(cli, 1, 2)?;
            Ok(json!({ "gap": ergotropic_gap(&rho, &h_x, &h_y)? }))
        }
        Command::Percopy => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            let h_a = ham_at(cli, 0, 1)?;
            let n = cli.copies.unwrap_or(1);
            Ok(json!({ "copies": n, "value": per_copy_measure(&psi, n, &h_a)? }))
        }
        Command::Asymptotic => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            let h_a = ham_at(cli, 0, 1)?;
            let m = asymptotic_measure(&psi, &h_a)?;
            Ok(json!({ "matched_beta": beta_value(m.beta), "value": m.value }))
        }
        Command::CutGaps => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            Ok(gap_signature_value(&gap_signature(&psi)?))
        }
        Command::Monogamy => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            Ok(monogamy_value(&monogamy_decompose(&psi)?))
        }
        Command::DephasedGap => {
            let state = state_at(cli, 0, 1)?;
            let gap = match &state {
                StateInput::Pure(psi) => dephased_gap_pure(psi, None)?,
                StateInput::Density(rho) => dephased_gap_diagonal(rho, None)?,
                StateInput::Spectrum(_) => {
                    return Err(CliError::validation(
                        "dephased-gap needs a full state, not a bare spectrum",
                    ))
                }
            };
            Ok(json!({ "gap": gap }))
        }
        Command::Classify3 => {
            let psi = state_at(cli, 0, 1)?.pure()?;
            let report = classify(&psi, cli.tol.unwrap_or(CLASSIFY_TOL))?;
            Ok(class_report_value(&report))
        }
        Command::Diagram => {
            let rho = state_at(cli, 0, 1)?.density()?;
            let h = ham_at(cli, 0, 1)?;
            let report = thermodynamic_work(&rho, &h)?;
            let point = |label: &str, s_nats: f64, s_bits: f64, e: f64| {
                json!({ "label": label, "S_nats": s_nats, "S_bits": s_bits, "E": e })
            };
            Ok(json!({
                "points": [
                    point("rho", report.entropy_nats, report.entropy_bits, report.internal_energy),
                    point(
                        "rho_passive",
                        report.entropy_nats,
                        report.entropy_bits,
                        report.passive_energy,
                    ),
                    point(
                        "tau_matched",
                        report.entropy_nats,
                        report.entropy_bits,
                        report.internal_energy - report.thermodynamic_work,
                    ),
                    point("ground", 0.0, 0.0, h.energies()[0]),
                ],
            }))
        }
    }
}

fn emit_error(err: &CliError) -> ExitCode {
    let mut stderr = std::io::stderr().lock();
    let _ = writeln!(stderr, "{}", canonical_string(&err.to_value()));
    ExitCode::from(err.code)
}

fn emit(value: &Value, output: Option<&Path>) -> CliResult<()> {
    let mut text = canonical_string(value);
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError {
                code: 2,
                message: format!("cannot write output: {e}"),
                path: Some(path.to_path_buf()),
            }
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::validation(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return emit_error(&CliError::validation(e.render().to_string()));
        }
    };
    match run(&cli).and_then(|value| emit(&value, cli.output.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => emit_error(&e),
    }
}
