//! Scenario configuration, experiment dispatch, and report/CSV emission.
//!
//! Scenarios are JSON documents with a fixed schema (unknown fields are
//! rejected). States are described by computational-basis kets, Bloch-sphere
//! angles (θ, φ in radians), Bell-state names, explicit state vectors, or
//! explicit density matrices; complex numbers are `[re, im]` pairs.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{
    self, ConsistencyOutcome, ProtocolReport, TeleportMode, TeleportSetup, Verdict,
};
use crate::qmath::{BellState, C64, ComplexMatrix, DensityOperator, PureState, UnitaryOperator};

const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Strictness margin for the classical-threshold comparison. The ε-CTC mean
/// sits exactly on 2/3 at ε = 1/3, where float rounding of an otherwise
/// machine-precise estimator can land an ulp above the threshold; an
/// advantage below this margin is numerically meaningless and must not
/// report as a violation of the classical bound.
const CLASSICAL_MARGIN: f64 = 1e-9;

fn default_trials() -> usize {
    10_000
}

fn default_tol() -> f64 {
    1e-9
}

/// The eight runnable protocols.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    PoppingUp,
    Elimination,
    Clone,
    Delete,
    CreateState,
    NoEntanglement,
    Teleport,
    AvgFidelitySweep,
}

impl Protocol {
    pub fn all() -> [Protocol; 8] {
        [
            Protocol::PoppingUp,
            Protocol::Elimination,
            Protocol::Clone,
            Protocol::Delete,
            Protocol::CreateState,
            Protocol::NoEntanglement,
            Protocol::Teleport,
            Protocol::AvgFidelitySweep,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Protocol::PoppingUp => "popping_up",
            Protocol::Elimination => "elimination",
            Protocol::Clone => "clone",
            Protocol::Delete => "delete",
            Protocol::CreateState => "create_state",
            Protocol::NoEntanglement => "no_entanglement",
            Protocol::Teleport => "teleport",
            Protocol::AvgFidelitySweep => "avg_fidelity_sweep",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BellName {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl From<BellName> for BellState {
    fn from(name: BellName) -> Self {
        match name {
            BellName::PhiPlus => BellState::PhiPlus,
            BellName::PhiMinus => BellState::PhiMinus,
            BellName::PsiPlus => BellState::PsiPlus,
            BellName::PsiMinus => BellState::PsiMinus,
        }
    }
}

/// A named state description. Complex entries are `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    /// Computational-basis ket as a bitstring, e.g. "0" or "01".
    Ket(String),
    /// Pure qubit from Bloch-sphere angles [θ, φ]: cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    Bloch([f64; 2]),
    Bell(BellName),
    /// Explicit state vector.
    Vector(Vec<[f64; 2]>),
    /// Explicit density matrix.
    Matrix(Vec<Vec<[f64; 2]>>),
}

/// A named gate or explicit unitary matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum UnitarySpec {
    /// "SWAP", "CNOT", or "I" (all on two qubits).
    Gate(String),
    Matrix(Vec<Vec<[f64; 2]>>),
}

/// A fully described experiment: protocol, named states, sweep grid, seed,
/// trial count, and numeric tolerance.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub protocol: Protocol,
    #[serde(default)]
    pub state_specs: BTreeMap<String, StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary_spec: Option<UnitarySpec>,
    #[serde(default)]
    pub epsilon_grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn complex(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

fn matrix_from_spec(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Validation(
            "explicit matrix must be square and nonempty".into(),
        ));
    }
    let entries = rows.iter().flatten().copied().map(complex).collect();
    ComplexMatrix::from_entries(n, n, entries)
}

impl StateSpec {
    fn pure(&self, name: &str, tol: f64) -> Result<PureState> {
        match self {
            StateSpec::Ket(bits) => {
                if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
                    return Err(Error::Validation(format!(
                        "state spec '{name}': ket must be a nonempty bitstring, got {bits:?}"
                    )));
                }
                let dim = 1usize << bits.len();
                let index = usize::from_str_radix(bits, 2).expect("validated bitstring");
                Ok(PureState::basis(dim, index))
            }
            StateSpec::Bloch([theta, phi]) => Ok(PureState::from_bloch_angles(*theta, *phi)),
            StateSpec::Bell(b) => Ok(BellState::from(*b).state()),
            StateSpec::Vector(amps) => {
                let amps: Vec<C64> = amps.iter().copied().map(complex).collect();
                PureState::new(amps, tol)
                    .map_err(|e| Error::Validation(format!("state spec '{name}': {e}")))
            }
            StateSpec::Matrix(_) => Err(Error::Validation(format!(
                "state spec '{name}': a pure state is required, got an explicit density matrix"
            ))),
        }
    }

    fn density(&self, name: &str, tol: f64) -> Result<DensityOperator> {
        match self {
            StateSpec::Matrix(rows) => {
                let m = matrix_from_spec(rows)
                    .map_err(|e| Error::Validation(format!("state spec '{name}': {e}")))?;
                DensityOperator::new(m, tol)
                    .map_err(|e| Error::Validation(format!("state spec '{name}': {e}")))
            }
            other => Ok(other.pure(name, tol)?.projector()),
        }
    }
}

impl UnitarySpec {
    fn resolve(&self, tol: f64) -> Result<UnitaryOperator> {
        match self {
            UnitarySpec::Gate(g) => match g.as_str() {
                "SWAP" => Ok(UnitaryOperator::swap(2)),
                "CNOT" => Ok(UnitaryOperator::cnot()),
                "I" => Ok(UnitaryOperator::identity(4)),
                other => Err(Error::Validation(format!(
                    "unknown gate {other:?}; expected SWAP, CNOT, or I"
                ))),
            },
            UnitarySpec::Matrix(rows) => {
                let m = matrix_from_spec(rows)?;
                UnitaryOperator::new(m, tol)
                    .map_err(|e| Error::Validation(format!("unitary spec: {e}")))
            }
        }
    }
}

impl Scenario {
    fn pure_state(&self, name: &str) -> Result<PureState> {
        self.state_specs
            .get(name)
            .ok_or_else(|| Error::Validation(format!("missing required state spec '{name}'")))?
            .pure(name, self.tol)
    }

    fn density_state(&self, name: &str) -> Result<DensityOperator> {
        self.state_specs
            .get(name)
            .ok_or_else(|| Error::Validation(format!("missing required state spec '{name}'")))?
            .density(name, self.tol)
    }

    fn optional_pure(&self, name: &str) -> Result<Option<PureState>> {
        self.state_specs
            .get(name)
            .map(|s| s.pure(name, self.tol))
            .transpose()
    }

    fn optional_density(&self, name: &str) -> Result<Option<DensityOperator>> {
        self.state_specs
            .get(name)
            .map(|s| s.density(name, self.tol))
            .transpose()
    }

    /// Semantic validation beyond the JSON schema: every state spec must
    /// materialize, grid values must lie in [0,1], and the protocol's
    /// required states must exist with matching dimensions.
    pub fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(Error::Validation(format!(
                "tol must be a positive number, got {}",
                self.tol
            )));
        }
        if self.trials == 0 {
            return Err(Error::Validation("trials must be positive".into()));
        }
        for eps in &self.epsilon_grid {
            if !(0.0..=1.0).contains(eps) {
                return Err(Error::Validation(format!(
                    "epsilon_grid entry {eps} lies outside [0,1]"
                )));
            }
        }
        for (name, spec) in &self.state_specs {
            spec.density(name, self.tol)?;
        }
        if let Some(u) = &self.unitary_spec {
            u.resolve(self.tol)?;
        }

        match self.protocol {
            Protocol::PoppingUp | Protocol::Elimination | Protocol::Delete => {
                self.pure_state("psi")?;
            }
            Protocol::Clone => {
                let psi = self.pure_state("psi")?;
                if let Some(blank) = self.optional_pure("blank")? {
                    if blank.dim() != psi.dim() {
                        return Err(Error::Validation(format!(
                            "blank state dim {} but psi dim {}",
                            blank.dim(),
                            psi.dim()
                        )));
                    }
                }
            }
            Protocol::CreateState | Protocol::NoEntanglement => {
                let rho12 = self.density_state("rho12")?;
                let d = square_split(rho12.dim())?;
                if self.protocol == Protocol::NoEntanglement {
                    if let Some(ctc) = self.optional_pure("ctc")? {
                        if ctc.dim() != d {
                            return Err(Error::Validation(format!(
                                "ctc state dim {} but CR(2) dim {d}",
                                ctc.dim()
                            )));
                        }
                    }
                }
            }
            Protocol::Teleport => {
                let input = self.pure_state("input")?;
                if input.dim() != 2 {
                    return Err(Error::Validation(format!(
                        "teleport input must be a qubit, got dim {}",
                        input.dim()
                    )));
                }
                self.shared_state()?;
            }
            Protocol::AvgFidelitySweep => {
                self.shared_state()?;
            }
        }
        Ok(())
    }

    fn shared_state(&self) -> Result<DensityOperator> {
        let shared = self
            .optional_density("shared")?
            .unwrap_or_else(|| BellState::PhiPlus.state().projector());
        if shared.dim() != 4 {
            return Err(Error::Validation(format!(
                "shared state must be two qubits, got dim {}",
                shared.dim()
            )));
        }
        Ok(shared)
    }
}

fn square_split(dim: usize) -> Result<usize> {
    let d = (dim as f64).sqrt().round() as usize;
    if d * d != dim {
        return Err(Error::Validation(format!(
            "two-party state dim {dim} does not split into equal subsystems"
        )));
    }
    Ok(d)
}

/// One row of a fidelity sweep. `beats_classical` is true iff
/// mean − 3·stderr exceeds the classical teleportation fidelity 2/3 (by more
/// than the fixed numeric margin).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub mean_fidelity: f64,
    pub stderr: f64,
    pub beats_classical: bool,
}

impl SweepRow {
    fn new(epsilon: f64, mean_fidelity: f64, stderr: f64) -> Self {
        Self {
            epsilon,
            mean_fidelity,
            stderr,
            beats_classical: mean_fidelity - 3.0 * stderr > CLASSICAL_FIDELITY + CLASSICAL_MARGIN,
        }
    }
}

/// Everything a scenario run produced: the scenario echo, human-readable
/// per-protocol summaries, sweep rows, and the wall-clock duration.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub scenario: Scenario,
    pub summaries: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub duration: Duration,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Dispatches a validated scenario to the protocols module. Identical
/// (scenario, seed) pairs yield identical reports.
pub fn run_scenario(scenario: &Scenario) -> Result<RunReport> {
    let start = Instant::now();
    let tol = scenario.tol;
    let mut summaries = Vec::new();
    let mut rows = Vec::new();

    match scenario.protocol {
        Protocol::PoppingUp => {
            let psi = scenario.pure_state("psi")?;
            summarize(&mut summaries, &protocols::popping_up(&psi, tol)?);
        }
        Protocol::Elimination => {
            let psi = scenario.pure_state("psi")?;
            summarize(&mut summaries, &protocols::elimination(&psi, tol)?);
        }
        Protocol::Clone => {
            let psi = scenario.pure_state("psi")?;
            let blank = scenario
                .optional_pure("blank")?
                .unwrap_or_else(|| PureState::basis(psi.dim(), 0));
            summarize(&mut summaries, &protocols::clone_state(&psi, &blank, tol)?);
        }
        Protocol::Delete => {
            let psi = scenario.pure_state("psi")?;
            summarize(&mut summaries, &protocols::delete_state(&psi, tol)?);
        }
        Protocol::CreateState => {
            let rho12 = scenario.density_state("rho12")?;
            let d = square_split(rho12.dim())?;
            summarize(
                &mut summaries,
                &protocols::create_cr_ctc_state(&rho12, [d, d], None, tol)?,
            );
        }
        Protocol::NoEntanglement => {
            let rho12 = scenario.density_state("rho12")?;
            let d = square_split(rho12.dim())?;
            let ctc = scenario
                .optional_pure("ctc")?
                .unwrap_or_else(|| PureState::basis(d, 0));
            summarize(
                &mut summaries,
                &protocols::no_entanglement_check(&rho12, &ctc, [d, d], tol)?,
            );
        }
        Protocol::Teleport => {
            let input = scenario.pure_state("input")?;
            let shared = scenario.shared_state()?;
            for mode in [TeleportMode::Unconstrained, TeleportMode::Deutsch] {
                let setup = TeleportSetup::new(shared.clone(), input.clone(), mode)?;
                summarize(&mut summaries, &protocols::teleport_to_ctc(&setup, tol)?);
            }
            for &eps in &scenario.epsilon_grid {
                let setup =
                    TeleportSetup::new(shared.clone(), input.clone(), TeleportMode::Epsilon(eps))?;
                let report = protocols::teleport_to_ctc(&setup, tol)?;
                summarize(&mut summaries, &report);
                rows.push(SweepRow::new(eps, report.fidelities["fidelity"], 0.0));
            }
        }
        Protocol::AvgFidelitySweep => {
            let shared = scenario.shared_state()?;
            for &eps in &scenario.epsilon_grid {
                let est = protocols::average_fidelity(
                    &shared,
                    TeleportMode::Epsilon(eps),
                    scenario.trials,
                    scenario.seed,
                    tol,
                )?;
                summaries.push(format!(
                    "avg_fidelity_sweep: epsilon={eps} mean={:.9} stderr={:.3e} ({} trials)",
                    est.mean, est.std_error, est.trials
                ));
                rows.push(SweepRow::new(eps, est.mean, est.std_error));
            }
        }
    }

    Ok(RunReport {
        scenario: scenario.clone(),
        summaries,
        rows,
        duration: start.elapsed(),
    })
}

fn summarize(lines: &mut Vec<String>, report: &ProtocolReport) {
    let verdict = match report.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::NotApplicable => "n/a",
    };
    let mut line = format!("{}: verdict={verdict}", report.protocol);
    if let Some(outcome) = report.outcome {
        let tag = match outcome {
            ConsistencyOutcome::ConsistentUncorrelated => "consistent-uncorrelated",
            ConsistencyOutcome::InconsistentPremises => "inconsistent-premises",
        };
        line.push_str(&format!(" outcome={tag}"));
    }
    if !report.steps.is_empty() {
        line.push_str(&format!(
            " steps={} max_residual={:.3e}",
            report.steps.len(),
            report.max_residual()
        ));
    }
    for (k, v) in &report.fidelities {
        line.push_str(&format!(" {k}={v:.9}"));
    }
    lines.push(line);
}

/// Renders a floating-point value with 12 significant digits in plain
/// decimal notation.
fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.11}", 0.0_f64);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let precision = (11 - magnitude).max(0) as usize;
    format!("{x:.precision$}")
}

/// CSV emission: header plus one row per sweep grid point, LF line endings.
pub fn emit_csv(report: &RunReport) -> String {
    let mut out = String::from("epsilon,mean_fidelity,stderr,beats_classical\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_significant(row.epsilon),
            format_significant(row.mean_fidelity),
            format_significant(row.stderr),
            row.beats_classical
        ));
    }
    out
}
