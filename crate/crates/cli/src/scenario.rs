//! Scenario runner: evaluates one noise model over a uniform time grid and
//! emits the extractable-work time series as CSV plus a JSON manifest.

use std::io::{self, Write};
use std::time::Instant;

use nmwork_core::channels::DIVISIBILITY_RATE_TOL;
use nmwork_core::{
    amplitude_damping_kraus, apply_to_subsystem, divisibility_flags, entropic_profile,
    pauli_snapshot, work_in_joules, work_memory_scenario, work_system_scenario, CMatrix,
    DensityMatrix, DivisibilityFlags, IsingModel, IsingParams, PauliRateSet, PauliSnapshot,
    PbgModel, PbgParams, RateFunction, Subsystem, WorkPoint,
};
use rayon::prelude::*;
use serde::Serialize;

/// Errors of a scenario run, split by process exit code:
/// 1 invalid parameters, 2 model violation, 3 I/O failure.
#[derive(Debug)]
pub enum RunError {
    InvalidParameters(String),
    ModelViolation(String),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::InvalidParameters(_) => 1,
            RunError::ModelViolation(_) => 2,
            RunError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::InvalidParameters(m) => write!(f, "invalid parameters: {m}"),
            RunError::ModelViolation(m) => write!(f, "model violation: {m}"),
            RunError::Io(m) => write!(f, "i/o failure: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<nmwork_core::Error> for RunError {
    fn from(err: nmwork_core::Error) -> Self {
        use nmwork_core::Error as E;
        match err {
            E::ModelViolation(_) | E::InvalidState(_) | E::NotHermitian { .. } => {
                RunError::ModelViolation(err.to_string())
            }
            _ => RunError::InvalidParameters(err.to_string()),
        }
    }
}

impl From<io::Error> for RunError {
    fn from(err: io::Error) -> Self {
        RunError::Io(err.to_string())
    }
}

/// Which qubit the noise acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseTarget {
    System,
    Memory,
}

impl NoiseTarget {
    fn subsystem(self) -> Subsystem {
        match self {
            NoiseTarget::System => Subsystem::System,
            NoiseTarget::Memory => Subsystem::Memory,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NoiseTarget::System => "system",
            NoiseTarget::Memory => "memory",
        }
    }
}

/// Third Pauli rate family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rate3Kind {
    Tan,
    Tanh,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelConfig {
    /// γ₁ = γ₂ = λ/2 constant, γ₃ = ±(ω/2)·tan/tanh(ωt).
    Pauli { lambda: f64, omega: f64, rate3: Rate3Kind },
    Ising { exchange: f64, field: f64, coupling: f64, spins: usize },
    Pbg { detuning: f64, beta: f64 },
}

impl ModelConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelConfig::Pauli { .. } => "pauli",
            ModelConfig::Ising { .. } => "ising",
            ModelConfig::Pbg { .. } => "pbg",
        }
    }

    /// Divisibility columns are populated for pauli and ising only.
    pub fn has_divisibility_columns(&self) -> bool {
        !matches!(self, ModelConfig::Pbg { .. })
    }

    pub fn has_g_abs_column(&self) -> bool {
        matches!(self, ModelConfig::Pbg { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioConfig {
    #[serde(flatten)]
    pub model: ModelConfig,
    pub t_max: f64,
    pub steps: usize,
    pub scenario: NoiseTarget,
    /// Temperature in kelvin; adds a joules column when present.
    pub temperature: Option<f64>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if self.t_max <= 0.0 || self.t_max.is_nan() {
            return Err(RunError::InvalidParameters("t-max must be positive".into()));
        }
        if self.steps < 2 {
            return Err(RunError::InvalidParameters("steps must be at least 2".into()));
        }
        if let Some(t) = self.temperature {
            if t <= 0.0 || t.is_nan() {
                return Err(RunError::InvalidParameters("temperature must be positive".into()));
            }
        }
        match &self.model {
            ModelConfig::Pauli { lambda, omega, .. } => {
                if *lambda < 0.0 || lambda.is_nan() {
                    return Err(RunError::InvalidParameters("lambda must be non-negative".into()));
                }
                if *omega <= 0.0 || omega.is_nan() {
                    return Err(RunError::InvalidParameters("omega must be positive".into()));
                }
            }
            ModelConfig::Ising { exchange, field, coupling, spins } => {
                IsingParams {
                    exchange: *exchange,
                    field: *field,
                    coupling: *coupling,
                    spins: *spins,
                }
                .validate()
                .map_err(|e| RunError::InvalidParameters(e.to_string()))?;
            }
            ModelConfig::Pbg { detuning, beta } => {
                PbgParams { beta: *beta, detuning: *detuning }
                    .validate()
                    .map_err(|e| RunError::InvalidParameters(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Uniform grid t_i = i·t_max/(steps − 1).
    pub fn time_grid(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| i as f64 * self.t_max / (self.steps - 1) as f64)
            .collect()
    }
}

/// Named parameter sets for the bundled figure scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Pauli, γ₃ tan family: λ = 0.1, ω = 2, t ∈ [0, 5].
    Fig2a,
    /// Pauli, γ₃ tanh family: λ = 1, ω = 0.5, t ∈ [0, 10].
    Fig2b,
    /// Ising at the phase transition: λ = 0.9 (λ* = 1).
    Fig3a,
    /// Ising in the ferromagnetic phase: λ = 0 (λ* = 0.1).
    Fig3b,
    /// Ising in the paramagnetic phase: λ = 1.8 (λ* = 1.9).
    Fig3c,
    /// Photonic band gap: δ = −1, β = 1.
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 6] =
        [Preset::Fig2a, Preset::Fig2b, Preset::Fig3a, Preset::Fig3b, Preset::Fig3c, Preset::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig3c => "fig3c",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }

    fn ising(field: f64) -> ModelConfig {
        ModelConfig::Ising { exchange: 1.0, field, coupling: 0.1, spins: 4000 }
    }

    pub fn config(self) -> ScenarioConfig {
        let (model, t_max, steps, scenario) = match self {
            Preset::Fig2a => (
                ModelConfig::Pauli { lambda: 0.1, omega: 2.0, rate3: Rate3Kind::Tan },
                5.0,
                500,
                NoiseTarget::Memory,
            ),
            Preset::Fig2b => (
                ModelConfig::Pauli { lambda: 1.0, omega: 0.5, rate3: Rate3Kind::Tanh },
                10.0,
                500,
                NoiseTarget::Memory,
            ),
            // The reference plots carry no axis ranges; t_max = 10 shows the
            // decay to unity and the first revivals for all three fields.
            Preset::Fig3a => (Self::ising(0.9), 10.0, 1000, NoiseTarget::Memory),
            Preset::Fig3b => (Self::ising(0.0), 10.0, 1000, NoiseTarget::Memory),
            Preset::Fig3c => (Self::ising(1.8), 10.0, 1000, NoiseTarget::Memory),
            Preset::Fig4 => (
                ModelConfig::Pbg { detuning: -1.0, beta: 1.0 },
                10.0,
                1000,
                NoiseTarget::System,
            ),
        };
        ScenarioConfig { model, t_max, steps, scenario, temperature: None }
    }
}

/// One emitted time sample.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub point: WorkPoint,
    /// |G(t)| for the photonic-band-gap model.
    pub g_abs: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub preset: Option<String>,
    pub config: ScenarioConfig,
    /// Quantities derived from the configuration (e.g. λ* = λ + δ).
    pub derived: serde_json::Value,
    pub duration_seconds: f64,
}

#[derive(Debug)]
pub struct RunOutput {
    pub config: ScenarioConfig,
    pub rows: Vec<Row>,
    pub manifest: RunManifest,
}

/// Per-model state shared across the time grid.
enum Evaluator {
    Pauli { rates: PauliRateSet, target: Subsystem },
    Ising { model: IsingModel, target: Subsystem },
    Pbg { model: PbgModel, target: Subsystem },
}

impl Evaluator {
    fn new(config: &ScenarioConfig) -> Result<Self, RunError> {
        let target = config.scenario.subsystem();
        match &config.model {
            ModelConfig::Pauli { lambda, omega, rate3 } => {
                let g3 = match rate3 {
                    Rate3Kind::Tan => RateFunction::tan(*omega),
                    Rate3Kind::Tanh => RateFunction::tanh(*omega),
                }?;
                let rates = PauliRateSet::new(
                    RateFunction::constant(0.5 * lambda),
                    RateFunction::constant(0.5 * lambda),
                    g3,
                );
                Ok(Evaluator::Pauli { rates, target })
            }
            ModelConfig::Ising { exchange, field, coupling, spins } => {
                let model = IsingModel::new(IsingParams {
                    exchange: *exchange,
                    field: *field,
                    coupling: *coupling,
                    spins: *spins,
                })?;
                Ok(Evaluator::Ising { model, target })
            }
            ModelConfig::Pbg { detuning, beta } => {
                let model = PbgModel::new(PbgParams { beta: *beta, detuning: *detuning })?;
                Ok(Evaluator::Pbg { model, target })
            }
        }
    }

    fn row(&self, t: f64) -> Result<Row, RunError> {
        match self {
            Evaluator::Pauli { rates, target } => {
                let snap = pauli_snapshot(rates, t)?;
                if snap.cp_violation() {
                    return Err(RunError::ModelViolation(format!(
                        "Pauli probabilities negative at t = {t}: channel is not CP"
                    )));
                }
                let flags = divisibility_flags(rates, t)?;
                let point = pauli_point(&snap, *target, t, Some(flags))?;
                Ok(Row { point, g_abs: None })
            }
            Evaluator::Ising { model, target } => {
                let snap = model.snapshot(t);
                // γ₁ = γ₂ = 0, so CP- and P-divisibility both reduce to
                // γ₃(t) ≥ 0.
                let rate_ok = if t > 0.0 {
                    model.decay_rate(t)? >= -DIVISIBILITY_RATE_TOL
                } else {
                    true
                };
                let flags = DivisibilityFlags {
                    cp_divisible: rate_ok,
                    p_divisible: rate_ok,
                    cp_violation: false,
                };
                let point = pauli_point(&snap, *target, t, Some(flags))?;
                Ok(Row { point, g_abs: None })
            }
            Evaluator::Pbg { model, target } => {
                let g = model.g(t)?;
                let kraus = amplitude_damping_kraus(g)?;
                let joint = apply_to_subsystem(
                    &[kraus.k1.clone(), kraus.k2.clone()],
                    &DensityMatrix::singlet(),
                    *target,
                )?;
                let point = work_point(t, &joint, *target, None)?;
                Ok(Row { point, g_abs: Some(g.norm()) })
            }
        }
    }
}

/// Evolve the singlet under the snapshot's Pauli channel on `target` and
/// assemble the sample.
fn pauli_point(
    snap: &PauliSnapshot,
    target: Subsystem,
    t: f64,
    flags: Option<DivisibilityFlags>,
) -> Result<WorkPoint, RunError> {
    let kraus: Vec<CMatrix> = snap
        .p
        .iter()
        .enumerate()
        .map(|(alpha, &p)| {
            CMatrix::pauli(alpha).scale(nmwork_core::Complex64::new(p.max(0.0).sqrt(), 0.0))
        })
        .collect();
    let joint = apply_to_subsystem(&kraus, &DensityMatrix::singlet(), target)?;
    work_point(t, &joint, target, flags)
}

fn work_point(
    t: f64,
    joint: &DensityMatrix,
    target: Subsystem,
    flags: Option<DivisibilityFlags>,
) -> Result<WorkPoint, RunError> {
    let profile = entropic_profile(joint)?;
    let w_ex = match target {
        Subsystem::Memory => work_memory_scenario(joint, 1)?,
        Subsystem::System => work_system_scenario(joint, 1)?,
    };
    Ok(WorkPoint::new(t, profile, w_ex, flags))
}

/// Run the scenario over its uniform grid. Rows are evaluated in parallel
/// (each is a pure function of t) and collected in time order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunOutput, RunError> {
    run_scenario_impl(config, None, true)
}

/// Serial variant; must produce output identical to [`run_scenario`].
pub fn run_scenario_serial(config: &ScenarioConfig) -> Result<RunOutput, RunError> {
    run_scenario_impl(config, None, false)
}

/// Run a named preset.
pub fn run_preset(preset: Preset) -> Result<RunOutput, RunError> {
    run_scenario_impl(&preset.config(), Some(preset), true)
}

/// Run `config` while recording `preset` in the manifest (used when flags
/// override parts of a preset).
pub fn run_preset_with(preset: Preset, config: &ScenarioConfig) -> Result<RunOutput, RunError> {
    run_scenario_impl(config, Some(preset), true)
}

fn run_scenario_impl(
    config: &ScenarioConfig,
    preset: Option<Preset>,
    parallel: bool,
) -> Result<RunOutput, RunError> {
    config.validate()?;
    let start = Instant::now();
    let evaluator = Evaluator::new(config)?;
    let times = config.time_grid();
    let rows: Result<Vec<Row>, RunError> = if parallel {
        times.par_iter().map(|&t| evaluator.row(t)).collect()
    } else {
        times.iter().map(|&t| evaluator.row(t)).collect()
    };
    let rows = rows?;

    let derived = match &config.model {
        ModelConfig::Ising { field, coupling, .. } => serde_json::json!({
            "lambda_star": field + coupling,
        }),
        ModelConfig::Pauli { lambda, omega, rate3 } => serde_json::json!({
            "gamma12_constant": 0.5 * lambda,
            "gamma3_family": match rate3 { Rate3Kind::Tan => "omega/2 tan(omega t)",
                                           Rate3Kind::Tanh => "-omega/2 tanh(omega t)" },
            "gamma3_scale": 0.5 * omega,
        }),
        ModelConfig::Pbg { .. } => serde_json::json!({}),
    };
    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        preset: preset.map(|p| p.name().to_string()),
        config: config.clone(),
        derived,
        duration_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { config: config.clone(), rows, manifest })
}

/// Exact CSV header for a run without the optional temperature column.
pub fn csv_header(model: &ModelConfig) -> String {
    let mut header = String::from(
        "t,H_S,H_Q,H_SQ,cond_entropy,coherent_info,mutual_info,w_ex_kTln2,cp_divisible,p_divisible",
    );
    if model.has_g_abs_column() {
        header.push_str(",g_abs");
    }
    header
}

/// Write the CSV body. Numbers use the shortest representation that parses
/// back to the same f64, so repeated runs are byte-identical.
pub fn write_csv<W: Write>(out: &mut W, run: &RunOutput) -> io::Result<()> {
    let mut header = csv_header(&run.config.model);
    if run.config.temperature.is_some() {
        header.push_str(",w_ex_joules");
    }
    writeln!(out, "{header}")?;
    for row in &run.rows {
        let p = &row.point;
        write!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.t, p.h_s, p.h_q, p.h_sq, p.cond_entropy, p.coherent_info, p.mutual_info, p.w_ex
        )?;
        match (run.config.model.has_divisibility_columns(), p.flags) {
            (true, Some(f)) => write!(out, ",{},{}", f.cp_divisible as u8, f.p_divisible as u8)?,
            _ => write!(out, ",,")?,
        }
        if run.config.model.has_g_abs_column() {
            write!(out, ",{}", row.g_abs.unwrap_or(f64::NAN))?;
        }
        if let Some(kelvin) = run.config.temperature {
            write!(out, ",{}", work_in_joules(p.w_ex, kelvin))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Render the CSV to a string.
pub fn csv_string(run: &RunOutput) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, run).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv is ASCII")
}
