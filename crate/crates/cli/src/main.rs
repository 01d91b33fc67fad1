//! `nmwork`: extractable-work time series for a noisy system–memory qubit
//! pair.
//!
//! Exit codes: 0 success, 1 invalid parameters, 2 model violation or failed
//! verification, 3 I/O failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nmwork_cli::scenario::{
    run_scenario, write_csv, ModelConfig, NoiseTarget, Preset, Rate3Kind, RunError, RunOutput,
    ScenarioConfig,
};
use nmwork_cli::verify;

#[derive(Parser)]
#[command(name = "nmwork", version, about = "Extractable work under non-Markovian noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a noise scenario over a time grid and write it as CSV.
    Run(RunArgs),
    /// Run every built-in consistency and oracle check.
    Verify,
}

#[derive(Args)]
struct RunArgs {
    /// Named parameter set (fig2a, fig2b, fig3a, fig3b, fig3c, fig4).
    #[arg(long, conflicts_with = "model")]
    preset: Option<String>,
    /// Noise model for a manual run.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,

    /// Pauli: constant-rate strength λ (γ₁ = γ₂ = λ/2).
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Pauli: frequency ω of the third rate.
    #[arg(long)]
    omega: Option<f64>,
    /// Pauli: third-rate family.
    #[arg(long, value_enum)]
    rate3: Option<Rate3Arg>,

    /// Ising: transverse field strength λ.
    #[arg(long, allow_negative_numbers = true)]
    field: Option<f64>,
    /// Ising: qubit–environment coupling δ.
    #[arg(long, allow_negative_numbers = true)]
    coupling: Option<f64>,
    /// Ising: number of spins N (even).
    #[arg(long)]
    spins: Option<usize>,
    /// Ising: exchange constant J.
    #[arg(long)]
    exchange: Option<f64>,

    /// PBG: detuning δ from the band edge.
    #[arg(long, allow_negative_numbers = true)]
    detuning: Option<f64>,
    /// PBG: characteristic frequency β.
    #[arg(long)]
    beta: Option<f64>,

    /// End of the time grid (a.u.).
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of grid points (≥ 2).
    #[arg(long)]
    steps: Option<usize>,
    /// Which qubit the noise acts on.
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    /// Temperature in kelvin; adds a w_ex_joules column.
    #[arg(long)]
    temperature: Option<f64>,
    /// Output CSV path; the manifest lands at <out>.manifest.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Pauli,
    Ising,
    Pbg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rate3Arg {
    Tan,
    Tanh,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    System,
    Memory,
}

impl ScenarioArg {
    fn target(self) -> NoiseTarget {
        match self {
            ScenarioArg::System => NoiseTarget::System,
            ScenarioArg::Memory => NoiseTarget::Memory,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match cli.command {
        Command::Run(args) => match execute_run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(err) => {
                eprintln!("nmwork: {err}");
                ExitCode::from(err.exit_code() as u8)
            }
        },
        Command::Verify => {
            let results = verify::run_all();
            let mut stdout = std::io::stdout().lock();
            match verify::report(&mut stdout, &results) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(2),
                Err(err) => {
                    eprintln!("nmwork: i/o failure: {err}");
                    ExitCode::from(3)
                }
            }
        }
    }
}

fn execute_run(args: RunArgs) -> Result<(), RunError> {
    let config = build_config(&args)?;
    let preset = args.preset.as_deref().and_then(Preset::from_name);
    let output = match preset {
        Some(p) => nmwork_cli::scenario::run_preset_with(p, &config)?,
        None => run_scenario(&config)?,
    };
    write_outputs(&args.out, &output)
}

/// Resolve preset + flag overrides into a full configuration.
fn build_config(args: &RunArgs) -> Result<ScenarioConfig, RunError> {
    let base = match (&args.preset, args.model) {
        (Some(name), _) => {
            let preset = Preset::from_name(name).ok_or_else(|| {
                RunError::InvalidParameters(format!(
                    "unknown preset '{name}' (expected one of fig2a, fig2b, fig3a, fig3b, fig3c, fig4)"
                ))
            })?;
            Some(preset.config())
        }
        (None, Some(_)) => None,
        (None, None) => {
            return Err(RunError::InvalidParameters(
                "either --preset or --model is required".into(),
            ))
        }
    };

    let model = match (args.model, &base) {
        (None, Some(cfg)) => cfg.model.clone(),
        (Some(ModelArg::Pauli), _) => ModelConfig::Pauli {
            lambda: args.lambda.unwrap_or(0.1),
            omega: args.omega.unwrap_or(2.0),
            rate3: match args.rate3.unwrap_or(Rate3Arg::Tan) {
                Rate3Arg::Tan => Rate3Kind::Tan,
                Rate3Arg::Tanh => Rate3Kind::Tanh,
            },
        },
        (Some(ModelArg::Ising), _) => ModelConfig::Ising {
            exchange: args.exchange.unwrap_or(1.0),
            field: args.field.unwrap_or(0.9),
            coupling: args.coupling.unwrap_or(0.1),
            spins: args.spins.unwrap_or(4000),
        },
        (Some(ModelArg::Pbg), _) => ModelConfig::Pbg {
            detuning: args.detuning.unwrap_or(-1.0),
            beta: args.beta.unwrap_or(1.0),
        },
        (None, None) => unreachable!("handled above"),
    };

    // Manual runs must state the grid; presets carry their own.
    let (t_max, steps, scenario) = match &base {
        Some(cfg) => (
            args.t_max.unwrap_or(cfg.t_max),
            args.steps.unwrap_or(cfg.steps),
            args.scenario.map(ScenarioArg::target).unwrap_or(cfg.scenario),
        ),
        None => {
            let t_max = args.t_max.ok_or_else(|| {
                RunError::InvalidParameters("--t-max is required with --model".into())
            })?;
            let steps = args.steps.ok_or_else(|| {
                RunError::InvalidParameters("--steps is required with --model".into())
            })?;
            let scenario = args
                .scenario
                .map(ScenarioArg::target)
                .unwrap_or(match model {
                    ModelConfig::Pbg { .. } => NoiseTarget::System,
                    _ => NoiseTarget::Memory,
                });
            (t_max, steps, scenario)
        }
    };

    Ok(ScenarioConfig { model, t_max, steps, scenario, temperature: args.temperature })
}

fn write_outputs(out: &PathBuf, output: &RunOutput) -> Result<(), RunError> {
    let file = File::create(out)?;
    let mut writer = BufWriter::new(file);
    write_csv(&mut writer, output)?;
    writer.flush()?;

    let manifest_path = {
        let mut os = out.clone().into_os_string();
        os.push(".manifest.json");
        PathBuf::from(os)
    };
    let json = serde_json::to_string_pretty(&output.manifest)
        .map_err(|e| RunError::Io(e.to_string()))?;
    std::fs::write(manifest_path, json + "\n")?;
    Ok(())
}
