use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistor_cm::scenario::parse_checks;
use twistor_cm::{emit_report, load_scenario, resolve_precision_cap, run_survey, Format, RunConfig, ScenarioError};
use twistor_cm_core::exactalg::format_rational;
use twistor_cm_core::hodge::{CmField, PRESETS};
use twistor_cm_core::twistor::extend_by_polarization;

#[derive(Parser)]
#[command(name = "twistor-cm", version, about = "CM checks along twistor lines of CM Hodge structures of K3 type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario over its classes.
    Survey {
        #[arg(long)]
        scenario: PathBuf,
        /// Height bound for the class enumeration; overrides the scenario.
        #[arg(long)]
        height: Option<u32>,
        /// cm, picard, equator, period or all; repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        precision_cap: Option<u32>,
        /// Orders the searches for alpha and xi; 0 is the canonical order.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timings: bool,
    },
    /// Build the scenario's structure and check its invariants.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        precision_cap: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Show a preset CM field, or list them.
    Fields {
        #[arg(long)]
        preset: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Alarm(String),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match &e {
            ScenarioError::Build(b) if b.is_alarm() => Failure::Alarm(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Survey { scenario, height, checks, format, out, workers, precision_cap, seed, timings } => {
            let spec = load_scenario(&scenario)?;
            let cap = resolve_precision_cap(precision_cap, spec.precision_cap).map_err(Failure::Usage)?;
            let checks = if checks.is_empty() { None } else { Some(parse_checks(&checks).map_err(Failure::Usage)?) };
            if workers == 0 {
                return Err(Failure::Usage("--workers must be at least 1".into()));
            }
            let cfg = RunConfig { workers, seed, precision_cap: cap, height, checks, timings };
            let report = run_survey(&spec, &cfg)?;
            let text = emit_report(&report, format);
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            Ok(report.exit_code() == 0)
        }
        Command::Verify { scenario, precision_cap, seed } => {
            let spec = load_scenario(&scenario)?;
            let cap = resolve_precision_cap(precision_cap, spec.precision_cap).map_err(Failure::Usage)?;
            let h = spec.build(seed, cap)?;
            h.check_invariants().map_err(|e| Failure::from(ScenarioError::from(e)))?;
            let setup = extend_by_polarization(&h, &spec.d).map_err(|e| Failure::from(ScenarioError::from(e)))?;
            println!("scenario: {}", spec.name);
            println!("field: {}", h.input_field().modulus());
            println!("alpha minimal polynomial: {}", h.alpha().minimal_polynomial());
            println!("xi: {}", h.xi());
            println!("rank {}, extended by d = {} to rank {}", h.rank(), format_rational(setup.d()), setup.rank() + 1);
            println!("invariants: ok");
            Ok(true)
        }
        Command::Fields { preset } => {
            let names: Vec<&str> = match &preset {
                Some(p) => vec![p.as_str()],
                None => PRESETS.to_vec(),
            };
            for n in names {
                let k = CmField::preset(n).map_err(|e| Failure::Usage(e.to_string()))?;
                println!("{:<12} degree {}  {}", k.name(), k.degree(), k.modulus());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Alarm(m)) => {
            eprintln!("alarm: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
