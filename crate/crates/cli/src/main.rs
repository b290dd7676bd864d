//! `qwstat`: stationary measures of inhomogeneous quantum walks from the
//! command line.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 on
//! any input error (bad arguments, malformed or invalid scenario, I/O).

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qwstat_core::scenario::{expand_builtin, BuiltinParams, Scenario, BUILTINS};
use qwstat_core::workflow::{
    cmd_classify, cmd_measure, cmd_verify, read_amplitude_csv, rows_to_json, write_csv,
};

#[derive(Parser, Debug)]
#[command(
    name = "qwstat",
    version,
    about = "Stationary measures of space-inhomogeneous quantum walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate Ψ and μ over the window.
    Measure {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Check the eigenvector against time evolution and the closed form.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        /// Use this amplitude table (measure CSV layout) instead of the
        /// computed eigenvector for the residual and stationarity checks.
        #[arg(long, value_name = "PATH")]
        amplitudes: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Classify the measure (window widened to at least [-100, 100]).
    Classify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        out: Output,
    },
    /// List or expand the builtin scenarios.
    Builtin {
        #[command(subcommand)]
        action: BuiltinAction,
    },
}

#[derive(Subcommand, Debug)]
enum BuiltinAction {
    /// Print builtin names and descriptions.
    List,
    /// Print the scenario JSON for a builtin.
    Expand {
        name: String,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        out: Output,
    },
}

/// Where the scenario comes from: a JSON file (`-` for stdin) or a builtin.
#[derive(Args, Debug)]
struct Source {
    /// Scenario JSON file, or `-` for standard input.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    scenario: Option<PathBuf>,
    /// Use a builtin scenario instead of a file.
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
    #[command(flatten)]
    params: Params,
}

#[derive(Args, Debug)]
struct Params {
    /// Defect distance for two-defect.
    #[arg(long)]
    m: Option<i64>,
    /// Reflection angle in radians for two-defect.
    #[arg(long)]
    theta: Option<f64>,
    /// Defect phase in turns (ω = e^{2πiφ}) for the Hadamard builtins.
    #[arg(long)]
    phi: Option<f64>,
    /// Eigenvalue argument in turns (λ = e^{2πit}).
    #[arg(long, value_name = "T")]
    lambda_turns: Option<f64>,
    /// Ψᴸ(0) as RE IM.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Ψᴿ(0) as RE IM.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    beta: Option<Vec<f64>>,
}

impl Params {
    fn builtin_params(&self) -> BuiltinParams {
        let pair = |v: &Option<Vec<f64>>| v.as_ref().map(|v| [v[0], v[1]]);
        BuiltinParams {
            m: self.m,
            theta: self.theta,
            phi: self.phi,
            lambda_turns: self.lambda_turns,
            alpha: pair(&self.alpha),
            beta: pair(&self.beta),
            window: None,
            steps: None,
        }
    }

    fn any(&self) -> bool {
        self.m.is_some()
            || self.theta.is_some()
            || self.phi.is_some()
            || self.lambda_turns.is_some()
            || self.alpha.is_some()
            || self.beta.is_some()
    }
}

#[derive(Args, Debug)]
struct Overrides {
    /// Replace the scenario window.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    /// Replace the number of evolution steps used by verify.
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => {
                Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)
            }
            None => Box::new(io::stdout().lock()),
        })
    }

    fn write_text(&self, text: &str) -> Result<()> {
        let mut w = self.writer()?;
        writeln!(w, "{text}")?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
    }
    Ok(text)
}

fn apply_overrides(s: Scenario, o: &Overrides) -> Result<Scenario> {
    let s = match &o.window {
        Some(w) => s.with_window(w[0], w[1])?,
        None => s,
    };
    Ok(match o.steps {
        Some(n) => s.with_steps(n),
        None => s,
    })
}

fn load(source: &Source, overrides: &Overrides) -> Result<Scenario> {
    let s = match (&source.scenario, &source.builtin) {
        (_, Some(name)) => expand_builtin(name, &source.params.builtin_params())?,
        (Some(path), None) => {
            if source.params.any() {
                bail!("builtin parameters require --builtin");
            }
            let text = read_input(path)?;
            Scenario::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        (None, None) => unreachable!("clap requires a scenario source"),
    };
    apply_overrides(s, overrides)
}

/// Returns the exit status for a completed command; errors map to 2.
fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Measure {
            source,
            overrides,
            format,
            out,
        } => {
            let s = load(&source, &overrides)?;
            let rows = cmd_measure(&s)?;
            match format {
                Format::Csv => {
                    let mut w = out.writer()?;
                    write_csv(&rows, &mut w)?;
                    w.flush()?;
                }
                Format::Json => out.write_text(&rows_to_json(&rows))?,
            }
            Ok(0)
        }
        Command::Verify {
            source,
            overrides,
            amplitudes,
            out,
        } => {
            let s = load(&source, &overrides)?;
            let psi = match &amplitudes {
                Some(p) => {
                    let f =
                        File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
                    Some(read_amplitude_csv(f).with_context(|| format!("in {}", p.display()))?)
                }
                None => None,
            };
            let report = cmd_verify(&s, psi.as_ref())?;
            out.write_text(&serde_json::to_string_pretty(&report)?)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Classify {
            source,
            overrides,
            out,
        } => {
            let s = load(&source, &overrides)?;
            let report = cmd_classify(&s)?;
            out.write_text(&serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
        Command::Builtin { action } => match action {
            BuiltinAction::List => {
                for (name, about) in BUILTINS {
                    println!("{name:<18} {about}");
                }
                Ok(0)
            }
            BuiltinAction::Expand {
                name,
                params,
                overrides,
                out,
            } => {
                let s =
                    apply_overrides(expand_builtin(&name, &params.builtin_params())?, &overrides)?;
                out.write_text(&s.to_json())?;
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
