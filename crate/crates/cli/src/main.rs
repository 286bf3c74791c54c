use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symspace::numeric::TolerancePolicy;
use symspace::suite::{
    act, factor_report, parse_matrix, run_suite, ConfigError, ConfigOverrides, ModelKind, SuiteConfig,
    CONFIG_ERROR_EXIT,
};

#[derive(Parser)]
#[command(name = "symspace", version, about = "Verification suites for reflection spaces of matrix groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite and print its JSON report.
    Verify {
        /// axioms, matrix-lemma, commutator, so2-residuals, central-extension,
        /// perfectness, factorization, cocone or all
        suite: String,
        #[command(flatten)]
        flags: SuiteFlags,
    },
    /// Run a demonstration suite.
    Demo {
        which: Demo,
        #[command(flatten)]
        flags: SuiteFlags,
    },
    /// Write g·gᵀ for g in SL₂(ℚ) or SL₃(ℚ) as a nested reflection expression.
    Factor {
        /// Rows separated by `;`, entries by `,`, e.g. "1,1;0,1".
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        numeric: NumericFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a reflection word to a point in exact arithmetic.
    Act {
        #[arg(long)]
        model: String,
        /// Points separated by `|`; `o` is the basepoint.
        #[arg(long)]
        word: String,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        numeric: NumericFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    CentralExtension,
}

#[derive(Args)]
struct NumericFlags {
    #[arg(long)]
    precision_bits: Option<usize>,
    #[arg(long)]
    abs_tol: Option<String>,
}

impl NumericFlags {
    fn policy(&self) -> Result<(TolerancePolicy, String), ConfigError> {
        let defaults = SuiteConfig::default();
        let tol = self.abs_tol.clone().unwrap_or(defaults.abs_tol);
        let bits = self.precision_bits.unwrap_or(defaults.precision_bits);
        let policy = TolerancePolicy::new(&tol, bits).map_err(|e| ConfigError::field("abs_tol", e))?;
        Ok((policy, tol))
    }
}

#[derive(Args)]
struct SuiteFlags {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    numeric: NumericFlags,
    /// Comma-separated rationals, e.g. "1,1/2,2".
    #[arg(long, alias = "t")]
    t_values: Option<String>,
    #[arg(long)]
    diagram: Option<String>,
    /// JSON configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time in the report (makes it nondeterministic).
    #[arg(long)]
    timing: bool,
}

impl SuiteFlags {
    fn overrides(&self, suite: &str) -> ConfigOverrides {
        ConfigOverrides {
            suite: Some(suite.to_string()),
            model: self.model.clone(),
            seed: self.seed,
            samples: self.samples,
            precision_bits: self.numeric.precision_bits,
            abs_tol: self.numeric.abs_tol.clone(),
            t_values: self.t_values.clone(),
            diagram: self.diagram.clone(),
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(CONFIG_ERROR_EXIT as u8)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verify(suite: &str, flags: &SuiteFlags) -> ExitCode {
    let text = match &flags.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => return config_error(format!("config error: reading {}: {e}", path.display())),
        },
        None => None,
    };
    let config = match SuiteConfig::resolve(text.as_deref(), &flags.overrides(suite)) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let report = run_suite(&config, flags.timing);
    eprintln!(
        "{}: {} passed, {} failed, {} skipped",
        report.suite, report.summary.passed, report.summary.failed, report.summary.skipped
    );
    if let Err(e) = emit(&report.to_json(), flags.out.as_deref()) {
        eprintln!("{e}");
        return ExitCode::FAILURE;
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { suite, flags } => verify(&suite, &flags),
        Command::Demo { which, flags } => match which {
            Demo::CentralExtension => verify("central-extension", &flags),
        },
        Command::Factor { matrix, numeric, out } => {
            let (policy, tol) = match numeric.policy() {
                Ok(p) => p,
                Err(e) => return config_error(e),
            };
            let g = match parse_matrix(&matrix) {
                Ok(g) => g,
                Err(e) => return config_error(format!("config error in field `matrix`: {e}")),
            };
            match factor_report(&g, &policy, &tol) {
                Ok(report) => {
                    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
                    if let Err(e) = emit(&json, out.as_deref()) {
                        eprintln!("{e}");
                        return ExitCode::FAILURE;
                    }
                    if report.status == "pass" {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("factorization failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Act { model, word, point, numeric, out } => {
            let (policy, _) = match numeric.policy() {
                Ok(p) => p,
                Err(e) => return config_error(e),
            };
            let model: ModelKind = match model.parse() {
                Ok(m) => m,
                Err(e) => return config_error(format!("config error in field `model`: {e}")),
            };
            match act(model, &word, &point, &policy) {
                Ok(r) => {
                    let json = serde_json::to_string_pretty(&r).expect("results serialize");
                    match emit(&json, out.as_deref()) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(e) => {
                            eprintln!("{e}");
                            ExitCode::FAILURE
                        }
                    }
                }
                Err(e) => config_error(format!("invalid input: {e}")),
            }
        }
    }
}
