use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ihomog::app::{self, Outcome, RealizeOptions, Status};
use ihomog::realizer::{DEFAULT_FD_STEP, DEFAULT_SEED, DEFAULT_TOLERANCE};
use ihomog::{Error, InstanceFile};

#[derive(Parser)]
#[command(name = "ihomog", version, about = "Certify characteristic tensors and build their Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Instance file, or `corpus:<name>` for a bundled instance.
    #[arg(value_name = "INSTANCE", required_unless_present = "input", conflicts_with = "input")]
    path: Option<String>,
    /// Same as the positional argument.
    #[arg(short, long, value_name = "INSTANCE")]
    input: Option<String>,
    /// Write the report here instead of stdout (reduce-torsion: the reduced instance).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Common {
    fn source(&self) -> &str {
        self.path.as_deref().or(self.input.as_deref()).expect("clap requires an input")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every certificate check.
    Check {
        #[command(flatten)]
        common: Common,
        /// Also check invariance under the file's group generators.
        #[arg(long)]
        generators: bool,
    },
    /// Build the Lie algebra h + m and report its invariants.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Replace the instance by its torsion-free reduction.
    ReduceTorsion {
        #[command(flatten)]
        common: Common,
    },
    /// Realize the local model numerically and check its curvature.
    Realize {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        fd_step: f64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn emit(common: &Common, body: &str) -> Result<(), Error> {
    match &common.output {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn render(common: &Common, out: &Outcome) -> String {
    match common.format {
        Format::Json => out.json(),
        Format::Text => out.text.clone(),
    }
}

fn run(cli: Cli) -> Result<Status, Error> {
    match cli.command {
        Command::Check { common, generators } => {
            let inst = app::load_input(common.source())?;
            let out = app::cmd_check(&inst, generators)?;
            emit(&common, &render(&common, &out))?;
            Ok(out.status)
        }
        Command::Build { common } => {
            let inst = app::load_input(common.source())?;
            let out = app::cmd_build(&inst)?;
            emit(&common, &render(&common, &out))?;
            Ok(out.status)
        }
        Command::ReduceTorsion { common } => {
            let inst = app::load_input(common.source())?;
            let (out, reduced) = app::cmd_reduce(&inst)?;
            match (&common.output, reduced) {
                (Some(p), Some(r)) => {
                    fs::write(p, r.to_json_pretty())?;
                    print!("{}", render(&common, &out));
                }
                (None, Some(r)) => {
                    let body = match common.format {
                        Format::Json => {
                            let v = json!({ "note": out.report, "reduced_instance": r });
                            serde_json::to_string_pretty(&v)? + "\n"
                        }
                        Format::Text => format!("{}{}", out.text, r.to_json_pretty()),
                    };
                    print!("{body}");
                }
                (_, None) => print!("{}", render(&common, &out)),
            }
            Ok(out.status)
        }
        Command::Realize { common, fd_step, tol, seed } => {
            let inst: InstanceFile = app::load_input(common.source())?;
            let opts = RealizeOptions { fd_step, tolerance: tol, seed };
            let out = app::cmd_realize(&inst, opts)?;
            emit(&common, &render(&common, &out))?;
            Ok(out.status)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::InputError.code() as u8)
        }
    }
}
