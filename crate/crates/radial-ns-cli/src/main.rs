use clap::{Args, Parser, Subcommand, ValueEnum};
use radial_ns::solver::Mode;
use radial_ns_cli::commands::{cmd_check_weakform, cmd_family, cmd_run};
use radial_ns_cli::scalars::{eval_scalar, ScalarCmd};
use radial_ns_cli::{parse_config, parse_config_str, CliError, Exit, RunConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "radial-ns", version, about = "Radial compressible Navier-Stokes runs with a-priori bound monitors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Exploratory,
}

#[derive(Args)]
struct Common {
    /// TOML config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Subcommand)]
enum Cmd {
    /// One (a, k) run with monitors.
    Run(Common),
    /// The (a, k) family from the [family] section.
    Family(Common),
    /// Weak-form residuals over the [weak] refinement levels.
    CheckWeakform(Common),
    /// Scalar kernel evaluations, printed as JSON.
    Scalars {
        #[command(subcommand)]
        cmd: ScalarCmd,
    },
}

fn load(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &c.config {
        Some(p) => parse_config(p)?,
        None => parse_config_str("", Path::new("."))?,
    };
    match c.mode {
        Some(ModeArg::Strict) => cfg.mode = Mode::Strict,
        Some(ModeArg::Exploratory) => cfg.mode = Mode::Exploratory,
        None => {}
    }
    Ok(cfg)
}

fn with_config(c: &Common, f: impl FnOnce(&RunConfig) -> Result<Exit, CliError> + Send) -> Exit {
    let result = load(c).and_then(|cfg| radial_ns::par::with_workers(c.workers, || f(&cfg)));
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = match &cli.cmd {
        Cmd::Run(c) => with_config(c, |cfg| cmd_run(cfg, &c.out)),
        Cmd::Family(c) => with_config(c, |cfg| cmd_family(cfg, &c.out, c.workers)),
        Cmd::CheckWeakform(c) => with_config(c, |cfg| cmd_check_weakform(cfg, &c.out)),
        Cmd::Scalars { cmd } => match eval_scalar(cmd) {
            Ok(v) => {
                println!("{v}");
                Exit::Ok
            }
            Err(e) => {
                eprintln!("error: {e}");
                Exit::Config
            }
        },
    };
    ExitCode::from(exit as u8)
}
