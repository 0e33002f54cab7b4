use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lcagabor::verify::Sizes;
use lcagabor::Error;
use lcagabor_cli::{cmd_density, cmd_frame, cmd_norms, cmd_stft, cmd_verify, exit_code, ExperimentConfig, Format};

/// Gabor frames, STFTs and Beurling densities on Q_p and F_p((t)).
#[derive(Parser)]
#[command(name = "lcagabor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density profile and separation diagnostics of a point set.
    Density(ConfigArgs),
    /// Frame bounds and classification of a Gabor system.
    Frame(ConfigArgs),
    /// Short-time Fourier transform grid of the signal against the window.
    Stft(ConfigArgs),
    /// L2, modulation and Wiener amalgam norms.
    Norms(ConfigArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random signals and samples.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON output.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Plain-text table output.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizesArg {
    Small,
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "paper")]
    suite: String,
    /// Comma-separated primes.
    #[arg(long = "p", value_delimiter = ',', default_value = "2,3")]
    primes: Vec<u32>,
    #[arg(long, value_enum, default_value = "full")]
    sizes: SizesArg,
    #[command(flatten)]
    output: OutputArgs,
}

impl OutputArgs {
    fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else if self.table {
            Format::Table
        } else {
            default
        }
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| Error::Argument(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let config_cmd = |args: &ConfigArgs, f: fn(&ExperimentConfig, Option<u64>, Format) -> lcagabor::Result<String>| {
        let cfg = ExperimentConfig::load(&args.config)?;
        let text = f(&cfg, args.output.seed, args.output.format(Format::Json))?;
        args.output.emit(&text).map(|_| true)
    };
    match &cli.command {
        Command::Density(a) => config_cmd(a, |c, _, f| cmd_density(c, f)),
        Command::Frame(a) => config_cmd(a, cmd_frame),
        Command::Stft(a) => config_cmd(a, cmd_stft),
        Command::Norms(a) => config_cmd(a, cmd_norms),
        Command::Verify(a) => {
            let sizes = match a.sizes {
                SizesArg::Small => Sizes::Small,
                SizesArg::Full => Sizes::Full,
            };
            let (text, ok) =
                cmd_verify(&a.suite, a.primes.clone(), sizes, a.output.seed, a.output.format(Format::Table))?;
            a.output.emit(&text)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
