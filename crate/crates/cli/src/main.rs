use std::path::PathBuf;
use std::process::ExitCode;

use baker_kit_cli::commands::{self, Output, Precision, SearchArgs};
use baker_kit_cli::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "baker-kit",
    version,
    about = "Certified solver for N_m = F_n F_k"
)]
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
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
}

#[derive(Args)]
struct PrecisionArgs {
    /// Starting working precision in bits.
    #[arg(long, env = "BAKER_KIT_PRECISION", default_value_t = 192,
          value_parser = clap::value_parser!(u32).range(8..=1 << 20))]
    precision: u32,
    /// Doubling stops here.
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(8..=1 << 20))]
    precision_cap: u32,
}

impl PrecisionArgs {
    fn get(&self) -> Precision {
        Precision {
            precision: self.precision,
            precision_cap: self.precision_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full proof and emit the certificate.
    Prove {
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive search for N_m = F_n F_k with n <= k.
    Search {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k_max: u64,
        /// Only n = k.
        #[arg(long)]
        squares_only: bool,
        /// Also list (m, k, n) for every (m, n, k) with n != k.
        #[arg(long)]
        both_orders: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Continued fraction of `tau` (or another named constant) or a spec file.
    Cf {
        #[arg(long)]
        value: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        terms: u64,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dujella-Petho reduction on an instance file.
    Reduce {
        instance: PathBuf,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certified enclosures of the constants.
    Constants {
        #[arg(long, env = "BAKER_KIT_PRECISION", default_value_t = 192,
              value_parser = clap::value_parser!(u32).range(8..=1 << 20))]
        precision: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn run(cli: Cli) -> Result<(Output, OutputArgs), CliError> {
    Ok(match cli.command {
        Command::Prove { precision, output } => (commands::prove(precision.get()), output),
        Command::Search {
            m_max,
            n_max,
            k_max,
            squares_only,
            both_orders,
            output,
        } => (
            commands::search(SearchArgs {
                m_max,
                n_max,
                k_max,
                squares_only,
                both_orders,
            })?,
            output,
        ),
        Command::Cf {
            value,
            terms,
            precision,
            output,
        } => (
            commands::cf(&value, terms as usize, precision.get())?,
            output,
        ),
        Command::Reduce {
            instance,
            precision,
            output,
        } => (commands::reduce(&instance, precision.get())?, output),
        Command::Constants { precision, output } => (commands::constants(precision)?, output),
    })
}

fn emit(out: &Output, args: &OutputArgs) -> Result<(), CliError> {
    let mut rendered = match args.format {
        Format::Json => out.doc.to_json(),
        Format::Text => out.text.clone(),
    };
    if !rendered.ends_with('\n') {
        rendered.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(out, args)| {
        emit(&out, &args)?;
        Ok(out.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("baker-kit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
