use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pxp_cli::{
    independence_max, independence_strong, independence_weak, lattice, levelstats, neumann,
    relations, sectors, sectors_csv, site_limit, to_json, CliError, CliResult, MAX_N_VAR,
};
use pxp_core::spectral::{LevelStatOptions, Parity};
use pxp_core::Boundary;

#[derive(Parser, Debug)]
#[command(name = "pxp", version, about = "PXP chain sectors, integrals of motion and level statistics")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Weak,
    Strong,
    Max,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Attainable signatures and their sector dimensions.
    Sectors {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "periodic")]
        bc: Boundary,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Weak or strong independence of a subset, or the largest strongly
    /// independent subset.
    Independence {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "periodic")]
        bc: Boundary,
        /// Comma separated 1-based indices; all integrals if omitted.
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Polynomial relations among consecutive integrals.
    Relations {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "periodic")]
        bc: Boundary,
        /// Window length; one subset per starting position.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        degree: usize,
    },
    /// Gap-ratio statistics of one symmetry block.
    Levelstats {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value = "even")]
        parity: Parity,
        #[arg(long, default_value_t = 0.05)]
        trim: f64,
        #[arg(long, default_value_t = 1e-10)]
        zero_cutoff: f64,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Signature string, site 1 first; the zero signature if omitted.
        #[arg(long)]
        signature: Option<String>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Writes one integral as a polynomial in a nondegenerate diagonal operator.
    Neumann {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: usize,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let limit = site_limit(std::env::var(MAX_N_VAR).ok().as_deref())?;

    match cli.command {
        Command::Sectors { n, bc, format } => {
            let report = sectors(&lattice(n, bc, limit)?)?;
            match format {
                Format::Json => to_json(&report),
                Format::Csv => sectors_csv(&report),
            }
        }
        Command::Independence { n, bc, subset, mode } => {
            let spec = lattice(n, bc, limit)?;
            match mode {
                Mode::Weak => to_json(&independence_weak(&spec, subset.as_deref())?),
                Mode::Strong => to_json(&independence_strong(&spec, subset.as_deref())?),
                Mode::Max => {
                    if subset.is_some() {
                        return Err(CliError::Usage("--mode max takes no --subset".into()));
                    }
                    to_json(&independence_max(&spec)?)
                }
            }
        }
        Command::Relations { n, bc, window, subset, degree } => {
            let spec = lattice(n, bc, limit)?;
            to_json(&relations(&spec, window, subset.as_deref(), degree)?)
        }
        Command::Levelstats {
            n,
            k,
            parity,
            trim,
            zero_cutoff,
            bins,
            signature,
            out_dir,
        } => {
            let spec = lattice(n, Boundary::Periodic, limit)?;
            let opts = LevelStatOptions { trim, zero_cutoff, bins };
            let out = levelstats(&spec, signature.as_deref(), k, parity, &opts, &out_dir)?;
            out.write_files()?;
            to_json(&out.summary)
        }
        Command::Neumann { n, target } => {
            let spec = lattice(n, Boundary::Periodic, limit)?;
            to_json(&neumann(&spec, target, cli.seed)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if out.ends_with('\n') {
                print!("{out}");
            } else {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
