mod batch;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const HELP_NOTES: &str = "\
Polarizations are comma lists of coefficients in the standard basis.
  p2      H = a*l                            e.g. --h 1
  p1xp1   H = a*f1 + b*f2                    e.g. --h 2,3
  x3, x4  H = a*l + b1*e1 + b2*e2 + ...      e.g. --h 3,-1,-1,-1

On the blow-ups the exceptional coefficients of an ample H are NEGATIVE
(every b_i <= -1, and a + b_i + b_j >= 1). Entering the positive values
3,1,1,1 describes a different, non-ample class and is rejected.

Exit status: 0 on success, 2 on invalid input, 3 on overflow or an internal
consistency failure. Diagnostics go to stderr only.";

#[derive(Parser)]
#[command(
    name = "ulrich",
    version,
    about = "Dimension-vector bounds for Ulrich bundles on del Pezzo surfaces",
    after_help = HELP_NOTES
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether H is ample (equivalently very ample here).
    #[command(after_help = HELP_NOTES)]
    Ample {
        #[command(flatten)]
        polarization: Polarization,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Euler characteristic of the line bundle O(D).
    Chi(#[command(flatten)] Polarization),
    /// Euler form <alpha, beta> of a quiver.
    Euler {
        #[command(flatten)]
        quiver: QuiverArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Diagram type of a quiver, or the root class of dimension vectors.
    Roots {
        #[command(flatten)]
        quiver: QuiverArg,
        /// A dimension vector; repeat to classify several.
        #[arg(long = "d", allow_hyphen_values = true)]
        vectors: Vec<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Finiteness certificate of the constraint system for H.
    #[command(after_help = HELP_NOTES)]
    Certify {
        #[command(flatten)]
        polarization: Polarization,
        /// Build the system even when H is not ample.
        #[arg(long)]
        allow_non_ample: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Candidate dimension vectors of one rank and Tits target.
    #[command(after_help = HELP_NOTES)]
    Enumerate {
        #[command(flatten)]
        polarization: Polarization,
        #[arg(long, default_value_t = 1)]
        rank: i64,
        #[arg(long, default_value = "1", value_parser = parse_tits)]
        tits: String,
        /// Box bound [0, bound] per coordinate. Negative targets default to 10;
        /// targets 0 and 1 are enumerated completely when the certificate is
        /// positive definite and in the box [0, 10] otherwise.
        #[arg(long)]
        bound: Option<i64>,
        #[command(flatten)]
        jobs: JobsArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Trichotomy report over ranks 1..=rank-max.
    #[command(after_help = HELP_NOTES)]
    Classify {
        #[command(flatten)]
        polarization: Polarization,
        #[arg(long, default_value_t = 4)]
        rank_max: i64,
        /// Box bound for the negative-Tits search.
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[command(flatten)]
        jobs: JobsArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Check the diagonalizing change of variables on x3 or x4.
    #[command(after_help = HELP_NOTES)]
    VerifyProps {
        #[command(flatten)]
        polarization: Polarization,
        /// A rational vector with rank form zero, e.g. 1/2,0,0,1/4,0.
        /// Without it every hyperplane basis vector is checked.
        #[arg(long = "v", allow_hyphen_values = true)]
        vector: Option<String>,
    },
    /// Cross-check the enumerator against the brute-force oracle.
    #[command(after_help = HELP_NOTES)]
    Verify {
        #[command(flatten)]
        polarization: Polarization,
        #[arg(long, default_value_t = 1)]
        rank: i64,
        #[arg(long, default_value = "1", value_parser = parse_tits)]
        tits: String,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[command(flatten)]
        jobs: JobsArg,
    },
    /// Run a JSON array of classify requests.
    #[command(after_help = HELP_NOTES)]
    Batch {
        file: PathBuf,
        #[command(flatten)]
        jobs: JobsArg,
    },
}

#[derive(Args)]
struct Polarization {
    /// p2, p1xp1, x3 or x4 (x1..x8 for lattice queries).
    #[arg(long)]
    surface: String,
    /// Comma list of coefficients; exceptional coefficients of an ample H are negative.
    #[arg(long = "h", allow_hyphen_values = true)]
    h: String,
}

#[derive(Args)]
struct QuiverArg {
    /// Catalog name (k3, s4, k32, k51) or a JSON file {"vertices": n, "arrows": [[s, t], ...]}.
    #[arg(long)]
    quiver: String,
}

#[derive(Args)]
struct JobsArg {
    /// Worker threads for enumeration. Output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Table,
}

fn parse_tits(s: &str) -> Result<String, String> {
    match s {
        "neg" | "0" | "1" => Ok(s.to_string()),
        _ => Err("expected neg, 0 or 1".into()),
    }
}

fn run(cli: Cli) -> anyhow::Result<String> {
    match cli.command {
        Command::Ample { polarization, format } => commands::ample(&polarization, format.format),
        Command::Chi(p) => commands::chi(&p),
        Command::Euler { quiver, alpha, beta } => commands::euler(&quiver, &alpha, &beta),
        Command::Roots {
            quiver,
            vectors,
            format,
        } => commands::roots(&quiver, &vectors, format.format),
        Command::Certify {
            polarization,
            allow_non_ample,
            format,
        } => commands::certify(&polarization, allow_non_ample, format.format),
        Command::Enumerate {
            polarization,
            rank,
            tits,
            bound,
            jobs,
            format,
        } => commands::enumerate(&polarization, rank, &tits, bound, jobs.jobs.into(), format.format),
        Command::Classify {
            polarization,
            rank_max,
            bound,
            jobs,
            format,
        } => commands::classify(&polarization, rank_max, bound, jobs.jobs.into(), format.format),
        Command::VerifyProps { polarization, vector } => commands::verify_props(&polarization, vector.as_deref()),
        Command::Verify {
            polarization,
            rank,
            tits,
            bound,
            jobs,
        } => commands::verify(&polarization, rank, &tits, bound, jobs.jobs.into()),
        Command::Batch { file, jobs } => batch::run(&file, jobs.jobs.into()),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let internal = e
        .chain()
        .filter_map(|c| c.downcast_ref::<ulrich_core::Error>())
        .any(ulrich_core::Error::is_internal);
    if internal {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Output is assembled in full before anything is written, so a failure
    // never leaves a partial result on stdout.
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
