mod commands;
mod document;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

/// Exact corona limits of periodic tilings.
#[derive(Parser, Debug)]
#[command(name = "corona", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in tilings.
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Check a tiling for area balance, simplicity and overlaps.
    Validate {
        #[command(flatten)]
        tiling: TilingArg,
    },
    /// Compute and certify the corona limit.
    Limit {
        #[command(flatten)]
        tiling: TilingArg,
        #[command(flatten)]
        adjacency: AdjacencyArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Grow coronas and report their size and radius brackets.
    Grow {
        #[command(flatten)]
        tiling: TilingArg,
        #[command(flatten)]
        adjacency: AdjacencyArg,
        #[arg(long)]
        steps: usize,
        /// Write an SVG of the shells, coloured by corona index.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Seed tile as `prototile,a,b`; defaults to a tile containing the origin.
        #[arg(long)]
        seed_cell: Option<String>,
    },
    /// Estimate the growth speed along a direction and compare with the limit.
    Speed {
        #[command(flatten)]
        tiling: TilingArg,
        #[command(flatten)]
        adjacency: AdjacencyArg,
        #[arg(long)]
        steps: usize,
        /// Direction as `x,y` integers or an exact point `[x, y]`.
        #[arg(long, default_value = "1,0")]
        direction: String,
        #[arg(long)]
        seed_cell: Option<String>,
    },
    /// Compare grown coronas against the exact limit and cross-check both
    /// velocity enumerations.
    Verify {
        #[command(flatten)]
        tiling: TilingArg,
        #[command(flatten)]
        adjacency: AdjacencyArg,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Size of the direction fan (a multiple of 4); limit vertex directions are added.
        #[arg(long, default_value_t = 64)]
        directions: usize,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Render a tiling, its coronas or its velocities as SVG.
    Render {
        #[command(flatten)]
        tiling: TilingArg,
        #[arg(long, value_enum, default_value_t = AdjacencyChoice::Point)]
        adjacency: AdjacencyChoice,
        #[arg(long, value_enum)]
        what: RenderWhat,
        #[arg(long)]
        out: PathBuf,
        /// Number of coronas for `--what coronas`.
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
}

#[derive(Args, Debug)]
struct TilingArg {
    /// A tiling file, or `catalog:KEY`.
    #[arg(long)]
    tiling: String,
}

#[derive(Args, Debug)]
struct AdjacencyArg {
    #[arg(long, value_enum)]
    adjacency: AdjacencyChoice,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacencyChoice {
    Point,
    Edge,
    /// The star given in the tiling file.
    Custom,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ListFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderWhat {
    Tiling,
    Coronas,
    Velocities,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CORONA_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("CORONA_THREADS must be a nonnegative integer, got `{value}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::List { format } => commands::list(format),
        Command::Validate { tiling } => commands::validate(&tiling.tiling),
        Command::Limit {
            tiling,
            adjacency,
            out,
            format,
        } => commands::limit(&tiling.tiling, adjacency.adjacency, out.as_deref(), format),
        Command::Grow {
            tiling,
            adjacency,
            steps,
            svg,
            seed_cell,
        } => commands::grow(&tiling.tiling, adjacency.adjacency, steps, svg.as_deref(), seed_cell.as_deref()),
        Command::Speed {
            tiling,
            adjacency,
            steps,
            direction,
            seed_cell,
        } => commands::speed(&tiling.tiling, adjacency.adjacency, steps, &direction, seed_cell.as_deref()),
        Command::Verify {
            tiling,
            adjacency,
            steps,
            directions,
            seeds,
        } => commands::verify(&tiling.tiling, adjacency.adjacency, steps, directions, seeds),
        Command::Render {
            tiling,
            adjacency,
            what,
            out,
            steps,
        } => commands::render(&tiling.tiling, adjacency, what, &out, steps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
