mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{Input, Orders};

/// Discrete Morse theory on simplicial complexes given as facet lists.
///
/// Exit status is 0 whenever a command computes an answer, including negative
/// verdicts. Input, parse and internal errors exit nonzero.
#[derive(Parser, Debug)]
#[command(name = "morsekit", version, about, long_about)]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled elimination orders.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Upper bound on the number of elimination orders to try.
    #[arg(long, global = true, default_value_t = 40320)]
    max_orders: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers and torsion.
    Homology { complex: PathBuf },
    /// Validate a matching and build its Thom-Smale complex.
    Morse(MorseArgs),
    /// Reduce the simplicial chain complex by Gaussian elimination along a matching.
    Reduce(ReduceArgs),
    /// Complete matchings, Euler chains and their homology classes.
    Euler(EulerArgs),
    /// First barycentric subdivision.
    Subdivide {
        complex: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Staircase triangulation of the product of two simplices.
    Product {
        m: usize,
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct MorseArgs {
    complex: PathBuf,
    /// Matching file, one "σ ; τ" pair per line.
    #[arg(required_unless_present = "greedy", conflicts_with = "greedy")]
    matching: Option<PathBuf>,
    /// Use the greedy Morse matching instead of a file.
    #[arg(long)]
    greedy: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    complex: PathBuf,
    matching: PathBuf,
    /// Elimination order as a matching file. Defaults to the listed order.
    #[arg(long, conflicts_with = "all_orders")]
    order: Option<PathBuf>,
    /// Try every order, or a seeded sample beyond --max-orders.
    #[arg(long)]
    all_orders: bool,
}

#[derive(Args, Debug)]
struct EulerArgs {
    complex: PathBuf,
    /// Complete matching file.
    #[arg(required_unless_present = "find_complete", conflicts_with = "find_complete")]
    matching: Option<PathBuf>,
    /// Search for a complete matching.
    #[arg(long)]
    find_complete: bool,
    /// Euler chain file ("from ; to" per line) to compare against.
    #[arg(long)]
    compare: Option<PathBuf>,
}

fn read_opt(path: &Option<PathBuf>) -> Result<Option<Input>> {
    path.as_deref().map(Input::read).transpose()
}

fn run(cli: &Cli) -> Result<report::Report> {
    match &cli.command {
        Command::Homology { complex } => commands::homology_cmd(&Input::read(complex)?),
        Command::Morse(a) => commands::morse_cmd(&Input::read(&a.complex)?, read_opt(&a.matching)?.as_ref()),
        Command::Reduce(a) => {
            let opts = Orders { seed: cli.seed, max_orders: cli.max_orders };
            commands::reduce_cmd(
                &Input::read(&a.complex)?,
                &Input::read(&a.matching)?,
                read_opt(&a.order)?.as_ref(),
                a.all_orders,
                &opts,
            )
        }
        Command::Euler(a) => commands::euler_cmd(
            &Input::read(&a.complex)?,
            read_opt(&a.matching)?.as_ref(),
            read_opt(&a.compare)?.as_ref(),
        ),
        Command::Subdivide { complex, output } => commands::subdivide_cmd(&Input::read(complex)?, output.as_deref()),
        Command::Product { m, n, output } => commands::product_cmd(*m, *n, output.as_deref()),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let report = run(&cli)?;
    std::io::stdout().write_all(report.render(cli.json).as_bytes())?;
    Ok(())
}
