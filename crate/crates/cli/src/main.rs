use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod output;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "exord", version, about = "Expectile skewness, dispersion orders and scale-estimator efficiency")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Print numbers with 17 significant digits instead of 3 decimals.
    #[arg(long, global = true)]
    full: bool,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expectiles, quantiles, IER, IQR and MAD of a distribution.
    Eval {
        /// Distribution spec, e.g. `t(5)` or `2 + 3*lomax(3, 1)`.
        spec: String,
        /// Levels in (0, 1/2), comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 0.4])]
        alpha: Vec<f64>,
    },
    /// Skewness profile s̃₂(α), s₂(α) and its classification.
    Skew {
        spec: String,
        /// Levels in (0, 1/2); overrides --grid.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        /// Number of equispaced levels on [0.01, 0.49].
        #[arg(long, default_value_t = 49)]
        grid: usize,
    },
    /// Check a stochastic order X ≤ Y.
    Order {
        #[arg(value_enum)]
        order: commands::OrderName,
        x: String,
        y: String,
        /// Number of equispaced levels of the single-level grid.
        #[arg(long, default_value_t = 257)]
        grid: usize,
        /// Depth of the tail ladder 1e-3 .. 1e-k.
        #[arg(long, default_value_t = 12)]
        tail_decades: u32,
    },
    /// Standardized ASVs of nine scale estimators under t distributions.
    Table1,
    /// sARE against the most efficient estimator under t distributions.
    Table2,
    /// Standardized ASVs under standardized NIG distributions.
    Table3 {
        /// Interquantile column from the symmetric-law variance formula.
        #[arg(long)]
        symmetric_iqr: bool,
    },
    /// Efficiency of the IQR and IER relative to the SD under normality.
    NormalSare,
    /// IER curves and the e-dispersive composite for Lomax(3, √3) and Lomax(2, 1).
    LomaxCase {
        /// Points of the composite curve.
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
    /// τ²_Q and τ²_E under normality on [0.01, 0.49].
    Figure2 {
        #[arg(long, default_value_t = 97)]
        grid: usize,
    },
    /// Monte Carlo check of the IER central limit theorem.
    Clt {
        /// `key = value` config file; flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        /// ier, iqr, sd, mad or gini.
        #[arg(long)]
        estimator: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        replications: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also emit the per-replication estimates.
        #[arg(long)]
        estimates: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, cli.format, cli.full, cli.out.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
