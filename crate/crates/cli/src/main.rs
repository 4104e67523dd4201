//! `dexbound`: converse bounds, scenario generators and oracles for
//! data-exchange problems.
//!
//! Exit status: 0 success, 1 a reproduction criterion or I/O failed,
//! 2 invalid input, 3 oracle budget exhausted, 64 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "dexbound", version, about = "Converse bounds for data-exchange problems")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = dexbound::reproduce::DEFAULT_SEED)]
    pub seed: u64,
    /// Emit comparison rows as CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write the generated instance (scenario) or scheme (scheme, oracle) to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an instance file against the model invariants.
    Validate { instance: PathBuf },
    /// Lower bound on the communication load.
    Bound(BoundArgs),
    /// The n(p,q) table and the bound evaluated from it.
    Profile { instance: PathBuf },
    /// Generate a scenario instance and compare it with its closed form.
    Scenario {
        #[command(subcommand)]
        kind: ScenarioKind,
    },
    /// Generalized independence number with a maximizing client order.
    Alpha { instance: PathBuf },
    /// Symmetric side-information test for unicast instances.
    Tightness { instance: PathBuf },
    /// Clique-cover scheme and its decoding check.
    Scheme {
        instance: PathBuf,
        /// Random trials for the decoding check.
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Exhaustive search for the optimal binary linear scheme.
    Oracle(OracleArgs),
    /// Run the acceptance matrix.
    Reproduce {
        #[arg(value_parser = ["all"])]
        target: String,
    },
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    pub instance: PathBuf,
    /// Server-based bound (instance must be centralized).
    #[arg(long)]
    pub centralized: bool,
    /// Evaluate from the n(p,q) table.
    #[arg(long)]
    pub profile: bool,
    /// Bound for one client order, e.g. `2,1,3` (centralized instances).
    #[arg(long, value_delimiter = ',')]
    pub permutation: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// Largest total load to search.
    #[arg(long)]
    pub max_load: Option<usize>,
    /// Time budget in seconds.
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long)]
    pub max_bits: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ScenarioKind {
    /// Server-based caching, symmetric placement, cyclic demands.
    Caching {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Cache size in files (integer or fraction).
        #[arg(long)]
        m: String,
        #[arg(long)]
        f: u64,
        /// One demand vector instead of the cyclic family, e.g. `1,1`.
        #[arg(long)]
        demand: Option<String>,
    },
    /// Heterogeneous cache sizes with windowed placement.
    Hetero {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: u64,
        /// Groups as `size:fraction`, e.g. `2:1/2,1:1/4`.
        #[arg(long)]
        groups: String,
        /// No server: clients serve each other.
        #[arg(long)]
        no_server: bool,
    },
    /// Several requests per client.
    Multireq {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: String,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        delta: usize,
    },
    /// Independent random caching of an M/N fraction of every file.
    Decentralized {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: String,
        #[arg(long)]
        f: u64,
        /// Sample placements with `--seed` instead of exact masses.
        #[arg(long)]
        sampled: bool,
    },
    /// Data shuffling, averaged over the cyclic shuffles.
    Shuffling {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
        /// Storage per worker, in units.
        #[arg(long)]
        m: usize,
        /// Bits per unit.
        #[arg(long, default_value_t = 1)]
        unit: u64,
        /// Random storage drawn with `--seed` instead of the symmetric one.
        #[arg(long)]
        random: bool,
    },
    /// Coded distributed computing with a cyclic map assignment.
    Cdc {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Nodes mapping each file.
        #[arg(long)]
        r: usize,
        #[arg(long)]
        w: u64,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, default_value_t = 1)]
        s: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
