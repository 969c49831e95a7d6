use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersym::experiments::DEFAULT_SEED;
use hypersym::group::DEFAULT_MINDEG_CAP;
use hypersym::hypergraph::AutConfig;
use hypersym::kset::DEFAULT_KSET_CAP;

const AFTER_HELP: &str = "\
Groups are given by catalog name (see `catalog dump`) or as generators in
cycle notation separated by ';', e.g. \"(1 2 3 4 5);(2 5)(3 4)\".
Points are numbered from 1 unless --zero-based is given. Hypergraph files
always number vertices from 0.

Exit status: 0 on success, 1 on invalid input or usage, 2 when a resource
cap is exceeded.";

#[derive(Debug, Parser)]
#[command(name = "hypersym", version, about = "Permutation groups, orbit hypergraphs and their automorphisms", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Worker threads for experiments (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Master seed for Monte Carlo experiments.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Include wall-clock runtime in experiment reports.
    #[arg(long, global = true)]
    pub timing: bool,

    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true, env = "HYPERSYM_CATALOG")]
    pub catalog: Option<PathBuf>,

    /// Read and print points numbered from 0.
    #[arg(long, global = true)]
    pub zero_based: bool,

    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Debug, Args)]
pub struct Caps {
    /// Largest degree accepted by automorphism searches.
    #[arg(long, global = true, default_value_t = AutConfig::default().max_degree)]
    pub max_degree: usize,

    /// Largest edge count accepted by automorphism searches.
    #[arg(long, global = true, default_value_t = AutConfig::default().max_edges)]
    pub max_edges: usize,

    /// Search-tree nodes allowed per automorphism search.
    #[arg(long, global = true, default_value_t = AutConfig::default().max_nodes)]
    pub max_nodes: u64,

    /// Largest number of k-sets enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_KSET_CAP)]
    pub kset_cap: u64,

    /// Work allowed for the minimal-degree computation.
    #[arg(long, global = true, default_value_t = DEFAULT_MINDEG_CAP)]
    pub mindeg_cap: u64,
}

impl Caps {
    pub fn aut(&self) -> AutConfig {
        AutConfig {
            max_degree: self.max_degree,
            max_edges: self.max_edges,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// Catalog name or generator string.
    pub group: String,

    /// Degree for a generator string (default: largest point mentioned).
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Each point independently with probability 1/2.
    AllSubsets,
    /// Uniform k-subset (needs --k).
    KUniform,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group structure queries.
    #[command(subcommand)]
    Group(GroupCommand),

    /// Orbits on points, or on k-sets with --k.
    Orbits {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        k: Option<usize>,
    },

    /// Setwise stabilizer of a point set.
    Stab {
        #[command(flatten)]
        group: GroupArg,
        /// Points separated by commas, e.g. 1,2,4.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
    },

    /// Automorphism group of a hypergraph file.
    Aut {
        #[arg(long)]
        file: PathBuf,
        /// The file is a balanced transversal hypergraph.
        #[arg(long)]
        transversal: bool,
    },

    /// Monte Carlo: how often Aut(Y^G) equals G for random Y.
    Rigidity {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = ModelArg::AllSubsets)]
        model: ModelArg,
        #[arg(long)]
        k: Option<usize>,
        /// Failures kept in the report.
        #[arg(long, default_value_t = hypersym::experiments::DEFAULT_FAILURE_LOG)]
        failure_log: usize,
    },

    /// Probability that a random t-uniform hypergraph is not rigid.
    Asymmetry {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Enumerate every hypergraph instead of sampling.
        #[arg(long)]
        exact: bool,
    },

    /// Probability that a random balanced transversal hypergraph is not rigid.
    TransversalAsymmetry {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        exact: bool,
    },

    /// Classify catalog groups as set-transitive, witnessed, or exception candidates.
    Exceptions {
        #[arg(long, default_value_t = 9)]
        degree_max: usize,
    },

    /// Automorphism groups of all unions of k-set orbits.
    Lattice {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        k: usize,
    },

    /// Smallest k with a single k-set orbit whose automorphism group is G.
    Minedge {
        #[command(flatten)]
        group: GroupArg,
        /// Largest k tried (default n/2).
        #[arg(long)]
        kmax: Option<usize>,
    },

    /// Evaluate the counting bounds.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Also bound Prob(M_Y != 1) for this group and random k-sets (needs --k).
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },

    /// Catalog operations.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Order, transitivity, primitivity, homogeneity and minimal degree.
    Info {
        #[command(flatten)]
        group: GroupArg,
        /// Largest k for the homogeneity scan.
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// Print every catalog entry.
    Dump,
}
