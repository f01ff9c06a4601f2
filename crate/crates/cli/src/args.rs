use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use opaque_sat::{Beta, Variable};

#[derive(Debug, Parser)]
#[command(name = "opaque-sat", version, about = "Unit propagation, strong backdoors and backbones")]
pub struct Cli {
    /// Machine-readable JSON instead of the human-readable report.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide satisfiability of a DIMACS or grammar file.
    Solve(SolveArgs),
    /// Strong backdoors with respect to unit propagation.
    #[command(subcommand)]
    Backdoor(BackdoorCommand),
    /// Backbones and the backbone-size predicates.
    #[command(subcommand)]
    Backbone(BackboneCommand),
    /// Generate padded, reduced or random formulas.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Test membership in a padded family.
    #[command(subcommand)]
    Recognize(RecognizeCommand),
    /// Compare structural backdoor extraction with blind search on padded instances.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Formula file, DIMACS or grammar; `-` reads standard input.
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Decide by exhaustive enumeration.
    #[arg(long, conflicts_with = "up")]
    pub oracle: bool,
    /// Run only the unit-propagation subsolver, which may reject.
    #[arg(long)]
    pub up: bool,
    /// Print each propagation step (with --up).
    #[arg(long, requires = "up")]
    pub trace: bool,
    #[command(flatten)]
    pub input: Input,
}

#[derive(Debug, Args)]
pub struct VariableSet {
    /// Comma-separated variables, e.g. `x1,x3,x5` or `1,3,5`.
    #[arg(short = 'S', long = "set", value_delimiter = ',', num_args = 1)]
    pub vars: Vec<Variable>,
}

#[derive(Debug, Subcommand)]
pub enum BackdoorCommand {
    /// Check every branch over S; prints the certificate or the first failure.
    Verify {
        #[command(flatten)]
        set: VariableSet,
        #[command(flatten)]
        input: Input,
    },
    /// Search for a smallest strong backdoor.
    Find {
        /// Largest subset size tried; defaults to all variables.
        #[arg(long)]
        cap: Option<usize>,
        /// Give up after this many milliseconds.
        #[arg(long)]
        timeout_ms: Option<u64>,
        #[command(flatten)]
        input: Input,
    },
    /// Decide the formula by branching on S and running the subsolver.
    Solve {
        #[command(flatten)]
        set: VariableSet,
        #[command(flatten)]
        input: Input,
    },
    /// Try every variable subset of size at most k as a backdoor.
    Bounded {
        #[arg(short = 'k', long = "k")]
        k: usize,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
pub enum BackboneCommand {
    /// Variables fixed across all models, with their values.
    Report(Input),
    /// Whether S is a backbone; omit -S for the empty set.
    Check {
        #[command(flatten)]
        set: VariableSet,
        #[command(flatten)]
        input: Input,
    },
    /// Whether a backbone covers at least a beta fraction of the variables.
    Large {
        #[arg(long)]
        beta: Beta,
        #[command(flatten)]
        input: Input,
    },
    /// Whether a nonempty backbone exists.
    Nontrivial(Input),
}

#[derive(Debug, Args)]
pub struct OutputPath {
    /// Write the formula here instead of standard output.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Add |V|^k − |V| fresh positive unit clauses to a CNF formula.
    PadBackdoor {
        #[arg(short = 'k', long = "k")]
        k: u32,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: OutputPath,
    },
    /// Conjoin q(G) fresh positive atoms to a formula.
    PadBackbone {
        #[arg(long)]
        beta: Beta,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: OutputPath,
    },
    /// Map a formula to one with a large backbone exactly when it is satisfiable.
    Reduce {
        #[arg(long)]
        beta: Beta,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: OutputPath,
    },
    /// Run an external reduction on the input and pad its output.
    #[command(group(ArgGroup::new("family").required(true).args(["k", "beta"])))]
    Compose {
        /// Program receiving the input on stdin and printing a formula.
        #[arg(long)]
        hook: PathBuf,
        /// Argument passed to the hook; repeatable.
        #[arg(long = "hook-arg", allow_hyphen_values = true)]
        hook_args: Vec<String>,
        /// Pad into the backdoor family with this exponent.
        #[arg(short = 'k', long = "k")]
        k: Option<u32>,
        /// Pad into the backbone family with this threshold.
        #[arg(long)]
        beta: Option<Beta>,
        /// Input handed to the hook; `-` reads standard input.
        file: PathBuf,
        #[command(flatten)]
        out: OutputPath,
    },
    /// Seeded uniform random CNF.
    Random {
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutputPath,
    },
}

#[derive(Debug, Subcommand)]
pub enum RecognizeCommand {
    /// Membership in the backdoor family for exponent k.
    Backdoor {
        #[arg(short = 'k', long = "k")]
        k: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Membership in the backbone family for threshold beta.
    Backbone {
        #[arg(long)]
        beta: Beta,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub base_vars: u32,
    #[arg(long)]
    pub base_clauses: usize,
    #[arg(long, default_value_t = 3)]
    pub width: usize,
    #[arg(short = 'k', long = "k")]
    pub k: u32,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    /// Largest subset size tried by the blind search.
    #[arg(long)]
    pub search_cap: usize,
    #[arg(long)]
    pub search_timeout_ms: Option<u64>,
    /// Leave timing columns empty so output is byte-for-byte reproducible.
    #[arg(long)]
    pub no_timings: bool,
    /// CSV output (the default unless --json is given).
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
}
