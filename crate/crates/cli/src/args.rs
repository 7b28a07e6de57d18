use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Randomized property testers for Boolean functions.
///
/// Exit status: 0 for a `yes` verdict or success, 1 for a `no` verdict or a
/// witness that fails to verify, 2 for usage errors.
#[derive(Debug, Parser)]
#[command(name = "qsym", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a tester once, or `--trials` times with aggregate statistics.
    Test {
        #[arg(value_enum)]
        tester: TestName,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Quasi-symmetry only: redraw the fixed values for every constancy
        /// probe of the dependency estimate.
        #[arg(long)]
        resample_per_step: bool,
    },
    /// Estimate the set of arguments the function depends on.
    Estimate {
        #[arg(value_enum)]
        what: EstimateName,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Redraw the fixed values for every constancy probe.
        #[arg(long)]
        resample_per_step: bool,
    },
    /// Exact distance to a function class (exponential time).
    Distance {
        #[arg(value_enum)]
        class: ClassName,
        #[command(flatten)]
        source: SourceArgs,
        /// `junta` only: the allowed arguments, comma-separated from 1.
        #[arg(long = "junta-args", value_name = "LIST")]
        junta_args: Option<String>,
    },
    /// Re-check a witness against the function with fresh queries.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        /// JSON file holding a witness, a verdict or an estimate (`-` for
        /// standard input).
        #[arg(long, value_name = "FILE")]
        witness: PathBuf,
    },
    /// Time repeated runs of a tester.
    Bench {
        #[arg(value_enum)]
        tester: TestName,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        resample_per_step: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestName {
    Sym,
    Const,
    Qsym,
    /// A single symmetry probe (no eps/delta).
    SymStep,
    /// A single constancy probe (no eps/delta).
    ConstStep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimateName {
    Deps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassName {
    Sym,
    Const,
    Junta,
    Qsym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Const,
    Dictator,
    Parity,
    Majority,
    Threshold,
    RandomTable,
    SymJunta,
    Perturbed,
}

/// Where the function comes from: a table file, a family, or a JSON spec.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Truth-table file (`n=<arity>` line, then hex digits); `-` for stdin.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "spec"])]
    pub table: Option<PathBuf>,

    /// A function family; see the family flags below.
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub family: Option<Family>,

    /// A function spec as JSON, e.g. '{"family":"parity","n":5}'.
    #[arg(long, value_name = "JSON")]
    pub spec: Option<String>,

    /// Arity.
    #[arg(long)]
    pub n: Option<usize>,

    /// dictator: the argument (from 1).
    #[arg(long)]
    pub index: Option<usize>,

    /// const: the value, 0 or 1.
    #[arg(long)]
    pub value: Option<u8>,

    /// threshold: minimum number of ones.
    #[arg(long)]
    pub t: Option<usize>,

    /// sym-junta: the relevant arguments, comma-separated from 1.
    #[arg(long, value_name = "LIST")]
    pub args: Option<String>,

    /// sym-junta: output per weight on the relevant arguments, as a
    /// bitstring of length |args|+1.
    #[arg(long, value_name = "BITS")]
    pub levels: Option<String>,

    /// perturbed: the family being perturbed (takes the same flags).
    #[arg(long, value_enum)]
    pub base: Option<Family>,

    /// perturbed: number of table entries to flip.
    #[arg(long)]
    pub flips: Option<u64>,

    /// random-table / perturbed: seed of the generated content.
    #[arg(long, default_value_t = 0)]
    pub family_seed: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Root seed of the random source.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repeat the run and report aggregate statistics.
    #[arg(long)]
    pub trials: Option<u64>,
}
