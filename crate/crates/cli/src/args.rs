use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "statdisc",
    version,
    about = "Quantum-statistics state discrimination with beam splitters and multiports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsArg {
    Boson,
    Fermion,
}

impl From<StatisticsArg> for statdisc::Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Boson => statdisc::Statistics::Boson,
            StatisticsArg::Fermion => statdisc::Statistics::Fermion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InterpretationArg {
    /// At most one particle per internal state per arm.
    Standard,
    /// At most two particles per internal state per arm.
    Literal,
}

impl From<InterpretationArg> for statdisc::applications::ClassicalInterpretation {
    fn from(i: InterpretationArg) -> Self {
        use statdisc::applications::ClassicalInterpretation as C;
        match i {
            InterpretationArg::Standard => C::Standard,
            InterpretationArg::Literal => C::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pair {
    /// Aligned pair against anti-aligned pair (two qubits only).
    RhoSigma,
    /// Aligned N-tuple against N independent random spins.
    RhoTau,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute every reference probability and compare.
    Reproduce,
    /// Helstrom bound and beam-splitter strategy for one hypothesis pair.
    Discriminate(DiscriminateArgs),
    /// Beam-splitter vs Helstrom for aligned vs mixed, N = 1..n.
    Scan(ScanArgs),
    /// Two-copy entanglement test on sqrt(1-lambda)|00> + sqrt(lambda)|11>.
    Detect(DetectArgs),
    /// One round of symmetric-projection purification of a qubit.
    Purify(PurifyArgs),
    /// Classical exclusion-model counterpart of the aligned vs mixed task.
    Classical(ClassicalArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiscriminateArgs {
    #[arg(long, value_enum, default_value_t = Pair::RhoTau)]
    pub pair: Pair,

    /// Number of particles (rho-sigma requires 2).
    #[arg(long, default_value_t = 2)]
    pub n: usize,

    /// Omit to run both.
    #[arg(long, value_enum)]
    pub statistics: Option<StatisticsArg>,

    /// Prior of the aligned hypothesis; the other gets 1 - prior0.
    #[arg(long, default_value_t = 0.5)]
    pub prior0: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    /// Largest particle number.
    #[arg(long, default_value_t = 6)]
    pub n: usize,

    /// Omit to run both.
    #[arg(long, value_enum)]
    pub statistics: Option<StatisticsArg>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DetectArgs {
    /// Smaller Schmidt weight, in [0, 1/2].
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,

    #[arg(long, value_enum, default_value_t = StatisticsArg::Fermion)]
    pub statistics: StatisticsArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PurifyArgs {
    /// Bloch vector length, in [0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,

    /// Polar angle in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,

    /// Azimuthal angle in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassicalArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,

    #[arg(long, value_enum, default_value_t = InterpretationArg::Standard)]
    pub classical_interpretation: InterpretationArg,

    /// Estimate by Monte Carlo with this many draws per hypothesis
    /// instead of exact enumeration.
    #[arg(long)]
    pub samples: Option<usize>,
}
