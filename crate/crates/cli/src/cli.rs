use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact p-adic computations for Sen operators, divided-power series and the
/// twisted cyclotomic action. JSON arguments take a file path or inline JSON.
#[derive(Parser, Debug)]
#[command(name = "senlab", version)]
pub struct Cli {
    /// Working precision; overrides per-object settings and SENLAB_PREC.
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// Truncation for divided-power series; overrides per-object settings.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run the data-parallel loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scalars in Q_p.
    #[command(subcommand)]
    Padic(PadicCmd),
    /// Local fields given by an unramified and an Eisenstein polynomial.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Truncated divided-power series.
    #[command(subcommand)]
    Dps(DpsCmd),
    /// Sen modules: classifier, weights, cohomology, operator series.
    #[command(subcommand)]
    Senmod(SenmodCmd),
    /// Finite-level model of the twisted cyclotomic action.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// The trace boundary map into Q_p/Z_p.
    #[command(subcommand)]
    Picard(PicardCmd),
    /// Run acceptance criteria: all, dps, senmod, gamma, picard, log, or a number.
    Accept {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Where to take the field from when an argument needs one.
#[derive(Args, Debug, Clone)]
pub struct FieldArg {
    /// Field spec (file or inline JSON).
    #[arg(long)]
    pub field: Option<String>,
    /// Use Q_p for this prime when no field spec is given.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum PadicCmd {
    Arith {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        p: Option<u64>,
    },
    Exp {
        #[arg(long)]
        x: String,
        #[arg(long)]
        p: Option<u64>,
    },
    Log {
        #[arg(long)]
        x: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Newton polygon of a monic polynomial {"coeffs": [scalar, ...]}.
    Newton {
        #[arg(long)]
        poly: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// Validate a presentation and report its invariants.
    Info {
        #[command(flatten)]
        field: FieldArg,
    },
    Arith {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Valuation, trace, residue and integrality of an element.
    Elem {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        elem: String,
    },
    Log {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        elem: String,
    },
    Exp {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        elem: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Direction {
    ToGsharp,
    FromGsharp,
}

#[derive(Subcommand, Debug)]
pub enum DpsCmd {
    Mul {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Apply the Sen operator.
    Theta {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
    },
    /// Solve Θ f = g with f(0) = 0.
    SolveTheta {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        g: String,
    },
    /// (1/e) log(1 + e a); e defaults to the field's different.
    LogT {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        e: Option<String>,
    },
    Coaction {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        b: String,
    },
    Transport {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
        #[arg(long, value_enum)]
        direction: Direction,
    },
}

#[derive(Args, Debug)]
pub struct ModuleArg {
    #[command(flatten)]
    pub field: FieldArg,
    /// Module {"theta": [[element, ...], ...], "e"?: element}.
    #[arg(long)]
    pub theta: String,
}

#[derive(Subcommand, Debug)]
pub enum SenmodCmd {
    NearlyHt {
        #[command(flatten)]
        module: ModuleArg,
    },
    Weights {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, allow_hyphen_values = true)]
        min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        max: Option<i64>,
    },
    Cohomology {
        #[command(flatten)]
        module: ModuleArg,
    },
    /// (1 + e b)^(Θ/e).
    OperatorSeries {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long)]
        b: String,
    },
    /// χ^(Θ/e) for a cyclotomic character value.
    Descent {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long)]
        chi: String,
    },
}

#[derive(Args, Debug)]
pub struct LevelArg {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub m: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Contractive,
    Terminating,
}

#[derive(Subcommand, Debug)]
pub enum GammaCmd {
    Delta {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, allow_hyphen_values = true, default_value_t = -10)]
        nmin: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 10)]
        nmax: i64,
    },
    Invert {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        e: String,
        /// N coefficients in K_m: [element, ...].
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum, default_value_t = Mode::Contractive)]
        mode: Mode,
    },
    Kernel {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        e: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PicardCmd {
    Boundary {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        elem: String,
    },
    Kernel {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = 0)]
        s: i64,
    },
    /// An element whose boundary has order p^k.
    Witness {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u32,
    },
}
