//! `fsd`: command-line front end for the formal duality workbench.
//!
//! Exit status: 0 for success or a verified-true verdict, 1 for a
//! verified-false verdict, 2 for usage, parse and domain errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fsd", version, about = "Exact verification, construction and search for formally dual sets")]
pub struct Cli {
    /// Worker threads for search and table builders (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Produce full exact certificates; `false` only reports verdicts.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub verify_exact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check formal self-duality of a set, or formal duality of a pair.
    Verify(VerifyArgs),
    /// Project a formally self dual set down to a primitive one.
    Reduce(TargetArgs),
    /// Even-set decomposition and the zero-sum criterion.
    Evenset(TargetArgs),
    /// Emit a known (pairing, set) bundle as JSON.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Vectorial Boolean functions over F_{2^n}.
    #[command(subcommand)]
    Boolfn(BoolfnCmd),
    /// Codes, enumerators and the MacWilliams transform.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Pruned search for formally self dual sets or dual pairs.
    Search(SearchArgs),
}

/// A set in a group with a pairing, given inline or as a bundle file.
#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Group literal such as `Z4` or `Z2xZ4xZ8`.
    #[arg(long, required_unless_present = "bundle")]
    pub group: Option<String>,
    /// `standard`, an integer matrix such as `[[1,0],[0,1]]`, or a file holding one.
    #[arg(long, default_value = "standard")]
    pub pairing: String,
    /// Set literal such as `{0,1}` or `{(0,1),(1,0)}`.
    #[arg(long, required_unless_present = "bundle")]
    pub set: Option<String>,
    /// Bundle JSON written by `construct` (`-` for stdin).
    #[arg(long, conflicts_with_all = ["group", "set"])]
    pub bundle: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Second set `T`; checks the pair `(S, T)` instead of `S` alone.
    #[arg(long)]
    pub dual: Option<String>,
    /// Print the full certificate table.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// `{0,1}` in `Z4`.
    Tito,
    /// Multiples of `n` in `Z_{n²}`.
    Lattice {
        #[arg(long)]
        n: u32,
    },
    /// `{(k, kα)}` in `Z_p²` with `α² = −1`.
    Gaussian {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha: i64,
    },
    /// Self dual set from the Paley difference set in `F_{p^m}`.
    Paley {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        beta: i64,
    },
    /// Primitive self dual set of size 8 in a group of order 64.
    Sporadic {
        /// 1 for `Z2xZ4xZ8`, 2 for `Z2^3xZ8`.
        #[arg(long, default_value_t = 1)]
        index: usize,
    },
}

/// Field and function shared by most `boolfn` verbs.
#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// `n=3`, `n=3,poly=0b1011`, or just the degree.
    #[arg(long)]
    pub field: String,
    /// `x^d`, `poly:[c0,c1,...]` or `table:[v0,v1,...]`.
    #[arg(long)]
    pub function: String,
}

#[derive(Debug, Subcommand)]
pub enum BoolfnCmd {
    /// Bijectivity, APN and AB flags.
    Classify(FunctionArgs),
    /// Self-duality of the graph under the trace pairing.
    Graph(FunctionArgs),
    /// Walsh spectrum `W(a,b)`, one row per `a`.
    Walsh(FunctionArgs),
    /// Differential table `δ(a,b)`, one row per `a`.
    Differential(FunctionArgs),
    /// `L2 ∘ F ∘ L1` for linearized `L1`, `L2` whose adjoints invert them.
    Transform {
        #[command(flatten)]
        f: FunctionArgs,
        /// Coefficients `[c0,c1,...]` of `Σ c_i x^(2^i)`.
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
    },
    /// Graph self-duality of `x^(2^i+1)` for every listed `(n, i)`.
    GoldScan {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Defaults to every `0 < i < n`.
        #[arg(long, value_delimiter = ',')]
        i: Vec<u32>,
    },
}

#[derive(Debug, Args)]
pub struct CodeInput {
    /// Code file: one word per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Alphabet override: `F3`, `Z4`, `F2^3`.
    #[arg(long)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumeratorKind {
    Weight,
    Distance,
}

#[derive(Debug, Subcommand)]
pub enum CodesCmd {
    /// Weight and distance enumerators.
    Enumerators(CodeInput),
    /// MacWilliams transform of an enumerator.
    Macwilliams {
        #[command(flatten)]
        code: CodeInput,
        #[arg(long, value_enum, default_value_t = EnumeratorKind::Weight)]
        of: EnumeratorKind,
    },
    /// Whether two codes have MacWilliams-dual enumerators.
    DualCheck {
        #[command(flatten)]
        code: CodeInput,
        #[arg(long)]
        other: PathBuf,
    },
    /// Z4-linear code spanned by the generator rows of the input.
    Z4Span(CodeInput),
    /// Binary Gray image of a Z4 code.
    Gray(CodeInput),
    /// Dual of a Z4-linear code.
    Z4Dual(CodeInput),
    /// Character-sum form of the distance enumerator identity.
    Identity(CodeInput),
    /// Zero character sums of a binary code and zero differences of another.
    ZeroCounts {
        #[command(flatten)]
        code: CodeInput,
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub group: String,
    /// `|S|`; self-dual search needs `|S|² = |G|`.
    #[arg(long)]
    pub size: usize,
    /// `standard`, `all`, an integer matrix, or a file holding one.
    #[arg(long, default_value = "standard")]
    pub pairing: String,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    /// Elements forced into every candidate, e.g. `{(0,0,0),(0,0,1)}`.
    #[arg(long)]
    pub seed_prefix: Option<String>,
    /// Write one certificate JSON per hit into this directory.
    #[arg(long)]
    pub emit_certificates: Option<PathBuf>,
    /// Search formally dual pairs `(S, T)` with `|T| = |G|/|S|`.
    #[arg(long)]
    pub pairs: bool,
    /// Keep every translate instead of fixing `0 ∈ S`.
    #[arg(long)]
    pub all_translates: bool,
    /// Disable reachability pruning.
    #[arg(long)]
    pub no_prune: bool,
    /// Largest group order accepted.
    #[arg(long, default_value_t = fsd_core::search::DEFAULT_MAX_ORDER)]
    pub max_order: usize,
}

/// Parses `argv`, runs one verb and writes its report; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return 2;
        }
        // The global pool can only be configured once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match commands::dispatch(&cli) {
        Ok(report) => {
            let _ = report.write(out, cli.format);
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
