mod commands;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use padiccf_core::context::is_prime;
use padiccf_core::ridout::{BoundVariant, InequalityVariant};
use padiccf_core::{parse_rational, Branch, Error, Mode, Rational};

use output::{envelope, Outcome};

#[derive(Parser)]
#[command(name = "padiccf", version, about = "p-adic continued fractions: expansions, criteria checks and quantitative bounds")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Partial quotients of a rational or quadratic surd.
    Expand(ExpandArgs),
    /// Convergents A_i/B_i with valuations and the identity audit.
    Convergents(SourceArgs),
    /// Palindromic prefixes, repeated blocks and the block growth statistic.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        /// Smallest repetition count reported as a block.
        #[arg(long, default_value_t = 2)]
        min_lambda: usize,
    },
    /// Hypothesis and inequality checks; exit code 1 on a violation.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Parameters and solution-count bounds of the quantitative gap principle.
    RidoutBound(BoundArgs),
    /// All solutions A/B with B <= hmax of the approximation inequality.
    RidoutEnumerate(EnumerateArgs),
    /// Scan of the Liouville-type lower bound over a box of fractions.
    Liouville(LiouvilleArgs),
    /// Golden-ratio bound and the log-log growth statistic of |B_k|_p.
    Growth(SourceArgs),
}

#[derive(Args)]
pub struct ExpandArgs {
    /// An odd prime.
    #[arg(long, value_parser = parse_prime)]
    pub p: u64,
    #[arg(long, default_value = "browkin", value_parser = parse_mode)]
    pub mode: Mode,
    /// Rational "a/b" or surd such as "sqrt(6)" or "(-1/10 + 1/10*sqrt(101))".
    #[arg(long, allow_hyphen_values = true)]
    pub value: String,
    /// Square root branch in Q_p: "+" or "-".
    #[arg(long, default_value = "+", value_parser = parse_branch, allow_hyphen_values = true)]
    pub branch: Branch,
    #[arg(long, default_value_t = 64)]
    pub max_terms: usize,
    /// Digits of the square root (default 16 * max-terms).
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Args)]
#[group(skip)]
pub struct SourceArgs {
    /// An odd prime.
    #[arg(long, value_parser = parse_prime)]
    pub p: u64,
    #[arg(long, default_value = "browkin", value_parser = parse_mode)]
    pub mode: Mode,
    /// Rational "a/b" or surd such as "sqrt(6)"; expanded first.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "sequence", conflicts_with = "sequence")]
    pub value: Option<String>,
    /// File with one partial quotient per line, '#' comments allowed.
    #[arg(long)]
    pub sequence: Option<PathBuf>,
    /// Square root branch in Q_p: "+" or "-".
    #[arg(long, default_value = "+", value_parser = parse_branch, allow_hyphen_values = true)]
    pub branch: Branch,
    #[arg(long, default_value_t = 64)]
    pub max_terms: usize,
    /// Digits of the square root (default 16 * max-terms).
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Subcommand)]
pub enum CheckKind {
    /// Determinant, valuation sums and |B_i| <= |B_i|_p at every index.
    Identities(SourceArgs),
    /// max(|A_i|, |B_i|)^4 < p^i for i >= i0.
    TheoremA {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1)]
        i0: usize,
    },
    /// The squared-approximation inequality at palindromic indices, or at --indices.
    LemmaA2 {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_delimiter = ',')]
        indices: Vec<usize>,
    },
    /// The product of linear forms at (A_n, B_n, A_{n-1}).
    Subspace {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Rational,
    },
    /// The quadratic relation of the periodic tail starting at h with period k.
    TailQuadratic {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: usize,
    },
    /// Quasi-periodic hypotheses: |A_i| <= |B_i| and k < c n for every block.
    TheoremB {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = parse_epsilon)]
        c: Rational,
        #[arg(long, default_value_t = 1)]
        i0: usize,
        #[arg(long, default_value_t = 2)]
        min_lambda: usize,
    },
    /// -v_p(B_n) >= n at every index.
    Golden(SourceArgs),
}

#[derive(Args)]
pub struct BoundArgs {
    /// Monic integer coefficients from the leading one, e.g. "1,0,-6".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["degree", "abar"])]
    pub minpoly: Option<String>,
    #[arg(long, required_unless_present = "minpoly")]
    pub degree: Option<u32>,
    /// Largest non-leading coefficient in absolute value (default 1).
    #[arg(long, value_parser = parse_abar)]
    pub abar: Option<BigInt>,
    #[arg(long, value_parser = parse_epsilon)]
    pub epsilon: Rational,
    /// theorem-half, corollary-full, remark-single-exp or exact-kl; default all admissible.
    #[arg(long, value_parser = parse_bound_variant)]
    pub variant: Option<BoundVariant>,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long, value_parser = parse_prime)]
    pub p: u64,
    #[arg(long, default_value = "+", value_parser = parse_branch, allow_hyphen_values = true)]
    pub branch: Branch,
    #[arg(long, value_parser = parse_epsilon)]
    pub epsilon: Rational,
    #[arg(long)]
    pub hmax: u64,
    /// half or full.
    #[arg(long, default_value = "half", value_parser = parse_inequality)]
    pub variant: InequalityVariant,
}

#[derive(Args)]
pub struct LiouvilleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long, value_parser = parse_prime)]
    pub p: u64,
    #[arg(long, default_value = "+", value_parser = parse_branch, allow_hyphen_values = true)]
    pub branch: Branch,
    #[arg(long, default_value_t = 100)]
    pub hmax: u64,
}

fn parse_prime(text: &str) -> Result<u64, String> {
    match text.trim().parse::<u64>() {
        Ok(p) if p > 2 && is_prime(p) => Ok(p),
        _ => Err("p must be an odd prime".to_string()),
    }
}

fn parse_mode(text: &str) -> Result<Mode, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

fn parse_branch(text: &str) -> Result<Branch, String> {
    Branch::parse(text).map_err(|e| e.to_string())
}

fn parse_epsilon(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|_| format!("expected an exact rational u/w, got {text:?}"))
}

fn parse_abar(text: &str) -> Result<BigInt, String> {
    match text.trim().parse::<BigInt>() {
        Ok(a) if a >= BigInt::from(1) => Ok(a),
        _ => Err("abar must be a positive integer".to_string()),
    }
}

fn parse_bound_variant(text: &str) -> Result<BoundVariant, String> {
    BoundVariant::parse(text).map_err(|e| e.to_string())
}

fn parse_inequality(text: &str) -> Result<InequalityVariant, String> {
    InequalityVariant::parse(text).map_err(|e| e.to_string())
}

fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var("PADICCF_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("PADICCF_THREADS must be a positive integer, got {text:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Expand(_) => "expand",
        Command::Convergents(_) => "convergents",
        Command::Analyze { .. } => "analyze",
        Command::Check { kind } => match kind {
            CheckKind::Identities(_) => "check identities",
            CheckKind::TheoremA { .. } => "check theorem-a",
            CheckKind::LemmaA2 { .. } => "check lemma-a2",
            CheckKind::Subspace { .. } => "check subspace",
            CheckKind::TailQuadratic { .. } => "check tail-quadratic",
            CheckKind::TheoremB { .. } => "check theorem-b",
            CheckKind::Golden(_) => "check golden",
        },
        Command::RidoutBound(_) => "ridout-bound",
        Command::RidoutEnumerate(_) => "ridout-enumerate",
        Command::Liouville(_) => "liouville",
        Command::Growth(_) => "growth",
    }
}

fn run(command: &Command) -> padiccf_core::Result<Outcome> {
    match command {
        Command::Expand(args) => commands::expand(args),
        Command::Convergents(args) => commands::convergent_table(args),
        Command::Analyze { source, min_lambda } => commands::analyze(source, *min_lambda),
        Command::Check { kind } => commands::check(kind),
        Command::RidoutBound(args) => commands::ridout_bound(args),
        Command::RidoutEnumerate(args) => commands::ridout_enumerate(args),
        Command::Liouville(args) => commands::liouville(args),
        Command::Growth(args) => commands::growth(args),
    }
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::PrecisionExhausted { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    let outcome = match run(&cli.command) {
        Ok(outcome) => outcome,
        Err(error) => {
            eprintln!("error: {error}");
            return ExitCode::from(exit_code_for(&error));
        }
    };
    let payload = match cli.format {
        Format::Json => envelope(name(&cli.command), &argv[1..], &outcome),
        Format::Csv => outcome.csv.clone(),
        Format::Text => outcome.text.clone(),
    };
    if !matches!(cli.format, Format::Json) {
        for warning in &outcome.warnings {
            eprintln!("warning: {warning}");
        }
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, payload) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{payload}"),
    }
    ExitCode::from(outcome.status.exit_code() as u8)
}
