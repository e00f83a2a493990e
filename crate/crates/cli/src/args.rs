use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "falsetheta",
    version,
    about = "Expand q-series and verify their identities and congruences"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Truncation order N (coefficients 0..=N); 2000 when omitted.
    #[arg(long, global = true)]
    pub terms: Option<usize>,

    /// Coefficient ring modulus (0 = exact integers).
    #[arg(long = "mod", global = true)]
    pub modulus: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Directory for cached expansions.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the coefficients of an expression.
    Expand {
        #[arg(long)]
        expr: String,
    },
    /// Verify catalog identities, one by name, or an ad hoc pair.
    VerifyId {
        name: Option<String>,
        #[arg(long, requires = "rhs", conflicts_with = "name")]
        lhs: Option<String>,
        #[arg(long, requires = "lhs")]
        rhs: Option<String>,
    },
    /// Check coefficient(A n + B) = 0 mod M along a progression.
    VerifyCong {
        #[arg(long)]
        series: String,
        #[arg(long = "A")]
        step: u64,
        #[arg(long = "B")]
        offset: u64,
        #[arg(long = "M", id = "claim_modulus")]
        modulus: u64,
        #[arg(long)]
        exclude_p: Option<u64>,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// The mod 8 and mod 4 congruences for c5.
    Theorem1 {
        /// Also check the b1, b2, b3 and b congruences they rest on.
        #[arg(long)]
        with_lemmas: bool,
    },
    /// The prime-power family for c5 at one prime p = 7 (mod 8).
    Theorem2 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Compare the divisor-sum formula for a1(n) with the series, n < nmax.
    A1Formula {
        #[arg(long)]
        nmax: u64,
    },
    /// p-adic valuation and representation audit of 3(...)+2 arguments.
    AuditValuation {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        nmax: u64,
    },
    /// Count n < nmax whose coefficient vanishes mod --mod.
    Density {
        #[arg(long)]
        series: String,
        #[arg(long)]
        nmax: u64,
    },
    /// List cataloged identities and congruences.
    Catalog,
}
