//! `ssratio`: generate graph families, compute exact information ratio bounds
//! and tabulate lower against upper bounds.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ssratio", version, about = "Exact information ratio bounds for graph secret sharing")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for parallel verification and report rows.
    #[arg(long, env = "SSRATIO_WORKERS", global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph file.
    Gen(GenArgs),
    /// Compute a bound on the information ratio.
    Bound(BoundArgs),
    /// Build a certificate, or check one with --check.
    Cert(CertArgs),
    /// Build or load a star scheme, verify it and report its ratios.
    Scheme(SchemeArgs),
    /// Lower and upper bounds side by side over a range of dimensions.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Hypercube,
    CubeStar,
    Delta,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Worst,
    Average,
}

impl From<ModeArg> for ssratio_core::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Worst => ssratio_core::Mode::Worst,
            ModeArg::Average => ssratio_core::Mode::Average,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Lp,
    Certificate,
    Scheme,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[arg(long, value_enum, default_value = "cube_star")]
    pub family: Family,
    /// Cube dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Matching seed for the delta family.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Graph file, for --family file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "worst")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "lp")]
    pub method: Method,
    /// Field modulus for --method scheme.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the certificate for --method certificate.
    #[arg(long)]
    pub cert_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "worst")]
    pub mode: ModeArg,
    /// Check this certificate file instead of building one.
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Certificate destination; the certificate goes to stdout without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Prime field modulus; defaults to the least prime not below |V|.
    #[arg(long)]
    pub q: Option<u64>,
    /// Verify this scheme file instead of building one.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Where to write the scheme file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Families to tabulate; cube_star and delta when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub family: Vec<Family>,
    /// Smallest dimension.
    #[arg(long, default_value_t = 1)]
    pub from: usize,
    /// Largest dimension; a range with `to < from` is empty.
    #[arg(long, default_value_t = 4)]
    pub to: usize,
    /// Seeds for the delta family.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    /// Modes to tabulate; worst for cube_star and hypercube, average for
    /// delta when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub mode: Vec<ModeArg>,
    /// Lower-bound method.
    #[arg(long, value_enum, default_value = "certificate")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Bound(a) => commands::bound(a),
        Command::Cert(a) => commands::cert(a),
        Command::Scheme(a) => commands::scheme(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
