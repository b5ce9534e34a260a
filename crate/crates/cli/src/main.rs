//! `burnside` — Burnside rings of saturated fusion systems from the shell.
//!
//! Subcommands: `marks`, `fmark`, `alpha`, `chains`, `biset`, `verify`,
//! `diff`. Inputs are TOML group documents; outputs are deterministic JSON
//! artifacts (`--format data`) or aligned text (`--format text`).
//!
//! Exit codes: 0 success, 1 invariant diagnostic (non-integral coefficients,
//! failed certificate, non-empty diff), 2 usage or input error, 3 resource
//! cap exceeded.

mod artifact;
mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use burnside::chains::ChainFilter;
use clap::{Args, Parser, Subcommand, ValueEnum};

use artifact::Meta;
use input::{resolve_lattice, resolve_system, Mode, SystemSpec};

/// A failed run: exit code plus message.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<burnside::Error> for Failure {
    fn from(e: burnside::Error) -> Failure {
        use burnside::Error;
        let code = match &e {
            Error::GroupTooLarge { .. } | Error::TooManySubgroups { .. } => 3,
            Error::AlphaDiagnostic { .. }
            | Error::NonIntegralMarks { .. }
            | Error::Cancellation(_)
            | Error::BisetCoefficient { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// self-describing JSON artifact
    Data,
    /// aligned human-readable tables
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// exact inversion of the modified Mobius matrices
    Matrix,
    /// alternating sums over broken chains
    Chains,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    /// every broken chain
    All,
    /// drab chains only (no starred node)
    Drab,
    /// elementary-abelian-extension chains only
    Elab,
    /// both restrictions at once (breaks the cancellation pairing)
    #[value(name = "drab+elab")]
    DrabElab,
}

impl FilterArg {
    fn to_filter(self) -> ChainFilter {
        match self {
            FilterArg::All => ChainFilter::All,
            FilterArg::Drab => ChainFilter::DrabOnly,
            FilterArg::Elab => ChainFilter::ElabOnly,
            FilterArg::DrabElab => ChainFilter::DrabElab,
        }
    }
    fn name(self) -> &'static str {
        match self {
            FilterArg::All => "all",
            FilterArg::Drab => "drab",
            FilterArg::Elab => "elab",
            FilterArg::DrabElab => "drab+elab",
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// group document (TOML: name, degree, generators)
    #[arg(long, value_name = "FILE")]
    group: PathBuf,
    /// ambient group document; fusion by conjugation inside it
    #[arg(long, value_name = "FILE")]
    ambient: Option<PathBuf>,
    /// the prime of the fusion system
    #[arg(long, value_name = "P")]
    prime: Option<u64>,
    /// fusion input mode; inferred from --ambient when omitted
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// output format
    #[arg(long, value_enum, default_value = "data")]
    format: Format,
    /// write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// element cap for group closure
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    max_order: usize,
    /// accept a subgroup that is not Sylow in the ambient group
    #[arg(long)]
    allow_non_sylow: bool,
}

impl CommonArgs {
    fn spec(&self) -> SystemSpec<'_> {
        SystemSpec {
            group: &self.group,
            ambient: self.ambient.as_deref(),
            prime: self.prime,
            mode: self.mode,
            max_order: self.max_order,
            allow_non_sylow: self.allow_non_sylow,
        }
    }

    fn meta(&self) -> Meta {
        let mut meta = Meta::new();
        meta.prime = self.prime;
        meta.mode = match (self.mode, &self.ambient) {
            (Some(Mode::Ambient), _) | (None, Some(_)) => Some("ambient".to_string()),
            _ => Some("partition".to_string()),
        };
        meta.ambient = self.ambient.as_ref().map(|p| p.display().to_string());
        meta
    }
}

#[derive(Parser)]
#[command(
    name = "burnside",
    version,
    about = "Burnside rings of saturated fusion systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Table of marks of the subgroup lattice with its Mobius inverses
    Marks(CommonArgs),
    /// Fused mark table of the fusion system
    Fmark {
        #[command(flatten)]
        common: CommonArgs,
        /// how to compute the table
        #[arg(long, value_enum, default_value = "matrix")]
        method: Method,
    },
    /// Irreducible stable basis decompositions
    Alpha {
        #[command(flatten)]
        common: CommonArgs,
        /// how to compute the coefficients
        #[arg(long, value_enum, default_value = "matrix")]
        method: Method,
        /// chain filter (chains method only)
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
    },
    /// Broken-chain listings from a subgroup to a fusion class
    Chains {
        #[command(flatten)]
        common: CommonArgs,
        /// starting subgroup, e.g. "<(1 3)(5 6)>"; trivial when omitted
        #[arg(long, value_name = "SUBGROUP", default_value = "<>")]
        from: String,
        /// witness subgroup of the target fusion class; the whole group when omitted
        #[arg(long, value_name = "SUBGROUP")]
        to: Option<String>,
        /// chain filter
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
        /// pin the first segment to the starting subgroup alone
        #[arg(long)]
        tethered: bool,
    },
    /// Minimal characteristic biset of the fusion system
    Biset(CommonArgs),
    /// Run the full certificate battery
    Verify(CommonArgs),
    /// Structural comparison of two artifacts
    Diff {
        /// left artifact path
        a: PathBuf,
        /// right artifact path
        b: PathBuf,
        /// output format
        #[arg(long, value_enum, default_value = "data")]
        format: Format,
        /// write the report here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Cmd::Marks(common) => {
            let lattice = resolve_lattice(&common.group, common.max_order)?;
            let mut meta = common.meta();
            meta.mode = None;
            meta.ambient = None;
            commands::marks(&lattice, meta, common.format, common.out.as_deref())
        }
        Cmd::Fmark { common, method } => {
            let system = resolve_system(&common.spec())?;
            let mut meta = common.meta();
            meta.method = Some(format!("{method:?}").to_lowercase());
            commands::fmark(&system, method, meta, common.format, common.out.as_deref())
        }
        Cmd::Alpha {
            common,
            method,
            filter,
        } => {
            let system = resolve_system(&common.spec())?;
            let mut meta = common.meta();
            meta.method = Some(format!("{method:?}").to_lowercase());
            if method == Method::Chains {
                meta.filter = Some(filter.name().to_string());
            }
            commands::alpha(
                &system,
                method,
                filter.to_filter(),
                meta,
                common.format,
                common.out.as_deref(),
            )
        }
        Cmd::Chains {
            common,
            from,
            to,
            filter,
            tethered,
        } => {
            let system = resolve_system(&common.spec())?;
            let mut meta = common.meta();
            meta.filter = Some(filter.name().to_string());
            meta.tethered = Some(tethered);
            let query = commands::ChainQuery {
                from: &from,
                to: to.as_deref(),
                filter: filter.to_filter(),
                tethered,
            };
            commands::chain_listing(&system, &query, meta, common.format, common.out.as_deref())
        }
        Cmd::Biset(common) => {
            let system = resolve_system(&common.spec())?;
            commands::biset(&system, common.meta(), common.format, common.out.as_deref())
        }
        Cmd::Verify(common) => {
            let system = resolve_system(&common.spec())?;
            commands::verify(&system, common.meta(), common.format, common.out.as_deref())
        }
        Cmd::Diff { a, b, format, out } => commands::diff(&a, &b, format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
