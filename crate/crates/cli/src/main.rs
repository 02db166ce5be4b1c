//! `walshsum`: batch verification runs over the Walsh–Fourier summability engine.
//!
//! Exit status: 0 when every check passes, 1 on a verification failure, 2 on a usage or
//! configuration error.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use walshsum_cli::config::{self, Command, ConfigError, Flags, Settings};
use walshsum_cli::commands;

#[derive(Parser, Debug)]
#[command(name = "walshsum", version, about = "Exact verification of Walsh-Fourier summability kernels and bounds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the kernel identities and inequalities over a parameter grid.
    Lemmas(LemmaArgs),
    /// Tabulate ||K_n||_1 for 1 <= n <= n-max.
    KernelNorms(PlainArgs),
    /// Sweep approximation bounds over a function corpus.
    Bounds(BoundArgs),
    /// Dump the generated test functions.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
struct PlainArgs {
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    #[command(flatten)]
    flags: Flags,
    /// Identities to check, e.g. `PALEY,FINE`, or `all`.
    #[arg(long, value_delimiter = ',')]
    identity: Vec<String>,
    /// Random rows per index for the sign-unrestricted identity.
    #[arg(long)]
    blahota_rows: Option<usize>,
    /// Perturb one kernel cell per case (exercises the failure path).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args, Debug)]
struct CorpusSelection {
    /// Corpus kinds, e.g. `random-step,dyadic-hoelder`, or `all`.
    #[arg(long, value_delimiter = ',')]
    kind: Vec<String>,
    /// Functions per (kind, rank).
    #[arg(long)]
    count: Option<usize>,
    /// Hoelder exponent.
    #[arg(long)]
    beta: Option<String>,
}

impl CorpusSelection {
    fn settings(&self) -> Settings {
        Settings {
            kind: (!self.kind.is_empty()).then(|| self.kind.clone()),
            count: self.count,
            beta: self.beta.clone(),
            ..Settings::default()
        }
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    flags: Flags,
    #[command(flatten)]
    corpus: CorpusSelection,
    /// Theorems to check, e.g. `BD4_1,AT_MAIN`, or `all`.
    #[arg(long, value_delimiter = ',')]
    theorem: Vec<String>,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[command(flatten)]
    flags: Flags,
    #[command(flatten)]
    corpus: CorpusSelection,
}

fn run(cli: Cli) -> Result<bool, ConfigError> {
    let (command, flags, specific, inject_fault) = match &cli.command {
        Cmd::Lemmas(a) => {
            let s = Settings {
                identity: (!a.identity.is_empty()).then(|| a.identity.clone()),
                blahota_rows: a.blahota_rows,
                ..Settings::default()
            };
            (Command::Lemmas, &a.flags, s, a.inject_fault)
        }
        Cmd::KernelNorms(a) => (Command::KernelNorms, &a.flags, Settings::default(), false),
        Cmd::Bounds(a) => {
            let s = Settings { theorem: (!a.theorem.is_empty()).then(|| a.theorem.clone()), ..a.corpus.settings() };
            (Command::Bounds, &a.flags, s, false)
        }
        Cmd::Corpus(a) => (Command::Corpus, &a.flags, a.corpus.settings(), false),
    };
    let settings = config::resolve(command, flags, specific)?;
    eprintln!("{}", config::echo(command, &settings));
    let outcome = match command {
        Command::Lemmas => commands::lemmas(&settings, inject_fault)?,
        Command::KernelNorms => commands::kernel_norms(&settings)?,
        Command::Bounds => commands::bounds(&settings)?,
        Command::Corpus => commands::corpus_dump(&settings)?,
    };
    let rendered = outcome.table.render(settings.format.unwrap_or(config::Format::Csv));
    match &settings.out {
        Some(path) => fs::write(path, rendered).map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| ConfigError(format!("cannot write output: {e}")))?;
        }
    }
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
