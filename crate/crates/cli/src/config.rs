//! Run configuration: built-in defaults, then the config file (`[common]`, then the
//! command's own section), then command-line flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "WALSHSUM_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Lemmas,
    KernelNorms,
    Bounds,
    Corpus,
}

impl Command {
    pub fn section(&self) -> &'static str {
        match self {
            Command::Lemmas => "lemmas",
            Command::KernelNorms => "kernel-norms",
            Command::Bounds => "bounds",
            Command::Corpus => "corpus",
        }
    }
}

/// One layer of settings. Keys mirror the long flag names.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blahota_rows: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Settings { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Settings {
    /// `top` wins wherever it is set.
    pub fn overlay(self, top: Settings) -> Settings {
        overlay_fields!(
            self, top, rank, n_min, n_max, scheme, p, mode, seed, format, out, theorem, identity, kind, count,
            beta, blahota_rows
        )
    }

    pub fn defaults(command: Command) -> Settings {
        let strings = |v: &[&str]| Some(v.iter().map(|s| s.to_string()).collect());
        let common = Settings {
            mode: Some(Mode::Exact),
            seed: Some(0),
            format: Some(Format::Csv),
            n_min: Some(1),
            ..Settings::default()
        };
        let specific = match command {
            Command::Lemmas => Settings {
                n_max: Some(256),
                identity: strings(&["all"]),
                blahota_rows: Some(50),
                ..Settings::default()
            },
            Command::KernelNorms => Settings { n_max: Some(4096), ..Settings::default() },
            Command::Bounds => Settings {
                n_max: Some(32),
                rank: Some("3..=6".into()),
                scheme: strings(&["fejer"]),
                p: strings(&["1", "2", "inf"]),
                theorem: strings(&["all"]),
                kind: strings(&["all"]),
                count: Some(2),
                beta: Some("1".into()),
                ..Settings::default()
            },
            Command::Corpus => Settings {
                rank: Some("3".into()),
                kind: strings(&["all"]),
                count: Some(4),
                beta: Some("1".into()),
                ..Settings::default()
            },
        };
        common.overlay(specific)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    common: Settings,
    #[serde(default)]
    lemmas: Settings,
    #[serde(default)]
    kernel_norms: Settings,
    #[serde(default)]
    bounds: Settings,
    #[serde(default)]
    corpus: Settings,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Settings from a config file for `command`, `[common]` first.
pub fn load_file(path: &Path, command: Command) -> Result<Settings, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text, command).map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))
}

/// Settings for `command` from config text.
pub fn parse_config(text: &str, command: Command) -> Result<Settings, ConfigError> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
    let section = match command {
        Command::Lemmas => file.lemmas,
        Command::KernelNorms => file.kernel_norms,
        Command::Bounds => file.bounds,
        Command::Corpus => file.corpus,
    };
    Ok(file.common.overlay(section))
}

/// Flags shared by every command. Lists accept commas; schemes are separated by `|`.
#[derive(Args, Clone, Debug, Default)]
pub struct Flags {
    /// Config file; defaults to $WALSHSUM_CONFIG when set.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Rank, or range of ranks such as `3..=6`.
    #[arg(long)]
    pub rank: Option<String>,
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Weight schemes, e.g. `fejer|weighted:recip:0`; repeatable.
    #[arg(long)]
    pub scheme: Vec<String>,
    /// Exponents, e.g. `1,2,inf`.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl Flags {
    pub fn settings(&self) -> Settings {
        let list = |v: &Vec<String>| (!v.is_empty()).then(|| v.clone());
        let schemes: Vec<String> = self
            .scheme
            .iter()
            .flat_map(|s| s.split('|'))
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        Settings {
            rank: self.rank.clone(),
            n_min: self.n_min,
            n_max: self.n_max,
            scheme: list(&schemes),
            p: list(&self.p),
            mode: self.mode,
            seed: self.seed,
            format: self.format,
            out: self.out.clone(),
            ..Settings::default()
        }
    }
}

/// Resolves defaults, file and flags into the effective settings.
pub fn resolve(command: Command, flags: &Flags, specific: Settings) -> Result<Settings, ConfigError> {
    let path = flags.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let file = match path {
        Some(p) => load_file(&p, command)?,
        None => Settings::default(),
    };
    Ok(Settings::defaults(command).overlay(file).overlay(flags.settings()).overlay(specific))
}

/// Effective settings as the TOML section that reproduces the run.
pub fn echo(command: Command, settings: &Settings) -> String {
    let body = toml::to_string(settings).unwrap_or_default();
    format!("# effective configuration\n[{}]\n{body}", command.section())
}
