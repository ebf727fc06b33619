//! Run configuration: flags over an optional JSON file over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use decomp_species::species::Species;
use decomp_species::Exec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Species identifier: set, graph, poset, forest, linear_order, double_poset, dag.
    #[arg(long)]
    species: Option<String>,
    /// Largest carrier size.
    #[arg(long)]
    size: Option<usize>,
    /// Decoration bound: the number of edges, counted with multiplicity, for graphs.
    #[arg(long)]
    edges: Option<usize>,
    /// Truncation level N.
    #[arg(short = 'n', long)]
    levels: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Seed for the randomized relabelling check.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run every check on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    species: Option<String>,
    size: Option<usize>,
    edges: Option<usize>,
    levels: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub species: Species,
    pub size: usize,
    pub edges: usize,
    pub levels: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub exec: Exec,
}

#[derive(Serialize)]
pub struct ConfigEcho<'a> {
    species: &'a str,
    size: usize,
    edges: usize,
    levels: usize,
    seed: u64,
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() })
}

impl RunConfig {
    pub const DEFAULT_SIZE: usize = 3;
    pub const DEFAULT_EDGES: usize = 1;
    pub const DEFAULT_LEVELS: usize = 3;

    pub fn resolve(args: CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => serde_json::from_str::<ConfigFile>(&read_file(p)?)?,
            None => ConfigFile::default(),
        };
        let tag = args.species.or(file.species).ok_or_else(|| CliError::Usage("missing --species".into()))?;
        let cfg = Self {
            species: Species::from_tag(&tag)?,
            size: args.size.or(file.size).unwrap_or(Self::DEFAULT_SIZE),
            edges: args.edges.or(file.edges).unwrap_or(Self::DEFAULT_EDGES),
            levels: args.levels.or(file.levels).unwrap_or(Self::DEFAULT_LEVELS),
            out: args.out.or(file.out),
            format: args.format.or(file.format).unwrap_or_default(),
            seed: args.seed.or(file.seed).unwrap_or(0),
            exec: if args.sequential { Exec::Sequential } else { Exec::Parallel },
        };
        for (name, v) in [("size", cfg.size), ("edges", cfg.edges), ("levels", cfg.levels)] {
            if v == 0 {
                return Err(CliError::Usage(format!("--{name} must be positive")));
            }
        }
        Ok(cfg)
    }

    pub fn echo(&self) -> ConfigEcho<'_> {
        ConfigEcho {
            species: self.species.tag(),
            size: self.size,
            edges: self.edges,
            levels: self.levels,
            seed: self.seed,
        }
    }

    /// Write to `--out` or stdout.
    pub fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| CliError::Io { path: p.display().to_string(), reason: e.to_string() }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
