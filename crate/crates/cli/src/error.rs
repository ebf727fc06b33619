use decomp_species::coalg::CoalgError;
use decomp_species::decomp::DecompError;
use decomp_species::species::SpeciesError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Species(SpeciesError),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Species(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl From<SpeciesError> for CliError {
    fn from(e: SpeciesError) -> Self {
        match e {
            SpeciesError::Json(msg) => CliError::Parse(msg),
            SpeciesError::UnknownSpecies(_) => CliError::Usage(e.to_string()),
            SpeciesError::NotMonoidal(_) | SpeciesError::NotOrdinary(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Species(other),
        }
    }
}

impl From<CoalgError> for CliError {
    fn from(e: CoalgError) -> Self {
        match e {
            CoalgError::Species(s) => s.into(),
            CoalgError::Decomp(d) => d.into(),
            CoalgError::NotConnected(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<DecompError> for CliError {
    fn from(e: DecompError) -> Self {
        match e {
            DecompError::Species(s) => s.into(),
            DecompError::LevelTooLarge { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
