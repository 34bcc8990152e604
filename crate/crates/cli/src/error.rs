use std::path::PathBuf;

use detarr_core::blockrep::BlockError;
use detarr_core::factor::FactorError;
use detarr_core::family::FamilyError;
use detarr_core::invariants::InvariantError;
use detarr_core::matcore::MatError;
use detarr_core::poly::PolyError;
use thiserror::Error;

pub mod code {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const NEGATIVE: u8 = 2;
    pub const MALFORMED: u8 = 3;
    pub const IO: u8 = 4;
    pub const FILTRATION: u8 = 5;
    pub const SAMPLING: u8 = 6;
    pub const USAGE: u8 = 64;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Negative(String),
    #[error("filtration rejected: {0}")]
    Filtration(String),
    #[error("loop sampling: {0}")]
    Sampling(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => code::USAGE,
            CliError::Io { .. } => code::IO,
            CliError::Json { .. } | CliError::Input(_) => code::MALFORMED,
            CliError::Negative(_) => code::NEGATIVE,
            CliError::Filtration(_) => code::FILTRATION,
            CliError::Sampling(_) => code::SAMPLING,
            CliError::Internal(_) => code::INTERNAL,
        }
    }
}

impl From<MatError> for CliError {
    fn from(e: MatError) -> Self {
        let msg = e.to_string();
        match e {
            MatError::InvalidSize { .. }
            | MatError::MinorOutOfRange { .. }
            | MatError::UnknownKind(_) => CliError::Usage(msg),
            MatError::NotInGroup { .. } => CliError::Internal(msg),
            MatError::TooFewColumns { .. }
            | MatError::UnsupportedSpace { .. }
            | MatError::CoordinateCount { .. }
            | MatError::Shape { .. }
            | MatError::NotInSpace { .. }
            | MatError::Incompatible { .. } => CliError::Input(msg),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::CapacityExceeded { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        match e {
            FactorError::NotInOpenOrbit { .. } => CliError::Negative(e.to_string()),
            FactorError::ResidualTooLarge { .. } => CliError::Internal(e.to_string()),
            FactorError::Matrix(m) => m.into(),
        }
    }
}

impl From<BlockError> for CliError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::NotInvariant(_)
            | BlockError::NotBlockTriangular(..)
            | BlockError::SingularBlock(_)
            | BlockError::InvalidFiltration(_) => CliError::Filtration(e.to_string()),
            BlockError::DimensionMismatch { .. }
            | BlockError::ResidualNotConstant { .. }
            | BlockError::DuplicateFactor { .. } => CliError::Internal(e.to_string()),
            BlockError::Poly(p) => p.into(),
            BlockError::Matrix(m) => m.into(),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Block(b) => b.into(),
            InvariantError::Poly(p) => p.into(),
            InvariantError::Matrix(m) => m.into(),
            InvariantError::IndexOutOfRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::TooFewSamples(_)
            | FamilyError::NotClosed { .. }
            | FamilyError::Shape { .. } => CliError::Input(e.to_string()),
            FamilyError::PathHitsVariety { .. } | FamilyError::NotLiftable { .. } => {
                CliError::Negative(e.to_string())
            }
            FamilyError::SamplingTooCoarse { .. } | FamilyError::NotIntegral { .. } => {
                CliError::Sampling(e.to_string())
            }
            FamilyError::ClosureFailed { .. } => CliError::Internal(e.to_string()),
            FamilyError::Factor(f) => f.into(),
            FamilyError::Matrix(m) => m.into(),
            FamilyError::Block(b) => b.into(),
        }
    }
}
