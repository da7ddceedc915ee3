use std::io;
use std::path::PathBuf;

use elastic_weyl::cylinder::CylinderError;
use elastic_weyl::disk::DiskError;
use elastic_weyl::shift::ShiftError;
use elastic_weyl::MaterialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{}: {source}", path.as_ref().map_or("<stdout>".into(), |p| p.display().to_string()))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: Option<&std::path::Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.map(PathBuf::from),
            source,
        }
    }
}

impl From<MaterialError> for CliError {
    fn from(e: MaterialError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CylinderError> for CliError {
    fn from(e: CylinderError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<DiskError> for CliError {
    fn from(e: DiskError) -> Self {
        match e {
            DiskError::Material(_) | DiskError::Lambda(_) => CliError::Validation(e.to_string()),
            DiskError::Bessel(_) | DiskError::DoubleRoot { .. } | DiskError::OrderLimit(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::Material(_)
            | ShiftError::ZeroMomentum(_)
            | ShiftError::BadGrid { .. }
            | ShiftError::ScanRange { .. }
            | ShiftError::ThresholdIndex(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
