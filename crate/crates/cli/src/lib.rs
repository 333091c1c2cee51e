//! Experiment harness around `bitgram-core`: dataset loading, a synthetic
//! clickstream generator, the purchase-prediction evaluation, kernel
//! micro-benchmarks, and report rendering. The `bitgram` binary is a thin
//! front end over these modules.

pub mod bench;
pub mod dataset;
pub mod experiment;
pub mod report;
pub mod synth;
pub mod vectorfile;

/// Failure classes, mapped one-to-one onto process exit codes so scripts
/// can tell a bad flag from bad data from a failed write.
#[derive(thiserror::Error, Debug)]
pub enum AppError {
    /// Invalid configuration or flag combination. Exit code 2.
    #[error("config error: {0}")]
    Config(String),
    /// Unusable input data. Exit code 3.
    #[error("data error: {0}")]
    Data(String),
    /// Filesystem or stream failure. Exit code 4.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Data(_) => 3,
            AppError::Io(_) => 4,
        }
    }
}
