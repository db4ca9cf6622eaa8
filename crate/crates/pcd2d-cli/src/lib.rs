//! Harness behind the `pcd2d` binary: configuration handling, deterministic
//! end-to-end simulation, exhaustive small-instance verification, and
//! trade-off/bound CSV sweeps.
//!
//! All command output is deterministic for a fixed configuration (timing
//! goes to stderr), so reports and CSV files can be diffed byte for byte.

use thiserror::Error;

pub mod config;
pub mod driver;
pub mod simulate;
pub mod sweep;
pub mod verify;

/// Command failures, split by exit code: validation problems exit 1, decode
/// or invariant failures exit 2.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Failure(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) => 1,
            HarnessError::Failure(_) => 2,
        }
    }

    pub fn validation(err: impl std::fmt::Display) -> Self {
        HarnessError::Validation(err.to_string())
    }

    pub fn failure(err: impl std::fmt::Display) -> Self {
        HarnessError::Failure(err.to_string())
    }
}
