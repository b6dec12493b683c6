// Copyright 2026 The polarrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use thiserror::Error;

/// Errors raised anywhere in the reconstruction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// The momentum region does not contain the polar dual of the position
    /// region, so no admissible state exists.
    #[error("polarity violation: {0}")]
    Polarity(String),

    #[error("rank-deficient point cloud: {0}")]
    RankDeficient(String),

    #[error("iteration limit of {iterations} reached (remaining gap {gap:.3e})")]
    IterationLimit { iterations: usize, gap: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 1 for invalid or inadmissible input, 2 for I/O
    /// and parse failures, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Dimension(_) | Error::Validation(_) | Error::Polarity(_) | Error::RankDeficient(_) => 1,
            Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
            Error::IterationLimit { .. } | Error::Numerical(_) => 3,
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
