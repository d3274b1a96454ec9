// Copyright 2026 The tdoped Authors
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

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("format error: {0}")]
    Format(String),
    #[error("invalid tableau: {0}")]
    Structure(String),
    #[error("invalid stabilizer group: {0}")]
    InvalidGroup(String),
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("ambiguous estimate {value}: nearest grid point {nearest} is {distance:.3e} away (radius {radius:.3e})")]
    Ambiguous {
        value: f64,
        nearest: f64,
        distance: f64,
        radius: f64,
    },
    #[error("invalid description: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
