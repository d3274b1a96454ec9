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

//! Simulation and exact learning of t-doped stabilizer states.
//!
//! A t-doped stabilizer state is prepared from |0…0⟩ by a Clifford circuit
//! interleaved with `t` T gates. Its Pauli spectrum splits into a stabilizer
//! group `G` and at most `4ᵗ − 1` further cosets `hᵢG`, and every nonzero
//! Pauli expectation lives on a discrete grid of values `(a + b√2)/√2ᵏ`.
//! This crate provides:
//!
//! * [`pauli`] and [`f2`]: bit-packed Pauli strings and F₂ linear algebra,
//! * [`clifford`]: gate lists, tableaux, synthesis and diagonalizers,
//! * [`oracle`]: a dense statevector oracle and the sampling/measurement
//!   query model,
//! * [`grid`] and [`model`]: exact expectation values and the learned
//!   description of a state,
//! * [`learner`]: the Ξ-sampling and Bell-pair learning algorithms,
//! * [`experiment`]: instance generation, verification and batch records.
//!
//! Qubit `q` of a Pauli string corresponds to character `q` of its text form
//! and to bit `q` of a computational basis index.

pub mod clifford;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod f2;
pub mod grid;
pub mod learner;
pub mod model;
pub mod oracle;
pub mod pauli;

pub use clifford::{CliffordCircuit, Direction, DopedCircuit, Gate, GateKind, Tableau};
pub use error::{Error, Result};
pub use f2::{BitMatrix, F2Vector, IncrementalBasis};
pub use grid::GridValue;
pub use learner::{Algorithm, LearnOutcome, LearnStatus, LearnerConfig};
pub use model::{BadGenerator, DopedDescription, ValidationReport};
pub use oracle::{PauliDistribution, QueryAccess, QueryModel, StateOracle, StateVector};
pub use pauli::{PauliOp, PauliString, Sign, SignedPauli};
