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

//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdoped_core::experiment::random_doped_circuit;
use tdoped_core::pauli::PauliOp;
use tdoped_core::{CliffordCircuit, DopedCircuit, Gate, PauliString, StateOracle};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random unphased Pauli strings.
pub fn random_paulis(n: usize, count: usize, seed: u64) -> Vec<PauliString> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let mut p = PauliString::identity(n);
            for q in 0..n {
                p.set_op(q, PauliOp::from_bits(r.random(), r.random()));
            }
            p
        })
        .collect()
}

/// Random H, S and CNOT circuit with `len` gates.
pub fn random_clifford(n: usize, len: usize, seed: u64) -> CliffordCircuit {
    let mut r = rng(seed);
    let gates = (0..len)
        .map(|_| {
            let q = r.random_range(0..n);
            match r.random_range(0..3) {
                0 => Gate::H(q),
                1 => Gate::S(q),
                _ if n > 1 => Gate::Cnot(q, (q + r.random_range(1..n)) % n),
                _ => Gate::H(q),
            }
        })
        .collect();
    CliffordCircuit::new(n, gates).expect("gates are in range")
}

pub fn instance(n: usize, t: usize, seed: u64) -> (DopedCircuit, Arc<StateOracle>) {
    let c = random_doped_circuit(n, t, &mut rng(seed)).expect("within caps");
    let o = Arc::new(StateOracle::new(c.clone()).expect("within caps"));
    (c, o)
}
