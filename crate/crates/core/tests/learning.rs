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


//! Learner behaviour against oracle ground truth.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdoped_core::clifford::build_diagonalizer;
use tdoped_core::experiment::{random_doped_circuit, verify_description, Verdict};
use tdoped_core::grid::{enumerate_grid, GridValue};
use tdoped_core::learner::{
    default_shots_n, estimate_expectation_exact, learn, learn_group_xi, test_membership, Algorithm,
    CosetIndex, LearnStatus, LearnerConfig, Resources,
};
use tdoped_core::oracle::Usage;
use tdoped_core::{
    DopedCircuit, DopedDescription, Gate, PauliString, QueryAccess, QueryModel, Result, Sign, StateOracle,
};

fn oracle(n: usize, t: usize, seed: u64) -> Arc<StateOracle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Arc::new(StateOracle::new(random_doped_circuit(n, t, &mut rng).unwrap()).unwrap())
}

/// Span and signs of the group generated by a description's generators.
fn group(desc: &DopedDescription) -> HashMap<usize, GridValue> {
    desc.support_map()
        .unwrap()
        .into_iter()
        .filter(|(_, v)| v.abs() == GridValue::ONE)
        .collect()
}

#[test]
fn t_plus_cosets_are_found() {
    let c = DopedCircuit::new(1, vec![Gate::H(0), Gate::T(0)]).unwrap();
    let o = Arc::new(StateOracle::new(c).unwrap());
    for seed in 0..10 {
        let cfg = LearnerConfig::for_instance(1, 1, Algorithm::One).with_seed(seed);
        let mut q = QueryModel::new(o.clone(), seed);
        let out = learn(&mut q, 1, Algorithm::One, &cfg).unwrap();
        assert_eq!(out.status, LearnStatus::Success, "seed {seed}: {:?}", out.message);
        let d = out.description.unwrap();
        let mut reps: Vec<String> = d.bad_generators.iter().map(|b| b.pauli.to_string()).collect();
        reps.sort();
        assert_eq!(reps, vec!["X", "Y"], "seed {seed}: {:?}", d.generators);
        assert!(d.bad_generators.iter().all(|b| b.expectation == GridValue::inv_sqrt2()));
    }
}

#[test]
fn learned_groups_match_oracle() {
    let mut matches = 0;
    for i in 0..100u64 {
        let (n, t) = (1 + (i % 5) as usize, (i / 5 % 4) as usize);
        let o = oracle(n, t, 50_000 + i);
        let cfg = LearnerConfig::for_instance(n, t, Algorithm::One);
        let mut q = QueryModel::new(o.clone(), i);
        let mut res = Resources::default();
        let gens = learn_group_xi(&mut q, &cfg, &mut res).unwrap();
        let learned = group(&DopedDescription::new(n, t, gens, vec![]));
        let truth = group(&o.description().unwrap());
        matches += usize::from(learned == truth);
    }
    assert!(matches >= 99, "{matches}/100");
}

#[test]
fn coset_paths_agree_exhaustively() {
    for seed in 0..5 {
        let o = oracle(4, 2, 60_000 + seed);
        let desc = o.description().unwrap();
        let diag = build_diagonalizer(&desc.generators, 4).unwrap();
        let mut index = CosetIndex::new(&desc.generators, diag).unwrap();
        for b in &desc.bad_generators {
            index.insert(&b.pauli).unwrap();
        }
        let support = desc.support_map().unwrap();
        for i in 0..256 {
            let p = PauliString::from_index(4, i);
            let commutes = desc.generators.iter().all(|g| g.pauli().commutes(&p).unwrap());
            let by_diag = index.lookup(&p).unwrap();
            let by_elim = index.lookup_elimination(&p).filter(|_| commutes);
            assert_eq!(by_diag, by_elim, "{p}");
            assert_eq!(by_diag.is_some(), support.contains_key(&i), "{p}");
        }
    }
}

#[test]
fn zero_expectation_is_rejected_by_membership() {
    let c = DopedCircuit::new(1, vec![]).unwrap();
    let mut q = QueryModel::new(Arc::new(StateOracle::new(c).unwrap()), 3);
    let x: PauliString = "X".parse().unwrap();
    let accepted = (0..1000)
        .filter(|_| test_membership(&mut q, &x, 20).unwrap().is_some())
        .count();
    assert_eq!(accepted, 0);
}

/// Query access returning shots with a fixed expectation.
struct Coin {
    e: f64,
    rng: ChaCha8Rng,
    shots: u64,
}

impl QueryAccess for Coin {
    fn num_qubits(&self) -> usize {
        1
    }
    fn sample_xi(&mut self) -> Result<PauliString> {
        unimplemented!()
    }
    fn sample_xi_tilde(&mut self) -> Result<PauliString> {
        unimplemented!()
    }
    fn measure_pauli_shot(&mut self, _: &PauliString) -> Result<Sign> {
        self.shots += 1;
        Ok(if self.rng.random::<f64>() < (1.0 + self.e) / 2.0 { Sign::Plus } else { Sign::Minus })
    }
    fn usage(&self) -> Usage {
        Usage {
            shots: self.shots,
            ..Usage::default()
        }
    }
}

#[test]
fn default_shot_count_snaps_reliably() {
    let x: PauliString = "X".parse().unwrap();
    for t in 0..=4 {
        let n_shots = default_shots_n(t);
        let grid = enumerate_grid(t).unwrap();
        // Values with the largest variance are the hardest to snap.
        let mut targets: Vec<GridValue> = grid.to_vec();
        targets.sort_by_key(|a| a.abs());
        targets.truncate(4);
        for &target in &targets {
            let mut coin = Coin {
                e: target.to_f64(),
                rng: ChaCha8Rng::seed_from_u64(t as u64),
                shots: 0,
            };
            let trials = 200;
            let ok = (0..trials)
                .filter(|_| estimate_expectation_exact(&mut coin, &x, t, n_shots).ok() == Some(target))
                .count();
            assert!(ok * 100 >= 99 * trials, "t = {t}, value {target}: {ok}/{trials}");
        }
    }
}

#[test]
fn algorithms_agree_on_real_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    for i in 0..20u64 {
        let n = rng.random_range(2..=5);
        // H, CNOT, CZ, X and Z keep amplitudes real.
        let gates: Vec<Gate> = (0..10 * n)
            .map(|_| {
                let q = rng.random_range(0..n);
                let r = (q + rng.random_range(1..n)) % n;
                match rng.random_range(0..5) {
                    0 => Gate::H(q),
                    1 => Gate::X(q),
                    2 => Gate::Z(q),
                    3 => Gate::Cnot(q, r),
                    _ => Gate::Cz(q, r),
                }
            })
            .collect();
        let o = Arc::new(StateOracle::new(DopedCircuit::new(n, gates).unwrap()).unwrap());
        let run = |alg| {
            let cfg = LearnerConfig::for_instance(n, 0, alg).with_seed(i);
            let mut q = QueryModel::new(o.clone(), i);
            let out = learn(&mut q, 0, alg, &cfg).unwrap();
            assert_eq!(out.status, LearnStatus::Success);
            out.description.unwrap()
        };
        let (d1, d2) = (run(Algorithm::One), run(Algorithm::Two));
        assert_eq!(group(&d1), group(&d2));
        assert_eq!(d1.support_map().unwrap(), d2.support_map().unwrap());
    }
}

#[test]
fn algorithm2_recovers_t1_instances_exactly() {
    for i in 0..20u64 {
        let o = oracle(4, 1, 80_000 + i);
        let cfg = LearnerConfig::for_instance(4, 1, Algorithm::Two).with_seed(i);
        let mut q = QueryModel::new(o.clone(), i);
        let out = learn(&mut q, 1, Algorithm::Two, &cfg).unwrap();
        assert_eq!(out.status, LearnStatus::Success, "{:?}", out.message);
        let d = out.description.unwrap();
        assert!(d.nullity() <= 1 && d.k() < 4);
        assert_eq!(verify_description(&o, &d).unwrap().verdict, Verdict::ExactMatch);
    }
}

#[test]
fn resources_match_counters_and_budgets() {
    for i in 0..20u64 {
        let (n, t) = (2 + (i % 4) as usize, (i % 3) as usize);
        let o = oracle(n, t, 90_000 + i);
        for alg in [Algorithm::One, Algorithm::Two] {
            let cfg = LearnerConfig::for_instance(n, t, alg).with_seed(i);
            let mut q = QueryModel::new(o.clone(), i);
            let out = learn(&mut q, t, alg, &cfg).unwrap();
            let (r, u) = (out.resources, q.usage());
            assert_eq!((r.xi_samples, r.xi_tilde_samples, r.shots), (u.xi_samples, u.xi_tilde_samples, u.shots));
            assert_eq!(r.psi_copies, u.psi_copies);
            if out.status == LearnStatus::Success {
                match alg {
                    Algorithm::One => assert!(r.xi_samples <= cfg.group_sample_budget + cfg.bad_gen_sample_budget),
                    Algorithm::Two => assert!(r.xi_tilde_samples <= 2 * cfg.pair_budget),
                }
            }
        }
    }
}

#[test]
fn purity_residual_decreases_with_each_coset() {
    for i in 0..10u64 {
        let o = oracle(4, 2, 95_000 + i);
        let desc = o.description().unwrap();
        let mut residual = GridValue::from_int(1 << desc.nullity()) - GridValue::ONE;
        for b in &desc.bad_generators {
            let next = residual - b.expectation.square();
            assert!(next < residual);
            residual = next;
        }
        assert_eq!(residual, GridValue::ZERO);
    }
}
