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


//! Property tests for the structural invariants.

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tdoped_core::dense::{density, trace_distance};
use tdoped_core::experiment::random_doped_circuit;
use tdoped_core::f2::in_span;
use tdoped_core::grid::{delta_lower_bound, enumerate_grid, GridValue};
use tdoped_core::oracle::ORACLE_TOL;
use tdoped_core::{
    BitMatrix, Direction, F2Vector, IncrementalBasis, PauliString, SignedPauli, StateOracle, Tableau,
};

fn grid_value() -> impl Strategy<Value = GridValue> {
    (-2000i64..2000, -2000i64..2000, 0u32..12).prop_map(|(a, b, t)| GridValue::new(a, b, t))
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (0..1usize << (2 * n), 0u8..4).prop_map(move |(i, k)| PauliString::from_index(n, i).with_phase(k))
}

fn oracle(n: usize, t: usize, seed: u64) -> StateOracle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StateOracle::new(random_doped_circuit(n, t, &mut rng).unwrap()).unwrap()
}

fn rel_close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn grid_arithmetic_is_exact(x in grid_value(), y in grid_value()) {
        prop_assert!(rel_close((x * y).to_f64(), x.to_f64() * y.to_f64()));
        prop_assert!(rel_close((x + y).to_f64(), x.to_f64() + y.to_f64()));
        prop_assert!(rel_close(x.square().to_f64(), x.to_f64().powi(2)));
        if (x.to_f64() - y.to_f64()).abs() > 1e-6 {
            prop_assert_eq!(x < y, x.to_f64() < y.to_f64());
        }
        prop_assert_eq!(x - x, GridValue::ZERO);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pauli_group_law(p in pauli(4), q in pauli(4), r in pauli(4)) {
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let pq = p.mul(&q).unwrap();
        let qp = q.mul(&p).unwrap();
        prop_assert!(pq.eq_up_to_phase(&qp));
        prop_assert_eq!(pq == qp, p.commutes(&q).unwrap());
        prop_assert_eq!(p.commutes(&q).unwrap(), q.commutes(&p).unwrap());
        let h = p.unphased();
        prop_assert!(h.mul(&h).unwrap().is_identity());
        prop_assert_eq!(h.mul(&h).unwrap().phase(), 0);
    }

    #[test]
    fn conjugation_round_trips_and_tableaux_are_valid(seed in any::<u64>(), n in 1usize..6, idx in any::<usize>(), minus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_doped_circuit(n, 0, &mut rng).unwrap().to_clifford().unwrap();
        let p = PauliString::from_index(n, idx % (1 << (2 * n)));
        let sp = if minus { SignedPauli::plus(p).negated() } else { SignedPauli::plus(p) };
        let img = c.conjugate_pauli(&sp, Direction::Forward).unwrap();
        prop_assert_eq!(&c.conjugate_pauli(&img, Direction::Inverse).unwrap(), &sp);
        let tab = Tableau::from_circuit(&c);
        prop_assert!(tab.validate().is_ok());
        prop_assert_eq!(tab.conjugate(&sp).unwrap(), img);
    }

    #[test]
    fn span_membership_matches_enumeration(seed in any::<u64>(), k in 1usize..=12, v_bits in any::<u16>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vecs: Vec<F2Vector> = (0..k)
            .map(|_| (0..10).map(|_| rng.random::<bool>()).collect())
            .collect();
        let mut span = HashSet::new();
        for mask in 0u32..(1 << k) {
            let mut acc = F2Vector::zeros(10);
            for (i, v) in vecs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.xor_assign(v);
                }
            }
            span.insert(acc);
        }
        let m = BitMatrix::from_rows(10, &vecs).unwrap();
        prop_assert_eq!(1usize << m.rank(), span.len());
        let v: F2Vector = (0..10).map(|i| v_bits >> i & 1 == 1).collect();
        prop_assert_eq!(in_span(&v, &m).unwrap(), span.contains(&v));
        let mut inc = IncrementalBasis::new(10);
        vecs.iter().for_each(|w| { inc.insert(w); });
        prop_assert_eq!(inc.contains(&v), span.contains(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Ground-truth descriptions satisfy every invariant and agree with the
    /// oracle on every Pauli.
    #[test]
    fn oracle_descriptions_are_valid_and_exact(seed in any::<u64>(), n in 1usize..=5, t in 0usize..=3) {
        let o = oracle(n, t, seed);
        let desc = o.description().unwrap();
        let report = desc.validate();
        prop_assert!(report.is_valid(), "{:?}", report.failures().collect::<Vec<_>>());
        for (i, &e) in o.expectations().iter().enumerate() {
            let v = desc.expectation(&PauliString::from_index(n, i)).unwrap();
            prop_assert!((v.to_f64() - e).abs() < 1e-9);
        }
        let z0 = PauliString::single(n, 0, tdoped_core::PauliOp::Z);
        let plus = desc.expectation(&z0).unwrap();
        let minus = desc.expectation(&z0.with_phase(2)).unwrap();
        prop_assert_eq!(minus, -plus);
    }

    /// χ(hᵢ) is the Ξ mass of the coset hᵢG, and both entropy formulas agree.
    #[test]
    fn chi_and_entropy_match_xi(seed in any::<u64>(), n in 1usize..=5, t in 0usize..=3) {
        let o = oracle(n, t, seed);
        let desc = o.description().unwrap();
        let mut basis = IncrementalBasis::new(2 * n);
        for g in &desc.generators {
            basis.insert(&g.pauli().to_symplectic());
        }
        let mut coset_mass: HashMap<F2Vector, f64> = HashMap::new();
        for (p, w) in o.xi().support() {
            *coset_mass.entry(basis.reduce(&p.to_symplectic())).or_default() += w;
        }
        for (h, chi) in desc.chi_distribution() {
            let mass = coset_mass[&basis.reduce(&h.to_symplectic())];
            prop_assert!((chi.to_f64() - mass).abs() < 1e-9);
        }
        let total: GridValue = desc.chi_distribution().into_iter().fold(GridValue::ZERO, |a, (_, w)| a + w);
        prop_assert_eq!(total, GridValue::ONE);
        for alpha in [0.0, 1.0, 2.0] {
            let from_xi = o.xi().renyi_entropy(alpha) - n as f64;
            prop_assert!((desc.stabilizer_entropy(alpha) - from_xi).abs() < 1e-9);
        }
        prop_assert!(desc.stabilizer_entropy(0.0) <= t as f64 + 1e-9);
        let structural = desc.structural_xi().unwrap();
        for (p, w) in o.xi().support() {
            prop_assert!((structural.probability(p) - w).abs() < 1e-10);
        }
        prop_assert_eq!(structural.support().len(), o.xi().support().len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reconstruction_matches_oracle_density(seed in any::<u64>(), n in 1usize..=5, t in 0usize..=3) {
        let o = oracle(n, t, seed);
        let rho = o.description().unwrap().reconstruct_density().unwrap();
        let td = trace_distance(&rho, &density(o.state().amplitudes())).unwrap();
        prop_assert!(td < 1e-8, "trace distance {}", td);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(((&rho * &rho) - &rho).iter().all(|z| z.norm() < 1e-8));
    }

    /// Distinct oracle expectations are separated by at least the analytic
    /// resolution bound and lie on the enumerated grid.
    #[test]
    fn expectations_respect_resolution(seed in any::<u64>(), n in 1usize..=4, t in 0usize..=4) {
        let o = oracle(n, t, seed);
        let grid: Vec<f64> = enumerate_grid(t).unwrap().iter().map(|v| v.to_f64()).collect();
        let mut values = o.expectations().to_vec();
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| (*a - *b).abs() <= ORACLE_TOL);
        for w in values.windows(2) {
            prop_assert!(w[1] - w[0] >= delta_lower_bound(t));
        }
        for v in values {
            prop_assert!(grid.iter().any(|g| (g - v).abs() < 1e-9), "{} off grid", v);
        }
    }
}
