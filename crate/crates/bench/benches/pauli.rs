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

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tdoped_bench::{random_clifford, random_paulis};
use tdoped_core::{Direction, IncrementalBasis, SignedPauli, Tableau};

fn multiply(c: &mut Criterion) {
    let mut g = c.benchmark_group("pauli_mul");
    for n in [8, 64, 512] {
        let ps = random_paulis(n, 256, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ps, |b, ps| {
            b.iter(|| {
                for w in ps.windows(2) {
                    black_box(w[0].mul(&w[1]).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn conjugate(c: &mut Criterion) {
    let mut g = c.benchmark_group("clifford_conjugate");
    for n in [8, 64] {
        let circ = random_clifford(n, 20 * n, 2);
        let tab = Tableau::from_circuit(&circ);
        let ps: Vec<SignedPauli> = random_paulis(n, 64, 3).into_iter().map(SignedPauli::plus).collect();
        g.bench_with_input(BenchmarkId::new("gates", n), &ps, |b, ps| {
            b.iter(|| {
                for p in ps {
                    black_box(circ.conjugate_pauli(p, Direction::Forward).unwrap());
                }
            })
        });
        g.bench_with_input(BenchmarkId::new("tableau", n), &ps, |b, ps| {
            b.iter(|| {
                for p in ps {
                    black_box(tab.conjugate(p).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn span(c: &mut Criterion) {
    let mut g = c.benchmark_group("incremental_basis");
    for n in [16, 64] {
        let vs: Vec<_> = random_paulis(n, 2 * n, 4).iter().map(|p| p.to_symplectic()).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &vs, |b, vs| {
            b.iter(|| {
                let mut basis = IncrementalBasis::new(2 * n);
                for v in vs {
                    black_box(basis.insert(v));
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, multiply, conjugate, span);
criterion_main!(benches);
