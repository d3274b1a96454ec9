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


//! The learned object: a signed generating set of the stabilizer group plus
//! one representative and exact expectation per remaining coset.
//!
//! With `G = ⟨φᵢgᵢ⟩` (order `2ᵐ`) and representatives `h₀ = I, h₁, …, h_k`,
//! `ψ = (1/d) Σᵢ tr(hᵢψ) hᵢ Πⱼ(1 + φⱼgⱼ)`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{i_pow, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::f2::IncrementalBasis;
use crate::grid::GridValue;
use crate::oracle::{renyi_entropy, PauliDistribution};
use crate::pauli::{PauliString, SignedPauli};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadGenerator {
    pub pauli: PauliString,
    pub expectation: GridValue,
}

impl BadGenerator {
    pub fn new(pauli: PauliString, expectation: GridValue) -> Self {
        Self { pauli, expectation }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DopedDescription {
    pub n: usize,
    pub t: usize,
    pub generators: Vec<SignedPauli>,
    pub bad_generators: Vec<BadGenerator>,
}

/// Outcome of one named invariant check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn record(&mut self, name: &'static str, failure: Option<String>) {
        self.checks.push(Check {
            name,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        });
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Calls `f` on every element of the group generated by `gens` as a phased
/// Pauli, walking a Gray code so each step is one multiplication.
pub(crate) fn for_each_group_element(n: usize, gens: &[SignedPauli], mut f: impl FnMut(&PauliString)) {
    let phased: Vec<PauliString> = gens.iter().map(SignedPauli::to_phased).collect();
    let mut cur = PauliString::identity(n);
    f(&cur);
    for step in 1u64..(1u64 << gens.len()) {
        let j = step.trailing_zeros() as usize;
        cur.mul_assign(&phased[j]).expect("generator sizes match");
        f(&cur);
    }
}

fn phased_value(p: &PauliString, e: GridValue) -> Result<GridValue> {
    match p.phase() {
        0 => Ok(e),
        2 => Ok(-e),
        _ => Err(Error::NonHermitian(p.to_string())),
    }
}

impl DopedDescription {
    pub fn new(n: usize, t: usize, generators: Vec<SignedPauli>, bad_generators: Vec<BadGenerator>) -> Self {
        Self {
            n,
            t,
            generators,
            bad_generators,
        }
    }

    /// Rank of the stabilizer group.
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    /// Number of bad generators.
    pub fn k(&self) -> usize {
        self.bad_generators.len()
    }

    pub fn nullity(&self) -> usize {
        self.n - self.m().min(self.n)
    }

    fn group_basis(&self) -> IncrementalBasis {
        let mut basis = IncrementalBasis::new(2 * self.n);
        for g in &self.generators {
            basis.insert(&g.pauli().to_symplectic());
        }
        basis
    }

    /// Coset representatives with `I` first, paired with expectations.
    fn cosets(&self) -> impl Iterator<Item = (PauliString, GridValue)> + '_ {
        std::iter::once((PauliString::identity(self.n), GridValue::ONE)).chain(
            self.bad_generators
                .iter()
                .map(|b| (b.pauli.clone(), b.expectation)),
        )
    }

    /// `tr(Pψ)` as implied by the description. Assumes independent
    /// generators; `P` may carry a sign.
    pub fn expectation(&self, p: &PauliString) -> Result<GridValue> {
        if p.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let mut basis = self.group_basis();
        for (h, e) in self.cosets() {
            let w = h.mul(&p.unphased())?;
            if let Some(idx) = basis.decompose(&w.to_symplectic()) {
                let mut prod = h;
                for i in idx {
                    prod.mul_assign(&self.generators[i].to_phased())?;
                }
                return phased_value(p, phased_value(&prod, e)?);
            }
        }
        Ok(GridValue::ZERO)
    }

    /// Every Pauli with nonzero expectation together with that expectation.
    pub fn support(&self) -> Result<Vec<(PauliString, GridValue)>> {
        let mut out = Vec::with_capacity((self.k() + 1) << self.m());
        for (h, e) in self.cosets() {
            let mut failure = None;
            for_each_group_element(self.n, &self.generators, |g| {
                let prod = h.mul(g).expect("sizes checked");
                match phased_value(&prod, e) {
                    Ok(v) => out.push((prod.unphased(), v)),
                    Err(err) => failure = Some(err),
                }
            });
            if let Some(err) = failure {
                return Err(err);
            }
        }
        Ok(out)
    }

    /// Support as a map from Pauli index to value.
    pub fn support_map(&self) -> Result<HashMap<usize, GridValue>> {
        Ok(self.support()?.into_iter().map(|(p, v)| (p.index(), v)).collect())
    }

    /// Checks every structural invariant and reports each one.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let n = self.n;
        let sizes_ok = self.generators.iter().all(|g| g.num_qubits() == n)
            && self.bad_generators.iter().all(|b| b.pauli.num_qubits() == n);
        r.record(
            "dimensions",
            (!sizes_ok).then(|| format!("every operator must act on {n} qubits")),
        );
        if !sizes_ok {
            return r;
        }

        let mut anti = None;
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if anti.is_none() && !a.pauli().commutes_unchecked(b.pauli()) {
                    anti = Some(format!("{a} and {b} anticommute"));
                }
            }
        }
        r.record("generators commute", anti);

        let mut basis = IncrementalBasis::new(2 * n);
        let dependent = self
            .generators
            .iter()
            .find(|g| !basis.insert(&g.pauli().to_symplectic()))
            .map(|g| format!("{g} depends on earlier generators"));
        r.record("generators independent", dependent);

        let m = self.m();
        r.record(
            "group rank",
            (m > n || m + self.t < n).then(|| format!("m = {m} outside [n − t, n] = [{}, {n}]", n.saturating_sub(self.t))),
        );

        let mut noncommuting = None;
        for b in &self.bad_generators {
            if let Some(g) = self.generators.iter().find(|g| !g.pauli().commutes_unchecked(&b.pauli)) {
                noncommuting = Some(format!("{} anticommutes with {g}", b.pauli));
                break;
            }
        }
        r.record("bad generators commute with group", noncommuting);

        let mut labels = HashMap::new();
        labels.insert(basis.reduce(&PauliString::identity(n).to_symplectic()), "I".to_string());
        let mut overlap = None;
        for b in &self.bad_generators {
            let label = basis.reduce(&b.pauli.to_symplectic());
            if let Some(prev) = labels.insert(label, b.pauli.to_string()) {
                overlap.get_or_insert(format!("{} shares a coset with {prev}", b.pauli));
            }
        }
        r.record("cosets disjoint", overlap);

        let range = self
            .bad_generators
            .iter()
            .find(|b| b.expectation.is_zero() || b.expectation.abs() >= GridValue::ONE)
            .map(|b| format!("{} has expectation {}", b.pauli, b.expectation));
        r.record("expectations in (0, 1)", range);

        let k = self.k() as u128;
        let size_ok = (k + 1) <= 1u128 << (2 * self.t).min(127)
            && ((k + 1) << m) <= 1u128 << (n + self.t).min(127);
        r.record(
            "support size",
            (!size_ok).then(|| format!("k = {k}, m = {m} exceed 4ᵗ cosets or 2ᵗ·d support")),
        );

        let sum = self
            .bad_generators
            .iter()
            .fold(GridValue::ONE, |acc, b| acc + b.expectation.square());
        let target = GridValue::from_int(1i64 << (n - m.min(n)));
        r.record(
            "purity",
            (sum != target).then(|| format!("1 + Σ e² = {sum}, expected 2^(n−m) = {target}")),
        );
        r
    }

    /// `χ(hᵢ) = tr²(hᵢψ)·2ᵐ/d` for `h₀ = I` and every bad generator.
    pub fn chi_distribution(&self) -> Vec<(PauliString, GridValue)> {
        let scale = GridValue::new(1, 0, 2 * self.nullity() as u32);
        self.cosets().map(|(h, e)| (h, e.square() * scale)).collect()
    }

    /// `E_α(χ) − ν`.
    pub fn stabilizer_entropy(&self, alpha: f64) -> f64 {
        let chi = self.chi_distribution();
        renyi_entropy(chi.iter().map(|(_, w)| w.to_f64()), alpha) - self.nullity() as f64
    }

    /// Ξ computed from the support alone.
    pub fn structural_xi(&self) -> Result<PauliDistribution> {
        let d = GridValue::new(1, 0, 2 * self.n as u32);
        let entries = self
            .support()?
            .into_iter()
            .map(|(p, e)| (p, (e.square() * d).to_f64()));
        PauliDistribution::from_entries(self.n, entries)
    }

    /// Sampler drawing a coset from χ, then a uniform group element.
    pub fn structural_sampler(&self) -> Result<StructuralSampler> {
        let report = self.validate();
        if let Some(c) = report.failures().next() {
            return Err(Error::Validation(format!("{}: {}", c.name, c.detail)));
        }
        let mut acc = 0.0;
        let cumulative = self
            .chi_distribution()
            .iter()
            .map(|(_, w)| {
                acc += w.to_f64();
                acc
            })
            .collect();
        Ok(StructuralSampler {
            reps: self.cosets().map(|(h, _)| h).collect(),
            gens: self.generators.iter().map(|g| g.pauli().clone()).collect(),
            cumulative,
        })
    }

    /// Dense `ψ` rebuilt from the description.
    pub fn reconstruct_density(&self) -> Result<DMatrix<Complex64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::Resource(format!(
                "reconstruction is capped at {MAX_DENSE_QUBITS} qubits, got {}",
                self.n
            )));
        }
        let d = 1usize << self.n;
        let mut rho = DMatrix::zeros(d, d);
        for (p, e) in self.support()? {
            let w = e.to_f64() / d as f64;
            let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
            let base = (x & z).count_ones();
            for b in 0..d {
                rho[(b ^ x, b)] += i_pow(base + 2 * (z & b).count_ones()) * w;
            }
        }
        Ok(rho)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct StructuralSampler {
    reps: Vec<PauliString>,
    gens: Vec<PauliString>,
    cumulative: Vec<f64>,
}

impl StructuralSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliString {
        let u = rng.random::<f64>() * self.cumulative.last().copied().unwrap_or(1.0);
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.reps.len() - 1);
        let mut p = self.reps[i].clone();
        for g in &self.gens {
            if rng.random::<bool>() {
                p = p.mul(g).expect("sizes checked");
            }
        }
        p.unphased()
    }
}
