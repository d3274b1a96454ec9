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


//! Dense statevector ground truth and simulated query access.
//!
//! [`StateOracle`] holds an immutable prepared state together with its full
//! table of Pauli expectations and the exact Bell-sampling distributions Ξ
//! and Ξ̃. Learners never see it directly: they go through [`QueryAccess`],
//! which only hands out samples and single-shot measurement outcomes and
//! counts every copy of the state consumed.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{DopedCircuit, Gate};
use crate::dense::i_pow;
use crate::error::{check_dim, Error, Result};
use crate::f2::IncrementalBasis;
use crate::grid::nearest_grid;
use crate::model::{BadGenerator, DopedDescription};
use crate::pauli::{PauliString, Sign, SignedPauli};

/// Default register cap for dense simulation.
pub const MAX_QUBITS: usize = 12;

/// Probabilities at or below this are dropped from distribution supports.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Tolerance for deciding `|tr(Pψ)| = 1` and for snapping oracle values.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0ⁿ⟩`.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "statevectors are capped at {MAX_QUBITS} qubits, got {n}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps amplitudes; rejects wrong lengths and non-unit norms.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "statevectors are capped at {MAX_QUBITS} qubits, got {n}"
            )));
        }
        check_dim(1 << n, amps.len())?;
        let s = Self { n, amps };
        if (s.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Consistency(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dim(self.n, other.n)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Euclidean norm of the difference.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        if g.max_qubit() >= self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: g.max_qubit() + 1,
            });
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phase = |q: usize, f: Complex64, amps: &mut [Complex64]| {
            for (i, a) in amps.iter_mut().enumerate() {
                if i >> q & 1 == 1 {
                    *a *= f;
                }
            }
        };
        let amps = &mut self.amps;
        match *g {
            Gate::H(q) => {
                for i in 0..amps.len() {
                    if i >> q & 1 == 0 {
                        let j = i | 1 << q;
                        let (a, b) = (amps[i], amps[j]);
                        amps[i] = (a + b) * h;
                        amps[j] = (a - b) * h;
                    }
                }
            }
            Gate::X(q) => {
                for i in 0..amps.len() {
                    if i >> q & 1 == 0 {
                        amps.swap(i, i | 1 << q);
                    }
                }
            }
            Gate::Z(q) => phase(q, Complex64::new(-1.0, 0.0), amps),
            Gate::S(q) => phase(q, Complex64::new(0.0, 1.0), amps),
            Gate::SDag(q) => phase(q, Complex64::new(0.0, -1.0), amps),
            Gate::T(q) => phase(q, Complex64::new(h, h), amps),
            Gate::TDag(q) => phase(q, Complex64::new(h, -h), amps),
            Gate::Cnot(c, t) => {
                for i in 0..amps.len() {
                    if i >> c & 1 == 1 && i >> t & 1 == 0 {
                        amps.swap(i, i | 1 << t);
                    }
                }
            }
            Gate::Cz(a, b) => {
                for (i, v) in amps.iter_mut().enumerate() {
                    if i >> a & 1 == 1 && i >> b & 1 == 1 {
                        *v = -*v;
                    }
                }
            }
        }
        Ok(())
    }

    /// `P|ψ⟩` including the phase of `P`.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<Self> {
        check_dim(self.n, p.num_qubits())?;
        let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
        let base = p.phase() as u32 + (x & z).count_ones();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            out[b ^ x] = a * i_pow(base + 2 * (z & b).count_ones());
        }
        Ok(Self { n: self.n, amps: out })
    }
}

/// `C|0ⁿ⟩`.
pub fn run_circuit(c: &DopedCircuit) -> Result<StateVector> {
    let mut psi = StateVector::zero_state(c.num_qubits())?;
    for g in c.gates() {
        psi.apply_gate(g)?;
    }
    Ok(psi)
}

/// `tr(Pψ)` for a Hermitian (even-phase) Pauli.
pub fn pauli_expectation(psi: &StateVector, p: &PauliString) -> Result<f64> {
    if !p.is_hermitian() {
        return Err(Error::NonHermitian(p.to_string()));
    }
    Ok(psi.inner(&psi.apply_pauli(p)?)?.re)
}

fn walsh_hadamard(f: &mut [Complex64]) {
    let mut h = 1;
    while h < f.len() {
        for i in (0..f.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (f[j], f[j + h]);
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `⟨bra|P|ket⟩` for every unphased Pauli, indexed by [`PauliString::index`].
fn overlap_table(bra: &StateVector, ket: &StateVector) -> Vec<Complex64> {
    let d = bra.amps.len();
    let mut table = vec![Complex64::new(0.0, 0.0); d * d];
    let mut f = vec![Complex64::new(0.0, 0.0); d];
    for x in 0..d {
        for (b, slot) in f.iter_mut().enumerate() {
            *slot = bra.amps[b ^ x].conj() * ket.amps[b];
        }
        walsh_hadamard(&mut f);
        for (z, v) in f.iter().enumerate() {
            table[x + d * z] = v * i_pow((x & z).count_ones());
        }
    }
    table
}

/// `tr(Pψ)` for all `4ⁿ` unphased Paulis, indexed by [`PauliString::index`].
pub fn expectation_table(psi: &StateVector) -> Vec<f64> {
    overlap_table(psi, psi).into_iter().map(|v| v.re).collect()
}

/// A distribution over unphased Paulis with an explicit support.
#[derive(Clone, Debug)]
pub struct PauliDistribution {
    n: usize,
    support: Vec<(PauliString, f64)>,
    cumulative: Vec<f64>,
}

impl PauliDistribution {
    /// Builds from `(pauli, probability)` entries, dropping entries at or
    /// below [`SUPPORT_THRESHOLD`] and merging repeated Paulis.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (PauliString, f64)>) -> Result<Self> {
        let mut merged: HashMap<PauliString, f64> = HashMap::new();
        for (p, w) in entries {
            check_dim(n, p.num_qubits())?;
            if w < 0.0 {
                return Err(Error::Consistency(format!("negative probability {w} for {p}")));
            }
            *merged.entry(p.unphased()).or_insert(0.0) += w;
        }
        let mut support: Vec<(PauliString, f64)> =
            merged.into_iter().filter(|&(_, w)| w > SUPPORT_THRESHOLD).collect();
        support.sort_by_key(|(p, _)| p.index());
        let mut acc = 0.0;
        let cumulative = support
            .iter()
            .map(|&(_, w)| {
                acc += w;
                acc
            })
            .collect();
        Ok(Self {
            n,
            support,
            cumulative,
        })
    }

    fn from_table(n: usize, probs: impl Iterator<Item = f64>) -> Self {
        let entries = probs
            .enumerate()
            .filter(|&(_, w)| w > SUPPORT_THRESHOLD)
            .map(|(i, w)| (PauliString::from_index(n, i), w));
        Self::from_entries(n, entries).expect("table entries are well formed")
    }

    /// Empirical distribution of a list of samples.
    pub fn from_samples(n: usize, samples: &[PauliString]) -> Result<Self> {
        let w = 1.0 / samples.len().max(1) as f64;
        Self::from_entries(n, samples.iter().map(|p| (p.clone(), w)))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Support sorted by Pauli index.
    pub fn support(&self) -> &[(PauliString, f64)] {
        &self.support
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn probability(&self, p: &PauliString) -> f64 {
        let idx = p.index();
        self.support
            .binary_search_by_key(&idx, |(q, _)| q.index())
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliString {
        let u = rng.random::<f64>() * self.total();
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.support[i.min(self.support.len() - 1)].0.clone()
    }

    /// `½ Σ |p − q|` over the union of supports.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let mut diff: HashMap<usize, f64> = HashMap::new();
        for (p, w) in &self.support {
            *diff.entry(p.index()).or_insert(0.0) += w;
        }
        for (p, w) in &other.support {
            *diff.entry(p.index()).or_insert(0.0) -= w;
        }
        0.5 * diff.values().map(|v| v.abs()).sum::<f64>()
    }

    /// Rényi entropy in bits; `α = 1` is the Shannon entropy.
    pub fn renyi_entropy(&self, alpha: f64) -> f64 {
        renyi_entropy(self.support.iter().map(|&(_, w)| w), alpha)
    }
}

pub(crate) fn renyi_entropy(probs: impl Iterator<Item = f64>, alpha: f64) -> f64 {
    let probs: Vec<f64> = probs.filter(|&p| p > 0.0).collect();
    if alpha == 0.0 {
        (probs.len() as f64).log2()
    } else if (alpha - 1.0).abs() < 1e-12 {
        -probs.iter().map(|p| p * p.log2()).sum::<f64>()
    } else {
        probs.iter().map(|p| p.powf(alpha)).sum::<f64>().log2() / (1.0 - alpha)
    }
}

/// `Ξ(P) = tr²(Pψ)/d`.
pub fn exact_xi(psi: &StateVector) -> PauliDistribution {
    let d = (1usize << psi.n) as f64;
    PauliDistribution::from_table(psi.n, expectation_table(psi).into_iter().map(|e| e * e / d))
}

/// `Ξ̃(P) = |⟨ψ|P|ψ*⟩|²/d`.
pub fn exact_xi_tilde(psi: &StateVector, psi_star: &StateVector) -> Result<PauliDistribution> {
    check_dim(psi.n, psi_star.n)?;
    let mismatch = psi.conj().distance(psi_star)?;
    if mismatch > 1e-10 {
        return Err(Error::Consistency(format!(
            "conjugate state differs from conj(ψ) by {mismatch:.3e}"
        )));
    }
    let d = (1usize << psi.n) as f64;
    Ok(PauliDistribution::from_table(
        psi.n,
        overlap_table(psi, psi_star).into_iter().map(|v| v.norm_sqr() / d),
    ))
}

/// Immutable ground truth for one prepared state.
#[derive(Debug)]
pub struct StateOracle {
    circuit: DopedCircuit,
    psi: StateVector,
    psi_star: StateVector,
    table: Vec<f64>,
    xi: PauliDistribution,
    xi_tilde: PauliDistribution,
}

impl StateOracle {
    /// Simulates `C|0ⁿ⟩` and its conjugate circuit and tabulates everything.
    pub fn new(circuit: DopedCircuit) -> Result<Self> {
        let psi = run_circuit(&circuit)?;
        let psi_star = run_circuit(&circuit.conjugate())?;
        let xi_tilde = exact_xi_tilde(&psi, &psi_star)?;
        let table = expectation_table(&psi);
        let d = (1usize << psi.n) as f64;
        let xi = PauliDistribution::from_table(psi.n, table.iter().map(|e| e * e / d));
        Ok(Self {
            circuit,
            psi,
            psi_star,
            table,
            xi,
            xi_tilde,
        })
    }

    pub fn circuit(&self) -> &DopedCircuit {
        &self.circuit
    }

    pub fn num_qubits(&self) -> usize {
        self.psi.n
    }

    pub fn t_count(&self) -> usize {
        self.circuit.t_count()
    }

    pub fn state(&self) -> &StateVector {
        &self.psi
    }

    pub fn conjugate_state(&self) -> &StateVector {
        &self.psi_star
    }

    /// Expectations of all unphased Paulis, indexed by [`PauliString::index`].
    pub fn expectations(&self) -> &[f64] {
        &self.table
    }

    /// `tr(Pψ)`; a phase of `−1` on `P` negates the value.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        check_dim(self.num_qubits(), p.num_qubits())?;
        let v = self.table[p.index()];
        match p.phase() {
            0 => Ok(v),
            2 => Ok(-v),
            _ => Err(Error::NonHermitian(p.to_string())),
        }
    }

    pub fn xi(&self) -> &PauliDistribution {
        &self.xi
    }

    pub fn xi_tilde(&self) -> &PauliDistribution {
        &self.xi_tilde
    }

    /// Every signed Pauli stabilizing the state, identity included.
    pub fn stabilizer_group(&self) -> Vec<SignedPauli> {
        let n = self.num_qubits();
        self.table
            .iter()
            .enumerate()
            .filter(|(_, e)| e.abs() >= 1.0 - ORACLE_TOL)
            .map(|(i, &e)| SignedPauli::new(PauliString::from_index(n, i), Sign::from_value(e.signum() as i8)))
            .collect()
    }

    /// `max_P |⟨ψ|P|ψ*⟩|`.
    pub fn max_bell_overlap(&self) -> f64 {
        let d = (1usize << self.num_qubits()) as f64;
        self.xi_tilde
            .support()
            .iter()
            .map(|&(_, w)| (w * d).sqrt())
            .fold(0.0, f64::max)
    }

    /// The exact description read off the expectation table: a generating
    /// set of the stabilizer group with signs, and for every other coset of
    /// nonzero-expectation Paulis its lowest-index member with its value
    /// snapped to the grid.
    pub fn description(&self) -> Result<DopedDescription> {
        let n = self.num_qubits();
        let t = self.t_count();
        let mut basis = IncrementalBasis::new(2 * n);
        let mut generators = Vec::new();
        for g in self.stabilizer_group() {
            if basis.insert(&g.pauli().to_symplectic()) {
                generators.push(g);
            }
        }
        let mut seen = std::collections::HashSet::new();
        seen.insert(basis.reduce(&PauliString::identity(n).to_symplectic()));
        let mut bad = Vec::new();
        for (i, &e) in self.table.iter().enumerate() {
            if e.abs() <= ORACLE_TOL {
                continue;
            }
            let p = PauliString::from_index(n, i);
            if !seen.insert(basis.reduce(&p.to_symplectic())) {
                continue;
            }
            let snapped = nearest_grid(e, t)?;
            if (snapped.to_f64() - e).abs() > ORACLE_TOL {
                return Err(Error::Consistency(format!(
                    "expectation {e} of {p} is not a grid value at t = {t}"
                )));
            }
            bad.push(BadGenerator::new(p, snapped));
        }
        Ok(DopedDescription::new(n, t, generators, bad))
    }
}

/// Copies of the state consumed through a [`QueryAccess`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub xi_samples: u64,
    pub xi_tilde_samples: u64,
    pub shots: u64,
    pub psi_copies: u64,
    pub psi_star_copies: u64,
}

/// The only view of a state a learner gets.
pub trait QueryAccess {
    fn num_qubits(&self) -> usize;
    /// One Bell measurement of `ψ ⊗ ψ*`.
    fn sample_xi(&mut self) -> Result<PauliString>;
    /// One Bell measurement of `ψ ⊗ ψ`.
    fn sample_xi_tilde(&mut self) -> Result<PauliString>;
    /// One single-copy measurement of a Hermitian Pauli.
    fn measure_pauli_shot(&mut self, p: &PauliString) -> Result<Sign>;
    fn usage(&self) -> Usage;
}

/// Oracle-backed query access with its own seeded random stream.
#[derive(Debug)]
pub struct QueryModel {
    oracle: Arc<StateOracle>,
    rng: ChaCha8Rng,
    usage: Usage,
}

impl QueryModel {
    pub fn new(oracle: Arc<StateOracle>, seed: u64) -> Self {
        Self {
            oracle,
            rng: ChaCha8Rng::seed_from_u64(seed),
            usage: Usage::default(),
        }
    }

    pub fn oracle(&self) -> &StateOracle {
        &self.oracle
    }
}

impl QueryAccess for QueryModel {
    fn num_qubits(&self) -> usize {
        self.oracle.num_qubits()
    }

    fn sample_xi(&mut self) -> Result<PauliString> {
        self.usage.xi_samples += 1;
        self.usage.psi_copies += 1;
        self.usage.psi_star_copies += 1;
        Ok(self.oracle.xi.sample(&mut self.rng))
    }

    fn sample_xi_tilde(&mut self) -> Result<PauliString> {
        self.usage.xi_tilde_samples += 1;
        self.usage.psi_copies += 2;
        Ok(self.oracle.xi_tilde.sample(&mut self.rng))
    }

    fn measure_pauli_shot(&mut self, p: &PauliString) -> Result<Sign> {
        let e = self.oracle.expectation(p)?;
        self.usage.shots += 1;
        self.usage.psi_copies += 1;
        let plus = self.rng.random::<f64>() < (1.0 + e) / 2.0;
        Ok(if plus { Sign::Plus } else { Sign::Minus })
    }

    fn usage(&self) -> Usage {
        self.usage
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_plus() -> DopedCircuit {
        DopedCircuit::new(1, vec![Gate::H(0), Gate::T(0)]).unwrap()
    }

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn t_plus_amplitudes_and_expectations() {
        let psi = run_circuit(&t_plus()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes()[0] - Complex64::new(h, 0.0)).norm() < 1e-12);
        assert!((psi.amplitudes()[1] - Complex64::new(0.5, 0.5)).norm() < 1e-12);
        assert!((pauli_expectation(&psi, &p("X")).unwrap() - h).abs() < 1e-12);
        assert!((pauli_expectation(&psi, &p("Y")).unwrap() - h).abs() < 1e-12);
        assert!(pauli_expectation(&psi, &p("Z")).unwrap().abs() < 1e-12);
        let table = expectation_table(&psi);
        assert!((table[p("Y").index()] - h).abs() < 1e-12);
    }

    #[test]
    fn xi_of_t_plus() {
        let o = StateOracle::new(t_plus()).unwrap();
        let xi = o.xi();
        assert!((xi.probability(&p("I")) - 0.5).abs() < 1e-12);
        assert!((xi.probability(&p("X")) - 0.25).abs() < 1e-12);
        assert!((xi.probability(&p("Y")) - 0.25).abs() < 1e-12);
        assert_eq!(xi.probability(&p("Z")), 0.0);
    }

    #[test]
    fn xi_tilde_of_zero_state() {
        let psi = StateVector::zero_state(1).unwrap();
        let xt = exact_xi_tilde(&psi, &psi.conj()).unwrap();
        assert!((xt.probability(&p("I")) - 0.5).abs() < 1e-12);
        assert!((xt.probability(&p("Z")) - 0.5).abs() < 1e-12);
        let plus_i = run_circuit(&DopedCircuit::new(1, vec![Gate::H(0), Gate::S(0)]).unwrap()).unwrap();
        assert!(matches!(
            exact_xi_tilde(&plus_i, &plus_i),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn phased_expectations() {
        let o = StateOracle::new(DopedCircuit::new(1, vec![]).unwrap()).unwrap();
        assert_eq!(o.expectation(&p("Z")).unwrap(), 1.0);
        assert_eq!(o.expectation(&p("-Z")).unwrap(), -1.0);
        assert!(o.expectation(&p("iZ")).is_err());
    }

    #[test]
    fn shots_follow_expectation_and_are_counted() {
        let o = Arc::new(StateOracle::new(t_plus()).unwrap());
        let mut q = QueryModel::new(o, 11);
        let shots = 100_000;
        let mean: f64 = (0..shots)
            .map(|_| q.measure_pauli_shot(&p("X")).unwrap().value() as f64)
            .sum::<f64>()
            / shots as f64;
        assert!((mean - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.02);
        q.sample_xi().unwrap();
        q.sample_xi_tilde().unwrap();
        let u = q.usage();
        assert_eq!(u.shots, shots);
        assert_eq!((u.xi_samples, u.xi_tilde_samples), (1, 1));
        assert_eq!(u.psi_copies, shots + 3);
        assert_eq!(u.psi_star_copies, 1);
    }

    #[test]
    fn seeded_models_are_reproducible() {
        let o = Arc::new(StateOracle::new(t_plus()).unwrap());
        let run = |seed| {
            let mut q = QueryModel::new(o.clone(), seed);
            (0..50).map(|_| q.sample_xi().unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }

    #[test]
    fn renyi_entropies() {
        let probs = [0.5, 0.25, 0.25];
        assert!((renyi_entropy(probs.into_iter(), 0.0) - 3f64.log2()).abs() < 1e-12);
        assert!((renyi_entropy(probs.into_iter(), 1.0) - 1.5).abs() < 1e-12);
        assert!((renyi_entropy(probs.into_iter(), 2.0) + (0.375f64).log2()).abs() < 1e-12);
    }
}
