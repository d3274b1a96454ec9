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


//! Learning a t-doped stabilizer state from query access alone.
//!
//! Algorithm 1 uses Bell samples of `ψ ⊗ ψ*` (distribution Ξ) to find the
//! stabilizer group, then keeps sampling until every coset of nonzero
//! expectation Paulis has a representative with an exactly known value.
//! Algorithm 2 only needs copies of `ψ`: products of pairs of Ξ̃ samples
//! land in the stabilizer group often enough to learn it, after which the
//! diagonalizer isolates an `n − m ≤ t` qubit register that is learned by
//! measuring every Pauli on it.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::{build_diagonalizer, CliffordCircuit, Direction};
use crate::error::{Error, Result};
use crate::f2::IncrementalBasis;
use crate::grid::{grid_gap, nearest_grid, GridValue};
use crate::model::{BadGenerator, DopedDescription};
use crate::oracle::{QueryAccess, Usage};
use crate::pauli::{PauliOp, PauliString, Sign, SignedPauli};

/// Which learning algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Algorithm {
    One,
    Two,
}

impl TryFrom<u8> for Algorithm {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Algorithm::One),
            2 => Ok(Algorithm::Two),
            other => Err(format!("algorithm must be 1 or 2, got {other}")),
        }
    }
}

impl From<Algorithm> for u8 {
    fn from(a: Algorithm) -> u8 {
        match a {
            Algorithm::One => 1,
            Algorithm::Two => 2,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

fn pow2(k: usize) -> u64 {
    1u64.checked_shl(k as u32).unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerConfig {
    /// Shots per membership test.
    pub shots_m: u64,
    /// Shots per exact expectation estimate.
    pub shots_n: u64,
    /// Accepted group samples collected before basis extraction.
    pub group_accepts: usize,
    /// Ξ samples allowed while learning the group.
    pub group_sample_budget: u64,
    /// Ξ samples allowed while searching for bad generators.
    pub bad_gen_sample_budget: u64,
    /// Ξ̃ sample pairs allowed while learning the group with Algorithm 2.
    pub pair_budget: u64,
    pub seed: u64,
}

impl LearnerConfig {
    /// Defaults scaled to `n` qubits and `t` non-Clifford gates.
    pub fn for_instance(n: usize, t: usize, algorithm: Algorithm) -> Self {
        let shots_m = match algorithm {
            Algorithm::One => pow2(3 * t + 1).saturating_mul((n + t) as u64),
            Algorithm::Two => pow2(3 * t).saturating_mul((n + 6 * t) as u64),
        };
        let group_accepts = 2 * n + 10;
        let k = group_accepts as u64;
        Self {
            shots_m: shots_m.max(1),
            shots_n: default_shots_n(t),
            group_accepts,
            group_sample_budget: pow2(t).saturating_mul(10 * k).saturating_add(100),
            bad_gen_sample_budget: pow2(5 * t).saturating_mul(100).saturating_add(1000),
            pair_budget: pow2(6 * t).saturating_mul(4 * k).saturating_add(100),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("shots_m", self.shots_m),
            ("shots_n", self.shots_n),
            ("group_accepts", self.group_accepts as u64),
            ("group_sample_budget", self.group_sample_budget),
            ("bad_gen_sample_budget", self.bad_gen_sample_budget),
            ("pair_budget", self.pair_budget),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(Error::Format(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }
}

/// `⌈8·ln(4ᵗ·100)/gap(t)²⌉`: Hoeffding at half the grid gap, union bounded
/// over up to `4ᵗ` estimates. Falls back to the analytic gap bound when the
/// grid is not enumerable.
pub fn default_shots_n(t: usize) -> u64 {
    let gap = grid_gap(t).unwrap_or_else(|_| crate::grid::delta_lower_bound(t));
    let log = (t as f64) * 4f64.ln() + 100f64.ln();
    (8.0 * log / (gap * gap)).ceil() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnStatus {
    Success,
    BudgetExhausted,
    AmbiguousEstimate,
    /// Learned data contradict each other, e.g. a non-commuting group or a
    /// purity overshoot.
    Inconsistent,
}

impl fmt::Display for LearnStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LearnStatus::Success => "success",
            LearnStatus::BudgetExhausted => "budget-exhausted",
            LearnStatus::AmbiguousEstimate => "ambiguous-estimate",
            LearnStatus::Inconsistent => "inconsistent",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resources {
    pub xi_samples: u64,
    pub xi_tilde_samples: u64,
    pub shots: u64,
    pub psi_copies: u64,
    pub psi_star_copies: u64,
    pub membership_tests: u64,
    pub elimination_steps: u64,
}

impl Resources {
    fn absorb(&mut self, u: Usage) {
        self.xi_samples = u.xi_samples;
        self.xi_tilde_samples = u.xi_tilde_samples;
        self.shots = u.shots;
        self.psi_copies = u.psi_copies;
        self.psi_star_copies = u.psi_star_copies;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnOutcome {
    pub algorithm: Algorithm,
    pub status: LearnStatus,
    /// Complete on success; whatever was learned before stopping otherwise.
    pub description: Option<DopedDescription>,
    pub resources: Resources,
    pub message: Option<String>,
}

/// Measures `P` `M` times. Returns the common outcome if every shot agrees
/// and `None` at the first disagreement. The identity is accepted without
/// measurement.
pub fn test_membership(q: &mut dyn QueryAccess, p: &PauliString, m: u64) -> Result<Option<Sign>> {
    if p.is_identity() {
        return Ok(Some(Sign::Plus));
    }
    let first = q.measure_pauli_shot(p)?;
    for _ in 1..m {
        if q.measure_pauli_shot(p)? != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

/// Mean of `N` shots snapped to the `t` grid.
pub fn estimate_expectation_exact(
    q: &mut dyn QueryAccess,
    p: &PauliString,
    t: usize,
    shots: u64,
) -> Result<GridValue> {
    if p.is_identity() {
        return Ok(GridValue::ONE);
    }
    let mut sum = 0i64;
    for _ in 0..shots.max(1) {
        sum += q.measure_pauli_shot(p)?.value() as i64;
    }
    nearest_grid(sum as f64 / shots.max(1) as f64, t)
}

/// Membership-tested samples feeding an incremental basis.
///
/// True stabilizers are never rejected and always agree in sign with the
/// product of the generators they decompose into. Any sample contradicting
/// that proves an earlier false accept; the builder then starts over.
struct GroupBuilder {
    n: usize,
    basis: IncrementalBasis,
    generators: Vec<SignedPauli>,
    accepts: usize,
    discarded_steps: u64,
}

impl GroupBuilder {
    fn new(n: usize) -> Self {
        Self {
            n,
            basis: IncrementalBasis::new(2 * n),
            generators: Vec::new(),
            accepts: 0,
            discarded_steps: 0,
        }
    }

    fn elimination_steps(&self) -> u64 {
        self.discarded_steps + self.basis.elimination_steps()
    }

    fn restart(&mut self) {
        self.discarded_steps += self.basis.elimination_steps();
        self.basis = IncrementalBasis::new(2 * self.n);
        self.generators.clear();
        self.accepts = 0;
    }

    /// Sign the current generators predict for `p`, if `p` is in their span.
    fn predicted_sign(&mut self, p: &PauliString) -> Result<Option<Sign>> {
        let Some(idx) = self.basis.decompose(&p.to_symplectic()) else {
            return Ok(None);
        };
        let mut prod = PauliString::identity(self.n);
        for i in idx {
            prod.mul_assign(&self.generators[i].to_phased())?;
        }
        Ok(SignedPauli::from_phased(&prod).ok().map(|s| s.sign()))
    }

    fn offer(&mut self, q: &mut dyn QueryAccess, p: PauliString, cfg: &LearnerConfig, res: &mut Resources) -> Result<()> {
        let p = p.unphased();
        if !p.is_identity() {
            res.membership_tests += 1;
        }
        let predicted = self.predicted_sign(&p)?;
        let mut outcome = test_membership(q, &p, cfg.shots_m)?;
        if outcome.is_some() && predicted.is_none() {
            // A new generator must pass a second, independent test.
            res.membership_tests += 1;
            if test_membership(q, &p, cfg.shots_m)? != outcome {
                outcome = None;
            }
        }
        let contradiction = match (outcome, predicted) {
            (None, Some(_)) => true,
            (Some(sign), Some(expected)) => sign != expected,
            (Some(_), None) => self.generators.iter().any(|g| !g.pauli().commutes_unchecked(&p)),
            (None, None) => false,
        };
        if contradiction {
            self.restart();
            return Ok(());
        }
        if let Some(sign) = outcome {
            self.accepts += 1;
            if predicted.is_none() {
                self.basis.insert(&p.to_symplectic());
                self.generators.push(SignedPauli::new(p, sign));
            }
        }
        Ok(())
    }
}

/// Learns a signed generating set of the stabilizer group from Ξ samples.
pub fn learn_group_xi(q: &mut dyn QueryAccess, cfg: &LearnerConfig, res: &mut Resources) -> Result<Vec<SignedPauli>> {
    let mut b = GroupBuilder::new(q.num_qubits());
    let mut drawn = 0u64;
    let out = loop {
        if b.accepts >= cfg.group_accepts {
            break Ok(());
        }
        if drawn >= cfg.group_sample_budget {
            break Err(Error::BudgetExhausted(format!(
                "{drawn} Ξ samples gave {} of {} group members",
                b.accepts, cfg.group_accepts
            )));
        }
        drawn += 1;
        let p = q.sample_xi()?;
        if let Err(e) = b.offer(q, p, cfg, res) {
            break Err(e);
        }
    };
    res.elimination_steps += b.elimination_steps();
    out.map(|_| b.generators)
}

/// Learns the group from products of Ξ̃ sample pairs.
pub fn learn_group_pairs(q: &mut dyn QueryAccess, cfg: &LearnerConfig, res: &mut Resources) -> Result<Vec<SignedPauli>> {
    let mut b = GroupBuilder::new(q.num_qubits());
    let mut pairs = 0u64;
    let out = loop {
        if b.accepts >= cfg.group_accepts {
            break Ok(());
        }
        if pairs >= cfg.pair_budget {
            break Err(Error::BudgetExhausted(format!(
                "{pairs} Ξ̃ sample pairs gave {} of {} group members",
                b.accepts, cfg.group_accepts
            )));
        }
        pairs += 1;
        let step = q
            .sample_xi_tilde()
            .and_then(|p| Ok((p, q.sample_xi_tilde()?)))
            .and_then(|(p, pp)| p.mul(&pp))
            .and_then(|prod| b.offer(q, prod, cfg, res));
        if let Err(e) = step {
            break Err(e);
        }
    };
    res.elimination_steps += b.elimination_steps();
    out.map(|_| b.generators)
}

/// Coset lookup for Paulis commuting with a learned group.
///
/// The diagonalizer path maps `P` to `𝒟P𝒟†`; `P` commutes with the group
/// iff that image has no X part on the first `m` qubits, and two such
/// Paulis share a coset iff their images agree on the remaining qubits.
/// The elimination path labels a coset by the residual of `P` after
/// reduction against the generators.
pub struct CosetIndex {
    n: usize,
    m: usize,
    diag: CliffordCircuit,
    basis: IncrementalBasis,
    by_tail: HashMap<PauliString, usize>,
    by_residual: HashMap<crate::f2::F2Vector, usize>,
}

impl CosetIndex {
    /// Index holding only the group itself (coset 0). Fails if `diag` does
    /// not map each generator to `+Z_i`.
    pub fn new(generators: &[SignedPauli], diag: CliffordCircuit) -> Result<Self> {
        let n = diag.num_qubits();
        let m = generators.len();
        for (i, g) in generators.iter().enumerate() {
            let img = diag.conjugate_pauli(g, Direction::Forward)?;
            if img.sign() != Sign::Plus || *img.pauli() != PauliString::single(n, i, PauliOp::Z) {
                return Err(Error::Consistency(format!(
                    "diagonalizer maps {g} to {img}, not +Z on qubit {i}"
                )));
            }
        }
        let mut basis = IncrementalBasis::new(2 * n);
        for g in generators {
            basis.insert(&g.pauli().to_symplectic());
        }
        let mut index = Self {
            n,
            m,
            diag,
            basis,
            by_tail: HashMap::new(),
            by_residual: HashMap::new(),
        };
        index.insert(&PauliString::identity(n))?;
        Ok(index)
    }

    pub fn elimination_steps(&self) -> u64 {
        self.basis.elimination_steps()
    }

    fn tail(&self, p: &PauliString) -> Result<Option<PauliString>> {
        let mut img = p.unphased();
        self.diag.conjugate_phased(&mut img, Direction::Forward)?;
        if (0..self.m).any(|i| img.x_bit(i)) {
            return Ok(None);
        }
        Ok(Some(img.restrict(self.m, self.n - self.m)))
    }

    /// Registers `h` as the representative of a new coset.
    pub fn insert(&mut self, h: &PauliString) -> Result<usize> {
        let Some(tail) = self.tail(h)? else {
            return Err(Error::Consistency(format!("{h} does not commute with the group")));
        };
        let id = self.by_tail.len();
        self.by_tail.entry(tail).or_insert(id);
        let residual = self.basis.reduce(&h.to_symplectic());
        self.by_residual.entry(residual).or_insert(id);
        Ok(id)
    }

    /// Coset id of `P` via the diagonalizer, if known.
    pub fn lookup(&self, p: &PauliString) -> Result<Option<usize>> {
        Ok(self.tail(p)?.and_then(|t| self.by_tail.get(&t).copied()))
    }

    /// Coset id of `P` via Gaussian elimination, if known.
    pub fn lookup_elimination(&mut self, p: &PauliString) -> Option<usize> {
        let residual = self.basis.reduce(&p.to_symplectic());
        self.by_residual.get(&residual).copied()
    }

    pub fn contains(&self, p: &PauliString) -> Result<bool> {
        Ok(self.lookup(p)?.is_some())
    }
}

/// `P ∈ G ∪ h₁G ∪ … ∪ h_lG`, decided through the diagonalizer.
pub fn coset_check(
    p: &PauliString,
    generators: &[SignedPauli],
    bad_gens: &[PauliString],
    diag: &CliffordCircuit,
) -> Result<bool> {
    let mut index = CosetIndex::new(generators, diag.clone())?;
    for h in bad_gens {
        index.insert(h)?;
    }
    index.contains(p)
}

/// `2^(n−m) − (1 + Σ e²)`; zero exactly when the description is complete.
fn purity_residual(n: usize, m: usize, bad: &[BadGenerator]) -> GridValue {
    let sum = bad
        .iter()
        .fold(GridValue::ONE, |acc, b| acc + b.expectation.square());
    GridValue::from_int(1i64 << (n - m)) - sum
}

/// Samples Ξ until the representatives found account for all purity.
pub fn learn_bad_generators(
    q: &mut dyn QueryAccess,
    t: usize,
    generators: &[SignedPauli],
    diag: &CliffordCircuit,
    cfg: &LearnerConfig,
    res: &mut Resources,
    found: &mut Vec<BadGenerator>,
) -> Result<()> {
    let n = q.num_qubits();
    let m = generators.len();
    let mut index = CosetIndex::new(generators, diag.clone())?;
    let mut drawn = 0u64;
    let result = loop {
        let residual = purity_residual(n, m, found);
        if residual.is_zero() {
            break Ok(());
        }
        if residual < GridValue::ZERO {
            break Err(Error::Consistency(format!(
                "bad generator expectations overshoot purity by {}",
                -residual
            )));
        }
        if drawn >= cfg.bad_gen_sample_budget {
            break Err(Error::BudgetExhausted(format!(
                "{drawn} Ξ samples left purity residual {residual}"
            )));
        }
        drawn += 1;
        let p = q.sample_xi()?.unphased();
        match index.lookup(&p) {
            Ok(Some(_)) => continue,
            Ok(None) => {}
            Err(e) => break Err(e),
        }
        let e = match estimate_expectation_exact(q, &p, t, cfg.shots_n) {
            Ok(e) => e,
            Err(err) => break Err(err),
        };
        if e.is_zero() {
            break Err(Error::Ambiguous {
                value: 0.0,
                nearest: 0.0,
                distance: 0.0,
                radius: grid_gap(t).unwrap_or(0.0) / 2.0,
            });
        }
        if e.abs() == GridValue::ONE {
            break Err(Error::Consistency(format!("{p} is a stabilizer missing from the group")));
        }
        if let Err(err) = index.insert(&p) {
            break Err(err);
        }
        found.push(BadGenerator::new(p, e));
    };
    res.elimination_steps += index.elimination_steps();
    result
}

fn finish(
    algorithm: Algorithm,
    q: &dyn QueryAccess,
    mut res: Resources,
    description: Option<DopedDescription>,
    result: Result<()>,
) -> Result<LearnOutcome> {
    res.absorb(q.usage());
    let (status, message) = match result {
        Ok(()) => (LearnStatus::Success, None),
        Err(e @ Error::BudgetExhausted(_)) => (LearnStatus::BudgetExhausted, Some(e.to_string())),
        Err(e @ Error::Ambiguous { .. }) => (LearnStatus::AmbiguousEstimate, Some(e.to_string())),
        Err(e @ (Error::InvalidGroup(_) | Error::Consistency(_))) => {
            (LearnStatus::Inconsistent, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    Ok(LearnOutcome {
        algorithm,
        status,
        description,
        resources: res,
        message,
    })
}

fn check_nullity(n: usize, t: usize, m: usize) -> Result<()> {
    if m + t < n {
        return Err(Error::Consistency(format!(
            "learned group rank {m} is below n − t = {}",
            n - t
        )));
    }
    Ok(())
}

/// Algorithm 1: group from Ξ samples, then bad generators until purity.
pub fn learn_algorithm1(q: &mut dyn QueryAccess, t: usize, cfg: &LearnerConfig) -> Result<LearnOutcome> {
    cfg.validate()?;
    let n = q.num_qubits();
    let mut res = Resources::default();
    let generators = match learn_group_xi(q, cfg, &mut res) {
        Ok(g) => g,
        Err(e) => return finish(Algorithm::One, q, res, None, Err(e)),
    };
    let mut desc = DopedDescription::new(n, t, generators, Vec::new());
    let step = check_nullity(n, t, desc.m())
        .and_then(|_| build_diagonalizer(&desc.generators, n))
        .and_then(|diag| {
            let mut found = Vec::new();
            let r = learn_bad_generators(q, t, &desc.generators, &diag, cfg, &mut res, &mut found);
            desc.bad_generators = found;
            r
        });
    finish(Algorithm::One, q, res, Some(desc), step)
}

/// Algorithm 2: group from Ξ̃ pair products, then exhaustive estimation of
/// every Pauli on the register the diagonalizer leaves unstabilized.
pub fn learn_algorithm2(q: &mut dyn QueryAccess, t: usize, cfg: &LearnerConfig) -> Result<LearnOutcome> {
    cfg.validate()?;
    let n = q.num_qubits();
    let mut res = Resources::default();
    let generators = match learn_group_pairs(q, cfg, &mut res) {
        Ok(g) => g,
        Err(e) => return finish(Algorithm::Two, q, res, None, Err(e)),
    };
    let mut desc = DopedDescription::new(n, t, generators, Vec::new());
    let m = desc.m();
    let step = check_nullity(n, t, m)
        .and_then(|_| build_diagonalizer(&desc.generators, n))
        .and_then(|diag| {
            let r = n - m;
            for idx in 1..(1usize << (2 * r)) {
                let tail = PauliString::from_index(r, idx);
                let full = PauliString::identity(m).tensor(&tail);
                let mut h = full;
                diag.conjugate_phased(&mut h, Direction::Inverse)?;
                let h = h.unphased();
                let e = estimate_expectation_exact(q, &h, t, cfg.shots_n)?;
                if !e.is_zero() {
                    if e.abs() == GridValue::ONE {
                        return Err(Error::Consistency(format!(
                            "{h} is a stabilizer missing from the group"
                        )));
                    }
                    desc.bad_generators.push(BadGenerator::new(h, e));
                }
            }
            let residual = purity_residual(n, m, &desc.bad_generators);
            if residual.is_zero() {
                Ok(())
            } else {
                Err(Error::Consistency(format!(
                    "estimated expectations leave purity residual {residual}"
                )))
            }
        });
    finish(Algorithm::Two, q, res, Some(desc), step)
}

/// Runs the chosen algorithm.
pub fn learn(q: &mut dyn QueryAccess, t: usize, algorithm: Algorithm, cfg: &LearnerConfig) -> Result<LearnOutcome> {
    match algorithm {
        Algorithm::One => learn_algorithm1(q, t, cfg),
        Algorithm::Two => learn_algorithm2(q, t, cfg),
    }
}
