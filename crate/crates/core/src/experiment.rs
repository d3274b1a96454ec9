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


//! Random instances, oracle verification of learned descriptions and
//! experiment records.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{DopedCircuit, Gate};
use crate::dense::{density, trace_distance, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::grid::{nearest_grid, GridValue};
use crate::learner::{learn, Algorithm, LearnOutcome, LearnStatus, LearnerConfig};
use crate::model::DopedDescription;
use crate::oracle::{QueryModel, StateOracle, MAX_QUBITS, ORACLE_TOL};
use crate::pauli::{PauliString, Sign};

/// Random Clifford gates with exactly `t` T gates at uniformly random
/// positions. The Clifford part has `max(10n, 20)` gates.
pub fn random_doped_circuit<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<DopedCircuit> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Resource(format!("n must be in 1..={MAX_QUBITS}, got {n}")));
    }
    if t > 12 {
        return Err(Error::Resource(format!("t is capped at 12, got {t}")));
    }
    let len = (10 * n).max(20);
    let mut gates: Vec<Gate> = (0..len).map(|_| random_clifford_gate(n, rng)).collect();
    for _ in 0..t {
        let pos = rng.random_range(0..=gates.len());
        gates.insert(pos, Gate::T(rng.random_range(0..n)));
    }
    DopedCircuit::new(n, gates)
}

/// Draws H, CNOT and CZ more often than the diagonal and Pauli gates so
/// that short circuits still mix well.
fn random_clifford_gate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gate {
    let q = rng.random_range(0..n);
    let other = |rng: &mut R| {
        let r = rng.random_range(0..n - 1);
        if r >= q {
            r + 1
        } else {
            r
        }
    };
    let roll = rng.random_range(0..if n >= 2 { 20 } else { 12 });
    match roll {
        0..=5 => Gate::H(q),
        6..=7 => Gate::S(q),
        8..=9 => Gate::SDag(q),
        10 => Gate::X(q),
        11 => Gate::Z(q),
        12..=16 => Gate::Cnot(q, other(rng)),
        _ => Gate::Cz(q, other(rng)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactMatch,
    Mismatch,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub trace_distance: Option<f64>,
    /// Human-readable discrepancies, generators first.
    pub problems: Vec<String>,
}

const MAX_REPORTED: usize = 8;

/// Compares a description with the oracle: every `4ⁿ` expectation must agree
/// as a grid value and the reconstructed density must be within `1e−8`
/// trace distance.
pub fn verify_description(oracle: &StateOracle, desc: &DopedDescription) -> Result<VerifyReport> {
    let n = oracle.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Resource(format!(
            "verification is capped at {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    if desc.n != n {
        return Err(Error::Dimension {
            expected: n,
            found: desc.n,
        });
    }
    let mut problems = Vec::new();
    for g in &desc.generators {
        let e = oracle.expectation(g.pauli())?;
        let expected = if g.sign() == Sign::Plus { 1.0 } else { -1.0 };
        if (e - expected).abs() > ORACLE_TOL {
            problems.push(format!("generator {g} has oracle expectation {e:.6}"));
        }
    }
    for c in desc.validate().failures() {
        problems.push(format!("{}: {}", c.name, c.detail));
    }
    let claimed = desc.support_map()?;
    let t = oracle.t_count();
    let mut value_mismatches = 0usize;
    for (i, &e) in oracle.expectations().iter().enumerate() {
        let truth = if e.abs() <= ORACLE_TOL { GridValue::ZERO } else { nearest_grid(e, t)? };
        let got = claimed.get(&i).copied().unwrap_or(GridValue::ZERO);
        if got != truth {
            value_mismatches += 1;
            if value_mismatches <= MAX_REPORTED {
                problems.push(format!(
                    "{} expected {truth} found {got}",
                    PauliString::from_index(n, i)
                ));
            }
        }
    }
    if value_mismatches > MAX_REPORTED {
        problems.push(format!("{} expectation mismatches in total", value_mismatches));
    }
    let rho = desc.reconstruct_density()?;
    let td = trace_distance(&rho, &density(oracle.state().amplitudes()))?;
    if td.is_nan() || td >= 1e-8 {
        problems.push(format!("trace distance {td:.3e}"));
    }
    Ok(VerifyReport {
        verdict: if problems.is_empty() { Verdict::ExactMatch } else { Verdict::Mismatch },
        trace_distance: Some(td),
        problems,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub learn_ms: f64,
    pub verify_ms: f64,
}

/// One learner run on one circuit, with its oracle verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub circuit: String,
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub config: LearnerConfig,
    pub outcome: LearnOutcome,
    pub verdict: Verdict,
    pub problems: Vec<String>,
    pub timings: Timings,
}

/// Learns `circuit` with `algorithm` and verifies the result.
pub fn run_trial(
    circuit_ref: &str,
    circuit: &DopedCircuit,
    algorithm: Algorithm,
    config: &LearnerConfig,
) -> Result<ExperimentRecord> {
    let oracle = std::sync::Arc::new(StateOracle::new(circuit.clone())?);
    let t = circuit.t_count();
    let mut q = QueryModel::new(oracle.clone(), config.seed);
    let start = Instant::now();
    let outcome = learn(&mut q, t, algorithm, config)?;
    let learn_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let (verdict, problems) = match (&outcome.status, &outcome.description) {
        (LearnStatus::Success, Some(d)) => {
            let r = verify_description(&oracle, d)?;
            (r.verdict, r.problems)
        }
        _ => (Verdict::Failed, outcome.message.clone().into_iter().collect()),
    };
    let verify_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentRecord {
        circuit: circuit_ref.to_string(),
        n: circuit.num_qubits(),
        t,
        seed: config.seed,
        config: config.clone(),
        outcome,
        verdict,
        problems,
        timings: Timings { learn_ms, verify_ms },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsRow {
    pub t: usize,
    pub runs: usize,
    pub median_xi_samples: f64,
    pub median_xi_tilde_samples: f64,
    pub median_shots: f64,
    pub success_rate: f64,
}

fn median(mut v: Vec<u64>) -> f64 {
    v.sort_unstable();
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2] as f64
    } else {
        (v[k / 2 - 1] + v[k / 2]) as f64 / 2.0
    }
}

/// Per-`t` medians of sample and shot counts and the exact-match rate.
pub fn summarize(records: &[ExperimentRecord]) -> Result<Vec<StatsRow>> {
    if records.is_empty() {
        return Err(Error::Format("no experiment records".into()));
    }
    let mut by_t: BTreeMap<usize, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        by_t.entry(r.t).or_default().push(r);
    }
    Ok(by_t
        .into_iter()
        .map(|(t, rs)| {
            let col = |f: fn(&ExperimentRecord) -> u64| median(rs.iter().map(|r| f(r)).collect());
            StatsRow {
                t,
                runs: rs.len(),
                median_xi_samples: col(|r| r.outcome.resources.xi_samples),
                median_xi_tilde_samples: col(|r| r.outcome.resources.xi_tilde_samples),
                median_shots: col(|r| r.outcome.resources.shots),
                success_rate: rs.iter().filter(|r| r.verdict == Verdict::ExactMatch).count() as f64
                    / rs.len() as f64,
            }
        })
        .collect())
}

/// Fixed-width text table of [`summarize`] output.
pub fn render_stats(rows: &[StatsRow]) -> String {
    let mut s = format!(
        "{:>3} {:>6} {:>12} {:>12} {:>14} {:>8}\n",
        "t", "runs", "xi_samples", "xi~_samples", "shots", "success"
    );
    for r in rows {
        s.push_str(&format!(
            "{:>3} {:>6} {:>12.1} {:>12.1} {:>14.1} {:>8.3}\n",
            r.t, r.runs, r.median_xi_samples, r.median_xi_tilde_samples, r.median_shots, r.success_rate
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_circuits_have_exact_t_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in 0..4 {
            let c = random_doped_circuit(3, t, &mut rng).unwrap();
            assert_eq!(c.t_count(), t);
            assert_eq!(c.gates().len(), 30 + t);
        }
        assert!(random_doped_circuit(13, 0, &mut rng).is_err());
    }

    #[test]
    fn ground_truth_verifies_and_flipped_phase_does_not() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = random_doped_circuit(3, 1, &mut rng).unwrap();
        let o = StateOracle::new(c).unwrap();
        let d = o.description().unwrap();
        let r = verify_description(&o, &d).unwrap();
        assert_eq!(r.verdict, Verdict::ExactMatch, "{:?}", r.problems);
        let mut bad = d.clone();
        bad.generators[0] = bad.generators[0].negated();
        let r = verify_description(&o, &bad).unwrap();
        assert_eq!(r.verdict, Verdict::Mismatch);
        assert!(r.problems[0].contains(&bad.generators[0].to_string()));
    }

    #[test]
    fn trial_and_summary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_doped_circuit(3, 1, &mut rng).unwrap();
        let cfg = LearnerConfig::for_instance(3, 1, Algorithm::One).with_seed(4);
        let rec = run_trial("inline", &c, Algorithm::One, &cfg).unwrap();
        assert_eq!(rec.verdict, Verdict::ExactMatch, "{:?}", rec.problems);
        let rows = summarize(std::slice::from_ref(&rec)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].success_rate, 1.0);
        assert!(render_stats(&rows).lines().count() == 2);
        assert!(summarize(&[]).is_err());
    }
}
