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

//! `tdoped`: generate t-doped instances, learn them, and check the results
//! against the exact simulator.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tdoped_core::experiment::{
    random_doped_circuit, render_stats, run_trial, summarize, verify_description, ExperimentRecord, Timings,
    Verdict,
};
use tdoped_core::learner::learn;
use tdoped_core::{
    Algorithm, DopedCircuit, DopedDescription, Error, LearnOutcome, LearnStatus, LearnerConfig, QueryAccess,
    QueryModel, StateOracle,
};

const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_INCONSISTENT: u8 = 5;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "tdoped", version, about = "Learn t-doped stabilizer states from simulated queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random Clifford circuit with exactly t T gates.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a learner on a circuit and write the outcome JSON.
    Learn {
        circuit: PathBuf,
        #[command(flatten)]
        learner: LearnerArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a description (or outcome) JSON with the exact state.
    Verify {
        circuit: PathBuf,
        description: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the exact description of a circuit's output state.
    Describe {
        circuit: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw Pauli strings from Ξ or Ξ̃, one per line.
    Sample {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Xi)]
        which: Which,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-t medians and success rate of experiment records (JSON lines).
    Stats {
        records: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate, learn and verify many random instances in parallel.
    Batch {
        /// Qubit counts; comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// T counts; comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<usize>,
        /// Trials per (n, t) pair.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        learner: LearnerArgs,
        /// Record zero timings so the output is byte-identical across runs.
        #[arg(long)]
        no_timings: bool,
        /// Directory receiving one circuit file per trial.
        #[arg(long)]
        circuits: Option<PathBuf>,
        /// JSON lines output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Xi,
    XiTilde,
}

#[derive(Args, Clone)]
struct LearnerArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    algorithm: u8,
    #[arg(long)]
    seed: Option<u64>,
    /// LearnerConfig JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "shots-M")]
    shots_m: Option<u64>,
    #[arg(long = "shots-N")]
    shots_n: Option<u64>,
    #[arg(long)]
    group_accepts: Option<usize>,
    #[arg(long)]
    budget_group: Option<u64>,
    #[arg(long)]
    budget_bad_gen: Option<u64>,
    #[arg(long)]
    budget_pairs: Option<u64>,
}

impl LearnerArgs {
    fn algorithm(&self) -> Algorithm {
        Algorithm::try_from(self.algorithm).expect("range checked by clap")
    }

    fn config(&self, n: usize, t: usize) -> Result<LearnerConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = read(path)?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))
                    .map_err(Failure::input)?
            }
            None => LearnerConfig::for_instance(n, t, self.algorithm()),
        };
        let set = |slot: &mut u64, v: Option<u64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.shots_m, self.shots_m);
        set(&mut cfg.shots_n, self.shots_n);
        set(&mut cfg.group_sample_budget, self.budget_group);
        set(&mut cfg.bad_gen_sample_budget, self.budget_bad_gen);
        set(&mut cfg.pair_budget, self.budget_pairs);
        if let Some(k) = self.group_accepts {
            cfg.group_accepts = k;
        }
        cfg.validate().map_err(|e| Failure::input(e.into()))?;
        Ok(cfg)
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Self { code: EXIT_INPUT, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Format(_)
            | Error::Dimension { .. }
            | Error::Resource(_)
            | Error::UnsupportedGate(_)
            | Error::Validation(_) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Self { code, error: e.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_INTERNAL,
            error: e.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::input)
}

fn load_circuit(path: &Path) -> Result<DopedCircuit, Failure> {
    DopedCircuit::parse(&read(path)?)
        .with_context(|| format!("parsing circuit {}", path.display()))
        .map_err(Failure::input)
}

/// Accepts a bare description or an outcome carrying one.
fn load_description(path: &Path) -> Result<DopedDescription, Failure> {
    let text = read(path)?;
    if let Ok(d) = DopedDescription::from_json(&text) {
        return Ok(d);
    }
    let outcome: LearnOutcome = serde_json::from_str(&text)
        .with_context(|| format!("{} is neither a description nor an outcome", path.display()))
        .map_err(Failure::input)?;
    outcome
        .description
        .ok_or_else(|| Failure::input(anyhow!("{} holds no description", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(Failure::input),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn status_code(status: LearnStatus) -> u8 {
    match status {
        LearnStatus::Success => 0,
        LearnStatus::BudgetExhausted => EXIT_BUDGET,
        LearnStatus::AmbiguousEstimate | LearnStatus::Inconsistent => EXIT_INCONSISTENT,
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Gen { n, t, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_doped_circuit(n, t, &mut rng)?;
            emit(out.as_deref(), &c.to_text())?;
            Ok(0)
        }
        Command::Learn { circuit, learner, out } => {
            let c = load_circuit(&circuit)?;
            let cfg = learner.config(c.num_qubits(), c.t_count())?;
            let oracle = Arc::new(StateOracle::new(c)?);
            let t = oracle.t_count();
            let mut q = QueryModel::new(oracle, cfg.seed);
            let outcome = learn(&mut q, t, learner.algorithm(), &cfg)?;
            let json = serde_json::to_string_pretty(&outcome).map_err(|e| Failure::input(e.into()))?;
            emit(out.as_deref(), &(json + "\n"))?;
            if let Some(m) = &outcome.message {
                eprintln!("{}: {m}", outcome.status);
            }
            Ok(status_code(outcome.status))
        }
        Command::Verify { circuit, description, out } => {
            let oracle = StateOracle::new(load_circuit(&circuit)?)?;
            let desc = load_description(&description)?;
            let report = verify_description(&oracle, &desc)?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::input(e.into()))?;
            emit(out.as_deref(), &(json + "\n"))?;
            for p in &report.problems {
                eprintln!("{p}");
            }
            Ok(if report.verdict == Verdict::ExactMatch { 0 } else { EXIT_MISMATCH })
        }
        Command::Describe { circuit, out } => {
            let oracle = StateOracle::new(load_circuit(&circuit)?)?;
            emit(out.as_deref(), &(oracle.description()?.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Sample {
            circuit,
            which,
            count,
            seed,
            out,
        } => {
            let oracle = Arc::new(StateOracle::new(load_circuit(&circuit)?)?);
            let mut q = QueryModel::new(oracle, seed);
            let mut text = String::new();
            for _ in 0..count {
                let p = match which {
                    Which::Xi => q.sample_xi()?,
                    Which::XiTilde => q.sample_xi_tilde()?,
                };
                text.push_str(&p.to_string());
                text.push('\n');
            }
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Stats { records, out } => {
            let text = read(&records)?;
            let recs = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    serde_json::from_str::<ExperimentRecord>(l)
                        .with_context(|| format!("{} line {}", records.display(), i + 1))
                })
                .collect::<anyhow::Result<Vec<_>>>()
                .map_err(Failure::input)?;
            emit(out.as_deref(), &render_stats(&summarize(&recs)?))?;
            Ok(0)
        }
        Command::Batch {
            n,
            t,
            trials,
            learner,
            no_timings,
            circuits,
            out,
        } => batch(&n, &t, trials, &learner, no_timings, circuits.as_deref(), out.as_deref()),
    }
}

struct Trial {
    name: String,
    circuit: DopedCircuit,
    config: LearnerConfig,
}

fn batch(
    ns: &[usize],
    ts: &[usize],
    trials: usize,
    learner: &LearnerArgs,
    no_timings: bool,
    circuits: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    // All randomness is drawn up front so results do not depend on scheduling.
    let mut master = ChaCha8Rng::seed_from_u64(learner.seed.unwrap_or(0));
    let mut plan = Vec::new();
    for &n in ns {
        for &t in ts {
            for i in 0..trials {
                let gen_seed: u64 = master.random();
                let mut rng = ChaCha8Rng::seed_from_u64(gen_seed);
                let circuit = random_doped_circuit(n, t, &mut rng)?;
                let config = learner.config(n, t)?.with_seed(master.random());
                plan.push(Trial {
                    name: format!("n{n}-t{t}-{i:04}.circ"),
                    circuit,
                    config,
                });
            }
        }
    }
    if let Some(dir) = circuits {
        fs::create_dir_all(dir)?;
        for tr in &plan {
            fs::write(dir.join(&tr.name), tr.circuit.to_text())?;
        }
    }
    let algorithm = learner.algorithm();
    let records: Vec<ExperimentRecord> = plan
        .par_iter()
        .map(|tr| {
            let mut r = run_trial(&tr.name, &tr.circuit, algorithm, &tr.config)?;
            if no_timings {
                r.timings = Timings {
                    learn_ms: 0.0,
                    verify_ms: 0.0,
                };
            }
            Ok(r)
        })
        .collect::<Result<_, Error>>()?;
    let mut text = String::new();
    for r in &records {
        text.push_str(&serde_json::to_string(r).map_err(|e| Failure::input(e.into()))?);
        text.push('\n');
    }
    emit(out, &text)?;
    let matched = records.iter().filter(|r| r.verdict == Verdict::ExactMatch).count();
    eprintln!("exact-match {matched}/{} ({:.1}%)", records.len(), 100.0 * matched as f64 / records.len().max(1) as f64);
    Ok(if matched == records.len() { 0 } else { EXIT_MISMATCH })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
