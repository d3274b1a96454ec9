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

//! Clifford and Clifford+T circuits, Pauli conjugation, tableaux and
//! diagonalizer synthesis.
//!
//! Circuits are gate lists applied left to right: `[g₁, g₂]` is the unitary
//! `g₂ g₁`. The text format holds one gate per line (`H 0`, `CNOT 0 1`,
//! `T 2`), `#` starts a comment, and an optional `QUBITS n` line fixes the
//! register size.

mod diagonalizer;
mod tableau;

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::pauli::{PauliString, SignedPauli};

pub use diagonalizer::build_diagonalizer;
pub use tableau::Tableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    SDag,
    Cnot,
    Cz,
    X,
    Z,
    T,
    TDag,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::SDag => "S_DAG",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::T => "T",
            GateKind::TDag => "T_DAG",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz => 2,
            _ => 1,
        }
    }

    pub fn is_clifford(self) -> bool {
        !matches!(self, GateKind::T | GateKind::TDag)
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "S_DAG" => GateKind::SDag,
            "CNOT" => GateKind::Cnot,
            "CZ" => GateKind::Cz,
            "X" => GateKind::X,
            "Z" => GateKind::Z,
            "T" => GateKind::T,
            "T_DAG" => GateKind::TDag,
            other => return Err(Error::UnsupportedGate(other.to_string())),
        })
    }
}

/// A gate with its qubit operands. `Cnot(control, target)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    SDag(usize),
    X(usize),
    Z(usize),
    T(usize),
    TDag(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Format(format!(
                "{} takes {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                qubits.len()
            )));
        }
        let q = qubits[0];
        Ok(match kind {
            GateKind::H => Gate::H(q),
            GateKind::S => Gate::S(q),
            GateKind::SDag => Gate::SDag(q),
            GateKind::X => Gate::X(q),
            GateKind::Z => Gate::Z(q),
            GateKind::T => Gate::T(q),
            GateKind::TDag => Gate::TDag(q),
            GateKind::Cnot | GateKind::Cz => {
                let r = qubits[1];
                if q == r {
                    return Err(Error::Format(format!(
                        "{} needs two distinct qubits, got {q} twice",
                        kind.name()
                    )));
                }
                if kind == GateKind::Cnot {
                    Gate::Cnot(q, r)
                } else {
                    Gate::Cz(q, r)
                }
            }
        })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::S(_) => GateKind::S,
            Gate::SDag(_) => GateKind::SDag,
            Gate::X(_) => GateKind::X,
            Gate::Z(_) => GateKind::Z,
            Gate::T(_) => GateKind::T,
            Gate::TDag(_) => GateKind::TDag,
            Gate::Cnot(..) => GateKind::Cnot,
            Gate::Cz(..) => GateKind::Cz,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::S(q)
            | Gate::SDag(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::T(q)
            | Gate::TDag(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits().into_iter().max().unwrap_or(0)
    }

    pub fn is_clifford(&self) -> bool {
        self.kind().is_clifford()
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::SDag(q),
            Gate::SDag(q) => Gate::S(q),
            Gate::T(q) => Gate::TDag(q),
            Gate::TDag(q) => Gate::T(q),
            g => g,
        }
    }

    /// `p ← g p g†`. Panics on T gates, which do not normalize the Pauli group.
    pub(crate) fn conjugate_forward(&self, p: &mut PauliString) {
        match *self {
            Gate::H(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && z {
                    p.add_phase(2);
                }
                p.set_bits(q, z, x);
            }
            Gate::S(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x {
                    // X → Y, Y → −X
                    if z {
                        p.add_phase(2);
                    }
                    p.set_bits(q, true, !z);
                }
            }
            Gate::SDag(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x {
                    // X → −Y, Y → X
                    if !z {
                        p.add_phase(2);
                    }
                    p.set_bits(q, true, !z);
                }
            }
            Gate::X(q) => {
                if p.z_bit(q) {
                    p.add_phase(2);
                }
            }
            Gate::Z(q) => {
                if p.x_bit(q) {
                    p.add_phase(2);
                }
            }
            Gate::Cnot(c, t) => {
                let (xc, zc, xt, zt) = (p.x_bit(c), p.z_bit(c), p.x_bit(t), p.z_bit(t));
                if xc && zt && (xt == zc) {
                    p.add_phase(2);
                }
                p.set_bits(t, xt ^ xc, zt);
                p.set_bits(c, xc, zc ^ zt);
            }
            Gate::Cz(a, b) => {
                let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
                if xa && xb && (za ^ zb) {
                    p.add_phase(2);
                }
                p.set_bits(a, xa, za ^ xb);
                p.set_bits(b, xb, zb ^ xa);
            }
            Gate::T(_) | Gate::TDag(_) => {
                panic!("T gates do not map Pauli operators to Pauli operators")
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let kind: GateKind = parts
            .next()
            .ok_or_else(|| Error::Format("empty gate line".into()))?
            .parse()?;
        let qubits = parts
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Format(format!("bad qubit index {s:?} in {line:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Gate::new(kind, &qubits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `C P C†`
    Forward,
    /// `C† P C`
    Inverse,
}

fn check_gates(n: usize, gates: &[Gate]) -> Result<()> {
    for g in gates {
        if g.max_qubit() >= n {
            return Err(Error::Format(format!(
                "gate {g} addresses a qubit outside a {n}-qubit register"
            )));
        }
    }
    Ok(())
}

/// A circuit over {H, S, S†, CNOT, CZ, X, Z}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        check_gates(n, &gates)?;
        if let Some(g) = gates.iter().find(|g| !g.is_clifford()) {
            return Err(Error::UnsupportedGate(format!(
                "{g} in a Clifford circuit"
            )));
        }
        Ok(Self { n, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a Clifford gate. Panics on T gates or out-of-range qubits.
    pub fn push(&mut self, g: Gate) -> &mut Self {
        assert!(g.is_clifford(), "{g} is not a Clifford gate");
        assert!(g.max_qubit() < self.n, "{g} out of range");
        self.gates.push(g);
        self
    }

    pub fn extend(&mut self, other: &CliffordCircuit) -> &mut Self {
        assert_eq!(self.n, other.n);
        self.gates.extend_from_slice(&other.gates);
        self
    }

    pub fn inverse(&self) -> CliffordCircuit {
        CliffordCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Conjugates a phased Pauli in place.
    pub fn conjugate_phased(&self, p: &mut PauliString, dir: Direction) -> Result<()> {
        check_dim(self.n, p.num_qubits())?;
        match dir {
            Direction::Forward => self.gates.iter().for_each(|g| g.conjugate_forward(p)),
            Direction::Inverse => self
                .gates
                .iter()
                .rev()
                .for_each(|g| g.inverse().conjugate_forward(p)),
        }
        Ok(())
    }

    /// `C P C†` or `C† P C` with exact sign.
    pub fn conjugate_pauli(&self, p: &SignedPauli, dir: Direction) -> Result<SignedPauli> {
        let mut phased = p.to_phased();
        self.conjugate_phased(&mut phased, dir)?;
        SignedPauli::from_phased(&phased)
    }

    pub fn to_doped(&self) -> DopedCircuit {
        DopedCircuit {
            n: self.n,
            gates: self.gates.clone(),
        }
    }
}

/// A Clifford+T circuit acting on |0ⁿ⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DopedCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl DopedCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        check_gates(n, &gates)?;
        Ok(Self { n, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of T and T† gates.
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    pub fn to_clifford(&self) -> Result<CliffordCircuit> {
        CliffordCircuit::new(self.n, self.gates.clone())
    }

    pub fn inverse(&self) -> DopedCircuit {
        DopedCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Circuit preparing the computational-basis complex conjugate state:
    /// `S ↦ S†`, `S† ↦ S`, `T ↦ T S†`, `T† ↦ T† S`; real gates unchanged.
    pub fn conjugate(&self) -> DopedCircuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for &g in &self.gates {
            match g {
                Gate::S(q) => gates.push(Gate::SDag(q)),
                Gate::SDag(q) => gates.push(Gate::S(q)),
                Gate::T(q) => gates.extend([Gate::T(q), Gate::SDag(q)]),
                Gate::TDag(q) => gates.extend([Gate::TDag(q), Gate::S(q)]),
                other => gates.push(other),
            }
        }
        DopedCircuit { n: self.n, gates }
    }

    /// Deterministic text serialization.
    pub fn to_text(&self) -> String {
        let mut s = format!("QUBITS {}\n", self.n);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Without a `QUBITS` line the register size is
    /// one more than the largest qubit index used.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = |e: Error| Error::Format(format!("line {}: {e}", lineno + 1));
            if let Some(rest) = line.strip_prefix("QUBITS") {
                if declared.is_some() || !gates.is_empty() {
                    return Err(ctx(Error::Format(
                        "QUBITS must appear once, before any gate".into(),
                    )));
                }
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| ctx(Error::Format(format!("bad qubit count {rest:?}"))))?;
                declared = Some(n);
                continue;
            }
            gates.push(line.parse::<Gate>().map_err(|e| match e {
                Error::UnsupportedGate(_) => e,
                other => ctx(other),
            })?);
        }
        let n = declared.unwrap_or_else(|| gates.iter().map(|g| g.max_qubit() + 1).max().unwrap_or(0));
        DopedCircuit::new(n, gates)
    }
}

impl From<CliffordCircuit> for DopedCircuit {
    fn from(c: CliffordCircuit) -> Self {
        DopedCircuit {
            n: c.n,
            gates: c.gates,
        }
    }
}
