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


//! Dense matrices for small registers: Pauli operators, gate unitaries,
//! density matrices and trace distance. Basis index bit `q` is qubit `q`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::clifford::{DopedCircuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Largest register for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 10;

fn check_size(n: usize) -> Result<usize> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Resource(format!(
            "dense matrices are capped at {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    Ok(1 << n)
}

pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// The `2ⁿ × 2ⁿ` matrix of a phased Pauli.
pub fn pauli_matrix(p: &PauliString) -> Result<DMatrix<Complex64>> {
    let d = check_size(p.num_qubits())?;
    let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
    let base = p.phase() as u32 + (x & z).count_ones();
    let mut m = DMatrix::zeros(d, d);
    for b in 0..d {
        m[(b ^ x, b)] = i_pow(base + 2 * (z & b).count_ones());
    }
    Ok(m)
}

fn single_qubit(g: &Gate) -> Option<(usize, [[Complex64; 2]; 2])> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    Some(match *g {
        Gate::H(q) => (q, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
        Gate::S(q) => (q, [[o, z], [z, c(0.0, 1.0)]]),
        Gate::SDag(q) => (q, [[o, z], [z, c(0.0, -1.0)]]),
        Gate::X(q) => (q, [[z, o], [o, z]]),
        Gate::Z(q) => (q, [[o, z], [z, -o]]),
        Gate::T(q) => (q, [[o, z], [z, c(h, h)]]),
        Gate::TDag(q) => (q, [[o, z], [z, c(h, -h)]]),
        Gate::Cnot(..) | Gate::Cz(..) => return None,
    })
}

/// The `2ⁿ × 2ⁿ` unitary of one gate on an `n`-qubit register.
pub fn gate_unitary(g: &Gate, n: usize) -> Result<DMatrix<Complex64>> {
    let d = check_size(n)?;
    if g.max_qubit() >= n {
        return Err(Error::Dimension {
            expected: n,
            found: g.max_qubit() + 1,
        });
    }
    let mut m = DMatrix::zeros(d, d);
    if let Some((q, u)) = single_qubit(g) {
        let bit = 1 << q;
        for col in 0..d {
            let j = (col >> q) & 1;
            for (i, urow) in u.iter().enumerate() {
                let row = (col & !bit) | (i << q);
                m[(row, col)] = urow[j];
            }
        }
        return Ok(m);
    }
    for col in 0..d {
        match *g {
            Gate::Cnot(c, t) => {
                let row = if col >> c & 1 == 1 { col ^ (1 << t) } else { col };
                m[(row, col)] = Complex64::new(1.0, 0.0);
            }
            Gate::Cz(a, b) => {
                let sign = if col >> a & 1 == 1 && col >> b & 1 == 1 { -1.0 } else { 1.0 };
                m[(col, col)] = Complex64::new(sign, 0.0);
            }
            _ => unreachable!(),
        }
    }
    Ok(m)
}

/// The unitary implemented by a whole circuit.
pub fn circuit_unitary(c: &DopedCircuit) -> Result<DMatrix<Complex64>> {
    let d = check_size(c.num_qubits())?;
    let mut u = DMatrix::identity(d, d);
    for g in c.gates() {
        u = gate_unitary(g, c.num_qubits())? * u;
    }
    Ok(u)
}

/// `|ψ⟩⟨ψ|`.
pub fn density(amplitudes: &[Complex64]) -> DMatrix<Complex64> {
    let v = DVector::from_column_slice(amplitudes);
    &v * v.adjoint()
}

/// `½‖A − B‖₁` for Hermitian `A`, `B`.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let diff = a - b;
    // Rescale so the eigensolver never sees subnormal entries.
    let scale = diff.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let eig = (&diff / Complex64::new(scale, 0.0)).symmetric_eigenvalues();
    let sum: f64 = eig.iter().map(|e| e.abs()).sum();
    if sum.is_finite() {
        Ok(0.5 * scale * sum)
    } else {
        // ‖A‖₁ ≤ √d ‖A‖_F.
        Ok(0.5 * (diff.nrows() as f64).sqrt() * diff.norm())
    }
}

/// `max |U_ij − e^{iθ} V_ij|` minimized over the global phase aligning the
/// largest entry of `U`.
pub fn distance_up_to_phase(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> f64 {
    let (idx, _) = u
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty matrix");
    if v.as_slice()[idx].norm() < 1e-12 {
        return f64::INFINITY;
    }
    let phase = u.as_slice()[idx] / v.as_slice()[idx];
    let phase = phase / phase.norm();
    (u - v * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
