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

use crate::clifford::{CliffordCircuit, Direction, Gate};
use crate::error::{check_dim, Error, Result};
use crate::pauli::{PauliOp, PauliString, SignedPauli};

/// Conjugation action `U X_q U†`, `U Z_q U†` of a Clifford unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    x_images: Vec<SignedPauli>,
    z_images: Vec<SignedPauli>,
}

impl Tableau {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x_images: (0..n)
                .map(|q| SignedPauli::plus(PauliString::single(n, q, PauliOp::X)))
                .collect(),
            z_images: (0..n)
                .map(|q| SignedPauli::plus(PauliString::single(n, q, PauliOp::Z)))
                .collect(),
        }
    }

    /// Builds a tableau from explicit images, checking that they satisfy the
    /// canonical commutation relations.
    pub fn from_images(x_images: Vec<SignedPauli>, z_images: Vec<SignedPauli>) -> Result<Self> {
        let n = x_images.len();
        check_dim(n, z_images.len())?;
        for p in x_images.iter().chain(&z_images) {
            check_dim(n, p.num_qubits())?;
        }
        let t = Self {
            n,
            x_images,
            z_images,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn from_circuit(c: &CliffordCircuit) -> Self {
        let mut t = Tableau::identity(c.num_qubits());
        for img in t.x_images.iter_mut().chain(t.z_images.iter_mut()) {
            *img = c
                .conjugate_pauli(img, Direction::Forward)
                .expect("Clifford conjugation preserves Hermiticity");
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &SignedPauli {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &SignedPauli {
        &self.z_images[q]
    }

    /// Checks that images of `X_i`, `Z_i` commute and anticommute exactly as
    /// the originals do.
    pub fn validate(&self) -> Result<()> {
        let rows: Vec<&SignedPauli> = self.x_images.iter().chain(&self.z_images).collect();
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate().skip(i + 1) {
                let expect_anti = j == i + self.n;
                let commute = a.pauli().commutes_unchecked(b.pauli());
                if commute == expect_anti {
                    return Err(Error::Structure(format!(
                        "images {a} and {b} should {}",
                        if expect_anti { "anticommute" } else { "commute" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies the action to an arbitrary phased Pauli.
    pub fn conjugate_phased(&self, p: &PauliString) -> Result<PauliString> {
        check_dim(self.n, p.num_qubits())?;
        // p = i^(k + |x∧z|) Πq X_q^x · Πq Z_q^z
        let xz_overlap = (0..self.n).filter(|&q| p.x_bit(q) && p.z_bit(q)).count();
        let mut out = PauliString::identity(self.n);
        out.add_phase(((p.phase() as usize + xz_overlap) & 3) as u8);
        for q in (0..self.n).filter(|&q| p.x_bit(q)) {
            out.mul_assign(&self.x_images[q].to_phased())?;
        }
        for q in (0..self.n).filter(|&q| p.z_bit(q)) {
            out.mul_assign(&self.z_images[q].to_phased())?;
        }
        Ok(out)
    }

    pub fn conjugate(&self, p: &SignedPauli) -> Result<SignedPauli> {
        SignedPauli::from_phased(&self.conjugate_phased(&p.to_phased())?)
    }

    /// Synthesizes a circuit with this conjugation action using O(n²) gates.
    ///
    /// Gates are applied to the images until every `X_q`, `Z_q` is restored;
    /// the recorded reducer `V` satisfies `V U = 1` up to global phase, so
    /// the result is `V†`.
    pub fn to_circuit(&self) -> Result<CliffordCircuit> {
        self.validate()?;
        let n = self.n;
        let mut rows: Vec<PauliString> = self
            .x_images
            .iter()
            .chain(&self.z_images)
            .map(SignedPauli::to_phased)
            .collect();
        let mut reducer = CliffordCircuit::identity(n);
        let mut apply = |g: Gate, rows: &mut Vec<PauliString>, reducer: &mut CliffordCircuit| {
            for r in rows.iter_mut() {
                g.conjugate_forward(r);
            }
            reducer.push(g);
        };
        for q in 0..n {
            // Bring an X-type support onto qubit q in the X_q image.
            let xr = q;
            if !(q..n).any(|j| rows[xr].x_bit(j)) {
                let j = (q..n).find(|&j| rows[xr].z_bit(j)).ok_or_else(|| {
                    Error::Structure(format!("image of X{q} has no support on qubits ≥ {q}"))
                })?;
                apply(Gate::H(j), &mut rows, &mut reducer);
            }
            if !rows[xr].x_bit(q) {
                let j = (q + 1..n).find(|&j| rows[xr].x_bit(j)).expect("x support exists");
                apply(Gate::Cnot(q, j), &mut rows, &mut reducer);
                apply(Gate::Cnot(j, q), &mut rows, &mut reducer);
                apply(Gate::Cnot(q, j), &mut rows, &mut reducer);
            }
            clear_to_x(q, xr, &mut rows, &mut reducer, &mut apply);

            // Z_q image now anticommutes with X_q, so it carries Z on q.
            let zr = n + q;
            apply(Gate::H(q), &mut rows, &mut reducer);
            if !rows[zr].x_bit(q) {
                return Err(Error::Structure(format!(
                    "image of Z{q} does not anticommute with image of X{q}"
                )));
            }
            clear_to_x(q, zr, &mut rows, &mut reducer, &mut apply);
            apply(Gate::H(q), &mut rows, &mut reducer);
        }
        for q in 0..n {
            if rows[q].phase() == 2 {
                apply(Gate::Z(q), &mut rows, &mut reducer);
            }
            if rows[n + q].phase() == 2 {
                apply(Gate::X(q), &mut rows, &mut reducer);
            }
        }
        debug_assert!(rows.iter().enumerate().all(|(i, r)| {
            let (q, op) = if i < n { (i, PauliOp::X) } else { (i - n, PauliOp::Z) };
            *r == PauliString::single(n, q, op)
        }));
        Ok(reducer.inverse())
    }
}

/// Reduces `rows[r]`, which has X on qubit `q`, to `±X_q` using gates that
/// touch only qubits ≥ q and fix `Z_q`.
fn clear_to_x(
    q: usize,
    r: usize,
    rows: &mut Vec<PauliString>,
    reducer: &mut CliffordCircuit,
    apply: &mut impl FnMut(Gate, &mut Vec<PauliString>, &mut CliffordCircuit),
) {
    let n = reducer.num_qubits();
    for j in q + 1..n {
        if rows[r].x_bit(j) {
            apply(Gate::Cnot(q, j), rows, reducer);
        }
    }
    for j in q + 1..n {
        if rows[r].z_bit(j) {
            apply(Gate::Cz(q, j), rows, reducer);
        }
    }
    if rows[r].z_bit(q) {
        apply(Gate::S(q), rows, reducer);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_round_trip() {
        let t = Tableau::from_circuit(&CliffordCircuit::identity(3));
        assert_eq!(t, Tableau::identity(3));
        let c = t.to_circuit().unwrap();
        assert_eq!(Tableau::from_circuit(&c), t);
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let mut c = CliffordCircuit::identity(1);
        c.push(Gate::H(0));
        let t = Tableau::from_circuit(&c);
        assert_eq!(t.x_image(0).to_string(), "+Z");
        assert_eq!(t.z_image(0).to_string(), "+X");
    }

    #[test]
    fn broken_commutation_is_rejected() {
        let x = vec!["X".parse().unwrap(), "X".parse().unwrap()];
        let z = vec!["ZI".parse().unwrap(), "IZ".parse().unwrap()];
        assert!(Tableau::from_images(x, z).is_err());
        let x = vec!["XI".parse().unwrap(), "IX".parse().unwrap()];
        let z = vec!["ZI".parse().unwrap(), "XZ".parse().unwrap()];
        assert!(matches!(Tableau::from_images(x, z), Err(Error::Structure(_))));
    }

    #[test]
    fn synthesis_restores_signed_action() {
        let mut c = CliffordCircuit::identity(3);
        c.push(Gate::H(1))
            .push(Gate::Cnot(1, 0))
            .push(Gate::S(2))
            .push(Gate::Cz(0, 2))
            .push(Gate::X(0))
            .push(Gate::H(2))
            .push(Gate::SDag(1));
        let t = Tableau::from_circuit(&c);
        let back = t.to_circuit().unwrap();
        assert_eq!(Tableau::from_circuit(&back), t);
    }

    #[test]
    fn tableau_action_matches_circuit() {
        let mut c = CliffordCircuit::identity(2);
        c.push(Gate::S(0)).push(Gate::Cnot(0, 1)).push(Gate::H(1));
        let t = Tableau::from_circuit(&c);
        for s in ["XY", "-YZ", "ZZ", "YI"] {
            let p: SignedPauli = s.parse().unwrap();
            assert_eq!(
                t.conjugate(&p).unwrap(),
                c.conjugate_pauli(&p, Direction::Forward).unwrap()
            );
        }
    }
}
