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

use crate::clifford::{CliffordCircuit, Tableau};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, F2Vector, IncrementalBasis};
use crate::pauli::{PauliString, SignedPauli};

/// ⟨u, v⟩ = u_x·v_z + u_z·v_x for vectors laid out as `(x | z)`.
fn symplectic(u: &F2Vector, v: &F2Vector, n: usize) -> bool {
    let mut acc = false;
    for q in 0..n {
        acc ^= (u.get(q) && v.get(n + q)) ^ (u.get(n + q) && v.get(q));
    }
    acc
}

fn xor(a: &F2Vector, b: &F2Vector) -> F2Vector {
    let mut out = a.clone();
    out.xor_assign(b);
    out
}

/// Returns a Clifford `D` with `D gᵢ D† = +Z_i` for every signed generator,
/// so that `D` maps the stabilized subspace to `|0ᵐ⟩ ⊗ (anything)`.
///
/// The generators are completed to a full symplectic basis: destabilizers
/// are solved for linearly, made mutually commuting, and the complement is
/// filled by symplectic Gram–Schmidt on the projected single-qubit Paulis.
/// The resulting tableau is synthesized and inverted. Any Clifford with the
/// same action on the generators is an equally valid diagonalizer.
pub fn build_diagonalizer(gens: &[SignedPauli], n: usize) -> Result<CliffordCircuit> {
    let m = gens.len();
    if m > n {
        return Err(Error::InvalidGroup(format!(
            "{m} generators on {n} qubits cannot be independent"
        )));
    }
    for g in gens {
        if g.num_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                found: g.num_qubits(),
            });
        }
    }
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if !a.pauli().commutes_unchecked(b.pauli()) {
                return Err(Error::InvalidGroup(format!("{a} and {b} anticommute")));
            }
        }
    }
    let stab: Vec<F2Vector> = gens.iter().map(|g| g.pauli().to_symplectic()).collect();
    let mut check = IncrementalBasis::new(2 * n);
    for (g, v) in gens.iter().zip(&stab) {
        if !check.insert(v) {
            return Err(Error::InvalidGroup(format!("{g} depends on earlier generators")));
        }
    }

    // Destabilizers: ⟨d_i, g_j⟩ = δ_ij. Rows of A are swapped generators
    // (z | x), so A·b = ⟨g, b⟩; an identity block records row operations.
    let mut aug = BitMatrix::zeros(m, 2 * n + m);
    for (i, v) in stab.iter().enumerate() {
        for q in 0..n {
            aug.set(i, q, v.get(n + q));
            aug.set(i, n + q, v.get(q));
        }
        aug.set(i, 2 * n + i, true);
    }
    let red = aug.rref_limited(2 * n);
    debug_assert_eq!(red.rank, m);
    let mut destab: Vec<F2Vector> = (0..m)
        .map(|i| {
            let mut b = F2Vector::zeros(2 * n);
            for (r, &p) in red.pivots.iter().enumerate() {
                if red.matrix.get(r, 2 * n + i) {
                    b.set(p, true);
                }
            }
            b
        })
        .collect();
    for j in 0..m {
        for i in 0..j {
            if symplectic(&destab[i], &destab[j], n) {
                destab[j].xor_assign(&stab[i]);
            }
        }
    }

    // Complement: project every X_q, Z_q away from the (g, d) pairs.
    let mut candidates: Vec<F2Vector> = (0..2 * n)
        .map(|k| {
            let mut c = F2Vector::zeros(2 * n);
            c.set(k, true);
            for i in 0..m {
                let (with_d, with_g) = (symplectic(&c, &destab[i], n), symplectic(&c, &stab[i], n));
                if with_d {
                    c.xor_assign(&stab[i]);
                }
                if with_g {
                    c.xor_assign(&destab[i]);
                }
            }
            c
        })
        .collect();
    let mut extra_z = Vec::new();
    let mut extra_x = Vec::new();
    while extra_z.len() < n - m {
        let Some(a) = candidates.first().cloned() else {
            return Err(Error::InvalidGroup("symplectic completion failed".into()));
        };
        candidates.remove(0);
        if a.is_zero() {
            continue;
        }
        let Some(pos) = candidates.iter().position(|c| symplectic(&a, c, n)) else {
            continue;
        };
        let b = candidates.remove(pos);
        for c in candidates.iter_mut() {
            let (with_b, with_a) = (symplectic(c, &b, n), symplectic(c, &a, n));
            let mut next = c.clone();
            if with_b {
                next = xor(&next, &a);
            }
            if with_a {
                next = xor(&next, &b);
            }
            *c = next;
        }
        extra_z.push(a);
        extra_x.push(b);
    }

    let to_pauli = |v: &F2Vector| -> SignedPauli {
        SignedPauli::plus(PauliString::from_symplectic(v).expect("even length"))
    };
    let z_images: Vec<SignedPauli> = gens
        .iter()
        .cloned()
        .chain(extra_z.iter().map(to_pauli))
        .collect();
    let x_images: Vec<SignedPauli> = destab.iter().chain(&extra_x).map(to_pauli).collect();
    let encoder = Tableau::from_images(x_images, z_images)?.to_circuit()?;
    Ok(encoder.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{Direction, Gate};
    use crate::pauli::{PauliOp, Sign};

    fn sp(s: &str) -> SignedPauli {
        s.parse().unwrap()
    }

    fn check(gens: &[SignedPauli], n: usize) -> CliffordCircuit {
        let d = build_diagonalizer(gens, n).unwrap();
        for (i, g) in gens.iter().enumerate() {
            let img = d.conjugate_pauli(g, Direction::Forward).unwrap();
            assert_eq!(img.sign(), Sign::Plus, "generator {g}");
            assert_eq!(*img.pauli(), PauliString::single(n, i, PauliOp::Z), "generator {g}");
        }
        d
    }

    #[test]
    fn z_generators_are_fixed() {
        check(&[sp("ZII"), sp("IZI")], 3);
    }

    #[test]
    fn single_x_maps_to_z() {
        let d = check(&[sp("X")], 1);
        let mut h = CliffordCircuit::identity(1);
        h.push(Gate::H(0));
        // Any circuit mapping X to Z acts like H on X.
        assert_eq!(
            d.conjugate_pauli(&sp("X"), Direction::Forward).unwrap(),
            h.conjugate_pauli(&sp("X"), Direction::Forward).unwrap()
        );
    }

    #[test]
    fn signed_and_entangled_generators() {
        check(&[sp("-XX"), sp("ZZ")], 2);
        check(&[sp("+YZI"), sp("-XXX")], 3);
        check(&[], 2);
        check(&[sp("-XZZXI"), sp("IXZZX"), sp("XIXZZ"), sp("ZXIXZ")], 5);
    }

    #[test]
    fn invalid_groups_are_rejected() {
        assert!(matches!(
            build_diagonalizer(&[sp("X"), sp("Z")], 1),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            build_diagonalizer(&[sp("XX"), sp("ZZ"), sp("-YY")], 2),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            build_diagonalizer(&[sp("XX"), sp("XX")], 2),
            Err(Error::InvalidGroup(_))
        ));
    }
}
