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

//! n-qubit Pauli operators with exact phase bookkeeping.
//!
//! A [`PauliString`] with bits `(x|z)` and phase exponent `k` denotes the
//! operator `iᵏ ⊗_q σ(x_q, z_q)` where `σ(0,0)=I`, `σ(1,0)=X`, `σ(1,1)=Y`,
//! `σ(0,1)=Z`. Phase `k = 0` is the Hermitian representative used for the
//! quotient group; [`PauliString::eq_up_to_phase`] compares in the quotient.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::f2::{words_for, F2Vector};

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliOp::I => (false, false),
            PauliOp::X => (true, false),
            PauliOp::Y => (true, true),
            PauliOp::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (false, true) => PauliOp::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

#[inline]
fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(p, q)| (p & q).count_ones()).sum()
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// `op` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, op: PauliOp) -> Self {
        let mut p = Self::identity(n);
        p.set_op(q, op);
        p
    }

    pub fn from_ops(ops: &[PauliOp]) -> Self {
        let mut p = Self::identity(ops.len());
        for (q, &op) in ops.iter().enumerate() {
            p.set_op(q, op);
        }
        p
    }

    /// Builds the phase-0 Pauli whose X and Z parts are the low `n` bits of
    /// the masks. Requires `n <= 64`.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= 64, "mask form supports at most 64 qubits");
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut p = Self::identity(n);
        if n > 0 {
            p.x[0] = x & keep;
            p.z[0] = z & keep;
        }
        p
    }

    /// X part as a mask; requires `n <= 64`.
    pub fn x_mask(&self) -> u64 {
        assert!(self.n <= 64);
        self.x.first().copied().unwrap_or(0)
    }

    /// Z part as a mask; requires `n <= 64`.
    pub fn z_mask(&self) -> u64 {
        assert!(self.n <= 64);
        self.z.first().copied().unwrap_or(0)
    }

    /// Dense enumeration index `x + 2ⁿ z` (phase ignored); requires `n <= 31`.
    pub fn index(&self) -> usize {
        assert!(self.n <= 31);
        (self.x_mask() | (self.z_mask() << self.n)) as usize
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        assert!(n <= 31);
        let d = 1usize << n;
        Self::from_masks(n, (index % d) as u64, (index / d) as u64)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Copy with phase exponent 0 (the quotient-group representative).
    pub fn unphased(&self) -> Self {
        self.clone().with_phase(0)
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        assert!(q < self.n);
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        assert!(q < self.n);
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn op(&self, q: usize) -> PauliOp {
        PauliOp::from_bits(self.x_bit(q), self.z_bit(q))
    }

    #[inline]
    pub(crate) fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        assert!(q < self.n);
        let mask = 1u64 << (q % 64);
        let w = q / 64;
        if x {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if z {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    /// Replaces the factor on qubit `q` (phase exponent untouched).
    pub fn set_op(&mut self, q: usize, op: PauliOp) {
        let (x, z) = op.bits();
        self.set_bits(q, x, z);
    }

    #[inline]
    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Number of qubits carrying an X or Y factor.
    pub fn x_weight(&self) -> usize {
        self.x.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Quotient-group equality.
    pub fn eq_up_to_phase(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// Group product `self · other` with exact phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    /// `self ← self · other`.
    pub fn mul_assign(&mut self, other: &Self) -> Result<()> {
        check_dim(self.n, other.n)?;
        // iᵏσ(x,z) = i^(k+|x∧z|) XˣZᶻ, and ZᶻXˣ' = (−1)^|z∧x'| XˣZᶻ reordered.
        let mut e = self.phase as u32
            + other.phase as u32
            + popcount_and(&self.x, &self.z)
            + popcount_and(&other.x, &other.z)
            + 2 * popcount_and(&self.z, &other.x);
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        e += 4 * 64 * self.x.len() as u32 - popcount_and(&self.x, &self.z);
        self.phase = (e & 3) as u8;
        Ok(())
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        check_dim(self.n, other.n)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        (popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x)) & 1 == 0
    }

    /// The vector `(x | z)` in F₂²ⁿ.
    pub fn to_symplectic(&self) -> F2Vector {
        let mut v = F2Vector::zeros(2 * self.n);
        for q in 0..self.n {
            if self.x_bit(q) {
                v.set(q, true);
            }
            if self.z_bit(q) {
                v.set(self.n + q, true);
            }
        }
        v
    }

    /// Inverse of [`to_symplectic`](Self::to_symplectic); result has phase 0.
    pub fn from_symplectic(v: &F2Vector) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Format(format!(
                "symplectic vector has odd length {}",
                v.len()
            )));
        }
        let n = v.len() / 2;
        let mut p = Self::identity(n);
        for q in 0..n {
            p.set_bits(q, v.get(q), v.get(n + q));
        }
        Ok(p)
    }

    /// Restriction to qubits `[start, start + len)`, phase dropped.
    pub fn restrict(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.n);
        let mut p = Self::identity(len);
        for q in 0..len {
            p.set_bits(q, self.x_bit(start + q), self.z_bit(start + q));
        }
        p
    }

    /// `self ⊗ other`, phases added.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut p = Self::identity(self.n + other.n);
        for q in 0..self.n {
            p.set_bits(q, self.x_bit(q), self.z_bit(q));
        }
        for q in 0..other.n {
            p.set_bits(self.n + q, other.x_bit(q), other.z_bit(q));
        }
        p.phase = (self.phase + other.phase) & 3;
        p
    }

    fn letters(&self) -> String {
        (0..self.n).map(|q| self.op(q).letter()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letters())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_letters(s: &str) -> Result<Vec<PauliOp>> {
    if s.is_empty() {
        return Err(Error::Format("empty Pauli string".into()));
    }
    s.chars()
        .map(|c| match c {
            'I' => Ok(PauliOp::I),
            'X' => Ok(PauliOp::X),
            'Y' => Ok(PauliOp::Y),
            'Z' => Ok(PauliOp::Z),
            other => Err(Error::Format(format!(
                "unexpected character {other:?} in Pauli string {s:?}"
            ))),
        })
        .collect()
}

/// Parses `[+|-][i]LETTERS` with letters from `IXYZ`.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut phase, rest) = match s.as_bytes().first() {
            Some(b'+') => (0u8, &s[1..]),
            Some(b'-') => (2u8, &s[1..]),
            _ => (0u8, s),
        };
        let rest = match rest.strip_prefix('i') {
            Some(r) => {
                phase += 1;
                r
            }
            None => rest,
        };
        Ok(PauliString::from_ops(&parse_letters(rest)?).with_phase(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_value(v: i8) -> Self {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Self {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A Hermitian Pauli operator with a ±1 sign, e.g. a stabilizer `φ_g g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPauli {
    pauli: PauliString,
    sign: Sign,
}

impl SignedPauli {
    pub fn new(pauli: PauliString, sign: Sign) -> Self {
        Self {
            pauli: pauli.unphased(),
            sign,
        }
    }

    pub fn plus(pauli: PauliString) -> Self {
        Self::new(pauli, Sign::Plus)
    }

    /// From a phased operator; odd phases are not Hermitian.
    pub fn from_phased(p: &PauliString) -> Result<Self> {
        match p.phase() {
            0 => Ok(Self::new(p.clone(), Sign::Plus)),
            2 => Ok(Self::new(p.clone(), Sign::Minus)),
            _ => Err(Error::NonHermitian(p.to_string())),
        }
    }

    pub fn to_phased(&self) -> PauliString {
        let k = if self.sign == Sign::Minus { 2 } else { 0 };
        self.pauli.clone().with_phase(k)
    }

    pub fn pauli(&self) -> &PauliString {
        &self.pauli
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn num_qubits(&self) -> usize {
        self.pauli.num_qubits()
    }

    pub fn negated(&self) -> Self {
        Self::new(self.pauli.clone(), self.sign.flip())
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Minus { '-' } else { '+' };
        write!(f, "{s}{}", self.pauli.letters())
    }
}

impl fmt::Debug for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SignedPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let p: PauliString = s.parse()?;
        SignedPauli::from_phased(&p)
    }
}

impl Serialize for SignedPauli {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedPauli {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_table() {
        let xz = p("X").mul(&p("Z")).unwrap();
        assert!(xz.eq_up_to_phase(&p("Y")));
        assert_eq!(xz.phase(), 3);
        let zx = p("Z").mul(&p("X")).unwrap();
        assert_eq!(zx, p("+iY"));
        let xy = p("X").mul(&p("Y")).unwrap();
        assert_eq!(xy, p("+iZ"));
    }

    #[test]
    fn involution_and_disjoint_support() {
        for s in ["X", "Y", "Z", "XYZI", "YYY"] {
            let sq = p(s).mul(&p(s)).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase(), 0);
        }
        assert_eq!(p("XI").mul(&p("IZ")).unwrap(), p("XZ"));
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XZ").commutes(&p("XZ")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(matches!(
            p("X").commutes(&p("XX")),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(p("X").mul(&p("XX")), Err(Error::Dimension { .. })));
    }

    #[test]
    fn symplectic_examples() {
        let y = p("Y").to_symplectic();
        assert_eq!(y, F2Vector::from_bits(&[true, true]));
        let id = PauliString::from_symplectic(&F2Vector::zeros(6)).unwrap();
        assert_eq!(id, PauliString::identity(3));
        assert!(matches!(
            PauliString::from_symplectic(&F2Vector::zeros(5)),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn parsing_is_strict() {
        assert_eq!(p("-XZ").phase(), 2);
        assert_eq!(p("+XZ").phase(), 0);
        assert_eq!(p("-iXZ").phase(), 3);
        assert_eq!(p("XIZY").to_string(), "XIZY");
        for bad in ["", "+", "xz", "X Z", "XA", "--X", "i"] {
            assert!(bad.parse::<PauliString>().is_err(), "{bad:?} parsed");
        }
        assert!("+iX".parse::<SignedPauli>().is_err());
        let s: SignedPauli = "-YZ".parse().unwrap();
        assert_eq!(s.sign(), Sign::Minus);
        assert_eq!(s.to_string(), "-YZ");
        assert_eq!("ZZ".parse::<SignedPauli>().unwrap().to_string(), "+ZZ");
    }

    #[test]
    fn wide_strings_cross_words() {
        let n = 70;
        let mut a = PauliString::identity(n);
        a.set_op(0, PauliOp::X);
        a.set_op(65, PauliOp::Z);
        let mut b = PauliString::identity(n);
        b.set_op(65, PauliOp::X);
        assert!(!a.commutes(&b).unwrap());
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.op(65), PauliOp::Y);
        assert_eq!(ab.phase(), 1);
        assert_eq!(PauliString::from_symplectic(&a.to_symplectic()).unwrap(), a);
    }

    #[test]
    fn index_round_trip() {
        for idx in 0..256 {
            assert_eq!(PauliString::from_index(4, idx).index(), idx);
        }
    }
}
