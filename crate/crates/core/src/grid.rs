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


//! Exact values `(a + b√2)/√2ᵗ` and the finite grid of Pauli expectations
//! reachable with `t` non-Clifford gates.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `t` for which [`enumerate_grid`] is available.
pub const MAX_GRID_T: usize = 12;

/// The number `(a + b√2)/√2ᵗ`, kept canonical: either `t = 0` or `a` is odd.
/// Canonical triples are unique, so structural equality is value equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64, u32)", into = "(i64, i64, u32)")]
pub struct GridValue {
    a: i64,
    b: i64,
    t: u32,
}

impl GridValue {
    pub const ZERO: GridValue = GridValue { a: 0, b: 0, t: 0 };
    pub const ONE: GridValue = GridValue { a: 1, b: 0, t: 0 };

    pub fn new(a: i64, b: i64, t: u32) -> Self {
        let (mut a, mut b, mut t) = (a, b, t);
        while t > 0 && a % 2 == 0 {
            (a, b, t) = (b, a / 2, t - 1);
        }
        GridValue { a, b, t }
    }

    pub fn from_int(k: i64) -> Self {
        GridValue { a: k, b: 0, t: 0 }
    }

    /// `1/√2`.
    pub fn inv_sqrt2() -> Self {
        GridValue { a: 1, b: 0, t: 1 }
    }

    pub fn parts(self) -> (i64, i64, u32) {
        (self.a, self.b, self.t)
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn to_f64(self) -> f64 {
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / 2f64.powf(self.t as f64 / 2.0)
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn abs(self) -> Self {
        if self < Self::ZERO {
            -self
        } else {
            self
        }
    }

    /// Divides by `√2`.
    pub fn div_sqrt2(self) -> Self {
        GridValue::new(self.a, self.b, self.t + 1)
    }

    fn raised_to(self, t: u32) -> (i64, i64) {
        let (mut a, mut b) = (self.a, self.b);
        for _ in self.t..t {
            (a, b) = (2 * b, a);
        }
        (a, b)
    }

    fn signum(self) -> Ordering {
        let (a, b) = (self.a as i128, self.b as i128);
        match (a.cmp(&0), b.cmp(&0)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (s, t) if s == t => s,
            (sa, _) => {
                // a and b have opposite signs; a dominates iff a² > 2b².
                if a * a > 2 * b * b {
                    sa
                } else {
                    sa.reverse()
                }
            }
        }
    }
}

impl From<(i64, i64, u32)> for GridValue {
    fn from((a, b, t): (i64, i64, u32)) -> Self {
        GridValue::new(a, b, t)
    }
}

impl From<GridValue> for (i64, i64, u32) {
    fn from(v: GridValue) -> Self {
        (v.a, v.b, v.t)
    }
}

impl Add for GridValue {
    type Output = GridValue;
    fn add(self, rhs: GridValue) -> GridValue {
        let t = self.t.max(rhs.t);
        let (a1, b1) = self.raised_to(t);
        let (a2, b2) = rhs.raised_to(t);
        GridValue::new(a1 + a2, b1 + b2, t)
    }
}

impl Neg for GridValue {
    type Output = GridValue;
    fn neg(self) -> GridValue {
        GridValue {
            a: -self.a,
            b: -self.b,
            t: self.t,
        }
    }
}

impl Sub for GridValue {
    type Output = GridValue;
    fn sub(self, rhs: GridValue) -> GridValue {
        self + (-rhs)
    }
}

impl Mul for GridValue {
    type Output = GridValue;
    fn mul(self, rhs: GridValue) -> GridValue {
        GridValue::new(
            self.a * rhs.a + 2 * self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
            self.t + rhs.t,
        )
    }
}

impl Ord for GridValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum()
    }
}

impl PartialOrd for GridValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GridValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.b, self.t) {
            (0, 0) => write!(f, "{}", self.a),
            (0, t) => write!(f, "{}/√2^{t}", self.a),
            (b, t) => write!(f, "({}{:+}√2)/√2^{t}", self.a, b),
        }
    }
}

impl fmt::Debug for GridValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridValue({}, {}, {} ≈ {:.6})", self.a, self.b, self.t, self.to_f64())
    }
}

/// Lower bound on the spacing of nonzero expectation magnitudes for `t`
/// non-Clifford gates: `(√2/6)(1/√2 − 1/2)ᵗ`.
pub fn delta_lower_bound(t: usize) -> f64 {
    std::f64::consts::SQRT_2 / 6.0 * (std::f64::consts::FRAC_1_SQRT_2 - 0.5).powi(t as i32)
}

struct Grid {
    values: Vec<GridValue>,
    floats: Vec<f64>,
    gap: f64,
}

static GRIDS: [OnceLock<Grid>; MAX_GRID_T + 1] = [const { OnceLock::new() }; MAX_GRID_T + 1];

fn grid(t: usize) -> Result<&'static Grid> {
    if t > MAX_GRID_T {
        return Err(Error::Resource(format!(
            "grid enumeration is capped at t = {MAX_GRID_T}, got {t}"
        )));
    }
    if let Some(g) = GRIDS[t].get() {
        return Ok(g);
    }
    let values = if t == 0 {
        vec![-GridValue::ONE, GridValue::ZERO, GridValue::ONE]
    } else {
        grow(grid(t - 1)?)
    };
    Ok(GRIDS[t].get_or_init(|| finish(values)))
}

fn finish(mut values: Vec<GridValue>) -> Grid {
    values.sort();
    let gap = values
        .windows(2)
        .map(|w| (w[1] - w[0]).to_f64())
        .fold(f64::INFINITY, f64::min);
    let floats = values.iter().map(|v| v.to_f64()).collect();
    Grid {
        values,
        floats,
        gap,
    }
}

/// One more non-Clifford gate can produce `(u + v)/√2` from any pair of
/// previous values with `u² + v² ≤ 1`.
fn grow(prev: &Grid) -> Vec<GridValue> {
    const SLACK: f64 = 1e-9;
    let mut out: HashSet<GridValue> = prev.values.iter().copied().collect();
    let f = &prev.floats;
    for (i, &u) in f.iter().enumerate() {
        let bound = (1.0 - u * u).max(0.0).sqrt() + SLACK;
        let lo = f.partition_point(|&v| v < -bound).max(i);
        let hi = f.partition_point(|&v| v <= bound);
        for (j, &v) in f.iter().enumerate().take(hi).skip(lo) {
            let s = u * u + v * v;
            let inside = if s < 1.0 - SLACK {
                true
            } else if s > 1.0 + SLACK {
                false
            } else {
                let (gu, gv) = (prev.values[i], prev.values[j]);
                gu.square() + gv.square() <= GridValue::ONE
            };
            if inside {
                out.insert((prev.values[i] + prev.values[j]).div_sqrt2());
            }
        }
    }
    out.into_iter().collect()
}

/// All grid values in `[−1, 1]` reachable with `t` non-Clifford gates,
/// sorted ascending. Built once per `t` and cached.
pub fn enumerate_grid(t: usize) -> Result<&'static [GridValue]> {
    Ok(&grid(t)?.values)
}

/// Minimum spacing between consecutive points of [`enumerate_grid`].
pub fn grid_gap(t: usize) -> Result<f64> {
    Ok(grid(t)?.gap)
}

/// Snaps `x` to the unique grid point within half the grid gap.
pub fn nearest_grid(x: f64, t: usize) -> Result<GridValue> {
    let g = grid(t)?;
    let i = g.floats.partition_point(|&v| v < x);
    let candidates = [i.checked_sub(1), (i < g.floats.len()).then_some(i)];
    let best = candidates
        .into_iter()
        .flatten()
        .min_by(|&p, &q| (g.floats[p] - x).abs().total_cmp(&(g.floats[q] - x).abs()))
        .expect("grid is nonempty");
    let distance = (g.floats[best] - x).abs();
    let radius = g.gap / 2.0;
    if distance < radius {
        Ok(g.values[best])
    } else {
        Err(Error::Ambiguous {
            value: x,
            nearest: g.floats[best],
            distance,
            radius,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(GridValue::new(0, 1, 1), GridValue::ONE);
        assert_eq!(GridValue::new(0, 0, 5), GridValue::ZERO);
        assert_eq!(GridValue::new(2, 0, 2), GridValue::new(1, 0, 0));
        assert_eq!(GridValue::inv_sqrt2().square(), GridValue::new(1, 0, 2));
        assert_eq!(GridValue::new(1, 0, 2).to_f64(), 0.5);
    }

    #[test]
    fn ordering_is_exact() {
        let r = GridValue::inv_sqrt2();
        assert!(r < GridValue::ONE);
        assert!(-r < GridValue::ZERO);
        // 3 − 2√2 ≈ 0.17 is positive, 1 − √2 is negative.
        assert!(GridValue::new(3, -2, 0) > GridValue::ZERO);
        assert!(GridValue::new(1, -1, 0) < GridValue::ZERO);
        assert!(GridValue::new(-3, 2, 0) < GridValue::ZERO);
    }

    #[test]
    fn small_grids() {
        let g0: Vec<f64> = enumerate_grid(0).unwrap().iter().map(|v| v.to_f64()).collect();
        assert_eq!(g0, vec![-1.0, 0.0, 1.0]);
        let g1 = enumerate_grid(1).unwrap();
        assert_eq!(g1.len(), 5);
        assert!(g1.contains(&GridValue::inv_sqrt2()));
        assert!((grid_gap(1).unwrap() - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
        let sizes: Vec<usize> = (0..=6).map(|t| enumerate_grid(t).unwrap().len()).collect();
        assert_eq!(sizes, vec![3, 5, 7, 13, 29, 75, 213]);
    }

    #[test]
    fn grids_are_nested_and_bounded() {
        for t in 1..=5 {
            let prev = enumerate_grid(t - 1).unwrap();
            let cur = enumerate_grid(t).unwrap();
            assert!(prev.iter().all(|v| cur.binary_search(v).is_ok()));
            assert!(cur.iter().all(|v| v.abs() <= GridValue::ONE));
            assert!(grid_gap(t).unwrap() >= delta_lower_bound(t));
        }
    }

    #[test]
    fn snapping() {
        assert_eq!(nearest_grid(0.705, 1).unwrap(), GridValue::inv_sqrt2());
        assert_eq!(nearest_grid(-0.02, 3).unwrap(), GridValue::ZERO);
        let mid = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        assert!(matches!(nearest_grid(mid, 1), Err(Error::Ambiguous { .. })));
        assert!(matches!(nearest_grid(1.5, 0), Err(Error::Ambiguous { .. })));
        assert!(matches!(nearest_grid(0.0, 13), Err(Error::Resource(_))));
    }

    #[test]
    fn lower_bound_at_zero() {
        assert!((delta_lower_bound(0) - 0.235_702_260_395_515_8).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let v = GridValue::new(1, 1, 3);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1,1,3]");
        assert_eq!(serde_json::from_str::<GridValue>("[0,1,1]").unwrap(), GridValue::ONE);
    }
}
