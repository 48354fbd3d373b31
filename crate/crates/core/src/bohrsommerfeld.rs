//! Integral points on S² with ω = E dl∧dφ, for the standard connection and
//! for the folded one.
//!
//! The standard lattice has 2E − 1 interior leaves. In the folded case a leaf
//! l is integral when (E² − l²)/2 is an integer with |l| < E, so l² = E² − 2k
//! for an integer k ≥ 1 (with 2k ≤ E²).

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// l = sign · √radicand, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub sign: i8,
    pub radicand: u64,
}

impl LatticePoint {
    pub fn value(&self) -> f64 {
        f64::from(self.sign) * libm::sqrt(self.radicand as f64)
    }

    /// l², exact.
    pub fn square(&self) -> u64 {
        self.radicand
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |p: &Self| i128::from(p.sign) * i128::from(p.radicand);
        // sign·radicand orders the same way as sign·√radicand.
        key(self).cmp(&key(other))
    }
}

/// `0`, `sqrt(7)`, `-sqrt(2)`, or an integer when the radicand is square.
impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 0 {
            return f.write_str("0");
        }
        let sign = if self.sign < 0 { "-" } else { "" };
        let root = integer_sqrt(self.radicand);
        if root * root == self.radicand {
            write!(f, "{sign}{root}")
        } else {
            write!(f, "{sign}sqrt({})", self.radicand)
        }
    }
}

fn integer_sqrt(v: u64) -> u64 {
    let mut r = libm::sqrt(v as f64) as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub e: u32,
    pub standard_dim: u64,
    /// Sorted ascending.
    pub folded_points: Vec<LatticePoint>,
    pub folded_dim: u64,
}

/// 2E − 1. Panics if E = 0.
pub fn standard_dim(e: u32) -> u64 {
    assert!(e >= 1, "E must be positive");
    2 * u64::from(e) - 1
}

/// Standard integral leaves l = −E+1, …, E−1 (half-integer spacing of the
/// action lattice in units of E).
pub fn standard_points(e: u32) -> Vec<i64> {
    assert!(e >= 1, "E must be positive");
    let e = i64::from(e);
    (-(e - 1)..=(e - 1)).collect()
}

/// Folded integral leaves. Panics if E = 0.
pub fn folded_points(e: u32) -> LatticeReport {
    assert!(e >= 1, "E must be positive");
    let e2 = u64::from(e) * u64::from(e);
    let mut points = Vec::new();
    let mut k = 1;
    while 2 * k <= e2 {
        let radicand = e2 - 2 * k;
        if radicand == 0 {
            points.push(LatticePoint { sign: 1, radicand: 0 });
        } else {
            points.push(LatticePoint { sign: 1, radicand });
            points.push(LatticePoint { sign: -1, radicand });
        }
        k += 1;
    }
    points.sort();
    let folded_dim = points.len() as u64;
    LatticeReport { e, standard_dim: standard_dim(e), folded_points: points, folded_dim }
}

/// Closed-form count 2(⌈E²/2⌉ − 1) + [E even].
pub fn folded_dim(e: u32) -> u64 {
    assert!(e >= 1, "E must be positive");
    let e2 = u64::from(e) * u64::from(e);
    2 * (e2.div_ceil(2) - 1) + u64::from(e.is_multiple_of(2))
}
