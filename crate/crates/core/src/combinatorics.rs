//! Exact binomial / psi calculus and 2-adic valuation tools.
//!
//! Everything here is arbitrary-precision integer arithmetic; no floating
//! point. The binomial is extended so that C(v, w) = 0 for w < 0 or w > v,
//! which lets every closed form downstream evaluate without case splits.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Argument pair of the psi function. psi is only defined for v >= 0,
/// which the field type enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PsiArgs {
    pub v: u64,
    pub w: i64,
}

/// 2-adic valuation of an integer. The valuation of 0 is undefined
/// (conventionally infinite), so it gets its own variant instead of a
/// meaningless number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation2 {
    /// The argument was 0; no finite exponent exists.
    OfZero,
    /// Largest e such that 2^e divides the argument.
    Exact(u64),
}

impl Valuation2 {
    pub fn exact(self) -> Option<u64> {
        match self {
            Valuation2::OfZero => None,
            Valuation2::Exact(e) => Some(e),
        }
    }

    pub fn is_of_zero(self) -> bool {
        matches!(self, Valuation2::OfZero)
    }
}

impl Serialize for Valuation2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        match self {
            Valuation2::OfZero => {
                map.serialize_entry("of_zero", &true)?;
                map.serialize_entry("value", &Option::<u64>::None)?;
            }
            Valuation2::Exact(e) => {
                map.serialize_entry("of_zero", &false)?;
                map.serialize_entry("value", &Some(*e))?;
            }
        }
        map.end()
    }
}

/// Binomial coefficient C(v, w), with C(v, w) = 0 for w < 0 or w > v.
pub fn binomial(v: u64, w: i64) -> BigInt {
    if w < 0 || w as u64 > v {
        return BigInt::zero();
    }
    let w = w as u64;
    // Multiplicative form over the shorter side keeps the loop at
    // min(w, v - w) exact mul/div steps.
    let w = w.min(v - w);
    let mut acc = BigInt::one();
    for i in 0..w {
        acc *= v - i;
        acc /= i + 1;
    }
    acc
}

/// psi(v, w) = C(v, w) + C(v+1, w+1).
///
/// For 0 <= w <= v this is computed through the factored form
/// C(v, w) * (v + w + 2) / (w + 1), which needs a single binomial; the
/// plain two-binomial sum is kept as a cross-check in the test suite.
pub fn psi(v: u64, w: i64) -> BigInt {
    if w == -1 {
        // C(v, -1) = 0 and C(v+1, 0) = 1 for every v >= 0.
        return BigInt::one();
    }
    if w < -1 || w as u64 > v {
        return BigInt::zero();
    }
    let w = w as u64;
    let mut acc = binomial(v, w as i64);
    acc *= v + w + 2;
    acc /= w + 1;
    acc
}

/// 2-adic valuation of x.
pub fn nu2(x: &BigInt) -> Valuation2 {
    match x.trailing_zeros() {
        None => Valuation2::OfZero,
        Some(e) => Valuation2::Exact(e),
    }
}

/// Number of carries when adding w and u in base 2.
pub fn kummer_carries(w: u64, u: u64) -> u32 {
    let mut a = w;
    let mut b = u;
    let mut carry = 0u64;
    let mut count = 0u32;
    while a != 0 || b != 0 || carry != 0 {
        let sum = (a & 1) + (b & 1) + carry;
        carry = sum >> 1;
        count += carry as u32;
        a >>= 1;
        b >>= 1;
    }
    count
}

/// Exact 2-adic valuation of psi(v, w) for v, w >= 0.
///
/// Errors when psi(v, w) = 0 (that is, when w > v).
pub fn nu2_psi(v: u64, w: u64) -> Result<Valuation2> {
    let value = psi(v, w as i64);
    if value.is_zero() {
        return Err(Error::PsiIsZero { v, w });
    }
    Ok(nu2(&value))
}

/// nu2(psi(v, w)) through the factorization
/// psi(v, w) = C(v, w) * (v + w + 2) / (w + 1), for 0 <= w <= v.
///
/// Used as the second route when cross-checking `nu2_psi`, and by the
/// exhaustive valuation sweeps where the telescoped nu2(C(v, w)) makes it
/// O(1) per pair.
pub fn nu2_psi_factored(nu2_binomial: u64, v: u64, w: u64) -> u64 {
    debug_assert!(w <= v);
    let add = (v + w + 2).trailing_zeros() as u64;
    let sub = (w + 1).trailing_zeros() as u64;
    nu2_binomial + add - sub
}
