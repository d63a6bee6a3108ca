//! Exact evaluation of the reflected k-step Fibonacci sequence H_n (the
//! sequence at non-positive indices, H_n = F_{-n}) by three independent
//! routes: the iterative recurrence, companion-matrix powers, and the
//! binomial closed forms, together with the index bookkeeping used by the
//! block identities.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::combinatorics::psi;
use crate::error::{Error, Result};

/// Recurrence order k >= 2 plus the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceParams {
    k: u32,
}

/// n rewritten as n = m*k + r with the remainder window r in [-1, k-2].
///
/// This window (rather than [0, k-1]) is the canonical decomposition because
/// the closed forms are indexed that way; the inverse is fixed as
/// m = floor((n+1)/k), r = ((n+1) mod k) - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexDecomposition {
    pub n: u64,
    pub m: u64,
    pub r: i64,
}

/// Coordinates inside the square blocks M_b (b >= 1) that tile the sequence
/// after the initial (k-1) x (k+1) rectangle. Entry (b, j, r) sits at global
/// index (b*k^2 - b*k - 1) + j*k + r.
///
/// The rectangular initial block uses a different shape, so b = 0 is
/// addressed by global index only and is rejected here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatrixCoords {
    pub b: u64,
    pub j: u32,
    pub r: u32,
}

/// One term of the order-(iv) closed form at (m, r): the i-th summand
/// sign * bracket * 2^exponent with sign = (-1)^(i*k+r+1),
/// bracket = psi(m-i-1, i*k+r) and exponent = m - i*(k+1) - r - 2.
///
/// Whenever bracket != 0 the exponent is >= -1, and exponent = -1 forces
/// bracket = psi(v, v) = 2, so every nonzero term is an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormTerm {
    pub i: u64,
    pub sign: i8,
    #[serde(serialize_with = "crate::report::serialize_bigint")]
    pub bracket: BigInt,
    pub exponent: i64,
}

/// Full term list of the closed form at (m, r), plus l' = the largest
/// positive index with a nonzero bracket (when it exists).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormExpansion {
    pub m: u64,
    pub r: i64,
    pub l: u64,
    pub terms: Vec<ClosedFormTerm>,
    pub l_prime: Option<u64>,
}

impl SequenceParams {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        Ok(SequenceParams { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Global index of entry (b, 0, 0) for b >= 1: b*k^2 - b*k - 1.
    pub fn block_offset(&self, b: u64) -> u64 {
        debug_assert!(b >= 1);
        let k = self.k as u64;
        b * k * k - b * k - 1
    }

    /// Signed base index of block b (the b = 0 rectangle starts at -1 in
    /// this notation: H_{0,x} = H_{x-1}).
    fn block_base(&self, b: u64) -> i64 {
        let k = self.k as i64;
        b as i64 * (k * k - k) - 1
    }

    /// Unique (m, r) with n = m*k + r and r in [-1, k-2].
    pub fn decompose_index(&self, n: u64) -> IndexDecomposition {
        let k = self.k as u64;
        let m = (n + 1) / k;
        let r = ((n + 1) % k) as i64 - 1;
        IndexDecomposition { n, m, r }
    }

    /// Streaming iterator over H_0, H_1, H_2, ... with O(k) memory.
    pub fn h_stream(&self) -> HStream {
        HStream {
            k: self.k as usize,
            next: 0,
            window: VecDeque::with_capacity(self.k as usize + 1),
        }
    }

    /// H_n by the iterative recurrence: initial values, the full order-k sum
    /// at n = k, and the two-term identity H_n = 2 H_{n-k} - H_{n-k-1} for
    /// n >= k+1.
    pub fn h_iter(&self, n: u64) -> BigInt {
        self.h_stream().nth(n as usize).expect("stream is infinite")
    }

    /// H_{n0..=n1} in a single pass.
    pub fn h_range(&self, n0: u64, n1: u64) -> Result<Vec<BigInt>> {
        if n0 > n1 {
            return Err(Error::EmptyRange(n0, n1));
        }
        Ok(self
            .h_stream()
            .skip(n0 as usize)
            .take((n1 - n0 + 1) as usize)
            .collect())
    }

    /// H_n through the companion matrix of the order-k recurrence, raised by
    /// binary exponentiation; an O(k^3 log n) route independent of h_iter.
    pub fn h_matrix(&self, n: u64) -> BigInt {
        let k = self.k as u64;
        if n < k - 1 {
            return BigInt::zero();
        }
        let pow = Companion::new(self.k).power(n - (k - 1));
        // State at k-1 is the unit vector e_0, so H_n is the top-left entry.
        pow.at(0, 0).clone()
    }

    /// State vector (H_n, H_{n-1}, ..., H_{n-k+1}) for n >= k-1, computed as
    /// the first column of the companion power.
    pub fn companion_state(&self, n: u64) -> Vec<BigInt> {
        let k = self.k as usize;
        assert!(n >= self.k as u64 - 1);
        let pow = Companion::new(self.k).power(n - (self.k as u64 - 1));
        (0..k).map(|row| pow.at(row, 0).clone()).collect()
    }

    /// Advance a companion state vector by one index using the full order-k
    /// recurrence row H_{n+1} = H_{n+1-k} - (H_{n+1-(k-1)} + ... + H_n).
    pub fn companion_step(&self, state: &mut Vec<BigInt>) {
        let k = self.k as usize;
        debug_assert_eq!(state.len(), k);
        let mut next = state[k - 1].clone();
        for v in state.iter().take(k - 1) {
            next -= v;
        }
        state.rotate_right(1);
        state[0] = next;
    }

    /// H_n by the closed forms, dispatched on the (m, r) decomposition.
    pub fn h_closed(&self, n: u64) -> BigInt {
        let k = self.k as u64;
        let IndexDecomposition { m, r, .. } = self.decompose_index(n);
        if (r >= 0 && m <= r as u64) || n < k - 1 {
            // 0 <= m <= r <= k-2: upper-triangular zeros.
            return BigInt::zero();
        }
        if r == -1 && m <= k - 1 {
            // H_{mk-1} = 2^(m-1) for m in [1, k-1].
            return BigInt::one() << (m - 1) as usize;
        }
        if m <= k - 1 {
            // 0 <= r < m <= k-1: single psi term.
            let term = signed_power_term(psi(m - 1, r), m as i64 - r - 2, r + 1);
            return term;
        }
        self.closed_form_sum(m, r)
    }

    /// Sum of the order-(iv) closed form, skipping terms whose bracket
    /// provably vanishes (w > v).
    fn closed_form_sum(&self, m: u64, r: i64) -> BigInt {
        let k = self.k as u64;
        let l = self.closed_form_l(m);
        // bracket != 0 needs i*k + r <= m - i - 1, i.e. i <= (m - r - 1)/(k+1);
        // the i = 0, r = -1 bracket psi(m-1, -1) = 1 is inside this range too.
        let i_max = ((m as i64 - r - 1) / (k as i64 + 1)) as u64;
        let mut acc = BigInt::zero();
        for i in 0..=i_max.min(l) {
            let w = (i * k) as i64 + r;
            let bracket = psi(m - i - 1, w);
            if bracket.is_zero() {
                continue;
            }
            let exponent = m as i64 - (i * (k + 1)) as i64 - r - 2;
            let parity = (i & 1) * (k & 1) + (r + 1) as u64;
            acc += signed_power_term(bracket, exponent, parity as i64);
        }
        acc
    }

    fn closed_form_l(&self, m: u64) -> u64 {
        if self.k == 2 {
            m - 1
        } else {
            m / (self.k as u64 - 1)
        }
    }

    /// Full closed-form term list at (m, r) for m >= k-1, with the l'
    /// extraction (largest i > 0 whose bracket is nonzero).
    pub fn closed_form_terms(&self, m: u64, r: i64) -> Result<ClosedFormExpansion> {
        let k = self.k as u64;
        if m < k - 1 {
            return Err(Error::MSliceTooSmall { m, min: k - 1 });
        }
        if r < -1 || r > k as i64 - 2 {
            return Err(Error::RemainderOutOfRange { r, max: k as i64 - 2 });
        }
        let l = self.closed_form_l(m);
        let mut terms = Vec::with_capacity(l as usize + 1);
        let mut l_prime = None;
        for i in 0..=l {
            let w = (i * k) as i64 + r;
            let bracket = psi(m - i - 1, w);
            if i > 0 && !bracket.is_zero() {
                l_prime = Some(i);
            }
            let parity = ((i & 1) * (k & 1) + (r + 1) as u64) & 1;
            terms.push(ClosedFormTerm {
                i,
                sign: if parity == 1 { -1 } else { 1 },
                bracket,
                exponent: m as i64 - (i * (k + 1)) as i64 - r - 2,
            });
        }
        Ok(ClosedFormExpansion {
            m,
            r,
            l,
            terms,
            l_prime,
        })
    }

    /// F at a non-positive index: F_n = H_{-n} for n <= 0.
    pub fn negafib(&self, n: i64) -> Result<BigInt> {
        if n > 0 {
            return Err(Error::PositiveIndex(n));
        }
        Ok(self.h_iter(n.unsigned_abs()))
    }

    /// Entry (b, j, r) of block M_b through the block closed form
    ///
    ///   H_{b,jk+r} = sum_{i=0}^{b} (-1)^(ik+r) 2^((b-i)k+j-r-b-i-1)
    ///                              psi(bk+j-b-i-1, ik+r-1)
    ///
    /// for k > 2; for k = 2 (where the block form does not apply) the value
    /// is routed through h_closed at the decoded global index. Bit-identical
    /// to h_iter at that index either way.
    pub fn matrix_entry(&self, coords: &MatrixCoords) -> BigInt {
        let k = self.k as u64;
        let global = self.block_offset(coords.b) + coords.j as u64 * k + coords.r as u64;
        if self.k == 2 {
            return self.h_closed(global);
        }
        let (b, j, r) = (coords.b, coords.j as u64, coords.r as i64);
        let mut acc = BigInt::zero();
        for i in 0..=b {
            let w = (i * k) as i64 + r - 1;
            let v = b * k + j - b - i - 1;
            let bracket = psi(v, w);
            if bracket.is_zero() {
                continue;
            }
            let exponent = ((b - i) * k + j) as i64 - r - (b + i) as i64 - 1;
            let parity = (i & 1) * (k & 1) + r as u64;
            acc += signed_power_term(bracket, exponent, parity as i64);
        }
        acc
    }

    /// H at offset `offset` (possibly negative) from the base of block b,
    /// i.e. the value H_{b,offset} with global index (b*k^2-b*k-1) + offset.
    pub fn block_entry(&self, b: u64, offset: i64) -> Result<BigInt> {
        let global = self.block_base(b) + offset;
        if global < 0 {
            return Err(Error::BlockIndexUnderflow { b, offset });
        }
        Ok(self.h_iter(global as u64))
    }
}

impl MatrixCoords {
    pub fn new(params: &SequenceParams, b: u64, j: i64, r: i64) -> Result<Self> {
        let k = params.k() as i64;
        if b < 1 || j < 0 || j >= k || r < 0 || r >= k {
            return Err(Error::InvalidBlockCoords {
                k: params.k(),
                b,
                j,
                r,
            });
        }
        Ok(MatrixCoords {
            b,
            j: j as u32,
            r: r as u32,
        })
    }

    pub fn global_index(&self, params: &SequenceParams) -> u64 {
        params.block_offset(self.b) + self.j as u64 * params.k() as u64 + self.r as u64
    }
}

/// sign * bracket * 2^exponent where sign = (-1)^parity, handling the
/// exponent = -1 case exactly (the bracket is then 2 by the term invariant).
fn signed_power_term(bracket: BigInt, exponent: i64, parity: i64) -> BigInt {
    debug_assert!(!bracket.is_zero());
    let magnitude = if exponent >= 0 {
        bracket << exponent as usize
    } else {
        assert!(
            exponent == -1 && bracket.magnitude().bits() == 2 && bracket.is_positive(),
            "negative exponent with bracket != 2"
        );
        BigInt::one()
    };
    if parity.rem_euclid(2) == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// Iterator over H_0, H_1, ... holding only the last k+1 values.
pub struct HStream {
    k: usize,
    next: u64,
    window: VecDeque<BigInt>,
}

impl Iterator for HStream {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let k = self.k as u64;
        let n = self.next;
        let value = if n < k - 1 {
            BigInt::zero()
        } else if n == k - 1 {
            BigInt::one()
        } else if n == k {
            // Full order-k sum: H_k = H_0 - (H_1 + ... + H_{k-1}).
            let mut acc = self.window[0].clone();
            for v in self.window.iter().skip(1) {
                acc -= v;
            }
            acc
        } else {
            // Two-term identity for n >= k+1; window front is H_{n-k-1}.
            let double = &self.window[1] << 1u32;
            double - &self.window[0]
        };
        if self.window.len() == self.k + 1 {
            self.window.pop_front();
        }
        self.window.push_back(value.clone());
        self.next += 1;
        Some(value)
    }
}

/// Dense k x k companion matrix of the recurrence
/// H_n = -H_{n-1} - ... - H_{n-k+1} + H_{n-k}.
struct Companion {
    k: usize,
    data: Vec<BigInt>,
}

impl Companion {
    fn new(k: u32) -> Self {
        let k = k as usize;
        let mut data = vec![BigInt::zero(); k * k];
        for col in 0..k - 1 {
            data[col] = -BigInt::one();
        }
        data[k - 1] = BigInt::one();
        for row in 1..k {
            data[row * k + row - 1] = BigInt::one();
        }
        Companion { k, data }
    }

    fn identity(k: usize) -> Self {
        let mut data = vec![BigInt::zero(); k * k];
        for i in 0..k {
            data[i * k + i] = BigInt::one();
        }
        Companion { k, data }
    }

    fn at(&self, row: usize, col: usize) -> &BigInt {
        &self.data[row * self.k + col]
    }

    fn mul(&self, other: &Companion) -> Companion {
        let k = self.k;
        let mut data = vec![BigInt::zero(); k * k];
        for row in 0..k {
            for mid in 0..k {
                let a = self.at(row, mid);
                if a.is_zero() {
                    continue;
                }
                for col in 0..k {
                    let b = other.at(mid, col);
                    if !b.is_zero() {
                        data[row * k + col] += a * b;
                    }
                }
            }
        }
        Companion { k, data }
    }

    fn power(&self, mut e: u64) -> Companion {
        let mut result = Companion::identity(self.k);
        let mut base = Companion {
            k: self.k,
            data: self.data.clone(),
        };
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(k: u32) -> SequenceParams {
        SequenceParams::new(k).unwrap()
    }

    fn bigs(vals: &[i64]) -> Vec<BigInt> {
        vals.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn rejects_order_below_two() {
        assert_eq!(SequenceParams::new(1), Err(Error::InvalidOrder(1)));
        assert_eq!(SequenceParams::new(0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn decompose_examples() {
        let d = seq(4).decompose_index(9);
        assert_eq!((d.m, d.r), (2, 1));
        let d = seq(3).decompose_index(5);
        assert_eq!((d.m, d.r), (2, -1));
        let d = seq(5).decompose_index(4);
        assert_eq!((d.m, d.r), (1, -1));
        // Round trip and window over a grid.
        for k in 2..=9u32 {
            let p = seq(k);
            for n in 0..500u64 {
                let d = p.decompose_index(n);
                assert_eq!(d.m as i64 * k as i64 + d.r, n as i64);
                assert!(d.r >= -1 && d.r <= k as i64 - 2);
            }
        }
    }

    #[test]
    fn iter_small_tables() {
        assert_eq!(
            seq(3).h_range(0, 8).unwrap(),
            bigs(&[0, 0, 1, -1, 0, 2, -3, 1, 4])
        );
        assert_eq!(seq(4).h_range(0, 6).unwrap(), bigs(&[0, 0, 0, 1, -1, 0, 0]));
        assert_eq!(seq(2).h_range(0, 4).unwrap(), bigs(&[0, 1, -1, 2, -3]));
        assert_eq!(seq(4).h_iter(8), BigInt::from(-3));
        // H_i = 0 for i <= k-2, H_{k-1} = 1.
        for k in 2..=12u32 {
            let head = seq(k).h_range(0, k as u64 - 1).unwrap();
            assert!(head[..k as usize - 1].iter().all(|v| v.is_zero()));
            assert_eq!(head[k as usize - 1], BigInt::one());
        }
    }

    #[test]
    fn diagonal_powers_of_two() {
        for k in 2..=12u32 {
            let p = seq(k);
            for m in 1..k as u64 {
                assert_eq!(p.h_iter(m * k as u64 - 1), BigInt::one() << (m - 1) as usize);
            }
        }
    }

    #[test]
    fn h_range_rejects_reversed() {
        assert_eq!(seq(3).h_range(5, 4), Err(Error::EmptyRange(5, 4)));
    }

    #[test]
    fn matrix_route_matches_iter() {
        assert_eq!(seq(3).h_matrix(17), BigInt::zero());
        assert_eq!(seq(4).h_matrix(9), BigInt::one());
        for k in 2..=6u32 {
            let p = seq(k);
            assert_eq!(p.h_matrix(k as u64 - 1), BigInt::one());
            let table = p.h_range(0, 120).unwrap();
            for n in (0..=120).step_by(7) {
                assert_eq!(p.h_matrix(n), table[n as usize], "k={k} n={n}");
            }
        }
    }

    #[test]
    fn companion_state_and_step_stream() {
        for k in 2..=6u32 {
            let p = seq(k);
            let table = p.h_range(0, 80).unwrap();
            let mut state = p.companion_state(k as u64 - 1);
            for n in (k as u64 - 1)..80 {
                assert_eq!(state[0], table[n as usize], "k={k} n={n}");
                p.companion_step(&mut state);
            }
            assert_eq!(state, p.companion_state(80));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(seq(4).h_closed(9), BigInt::one());
        assert_eq!(seq(3).h_closed(16), BigInt::from(56));
        assert_eq!(seq(3).h_closed(17), BigInt::zero());
        assert_eq!(seq(4).h_closed(8), BigInt::from(-3));
    }

    #[test]
    fn three_routes_agree_small() {
        for k in 2..=5u32 {
            let p = seq(k);
            let table = p.h_range(0, 220).unwrap();
            for n in 0..=220u64 {
                assert_eq!(p.h_closed(n), table[n as usize], "closed k={k} n={n}");
            }
            for n in (0..=220u64).step_by(11) {
                assert_eq!(p.h_matrix(n), table[n as usize], "matrix k={k} n={n}");
            }
        }
    }

    #[test]
    fn closed_form_term_lists() {
        let p = seq(3);
        let exp = p.closed_form_terms(6, -1).unwrap();
        assert_eq!(exp.l, 3);
        assert_eq!(exp.l_prime, Some(1));
        assert_eq!(exp.terms[0].bracket, BigInt::one());
        assert_eq!(exp.terms[0].exponent, 5);
        assert_eq!(exp.terms[0].sign, 1);
        assert_eq!(exp.terms[1].bracket, BigInt::from(16));
        assert_eq!(exp.terms[1].exponent, 1);
        assert_eq!(exp.terms[1].sign, -1);
        assert!(exp.terms[2].bracket.is_zero());
        assert!(exp.terms[3].bracket.is_zero());

        let exp = p.closed_form_terms(2, -1).unwrap();
        assert_eq!(exp.l_prime, None);
        assert_eq!(exp.terms[0].bracket, BigInt::one());
        assert_eq!(exp.terms[0].exponent, 1);

        // Equality case: m = k-1, r = k-2 has bracket psi(k-2,k-2) = 2 at
        // exponent -1.
        for k in 2..=10u32 {
            let p = seq(k);
            let exp = p.closed_form_terms(k as u64 - 1, k as i64 - 2).unwrap();
            assert_eq!(exp.terms[0].bracket, BigInt::from(2));
            assert_eq!(exp.terms[0].exponent, -1);
        }
    }

    #[test]
    fn closed_form_terms_domain() {
        assert!(matches!(
            seq(5).closed_form_terms(2, 0),
            Err(Error::MSliceTooSmall { m: 2, min: 4 })
        ));
        assert!(matches!(
            seq(3).closed_form_terms(5, 2),
            Err(Error::RemainderOutOfRange { r: 2, .. })
        ));
    }

    #[test]
    fn exponent_safety_invariant() {
        for k in [2u32, 3, 5, 8] {
            let p = seq(k);
            for m in (k as u64 - 1)..(k as u64 - 1 + 40) {
                for r in -1..=(k as i64 - 2) {
                    let exp = p.closed_form_terms(m, r).unwrap();
                    for t in &exp.terms {
                        if !t.bracket.is_zero() {
                            assert!(t.exponent >= -1, "k={k} m={m} r={r} i={}", t.i);
                            if t.exponent == -1 {
                                assert_eq!(t.bracket, BigInt::from(2));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn negafib_reflects() {
        assert_eq!(seq(2).negafib(-4).unwrap(), BigInt::from(-3));
        assert_eq!(seq(3).negafib(-17).unwrap(), BigInt::zero());
        assert_eq!(seq(7).negafib(0).unwrap(), BigInt::zero());
        assert_eq!(seq(3).negafib(1), Err(Error::PositiveIndex(1)));
    }

    #[test]
    fn block_entries() {
        let p4 = seq(4);
        let c = MatrixCoords::new(&p4, 1, 0, 0).unwrap();
        assert_eq!(c.global_index(&p4), 11);
        assert_eq!(p4.matrix_entry(&c), BigInt::from(4)); // 2^(k-2)
        let c = MatrixCoords::new(&p4, 1, 1, 0).unwrap();
        assert_eq!(p4.matrix_entry(&c), BigInt::from(8)); // 2^(k-1)

        let p3 = seq(3);
        let c = MatrixCoords::new(&p3, 1, 0, 0).unwrap();
        assert_eq!(c.global_index(&p3), 5);
        assert_eq!(p3.matrix_entry(&c), BigInt::from(2));

        assert!(MatrixCoords::new(&p4, 0, 0, 0).is_err());
        assert!(MatrixCoords::new(&p4, 1, 4, 0).is_err());
        assert!(MatrixCoords::new(&p4, 1, 0, -1).is_err());
    }

    #[test]
    fn block_closed_form_matches_iter() {
        for k in 3..=7u32 {
            let p = seq(k);
            for b in 1..=3u64 {
                for j in 0..k as i64 {
                    for r in 0..k as i64 {
                        let c = MatrixCoords::new(&p, b, j, r).unwrap();
                        let got = p.matrix_entry(&c);
                        let want = p.h_iter(c.global_index(&p));
                        assert_eq!(got, want, "k={k} b={b} j={j} r={r}");
                    }
                }
            }
        }
        // k = 2 routes through the closed form at the global index.
        let p2 = seq(2);
        for b in 1..=4u64 {
            for j in 0..2i64 {
                for r in 0..2i64 {
                    let c = MatrixCoords::new(&p2, b, j, r).unwrap();
                    assert_eq!(p2.matrix_entry(&c), p2.h_iter(c.global_index(&p2)));
                }
            }
        }
    }

    #[test]
    fn block_entry_negative_offsets() {
        let p = seq(3);
        // H_{1,-3} sits at global index 5 - 3 = 2.
        assert_eq!(p.block_entry(1, -3).unwrap(), BigInt::one());
        assert!(matches!(
            p.block_entry(1, -6),
            Err(Error::BlockIndexUnderflow { b: 1, offset: -6 })
        ));
    }

    #[test]
    fn row_chaining_between_blocks() {
        // Entry (b, 0, r) equals entry (b-1, k-1, r), and the off-by-one
        // shift H_{b,-1} = H_{b-1,(k-2)k+(k-1)} holds.
        for k in 3..=6u32 {
            let p = seq(k);
            for b in 2..=4u64 {
                for r in 0..k as i64 {
                    let lhs = p.matrix_entry(&MatrixCoords::new(&p, b, 0, r).unwrap());
                    let rhs =
                        p.matrix_entry(&MatrixCoords::new(&p, b - 1, k as i64 - 1, r).unwrap());
                    assert_eq!(lhs, rhs);
                }
                let lhs = p.block_entry(b, -1).unwrap();
                let rhs = p
                    .block_entry(b - 1, ((k - 2) * k + (k - 1)) as i64)
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
