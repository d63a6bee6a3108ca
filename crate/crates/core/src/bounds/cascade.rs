//! The linear-form bound pair and the three-step absolute-bound chain that
//! rules out zeros beyond the proven set for odd k > 500.
//!
//! For a purported zero H_n = 0 the normalized linear form Lambda obeys
//!   |Lambda| > exp(-5e13 k^7 ln(n+1) (ln k)^2)          (lower bound)
//!   |Lambda| < (3(k-2)/(k-1)) / (|f_k(a_k)| r^(n+1))    (upper bound)
//! with r = |a_(k-2)/a_k| taken over the modulus-sorted roots. Combining
//! them caps n per k; combining that cap with the 2-adic floor
//! 2^((k-1)/2) <= n caps k, three times over, ending in a contradiction.

use std::f64::consts::{E, PI};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, ToPrimitive};
use rayon::prelude::*;

use super::binet::f_weight;
use super::roots::{smallest_modulus_pair, RootSet};
use crate::error::{Error, Result};
use crate::report::{
    CascadeReport, CascadeStep, LambdaBounds, VerificationReport, Violation, SCHEMA,
};
use crate::sequence::SequenceParams;

/// Matveev-type coefficient of the lower bound: 5e13 k^7 (ln k)^2.
fn lower_bound_coefficient(k: u32) -> f64 {
    5e13 * (k as f64).powi(7) * (k as f64).ln().powi(2)
}

/// ln of a positive big integer, stable for any size.
fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert!(n.sign() == num_bigint::Sign::Plus);
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().expect("small value fits").ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().expect("53 bits fit");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln |a_(k-2)| - ln |a_k| and ln |f_k(a_k)| for one order, from the two
/// smallest-modulus root classes.
struct PairLogs {
    ln_ratio: f64,
    ln_f_abs: f64,
}

fn pair_logs(params: &SequenceParams, precision_bits: u32) -> Result<PairLogs> {
    let wp = precision_bits + 64;
    let (last, second) = smallest_modulus_pair(params, precision_bits)?;
    let ratio = second.modulus.div(&last.modulus, wp);
    let ln_ratio = ratio.ln(wp).to_f64();
    let f_abs = f_weight(params.k(), &last.value, wp)?.abs(wp);
    Ok(PairLogs {
        ln_ratio,
        ln_f_abs: f_abs.ln(wp).to_f64(),
    })
}

/// Both sides of the bound pair at (k, n), in natural-log space.
pub fn lambda_bounds(params: &SequenceParams, n: &BigInt, roots: &RootSet) -> Result<LambdaBounds> {
    let k = params.k();
    if k < 3 {
        return Err(Error::UnsupportedOrder {
            k,
            min: 3,
            what: "the linear-form bound pair",
        });
    }
    let wp = roots.precision_bits + 64;
    let np1 = n + 1u32;
    let lower_log = -lower_bound_coefficient(k) * ln_bigint(&np1);
    let mu_last = &roots.alpha(k as usize).modulus;
    let mu_second = &roots.alpha(k as usize - 2).modulus;
    let ln_ratio = mu_second.div(mu_last, wp).ln(wp).to_f64();
    let ratio_log = np1.to_f64().unwrap_or(f64::INFINITY) * ln_ratio;
    let f_abs = f_weight(k, &roots.alpha(k as usize).value, wp)?.abs(wp);
    let kf = k as f64;
    let upper_log = (3.0 * (kf - 2.0) / (kf - 1.0)).ln() - f_abs.ln(wp).to_f64() - ratio_log;
    Ok(LambdaBounds {
        k,
        n_log10: ln_bigint(n) / std::f64::consts::LN_10,
        lower_log,
        upper_log,
        ratio_log,
    })
}

/// D(n) = (n+1) ln r + ln|f/3| - A ln(n+1): the bound pair admits a zero at
/// n only while D(n) < 0.
fn feasibility_gap(n: &BigInt, a_coef: f64, ln_ratio: f64, ln_f_over_3: f64) -> f64 {
    let np1 = n + 1u32;
    np1.to_f64().unwrap_or(f64::INFINITY) * ln_ratio + ln_f_over_3 - a_coef * ln_bigint(&np1)
}

/// Smallest N with D(n) >= 0 for every n >= N; any zero index satisfies
/// n < N.
fn solve_crossing(a_coef: f64, ln_ratio: f64, ln_f_over_3: f64) -> BigInt {
    // D decreases to its minimum near n* = A/ln r - 1 and increases beyond,
    // so the upward crossing past n* is the threshold.
    let n_star = (a_coef / ln_ratio).max(4.0);
    let mut lo = BigInt::from_f64(n_star).expect("finite");
    while lo > BigInt::one() && feasibility_gap(&lo, a_coef, ln_ratio, ln_f_over_3) >= 0.0 {
        lo >>= 1;
    }
    if feasibility_gap(&lo, a_coef, ln_ratio, ln_f_over_3) >= 0.0 {
        return BigInt::one();
    }
    let mut hi = lo.clone() << 1;
    while feasibility_gap(&hi, a_coef, ln_ratio, ln_f_over_3) < 0.0 {
        hi <<= 1;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&hi + &lo) >> 1;
        if feasibility_gap(&mid, a_coef, ln_ratio, ln_f_over_3) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Per-k ceiling on any zero index, from a full certified root set.
pub fn solve_n_bound(params: &SequenceParams, roots: &RootSet) -> Result<BigInt> {
    let k = params.k();
    if k < 4 {
        return Err(Error::UnsupportedOrder {
            k,
            min: 4,
            what: "the n-bound solver",
        });
    }
    let wp = roots.precision_bits + 64;
    let mu_last = &roots.alpha(k as usize).modulus;
    let mu_second = &roots.alpha(k as usize - 2).modulus;
    let ln_ratio = mu_second.div(mu_last, wp).ln(wp).to_f64();
    let ln_f_abs = f_weight(k, &roots.alpha(k as usize).value, wp)?
        .abs(wp)
        .ln(wp)
        .to_f64();
    Ok(solve_crossing(
        lower_bound_coefficient(k),
        ln_ratio,
        ln_f_abs - 3f64.ln(),
    ))
}

/// Per-k ceiling computed from the two targeted root classes only (what the
/// chain uses for k near 800, where a full root set is wasteful).
pub fn n_bound_for_k(params: &SequenceParams, precision_bits: u32) -> Result<BigInt> {
    let logs = pair_logs(params, precision_bits)?;
    Ok(solve_crossing(
        lower_bound_coefficient(params.k()),
        logs.ln_ratio,
        logs.ln_f_abs - 3f64.ln(),
    ))
}

/// Largest odd k whose 2-adic floor 2^((k-1)/2) stays strictly below n.
fn largest_odd_k_below(n: &BigInt) -> u32 {
    let bits = n.bits();
    debug_assert!(bits >= 2);
    let e_max = if (BigInt::one() << (bits - 1) as usize) < *n {
        bits - 1
    } else {
        bits - 2
    };
    (2 * e_max + 1) as u32
}

/// Step-1 inequality: (sqrt2 e/pi)^k < 3 sqrt2 1e14 k^17.6 (ln k)^3.
fn step1_holds(k: u32) -> bool {
    let kf = k as f64;
    let lhs = kf * (2f64.sqrt() / (PI / E)).ln();
    let rhs = (3.0 * 2f64.sqrt() * 1e14).ln() + 17.6 * kf.ln() + 3.0 * kf.ln().ln();
    lhs < rhs
}

const STEP1_K_BOUND: u32 = 790;
const STEP2_K_BOUND: u32 = 517;

fn step2_n_bound() -> BigInt {
    BigInt::from(25u32) * BigInt::from(10u32).pow(44) // 2.5e45
}

fn step3_n_bound() -> BigInt {
    BigInt::from(35u32) * BigInt::from(10u32).pow(42) // 3.5e43
}

fn max_n_bound_over_odd(k_lo: u32, k_hi: u32, precision_bits: u32) -> Result<(BigInt, u32)> {
    let ks: Vec<u32> = (k_lo..=k_hi).filter(|k| k % 2 == 1).collect();
    let bounds: Vec<(u32, BigInt)> = ks
        .par_iter()
        .map(|&k| {
            let params = SequenceParams::new(k)?;
            Ok((k, n_bound_for_k(&params, precision_bits)?))
        })
        .collect::<Result<_>>()?;
    let (at_k, n_max) = bounds
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1))
        .map(|(k, n)| (k, n))
        .expect("non-empty range");
    Ok((n_max, at_k))
}

/// The three-step chain. Each step solves its inequality sharply and also
/// certifies the conservative round-number thresholds
/// (790 / 2.5e45 / 517 / 3.5e43 / contradiction below 501) that the chain
/// is quoted with.
pub fn k_upper_bound_cascade(precision_bits: u32) -> Result<CascadeReport> {
    // Step 1: 2^((k-1)/2) <= n < 3e14 k^17.6 (ln k)^3 (pi/e)^k forces the
    // transcendental inequality; find the largest k where it still holds.
    let holding: Vec<u32> = (4..=4000).filter(|&k| step1_holds(k)).collect();
    let k1_solved = *holding.last().expect("holds at k = 4");
    // The inequality must hold on all of [4, k1] and nowhere after.
    let contiguous = holding.len() as u32 == k1_solved - 3;
    let step1 = CascadeStep {
        step: 1,
        description: "largest k with (sqrt2*e/pi)^k < 3*sqrt2*1e14 * k^17.6 * (ln k)^3".into(),
        k_solved: Some(k1_solved),
        k_bound: Some(STEP1_K_BOUND),
        n_solved: None,
        n_solved_log2: None,
        n_solved_at_k: None,
        n_bound: None,
        bound_valid: contiguous && k1_solved <= STEP1_K_BOUND,
    };

    // Step 2: per-k n ceilings over odd k in [501, 789], then the largest
    // odd k whose 2-adic floor stays below the worst ceiling.
    let (n1_max, n1_at) = max_n_bound_over_odd(501, STEP1_K_BOUND - 1, precision_bits)?;
    let k2_solved = largest_odd_k_below(&n1_max);
    let step2 = CascadeStep {
        step: 2,
        description:
            "worst n-ceiling from the bound pair over odd k in [501, 789], and the largest odd k \
             with 2^((k-1)/2) below it"
                .into(),
        k_solved: Some(k2_solved),
        k_bound: Some(STEP2_K_BOUND),
        n_solved: Some(n1_max.to_string()),
        n_solved_log2: Some(ln_bigint(&n1_max) / std::f64::consts::LN_2),
        n_solved_at_k: Some(n1_at),
        n_bound: Some(step2_n_bound().to_string()),
        bound_valid: n1_max <= step2_n_bound() && k2_solved <= STEP2_K_BOUND,
    };

    // Step 3: repeat over odd k in [501, 517]; the surviving k ceiling drops
    // below 501, contradicting k > 500.
    let (n2_max, n2_at) = max_n_bound_over_odd(501, STEP2_K_BOUND, precision_bits)?;
    let k3_solved = largest_odd_k_below(&n2_max);
    let contradiction = k3_solved < 501;
    let step3 = CascadeStep {
        step: 3,
        description:
            "worst n-ceiling over odd k in [501, 517]; its k ceiling falls below 501, closing \
             the case"
                .into(),
        k_solved: Some(k3_solved),
        k_bound: None,
        n_solved: Some(n2_max.to_string()),
        n_solved_log2: Some(ln_bigint(&n2_max) / std::f64::consts::LN_2),
        n_solved_at_k: Some(n2_at),
        n_bound: Some(step3_n_bound().to_string()),
        bound_valid: n2_max <= step3_n_bound() && contradiction,
    };

    Ok(CascadeReport {
        schema: SCHEMA,
        kind: "cascade",
        precision_bits,
        steps: vec![step1, step2, step3],
        contradiction,
    })
}

/// Modulus-gap inequality |a_i|/|a_j| > 1 + 1/(10 k^9.6 (pi/e)^k) over the
/// distinct-modulus representatives 1 <= i < j <= floor(k/2) (conjugate
/// pairs share one class).
pub fn root_ratio_gap_check(params: &SequenceParams, roots: &RootSet) -> Result<VerificationReport> {
    let k = params.k();
    if k < 4 {
        return Err(Error::UnsupportedOrder {
            k,
            min: 4,
            what: "the modulus-gap check",
        });
    }
    let wp = roots.precision_bits + 64;
    let classes = roots.modulus_classes();
    let j_max = (k as usize) / 2;
    debug_assert!(classes.len() >= j_max);

    // delta in log space; underflows to 0 for very large k, where the check
    // degenerates to ratio > 1.
    let kf = k as f64;
    let delta = (-(10f64.ln() + 9.6 * kf.ln() + kf * (PI / E).ln())).exp();
    let threshold = 1.0 + delta;

    let mut report = VerificationReport::new("root_gap");
    report
        .param("k", k)
        .param("precision_bits", roots.precision_bits)
        .param("delta", delta)
        .param("pairs_through_class", j_max as u64);
    let mut min_margin = f64::INFINITY;
    for i in 0..j_max {
        for j in (i + 1)..j_max {
            let (ci, cj) = (&classes[i], &classes[j]);
            report.cases += 1;
            let lo = ci
                .modulus
                .sub(&ci.radius, wp)
                .div(&cj.modulus.add(&cj.radius, wp), wp)
                .to_f64();
            let hi = ci
                .modulus
                .add(&ci.radius, wp)
                .div(&cj.modulus.sub(&cj.radius, wp), wp)
                .to_f64();
            if lo > threshold {
                let margin = if delta > 0.0 {
                    (lo - 1.0) / delta
                } else {
                    f64::INFINITY
                };
                min_margin = min_margin.min(margin);
            } else if hi <= threshold {
                report.violation(
                    Violation::new("modulus ratio at or below the gap bound")
                        .with("i", (i + 1) as u64)
                        .with("j", (j + 1) as u64)
                        .with("ratio", lo),
                );
            } else {
                return Err(Error::GapUndecidable { k, i: i + 1, j: j + 1 });
            }
        }
    }
    if min_margin.is_finite() {
        report.metric("min_margin", min_margin);
    }
    Ok(report)
}
