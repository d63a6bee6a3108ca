//! Zero sets of H: the proven interval family, brute-force enumeration,
//! multiplicity counts, the even-k sign certificate and the odd-k 2-adic
//! divisibility machinery.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::combinatorics::{nu2_psi, PsiArgs, Valuation2};
use crate::error::{Error, Result};
use crate::report::{Status, VerificationReport, Violation, ZeroReport, SCHEMA};
use crate::sequence::SequenceParams;

/// The proven zero set: the union of intervals [m(k+1), (m+1)k-2] for
/// m in [0, k-2], of total cardinality k(k-1)/2, plus the exceptional
/// zeros outside it (only {17} at k = 3).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSetA {
    pub k: u32,
    pub intervals: Vec<(u64, u64)>,
    pub exceptional: Vec<u64>,
}

impl ZeroSetA {
    /// Cardinality of the interval part alone: k(k-1)/2.
    pub fn interval_cardinality(&self) -> u64 {
        let k = self.k as u64;
        k * (k - 1) / 2
    }

    /// All members (intervals plus exceptional zeros), sorted.
    pub fn members(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .intervals
            .iter()
            .flat_map(|&(lo, hi)| lo..=hi)
            .chain(self.exceptional.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Members within [0, window_end].
    pub fn members_within(&self, window_end: u64) -> Vec<u64> {
        self.members()
            .into_iter()
            .filter(|&n| n <= window_end)
            .collect()
    }
}

/// Witness record for the 2-adic divisibility forced at a zero with
/// m >= k-1 and odd k: 2^(k+1) must divide psi(m-l'-1, l'k+r).
#[derive(Debug, Clone, Serialize)]
pub struct DivisibilityWitness {
    pub k: u32,
    pub m: u64,
    pub r: i64,
    pub n: u64,
    pub l_prime: u64,
    pub psi_args: PsiArgs,
    pub nu2_required: u64,
    pub nu2_actual: Valuation2,
    pub holds: bool,
}

/// The proven zero set for order k, with the k = 3 exceptional zero at 17
/// (the count there is 4; the location comes from enumeration).
pub fn expected_zero_set(params: &SequenceParams) -> ZeroSetA {
    let k = params.k() as u64;
    let intervals = (0..=k - 2)
        .map(|m| (m * (k + 1), (m + 1) * k - 2))
        .collect();
    ZeroSetA {
        k: params.k(),
        intervals,
        exceptional: if params.k() == 3 { vec![17] } else { vec![] },
    }
}

/// All zero indices in [0, n_max], by a single streaming pass of the
/// recurrence (O(k) memory).
pub fn zero_set_enumerate(params: &SequenceParams, n_max: u64) -> Vec<u64> {
    params
        .h_stream()
        .take(n_max as usize + 1)
        .enumerate()
        .filter_map(|(n, h)| h.is_zero().then_some(n as u64))
        .collect()
}

/// Result of one streaming sweep over [0, window_end]: the zero indices,
/// and (for even k) how far the sign alternation was verified. This is the
/// cacheable unit behind ZeroReport.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ZeroScan {
    pub k: u32,
    pub window_end: u64,
    pub zeros: Vec<u64>,
    /// For even k with window_end >= k^2-k-1: Some(window_end) when
    /// sign(H_n) = (-1)^(n+1) held on the whole tail, None otherwise.
    pub parity_pass_upto: Option<u64>,
}

/// One pass: collect zeros and (even k) verify the sign alternation from
/// k^2 - k - 1 on.
pub fn zero_scan(params: &SequenceParams, window_end: u64) -> ZeroScan {
    let k = params.k() as u64;
    let threshold = k * k - k - 1;
    let check_parity = params.k() % 2 == 0 && window_end >= threshold;
    let mut zeros = Vec::new();
    let mut parity_ok = true;
    for (n, h) in params
        .h_stream()
        .take(window_end as usize + 1)
        .enumerate()
    {
        let n = n as u64;
        if h.is_zero() {
            zeros.push(n);
        }
        if check_parity && n >= threshold {
            let ok = if n % 2 == 0 {
                h.is_negative()
            } else {
                h.is_positive()
            };
            parity_ok &= ok;
        }
    }
    ZeroScan {
        k: params.k(),
        window_end,
        zeros,
        parity_pass_upto: (check_parity && parity_ok).then_some(window_end),
    }
}

/// Zero multiplicity of H: 1 for k = 2, 4 for k = 3, and the (k-1)st
/// triangular number k(k-1)/2 for k >= 4.
pub fn zero_multiplicity(params: &SequenceParams) -> u64 {
    let k = params.k() as u64;
    match k {
        2 => 1,
        3 => 4,
        _ => k * (k - 1) / 2,
    }
}

/// For even k, verify sign(H_n) = (-1)^(n+1) on [n_from, n_to]; the window
/// must start at or above k^2 - k - 1, where the alternation begins.
pub fn parity_sign_check(
    params: &SequenceParams,
    n_from: u64,
    n_to: u64,
) -> Result<VerificationReport> {
    let k = params.k() as u64;
    if params.k() % 2 != 0 {
        return Err(Error::RequiresEvenOrder(params.k()));
    }
    let threshold = k * k - k - 1;
    if n_from < threshold {
        return Err(Error::WindowBelowThreshold {
            min: threshold,
            got: n_from,
        });
    }
    if n_from > n_to {
        return Err(Error::EmptyRange(n_from, n_to));
    }
    let mut report = VerificationReport::new("parity");
    report
        .param("k", params.k())
        .param("n_from", n_from)
        .param("n_to", n_to);
    for (offset, h) in params
        .h_stream()
        .skip(n_from as usize)
        .take((n_to - n_from + 1) as usize)
        .enumerate()
    {
        let n = n_from + offset as u64;
        report.cases += 1;
        let ok = if n % 2 == 0 {
            h.is_negative()
        } else {
            h.is_positive()
        };
        if !ok {
            report.violation(
                Violation::new("sign(H_n) != (-1)^(n+1)")
                    .with("n", n)
                    .with("h", h.to_string()),
            );
        }
    }
    Ok(report)
}

/// If H_{mk+r} = 0 (odd k, m >= k-1), extract l' from the closed-form term
/// list and report whether 2^(k+1) divides psi(m-l'-1, l'k+r). Returns None
/// when the value is nonzero or no positive term survives.
pub fn divisibility_witness(
    params: &SequenceParams,
    m: u64,
    r: i64,
) -> Result<Option<DivisibilityWitness>> {
    let k = params.k() as u64;
    if params.k() % 2 == 0 {
        return Err(Error::RequiresOddOrder(params.k()));
    }
    let expansion = params.closed_form_terms(m, r)?;
    let n = (m * k) as i64 + r;
    debug_assert!(n >= 0);
    let n = n as u64;
    if !params.h_closed(n).is_zero() {
        return Ok(None);
    }
    let Some(l_prime) = expansion.l_prime else {
        return Ok(None);
    };
    let v = m - l_prime - 1;
    let w = (l_prime * k) as i64 + r;
    debug_assert!(w >= 0);
    let nu2_actual = nu2_psi(v, w as u64)?;
    let required = k + 1;
    let holds = matches!(nu2_actual, Valuation2::Exact(e) if e >= required);
    Ok(Some(DivisibilityWitness {
        k: params.k(),
        m,
        r,
        n,
        l_prime,
        psi_args: PsiArgs { v, w },
        nu2_required: required,
        nu2_actual,
        holds,
    }))
}

/// For odd k, the index floor any zero with m >= k-1 must exceed: 2^((k-1)/2).
pub fn lower_bound_n(params: &SequenceParams) -> Result<BigInt> {
    if params.k() % 2 == 0 {
        return Err(Error::RequiresOddOrder(params.k()));
    }
    Ok(BigInt::one() << ((params.k() as u64 - 1) / 2) as usize)
}

/// Assemble the zero record from a finished scan: compare against the
/// proven set and state whether the tail beyond the window is certified.
pub fn zero_report_from_scan(params: &SequenceParams, scan: &ZeroScan) -> ZeroReport {
    debug_assert_eq!(scan.k, params.k());
    let k = params.k() as u64;
    let window_end = scan.window_end;
    let expected_set = expected_zero_set(params);
    let expected = expected_set.members_within(window_end);
    let mut violations = Vec::new();
    for z in &scan.zeros {
        if !expected.contains(z) {
            violations.push(Violation::new("unexpected zero").with("n", *z));
        }
    }
    for e in &expected {
        if !scan.zeros.contains(e) {
            violations.push(Violation::new("expected zero missing").with("n", *e));
        }
    }

    let threshold = k * k - k - 1;
    let mut tail_certified = false;
    if params.k() % 2 == 0 {
        if window_end >= threshold {
            if scan.parity_pass_upto == Some(window_end) {
                // Strict alternation holds for every n >= k^2-k-1, so no
                // zeros exist beyond the window for even k.
                tail_certified = true;
            } else {
                violations.push(
                    Violation::new("sign alternation broken on the tail")
                        .with("from", threshold),
                );
            }
        }
    } else {
        // Odd k: any zero beyond the proven set needs n >= 2^((k-1)/2);
        // the window is certified once that floor clears it.
        let bound = lower_bound_n(params).expect("k is odd");
        tail_certified = bound > BigInt::from(window_end);
    }

    let status = if violations.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    ZeroReport {
        schema: SCHEMA,
        kind: "zero_report",
        k: params.k(),
        window_end,
        zeros: scan.zeros.clone(),
        expected,
        expected_intervals: expected_set.intervals.clone(),
        exceptional: expected_set.exceptional.clone(),
        multiplicity: zero_multiplicity(params),
        status,
        parity_checked_upto: scan.parity_pass_upto,
        tail_certified,
        violations,
    }
}

/// Full zero record for one order (one streaming pass).
pub fn zero_report(params: &SequenceParams, window_end: u64) -> ZeroReport {
    zero_report_from_scan(params, &zero_scan(params, window_end))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(k: u32) -> SequenceParams {
        SequenceParams::new(k).unwrap()
    }

    #[test]
    fn expected_sets_small_orders() {
        let a2 = expected_zero_set(&seq(2));
        assert_eq!(a2.members(), vec![0]);
        assert_eq!(a2.interval_cardinality(), 1);

        let a3 = expected_zero_set(&seq(3));
        assert_eq!(a3.members(), vec![0, 1, 4, 17]);
        assert_eq!(a3.intervals, vec![(0, 1), (4, 4)]);

        let a5 = expected_zero_set(&seq(5));
        assert_eq!(a5.members(), vec![0, 1, 2, 3, 6, 7, 8, 12, 13, 18]);
        assert_eq!(a5.interval_cardinality(), 10);
    }

    #[test]
    fn interval_lengths_shrink_to_singleton() {
        for k in 3..=30u32 {
            let a = expected_zero_set(&seq(k));
            for (m, &(lo, hi)) in a.intervals.iter().enumerate() {
                let len = hi - lo + 1;
                assert_eq!(len, k as u64 - m as u64 - 1);
            }
            let last = a.intervals.last().unwrap();
            assert_eq!(last.0, last.1);
            assert_eq!(
                a.members().len() as u64,
                a.interval_cardinality() + a.exceptional.len() as u64
            );
        }
    }

    #[test]
    fn enumeration_matches_expected() {
        assert_eq!(zero_set_enumerate(&seq(4), 100), vec![0, 1, 2, 5, 6, 10]);
        assert_eq!(zero_set_enumerate(&seq(3), 20), vec![0, 1, 4, 17]);
        assert_eq!(zero_set_enumerate(&seq(2), 50), vec![0]);
        for k in 2..=12u32 {
            let p = seq(k);
            let window = 50 * (k as u64) * (k as u64);
            assert_eq!(
                zero_set_enumerate(&p, window),
                expected_zero_set(&p).members_within(window),
                "k={k}"
            );
        }
    }

    #[test]
    fn multiplicity_values() {
        assert_eq!(zero_multiplicity(&seq(2)), 1);
        assert_eq!(zero_multiplicity(&seq(3)), 4);
        assert_eq!(zero_multiplicity(&seq(10)), 45);
    }

    #[test]
    fn parity_check_windows() {
        let r = parity_sign_check(&seq(4), 11, 500).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases, 490);
        let r = parity_sign_check(&seq(6), 29, 500).unwrap();
        assert!(r.passed());
        // Single even case: H_12 < 0 at k = 4.
        assert!(seq(4).h_iter(12).is_negative());

        assert!(matches!(
            parity_sign_check(&seq(3), 11, 20),
            Err(Error::RequiresEvenOrder(3))
        ));
        assert!(matches!(
            parity_sign_check(&seq(4), 5, 20),
            Err(Error::WindowBelowThreshold { min: 11, got: 5 })
        ));
    }

    #[test]
    fn witness_at_the_exceptional_zero() {
        // n = 17 = 6*3 - 1 for k = 3.
        let w = divisibility_witness(&seq(3), 6, -1).unwrap().unwrap();
        assert_eq!(w.n, 17);
        assert_eq!(w.l_prime, 1);
        assert_eq!((w.psi_args.v, w.psi_args.w), (4, 2));
        assert_eq!(w.nu2_actual, Valuation2::Exact(4));
        assert_eq!(w.nu2_required, 4);
        assert!(w.holds);
    }

    #[test]
    fn witness_absent_on_nonzeros() {
        // H_50 != 0 for k = 5.
        assert!(divisibility_witness(&seq(5), 10, 0).unwrap().is_none());
        // H_5 = 2 != 0 for k = 3.
        assert!(divisibility_witness(&seq(3), 2, -1).unwrap().is_none());
        assert!(matches!(
            divisibility_witness(&seq(4), 5, 0),
            Err(Error::RequiresOddOrder(4))
        ));
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound_n(&seq(3)).unwrap(), BigInt::from(2));
        assert_eq!(
            lower_bound_n(&seq(501)).unwrap(),
            BigInt::one() << 250usize
        );
        assert_eq!(
            lower_bound_n(&seq(517)).unwrap(),
            BigInt::one() << 258usize
        );
        assert_eq!(lower_bound_n(&seq(4)), Err(Error::RequiresOddOrder(4)));
    }

    #[test]
    fn zero_reports() {
        let r = zero_report(&seq(3), 450);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.zeros, vec![0, 1, 4, 17]);
        assert_eq!(r.multiplicity, 4);
        assert!(!r.tail_certified);
        assert!(r.parity_checked_upto.is_none());

        let r = zero_report(&seq(4), 800);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.zeros, vec![0, 1, 2, 5, 6, 10]);
        assert_eq!(r.parity_checked_upto, Some(800));
        assert!(r.tail_certified);

        // Odd k = 33 is the first order whose 2-adic floor clears the 50k^2
        // window; 31 does not clear it.
        let r = zero_report(&seq(33), 50 * 33 * 33);
        assert!(r.tail_certified);
        let r = zero_report(&seq(31), 50 * 31 * 31);
        assert!(!r.tail_certified);
    }
}
