//! Property tests for the engine's stated invariants.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use negafib_core::bounds::binet_eval_adaptive;
use negafib_core::{
    binomial, expected_zero_set, kummer_carries, psi, zero_set_enumerate, SequenceParams,
};

fn seq(k: u32) -> SequenceParams {
    SequenceParams::new(k).unwrap()
}

/// nu2(C(v, w)) by telescoping C(v, w+1) = C(v, w)(v-w)/(w+1) from w = 0;
/// integer-only and independent of the carry count it is checked against.
fn nu2_binomial_telescoped(v: u64, w: u64) -> i64 {
    let mut nu = 0i64;
    for i in 0..w {
        nu += (v - i).trailing_zeros() as i64 - (i + 1).trailing_zeros() as i64;
    }
    nu
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pascal_pair(v in 0u64..1500, w in -3i64..1600) {
        prop_assert_eq!(psi(v, w) + psi(v, w + 1), psi(v + 1, w + 1));
    }

    #[test]
    fn psi_cross_check(v in 0u64..500, w_frac in 0.0f64..1.0) {
        let w = (v as f64 * w_frac) as u64;
        // psi(v, w)(w+1) = C(v, w)(v+w+2), the factored form.
        prop_assert_eq!(
            psi(v, w as i64) * (w + 1),
            binomial(v, w as i64) * (v + w + 2)
        );
    }

    #[test]
    fn kummer_carry_law(v in 0u64..(1 << 16), w_frac in 0.0f64..1.0) {
        let w = (v as f64 * w_frac) as u64;
        let carries = i64::from(kummer_carries(w, v - w));
        prop_assert_eq!(carries, nu2_binomial_telescoped(v, w));
    }

    #[test]
    fn psi_valuation_ceiling(v in 4u64..(1 << 16), w_frac in 0.0f64..1.0) {
        let w = ((v - 2) as f64 * w_frac) as u64; // w <= v - 2
        let nu = nu2_binomial_telescoped(v, w)
            + (v + w + 2).trailing_zeros() as i64
            - (w + 1).trailing_zeros() as i64;
        prop_assert!(nu as f64 <= 2.0 * (v as f64).log2() + 2.0);
    }

    #[test]
    fn index_decomposition_round_trip(k in 2u32..64, n in 0u64..1_000_000) {
        let d = seq(k).decompose_index(n);
        prop_assert_eq!(d.m as i64 * k as i64 + d.r, n as i64);
        prop_assert!(d.r >= -1 && d.r <= k as i64 - 2);
    }

    #[test]
    fn three_routes_agree(k in 2u32..=20, n in 0u64..2000) {
        let p = seq(k);
        let iter = p.h_iter(n);
        prop_assert_eq!(&p.h_closed(n), &iter);
        prop_assert_eq!(&p.h_matrix(n), &iter);
    }

    #[test]
    fn reflection_and_diagonal(k in 2u32..=30, m_frac in 0.0f64..1.0) {
        let p = seq(k);
        let m = 1 + ((k as u64 - 2) as f64 * m_frac) as u64; // m in [1, k-1]
        let n = m * k as u64 - 1;
        prop_assert_eq!(p.h_iter(n), BigInt::from(1) << (m - 1) as usize);
        prop_assert_eq!(p.negafib(-(n as i64)).unwrap(), p.h_iter(n));
    }

    #[test]
    fn recurrence_forms_agree(k in 2u32..=16, n0 in 0u64..500) {
        let p = seq(k);
        let ku = k as u64;
        let n = n0 + ku + 1;
        let table = p.h_range(n - ku - 1, n).unwrap();
        let two_term = (&table[1] << 1u32) - &table[0];
        let mut full = table[1].clone();
        for j in 2..=ku as usize {
            full -= &table[j];
        }
        prop_assert_eq!(&two_term, table.last().unwrap());
        prop_assert_eq!(&full, table.last().unwrap());
    }

    #[test]
    fn closed_form_term_safety(k in 2u32..=10, m_off in 0u64..60, r_off in 0u64..12) {
        let p = seq(k);
        let m = k as u64 - 1 + m_off;
        let r = -1 + (r_off.min(k as u64 - 1)) as i64;
        let exp = p.closed_form_terms(m, r).unwrap();
        for t in &exp.terms {
            if !t.bracket.is_zero() {
                prop_assert!(t.exponent >= -1);
                if t.exponent == -1 {
                    prop_assert_eq!(&t.bracket, &BigInt::from(2));
                }
            }
        }
        if let Some(lp) = exp.l_prime {
            prop_assert!(lp >= 1 && lp <= exp.l);
            prop_assert!(!exp.terms[lp as usize].bracket.is_zero());
        }
    }

    #[test]
    fn proven_set_is_contained(k in 2u32..=40) {
        let p = seq(k);
        for n in expected_zero_set(&p).members() {
            prop_assert!(p.h_closed(n).is_zero());
        }
    }

    #[test]
    fn enumeration_matches_family(k in 2u32..=24) {
        let p = seq(k);
        let window = 50 * k as u64 * k as u64;
        prop_assert_eq!(
            zero_set_enumerate(&p, window),
            expected_zero_set(&p).members_within(window)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn binet_rounds_to_recurrence(k in 2u32..=10, n in 0u64..150) {
        let p = seq(k);
        let e = binet_eval_adaptive(&p, n).unwrap();
        prop_assert!(e.error < 0.5);
        prop_assert_eq!(e.nearest, p.h_iter(n));
    }
}
