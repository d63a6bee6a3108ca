//! Certified roots of the characteristic polynomial
//! z^k - z^(k-1) - ... - z - 1.
//!
//! Multiplying by (z - 1) gives P(z) = z^(k+1) - 2 z^k + 1, whose roots are
//! the k characteristic roots plus z = 1. The unique real root alpha_1 in
//! (1, 2) comes from the contraction a -> 2 - a^(-k); the k-1 roots inside
//! the unit disk are the fixed points of z -> zeta_j (2 - z)^(-1/k) for the
//! k-th roots of unity zeta_j, j = 1..k-1 (j = 0 yields the spurious z = 1).
//! Each root is polished by Newton on P in big-float arithmetic and carries
//! the rigorous simple-root radius (k+1) |P(z)| / |P'(z)|, which bounds the
//! distance to the nearest root of P.

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::bigfloat::{Bf, Cf};
use crate::error::{Error, Result};
use crate::sequence::SequenceParams;

/// One root with a certified error radius at the working precision.
#[derive(Debug, Clone)]
pub struct CertifiedRoot {
    pub value: Cf,
    pub modulus: Bf,
    pub radius: Bf,
    pub argument: f64,
}

impl CertifiedRoot {
    pub fn re_f64(&self) -> f64 {
        self.value.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.value.im.to_f64()
    }

    pub fn is_real(&self) -> bool {
        self.value.im.is_zero()
    }
}

impl Serialize for CertifiedRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("re", &self.re_f64())?;
        map.serialize_entry("im", &self.im_f64())?;
        map.serialize_entry("modulus", &self.modulus.to_f64())?;
        map.serialize_entry("radius", &self.radius.to_f64())?;
        map.end()
    }
}

/// All k characteristic roots, sorted by decreasing modulus (ties between
/// conjugates broken by ascending argument), with per-root certified radii.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub k: u32,
    pub precision_bits: u32,
    pub roots: Vec<CertifiedRoot>,
}

/// A group of roots sharing one modulus (a conjugate pair, or a single real
/// root), in sorted order.
#[derive(Debug, Clone)]
pub struct ModulusClass {
    pub modulus: Bf,
    pub radius: Bf,
    pub indices: Vec<usize>,
}

impl RootSet {
    /// The dominant real root (first in sorted order).
    pub fn alpha1(&self) -> &CertifiedRoot {
        &self.roots[0]
    }

    /// alpha_i in the 1-indexed sorted order of the modulus chain.
    pub fn alpha(&self, i: usize) -> &CertifiedRoot {
        &self.roots[i - 1]
    }

    /// Distinct moduli in decreasing order; mirrored conjugates carry
    /// bit-identical modulus values, so grouping is exact.
    pub fn modulus_classes(&self) -> Vec<ModulusClass> {
        let mut classes: Vec<ModulusClass> = Vec::new();
        for (i, root) in self.roots.iter().enumerate() {
            match classes.last_mut() {
                Some(c) if c.modulus == root.modulus => c.indices.push(i),
                _ => classes.push(ModulusClass {
                    modulus: root.modulus.clone(),
                    radius: root.radius.clone(),
                    indices: vec![i],
                }),
            }
        }
        classes
    }
}

impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            schema: &'static str,
            kind: &'static str,
            k: u32,
            precision_bits: u32,
            roots: RootsSeq<'a>,
        }
        struct RootsSeq<'a>(&'a [CertifiedRoot]);
        impl Serialize for RootsSeq<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for r in self.0 {
                    seq.serialize_element(r)?;
                }
                seq.end()
            }
        }
        Repr {
            schema: crate::report::SCHEMA,
            kind: "root_set",
            k: self.k,
            precision_bits: self.precision_bits,
            roots: RootsSeq(&self.roots),
        }
        .serialize(s)
    }
}

/// P(z) = z^(k+1) - 2 z^k + 1 and P'(z) = z^(k-1) ((k+1) z - 2k).
fn eval_p_dp(z: &Cf, k: u32, wp: u32) -> (Cf, Cf) {
    let zk1 = z.powu(k as u64 - 1, wp);
    let zk = zk1.mul(z, wp);
    let two = Cf::real(Bf::from_i64(2));
    let one = Cf::real(Bf::from_i64(1));
    let p = zk.mul(&z.sub(&two, wp), wp).add(&one, wp);
    let lin = z
        .scale(&Bf::from_u64(k as u64 + 1), wp)
        .sub(&Cf::real(Bf::from_u64(2 * k as u64)), wp);
    let dp = zk1.mul(&lin, wp);
    (p, dp)
}

/// Newton-polish a seed and attach the simple-root radius.
fn polish(seed: Cf, k: u32, wp: u32) -> CertifiedRoot {
    let mut z = seed;
    let steps = (32 - (wp / 45).leading_zeros()) + 3;
    for _ in 0..steps {
        let (p, dp) = eval_p_dp(&z, k, wp);
        if p.is_zero() {
            break;
        }
        z = z.sub(&p.div(&dp, wp), wp);
    }
    let (p, dp) = eval_p_dp(&z, k, wp);
    // |z - root| <= (deg P) |P(z)/P'(z)| for simple roots; rounding slack on
    // the evaluated |P| and the quotient is absorbed by the 2^(-wp+16) terms.
    let slack = Bf::from_i64(1).shl(-(wp as i64) + 16);
    let p_abs = p.abs(wp).add(&slack, wp);
    let radius = p_abs
        .div(&dp.abs(wp), wp)
        .mul(&Bf::from_u64(k as u64 + 1), wp)
        .add(&slack, wp);
    let modulus = z.abs(wp);
    let argument = f64::atan2(z.im.to_f64(), z.re.to_f64());
    CertifiedRoot {
        value: z,
        modulus,
        radius,
        argument,
    }
}

fn alpha1_seed(k: u32) -> f64 {
    let mut a = 2.0f64;
    for _ in 0..200 {
        let step = a.powi(-(k as i32));
        a = 2.0 - step;
        if step == 0.0 {
            break;
        }
    }
    a
}

fn disk_seed(k: u32, j: u32) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
    let zeta = Complex64::from_polar(1.0, theta);
    let mut z = zeta;
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..120 {
        z = zeta * (two - z).powf(-1.0 / k as f64);
    }
    z
}

fn real_negative_seed(k: u32) -> f64 {
    // Fixed point of r = (2 + r)^(-1/k) with z = -r (even k only).
    let mut r = 1.0f64;
    for _ in 0..120 {
        r = (2.0 + r).powf(-1.0 / k as f64);
    }
    -r
}

/// The two smallest-modulus root classes (one representative each, the
/// smaller one first), i.e. the alpha_k and alpha_(k-2) classes in the
/// sorted modulus chain. Only these two are needed per order by the bound
/// pipeline, which avoids computing all k roots for k near 800.
pub(crate) fn smallest_modulus_pair(
    params: &SequenceParams,
    precision_bits: u32,
) -> Result<(CertifiedRoot, CertifiedRoot)> {
    let k = params.k();
    if k < 4 {
        return Err(Error::UnsupportedOrder {
            k,
            min: 4,
            what: "the smallest-modulus pair",
        });
    }
    let wp = precision_bits + 64;
    let (last, second) = if k % 2 == 0 {
        (
            polish(Cf::from_f64(real_negative_seed(k), 0.0), k, wp),
            polish(seed_to_cf(disk_seed(k, k / 2 - 1)), k, wp),
        )
    } else {
        (
            polish(seed_to_cf(disk_seed(k, (k - 1) / 2)), k, wp),
            polish(seed_to_cf(disk_seed(k, (k - 3) / 2)), k, wp),
        )
    };
    certify_radius(&last, k, precision_bits)?;
    certify_radius(&second, k, precision_bits)?;
    use std::cmp::Ordering;
    if last.modulus.cmp_value(&second.modulus) != Ordering::Less {
        return Err(Error::CertificationFailed {
            k,
            precision: precision_bits,
            detail: "modulus ordering of the smallest pair did not separate".into(),
        });
    }
    Ok((last, second))
}

fn seed_to_cf(z: Complex64) -> Cf {
    Cf::from_f64(z.re, z.im)
}

fn certify_radius(root: &CertifiedRoot, k: u32, precision_bits: u32) -> Result<()> {
    let ceiling = Bf::from_i64(1).shl(-((precision_bits / 2) as i64));
    if root.radius.cmp_value(&ceiling) == std::cmp::Ordering::Greater {
        return Err(Error::CertificationFailed {
            k,
            precision: precision_bits,
            detail: format!(
                "radius {:.3e} above the certification ceiling",
                root.radius.to_f64()
            ),
        });
    }
    Ok(())
}

/// All roots of z^k - z^(k-1) - ... - 1 at the requested precision, sorted
/// by decreasing modulus with certified radii.
pub fn char_roots(params: &SequenceParams, precision_bits: u32) -> Result<RootSet> {
    let k = params.k();
    if precision_bits < 64 {
        return Err(Error::PrecisionTooLow {
            min: 64,
            got: precision_bits,
        });
    }
    let wp = precision_bits + 64;

    let mut roots: Vec<CertifiedRoot> = Vec::with_capacity(k as usize);
    roots.push(polish(Cf::from_f64(alpha1_seed(k), 0.0), k, wp));
    for j in 1..=(k / 2) {
        if k % 2 == 0 && j == k / 2 {
            roots.push(polish(Cf::from_f64(real_negative_seed(k), 0.0), k, wp));
        } else {
            let root = polish(seed_to_cf(disk_seed(k, j)), k, wp);
            // Mirror the conjugate: bit-identical modulus and radius.
            let conj = CertifiedRoot {
                value: root.value.conj(),
                modulus: root.modulus.clone(),
                radius: root.radius.clone(),
                argument: -root.argument,
            };
            roots.push(root);
            roots.push(conj);
        }
    }
    debug_assert_eq!(roots.len(), k as usize);

    roots.sort_by(|a, b| {
        b.modulus
            .cmp_value(&a.modulus)
            .then(a.argument.partial_cmp(&b.argument).expect("finite args"))
    });

    // Certification: every radius below the ceiling, the dominant root real
    // in (1, 2), and every other root strictly inside the unit disk.
    for r in &roots {
        certify_radius(r, k, precision_bits)?;
    }
    let a1 = &roots[0];
    let one = Bf::from_i64(1);
    let two = Bf::from_i64(2);
    use std::cmp::Ordering::*;
    // The certified interval [re - r, re + r] must sit inside (1, 2 + r];
    // for k beyond the working precision the dominant root 2 - 2^(-k)-ish
    // rounds to exactly 2, which the radius covers.
    if !a1.is_real()
        || a1.value.re.sub(&a1.radius, wp).cmp_value(&one) != Greater
        || a1.value.re.sub(&a1.radius, wp).cmp_value(&two) != Less
    {
        return Err(Error::CertificationFailed {
            k,
            precision: precision_bits,
            detail: "dominant root not certified real in (1, 2)".into(),
        });
    }
    for r in roots.iter().skip(1) {
        if r.modulus.add(&r.radius, wp).cmp_value(&one) != Less {
            return Err(Error::CertificationFailed {
                k,
                precision: precision_bits,
                detail: "a non-dominant root is not certified inside the unit disk".into(),
            });
        }
    }

    Ok(RootSet {
        k,
        precision_bits,
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn seq(k: u32) -> SequenceParams {
        SequenceParams::new(k).unwrap()
    }

    #[test]
    fn golden_ratio_pair_at_k2() {
        let rs = char_roots(&seq(2), 128).unwrap();
        assert_eq!(rs.roots.len(), 2);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((rs.alpha1().re_f64() - phi).abs() < 1e-15);
        assert!((rs.alpha(2).re_f64() - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(rs.alpha(2).is_real());
    }

    #[test]
    fn dominant_root_values() {
        let rs = char_roots(&seq(3), 160).unwrap();
        assert!((rs.alpha1().re_f64() - 1.8392867552141612).abs() < 1e-14);
        // alpha_1 in (2(1 - 2^-k), 2) for every k, compared exactly: the
        // lower end 2 - 2^(1-k) is a dyadic rational.
        for k in [2u32, 3, 5, 10, 24, 64] {
            let rs = char_roots(&seq(k), 160).unwrap();
            let a1 = &rs.alpha1().value.re;
            let two = Bf::from_i64(2);
            let low = two.sub(&Bf::from_i64(1).shl(1 - k as i64), 512);
            assert_eq!(a1.cmp_value(&low), Ordering::Greater, "k={k} low end");
            assert_eq!(a1.cmp_value(&two), Ordering::Less, "k={k} high end");
        }
    }

    #[test]
    fn counts_sorting_and_radii() {
        for k in [2u32, 3, 4, 5, 9, 12, 17, 30] {
            let rs = char_roots(&seq(k), 128).unwrap();
            assert_eq!(rs.roots.len(), k as usize);
            for w in rs.roots.windows(2) {
                assert_ne!(
                    w[0].modulus.cmp_value(&w[1].modulus),
                    Ordering::Less,
                    "k={k} sorted"
                );
            }
            for r in &rs.roots {
                assert!(r.radius.to_f64() < 1e-18, "k={k}");
                // Residual consistency: |P(root)| small relative to radius.
                let (p, dp) = eval_p_dp(&r.value, k, 192);
                let lhs = p.abs(192).to_f64();
                let rhs = r.radius.to_f64() * dp.abs(192).to_f64();
                assert!(lhs <= rhs * 1.01 + 1e-300, "k={k}");
            }
            // k roots, 1 dominant + (k-1) in the disk.
            assert!(rs.roots[1..].iter().all(|r| r.modulus.to_f64() < 1.0));
        }
    }

    #[test]
    fn quartic_moduli_match_reference() {
        // Degree-4 chain: 1.9275619754..., the conjugate pair at
        // 0.8182760988..., and the real root -0.7748041132...
        let rs = char_roots(&seq(4), 160).unwrap();
        let mods: Vec<f64> = rs.roots.iter().map(|r| r.modulus.to_f64()).collect();
        assert!((mods[0] - 1.9275619754829254).abs() < 1e-13);
        assert!((mods[1] - 0.8182760988).abs() < 1e-9);
        assert!((mods[2] - 0.8182760988).abs() < 1e-9);
        assert!((mods[3] - 0.7748041132).abs() < 1e-9);
        assert!(rs.alpha(4).is_real());
        // Conjugates: ascending argument puts the lower half-plane first.
        assert!(rs.alpha(2).argument < 0.0 && rs.alpha(3).argument > 0.0);
        let classes = rs.modulus_classes();
        assert_eq!(classes.len(), 3);
        assert_eq!(classes[1].indices, vec![1, 2]);
    }

    #[test]
    fn trace_and_product_across_orders() {
        // Sum of roots = 1 and product = (-1)^k * (-1): +1 for odd k,
        // -1 for even k.
        for k in [2u32, 3, 4, 7, 16, 33, 64] {
            let wp = 192;
            let rs = char_roots(&seq(k), 128).unwrap();
            let mut sum = Cf::real(Bf::zero());
            let mut prod = Cf::real(Bf::from_i64(1));
            for r in &rs.roots {
                sum = sum.add(&r.value, wp);
                prod = prod.mul(&r.value, wp);
            }
            let tol = (k as f64) * 1e-15;
            assert!((sum.re.to_f64() - 1.0).abs() < tol, "k={k} trace");
            assert!(sum.im.to_f64().abs() < tol, "k={k} trace imag");
            let expect = if k % 2 == 0 { -1.0 } else { 1.0 };
            assert!((prod.re.to_f64() - expect).abs() < tol, "k={k} product");
            assert!(prod.im.to_f64().abs() < tol, "k={k} product imag");
        }
    }

    #[test]
    fn targeted_pair_matches_full_sort() {
        for k in [5u32, 9, 12, 20, 31, 40] {
            let rs = char_roots(&seq(k), 128).unwrap();
            let (last, second) = smallest_modulus_pair(&seq(k), 128).unwrap();
            let classes = rs.modulus_classes();
            let tail = &classes[classes.len() - 1];
            let before = &classes[classes.len() - 2];
            assert_eq!(
                last.modulus.cmp_value(&tail.modulus),
                Ordering::Equal,
                "k={k} last class"
            );
            assert_eq!(
                second.modulus.cmp_value(&before.modulus),
                Ordering::Equal,
                "k={k} second class"
            );
        }
    }

    #[test]
    fn precision_floor_enforced() {
        assert!(matches!(
            char_roots(&seq(5), 32),
            Err(Error::PrecisionTooLow { min: 64, got: 32 })
        ));
    }
}
