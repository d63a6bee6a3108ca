//! Minimal arbitrary-precision binary floats (value = mantissa * 2^exp) and
//! complex pairs over them. Only the operations the analytic layer needs:
//! field ops with round-to-nearest at a caller-chosen precision, sqrt,
//! natural log, binary powering, and exact rounding to the nearest integer.
//!
//! Rounding error is at most half an ulp of the target precision per
//! operation; callers account for op counts with explicit slack terms.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Binary float: `m * 2^e`, with `m = 0 => e = 0` and trailing zero bits of
/// `m` folded into `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bf {
    m: BigInt,
    e: i64,
}

impl Bf {
    pub fn zero() -> Self {
        Bf {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Bf {
            m: BigInt::from(v),
            e: 0,
        }
        .normalized()
    }

    pub fn from_u64(v: u64) -> Self {
        Bf {
            m: BigInt::from(v),
            e: 0,
        }
        .normalized()
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Bf { m: v.clone(), e: 0 }.normalized()
    }

    /// Exact conversion of a finite f64.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "Bf::from_f64 needs a finite value");
        if v == 0.0 {
            return Bf::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074) // subnormal
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Bf {
            m: BigInt::from(sign * mant as i64),
            e: exp,
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        if let Some(tz) = self.m.trailing_zeros() {
            if tz > 0 {
                self.m >>= tz;
                self.e += tz as i64;
            }
        }
        self
    }

    /// Round the mantissa to at most `prec` bits (to nearest, ties away
    /// from zero).
    pub fn with_prec(mut self, prec: u32) -> Self {
        let bits = self.m.magnitude().bits();
        if bits <= prec as u64 {
            return self.normalized();
        }
        let d = bits - prec as u64;
        let (sign, mag) = self.m.into_parts();
        let half = BigUint::one() << (d - 1) as usize;
        let rounded = (mag + half) >> d as usize;
        self.m = BigInt::from_biguint(sign, rounded);
        self.e += d as i64;
        self.normalized()
    }

    /// floor(log2 |x|) + 1, i.e. the position of the leading bit; zero for 0.
    fn mag2(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN / 2
        } else {
            self.e + self.m.magnitude().bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        Bf {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn abs(&self) -> Self {
        Bf {
            m: self.m.abs(),
            e: self.e,
        }
    }

    /// Multiply by 2^s.
    pub fn shl(&self, s: i64) -> Self {
        if self.m.is_zero() {
            return Bf::zero();
        }
        Bf {
            m: self.m.clone(),
            e: self.e + s,
        }
    }

    pub fn add(&self, other: &Bf, prec: u32) -> Self {
        if self.m.is_zero() {
            return other.clone().with_prec(prec);
        }
        if other.m.is_zero() {
            return self.clone().with_prec(prec);
        }
        let (hi, lo) = if self.e >= other.e {
            (self, other)
        } else {
            (other, self)
        };
        // If the smaller operand is entirely below the rounding point of the
        // larger, it moves the result by less than an ulp: drop it.
        if lo.mag2() < hi.mag2() - (prec as i64) - 8 {
            return hi.clone().with_prec(prec);
        }
        let gap = (hi.e - lo.e) as usize;
        let m = (&hi.m << gap) + &lo.m;
        Bf { m, e: lo.e }.with_prec(prec)
    }

    pub fn sub(&self, other: &Bf, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Bf, prec: u32) -> Self {
        Bf {
            m: &self.m * &other.m,
            e: self.e + other.e,
        }
        .with_prec(prec)
    }

    pub fn div(&self, other: &Bf, prec: u32) -> Self {
        assert!(!other.m.is_zero(), "division by zero");
        if self.m.is_zero() {
            return Bf::zero();
        }
        let a_bits = self.m.magnitude().bits() as i64;
        let b_bits = other.m.magnitude().bits() as i64;
        let t = (prec as i64 + 4 + (b_bits - a_bits).max(0)) as usize;
        let m = (&self.m << t) / &other.m;
        Bf {
            m,
            e: self.e - other.e - t as i64,
        }
        .with_prec(prec)
    }

    pub fn cmp_value(&self, other: &Bf) -> Ordering {
        let ls = self.m.sign();
        let rs = other.m.sign();
        if ls != rs {
            return match (ls, rs) {
                (Sign::Minus, _) => Ordering::Less,
                (_, Sign::Minus) => Ordering::Greater,
                (Sign::NoSign, Sign::Plus) => Ordering::Less,
                (Sign::Plus, Sign::NoSign) => Ordering::Greater,
                _ => Ordering::Equal,
            };
        }
        if ls == Sign::NoSign {
            return Ordering::Equal;
        }
        // Same nonzero sign: leading-bit positions decide unless adjacent.
        let (ma, mb) = (self.mag2(), other.mag2());
        if (ma - mb).abs() > 1 {
            let ord = ma.cmp(&mb);
            return if ls == Sign::Minus { ord.reverse() } else { ord };
        }
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &other.m << (other.e - e) as usize;
        a.cmp(&b)
    }

    /// Square root (argument must be >= 0), correct to within an ulp.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(!self.m.is_negative(), "sqrt of a negative value");
        if self.m.is_zero() {
            return Bf::zero();
        }
        let mut m = self.m.magnitude().clone();
        let mut e = self.e;
        let target = 2 * (prec as i64 + 4);
        let mut scale = target - m.bits() as i64;
        if scale < 0 {
            scale = 0;
        }
        if (e - scale) % 2 != 0 {
            scale += 1;
        }
        m <<= scale as usize;
        e -= scale;
        let r = m.sqrt();
        Bf {
            m: BigInt::from_biguint(Sign::Plus, r),
            e: e / 2,
        }
        .with_prec(prec)
    }

    /// Natural logarithm (argument must be > 0), via the atanh series with
    /// mantissa normalized into [0.75, 1.5).
    pub fn ln(&self, prec: u32) -> Self {
        assert!(
            self.m.is_positive(),
            "ln needs a strictly positive argument"
        );
        let wp = prec + 32;
        let bits = self.m.magnitude().bits() as i64;
        let mut frac = Bf {
            m: self.m.clone(),
            e: -(bits - 1),
        };
        let mut e2 = self.e + bits - 1;
        let three_halves = Bf {
            m: BigInt::from(3),
            e: -1,
        };
        if frac.cmp_value(&three_halves) != Ordering::Less {
            frac.e -= 1;
            e2 += 1;
        }
        let s = atanh_of_ratio(&frac, wp);
        let ln2 = ln2(wp);
        let scaled = ln2.mul(&Bf::from_i64(e2), wp);
        s.shl(1).add(&scaled, wp).with_prec(prec)
    }

    /// Nearest integer and the distance |value - nearest| as f64.
    pub fn round_to_int(&self) -> (BigInt, f64) {
        if self.m.is_zero() {
            return (BigInt::zero(), 0.0);
        }
        if self.e >= 0 {
            return (&self.m << self.e as usize, 0.0);
        }
        let shift = (-self.e) as u64;
        let mag = self.m.magnitude();
        if shift >= mag.bits() + 64 {
            return (BigInt::zero(), self.abs().to_f64());
        }
        let half = BigUint::one() << (shift - 1) as usize;
        let q = (mag + &half) >> shift as usize;
        let nearest = BigInt::from_biguint(self.m.sign(), q.clone());
        let diff = Bf {
            m: BigInt::from_biguint(Sign::Plus, mag.clone())
                - (BigInt::from_biguint(Sign::Plus, q) << shift as usize),
            e: self.e,
        };
        (nearest, diff.abs().to_f64())
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let bits = self.m.magnitude().bits();
        // Keep 54 bits and round the last one away, for a nearest-double
        // conversion.
        let (top, shift) = if bits > 54 {
            let s = (bits - 54) as i64;
            let t = (self.m.magnitude() >> s as usize)
                .to_u64()
                .expect("54 bits fit");
            ((t + 1) >> 1, s + 1)
        } else {
            (self.m.magnitude().to_u64().expect("54 bits fit"), 0)
        };
        let sign = if self.m.is_negative() { -1.0 } else { 1.0 };
        let exp = self.e + shift;
        if exp + 54 > 1_060 {
            return sign * f64::INFINITY;
        }
        if exp + 54 < -1_060 {
            return 0.0;
        }
        sign * top as f64 * (exp as f64).exp2()
    }
}

/// atanh((x-1)/(x+1)) for x in [0.75, 1.5), so that 2*result = ln(x).
fn atanh_of_ratio(x: &Bf, wp: u32) -> Bf {
    let one = Bf::from_i64(1);
    let u = x.sub(&one, wp).div(&x.add(&one, wp), wp);
    atanh_series(&u, wp)
}

fn atanh_series(u: &Bf, wp: u32) -> Bf {
    let u2 = u.mul(u, wp);
    let mut term = u.clone();
    let mut acc = u.clone();
    let mut i: i64 = 1;
    let floor = -(wp as i64) - 8;
    loop {
        term = term.mul(&u2, wp);
        if term.is_zero() || term.mag2() < floor {
            break;
        }
        acc = acc.add(&term.div(&Bf::from_i64(2 * i + 1), wp), wp);
        i += 1;
    }
    acc
}

/// ln 2 = 2 atanh(1/3).
fn ln2(wp: u32) -> Bf {
    let third = Bf::from_i64(1).div(&Bf::from_i64(3), wp);
    atanh_series(&third, wp).shl(1)
}

/// Complex number over Bf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cf {
    pub re: Bf,
    pub im: Bf,
}

impl Cf {
    pub fn new(re: Bf, im: Bf) -> Self {
        Cf { re, im }
    }

    pub fn real(re: Bf) -> Self {
        Cf {
            re,
            im: Bf::zero(),
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Cf {
            re: Bf::from_f64(re),
            im: Bf::from_f64(im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Cf {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &Cf, prec: u32) -> Self {
        Cf {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Cf, prec: u32) -> Self {
        Cf {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn mul(&self, o: &Cf, prec: u32) -> Self {
        let re = self
            .re
            .mul(&o.re, prec + 4)
            .sub(&self.im.mul(&o.im, prec + 4), prec);
        let im = self
            .re
            .mul(&o.im, prec + 4)
            .add(&self.im.mul(&o.re, prec + 4), prec);
        Cf { re, im }
    }

    pub fn norm_sqr(&self, prec: u32) -> Bf {
        self.re
            .mul(&self.re, prec + 4)
            .add(&self.im.mul(&self.im, prec + 4), prec)
    }

    pub fn abs(&self, prec: u32) -> Bf {
        if self.im.is_zero() {
            return self.re.abs().with_prec(prec);
        }
        self.norm_sqr(prec + 8).sqrt(prec)
    }

    pub fn div(&self, o: &Cf, prec: u32) -> Self {
        let d = o.norm_sqr(prec + 8);
        let num = self.mul(&o.conj(), prec + 8);
        Cf {
            re: num.re.div(&d, prec),
            im: num.im.div(&d, prec),
        }
    }

    pub fn inv(&self, prec: u32) -> Self {
        Cf::real(Bf::from_i64(1)).div(self, prec)
    }

    pub fn scale(&self, s: &Bf, prec: u32) -> Self {
        Cf {
            re: self.re.mul(s, prec),
            im: self.im.mul(s, prec),
        }
    }

    /// z^n by binary powering.
    pub fn powu(&self, mut n: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cf::real(Bf::from_i64(1));
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.0, 1.0, -3.5, 0.1, 1e-12, 6.02e23, -7.25e-300] {
            assert!(close(Bf::from_f64(v).to_f64(), v, 1e-15), "{v}");
        }
    }

    #[test]
    fn field_ops_match_f64() {
        let a = Bf::from_f64(1.625);
        let b = Bf::from_f64(-0.3125);
        assert_eq!(a.add(&b, P).to_f64(), 1.3125);
        assert_eq!(a.mul(&b, P).to_f64(), 1.625 * -0.3125);
        assert!(close(a.div(&b, P).to_f64(), 1.625 / -0.3125, 1e-16));
        assert_eq!(a.cmp_value(&b), Ordering::Greater);
        assert_eq!(b.cmp_value(&a), Ordering::Less);
        assert_eq!(a.cmp_value(&a.clone()), Ordering::Equal);
    }

    #[test]
    fn tiny_addend_is_absorbed() {
        let a = Bf::from_i64(1);
        let tiny = Bf::from_f64(1.0).shl(-500);
        let s = a.add(&tiny, 64);
        assert_eq!(s.to_f64(), 1.0);
    }

    #[test]
    fn sqrt_squares_back() {
        for v in [2.0f64, 3.0, 10.0, 0.5, 12345.678] {
            let x = Bf::from_f64(v);
            let r = x.sqrt(P);
            let back = r.mul(&r, P);
            let err = back.sub(&x, P).abs();
            let bound = x.abs().shl(-(P as i64) + 8);
            assert_eq!(err.cmp_value(&bound), Ordering::Less, "sqrt({v})");
        }
    }

    #[test]
    fn ln_agrees_with_f64_and_is_additive() {
        for v in [0.001f64, 0.7, 1.0, 1.5, 2.0, 3.0, 1e6, 2.5e-8] {
            let got = Bf::from_f64(v).ln(P).to_f64();
            assert!(close(got, v.ln(), 1e-14), "ln({v}): {got} vs {}", v.ln());
        }
        // ln(a) + ln(b) = ln(ab) to working precision.
        let a = Bf::from_f64(1.2345);
        let b = Bf::from_f64(6.789);
        let lhs = a.ln(P).add(&b.ln(P), P);
        let rhs = a.mul(&b, P).ln(P);
        let err = lhs.sub(&rhs, P).abs();
        assert!(err.mag2() < -(P as i64) + 16);
        // ln(1 + 1e-30) needs the series, not f64.
        let x = Bf::from_i64(1).add(&Bf::from_f64(1.0).shl(-100), P);
        let l = x.ln(P);
        let expect = Bf::from_f64(1.0).shl(-100); // ln(1+d) ~ d
        let rel = l.sub(&expect, P).abs().mag2() - expect.mag2();
        assert!(rel < -60, "relative error 2^{rel}");
    }

    #[test]
    fn rounding_to_integers() {
        let (n, d) = Bf::from_f64(7.25).round_to_int();
        assert_eq!(n, BigInt::from(7));
        assert!((d - 0.25).abs() < 1e-15);
        let (n, d) = Bf::from_f64(-3.0).round_to_int();
        assert_eq!(n, BigInt::from(-3));
        assert_eq!(d, 0.0);
        let (n, d) = Bf::from_f64(1e-40).round_to_int();
        assert_eq!(n, BigInt::zero());
        assert!(d > 0.0 && d < 1e-30);
        // A 200-bit integer survives the trip exactly.
        let big = BigInt::from(3) << 199usize;
        let (n, d) = Bf::from_bigint(&big).round_to_int();
        assert_eq!(n, big);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn complex_ops() {
        let z = Cf::from_f64(1.5, -2.25);
        let w = Cf::from_f64(-0.5, 0.125);
        let p = z.mul(&w, P);
        // (1.5 - 2.25i)(-0.5 + 0.125i) = -0.75 + 0.28125 + i(0.1875 + 1.125)
        assert!(close(p.re.to_f64(), -0.46875, 1e-15));
        assert!(close(p.im.to_f64(), 1.3125, 1e-15));
        let q = p.div(&w, P);
        assert!(close(q.re.to_f64(), 1.5, 1e-14));
        assert!(close(q.im.to_f64(), -2.25, 1e-14));
        let r = z.powu(5, P);
        let mut s = Cf::real(Bf::from_i64(1));
        for _ in 0..5 {
            s = s.mul(&z, P);
        }
        assert!(close(r.re.to_f64(), s.re.to_f64(), 1e-14));
        assert!(close(r.im.to_f64(), s.im.to_f64(), 1e-14));
        let m = z.abs(P).to_f64();
        assert!(close(m, (1.5f64 * 1.5 + 2.25 * 2.25).sqrt(), 1e-14));
    }
}
