//! Binary floating point with a big-integer mantissa, plus upper/lower magnitude bounds.
//!
//! `Float` values are exact dyadics; precision only enters through the explicit
//! rounding helpers. `Mag` is a nonnegative bound `m·2^e` kept with outward rounding.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::Dyadic;
#[cfg(test)]
use crate::arith::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Float {
    m: BigInt,
    e: i64,
}

impl Float {
    pub fn zero() -> Self {
        Float {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_int(m: BigInt, e: i64) -> Self {
        Float { m, e }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Float {
            m: BigInt::from(mant) * sign,
            e,
        }
    }

    pub fn from_dyadic(d: &Dyadic) -> Self {
        Float {
            m: d.mantissa().clone(),
            e: -(d.exponent() as i64),
        }
    }

    #[cfg(test)]
    /// Truncation of `q` to about `p` significant bits, with an absolute error bound.
    pub fn from_rational(q: &Rational, p: u64) -> (Self, Mag) {
        let (n, d) = (q.numer(), q.denom());
        if n.is_zero() {
            return (Self::zero(), Mag::zero());
        }
        let s = (p as i64 + d.bits() as i64 - n.bits() as i64 + 2).max(0);
        let num = n << s as u64;
        let (quot, rem) = (&num / d, &num % d);
        let f = Float { m: quot, e: -s };
        let err = if rem.is_zero() { Mag::zero() } else { Mag::pow2(-s) };
        (f, err)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.m.sign()
    }

    /// `t` with `2^(t−1) ≤ |x| < 2^t`; `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN
        } else {
            self.e + self.m.bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        Float {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn abs(&self) -> Self {
        Float {
            m: self.m.abs(),
            e: self.e,
        }
    }

    /// Rounds toward −∞ to `p` bits; the error is below the returned bound.
    pub fn round_err(&self, p: u64) -> (Self, Mag) {
        let bits = self.m.bits();
        if bits <= p {
            return (self.clone(), Mag::zero());
        }
        let sh = bits - p;
        let e = self.e + sh as i64;
        (Float { m: &self.m >> sh, e }, Mag::pow2(e))
    }

    pub fn round(&self, p: u64) -> Self {
        self.round_err(p).0
    }

    pub fn add(&self, o: &Float) -> Float {
        if self.m.is_zero() {
            return o.clone();
        }
        if o.m.is_zero() {
            return self.clone();
        }
        match self.e.cmp(&o.e) {
            Ordering::Equal => Float {
                m: &self.m + &o.m,
                e: self.e,
            },
            Ordering::Greater => Float {
                m: (&self.m << (self.e - o.e) as u64) + &o.m,
                e: o.e,
            },
            Ordering::Less => Float {
                m: &self.m + (&o.m << (o.e - self.e) as u64),
                e: self.e,
            },
        }
    }

    pub fn sub(&self, o: &Float) -> Float {
        self.add(&o.neg())
    }

    /// Sum rounded to `p` bits; an operand far below the other's last kept bit is dropped.
    pub fn add_p(&self, o: &Float, p: u64) -> Float {
        let (ta, tb) = (self.top(), o.top());
        if ta != i64::MIN && tb != i64::MIN {
            if tb < ta - p as i64 - 4 {
                return self.round(p);
            }
            if ta < tb - p as i64 - 4 {
                return o.round(p);
            }
        }
        self.add(o).round(p)
    }

    pub fn sub_p(&self, o: &Float, p: u64) -> Float {
        self.add_p(&o.neg(), p)
    }

    pub fn mul(&self, o: &Float) -> Float {
        Float {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    /// Quotient truncated to about `p` bits; the divisor must be nonzero.
    pub fn div_p(&self, o: &Float, p: u64) -> Float {
        debug_assert!(!o.is_zero());
        if self.m.is_zero() {
            return Self::zero();
        }
        let s = (p as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 1).max(0);
        let q = (&self.m << s as u64) / &o.m;
        Float {
            m: q,
            e: self.e - s - o.e,
        }
        .round(p)
    }

    #[cfg(test)]
    /// Square root truncated to about `p` bits, for nonnegative input.
    pub fn sqrt_p(&self, p: u64) -> Float {
        if self.m.sign() != Sign::Plus {
            return Self::zero();
        }
        let mut s = (2 * p as i64 - self.m.bits() as i64 + 2).max(0);
        if (self.e - s) % 2 != 0 {
            s += 1;
        }
        let r = (&self.m << s as u64).sqrt();
        Float {
            m: r,
            e: (self.e - s) / 2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.m.bits();
        let sh = bits.saturating_sub(60);
        let m = (&self.m >> sh).to_f64().unwrap_or(0.0);
        let e = (self.e + sh as i64).clamp(-2200, 2200) as i32;
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    #[cfg(test)]
    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as u64)
        } else {
            Rational::new(self.m.clone(), BigInt::from(1) << (-self.e) as u64)
        }
    }

    /// Nearest multiple of `2^(−k)` (ties upward).
    pub fn to_dyadic(&self, k: u64) -> Dyadic {
        let shift = self.e + k as i64;
        if shift >= 0 {
            return Dyadic::new(&self.m << shift as u64, k);
        }
        let s = (-shift) as u64;
        let half = BigInt::from(1) << (s - 1);
        Dyadic::new((&self.m + half) >> s, k)
    }

    pub fn mag_up(&self) -> Mag {
        Mag::from_int_scaled(&self.m, self.e, true)
    }

    pub fn mag_lo(&self) -> Mag {
        Mag::from_int_scaled(&self.m, self.e, false)
    }
}

/// Complex value with `Float` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CFloat {
    pub re: Float,
    pub im: Float,
}

impl CFloat {
    pub fn new(re: Float, im: Float) -> Self {
        CFloat { re, im }
    }

    pub fn zero() -> Self {
        CFloat::new(Float::zero(), Float::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn round(&self, p: u64) -> Self {
        CFloat::new(self.re.round(p), self.im.round(p))
    }

    pub fn add_p(&self, o: &CFloat, p: u64) -> Self {
        CFloat::new(self.re.add_p(&o.re, p), self.im.add_p(&o.im, p))
    }

    pub fn sub_p(&self, o: &CFloat, p: u64) -> Self {
        CFloat::new(self.re.sub_p(&o.re, p), self.im.sub_p(&o.im, p))
    }

    pub fn sub(&self, o: &CFloat) -> Self {
        CFloat::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    /// Exact product with three real multiplications.
    pub fn mul(&self, o: &CFloat) -> Self {
        let k1 = o.re.mul(&self.re.add(&self.im));
        let k2 = self.re.mul(&o.im.sub(&o.re));
        let k3 = self.im.mul(&o.re.add(&o.im));
        CFloat::new(k1.sub(&k3), k1.add(&k2))
    }

    pub fn mul_p(&self, o: &CFloat, p: u64) -> Self {
        self.mul(o).round(p)
    }

    pub fn div_p(&self, o: &CFloat, p: u64) -> Self {
        let den = o.re.mul(&o.re).add(&o.im.mul(&o.im)).round(p + 8);
        let num = self.mul(&CFloat::new(o.re.clone(), o.im.neg()));
        CFloat::new(num.re.div_p(&den, p), num.im.div_p(&den, p))
    }

    pub fn recip_p(&self, p: u64) -> Self {
        let den = self.re.mul(&self.re).add(&self.im.mul(&self.im)).round(p + 8);
        CFloat::new(self.re.div_p(&den, p), self.im.neg().div_p(&den, p))
    }

    /// Upper bound on the modulus (`|re| + |im|`).
    pub fn mag_up(&self) -> Mag {
        self.re.mag_up().add_up(self.im.mag_up())
    }

    /// Lower bound on the modulus (`√(re² + im²)` rounded down).
    pub fn mag_lo(&self) -> Mag {
        let (a, b) = (self.re.mag_lo(), self.im.mag_lo());
        a.mul_down(a).add_down(b.mul_down(b)).sqrt_down()
    }
}

/// Nonnegative magnitude `m·2^e` with `m ∈ [1/2, 1)` (or zero, or +∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Mag {
    m: f64,
    e: i64,
}

impl Mag {
    fn norm(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::zero();
        }
        if m.is_infinite() {
            return Mag::inf();
        }
        let (m, e) = if m < f64::MIN_POSITIVE {
            (m * 2f64.powi(64), e - 64)
        } else {
            (m, e)
        };
        let bits = m.to_bits();
        let ex = ((bits >> 52) & 0x7ff) as i64;
        let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
        Mag {
            m: mant,
            e: e + ex - 1022,
        }
    }

    pub fn zero() -> Mag {
        Mag { m: 0.0, e: 0 }
    }

    pub fn inf() -> Mag {
        Mag {
            m: f64::INFINITY,
            e: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn pow2(k: i64) -> Mag {
        Mag { m: 0.5, e: k + 1 }
    }

    pub fn from_u64(x: u64) -> Mag {
        debug_assert!(x < 1 << 53);
        Mag::norm(x as f64, 0)
    }

    fn from_int_scaled(m: &BigInt, e: i64, up: bool) -> Mag {
        if m.is_zero() {
            return Mag::zero();
        }
        let a = m.magnitude();
        let bits = a.bits();
        if bits <= 53 {
            return Mag::norm(a.to_f64().unwrap(), e);
        }
        let sh = bits - 53;
        let top = (a >> sh).to_u64().unwrap() + up as u64;
        Mag::norm(top as f64, e + sh as i64)
    }

    pub fn mul_up(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::zero();
        }
        Mag::norm((self.m * o.m).next_up(), self.e + o.e)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::zero();
        }
        Mag::norm((self.m * o.m).next_down(), self.e + o.e)
    }

    pub fn add_up(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        if self.m.is_infinite() || o.m.is_infinite() {
            return Mag::inf();
        }
        let (x, y) = if self.e >= o.e { (self, o) } else { (o, self) };
        let diff = x.e - y.e;
        if diff > 60 {
            return Mag::norm(x.m.next_up(), x.e);
        }
        Mag::norm((x.m + y.m * 2f64.powi(-(diff as i32))).next_up(), x.e)
    }

    pub fn add_down(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (x, y) = if self.e >= o.e { (self, o) } else { (o, self) };
        let diff = x.e - y.e;
        if diff > 60 {
            return x;
        }
        Mag::norm((x.m + y.m * 2f64.powi(-(diff as i32))).next_down(), x.e)
    }

    #[cfg(test)]
    /// Lower bound on `self − o`, clamped at zero.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self.is_zero() || o.e > self.e {
            return Mag::zero();
        }
        let diff = self.e - o.e;
        if diff > 60 {
            return Mag::norm(self.m.next_down(), self.e);
        }
        let m = (self.m - o.m * 2f64.powi(-(diff as i32))).next_down();
        if m <= 0.0 {
            Mag::zero()
        } else {
            Mag::norm(m, self.e)
        }
    }

    pub fn div_up(self, o: Mag) -> Mag {
        if self.is_zero() {
            return Mag::zero();
        }
        if o.is_zero() {
            return Mag::inf();
        }
        Mag::norm((self.m / o.m).next_up(), self.e - o.e)
    }

    pub fn sqrt_down(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.e % 2 != 0 { (self.m * 2.0, self.e - 1) } else { (self.m, self.e) };
        Mag::norm(m.sqrt().next_down(), e / 2)
    }

    pub fn lt(self, o: Mag) -> bool {
        if o.m.is_infinite() {
            return !self.m.is_infinite();
        }
        if self.m.is_infinite() || o.is_zero() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        self.e < o.e || (self.e == o.e && self.m < o.m)
    }

    /// `log2` of the value (−∞ for zero).
    pub fn log2(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.e as f64 + self.m.log2()
        }
    }
}
