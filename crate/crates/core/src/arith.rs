//! Exact rational and dyadic numbers.
//!
//! `Rational` is `num_rational::BigRational`, always kept in lowest terms with a
//! positive denominator. `Dyadic` is `m·2^(−e)` with `e ≥ 0` and canonical odd
//! (or zero) mantissa; it is closed under `+`, `−`, `×` and has no division.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds `num/den` in lowest terms with a positive denominator.
pub fn normalize(num: BigInt, den: BigInt) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::InvalidRational(format!("{num}/0")));
    }
    Ok(Rational::new(num, den))
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` for any integer `e`.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as u64)
    } else {
        Rational::new_raw(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

/// `max(bits(|num|), bits(den)) + 1`; zero has bitsize 1.
pub fn bitsize(q: &Rational) -> u64 {
    if q.is_zero() {
        return 1;
    }
    q.numer().bits().max(q.denom().bits()) + 1
}

/// `⌊log2 |q|⌋` for nonzero `q`.
pub fn floor_log2(q: &Rational) -> i64 {
    debug_assert!(!q.is_zero());
    let n = q.numer().abs();
    let d = q.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e ≤ n/d < 2^(e+2) at this point; fix by one comparison.
    let lhs = if e >= 0 { n.clone() } else { &n << (-e) as u64 };
    let rhs = if e >= 0 { d << e as u64 } else { d.clone() };
    if lhs < rhs {
        e -= 1;
    }
    e
}

/// `⌈log2 |q|⌉` for nonzero `q`.
pub fn ceil_log2(q: &Rational) -> i64 {
    let f = floor_log2(q);
    if q.abs() == pow2(f) {
        f
    } else {
        f + 1
    }
}

/// Nearest multiple of `2^(−prec)`, ties to even mantissa.
pub fn round_to_dyadic(q: &Rational, prec: u64) -> Dyadic {
    let scaled: BigInt = q.numer() << prec;
    let den = q.denom();
    let (mut k, r) = scaled.div_mod_floor(den);
    let twice: BigInt = r << 1;
    match twice.cmp(den) {
        Ordering::Greater => k += 1,
        Ordering::Equal if k.is_odd() => k += 1,
        _ => {}
    }
    Dyadic::new(k, prec)
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n` or `n/d` with optional sign on the numerator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = parse_int(n).ok_or_else(bad)?;
    if d.starts_with(['+', '-']) {
        return Err(bad());
    }
    let den = parse_int(d).ok_or_else(bad)?;
    normalize(num, den)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// `m·2^(−e)`, canonical: `m` odd, or `m = 0` and `e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: u64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0).min(exp);
        Dyadic {
            mant: mant >> tz,
            exp: exp - tz,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.exp)
    }

    /// Exact conversion when the denominator is a power of two.
    pub fn from_rational(q: &Rational) -> Option<Dyadic> {
        let d = q.denom();
        let e = d.bits() - 1;
        if d != &(BigInt::one() << e) {
            return None;
        }
        Some(Dyadic::new(q.numer().clone(), e))
    }

    /// Mantissa rescaled to exponent `e ≥ self.exp`.
    pub fn mantissa_at(&self, e: u64) -> BigInt {
        debug_assert!(e >= self.exp);
        &self.mant << (e - self.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp {
                Dyadic::new(self.mant.clone(), self.exp - k)
            } else {
                Dyadic::new(&self.mant << (k - self.exp), 0)
            }
        } else {
            Dyadic::new(self.mant.clone(), self.exp + (-k) as u64)
        }
    }

    pub fn bitsize(&self) -> u64 {
        bitsize(&self.to_rational())
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(60);
        let m = (&self.mant >> shift).to_f64().unwrap_or(0.0);
        m * 2f64.powi((shift as i64 - self.exp as i64).clamp(-2000, 2000) as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        self.mantissa_at(e).cmp(&other.mantissa_at(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(self.mantissa_at(e) + rhs.mantissa_at(e), e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(self.mantissa_at(e) - rhs.mantissa_at(e), e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $f(self, rhs: Dyadic) -> Dyadic {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^-{}", self.mant, self.exp)
    }
}

impl FromStr for Dyadic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Dyadic> {
        let bad = || Error::InvalidRational(s.to_string());
        let (m, e) = s.split_once("*2^-").ok_or_else(bad)?;
        let mant = parse_int(m).ok_or_else(bad)?;
        if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let exp: u64 = e.parse().map_err(|_| bad())?;
        let d = Dyadic::new(mant.clone(), exp);
        // Only the canonical spelling is accepted so that round-trips are bit-exact.
        if d.mant != mant || d.exp != exp {
            return Err(bad());
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl DyadicComplex {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        DyadicComplex { re, im }
    }

    pub fn real(re: Dyadic) -> Self {
        DyadicComplex {
            re,
            im: Dyadic::zero(),
        }
    }

    pub fn conj(&self) -> Self {
        DyadicComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul(&self, o: &DyadicComplex) -> DyadicComplex {
        DyadicComplex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn add(&self, o: &DyadicComplex) -> DyadicComplex {
        DyadicComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}
