//! Exact univariate polynomials over ℚ.
//!
//! Coefficients are stored densely in ascending order with no trailing zeros;
//! the zero polynomial has an empty coefficient list and `degree() == None`.

mod factor;
pub(crate) mod int;
mod parse;
mod sturm;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{bitsize, ceil_log2, pow2, Rational};
use crate::error::{Error, Result};

pub use factor::yun_squarefree_factorization;
pub use parse::{parse_expression, parse_poly};
pub use sturm::{sturm_count_real_roots, Bound, Domain, SturmChain};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

/// `k` when the denominator of `q` is `2^k`.
fn pow2_exp(q: &Rational) -> Option<u64> {
    let d = q.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    (d.bits() == tz + 1).then_some(tz)
}

/// `n / 2^e` in lowest terms without a gcd.
fn dyadic_ratio(n: BigInt, e: u64) -> Rational {
    if n.is_zero() {
        return Rational::zero();
    }
    let s = n.trailing_zeros().unwrap_or(0).min(e);
    Rational::new_raw(n >> s, BigInt::one() << (e - s))
}

/// `x + sign·y`; dyadic operands skip num-rational's gcd, which dominates on large coefficients.
fn add_coeff(x: &Rational, y: &Rational, negate: bool) -> Rational {
    match (pow2_exp(x), pow2_exp(y)) {
        (Some(ex), Some(ey)) => {
            let e = ex.max(ey);
            let yn = y.numer() << (e - ey);
            let xn = x.numer() << (e - ex);
            dyadic_ratio(if negate { xn - yn } else { xn + yn }, e)
        }
        _ if negate => x - y,
        _ => x + y,
    }
}

fn mul_coeff(x: &Rational, c: &Rational) -> Rational {
    match (pow2_exp(x), pow2_exp(c)) {
        (Some(ex), Some(ec)) => dyadic_ratio(x.numer() * c.numer(), ex + ec),
        _ => x * c,
    }
}

/// `⌈log2 max(d, 2)⌉`.
pub fn lg(d: usize) -> u64 {
    let d = d.max(2) as u64;
    64 - (d - 1).leading_zeros() as u64
}

/// Exponent range `(−4dτ − 16d·lg d, 2dτ + 8d·lg d)` for critical values of a degree-`d` polynomial.
pub fn min_eval_bounds(d: usize, tau: u64) -> (i64, i64) {
    let (d64, l) = (d as i64, lg(d) as i64);
    let t = tau as i64;
    (-4 * d64 * t - 16 * d64 * l, 2 * d64 * t + 8 * d64 * l)
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x − r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_ints(c: Vec<BigInt>) -> Self {
        Self::new(c.into_iter().map(Rational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn tc(&self) -> Rational {
        self.coeff(0)
    }

    /// Horner evaluation; denominators are cleared once so the loop runs over integers.
    pub fn eval(&self, t: &Rational) -> Rational {
        let (ip, l) = self.integer_parts();
        let Some(d) = ip.len().checked_sub(1) else {
            return Rational::zero();
        };
        let num = int::eval_hom(&ip, t.numer(), t.denom());
        Rational::new(num, l * t.denom().pow(d as u32))
    }

    pub fn sign_at(&self, t: &Rational) -> Sign {
        let (ip, _) = self.integer_parts();
        int::sign_at(&ip, t.numer(), t.denom())
    }

    /// `(A·L, L)` with `L > 0` the lcm of the coefficient denominators.
    pub fn integer_parts(&self) -> (Vec<BigInt>, BigInt) {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            if !c.denom().is_one() {
                l = l.lcm(c.denom());
            }
        }
        let ip = self
            .coeffs
            .iter()
            .map(|c| {
                if c.denom() == &l {
                    c.numer().clone()
                } else {
                    c.numer() * (&l / c.denom())
                }
            })
            .collect();
        (ip, l)
    }

    /// `p / den` coefficientwise, normalized.
    pub(crate) fn from_int_over(p: Vec<BigInt>, den: &BigInt) -> Self {
        if den.is_one() {
            return Self::from_ints(p);
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        let pow2_den = den.bits() == tz + 1;
        Self::new(
            p.into_iter()
                .map(|c| {
                    if pow2_den {
                        // Only powers of two can cancel.
                        if c.is_zero() {
                            return Rational::zero();
                        }
                        let s = c.trailing_zeros().unwrap_or(0).min(tz);
                        Rational::new_raw(c >> s, BigInt::one() << (tz - s))
                    } else {
                        Rational::new(c, den.clone())
                    }
                })
                .collect(),
        )
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        int::primitive(self.integer_parts().0)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|x| mul_coeff(x, c)).collect(),
        }
    }

    pub fn shift_degree(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &RatPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// `self(x²)`.
    pub fn substitute_square(&self) -> Self {
        let mut v = vec![Rational::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[2 * k] = c.clone();
        }
        Self::new(v)
    }

    /// `(E, O)` with `self(x) = E(x²) + x·O(x²)`.
    pub fn even_odd_split(&self) -> (RatPoly, RatPoly) {
        let even = self.coeffs.iter().step_by(2).cloned().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (Self::new(even), Self::new(odd))
    }

    /// `(‖A‖₁, ‖A‖∞, τ)`; the zero polynomial gives `(0, 0, 1)`.
    pub fn norms(&self) -> (Rational, Rational, u64) {
        let mut one = Rational::zero();
        let mut inf = Rational::zero();
        let mut tau = 1;
        for c in &self.coeffs {
            let a = c.abs();
            one += &a;
            if a > inf {
                inf = a;
            }
            tau = tau.max(bitsize(c));
        }
        (one, inf, tau)
    }

    pub fn tau(&self) -> u64 {
        self.coeffs.iter().map(bitsize).max().unwrap_or(1)
    }

    /// Maximum coefficient bitsize, `max bitsize(aₖ)`.
    pub fn bitsize(&self) -> u64 {
        self.tau()
    }

    pub fn inf_norm(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// `2‖A‖∞ / |lc(A)|`, a strict upper bound on the modulus of every complex root.
    pub fn root_magnitude_bound(&self) -> Rational {
        Rational::from_integer(2.into()) * self.inf_norm() / self.lc().abs()
    }

    /// `A(x + a)`.
    pub fn taylor_shift(&self, a: &Rational) -> Self {
        if a.is_zero() || self.is_constant() {
            return self.clone();
        }
        let (ip, l) = self.integer_parts();
        // A(x + n/m) = m^(−D) · Σ cₖ (m x + n)^k m^(D−k), so shift the homogenized polynomial.
        let (n, m) = (a.numer(), a.denom());
        let d = ip.len() - 1;
        let mut mp = BigInt::one();
        let mut hom = vec![BigInt::zero(); d + 1];
        for k in (0..=d).rev() {
            hom[k] = &ip[k] * &mp;
            mp *= m;
        }
        // hom(y) = Σ cₖ m^(D−k) yᵏ, and the result is hom(m x + n) / (L m^D).
        let shifted = int::scale_var(&int::taylor_shift(&hom, n), m);
        let den = l * m.pow(d as u32);
        Self::from_int_over(shifted, &den)
    }

    /// Scales `x ↦ c·x`.
    pub fn scale_var(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        Self::new(
            self.coeffs
                .iter()
                .map(|x| {
                    let y = x * &p;
                    p *= c;
                    y
                })
                .collect(),
        )
    }

    /// `(2^k·A, 2^k)` with `lc(2^k·A) ∈ [1/2, 1]`.
    pub fn scale_to_unit_lc(&self) -> Result<(RatPoly, Rational)> {
        let lc = self.lc();
        if !lc.is_positive() {
            return Err(Error::NonPositiveLeadingCoefficient);
        }
        // 2^(c−1) < lc ≤ 2^c, so lc·2^(−c) ∈ (1/2, 1].
        let k = -ceil_log2(&lc);
        let s = pow2(k);
        Ok((self.scale(&s), s))
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().recip())
    }

    /// `x^d·A(1/x)` where `d = deg A`.
    pub fn reverse(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Euclidean division over ℚ.
    pub fn div_rem(&self, b: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!b.is_zero(), "division by the zero polynomial");
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return (Self::zero(), self.clone());
        }
        let inv = b.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] * &inv;
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = &c * y;
                r[k - db + j] -= t;
            }
            q[k - db] = c;
        }
        r.truncate(db);
        (Self::new(q), Self::new(r))
    }

    /// Quotient of an exact division; panics in debug builds if the remainder is nonzero.
    pub fn exact_div(&self, b: &RatPoly) -> RatPoly {
        let (q, r) = self.div_rem(b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// `Σ w·s²`, accumulated over one common denominator.
    pub fn weighted_square_sum<'a>(terms: impl IntoIterator<Item = (&'a Rational, &'a RatPoly)>) -> RatPoly {
        let (acc, l) = Self::weighted_square_sum_int(terms);
        RatPoly::from_int_over(acc, &l)
    }

    /// `(N, L)` with `Σ w·s² = N / L`, `L > 0`, not reduced.
    pub fn weighted_square_sum_int<'a>(terms: impl IntoIterator<Item = (&'a Rational, &'a RatPoly)>) -> (Vec<BigInt>, BigInt) {
        let mut parts: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
        for (w, s) in terms {
            if w.is_zero() || s.is_zero() {
                continue;
            }
            let (si, sd) = s.integer_parts();
            let sq = int::mul(&si, &si);
            let num = w.numer();
            parts.push((sq.into_iter().map(|c| c * num).collect(), &sd * &sd * w.denom()));
        }
        let l = parts.iter().fold(BigInt::one(), |l, (_, d)| l.lcm(d));
        let mut acc: Vec<BigInt> = Vec::new();
        for (v, d) in parts {
            let f = &l / d;
            if acc.len() < v.len() {
                acc.resize(v.len(), BigInt::zero());
            }
            for (a, c) in acc.iter_mut().zip(v) {
                *a += if f.is_one() { c } else { c * &f };
            }
        }
        int::trim(&mut acc);
        (acc, l)
    }

    /// `gcd(A, A′)` is constant; a modular test settles the common case.
    pub fn is_square_free(&self) -> bool {
        let p = self.primitive_int();
        int::squarefree_mod_p(&p) || self.is_constant() || self.gcd(&self.derivative()).is_constant()
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        factor::gcd(self, other)
    }

    pub fn to_expr_string(&self) -> String {
        parse::format_expression(self)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut v = long.coeffs.clone();
        for (x, y) in v.iter_mut().zip(&short.coeffs) {
            *x = add_coeff(x, y, false);
        }
        RatPoly::new(v)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = self.coeffs.clone();
        v.resize(n, Rational::zero());
        for (x, y) in v.iter_mut().zip(&rhs.coeffs) {
            *x = add_coeff(x, y, true);
        }
        RatPoly::new(v)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let (a, la) = self.integer_parts();
        let (b, lb) = rhs.integer_parts();
        RatPoly::from_int_over(int::mul(&a, &b), &(la * lb))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: RatPoly) -> RatPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}
