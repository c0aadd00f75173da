//! Exact reconstruction of a polynomial from dyadic root approximations.
//!
//! Roots are scaled to a common power-of-two denominator so every product is a
//! Gaussian-integer polynomial product; nothing is truncated.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{Dyadic, DyadicComplex, Rational};
use crate::error::{Error, Result};
use crate::upoly::{int, lg, RatPoly};

/// `P + iQ = ∏ (x − γⱼ + iδⱼ)`, so that `lc·(P² + Q²)` has the roots `γⱼ ± iδⱼ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PQPair {
    pub p: RatPoly,
    pub q: RatPoly,
    pub lc_factor: Rational,
}

impl PQPair {
    /// `lc·(P² + Q²)`.
    pub fn expand(&self) -> RatPoly {
        (&(&self.p * &self.p) + &(&self.q * &self.q)).scale(&self.lc_factor)
    }
}

/// Gaussian-integer polynomial `re + i·im`, coefficients ascending.
#[derive(Clone, Debug)]
struct GPoly {
    re: Vec<BigInt>,
    im: Vec<BigInt>,
}

fn add_into(acc: &mut Vec<BigInt>, v: &[BigInt], negate: bool) {
    if acc.len() < v.len() {
        acc.resize(v.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if negate {
            *a -= b;
        } else {
            *a += b;
        }
    }
}

impl GPoly {
    /// Three real products: `ac − bd` and `(a+b)(c+d) − ac − bd`.
    fn mul(&self, o: &GPoly) -> GPoly {
        let ac = int::mul(&self.re, &o.re);
        let bd = int::mul(&self.im, &o.im);
        let mut s1 = self.re.clone();
        add_into(&mut s1, &self.im, false);
        let mut s2 = o.re.clone();
        add_into(&mut s2, &o.im, false);
        let mut im = int::mul(&s1, &s2);
        add_into(&mut im, &ac, true);
        add_into(&mut im, &bd, true);
        let mut re = ac;
        add_into(&mut re, &bd, true);
        int::trim(&mut re);
        int::trim(&mut im);
        GPoly { re, im }
    }
}

/// Balanced pairwise products; an odd element moves up a level unchanged.
fn tree_product(mut level: Vec<GPoly>) -> GPoly {
    if level.is_empty() {
        return GPoly {
            re: vec![BigInt::one()],
            im: Vec::new(),
        };
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.mul(&b)),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap()
}

/// Leaf `2^e·x + (re + i·im)·2^e` for the factor `x + z`.
fn leaf(re: &Dyadic, im: &Dyadic, e: u64) -> GPoly {
    let one = BigInt::one() << e;
    GPoly {
        re: vec![re.mantissa_at(e), one],
        im: vec![im.mantissa_at(e)],
    }
}

fn common_exponent<'a>(ds: impl Iterator<Item = &'a Dyadic>) -> u64 {
    ds.map(|d| d.exponent()).max().unwrap_or(0)
}

fn to_ratpoly(v: Vec<BigInt>, n: usize, e: u64, lc: &Rational) -> RatPoly {
    let den = BigInt::one() << (n as u64 * e);
    let p = RatPoly::from_int_over(v, &den);
    if lc.is_one() {
        p
    } else {
        p.scale(lc)
    }
}

/// `lc·∏(x − zᵢ)`, exact; the roots must be closed under conjugation.
pub fn product_tree(roots: &[DyadicComplex], lc: &Rational) -> Result<RatPoly> {
    let e = common_exponent(roots.iter().flat_map(|z| [&z.re, &z.im]));
    let leaves = roots.iter().map(|z| leaf(&-&z.re, &-&z.im, e)).collect();
    let prod = tree_product(leaves);
    if prod.im.iter().any(|c| !c.is_zero()) {
        return Err(Error::NonRealProduct);
    }
    Ok(to_ratpoly(prod.re, roots.len(), e, lc))
}

/// `P + iQ = ∏(x − γⱼ + iδⱼ)` over roots `γⱼ + iδⱼ` in the upper half-plane.
pub fn split_pq(upper_roots: &[(Dyadic, Dyadic)], lc: &Rational) -> Result<PQPair> {
    if let Some(index) = upper_roots.iter().position(|(_, d)| !d.is_positive()) {
        return Err(Error::LowerHalfPlaneRoot { index });
    }
    let e = common_exponent(upper_roots.iter().flat_map(|(g, d)| [g, d]));
    let leaves = upper_roots.iter().map(|(g, d)| leaf(&-g, d, e)).collect();
    let prod = tree_product(leaves);
    let n = upper_roots.len();
    Ok(PQPair {
        p: to_ratpoly(prod.re, n, e, &Rational::one()),
        q: to_ratpoly(prod.im, n, e, &Rational::one()),
        lc_factor: lc.clone(),
    })
}

/// Exponent of the coefficient error bound `‖m − m̃‖∞ ≤ 2^(−ℓ + (4n−4)τ + 32n − (lg n + 5)² − 7)`
/// for `n` roots of modulus at most `2^τ` known to `2^(−ℓ)`.
pub fn fanin_error_exponent(n: usize, tau: u64, ell: u64) -> i64 {
    let l = lg(n) as i64 + 5;
    -(ell as i64) + (4 * n as i64 - 4) * tau as i64 + 32 * n as i64 - l * l - 7
}
