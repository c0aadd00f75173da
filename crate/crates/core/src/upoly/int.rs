//! Dense integer polynomial kernels (ascending coefficients, trimmed).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const KARATSUBA_THRESHOLD: usize = 32;

pub(crate) fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Primes below `2^62` used for modular square-freeness tests.
const MOD_PRIMES: [u64; 3] = [(1 << 61) - 1, 4_611_686_018_427_387_847, 4_611_686_018_427_387_817];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce_mod(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = a.iter().map(|c| c.mod_floor(&pb).try_into().unwrap()).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Degree of `gcd(a, b)` over `𝔽_p`; `None` if both vanish.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Option<usize> {
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                let t = mulmod(f, c, p);
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().checked_sub(1)
}

/// `true` only if `a` is certainly square-free: for some prime not dividing `lc(a)`,
/// `gcd(a, a′)` is constant modulo that prime. `false` is inconclusive.
pub(crate) fn squarefree_mod_p(a: &[BigInt]) -> bool {
    if a.len() <= 2 {
        return !a.is_empty();
    }
    MOD_PRIMES.iter().any(|&p| {
        let ap = reduce_mod(a, p);
        ap.len() == a.len() && gcd_degree_mod(ap, reduce_mod(&derivative(a), p), p) == Some(0)
    })
}

pub(crate) fn degree(a: &[BigInt]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        return mul_school(a, b);
    }
    if a.len() >= 2 * b.len() {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, chunk) in a.chunks(b.len()).enumerate() {
            let part = mul(chunk, b);
            for (j, c) in part.into_iter().enumerate() {
                out[i * b.len() + j] += c;
            }
        }
        return out;
    }
    karatsuba(a, b)
}

fn mul_school(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_slices(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.to_vec();
    if b.len() > out.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (o, y) in out.iter_mut().zip(b) {
        *o += y;
    }
    out
}

fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = mul(a0, b0);
    let z2 = mul(a1, b1);
    let mut z1 = mul(&add_slices(a0, a1), &add_slices(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + h < out.len() {
            out[i + h] += c;
        } else {
            debug_assert!(c.is_zero());
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * h] += c;
    }
    out
}

pub(crate) fn derivative(a: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// Positive gcd of all coefficients (zero for the zero polynomial).
pub(crate) fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides by the positive content; the sign of every coefficient is preserved.
pub(crate) fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let g = content(&a);
    if g.is_zero() || g.is_one() {
        return a;
    }
    a.into_iter().map(|c| c / &g).collect()
}

/// Divides out the largest power of two common to all coefficients.
pub(crate) fn strip_pow2(a: Vec<BigInt>) -> Vec<BigInt> {
    let tz = a.iter().filter_map(|c| c.trailing_zeros()).min().unwrap_or(0);
    if tz == 0 {
        return a;
    }
    a.into_iter().map(|c| c >> tz).collect()
}

/// `lc(v)^(deg u − deg v + 1) · u mod v`.
pub(crate) fn prem(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let dv = v.len() - 1;
    let lv = &v[dv];
    let mut r = u.to_vec();
    if u.len() < v.len() {
        return r;
    }
    for k in (dv..u.len()).rev() {
        let c = std::mem::take(&mut r[k]);
        for x in r.iter_mut().take(k) {
            *x *= lv;
        }
        if !c.is_zero() {
            let off = k - dv;
            for (j, y) in v[..dv].iter().enumerate() {
                r[off + j] -= &c * y;
            }
        }
        r.truncate(k);
    }
    trim(&mut r);
    r
}

/// `(q, r)` with `lc(v)^(deg u − deg v + 1)·u = q·v + r` and `deg r < deg v`.
pub(crate) fn pdiv(u: &[BigInt], v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dv = v.len() - 1;
    let lv = &v[dv];
    let mut r = u.to_vec();
    if u.len() < v.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); u.len() - dv];
    for k in (dv..u.len()).rev() {
        let c = std::mem::take(&mut r[k]);
        for x in q.iter_mut().chain(r.iter_mut().take(k)) {
            *x *= lv;
        }
        if !c.is_zero() {
            let off = k - dv;
            for (j, y) in v[..dv].iter().enumerate() {
                r[off + j] -= &c * y;
            }
            q[off] += c;
        }
        r.truncate(k);
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = add_slices(a, b);
    trim(&mut out);
    out
}

/// `k·a − b`.
pub(crate) fn scaled_sub(k: &BigInt, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = (0..a.len().max(b.len())).map(|i| a.get(i).map_or_else(BigInt::zero, |x| x * k)).collect();
    for (o, y) in out.iter_mut().zip(b) {
        *o -= y;
    }
    trim(&mut out);
    out
}

/// Coefficientwise `a / d`, or `None` if some coefficient is not divisible.
pub(crate) fn div_exact(a: &[BigInt], d: &BigInt) -> Option<Vec<BigInt>> {
    a.iter()
        .map(|c| {
            let (q, r) = c.div_rem(d);
            r.is_zero().then_some(q)
        })
        .collect()
}

/// `Σ aₖ nᵏ d^(D−k)` with `D = deg a`, i.e. `d^D · a(n/d)`.
pub(crate) fn eval_hom(a: &[BigInt], n: &BigInt, d: &BigInt) -> BigInt {
    let Some(deg) = degree(a) else {
        return BigInt::zero();
    };
    let mut acc = a[deg].clone();
    let mut dp = BigInt::one();
    for k in (0..deg).rev() {
        dp *= d;
        acc = acc * n + &a[k] * &dp;
    }
    acc
}

pub(crate) fn sign_at(a: &[BigInt], n: &BigInt, d: &BigInt) -> Sign {
    debug_assert!(d.is_positive());
    eval_hom(a, n, d).sign()
}

/// `a(x + c)`.
pub(crate) fn taylor_shift(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    let mut r = a.to_vec();
    if c.is_zero() {
        return r;
    }
    let n = r.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &r[j + 1] * c;
            r[j] += t;
        }
    }
    r
}

/// `a(c·x)`.
pub(crate) fn scale_var(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    let mut p = BigInt::one();
    a.iter()
        .map(|x| {
            let y = x * &p;
            p *= c;
            y
        })
        .collect()
}

pub(crate) fn sign_variations(a: &[BigInt]) -> usize {
    let mut count = 0;
    let mut last = Sign::NoSign;
    for c in a {
        let s = c.sign();
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}
