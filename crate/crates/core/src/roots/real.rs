//! Real root isolation by Descartes' rule of signs with dyadic bisection.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{ceil_log2, floor_log2, pow2, Rational};
use crate::upoly::int;
use crate::upoly::RatPoly;

/// Isolating interval for one real root. `lo == hi` marks an exactly known root;
/// otherwise the root lies in the open interval and neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }
}

#[derive(Clone, Debug)]
pub struct RealRootIsolation {
    pub intervals: Vec<RootInterval>,
    /// One point below all roots, one between each consecutive pair, one above all.
    pub sample_points: Vec<Rational>,
    sqfree: Vec<BigInt>,
}

impl RealRootIsolation {
    /// Shrinks interval `i` until its width is at most `2^(−bits)`.
    pub fn refine(&self, i: usize, bits: u64) -> RootInterval {
        refine_int(&self.sqfree, &self.intervals[i], bits)
    }
}

fn sign_q(p: &[BigInt], t: &Rational) -> Sign {
    int::sign_at(p, t.numer(), t.denom())
}

fn bisect_once(p: &[BigInt], iv: &RootInterval) -> RootInterval {
    let m = iv.midpoint();
    let sm = sign_q(p, &m);
    if sm == Sign::NoSign {
        return RootInterval { lo: m.clone(), hi: m };
    }
    if sm == sign_q(p, &iv.lo) {
        RootInterval { lo: m, hi: iv.hi.clone() }
    } else {
        RootInterval { lo: iv.lo.clone(), hi: m }
    }
}

/// Newton step from the midpoint, rounded to a width-`2^(−k)` interval that is kept
/// only if it lies inside `iv` and `p` changes sign across it.
fn newton_once(p: &[BigInt], dp: &[BigInt], iv: &RootInterval, s_lo: Sign, k: u64) -> Option<RootInterval> {
    let m = iv.midpoint();
    let (a, b) = (m.numer(), m.denom());
    let h = int::eval_hom(p, a, b);
    let hd = int::eval_hom(dp, a, b);
    if hd.is_zero() {
        return None;
    }
    // m − p(m)/p′(m) = (a·hd − h)/(b·hd), floored to k + 1 fractional bits.
    let c = ((a * &hd - &h) << (k + 1)).div_floor(&(b * &hd));
    let half = BigInt::one() << (k + 1);
    let lo = Rational::new(&c - 1, half.clone());
    let hi = Rational::new(c + 1, half);
    if lo <= iv.lo || hi >= iv.hi {
        return None;
    }
    let (sl, sh) = (sign_q(p, &lo), sign_q(p, &hi));
    if sl == Sign::NoSign {
        return Some(RootInterval { lo: lo.clone(), hi: lo });
    }
    if sh == Sign::NoSign {
        return Some(RootInterval { lo: hi.clone(), hi });
    }
    (sl == s_lo && sh != s_lo).then_some(RootInterval { lo, hi })
}

fn refine_int(p: &[BigInt], iv: &RootInterval, bits: u64) -> RootInterval {
    let target = pow2(-(bits as i64));
    let dp = int::derivative(p);
    let mut cur = iv.clone();
    let mut s_lo = sign_q(p, &cur.lo);
    while !cur.is_exact() && cur.width() > target {
        // Aim at the square of the current width; bisect whenever the step does not certify.
        let e = (-floor_log2(&cur.width())).max(0) as u64;
        let k = (2 * e + 2).min(bits);
        match (s_lo != Sign::NoSign).then(|| newton_once(p, &dp, &cur, s_lo, k)).flatten() {
            Some(next) => cur = next,
            None => {
                cur = bisect_once(p, &cur);
                s_lo = sign_q(p, &cur.lo);
            }
        }
    }
    cur
}

/// Bisects an isolating interval of a square-free `a` down to width `2^(−bits)`.
/// The interval must come from an isolation of `a` (a sign change across it, or exact).
pub fn refine_real_root(a: &RatPoly, iv: &RootInterval, bits: u64) -> RootInterval {
    refine_int(&a.primitive_int(), iv, bits)
}

/// Bound on the number of roots in `(0, 1)`: sign variations of `(x+1)^n q(1/(x+1))`.
fn descartes(q: &[BigInt]) -> usize {
    let rev: Vec<BigInt> = q.iter().rev().cloned().collect();
    int::sign_variations(&int::taylor_shift(&rev, &BigInt::one()))
}

fn square_free_part(a: &RatPoly) -> RatPoly {
    if a.is_constant() || int::squarefree_mod_p(&a.primitive_int()) {
        a.clone()
    } else {
        a.exact_div(&a.gcd(&a.derivative()))
    }
}

/// Descartes bisection over `(−B, B)` for a square-free non-constant `sf`;
/// stops at the first root when `first_only`.
fn vca(sf: &RatPoly, first_only: bool) -> (Vec<RootInterval>, BigInt) {
    let p = sf.primitive_int();
    let n = p.len() - 1;
    let k = ceil_log2(&sf.root_magnitude_bound()).max(0) as u64;
    let big = BigInt::one() << k;
    // u ∈ (0, 1) ↦ x = B(2u − 1).
    let q0 = int::scale_var(&int::taylor_shift(&int::scale_var(&p, &big), &-BigInt::one()), &BigInt::from(2));
    let to_x = |c: &BigInt, lvl: u64| -> Rational {
        let u = Rational::new(c.clone(), BigInt::one() << lvl);
        Rational::from_integer(big.clone()) * (u * Rational::from_integer(2.into()) - Rational::one())
    };
    let mut found = Vec::new();
    let mut stack = vec![(int::primitive(q0), BigInt::zero(), 0u64)];
    while let Some((q, c, lvl)) = stack.pop() {
        if first_only && !found.is_empty() {
            break;
        }
        match descartes(&q) {
            0 => {}
            1 => found.push(RootInterval {
                lo: to_x(&c, lvl),
                hi: to_x(&(&c + 1), lvl),
            }),
            _ => {
                let left: Vec<BigInt> = q.iter().enumerate().map(|(i, x)| x << (n - i)).collect();
                let right = int::taylor_shift(&left, &BigInt::one());
                let c2 = &c << 1;
                if right[0].is_zero() {
                    let m = to_x(&(&c2 + 1), lvl + 1);
                    found.push(RootInterval { lo: m.clone(), hi: m });
                }
                // Bisection only introduces powers of two; a full content gcd costs more than it saves.
                stack.push((int::strip_pow2(right), &c2 + 1, lvl + 1));
                stack.push((int::strip_pow2(left), c2, lvl + 1));
            }
        }
    }
    (found, big)
}

/// Whether `a` has a real root, by Descartes bisection on its square-free part.
pub fn has_real_root(a: &RatPoly) -> bool {
    let sf = square_free_part(a);
    !sf.is_constant() && !vca(&sf, true).0.is_empty()
}

/// Intervals of the real roots of the square-free part of `a`, sorted.
pub fn isolate_real_roots(a: &RatPoly) -> RealRootIsolation {
    let sf = square_free_part(a);
    if sf.is_constant() {
        return RealRootIsolation {
            intervals: Vec::new(),
            sample_points: vec![Rational::zero()],
            sqfree: sf.primitive_int(),
        };
    }
    let (mut found, big) = vca(&sf, false);
    found.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
    // Dividing out the exactly known roots leaves a sign change across every open interval.
    let mut defl = sf;
    for iv in found.iter().filter(|iv| iv.is_exact()) {
        defl = defl.exact_div(&RatPoly::linear_root(&iv.lo));
    }
    let p = defl.primitive_int();
    // Open intervals must not touch an exact neighbour.
    for i in 0..found.len() {
        if found[i].is_exact() {
            continue;
        }
        let touches = |iv: &RootInterval, f: &[RootInterval]| {
            (i > 0 && f[i - 1].is_exact() && f[i - 1].hi == iv.lo)
                || (i + 1 < f.len() && f[i + 1].is_exact() && f[i + 1].lo == iv.hi)
        };
        while !found[i].is_exact() && touches(&found[i], &found) {
            found[i] = bisect_once(&p, &found[i]);
        }
    }
    let lo_end = -Rational::from_integer(big.clone());
    let hi_end = Rational::from_integer(big);
    let mut samples = Vec::with_capacity(found.len() + 1);
    let mut left = lo_end;
    for iv in found.iter().chain(std::iter::once(&RootInterval {
        lo: hi_end.clone(),
        hi: hi_end.clone(),
    })) {
        let s = if left == iv.lo {
            left.clone()
        } else {
            (&left + &iv.lo) / Rational::from_integer(2.into())
        };
        samples.push(s);
        left = iv.hi.clone();
    }
    RealRootIsolation {
        intervals: found,
        sample_points: samples,
        sqfree: p,
    }
}

/// Every point of `a` lies strictly left of every point of `b`.
pub(crate) fn strictly_before(a: &RootInterval, b: &RootInterval) -> bool {
    a.hi < b.lo || (a.hi == b.lo && !(a.is_exact() && b.is_exact()))
}
