//! Sturm sequences via the subresultant pseudo-remainder sequence.
//!
//! Elements are stored as primitive-or-subresultant integer polynomials `Rᵢ`
//! together with a sign `sᵢ` such that `sᵢ·Rᵢ` is a positive multiple of the
//! i-th classical Sturm element (`A`, `A′`, then negated remainders).

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use super::int;
use super::RatPoly;
use crate::arith::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

/// A set of real numbers on which to count roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    /// The open interval `(lo, hi)`.
    Open(Bound, Bound),
}

#[derive(Clone, Debug)]
pub struct SturmChain {
    elems: Vec<(Vec<BigInt>, i8)>,
}

fn sign_i8(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl SturmChain {
    pub fn new(a: &RatPoly) -> Self {
        let u = a.primitive_int();
        if u.len() <= 1 {
            return SturmChain {
                elems: if u.is_empty() { vec![] } else { vec![(u, 1)] },
            };
        }
        let v = int::primitive(int::derivative(&u));
        SturmChain {
            elems: prs(u, v, true),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Elements as positive multiples of the classical signed-remainder sequence.
    pub fn sequence(&self) -> Vec<RatPoly> {
        self.elems
            .iter()
            .map(|(p, s)| {
                let q = RatPoly::from_ints(p.clone());
                if *s < 0 {
                    -q
                } else {
                    q
                }
            })
            .collect()
    }

    /// Monic `gcd(A, A′)`.
    pub fn gcd_with_derivative(&self) -> RatPoly {
        match self.elems.last() {
            Some((p, _)) => RatPoly::from_ints(p.clone()).make_monic(),
            None => RatPoly::zero(),
        }
    }

    pub fn is_square_free(&self) -> bool {
        self.elems.last().is_some_and(|(p, _)| p.len() == 1)
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, b: &Bound) -> usize {
        match b {
            Bound::NegInf => Self::variations(self.elems.iter().map(|(p, s)| {
                let lc = sign_i8(p.last().unwrap().sign()) * s;
                if (p.len() - 1) % 2 == 1 {
                    -lc
                } else {
                    lc
                }
            })),
            Bound::PosInf => {
                Self::variations(self.elems.iter().map(|(p, s)| sign_i8(p.last().unwrap().sign()) * s))
            }
            Bound::Finite(t) => Self::variations(
                self.elems
                    .iter()
                    .map(|(p, s)| sign_i8(int::sign_at(p, t.numer(), t.denom())) * s),
            ),
        }
    }

    /// Number of distinct real roots in the domain.
    pub fn count(&self, domain: &Domain) -> usize {
        if self.elems.len() <= 1 {
            return 0;
        }
        match domain {
            Domain::Real => self
                .variations_at(&Bound::NegInf)
                .saturating_sub(self.variations_at(&Bound::PosInf)),
            Domain::Open(lo, hi) => {
                let (vl, vh) = (self.variations_at(lo), self.variations_at(hi));
                // V(lo) − V(hi) counts (lo, hi]; drop a root sitting at hi.
                let at_hi = match hi {
                    Bound::Finite(t) => {
                        let p = &self.elems[0].0;
                        int::sign_at(p, t.numer(), t.denom()) == Sign::NoSign
                    }
                    _ => false,
                };
                vl.saturating_sub(vh).saturating_sub(at_hi as usize)
            }
        }
    }
}

/// Subresultant PRS of `(u, v)` with `deg u ≥ deg v`. With `track_signs`, each
/// element carries the sign relating it to the classical Sturm element.
pub(crate) fn prs(u: Vec<BigInt>, v: Vec<BigInt>, track_signs: bool) -> Vec<(Vec<BigInt>, i8)> {
    let mut out = vec![(u, 1i8), (v, 1i8)];
    if out[1].0.is_empty() {
        out.pop();
        return out;
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let n = out.len();
        let (u, su) = (&out[n - 2].0, out[n - 2].1);
        let v = &out[n - 1].0;
        if v.len() == 1 {
            break;
        }
        let delta = (u.len() - v.len()) as u32;
        let r = int::prem(u, v);
        if r.is_empty() {
            break;
        }
        let beta = &g * h.pow(delta);
        let lv = v.last().unwrap().clone();
        let next: Vec<BigInt> = r
            .into_iter()
            .map(|c| {
                debug_assert!((&c % &beta).is_zero());
                c / &beta
            })
            .collect();
        let s = if track_signs {
            let lv_sign = if (delta + 1) % 2 == 1 { sign_i8(lv.sign()) } else { 1 };
            -su * sign_i8(beta.sign()) * lv_sign
        } else {
            1
        };
        g = lv;
        h = if delta == 0 {
            h
        } else if delta == 1 {
            g.clone()
        } else {
            g.pow(delta) / h.pow(delta - 1)
        };
        out.push((next, s));
    }
    out
}

/// Convenience wrapper: builds the chain and counts.
pub fn sturm_count_real_roots(a: &RatPoly, domain: &Domain) -> usize {
    SturmChain::new(a).count(domain)
}
