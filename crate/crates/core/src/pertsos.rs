//! Perturbed two-square certificates.
//!
//! `B = lc·(P² + Q²)` is nonnegative by construction; if `‖A − B‖∞ < 2^(−b)`
//! with `b > 4dτ + 16d·lg d` then `A` is nonnegative as well. Thresholds are
//! computed on the integer multiple `D·A` with `D` the common denominator of `A`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result, Witness};
use crate::fanin::split_pq;
use crate::roots::{has_real_root, RootBudget, RootSolver};
use crate::upoly::{int, lg, RatPoly};
use crate::usos::find_witness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PertCertificate {
    pub p: RatPoly,
    pub q: RatPoly,
    pub lc: Rational,
    pub b_exp: u64,
    pub lambda: u64,
    /// `(U, V)` with `U·A + V·A′ = 1`, proving square-freeness.
    pub squarefree_witness: Option<(RatPoly, RatPoly)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    ThresholdTooSmall,
    ResidualTooLarge,
    DegreeMismatch,
    NegativeWeight,
    BadSquarefreeWitness,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::ThresholdTooSmall => "threshold-too-small",
            RejectReason::ResidualTooLarge => "residual-too-large",
            RejectReason::DegreeMismatch => "degree-mismatch",
            RejectReason::NegativeWeight => "negative-weight",
            RejectReason::BadSquarefreeWitness => "bad-squarefree-witness",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PertCheck {
    Accept,
    Reject(RejectReason),
}

/// `4dτ + 16d·lg d + 1`, the least admissible exponent.
pub fn pert_threshold(d: usize, tau: u64) -> Result<u64> {
    if d % 2 == 1 {
        return Err(Error::Unsupported("perturbed certificates need even degree".into()));
    }
    let dd = d as u64;
    Ok(4 * dd * tau + 16 * dd * lg(d) + 1)
}

/// `9dτ + 60d·lg d`.
pub fn pert_lambda(d: usize, tau: u64) -> u64 {
    let dd = d as u64;
    9 * dd * tau + 60 * dd * lg(d)
}

/// `(D·A, D)` with `D·A` primitive-free integer-valued; τ is measured on `D·A`.
fn integer_multiple(a: &RatPoly) -> (RatPoly, Rational) {
    let (_, den) = a.integer_parts();
    let d = Rational::from_integer(den);
    (a.scale(&d), d)
}

/// `(d, τ)` of the integer multiple of `A`.
pub fn integer_size(a: &RatPoly) -> (usize, u64) {
    let (ai, _) = integer_multiple(a);
    (ai.deg0(), ai.tau())
}

/// `(U, V)` with `U·A + V·A′ = 1`, or `None` when `gcd(A, A′) ≠ 1`.
pub fn bezout_cofactors(a: &RatPoly) -> Option<(RatPoly, RatPoly)> {
    if a.is_constant() {
        return (!a.is_zero()).then(|| (RatPoly::constant(a.lc().recip()), RatPoly::zero()));
    }
    let ai = a.primitive_int();
    match subresultant_cofactors(&ai) {
        Some(Some((s, t, r))) => {
            // ai = c·A with c = lc(ai)/lc(A), so (s·c/r)·A + (t·c/r)·A′ = 1.
            let f = Rational::new(ai[ai.len() - 1].clone(), r) / a.lc();
            Some((RatPoly::from_ints(s).scale(&f), RatPoly::from_ints(t).scale(&f)))
        }
        Some(None) => None,
        None => rational_cofactors(a),
    }
}

/// Subresultant PRS of `(A, A′)` over ℤ carrying cofactors: `Some(Some((s, t, r)))` with
/// `s·A + t·A′ = r` for a nonzero integer `r`, `Some(None)` if `A` is not square-free,
/// and `None` if a division was inexact (not expected; the caller falls back).
fn subresultant_cofactors(ai: &[BigInt]) -> Option<Option<(Vec<BigInt>, Vec<BigInt>, BigInt)>> {
    let one = || vec![BigInt::one()];
    let (mut a, mut b) = (ai.to_vec(), int::derivative(ai));
    let (mut sa, mut ta, mut sb, mut tb) = (one(), Vec::new(), Vec::new(), one());
    let (mut g, mut h) = (BigInt::one(), BigInt::one());
    loop {
        if b.len() == 1 {
            return Some(Some((sb, tb, b[0].clone())));
        }
        let delta = (a.len() - b.len()) as u32;
        let (q, r) = int::pdiv(&a, &b);
        let k = b[b.len() - 1].pow(delta + 1);
        let sr = int::scaled_sub(&k, &sa, &int::mul(&q, &sb));
        let tr = int::scaled_sub(&k, &ta, &int::mul(&q, &tb));
        if r.is_empty() {
            return Some(None);
        }
        if r.len() == 1 {
            // Guards the exactness of every division above.
            let lhs = int::add(&int::mul(&sr, ai), &int::mul(&tr, &int::derivative(ai)));
            return (lhs == r).then(|| Some((sr, tr, r[0].clone())));
        }
        let div = &g * h.pow(delta);
        (a, sa, ta) = (b, sb, tb);
        b = int::div_exact(&r, &div)?;
        sb = int::div_exact(&sr, &div)?;
        tb = int::div_exact(&tr, &div)?;
        g = a[a.len() - 1].clone();
        // h ← g^δ / h^(δ−1)
        let (hq, hr) = g.pow(delta).div_rem(&h.pow(delta - 1));
        if !hr.is_zero() {
            return None;
        }
        h = hq;
    }
}

fn rational_cofactors(a: &RatPoly) -> Option<(RatPoly, RatPoly)> {
    let (mut r0, mut r1) = (a.clone(), a.derivative());
    let (mut u0, mut u1) = (RatPoly::one(), RatPoly::zero());
    let (mut v0, mut v1) = (RatPoly::zero(), RatPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let u2 = &u0 - &(&q * &u1);
        let v2 = &v0 - &(&q * &v1);
        (r0, r1) = (r1, r);
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
    if !r0.is_constant() || r0.is_zero() {
        return None;
    }
    let inv = r0.lc().recip();
    Some((u0.scale(&inv), v0.scale(&inv)))
}

/// Accepts iff every weight is nonnegative, `b_exp` clears the threshold recomputed
/// from `A`, and `‖A − Σ w·s²‖∞ < 2^(−b_exp)`.
pub fn check_weighted(a: &RatPoly, terms: &[(Rational, RatPoly)], b_exp: u64) -> PertCheck {
    let (ai, den) = integer_multiple(a);
    let d = ai.deg0();
    let Ok(threshold) = pert_threshold(d, ai.tau()) else {
        return PertCheck::Reject(RejectReason::DegreeMismatch);
    };
    if terms.iter().any(|(w, _)| w.is_negative()) {
        return PertCheck::Reject(RejectReason::NegativeWeight);
    }
    if b_exp < threshold {
        return PertCheck::Reject(RejectReason::ThresholdTooSmall);
    }
    // ‖D·A − D·N/L‖∞ < 2^(−b) ⇔ max |L·(D·A)ₖ − D·Nₖ|·2^b < L, all in integers.
    let (n, l) = RatPoly::weighted_square_sum_int(terms.iter().map(|(w, s)| (w, s)));
    let (ai_num, ai_den) = ai.integer_parts();
    let (dn, dd) = (den.numer(), den.denom());
    let len = ai_num.len().max(n.len());
    let zero = BigInt::zero();
    let bound = &l * &ai_den * dd;
    let too_large = (0..len).any(|k| {
        let lhs = ai_num.get(k).unwrap_or(&zero) * &l * dd;
        let rhs = n.get(k).unwrap_or(&zero) * dn * &ai_den;
        ((lhs - rhs).abs() << b_exp) >= bound
    });
    if too_large {
        return PertCheck::Reject(RejectReason::ResidualTooLarge);
    }
    PertCheck::Accept
}

pub fn check_pert_cert(a: &RatPoly, cert: &PertCertificate) -> PertCheck {
    if let Some((u, v)) = &cert.squarefree_witness {
        if &(u * a) + &(v * &a.derivative()) != RatPoly::one() {
            return PertCheck::Reject(RejectReason::BadSquarefreeWitness);
        }
    }
    let terms = [(cert.lc.clone(), cert.p.clone()), (cert.lc.clone(), cert.q.clone())];
    check_weighted(a, &terms, cert.b_exp)
}

/// Two-square certificate from root approximations at `λ = 9dτ + 60d·lg d` bits
/// (doubled only if the residual check fails).
pub fn build_pert_cert(a: &RatPoly, with_squarefree_witness: bool) -> Result<PertCertificate> {
    let (ai, _) = integer_multiple(a);
    let d = ai.deg0();
    let tau = ai.tau();
    let b_exp = pert_threshold(d, tau)?;
    if a.is_zero() || a.lc().is_negative() || has_real_root(a) {
        return Err(match find_witness(a) {
            Some(t) => Error::NotPositive(Witness { value: a.eval(&t), t }),
            None if a.is_zero() => Error::Precondition("zero polynomial".into()),
            None => Error::NotSquareFree,
        });
    }
    if !a.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    let solver = RootSolver::new(RootBudget::from_env());
    let mut refiner = solver.start(a, 0)?;
    let mut lambda = pert_lambda(d, tau);
    loop {
        let roots = refiner.refine(lambda)?;
        let pq = split_pq(&roots.pairs, &a.lc())?;
        let cert = PertCertificate {
            p: pq.p,
            q: pq.q,
            lc: a.lc(),
            b_exp,
            lambda: roots.kappa,
            squarefree_witness: None,
        };
        if check_pert_cert(a, &cert) == PertCheck::Accept {
            let squarefree_witness = if with_squarefree_witness { bezout_cofactors(a) } else { None };
            return Ok(PertCertificate { squarefree_witness, ..cert });
        }
        lambda *= 2;
    }
}
