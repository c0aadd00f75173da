use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{poly_hash, CertificateEnvelope, NegativePoint, Payload};
use crate::arith::{pow2, Rational};
use crate::interval::{transform_halfline, transform_to_line, IntervalCertificate, Region};
use crate::karlin::{alternates, roots_inside, KarlinDecomposition, KarlinDomain};
use crate::pertsos::{check_pert_cert, PertCheck, RejectReason};
use crate::roots::{isolate_real_roots, refine_real_root, RootInterval};
use crate::upoly::RatPoly;
use crate::usos::WsosCertificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// Lowest degree whose coefficient differs from `A`.
    CoefficientMismatch { k: usize },
    /// Position in the certificate's weight list.
    NegativeWeight { index: usize },
    HashMismatch,
    Malformed(String),
    Pert(RejectReason),
    /// The embedded certificate of the transformed polynomial failed.
    Line(Box<Rejection>),
    NotNegative,
    WitnessValue,
    OutsideDomain,
    Residual,
    Interlacing,
    PointMismatch { index: usize },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::CoefficientMismatch { k } => write!(f, "coefficient mismatch at k = {k}"),
            Rejection::NegativeWeight { index } => write!(f, "negative weight at index {index}"),
            Rejection::HashMismatch => write!(f, "meta.hash does not match the polynomial"),
            Rejection::Malformed(m) => write!(f, "malformed certificate: {m}"),
            Rejection::Pert(r) => write!(f, "perturbed check failed: {}", r.as_str()),
            Rejection::Line(r) => write!(f, "transformed certificate: {r}"),
            Rejection::NotNegative => write!(f, "witness value is not negative"),
            Rejection::WitnessValue => write!(f, "witness value differs from A(t)"),
            Rejection::OutsideDomain => write!(f, "a point lies outside the domain"),
            Rejection::Residual => write!(f, "reconstruction residual is not below 2^(-prec/2)"),
            Rejection::Interlacing => write!(f, "roots of P and Q do not interlace"),
            Rejection::PointMismatch { index } => write!(f, "Karlin point {index} is not within 2^(-prec) of its root"),
        }
    }
}

type Check = std::result::Result<(), Rejection>;

/// Exact check of `env` against `a`; the hash is compared last so that content
/// errors are reported in preference to a stale hash.
pub fn verify(a: &RatPoly, env: &CertificateEnvelope) -> Verdict {
    let r = match &env.payload {
        Payload::WsosR(c) => wsos_r(a, c),
        Payload::WsosInterval(c) => interval(a, c),
        Payload::PertSos(c) => match check_pert_cert(a, c) {
            PertCheck::Accept => Ok(()),
            PertCheck::Reject(r) => Err(Rejection::Pert(r)),
        },
        Payload::Karlin(k) => karlin(a, k),
        Payload::Witness(w) => witness(a, w),
    };
    match r.and_then(|()| if env.meta.hash == poly_hash(a) { Ok(()) } else { Err(Rejection::HashMismatch) }) {
        Ok(()) => Verdict::Accept,
        Err(e) => Verdict::Reject(e),
    }
}

fn same_coefficients(a: &RatPoly, b: &RatPoly) -> Check {
    let n = a.coeffs().len().max(b.coeffs().len());
    match (0..n).find(|&k| a.coeff(k) != b.coeff(k)) {
        Some(k) => Err(Rejection::CoefficientMismatch { k }),
        None => Ok(()),
    }
}

fn first_negative<'a>(ws: impl IntoIterator<Item = &'a Rational>) -> Check {
    match ws.into_iter().position(|w| w.is_negative()) {
        Some(index) => Err(Rejection::NegativeWeight { index }),
        None => Ok(()),
    }
}

/// Weights are listed as `P, Q, odd tail…, even tail…`.
fn wsos_r(a: &RatPoly, c: &WsosCertificate) -> Check {
    if !c.scale.is_positive() {
        return Err(Rejection::Malformed("scale must be positive".into()));
    }
    if c.odd_weights.iter().any(|o| o.sign != 1 && o.sign != -1) {
        return Err(Rejection::Malformed("odd-weight sign must be 1 or -1".into()));
    }
    first_negative([&c.a_eps_d, &c.a_eps_d].into_iter().chain(c.odd_weights.iter().map(|o| &o.w)).chain(&c.even_weights))?;
    // With nonnegative weights leading terms cannot cancel, so an oversized tail index
    // is already a mismatch; this also bounds the expansion.
    let top = a.deg0() / 2 + 1;
    if let Some(o) = c.odd_weights.iter().find(|o| !o.w.is_zero() && o.k >= top) {
        return Err(Rejection::CoefficientMismatch { k: 2 * (o.k + 1 + c.cofactor.deg0()) });
    }
    same_coefficients(a, &c.expand())
}

fn interval(a: &RatPoly, c: &IntervalCertificate) -> Check {
    let target = match &c.region {
        Region::Interval { a: lo, b: hi } => {
            if lo >= hi {
                return Err(Rejection::Malformed("empty interval".into()));
            }
            transform_to_line(a, lo, hi).map_err(|e| Rejection::Malformed(e.to_string()))?
        }
        Region::HalfLine => transform_halfline(a),
    };
    let allowed = match &c.region {
        Region::HalfLine => vec![RatPoly::one(), RatPoly::x()],
        Region::Interval { a: lo, b: hi } => {
            let xa = RatPoly::linear_root(lo);
            let bx = RatPoly::linear_root(hi).scale(&-Rational::one());
            vec![RatPoly::one(), &xa * &bx, xa, bx]
        }
    };
    if !c.groups.iter().all(|g| allowed.contains(&g.multiplier)) {
        return Err(Rejection::Malformed("multiplier is not a boundary product of the region".into()));
    }
    first_negative(c.groups.iter().flat_map(|g| g.terms.iter().map(|(w, _)| w)))?;
    let top = a.deg0();
    if c.groups.iter().any(|g| g.terms.iter().any(|(w, s)| !w.is_zero() && 2 * s.deg0() + g.multiplier.deg0() > top)) {
        return Err(Rejection::CoefficientMismatch { k: top + 1 });
    }
    same_coefficients(a, &c.expand())?;
    wsos_r(&target, &c.line).map_err(|e| Rejection::Line(Box::new(e)))
}

fn in_domain(t: &Rational, d: &KarlinDomain) -> bool {
    match d {
        KarlinDomain::Real => true,
        KarlinDomain::HalfLine => !t.is_negative(),
        KarlinDomain::Interval { a, b } => a <= t && t <= b,
    }
}

fn witness(a: &RatPoly, w: &NegativePoint) -> Check {
    if !in_domain(&w.witness.t, &w.domain) {
        return Err(Rejection::OutsideDomain);
    }
    let v = a.eval(&w.witness.t);
    if v != w.witness.value {
        return Err(Rejection::WitnessValue);
    }
    if !v.is_negative() {
        return Err(Rejection::NotNegative);
    }
    Ok(())
}

/// Isolating intervals of all roots of `p`, which must all be real, refined to `2^(−bits)`.
fn real_roots(p: &RatPoly, bits: u64) -> std::result::Result<Vec<RootInterval>, Rejection> {
    if p.is_zero() {
        return Ok(Vec::new());
    }
    let iso = isolate_real_roots(p);
    if iso.intervals.len() != p.deg0() {
        return Err(Rejection::Interlacing);
    }
    Ok(iso.intervals.iter().map(|iv| refine_real_root(p, iv, bits)).collect())
}

fn karlin(a: &RatPoly, k: &KarlinDecomposition) -> Check {
    if !k.w_p.is_positive() {
        return Err(Rejection::NegativeWeight { index: 0 });
    }
    if !k.w_q.is_positive() {
        return Err(Rejection::NegativeWeight { index: 1 });
    }
    let d = a.deg0();
    let m = d / 2;
    let one = RatPoly::one();
    let (lo, hi, mults, qdeg, p_first) = match &k.domain {
        KarlinDomain::Real => {
            if d % 2 == 1 {
                return Err(Rejection::Malformed("odd degree on the real line".into()));
            }
            (None, None, (one.clone(), one), m.checked_sub(1), true)
        }
        KarlinDomain::HalfLine => {
            let qd = if d % 2 == 0 { m.checked_sub(1) } else { Some(m) };
            (Some(Rational::zero()), None, (one, RatPoly::x()), qd, true)
        }
        KarlinDomain::Interval { a: lo, b: hi } => {
            if lo >= hi {
                return Err(Rejection::Malformed("empty interval".into()));
            }
            let xa = RatPoly::linear_root(lo);
            let bx = RatPoly::linear_root(hi).scale(&-Rational::one());
            if d % 2 == 0 {
                (Some(lo.clone()), Some(hi.clone()), (one, &xa * &bx), m.checked_sub(1), true)
            } else {
                (Some(lo.clone()), Some(hi.clone()), (xa, bx), Some(m), false)
            }
        }
    };
    if (k.m_p.clone(), k.m_q.clone()) != mults {
        return Err(Rejection::Malformed("multipliers do not match the domain".into()));
    }
    let q_ok = match qdeg {
        Some(n) => !k.q.is_zero() && k.q.deg0() == n,
        None => k.q.is_zero(),
    };
    if k.p.is_zero() || k.p.deg0() != m || !q_ok || k.karlin_x.len() != k.p.deg0() || k.karlin_y.len() != qdeg.unwrap_or(0) {
        return Err(Rejection::Malformed("degrees of P and Q do not match the domain".into()));
    }
    let xs = real_roots(&k.p, k.precision + 2)?;
    let ys = real_roots(&k.q, k.precision + 2)?;
    if !roots_inside(&k.p, lo.as_ref(), hi.as_ref()) || (!k.q.is_zero() && !roots_inside(&k.q, lo.as_ref(), hi.as_ref())) {
        return Err(Rejection::OutsideDomain);
    }
    let interlaced = if p_first { alternates(&xs, &ys) } else { alternates(&ys, &xs) };
    if !interlaced {
        return Err(Rejection::Interlacing);
    }
    let slack = pow2(-(k.precision as i64));
    let ivs = xs.iter().zip(&k.karlin_x).chain(ys.iter().zip(&k.karlin_y));
    for (index, (iv, pt)) in ivs.enumerate() {
        let pt = pt.to_rational();
        if pt < &iv.lo - &slack || pt > &iv.hi + &slack {
            return Err(Rejection::PointMismatch { index });
        }
    }
    if k.residual(a) >= pow2(-((k.precision / 2) as i64)) {
        return Err(Rejection::Residual);
    }
    Ok(())
}
