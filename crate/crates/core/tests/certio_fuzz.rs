//! Single-bit corruptions of serialized certificates must never produce an accepted
//! certificate that is mathematically wrong. Every accepted mutant is re-checked by a
//! naive oracle that shares no code with the verifier beyond polynomial arithmetic.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use upos::certio::{deserialize, serialize, verify, CertificateEnvelope, NegativePoint, Payload};
use upos::interval::{certify_halfline, certify_interval, IntervalCertificate, Region};
use upos::karlin::KarlinDomain;
use upos::usos::{certify_positive_r, WsosCertificate};
use upos::{RatPoly, Rational, Witness};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn naive_sum(terms: &[(Rational, RatPoly)]) -> RatPoly {
    terms.iter().fold(RatPoly::zero(), |acc, (w, s)| &acc + &(&(s * s)).scale(w))
}

fn wsos_oracle(a: &RatPoly, c: &WsosCertificate) -> bool {
    if !c.scale.is_positive() || c.a_eps_d.is_negative() {
        return false;
    }
    let mut terms = vec![(c.a_eps_d.clone(), c.p.clone()), (c.a_eps_d.clone(), c.q.clone())];
    for o in &c.odd_weights {
        if o.w.is_negative() || !(o.sign == 1 || o.sign == -1) {
            return false;
        }
        let mut base = vec![Rational::zero(); o.k + 2];
        base[o.k] = q(o.sign.into(), 2);
        base[o.k + 1] = Rational::one();
        terms.push((o.w.clone(), RatPoly::new(base)));
    }
    for (k, w) in c.even_weights.iter().enumerate() {
        if w.is_negative() {
            return false;
        }
        terms.push((w.clone(), RatPoly::monomial(Rational::one(), k)));
    }
    let s2 = &c.cofactor * &c.cofactor;
    &s2 * &naive_sum(&terms) == a.scale(&c.scale)
}

fn interval_oracle(a: &RatPoly, c: &IntervalCertificate) -> bool {
    let mut total = RatPoly::zero();
    for g in &c.groups {
        if g.terms.iter().any(|(w, _)| w.is_negative()) {
            return false;
        }
        let m = &g.multiplier;
        let nonneg_on_region = match &c.region {
            Region::HalfLine => m.coeffs().iter().all(|c| !c.is_negative()) && m.deg0() <= 1,
            Region::Interval { a: lo, b: hi } => {
                m.deg0() <= 2 && [lo, hi, &((lo + hi) / q(2, 1))].iter().all(|t| !m.eval(t).is_negative())
            }
        };
        if !nonneg_on_region {
            return false;
        }
        total = &total + &(m * &naive_sum(&g.terms));
    }
    total == *a
}

fn witness_oracle(a: &RatPoly, w: &NegativePoint) -> bool {
    let t = &w.witness.t;
    let inside = match &w.domain {
        KarlinDomain::Real => true,
        KarlinDomain::HalfLine => !t.is_negative(),
        KarlinDomain::Interval { a, b } => a <= t && t <= b,
    };
    let v = a.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * t + c);
    inside && v.is_negative()
}

fn oracle(a: &RatPoly, env: &CertificateEnvelope) -> bool {
    match &env.payload {
        Payload::WsosR(c) => wsos_oracle(a, c),
        // The transformed certificate is checked too, so a mutant must satisfy both.
        Payload::WsosInterval(c) => interval_oracle(a, c),
        Payload::Witness(w) => witness_oracle(a, w),
        _ => unreachable!("not fuzzed"),
    }
}

fn fuzz(a: &RatPoly, env: &CertificateEnvelope, rounds: usize, seed: u64) {
    let bytes = serialize(env).into_bytes();
    assert!(verify(a, env).is_accept());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut parsed, mut accepted) = (0, 0);
    for _ in 0..rounds {
        let mut m = bytes.clone();
        let i = rng.random_range(0..m.len());
        m[i] ^= 1 << rng.random_range(0..8);
        let Ok(mutant) = deserialize(&m) else { continue };
        parsed += 1;
        if verify(a, &mutant).is_accept() {
            accepted += 1;
            assert!(oracle(a, &mutant), "accepted a wrong certificate:\n{}", String::from_utf8_lossy(&m));
        }
    }
    // Sanity: the harness must actually exercise both the parser and the verifier.
    assert!(parsed > 0 && accepted < rounds, "parsed {parsed}, accepted {accepted}");
}

#[test]
fn wsos_r_mutants() {
    for (i, a) in [RatPoly::from_i64s(&[1, 0, 1]), RatPoly::from_i64s(&[5, 3, 0, 0, 1]), RatPoly::from_i64s(&[2, -3, 0, 2, 1, 0, 1])].iter().enumerate() {
        let env = CertificateEnvelope::new(a, Payload::WsosR(certify_positive_r(a).unwrap()));
        fuzz(a, &env, 1500, i as u64);
    }
}

#[test]
fn interval_mutants() {
    let a = RatPoly::from_i64s(&[3, -2, 1]);
    let env = CertificateEnvelope::new(&a, Payload::WsosInterval(certify_interval(&a, &q(-1, 2), &q(2, 1)).unwrap()));
    fuzz(&a, &env, 1500, 10);
    let b = RatPoly::from_i64s(&[1, -1, 0, 1]);
    let env = CertificateEnvelope::new(&b, Payload::WsosInterval(certify_halfline(&b).unwrap()));
    fuzz(&b, &env, 1500, 11);
}

#[test]
fn witness_mutants() {
    let a = RatPoly::from_i64s(&[-1, 0, 1]);
    let w = Witness { t: Rational::zero(), value: -Rational::one() };
    let env = CertificateEnvelope::new(&a, Payload::Witness(NegativePoint { domain: KarlinDomain::Interval { a: q(-1, 2), b: q(1, 3) }, witness: w }));
    fuzz(&a, &env, 800, 20);
}
