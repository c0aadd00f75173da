//! Certificate envelopes: canonical JSON and exact verification.
//!
//! A document is `{"kind", "meta", "payload"}`. Rationals are strings `"n"` or
//! `"n/d"` in lowest terms, dyadics are strings `"m*2^-e"`, polynomials are arrays
//! of coefficients by increasing degree with no trailing zero. The only JSON numbers
//! are nonnegative integers (exponents, precisions, indices, signs).

mod json;
mod verify;

pub use json::{deserialize, serialize};
pub use verify::{verify, Rejection, Verdict};

use sha2::{Digest, Sha256};

use crate::arith::format_rational;
use crate::error::Witness;
use crate::interval::IntervalCertificate;
use crate::karlin::{KarlinDecomposition, KarlinDomain};
use crate::pertsos::PertCertificate;
use crate::upoly::RatPoly;
use crate::usos::WsosCertificate;

pub const TOOL: &str = concat!("upos ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    WsosR,
    WsosInterval,
    PertSos,
    Karlin,
    Witness,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::WsosR => "wsos-R",
            Kind::WsosInterval => "wsos-interval",
            Kind::PertSos => "pert-sos",
            Kind::Karlin => "karlin",
            Kind::Witness => "witness",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        [Kind::WsosR, Kind::WsosInterval, Kind::PertSos, Kind::Karlin, Kind::Witness].into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meta {
    /// `sha256:` followed by the hex digest of the canonical coefficient array of `A`.
    pub hash: String,
    pub tool: String,
    pub b_exp: Option<u64>,
    pub kappa: Option<u64>,
    pub prec: Option<u64>,
}

/// A point of the domain where `A` is negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativePoint {
    pub domain: KarlinDomain,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    WsosR(WsosCertificate),
    WsosInterval(IntervalCertificate),
    PertSos(PertCertificate),
    Karlin(KarlinDecomposition),
    Witness(NegativePoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEnvelope {
    pub meta: Meta,
    pub payload: Payload,
}

impl CertificateEnvelope {
    /// Wraps `payload` for `a`, filling the hash and the parameters the payload records.
    pub fn new(a: &RatPoly, payload: Payload) -> Self {
        let (b_exp, kappa, prec) = match &payload {
            Payload::WsosR(c) => (Some(c.budget.b_exp), Some(c.budget.kappa), None),
            Payload::WsosInterval(c) => (Some(c.line.budget.b_exp), Some(c.line.budget.kappa), None),
            Payload::PertSos(c) => (Some(c.b_exp), Some(c.lambda), None),
            Payload::Karlin(k) => (None, None, Some(k.precision)),
            Payload::Witness(_) => (None, None, None),
        };
        CertificateEnvelope {
            meta: Meta {
                hash: poly_hash(a),
                tool: TOOL.to_string(),
                b_exp,
                kappa,
                prec,
            },
            payload,
        }
    }

    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::WsosR(_) => Kind::WsosR,
            Payload::WsosInterval(_) => Kind::WsosInterval,
            Payload::PertSos(_) => Kind::PertSos,
            Payload::Karlin(_) => Kind::Karlin,
            Payload::Witness(_) => Kind::Witness,
        }
    }
}

/// Compact JSON array of the coefficient strings, e.g. `["1","0","1"]` for `x² + 1`.
pub fn canonical_poly(a: &RatPoly) -> String {
    let parts: Vec<String> = a.coeffs().iter().map(|c| format!("\"{}\"", format_rational(c))).collect();
    format!("[{}]", parts.join(","))
}

pub fn poly_hash(a: &RatPoly) -> String {
    let digest = Sha256::digest(canonical_poly(a).as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use crate::error::Error;
    use crate::interval::certify_interval;
    use crate::karlin::decompose_r;
    use crate::pertsos::build_pert_cert;
    use crate::usos::certify_positive_r;
    use num_traits::Zero;
    use serde_json::Value;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    fn wsos_env(a: &RatPoly) -> CertificateEnvelope {
        CertificateEnvelope::new(a, Payload::WsosR(certify_positive_r(a).unwrap()))
    }

    fn round_trip(env: &CertificateEnvelope) {
        let s = serialize(env);
        let back = deserialize(s.as_bytes()).unwrap();
        assert_eq!(&back, env);
        assert_eq!(serialize(&back), s);
    }

    fn pointer_of(doc: &Value) -> String {
        match deserialize(serde_json::to_string(doc).unwrap().as_bytes()) {
            Err(Error::CertParse { pointer, .. }) => pointer,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn verify_examples() {
        let a = p(&[1, 0, 1]);
        let env = wsos_env(&a);
        assert_eq!(verify(&a, &env), Verdict::Accept);

        let mut neg = env.clone();
        let Payload::WsosR(c) = &mut neg.payload else { unreachable!() };
        let i = c.even_weights.iter().position(|w| !w.is_zero()).unwrap();
        c.even_weights[i] = -c.even_weights[i].clone();
        let index = 2 + c.odd_weights.len() + i;
        assert_eq!(verify(&a, &neg), Verdict::Reject(Rejection::NegativeWeight { index }));

        assert_eq!(verify(&p(&[2, 0, 1]), &env), Verdict::Reject(Rejection::CoefficientMismatch { k: 0 }));
    }

    #[test]
    fn stale_hash_is_rejected() {
        let a = p(&[1, 0, 1]);
        let mut env = wsos_env(&a);
        env.meta.hash = poly_hash(&p(&[2, 0, 1]));
        assert_eq!(verify(&a, &env), Verdict::Reject(Rejection::HashMismatch));
    }

    #[test]
    fn round_trips() {
        let a = p(&[1, 0, 1]);
        round_trip(&wsos_env(&a));
        round_trip(&wsos_env(&p(&[5, -2, 3, 0, 1])));
        let iv = certify_interval(&p(&[0, 1]), &rat(1), &rat(2)).unwrap();
        round_trip(&CertificateEnvelope::new(&p(&[0, 1]), Payload::WsosInterval(iv)));
        round_trip(&CertificateEnvelope::new(&a, Payload::PertSos(build_pert_cert(&a, true).unwrap())));
        let q = p(&[1, 0, 0, 0, 1]);
        round_trip(&CertificateEnvelope::new(&q, Payload::Karlin(decompose_r(&q, 60).unwrap())));
        let w = NegativePoint {
            domain: KarlinDomain::Interval { a: ratio(-1, 3), b: rat(2) },
            witness: Witness { t: rat(0), value: rat(-1) },
        };
        round_trip(&CertificateEnvelope::new(&p(&[-1, 0, 1]), Payload::Witness(w)));
    }

    #[test]
    fn parse_errors_carry_pointers() {
        let env = wsos_env(&p(&[1, 0, 1]));
        let doc: Value = serde_json::from_str(&serialize(&env)).unwrap();

        let mut bad = doc.clone();
        bad["payload"]["even_weights"][0] = Value::String("1/0".into());
        assert_eq!(pointer_of(&bad), "/payload/even_weights/0");

        let mut bad = doc.clone();
        bad["kind"] = Value::String("sos-magic".into());
        assert_eq!(pointer_of(&bad), "/kind");

        let mut bad = doc.clone();
        bad["payload"]["p"][0] = Value::String("2/4".into());
        assert_eq!(pointer_of(&bad), "/payload/p/0");

        let mut bad = doc.clone();
        bad["payload"]["odd_weights"] = serde_json::json!([{"w": "1", "sign": 0, "k": 0}]);
        assert_eq!(pointer_of(&bad), "/payload/odd_weights/0/sign");

        let mut bad = doc.clone();
        bad["payload"]["budget"]["kappa"] = serde_json::json!(1.5);
        assert_eq!(pointer_of(&bad), "/payload/budget/kappa");

        let mut bad = doc.clone();
        bad["meta"].as_object_mut().unwrap().remove("tool");
        assert_eq!(pointer_of(&bad), "/meta/tool");

        let mut bad = doc;
        bad["payload"]["extra"] = Value::Null;
        assert_eq!(pointer_of(&bad), "/payload/extra");

        assert!(matches!(deserialize(b"{\"kind\": "), Err(Error::CertParse { .. })));
    }

    #[test]
    fn no_json_floats() {
        let q = p(&[1, 0, 0, 0, 1]);
        let s = serialize(&CertificateEnvelope::new(&q, Payload::Karlin(decompose_r(&q, 60).unwrap())));
        let v: Value = serde_json::from_str(&s).unwrap();
        fn walk(v: &Value) {
            match v {
                Value::Number(n) => assert!(n.is_u64() || n.is_i64(), "float {n}"),
                Value::Array(xs) => xs.iter().for_each(walk),
                Value::Object(m) => m.values().for_each(walk),
                _ => {}
            }
        }
        walk(&v);
    }

    #[test]
    fn witness_checks() {
        let a = p(&[-1, 0, 1]);
        let mk = |domain, t, value| {
            CertificateEnvelope::new(&a, Payload::Witness(NegativePoint { domain, witness: Witness { t, value } }))
        };
        assert!(verify(&a, &mk(KarlinDomain::Real, rat(0), rat(-1))).is_accept());
        assert_eq!(verify(&a, &mk(KarlinDomain::Real, rat(0), rat(-2))), Verdict::Reject(Rejection::WitnessValue));
        assert_eq!(verify(&a, &mk(KarlinDomain::Real, rat(2), rat(3))), Verdict::Reject(Rejection::NotNegative));
        let dom = KarlinDomain::Interval { a: rat(1), b: rat(2) };
        assert_eq!(verify(&a, &mk(dom, rat(0), rat(-1))), Verdict::Reject(Rejection::OutsideDomain));
    }

    #[test]
    fn karlin_checks() {
        let a = p(&[1, 0, 0, 0, 1]);
        let env = CertificateEnvelope::new(&a, Payload::Karlin(decompose_r(&a, 60).unwrap()));
        assert_eq!(verify(&a, &env), Verdict::Accept);
        let mut moved = env.clone();
        let Payload::Karlin(k) = &mut moved.payload else { unreachable!() };
        k.karlin_y[0] = crate::arith::Dyadic::from_int(1);
        assert_eq!(verify(&a, &moved), Verdict::Reject(Rejection::PointMismatch { index: 2 }));
        assert!(!verify(&p(&[2, 0, 0, 0, 1]), &env).is_accept());
    }

    #[test]
    fn interval_and_pert_checks() {
        let x = p(&[0, 1]);
        let iv = certify_interval(&x, &rat(1), &rat(2)).unwrap();
        let env = CertificateEnvelope::new(&x, Payload::WsosInterval(iv));
        assert!(verify(&x, &env).is_accept());
        assert_eq!(verify(&p(&[1, 1]), &env), Verdict::Reject(Rejection::CoefficientMismatch { k: 0 }));

        let a = p(&[1, 0, 1]);
        let env = CertificateEnvelope::new(&a, Payload::PertSos(build_pert_cert(&a, false).unwrap()));
        assert!(verify(&a, &env).is_accept());
        assert!(matches!(verify(&p(&[3, 0, 1]), &env), Verdict::Reject(Rejection::Pert(_))));
    }

    #[test]
    fn hash_is_of_the_canonical_array() {
        assert_eq!(canonical_poly(&RatPoly::new(vec![ratio(1, 2), rat(0), rat(-3)])), "[\"1/2\",\"0\",\"-3\"]");
        assert_eq!(poly_hash(&p(&[1, 0, 1])), poly_hash(&RatPoly::new(vec![rat(1), rat(0), rat(1), rat(0)])));
        assert_ne!(poly_hash(&p(&[1, 0, 1])), poly_hash(&p(&[1, 0, 2])));
    }
}
