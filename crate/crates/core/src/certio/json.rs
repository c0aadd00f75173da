use serde_json::{Map, Value};

use super::{CertificateEnvelope, Kind, Meta, NegativePoint, Payload};
use crate::arith::{format_rational, parse_rational, Dyadic, Rational};
use crate::error::{Error, Result, Witness};
use crate::interval::{IntervalCertificate, Parity, Region, SquareGroup};
use crate::karlin::{KarlinDecomposition, KarlinDomain};
use crate::pertsos::PertCertificate;
use crate::upoly::RatPoly;
use crate::usos::{OddWeight, PrecisionBudget, WsosCertificate};

/// Pretty-printed canonical JSON with sorted keys and a trailing newline.
pub fn serialize(env: &CertificateEnvelope) -> String {
    let v = obj([
        ("kind", Value::String(env.kind().as_str().into())),
        ("meta", meta(&env.meta)),
        ("payload", payload(&env.payload)),
    ]);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn deserialize(bytes: &[u8]) -> Result<CertificateEnvelope> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::CertParse {
        pointer: String::new(),
        message: e.to_string(),
    })?;
    let root = At::root(&v);
    root.fields(&["kind", "meta", "payload"])?;
    let kind_at = root.get("kind");
    let kind = Kind::parse(kind_at.str()?).map_or_else(|| kind_at.fail("unknown certificate kind"), Ok)?;
    let meta = read_meta(&root.get("meta"))?;
    let p = root.get("payload");
    let payload = match kind {
        Kind::WsosR => Payload::WsosR(read_wsos(&p)?),
        Kind::WsosInterval => Payload::WsosInterval(read_interval(&p)?),
        Kind::PertSos => Payload::PertSos(read_pert(&p)?),
        Kind::Karlin => Payload::Karlin(read_karlin(&p)?),
        Kind::Witness => Payload::Witness(read_witness(&p)?),
    };
    Ok(CertificateEnvelope { meta, payload })
}

fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<String, Value>>())
}

fn rat(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn poly(p: &RatPoly) -> Value {
    Value::Array(p.coeffs().iter().map(rat).collect())
}

fn num(n: u64) -> Value {
    Value::from(n)
}

fn opt_num(n: Option<u64>) -> Value {
    n.map_or(Value::Null, num)
}

fn meta(m: &Meta) -> Value {
    obj([
        ("hash", Value::String(m.hash.clone())),
        ("tool", Value::String(m.tool.clone())),
        ("b_exp", opt_num(m.b_exp)),
        ("kappa", opt_num(m.kappa)),
        ("prec", opt_num(m.prec)),
    ])
}

fn payload(p: &Payload) -> Value {
    match p {
        Payload::WsosR(c) => wsos(c),
        Payload::WsosInterval(c) => interval(c),
        Payload::PertSos(c) => pert(c),
        Payload::Karlin(k) => karlin(k),
        Payload::Witness(w) => obj([("domain", domain(&w.domain)), ("t", rat(&w.witness.t)), ("value", rat(&w.witness.value))]),
    }
}

fn domain(d: &KarlinDomain) -> Value {
    match d {
        KarlinDomain::Real => obj([("type", Value::String("R".into()))]),
        KarlinDomain::HalfLine => obj([("type", Value::String("halfline".into()))]),
        KarlinDomain::Interval { a, b } => obj([("type", Value::String("interval".into())), ("a", rat(a)), ("b", rat(b))]),
    }
}

fn wsos(c: &WsosCertificate) -> Value {
    let odd = c
        .odd_weights
        .iter()
        .map(|o| obj([("w", rat(&o.w)), ("sign", Value::from(o.sign)), ("k", num(o.k as u64))]))
        .collect();
    let b = &c.budget;
    obj([
        ("scale", rat(&c.scale)),
        ("cofactor", poly(&c.cofactor)),
        ("a_eps_d", rat(&c.a_eps_d)),
        ("epsilon", rat(&c.epsilon)),
        ("p", poly(&c.p)),
        ("q", poly(&c.q)),
        ("odd_weights", Value::Array(odd)),
        ("even_weights", Value::Array(c.even_weights.iter().map(rat).collect())),
        (
            "budget",
            obj([
                ("d", num(b.d as u64)),
                ("tau", num(b.tau)),
                ("b_exp", num(b.b_exp)),
                ("kappa", num(b.kappa)),
                ("b_capped", Value::Bool(b.b_capped)),
                ("kappa_capped", Value::Bool(b.kappa_capped)),
            ]),
        ),
    ])
}

fn interval(c: &IntervalCertificate) -> Value {
    let region = match &c.region {
        Region::Interval { a, b } => domain(&KarlinDomain::Interval { a: a.clone(), b: b.clone() }),
        Region::HalfLine => domain(&KarlinDomain::HalfLine),
    };
    let parity = match c.parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    let groups = c
        .groups
        .iter()
        .map(|g| {
            let terms = g.terms.iter().map(|(w, s)| obj([("w", rat(w)), ("s", poly(s))])).collect();
            obj([("multiplier", poly(&g.multiplier)), ("terms", Value::Array(terms))])
        })
        .collect();
    obj([
        ("region", region),
        ("parity", Value::String(parity.into())),
        ("groups", Value::Array(groups)),
        ("line", wsos(&c.line)),
    ])
}

fn pert(c: &PertCertificate) -> Value {
    let sw = c.squarefree_witness.as_ref().map_or(Value::Null, |(u, v)| obj([("u", poly(u)), ("v", poly(v))]));
    obj([
        ("p", poly(&c.p)),
        ("q", poly(&c.q)),
        ("lc", rat(&c.lc)),
        ("b_exp", num(c.b_exp)),
        ("lambda", num(c.lambda)),
        ("squarefree_witness", sw),
    ])
}

fn karlin(k: &KarlinDecomposition) -> Value {
    let pts = |v: &[Dyadic]| Value::Array(v.iter().map(|d| Value::String(d.to_string())).collect());
    obj([
        ("domain", domain(&k.domain)),
        ("p", poly(&k.p)),
        ("q", poly(&k.q)),
        ("w_p", rat(&k.w_p)),
        ("w_q", rat(&k.w_q)),
        ("m_p", poly(&k.m_p)),
        ("m_q", poly(&k.m_q)),
        ("karlin_x", pts(&k.karlin_x)),
        ("karlin_y", pts(&k.karlin_y)),
        ("precision", num(k.precision)),
        ("branch", opt_num(k.branch.map(u64::from))),
    ])
}

/// A value together with its JSON pointer.
struct At<'a> {
    v: Option<&'a Value>,
    ptr: String,
}

impl<'a> At<'a> {
    fn root(v: &'a Value) -> Self {
        At { v: Some(v), ptr: String::new() }
    }

    fn fail<T>(&self, message: &str) -> Result<T> {
        Err(Error::CertParse {
            pointer: self.ptr.clone(),
            message: message.to_string(),
        })
    }

    fn value(&self) -> Result<&'a Value> {
        self.v.map_or_else(|| self.fail("missing field"), Ok)
    }

    /// An object with exactly `keys`.
    fn fields(&self, keys: &[&str]) -> Result<()> {
        let Value::Object(m) = self.value()? else {
            return self.fail("expected an object");
        };
        if let Some(k) = keys.iter().find(|k| !m.contains_key(**k)) {
            return self.get(k).fail("missing field");
        }
        if let Some(k) = m.keys().find(|k| !keys.contains(&k.as_str())) {
            return self.get(k).fail("unexpected field");
        }
        Ok(())
    }

    fn get(&self, key: &str) -> At<'a> {
        At {
            v: self.v.and_then(|v| v.get(key)),
            ptr: format!("{}/{}", self.ptr, key.replace('~', "~0").replace('/', "~1")),
        }
    }

    fn items(&self) -> Result<Vec<At<'a>>> {
        let Value::Array(xs) = self.value()? else {
            return self.fail("expected an array");
        };
        Ok(xs.iter().enumerate().map(|(i, v)| At { v: Some(v), ptr: format!("{}/{i}", self.ptr) }).collect())
    }

    fn is_null(&self) -> Result<bool> {
        Ok(self.value()?.is_null())
    }

    fn str(&self) -> Result<&'a str> {
        self.value()?.as_str().map_or_else(|| self.fail("expected a string"), Ok)
    }

    fn u64(&self) -> Result<u64> {
        self.value()?.as_u64().map_or_else(|| self.fail("expected a nonnegative integer"), Ok)
    }

    fn opt_u64(&self) -> Result<Option<u64>> {
        if self.is_null()? {
            Ok(None)
        } else {
            self.u64().map(Some)
        }
    }

    fn usize(&self) -> Result<usize> {
        usize::try_from(self.u64()?).map_or_else(|_| self.fail("integer out of range"), Ok)
    }

    fn bool(&self) -> Result<bool> {
        self.value()?.as_bool().map_or_else(|| self.fail("expected a boolean"), Ok)
    }

    /// Only the canonical spelling is accepted, so equal values have equal bytes.
    fn rational(&self) -> Result<Rational> {
        let s = self.str()?;
        match parse_rational(s) {
            Ok(q) if format_rational(&q) == s => Ok(q),
            Ok(_) => self.fail("rational not in lowest terms"),
            Err(e) => self.fail(&e.to_string()),
        }
    }

    fn dyadic(&self) -> Result<Dyadic> {
        self.str()?.parse().map_or_else(|e: Error| self.fail(&e.to_string()), Ok)
    }

    fn poly(&self) -> Result<RatPoly> {
        let cs = self.items()?.iter().map(|c| c.rational()).collect::<Result<Vec<_>>>()?;
        if cs.last().is_some_and(|c| c == &Rational::from_integer(0.into())) {
            return self.fail("trailing zero coefficient");
        }
        Ok(RatPoly::new(cs))
    }
}

fn read_meta(m: &At) -> Result<Meta> {
    m.fields(&["hash", "tool", "b_exp", "kappa", "prec"])?;
    Ok(Meta {
        hash: m.get("hash").str()?.to_string(),
        tool: m.get("tool").str()?.to_string(),
        b_exp: m.get("b_exp").opt_u64()?,
        kappa: m.get("kappa").opt_u64()?,
        prec: m.get("prec").opt_u64()?,
    })
}

fn read_domain(d: &At) -> Result<KarlinDomain> {
    if !d.value()?.is_object() {
        return d.fail("expected an object");
    }
    let t = d.get("type");
    let dom = match t.str()? {
        "R" => KarlinDomain::Real,
        "halfline" => KarlinDomain::HalfLine,
        "interval" => {
            d.fields(&["type", "a", "b"])?;
            return Ok(KarlinDomain::Interval {
                a: d.get("a").rational()?,
                b: d.get("b").rational()?,
            });
        }
        _ => return t.fail("unknown domain type"),
    };
    d.fields(&["type"])?;
    Ok(dom)
}

fn read_wsos(p: &At) -> Result<WsosCertificate> {
    p.fields(&["scale", "cofactor", "a_eps_d", "epsilon", "p", "q", "odd_weights", "even_weights", "budget"])?;
    let odd_weights = p
        .get("odd_weights")
        .items()?
        .iter()
        .map(|o| {
            o.fields(&["w", "sign", "k"])?;
            let s = o.get("sign");
            let sign = match s.value()?.as_i64() {
                Some(1) => 1,
                Some(-1) => -1,
                _ => return s.fail("sign must be 1 or -1"),
            };
            Ok(OddWeight {
                w: o.get("w").rational()?,
                sign,
                k: o.get("k").usize()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let even_weights = p.get("even_weights").items()?.iter().map(|w| w.rational()).collect::<Result<Vec<_>>>()?;
    let b = p.get("budget");
    b.fields(&["d", "tau", "b_exp", "kappa", "b_capped", "kappa_capped"])?;
    Ok(WsosCertificate {
        scale: p.get("scale").rational()?,
        cofactor: p.get("cofactor").poly()?,
        a_eps_d: p.get("a_eps_d").rational()?,
        epsilon: p.get("epsilon").rational()?,
        p: p.get("p").poly()?,
        q: p.get("q").poly()?,
        odd_weights,
        even_weights,
        budget: PrecisionBudget {
            d: b.get("d").usize()?,
            tau: b.get("tau").u64()?,
            b_exp: b.get("b_exp").u64()?,
            kappa: b.get("kappa").u64()?,
            b_capped: b.get("b_capped").bool()?,
            kappa_capped: b.get("kappa_capped").bool()?,
        },
    })
}

fn read_interval(p: &At) -> Result<IntervalCertificate> {
    p.fields(&["region", "parity", "groups", "line"])?;
    let r = p.get("region");
    let region = match read_domain(&r)? {
        KarlinDomain::Interval { a, b } => Region::Interval { a, b },
        KarlinDomain::HalfLine => Region::HalfLine,
        KarlinDomain::Real => return r.get("type").fail("interval certificates need an interval or the half-line"),
    };
    let par = p.get("parity");
    let parity = match par.str()? {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        _ => return par.fail("parity must be \"even\" or \"odd\""),
    };
    let g = p.get("groups");
    let groups = g
        .items()?
        .iter()
        .map(|grp| {
            grp.fields(&["multiplier", "terms"])?;
            let terms = grp
                .get("terms")
                .items()?
                .iter()
                .map(|t| {
                    t.fields(&["w", "s"])?;
                    Ok((t.get("w").rational()?, t.get("s").poly()?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SquareGroup {
                multiplier: grp.get("multiplier").poly()?,
                terms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let groups: [SquareGroup; 2] = groups.try_into().map_or_else(|_| g.fail("expected exactly two groups"), Ok)?;
    Ok(IntervalCertificate {
        region,
        parity,
        groups,
        line: read_wsos(&p.get("line"))?,
    })
}

fn read_pert(p: &At) -> Result<PertCertificate> {
    p.fields(&["p", "q", "lc", "b_exp", "lambda", "squarefree_witness"])?;
    let sw = p.get("squarefree_witness");
    let squarefree_witness = if sw.is_null()? {
        None
    } else {
        sw.fields(&["u", "v"])?;
        Some((sw.get("u").poly()?, sw.get("v").poly()?))
    };
    Ok(PertCertificate {
        p: p.get("p").poly()?,
        q: p.get("q").poly()?,
        lc: p.get("lc").rational()?,
        b_exp: p.get("b_exp").u64()?,
        lambda: p.get("lambda").u64()?,
        squarefree_witness,
    })
}

fn read_karlin(p: &At) -> Result<KarlinDecomposition> {
    p.fields(&["domain", "p", "q", "w_p", "w_q", "m_p", "m_q", "karlin_x", "karlin_y", "precision", "branch"])?;
    let pts = |key: &str| p.get(key).items()?.iter().map(|d| d.dyadic()).collect::<Result<Vec<_>>>();
    let br = p.get("branch");
    let branch = match br.opt_u64()? {
        None => None,
        Some(b) if b < 4 => Some(b as u8),
        Some(_) => return br.fail("branch must be below 4"),
    };
    Ok(KarlinDecomposition {
        domain: read_domain(&p.get("domain"))?,
        p: p.get("p").poly()?,
        q: p.get("q").poly()?,
        w_p: p.get("w_p").rational()?,
        w_q: p.get("w_q").rational()?,
        m_p: p.get("m_p").poly()?,
        m_q: p.get("m_q").poly()?,
        karlin_x: pts("karlin_x")?,
        karlin_y: pts("karlin_y")?,
        precision: p.get("precision").u64()?,
        branch,
    })
}

fn read_witness(p: &At) -> Result<NegativePoint> {
    p.fields(&["domain", "t", "value"])?;
    Ok(NegativePoint {
        domain: read_domain(&p.get("domain"))?,
        witness: Witness {
            t: p.get("t").rational()?,
            value: p.get("value").rational()?,
        },
    })
}
