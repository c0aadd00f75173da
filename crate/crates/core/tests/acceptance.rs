//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits nonzero if
//! any fails. Criteria:
//!
//! 1. `certify --domain R` then `verify` accepts 200 random-SOS polynomials.
//! 2. Every real-line certificate has at most `d + 3` summands.
//! 3. Output bitsize grows linearly in `d·τ`: slope in `[0.3, 1.3]`, `R² ≥ 0.9`.
//! 4. Modified Wilkinson polynomials of degree 10 to 40 certify and verify, with input
//!    bitsize within 2 bits and output bitsize within a factor 4 of the published table.
//! 5. Polynomials negative somewhere yield exit code 2 and an exact witness; the
//!    positive corpus never does.
//! 6. Interval certificates expand exactly to `A` with nonnegative weights.
//! 7. Perturbed certificates pass their check with residual below `2^(−b_exp)`.
//! 8. Karlin decompositions interlace with the right degrees and reconstruct `A`.
//! 9. The Goursat transform is an involution up to `2^d`.
//! 10. Recorded `b_exp` and `κ` stay below their worst-case caps.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use upos::arith::pow2;
use upos::certio::{deserialize, verify, CertificateEnvelope, Payload};
use upos::cli::bench::{input_bitsize, least_squares, random_sos, wilkinson};
use upos::interval::{certify_interval, goursat, IntervalCertificate};
use upos::karlin::{decompose_r, default_precision, with_precision_retry, KarlinDecomposition};
use upos::pertsos::{build_pert_cert, check_pert_cert, pert_threshold, PertCheck};
use upos::roots::{isolate_real_roots, refine_real_root, RootInterval};
use upos::upoly::lg;
use upos::usos::{certify_positive_r, epsilon_exponent_cap, kappa_cap, WsosCertificate};
use upos::{RatPoly, Rational};

const SEED: u64 = 20_240_601;

/// Degree caps for the pert and Karlin criteria, whose root precision grows like `9dτ`.
/// `UPOS_ACCEPTANCE_FULL=1` lifts them to the whole corpus.
fn degree_cap(default: usize) -> usize {
    if std::env::var("UPOS_ACCEPTANCE_FULL").is_ok_and(|v| v == "1") {
        usize::MAX
    } else {
        default
    }
}

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn upos(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_upos")).args(args).output().expect("binary runs")
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("upos-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Naive `Σ w·s²`.
fn naive_sum(terms: &[(Rational, RatPoly)]) -> RatPoly {
    terms.iter().fold(RatPoly::zero(), |acc, (w, s)| &acc + &(s * s).scale(w))
}

struct Entry {
    a: RatPoly,
    cert: WsosCertificate,
}

/// Shared state: criteria 2, 5 and 10 reuse the certificates produced for criterion 1.
#[derive(Default)]
struct Corpus {
    entries: Vec<Entry>,
    budgets: Vec<(usize, u64, u64, u64)>,
}

fn corpus_poly(i: usize) -> (usize, usize, RatPoly) {
    let nu = [3, 11, 31][i % 3];
    // 37 is coprime to 49, so every even degree in 4..=100 occurs.
    let d = 4 + 2 * ((i * 37) % 49);
    (nu, d, random_sos(nu, d, 40, SEED + i as u64))
}

fn soundness(c: &mut Corpus, dir: &Path) -> Outcome {
    for i in 0..200 {
        let (nu, d, a) = corpus_poly(i);
        let expr = a.to_expr_string();
        let path = dir.join(format!("sos-{i}.json"));
        let path_s = path.to_str().unwrap();
        let o = upos(&["certify", "--domain", "R", "--out", path_s, &expr]);
        if o.status.code() != Some(0) {
            return Err(format!("entry {i} (nu={nu}, d={d}): certify exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
        }
        let v = upos(&["verify", &expr, path_s]);
        if v.status.code() != Some(0) {
            return Err(format!("entry {i} (nu={nu}, d={d}): verify exited {:?}: {}", v.status.code(), String::from_utf8_lossy(&v.stderr)));
        }
        let env = deserialize(&std::fs::read(&path).unwrap()).map_err(|e| e.to_string())?;
        let Payload::WsosR(cert) = env.payload else {
            return Err(format!("entry {i}: unexpected certificate kind"));
        };
        // Independent of the verifier: the exact expansion must reproduce A.
        let mut terms = vec![(cert.a_eps_d.clone(), cert.p.clone()), (cert.a_eps_d.clone(), cert.q.clone())];
        terms.extend(cert.odd_weights.iter().map(|o| (o.w.clone(), o.square_base())));
        terms.extend(cert.even_weights.iter().enumerate().map(|(k, w)| (w.clone(), RatPoly::monomial(Rational::one(), k))));
        if &(&cert.cofactor * &cert.cofactor) * &naive_sum(&terms) != a.scale(&cert.scale) {
            return Err(format!("entry {i}: naive expansion differs from A"));
        }
        c.budgets.push((a.deg0(), a.tau(), cert.budget.b_exp, cert.budget.kappa));
        c.entries.push(Entry { a, cert });
    }
    Ok("200/200 accepted, exact".into())
}

fn summands(c: &Corpus) -> Outcome {
    let mut worst = 0i64;
    for (i, e) in c.entries.iter().enumerate() {
        let n = e.cert.summand_count();
        let d = e.cert.core_degree();
        if n > d + 3 || d > e.a.deg0() {
            return Err(format!("entry {i}: {n} summands for degree {d}"));
        }
        worst = worst.max(n as i64 - d as i64);
    }
    if c.entries.is_empty() {
        return Err("no certificates (criterion 1 failed)".into());
    }
    Ok(format!("{} certificates, max summands − d = {worst}", c.entries.len()))
}

fn scaling(c: &mut Corpus) -> Outcome {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for d in (20..=260).step_by(20) {
        let a = random_sos(3, d, 40, SEED);
        let cert = certify_positive_r(&a).map_err(|e| format!("d={d}: {e}"))?;
        if !verify(&a, &CertificateEnvelope::new(&a, Payload::WsosR(cert.clone()))).is_accept() {
            return Err(format!("d={d}: rejected"));
        }
        xs.push((d as i64 * input_bitsize(&a)) as f64);
        ys.push(cert.max_bitsize() as f64);
        c.budgets.push((a.deg0(), a.tau(), cert.budget.b_exp, cert.budget.kappa));
    }
    let fit = least_squares(&xs, &ys).ok_or("degenerate fit")?;
    let msg = format!("slope {:.4}, intercept {:.1}, R² {:.4}", fit.slope, fit.intercept, fit.r2);
    if (0.3..=1.3).contains(&fit.slope) && fit.r2 >= 0.9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

const WILKINSON: [(usize, i64, u64); 16] = [
    (10, 17, 721),
    (12, 22, 870),
    (14, 28, 1283),
    (16, 34, 2472),
    (18, 41, 2568),
    (20, 48, 7527),
    (22, 55, 8133),
    (24, 62, 8557),
    (26, 70, 9118),
    (28, 78, 8675),
    (30, 86, 8447),
    (32, 94, 24294),
    (34, 102, 25567),
    (36, 111, 11077),
    (38, 119, 28004),
    (40, 128, 28733),
];

fn wilkinson_suite(c: &mut Corpus) -> Outcome {
    let mut worst_ratio: f64 = 1.0;
    let mut worst_input = 0;
    for (d, input, output) in WILKINSON {
        let a = wilkinson(d);
        let cert = certify_positive_r(&a).map_err(|e| format!("d={d}: {e}"))?;
        if !verify(&a, &CertificateEnvelope::new(&a, Payload::WsosR(cert.clone()))).is_accept() {
            return Err(format!("d={d}: rejected"));
        }
        let ib = input_bitsize(&a);
        if (ib - input).abs() > 2 {
            return Err(format!("d={d}: input bitsize {ib}, table {input}"));
        }
        let ob = cert.max_bitsize() as f64;
        let ratio = (ob / output as f64).max(output as f64 / ob);
        if ratio > 4.0 {
            return Err(format!("d={d}: output bitsize {ob}, table {output}"));
        }
        worst_ratio = worst_ratio.max(ratio);
        worst_input = worst_input.max((ib - input).abs());
        c.budgets.push((a.deg0(), a.tau(), cert.budget.b_exp, cert.budget.kappa));
    }
    Ok(format!("16 degrees; max input deviation {worst_input} bits, max output ratio {worst_ratio:.2}"))
}

/// `(x − r)(x − s)·(1 + B²)` with `r < s`; negative strictly between the roots.
fn negative_poly(rng: &mut ChaCha8Rng) -> RatPoly {
    loop {
        let r = q(rng.random_range(-50..50), rng.random_range(1..9));
        let s = &r + q(rng.random_range(1..40), rng.random_range(1..9));
        let b: Vec<i64> = (0..rng.random_range(1..5)).map(|_| rng.random_range(-9..=9)).collect();
        let b = RatPoly::from_i64s(&b);
        let a = &(&RatPoly::linear_root(&r) * &RatPoly::linear_root(&s)) * &(&(&b * &b) + &RatPoly::one());
        if a.is_square_free() {
            return a;
        }
    }
}

fn witnesses(c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for i in 0..100 {
        let a = negative_poly(&mut rng);
        let o = upos(&["certify", "--domain", "R", &a.to_expr_string()]);
        if o.status.code() != Some(2) {
            return Err(format!("negative entry {i}: exit {:?}", o.status.code()));
        }
        let w: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
        let t = upos::arith::parse_rational(w["t"].as_str().unwrap_or("")).map_err(|e| e.to_string())?;
        let v = a.coeffs().iter().rev().fold(Rational::zero(), |acc, k| acc * &t + k);
        if !v.is_negative() || w["value"].as_str() != Some(upos::arith::format_rational(&v).as_str()) {
            return Err(format!("negative entry {i}: A({t}) = {v} does not match the reported witness"));
        }
    }
    // Criterion 1 already required exit code 0 on each positive corpus member; a
    // witness on those would have failed there. Re-run a sample directly.
    for e in c.entries.iter().step_by(10) {
        let o = upos(&["certify", &e.a.to_expr_string()]);
        if o.status.code() == Some(2) {
            return Err("a positive polynomial produced a witness".into());
        }
    }
    Ok(format!("100/100 negatives exit 2 with exact witnesses; {} positives never exit 2", c.entries.len()))
}

fn interval_ok(a: &RatPoly, c: &IntervalCertificate, lo: &Rational, hi: &Rational) -> bool {
    let mut total = RatPoly::zero();
    for g in &c.groups {
        if g.terms.iter().any(|(w, _)| w.is_negative()) || [lo, hi].iter().any(|t| g.multiplier.eval(t).is_negative()) || g.multiplier.deg0() > 2 {
            return false;
        }
        total = &total + &(&g.multiplier * &naive_sum(&g.terms));
    }
    total == *a
}

fn intervals(c: &mut Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for i in 0..50 {
        let den = rng.random_range(1..1 << 7);
        let lo = q(rng.random_range(-(1 << 7)..1 << 7), den);
        let hi = &lo + q(rng.random_range(1..1 << 7), rng.random_range(1..1 << 7));
        if upos::arith::bitsize(&lo) > 16 || upos::arith::bitsize(&hi) > 16 {
            return Err(format!("entry {i}: endpoint generator exceeded 16 bits"));
        }
        // p² + c + (x − a)(b − x)·r² is positive on [a, b] but not necessarily on ℝ.
        let p = RatPoly::from_i64s(&(0..rng.random_range(1..5)).map(|_| rng.random_range(-20..=20)).collect::<Vec<_>>());
        let r = RatPoly::from_i64s(&(0..rng.random_range(1..4)).map(|_| rng.random_range(-20..=20)).collect::<Vec<_>>());
        let bump = &RatPoly::linear_root(&lo) * &RatPoly::linear_root(&hi).scale(&-Rational::one());
        let a = &(&(&p * &p) + &RatPoly::from_i64s(&[rng.random_range(1..30)])) + &(&bump * &(&r * &r));
        let cert = certify_interval(&a, &lo, &hi).map_err(|e| format!("entry {i} on [{lo}, {hi}]: {e}"))?;
        if !interval_ok(&a, &cert, &lo, &hi) {
            return Err(format!("entry {i} on [{lo}, {hi}]: expansion or weights wrong"));
        }
        c.budgets.push((cert.line.budget.d, cert.line.budget.tau, cert.line.budget.b_exp, cert.line.budget.kappa));
    }
    // x on [1, 2]: x = 1·(2 − x) + 2·(x − 1).
    let x = RatPoly::x();
    let cert = certify_interval(&x, &q(1, 1), &q(2, 1)).map_err(|e| e.to_string())?;
    let mut parts: Vec<RatPoly> = cert.groups.iter().map(|g| g.expand()).filter(|p| !p.is_zero()).collect();
    parts.sort_by_key(|p| p.coeff(1) > Rational::zero());
    if parts != vec![RatPoly::from_i64s(&[2, -1]), RatPoly::from_i64s(&[-2, 2])] {
        return Err(format!("x on [1, 2] gave {:?}", parts.iter().map(|p| p.to_expr_string()).collect::<Vec<_>>()));
    }
    Ok("50/50 exact with nonnegative weights; x = (2 − x) + 2(x − 1) on [1, 2]".into())
}

fn perturbed(c: &Corpus) -> Outcome {
    let cap = degree_cap(24);
    let mut n = 0;
    for (i, e) in c.entries.iter().enumerate().filter(|(_, e)| e.a.deg0() <= cap) {
        let a = &e.a;
        if !a.is_square_free() {
            continue;
        }
        let cert = build_pert_cert(a, true).map_err(|err| format!("entry {i}: {err}"))?;
        if check_pert_cert(a, &cert) != PertCheck::Accept {
            return Err(format!("entry {i}: check_pert_cert rejected"));
        }
        let (d, tau) = (a.deg0(), a.tau());
        let want = pert_threshold(d, tau).unwrap();
        if cert.b_exp != want {
            return Err(format!("entry {i}: b_exp {} but 4dτ + 16d·lg d + 1 = {want}", cert.b_exp));
        }
        let sum = (&(&cert.p * &cert.p) + &(&cert.q * &cert.q)).scale(&cert.lc);
        if (a - &sum).inf_norm() >= pow2(-(cert.b_exp as i64)) {
            return Err(format!("entry {i}: residual not below 2^(-{})", cert.b_exp));
        }
        n += 1;
    }
    if n == 0 {
        return Err("no square-free corpus members".into());
    }
    Ok(format!("{n}/{n} square-free members of degree ≤ {} accepted", cap.min(100)))
}

fn refined_roots(p: &RatPoly, bits: u64) -> Vec<RootInterval> {
    isolate_real_roots(p).intervals.iter().map(|iv| refine_real_root(p, iv, bits)).collect()
}

/// Sorted intervals strictly alternate `x, y, …, y, x`.
fn alternate(xs: &[RootInterval], ys: &[RootInterval]) -> bool {
    let mut all: Vec<(&RootInterval, bool)> = xs.iter().map(|r| (r, true)).chain(ys.iter().map(|r| (r, false))).collect();
    all.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
    all.windows(2).all(|w| w[0].0.hi < w[1].0.lo && w[0].1 != w[1].1) && all.first().is_none_or(|f| f.1)
}

fn karlin_check(i: usize, a: &RatPoly, k: &KarlinDecomposition) -> Result<(), String> {
    let m = a.deg0() / 2;
    if k.p.deg0() != m || (m > 0 && k.q.deg0() != m - 1) {
        return Err(format!("entry {i}: degrees ({}, {}) for m = {m}", k.p.deg0(), k.q.deg0()));
    }
    let xs = refined_roots(&k.p, k.precision + 2);
    let ys = refined_roots(&k.q, k.precision + 2);
    if xs.len() != m || ys.len() != m.saturating_sub(1) || !alternate(&xs, &ys) {
        return Err(format!("entry {i}: roots do not alternate x, y, …, x"));
    }
    let prod = |pts: &[upos::Dyadic]| pts.iter().fold(RatPoly::one(), |acc, t| &acc * &RatPoly::linear_root(&t.to_rational()));
    let px = prod(&k.karlin_x);
    let qy = prod(&k.karlin_y);
    let rec = &(&px * &px).scale(&k.alpha()) + &(&qy * &qy).scale(&k.beta());
    if (a - &rec).inf_norm() >= pow2(-((k.precision / 2) as i64)) {
        return Err(format!("entry {i}: point reconstruction misses A by ≥ 2^(-{})", k.precision / 2));
    }
    Ok(())
}

fn karlin(c: &Corpus) -> Outcome {
    let cap = degree_cap(32);
    let mut n = 0;
    for (i, e) in c.entries.iter().enumerate().filter(|(_, e)| e.a.deg0() <= cap).take(50) {
        let a = &e.a;
        let prec = default_precision(a);
        let k = with_precision_retry(prec, 8 * prec, |p| decompose_r(a, p)).map_err(|err| format!("entry {i}: {err}"))?;
        karlin_check(i, a, &k)?;
        n += 1;
    }
    let x4 = RatPoly::from_i64s(&[1, 0, 0, 0, 1]);
    let k = decompose_r(&x4, 64).map_err(|e| e.to_string())?;
    karlin_check(0, &x4, &k)?;
    let mut pts: Vec<Rational> = k.karlin_x.iter().chain(&k.karlin_y).map(|p| p.to_rational()).collect();
    pts.sort();
    let targets = [q(-1, 1), q(0, 1), q(1, 1)];
    if pts.len() != 3 || pts.iter().zip(&targets).any(|(p, t)| (p - t).abs() >= pow2(-50)) {
        return Err(format!("x^4+1 points {pts:?}"));
    }
    // Symbolic reconstruction from the rounded points: x⁴ + 1 = α(x² − 1)² + β·x².
    let rounded = |v: &[upos::Dyadic]| v.iter().fold(RatPoly::one(), |acc, t| &acc * &RatPoly::linear_root(&Rational::from_integer(t.to_rational().round().to_integer())));
    let px = rounded(&k.karlin_x);
    let qy = rounded(&k.karlin_y);
    let rest = &x4 - &(&px * &px).scale(&x4.lc());
    let qq = &qy * &qy;
    let beta = rest.lc() / qq.lc();
    if beta != q(2, 1) || rest != qq.scale(&beta) {
        return Err(format!("x^4+1: symbolic β = {beta}"));
    }
    if n < 50 {
        return Err(format!("only {n} corpus members of degree ≤ {cap}"));
    }
    Ok(format!("{n}/{n} of degree ≤ {} interlace with degrees (m, m − 1); x⁴+1 gives {{−1, 0, 1}} and β = 2", cap.min(100)))
}

/// `Σ aₖ (1 − x)ᵏ (1 + x)^{d−k}`, written out independently of the library transform.
fn goursat_naive(a: &RatPoly, d: usize) -> RatPoly {
    let (minus, plus) = (RatPoly::from_i64s(&[1, -1]), RatPoly::from_i64s(&[1, 1]));
    (0..=d).fold(RatPoly::zero(), |acc, k| &acc + &(&minus.pow(k as u32) * &plus.pow((d - k) as u32)).scale(&a.coeff(k)))
}

fn goursat_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for i in 0..100 {
        let d = rng.random_range(1..=24);
        let mut c: Vec<Rational> = (0..=d).map(|_| q(rng.random_range(-1000..=1000), rng.random_range(1..100))).collect();
        c[d] = q(rng.random_range(1..=1000), rng.random_range(1..100));
        let a = RatPoly::new(c);
        let g = goursat(&a, d).map_err(|e| e.to_string())?;
        if g != goursat_naive(&a, d) {
            return Err(format!("entry {i}: transform differs from the direct expansion"));
        }
        let gg = goursat(&g, d).map_err(|e| e.to_string())?;
        if gg != a.scale(&pow2(d as i64)) {
            return Err(format!("entry {i}: G[G[A]] ≠ 2^{d}·A"));
        }
    }
    Ok("100/100 exact".into())
}

fn caps(c: &Corpus) -> Outcome {
    let (mut slack_b, mut slack_k) = (u64::MAX, u64::MAX);
    for &(d, tau, b, k) in &c.budgets {
        let (cb, ck) = (epsilon_exponent_cap(d, tau), kappa_cap(d, tau));
        let (eb, ek) = (5 * d as u64 * tau + 9 * d as u64 * lg(d) + 12, 5 * d as u64 * tau + 40 * d as u64 * lg(d));
        if (cb, ck) != (eb, ek) {
            return Err(format!("cap formula mismatch at d={d}, τ={tau}"));
        }
        if b > eb || k > ek {
            return Err(format!("d={d}, τ={tau}: b_exp {b} (cap {eb}), κ {k} (cap {ek})"));
        }
        slack_b = slack_b.min(eb - b);
        slack_k = slack_k.min(ek - k);
    }
    if c.budgets.is_empty() {
        return Err("no budgets recorded".into());
    }
    Ok(format!("{} certificates; min slack b_exp {slack_b}, κ {slack_k}", c.budgets.len()))
}

fn main() -> ExitCode {
    let dir = scratch();
    let mut corpus = Corpus::default();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, check: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        match o {
            Ok(m) => println!("PASS {n:>2} {name}: {m} [{secs:.1} s]"),
            Err(m) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {m} [{secs:.1} s]");
            }
        }
    };
    report(1, "exact-identity soundness", &mut || soundness(&mut corpus, &dir));
    report(2, "summand count", &mut || summands(&corpus));
    report(3, "bitsize scaling", &mut || scaling(&mut corpus));
    report(4, "Wilkinson suite", &mut || wilkinson_suite(&mut corpus));
    report(5, "witness exclusivity", &mut || witnesses(&corpus));
    report(6, "interval certificates", &mut || intervals(&mut corpus));
    report(7, "perturbed certificates", &mut || perturbed(&corpus));
    report(8, "interlacing and Karlin points", &mut || karlin(&corpus));
    report(9, "Goursat involution", &mut || goursat_involution());
    report(10, "adaptive versus worst-case budgets", &mut || caps(&corpus));
    let _ = std::fs::remove_dir_all(&dir);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
