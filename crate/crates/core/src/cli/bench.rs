//! Benchmark suites: modified Wilkinson polynomials, sums of random squares, and an
//! external interval corpus loaded from a file.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{ceil_log2, parse_rational, Rational};
use crate::certio::{verify, CertificateEnvelope, Payload, Verdict};
use crate::error::{Error, Result};
use crate::interval::certify_interval;
use crate::upoly::{parse_poly, RatPoly};
use crate::usos::certify_positive_r;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// `wilkinson`, `random-sos`, or `sollya` (needs `--corpus`).
    #[arg(long)]
    pub suite: String,
    /// `start:end:step`, a single degree, or a comma-separated list.
    #[arg(long, default_value = "10:40:2")]
    pub degrees: String,
    /// Number of squares in the random-sos suite.
    #[arg(long, default_value_t = 3)]
    pub nu: usize,
    #[arg(long, default_value_t = 40)]
    pub coeff_bits: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Interval corpus, one `a b polynomial` entry per line.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub degree: usize,
    pub input_bitsize: i64,
    pub output_bitsize: u64,
    pub summands: usize,
    pub epsilon_exp: u64,
    pub kappa: u64,
    pub time_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// `∏_{i=1}^{d/2} (x − i)² − x²/11237 + 1`.
pub fn wilkinson(d: usize) -> RatPoly {
    let mut a = RatPoly::one();
    for i in 1..=(d / 2) as i64 {
        let f = RatPoly::from_i64s(&[-i, 1]);
        a = &a * &(&f * &f);
    }
    let tail = RatPoly::new(vec![Rational::from_integer(1.into()), Rational::from_integer(0.into()), Rational::new((-1).into(), 11237.into())]);
    &a + &tail
}

/// `Σ_{i<ν} Aᵢ²` with `deg Aᵢ = d/2` and integer coefficients uniform in `[−2^bits, 2^bits]`.
/// Each degree draws from its own ChaCha stream, so entries do not depend on each other.
pub fn random_sos(nu: usize, d: usize, bits: u32, seed: u64) -> RatPoly {
    assert!(bits <= 62, "coefficient bits above 62 are not supported");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(d as u64);
    let bound = 1i64 << bits;
    let mut sum = RatPoly::zero();
    for _ in 0..nu {
        let c: Vec<BigInt> = (0..=d / 2).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect();
        let s = RatPoly::from_ints(c);
        sum = &sum + &(&s * &s);
    }
    sum
}

/// `max ⌈log₂ |aₖ|⌉` over the nonzero coefficients.
pub fn input_bitsize(a: &RatPoly) -> i64 {
    a.coeffs().iter().filter(|c| **c != Rational::from_integer(0.into())).map(ceil_log2).max().unwrap_or(0)
}

pub fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Precondition(format!("bad degree range `{s}`; expected start:end:step, a list, or a single degree"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => one.split(',').map(num).collect(),
        [a, b] => Ok((num(a)?..=num(b)?).collect()),
        [a, b, step] => {
            let step = num(step)?;
            if step == 0 {
                return Err(bad());
            }
            Ok((num(a)?..=num(b)?).step_by(step).collect())
        }
        _ => Err(bad()),
    }
}

/// Ordinary least squares of `ys` on `xs`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(Fit { slope, intercept, r2 })
}

/// `output_bitsize` against `degree · input_bitsize`.
pub fn fit_rows(rows: &[Row]) -> Option<Fit> {
    let xs: Vec<f64> = rows.iter().map(|r| (r.degree as i64 * r.input_bitsize) as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.output_bitsize as f64).collect();
    least_squares(&xs, &ys)
}

fn accepted(a: &RatPoly, payload: Payload) -> Result<Payload> {
    let env = CertificateEnvelope::new(a, payload);
    match verify(a, &env) {
        Verdict::Accept => Ok(env.payload),
        Verdict::Reject(r) => Err(Error::Internal(format!("own certificate rejected: {r}"))),
    }
}

/// Certifies `a` on ℝ, times the certification alone, and verifies the result exactly.
pub fn bench_r(a: &RatPoly) -> Result<Row> {
    let t0 = Instant::now();
    let cert = certify_positive_r(a)?;
    let time_ms = t0.elapsed().as_secs_f64() * 1e3;
    let Payload::WsosR(cert) = accepted(a, Payload::WsosR(cert))? else { unreachable!() };
    Ok(Row {
        degree: a.deg0(),
        input_bitsize: input_bitsize(a),
        output_bitsize: cert.max_bitsize(),
        summands: cert.summand_count(),
        epsilon_exp: cert.budget.b_exp,
        kappa: cert.budget.kappa,
        time_ms,
    })
}

fn bench_interval(a: &RatPoly, lo: &Rational, hi: &Rational) -> Result<Row> {
    let t0 = Instant::now();
    let cert = certify_interval(a, lo, hi)?;
    let time_ms = t0.elapsed().as_secs_f64() * 1e3;
    let Payload::WsosInterval(cert) = accepted(a, Payload::WsosInterval(cert))? else { unreachable!() };
    let out = cert.groups.iter().flat_map(|g| g.terms.iter()).map(|(w, s)| crate::arith::bitsize(w).max(s.bitsize())).max().unwrap_or(1);
    Ok(Row {
        degree: a.deg0(),
        input_bitsize: input_bitsize(a),
        output_bitsize: out,
        summands: cert.summand_count(),
        epsilon_exp: cert.line.budget.b_exp,
        kappa: cert.line.budget.kappa,
        time_ms,
    })
}

/// `a b polynomial` per line; blank lines and `#` comments are skipped.
fn read_corpus(path: &PathBuf) -> Result<Vec<(Rational, Rational, RatPoly)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut it = line.splitn(3, char::is_whitespace);
        let (Some(a), Some(b), Some(p)) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Precondition(format!("corpus line `{line}` needs `a b polynomial`")));
        };
        out.push((parse_rational(a)?, parse_rational(b)?, parse_poly(p)?));
    }
    Ok(out)
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn run_suite(args: &BenchArgs) -> Result<Vec<Row>> {
    let rows: Vec<Result<Row>> = match args.suite.as_str() {
        "wilkinson" => {
            let degrees = parse_degrees(&args.degrees)?;
            in_pool(args.jobs, || degrees.par_iter().map(|&d| bench_r(&wilkinson(d))).collect())?
        }
        "random-sos" => {
            if args.coeff_bits > 62 {
                return Err(Error::Precondition("--coeff-bits must be at most 62".into()));
            }
            let degrees = parse_degrees(&args.degrees)?;
            if let Some(d) = degrees.iter().find(|d| *d % 2 == 1) {
                return Err(Error::Precondition(format!("random-sos degrees must be even, got {d}")));
            }
            in_pool(args.jobs, || degrees.par_iter().map(|&d| bench_r(&random_sos(args.nu, d, args.coeff_bits, args.seed))).collect())?
        }
        "sollya" => {
            let Some(path) = &args.corpus else {
                return Err(Error::Precondition(
                    "the sollya suite is a placeholder: its nine interval polynomials are not bundled; obtain them separately and pass --corpus FILE".into(),
                ));
            };
            let corpus = read_corpus(path)?;
            in_pool(args.jobs, || corpus.par_iter().map(|(lo, hi, a)| bench_interval(a, lo, hi)).collect())?
        }
        other => return Err(Error::Precondition(format!("unknown suite `{other}`; expected wilkinson, random-sos or sollya"))),
    };
    rows.into_iter().collect()
}

pub fn write_csv<W: std::io::Write>(rows: &[Row], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["degree", "input_bitsize", "output_bitsize", "summands", "epsilon_exp", "kappa", "time_ms"]).map_err(io)?;
    for r in rows {
        wr.write_record([
            r.degree.to_string(),
            r.input_bitsize.to_string(),
            r.output_bitsize.to_string(),
            r.summands.to_string(),
            r.epsilon_exp.to_string(),
            r.kappa.to_string(),
            format!("{:.3}", r.time_ms),
        ])
        .map_err(io)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn run(args: &BenchArgs) -> Result<u8> {
    let rows = run_suite(args)?;
    match &args.out {
        Some(p) => write_csv(&rows, fs::File::create(p)?)?,
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    match fit_rows(&rows) {
        Some(f) => eprintln!(
            "fit: output_bitsize = {:.4} * (degree * input_bitsize) + {:.2}  (R^2 = {:.4}, n = {})",
            f.slope,
            f.intercept,
            f.r2,
            rows.len()
        ),
        None => eprintln!("fit: needs at least two distinct degrees"),
    }
    Ok(0)
}
