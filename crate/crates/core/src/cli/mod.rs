//! Command-line front end. Exit codes: 0 success, 2 a negative semantic result
//! (witness or rejection), 1 any operational error.

pub mod bench;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::{bitsize, format_rational, parse_rational, Rational};
use crate::certio::{deserialize, serialize, verify, CertificateEnvelope, NegativePoint, Payload, Verdict};
use crate::error::{Error, Result, Witness};
use crate::interval::{certify_halfline, certify_interval, IntervalCertificate};
use crate::karlin::{decompose_halfline, decompose_interval, decompose_r, default_precision, with_precision_retry, KarlinDomain};
use crate::pertsos::build_pert_cert;
use crate::roots::RootBudget;
use crate::upoly::{parse_poly, RatPoly};
use crate::usos::{certify_positive_r, find_witness, find_witness_halfline, find_witness_on};

#[derive(Parser, Debug)]
#[command(name = "upos", version, about = "Exact positivity certificates for univariate polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify nonnegativity on a domain, or report a point where the polynomial is negative.
    Certify(CertifyArgs),
    /// Check a certificate file against a polynomial with exact arithmetic.
    Verify(VerifyArgs),
    /// Search for a rational point of the domain where the polynomial is negative.
    Witness(WitnessArgs),
    /// Karlin points and the two-square interlacing decomposition.
    Karlin(KarlinArgs),
    /// Run a benchmark suite and emit CSV.
    Bench(bench::BenchArgs),
}

#[derive(Args, Debug)]
pub struct DomainArgs {
    /// `R`, `halfline`, or `interval A B`.
    #[arg(long, num_args = 1..=3, allow_negative_numbers = true, default_value = "R", value_name = "DOMAIN")]
    pub domain: Vec<String>,
    /// Polynomial file, or an inline expression / coefficient list.
    #[arg(allow_hyphen_values = true, value_name = "POLY")]
    pub poly: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertKind {
    Wsos,
    Pert,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub target: DomainArgs,
    #[arg(long, value_enum, default_value = "wsos")]
    pub kind: CertKind,
    /// Write the certificate (or the witness envelope) here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print d, τ, b_exp, κ, summand count and output bitsize on stderr.
    #[arg(long)]
    pub stats: bool,
    /// Attach a Bézout square-freeness witness to perturbed certificates.
    #[arg(long)]
    pub squarefree_witness: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Polynomial file, or an inline expression / coefficient list.
    #[arg(allow_hyphen_values = true)]
    pub poly: String,
    pub cert: PathBuf,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub target: DomainArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KarlinArgs {
    #[command(flatten)]
    pub target: DomainArgs,
    /// Root precision in bits; defaults to `max(64, 2(dτ + 4d))`.
    #[arg(long)]
    pub prec: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let r = match cli.command {
        Command::Certify(a) => certify(&a),
        Command::Verify(a) => verify_cmd(&a),
        Command::Witness(a) => witness(&a),
        Command::Karlin(a) => karlin(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// `--domain R x` is read as the domain `R` followed by the polynomial `x`.
pub fn resolve_target(t: &DomainArgs) -> Result<(KarlinDomain, RatPoly)> {
    let mut words = t.domain.clone();
    let usage = |m: &str| Error::Precondition(format!("{m}; expected --domain R | halfline | interval A B"));
    let name = words.remove(0);
    let (dom, rest) = match name.to_ascii_lowercase().as_str() {
        "r" | "real" => (KarlinDomain::Real, words),
        "halfline" => (KarlinDomain::HalfLine, words),
        "interval" => {
            if words.len() < 2 {
                return Err(usage("interval needs two endpoints"));
            }
            let a = parse_rational(&words[0])?;
            let b = parse_rational(&words[1])?;
            (KarlinDomain::Interval { a, b }, words.split_off(2))
        }
        other => return Err(usage(&format!("unknown domain `{other}`"))),
    };
    let src = match (rest.as_slice(), &t.poly) {
        ([], Some(p)) => p.clone(),
        ([p], None) => p.clone(),
        ([], None) => return Err(Error::Precondition("missing polynomial".into())),
        _ => return Err(usage("too many domain arguments")),
    };
    Ok((dom, read_poly(&src)?))
}

/// A path to a readable file is read; anything else is parsed as text.
pub fn read_poly(src: &str) -> Result<RatPoly> {
    if Path::new(src).is_file() {
        parse_poly(&fs::read_to_string(src)?)
    } else {
        parse_poly(src)
    }
}

fn witness_json(w: &Witness) -> String {
    serde_json::json!({"t": format_rational(&w.t), "value": format_rational(&w.value)}).to_string()
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Prints the witness JSON on stdout, writes the witness envelope to `out` if given, and returns 2.
fn report_negative(a: &RatPoly, domain: KarlinDomain, w: Witness, out: Option<&Path>) -> Result<u8> {
    println!("{}", witness_json(&w));
    if let Some(p) = out {
        let env = CertificateEnvelope::new(a, Payload::Witness(NegativePoint { domain, witness: w }));
        fs::write(p, serialize(&env))?;
    }
    Ok(2)
}

fn interval_bitsize(c: &IntervalCertificate) -> u64 {
    let mut b = 0;
    for g in &c.groups {
        b = b.max(g.multiplier.bitsize());
        for (w, s) in &g.terms {
            b = b.max(bitsize(w)).max(s.bitsize());
        }
    }
    b
}

fn print_stats(a: &RatPoly, p: &Payload) {
    let (b_exp, kappa, summands, out_bits) = match p {
        Payload::WsosR(c) => (c.budget.b_exp, c.budget.kappa, c.summand_count(), c.max_bitsize()),
        Payload::WsosInterval(c) => (c.line.budget.b_exp, c.line.budget.kappa, c.summand_count(), interval_bitsize(c)),
        Payload::PertSos(c) => (c.b_exp, c.lambda, 2, c.p.bitsize().max(c.q.bitsize()).max(bitsize(&c.lc))),
        _ => return,
    };
    eprintln!(
        "d={} tau={} b_exp={b_exp} kappa={kappa} summands={summands} output_bitsize={out_bits}",
        a.deg0(),
        a.tau()
    );
}

fn certify(args: &CertifyArgs) -> Result<u8> {
    let (domain, a) = resolve_target(&args.target)?;
    let payload = match (args.kind, &domain) {
        (CertKind::Wsos, KarlinDomain::Real) => certify_positive_r(&a).map(Payload::WsosR),
        (CertKind::Wsos, KarlinDomain::HalfLine) => certify_halfline(&a).map(Payload::WsosInterval),
        (CertKind::Wsos, KarlinDomain::Interval { a: lo, b: hi }) => certify_interval(&a, lo, hi).map(Payload::WsosInterval),
        (CertKind::Pert, KarlinDomain::Real) => {
            if a.deg0() % 2 == 1 {
                return Err(Error::Unsupported(format!(
                    "perturbed certificates require an even-degree polynomial, got degree {}",
                    a.deg0()
                )));
            }
            build_pert_cert(&a, args.squarefree_witness).map(Payload::PertSos)
        }
        (CertKind::Pert, _) => return Err(Error::Unsupported("perturbed certificates are only defined on R".into())),
    };
    match payload {
        Ok(p) => {
            if args.stats {
                print_stats(&a, &p);
            }
            emit(&serialize(&CertificateEnvelope::new(&a, p)), args.out.as_deref())?;
            Ok(0)
        }
        Err(Error::NotPositive(w)) => report_negative(&a, domain, w, args.out.as_deref()),
        Err(e) => Err(e),
    }
}

fn verify_cmd(args: &VerifyArgs) -> Result<u8> {
    let a = read_poly(&args.poly)?;
    let env = deserialize(&fs::read(&args.cert)?)?;
    match verify(&a, &env) {
        Verdict::Accept => {
            println!("accept");
            Ok(0)
        }
        Verdict::Reject(r) => {
            eprintln!("reject: {r}");
            Ok(2)
        }
    }
}

fn find_on(a: &RatPoly, domain: &KarlinDomain) -> Option<Rational> {
    match domain {
        KarlinDomain::Real => find_witness(a),
        KarlinDomain::HalfLine => find_witness_halfline(a),
        KarlinDomain::Interval { a: lo, b: hi } => find_witness_on(a, Some(lo), Some(hi)),
    }
}

fn witness(args: &WitnessArgs) -> Result<u8> {
    let (domain, a) = resolve_target(&args.target)?;
    if let KarlinDomain::Interval { a: lo, b: hi } = &domain {
        if lo > hi {
            return Err(Error::EmptyInterval);
        }
    }
    match find_on(&a, &domain) {
        Some(t) => {
            let w = Witness { value: a.eval(&t), t };
            println!("{}", witness_json(&w));
            if let Some(p) = &args.out {
                fs::write(p, serialize(&CertificateEnvelope::new(&a, Payload::Witness(NegativePoint { domain, witness: w }))))?;
            }
            Ok(0)
        }
        None => {
            eprintln!("no negative point: the polynomial is nonnegative on the domain");
            Ok(2)
        }
    }
}

fn karlin(args: &KarlinArgs) -> Result<u8> {
    let (domain, a) = resolve_target(&args.target)?;
    let prec = args.prec.unwrap_or_else(|| default_precision(&a));
    let max = RootBudget::from_env().max_precision.max(prec);
    let dec = with_precision_retry(prec, max, |pr| match &domain {
        KarlinDomain::Real => decompose_r(&a, pr),
        KarlinDomain::HalfLine => decompose_halfline(&a, pr),
        KarlinDomain::Interval { a: lo, b: hi } => decompose_interval(&a, lo, hi, pr),
    });
    match dec {
        Ok(k) => {
            emit(&serialize(&CertificateEnvelope::new(&a, Payload::Karlin(k))), args.out.as_deref())?;
            Ok(0)
        }
        Err(Error::NotPositive(w)) => report_negative(&a, domain, w, None),
        Err(e) => Err(e),
    }
}
