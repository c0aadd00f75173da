//! Weighted sums of squares over ℝ.
//!
//! For a positive square-free `A` with `lc(A) ∈ [1/2, 1]` the pipeline picks
//! `ε = 2^(−b)` with `A_ε = A − εM > 0`, approximates the roots of `A_ε` to
//! `2^(−κ)`, and absorbs the residual `B = A_ε − a_{ε,d}(P² + Q²)` into
//! `εM` through explicit squares:
//!
//! `A = a_{ε,d}P² + a_{ε,d}Q² + Σ wₖ(x^{k+1} ± xᵏ/2)² + Σ w_{m+k} x^{2k}`.

use num_bigint::Sign;
use num_traits::{One, Signed, Zero};

use crate::arith::{pow2, Rational};
use crate::error::{Error, Result, Witness};
use crate::fanin::{split_pq, PQPair};
use crate::roots::{has_real_root, isolate_real_roots, ConjugatePairSet, RootBudget, RootSolver};
use crate::upoly::{int, lg, yun_squarefree_factorization, RatPoly};

/// Exponents used by one certification, with flags telling whether the
/// worst-case caps were the values tried last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub d: usize,
    pub tau: u64,
    pub b_exp: u64,
    pub kappa: u64,
    pub b_capped: bool,
    pub kappa_capped: bool,
}

/// `5dτ + 9d·lg d + 12`.
pub fn epsilon_exponent_cap(d: usize, tau: u64) -> u64 {
    let d = d as u64;
    5 * d * tau + 9 * d * lg(d as usize) + 12
}

/// `5dτ + 40d·lg d`.
pub fn kappa_cap(d: usize, tau: u64) -> u64 {
    let d = d as u64;
    5 * d * tau + 40 * d * lg(d as usize)
}

/// `wₖ·(x^{k+1} + sign·xᵏ/2)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddWeight {
    pub w: Rational,
    pub sign: i8,
    pub k: usize,
}

impl OddWeight {
    pub fn square_base(&self) -> RatPoly {
        let half = Rational::new(self.sign.into(), 2.into());
        &RatPoly::monomial(Rational::one(), self.k + 1) + &RatPoly::monomial(half, self.k)
    }
}

/// `scale·A = S²·(a_{ε,d}P² + a_{ε,d}Q² + Σ odd + Σ even)` with `S = cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WsosCertificate {
    pub scale: Rational,
    pub cofactor: RatPoly,
    pub a_eps_d: Rational,
    pub epsilon: Rational,
    pub p: RatPoly,
    pub q: RatPoly,
    pub odd_weights: Vec<OddWeight>,
    pub even_weights: Vec<Rational>,
    pub budget: PrecisionBudget,
}

impl WsosCertificate {
    /// `(w, s)` with `A = Σ w·s²`; zero terms are dropped.
    pub fn summands(&self) -> Vec<(Rational, RatPoly)> {
        let inv = self.scale.recip();
        let mut core: Vec<(Rational, RatPoly)> = vec![(self.a_eps_d.clone(), self.p.clone()), (self.a_eps_d.clone(), self.q.clone())];
        core.extend(self.odd_weights.iter().map(|o| (o.w.clone(), o.square_base())));
        core.extend(self.even_weights.iter().enumerate().map(|(k, w)| (w.clone(), RatPoly::monomial(Rational::one(), k))));
        core.into_iter()
            .filter(|(w, s)| !w.is_zero() && !s.is_zero())
            .map(|(w, s)| (&w * &inv, &self.cofactor * &s))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    pub fn summand_count(&self) -> usize {
        self.summands().len()
    }

    /// Degree of the certified square-free part.
    pub fn core_degree(&self) -> usize {
        2 * self.p.deg0()
    }

    /// Exact `Σ w·s²`.
    pub fn expand(&self) -> RatPoly {
        let terms = self.summands();
        RatPoly::weighted_square_sum(terms.iter().map(|(w, s)| (w, s)))
    }

    /// Largest bitsize among all rationals in the certificate.
    pub fn max_bitsize(&self) -> u64 {
        let polys = [&self.cofactor, &self.p, &self.q];
        let mut b = polys.iter().map(|p| p.bitsize()).max().unwrap_or(0);
        for r in [&self.scale, &self.a_eps_d, &self.epsilon].into_iter().chain(self.odd_weights.iter().map(|o| &o.w)).chain(self.even_weights.iter()) {
            b = b.max(crate::arith::bitsize(r));
        }
        b
    }
}

/// `1 + x² + … + x^{2m}`.
pub fn build_m(m: usize) -> RatPoly {
    let mut c = vec![Rational::zero(); 2 * m + 1];
    for k in 0..=m {
        c[2 * k] = Rational::one();
    }
    RatPoly::new(c)
}

fn positive_on_r(a: &RatPoly) -> bool {
    a.lc().is_positive() && !has_real_root(a)
}

/// Largest `ε = 2^(−b)`, `b ≥ 3`, with `A − εM > 0`, found by galloping then bisection on `b`.
pub fn choose_epsilon(a: &RatPoly) -> Result<(Rational, u64)> {
    let d = a.deg0();
    if d % 2 == 1 || !positive_on_r(a) {
        return Err(not_positive(a));
    }
    let lc = a.lc();
    if lc < Rational::new(1.into(), 2.into()) || lc > Rational::one() {
        return Err(Error::Precondition("leading coefficient must lie in [1/2, 1]".into()));
    }
    let m = build_m(d / 2);
    let ok = |b: u64| positive_on_r(&(a - &m.scale(&pow2(-(b as i64)))));
    let cap = epsilon_exponent_cap(d, a.tau()).max(3);
    let (mut lo, mut hi) = (2u64, 3u64);
    loop {
        if ok(hi) {
            break;
        }
        if hi >= cap {
            return Err(Error::Internal(format!("no admissible ε up to the worst-case exponent {cap}")));
        }
        lo = hi;
        hi = (2 * hi - 2).min(cap);
    }
    // ok(hi) holds and b ≤ lo fails (b = 2 is never tried).
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((pow2(-(hi as i64)), hi))
}

/// `max_k(|b_{2k+1}|/4 − b_{2k} + |b_{2k−1}|)` with `b_{−1} = b_{2m+1} = 0`.
pub fn eps_requirement(b: &RatPoly, m: usize) -> Rational {
    let mut worst: Option<Rational> = None;
    for k in 0..=m {
        let odd_hi = if k < m { b.coeff(2 * k + 1).abs() } else { Rational::zero() };
        let odd_lo = if k > 0 { b.coeff(2 * k - 1).abs() } else { Rational::zero() };
        let v = odd_hi / Rational::from_integer(4.into()) - b.coeff(2 * k) + odd_lo;
        if worst.as_ref().is_none_or(|w| &v > w) {
            worst = Some(v);
        }
    }
    worst.unwrap_or_else(Rational::zero)
}

/// Root approximations of `A_ε` at the first `κ` in `b + 64, 2(b + 64), …` (capped)
/// whose residual satisfies the ε-inequality.
pub(crate) struct KappaChoice {
    pub roots: ConjugatePairSet,
    pub pq: PQPair,
    pub residual: RatPoly,
    pub kappa: u64,
    pub capped: bool,
}

pub(crate) fn choose_kappa(a_eps: &RatPoly, epsilon: &Rational, b_exp: u64, d_tau: (usize, u64)) -> Result<KappaChoice> {
    let d = a_eps.deg0();
    let m = d / 2;
    let cap = kappa_cap(d_tau.0, d_tau.1).max(b_exp + 64);
    let mut refiner = RootSolver::new(RootBudget::from_env()).start(a_eps, 0)?;
    let mut kappa = b_exp + 64;
    loop {
        let capped = kappa >= cap;
        let kappa_now = kappa.min(cap);
        let roots = refiner.refine(kappa_now)?;
        if !roots.real_roots.is_empty() {
            return Err(Error::Internal("perturbed polynomial reported a real root".into()));
        }
        let pq = split_pq(&roots.pairs, &a_eps.lc())?;
        let residual = a_eps - &pq.expand();
        if &eps_requirement(&residual, m) <= epsilon {
            return Ok(KappaChoice {
                kappa: roots.kappa,
                roots,
                pq,
                residual,
                capped,
            });
        }
        if capped {
            return Err(Error::Internal(format!("ε-inequality fails at the worst-case κ = {cap}")));
        }
        kappa *= 2;
    }
}

/// Picks κ for `A_ε` (positive, square-free) and returns the approximations, the residual `B` and κ.
pub fn choose_kappa_and_roots(a_eps: &RatPoly, epsilon: &Rational) -> Result<(ConjugatePairSet, RatPoly, u64)> {
    let b_exp = crate::arith::floor_log2(&epsilon.recip()).max(0) as u64;
    let d = a_eps.deg0();
    let c = choose_kappa(a_eps, epsilon, b_exp, (d, a_eps.tau()))?;
    Ok((c.roots, c.residual, c.kappa))
}

/// Tail weights absorbing `B + εM`: odd `(|b_{2k+1}|, sign, k)` and even
/// `ε + b_{2k} − |b_{2k−1}| − |b_{2k+1}|/4`.
pub fn assemble_tail(b: &RatPoly, epsilon: &Rational, m: usize) -> Result<(Vec<OddWeight>, Vec<Rational>)> {
    let odd: Vec<OddWeight> = (0..m)
        .map(|k| {
            let c = b.coeff(2 * k + 1);
            OddWeight {
                w: c.abs(),
                sign: if c.is_negative() { -1 } else { 1 },
                k,
            }
        })
        .collect();
    let quarter = Rational::new(1.into(), 4.into());
    let mut even = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let below = if k > 0 { odd[k - 1].w.clone() } else { Rational::zero() };
        let above = if k < m { &odd[k].w * &quarter } else { Rational::zero() };
        let w = epsilon + b.coeff(2 * k) - below - above;
        if w.is_negative() {
            return Err(Error::Precondition(format!("even weight {k} is negative")));
        }
        even.push(w);
    }
    Ok((odd, even))
}

/// Core certificate for a square-free `a` with `lc(a) ∈ [1/2, 1]`, positive on ℝ.
fn certify_core(a: &RatPoly) -> Result<WsosCertificate> {
    let d = a.deg0();
    let tau = a.tau();
    let (epsilon, b_exp) = choose_epsilon(a)?;
    let m = d / 2;
    let a_eps = a - &build_m(m).scale(&epsilon);
    let choice = choose_kappa(&a_eps, &epsilon, b_exp, (d, tau))?;
    let (odd, even) = assemble_tail(&choice.residual, &epsilon, m)?;
    Ok(WsosCertificate {
        scale: Rational::one(),
        cofactor: RatPoly::one(),
        a_eps_d: a_eps.lc(),
        epsilon,
        p: choice.pq.p,
        q: choice.pq.q,
        odd_weights: odd,
        even_weights: even,
        budget: PrecisionBudget {
            d,
            tau,
            b_exp,
            kappa: choice.kappa,
            b_capped: b_exp >= epsilon_exponent_cap(d, tau),
            kappa_capped: choice.capped,
        },
    })
}

fn not_positive(a: &RatPoly) -> Error {
    match find_witness(a) {
        Some(t) => Error::NotPositive(Witness {
            value: a.eval(&t),
            t,
        }),
        None => Error::Internal("no negative point found for a polynomial rejected as not positive".into()),
    }
}

/// `A = lc·S²·F` with `S` collecting the even parts of the multiplicities and `F`
/// the product of the factors of odd multiplicity.
pub(crate) fn even_odd_split(a: &RatPoly) -> (RatPoly, RatPoly) {
    if a.is_constant() || int::squarefree_mod_p(&a.primitive_int()) {
        return (RatPoly::one(), a.make_monic());
    }
    let mut s = RatPoly::one();
    let mut f = RatPoly::one();
    for (g, mult) in yun_squarefree_factorization(a) {
        if mult >= 2 {
            s = &s * &g.pow(mult / 2);
        }
        if mult % 2 == 1 {
            f = &f * &g;
        }
    }
    (s, f)
}

/// Weighted SOS certificate of `A ≥ 0` on ℝ, or the witness of a negative value.
pub fn certify_positive_r(a: &RatPoly) -> Result<WsosCertificate> {
    if a.is_zero() {
        return Ok(WsosCertificate {
            scale: Rational::one(),
            cofactor: RatPoly::zero(),
            a_eps_d: Rational::one(),
            epsilon: Rational::zero(),
            p: RatPoly::one(),
            q: RatPoly::zero(),
            odd_weights: Vec::new(),
            even_weights: Vec::new(),
            budget: PrecisionBudget {
                d: 0,
                tau: 1,
                b_exp: 0,
                kappa: 0,
                b_capped: false,
                kappa_capped: false,
            },
        });
    }
    if a.deg0() % 2 == 1 || a.lc().is_negative() {
        return Err(not_positive(a));
    }
    let (s, f) = even_odd_split(a);
    if has_real_root(&f) {
        return Err(not_positive(a));
    }
    let (fs, k) = f.scale_to_unit_lc()?;
    let mut cert = certify_core(&fs)?;
    // scale·A = S²·fs with fs = k·F and A = lc·S²·F.
    cert.scale = k / a.lc();
    cert.cofactor = s;
    Ok(cert)
}

/// Rational `t` with `A(t) < 0`, if there is one.
pub fn find_witness(a: &RatPoly) -> Option<Rational> {
    find_witness_on(a, None, None)
}

/// Negative point of `A` in the closed domain `[lo, hi]` (either end may be infinite).
pub fn find_witness_on(a: &RatPoly, lo: Option<&Rational>, hi: Option<&Rational>) -> Option<Rational> {
    if a.is_zero() {
        return None;
    }
    let inside = |t: &Rational| lo.is_none_or(|l| t >= l) && hi.is_none_or(|h| t <= h);
    let iso = isolate_real_roots(a);
    let cands = lo.into_iter().cloned().chain(hi.cloned()).chain(iso.sample_points.into_iter().filter(|t| inside(t)));
    // A sign class whose sample falls outside [lo, hi] also contains lo or hi.
    cands.into_iter().find(|t| a.sign_at(t) == Sign::Minus)
}

/// As [`find_witness_on`] over the open half-line `(0, ∞)`.
pub fn find_witness_halfline(a: &RatPoly) -> Option<Rational> {
    let zero = Rational::zero();
    let t = find_witness_on(a, Some(&zero), None)?;
    if !t.is_zero() {
        return Some(t);
    }
    // A(0) < 0, so A stays negative on some (0, 2^(−k)].
    (0..).map(|k| pow2(-k)).find(|t| a.sign_at(t) == Sign::Minus)
}
