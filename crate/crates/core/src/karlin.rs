//! Interlacing two-square decompositions and Karlin points.
//!
//! On ℝ, `A = a_d(P² + Q²)` with `P + iQ = ∏(x − γⱼ + iδⱼ)` over the roots in
//! the upper half-plane; `P` and `Q` have real interlacing roots. On `[0, ∞)`
//! the same construction on `A(y²)` splits into even and odd parts,
//! `A = a_d(𝒫² + x𝒬²)`. An interval `[a, b]` is moved to `[0, ∞)` by an
//! affine map followed by the Goursat transform.

use num_traits::{One, Signed, Zero};

use crate::arith::{pow2, round_to_dyadic, Dyadic, Rational};
use crate::error::{Error, Result, Witness};
use crate::fanin::split_pq;
use crate::interval::{goursat, homogenize};
use crate::roots::{has_real_root, isolate_real_roots, RootBudget, RootInterval, RootSolver};
use crate::upoly::{lg, Bound, Domain, RatPoly, SturmChain};
use crate::usos::{find_witness, find_witness_halfline, find_witness_on};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KarlinDomain {
    Real,
    HalfLine,
    Interval { a: Rational, b: Rational },
}

/// `A ≈ w_p·m_p·P² + w_q·m_q·Q²`; `karlin_x` are the roots of `P`, `karlin_y` those of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KarlinDecomposition {
    pub domain: KarlinDomain,
    pub p: RatPoly,
    pub q: RatPoly,
    pub w_p: Rational,
    pub w_q: Rational,
    pub m_p: RatPoly,
    pub m_q: RatPoly,
    pub karlin_x: Vec<Dyadic>,
    pub karlin_y: Vec<Dyadic>,
    pub precision: u64,
    /// Number of negative real roots of the half-line polynomial, mod 4; fixes which
    /// of `P`, `Q` on the line carries `𝒫` and with which sign.
    pub branch: Option<u8>,
}

impl KarlinDecomposition {
    /// `α` of the Karlin form `α·m_p·∏(x − xᵢ)² + β·m_q·∏(x − yⱼ)²`.
    pub fn alpha(&self) -> Rational {
        let l = self.p.lc();
        &self.w_p * &l * &l
    }

    pub fn beta(&self) -> Rational {
        if self.q.is_zero() {
            return Rational::zero();
        }
        let l = self.q.lc();
        &self.w_q * &l * &l
    }

    pub fn reconstruction(&self) -> RatPoly {
        let a = (&self.m_p * &(&self.p * &self.p)).scale(&self.w_p);
        let b = (&self.m_q * &(&self.q * &self.q)).scale(&self.w_q);
        &a + &b
    }

    /// `‖A − reconstruction‖∞`.
    pub fn residual(&self, a: &RatPoly) -> Rational {
        (a - &self.reconstruction()).inf_norm()
    }

    /// All points in increasing order, tagged `true` for roots of `P`.
    pub fn merged_points(&self) -> Vec<(Dyadic, bool)> {
        let mut v: Vec<(Dyadic, bool)> = self.karlin_x.iter().map(|x| (x.clone(), true)).chain(self.karlin_y.iter().map(|y| (y.clone(), false))).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// `max(64, 2(dτ + 4d))`.
pub fn default_precision(a: &RatPoly) -> u64 {
    let d = a.deg0() as u64;
    64u64.max(2 * (d * a.tau() + 4 * d))
}

/// One step of `P + iQ ↦ (P + iQ)(x − γ + iδ)`.
pub fn interlace_step(p: &RatPoly, q: &RatPoly, gamma: &Dyadic, delta: &Dyadic) -> Result<(RatPoly, RatPoly)> {
    if !delta.is_positive() {
        return Err(Error::InvalidRoot(format!("δ = {delta} is not positive")));
    }
    let xg = RatPoly::linear_root(&gamma.to_rational());
    let d = delta.to_rational();
    let np = &(&xg * p) - &q.scale(&d);
    let nq = &p.scale(&d) + &(&xg * q);
    Ok((np, nq))
}

/// Isolating intervals refined to `2^(−prec)`, all `deg` roots real, and dyadic midpoints.
fn real_points(poly: &RatPoly, prec: u64) -> Result<(Vec<RootInterval>, Vec<Dyadic>)> {
    if poly.is_zero() {
        return Err(Error::PrecisionInsufficient("a Karlin polynomial vanished".into()));
    }
    let iso = isolate_real_roots(poly);
    if iso.intervals.len() != poly.deg0() {
        return Err(Error::PrecisionInsufficient(format!("{} real roots for degree {}", iso.intervals.len(), poly.deg0())));
    }
    let ivs: Vec<RootInterval> = (0..iso.intervals.len()).map(|i| iso.refine(i, prec)).collect();
    let pts = ivs.iter().map(|iv| round_to_dyadic(&iv.midpoint(), prec + 1)).collect();
    Ok((ivs, pts))
}

/// `f₁ < s₁ < f₂ < …` with `|f| − |s| ∈ {0, 1}`, from the intervals alone.
pub(crate) fn alternates(first: &[RootInterval], second: &[RootInterval]) -> bool {
    if first.len() != second.len() && first.len() != second.len() + 1 {
        return false;
    }
    let mut merged: Vec<&RootInterval> = Vec::with_capacity(first.len() + second.len());
    for i in 0..first.len() {
        merged.push(&first[i]);
        if i < second.len() {
            merged.push(&second[i]);
        }
    }
    merged.windows(2).all(|w| crate::roots::strictly_before(w[0], w[1]))
}

fn interleaving_error(what: &str, prec: u64) -> Error {
    Error::PrecisionInsufficient(format!("{what} not certified at {prec} bits"))
}

/// A negative point, else a listed point where `A` vanishes, else square-freeness is to blame.
fn witness_error(a: &RatPoly, t: Option<Rational>, ends: &[&Rational]) -> Error {
    let t = t.or_else(|| ends.iter().find(|e| a.eval(e).is_zero()).map(|e| (*e).clone()));
    match t {
        Some(t) => Error::NotPositive(Witness { value: a.eval(&t), t }),
        None => Error::NotSquareFree,
    }
}

/// Rejects anything that is not square-free, positive on ℝ, with positive leading coefficient.
fn check_positive_r(a: &RatPoly) -> Result<()> {
    if a.is_zero() || a.lc().is_negative() || a.deg0() % 2 == 1 || has_real_root(a) {
        return Err(witness_error(a, find_witness(a), &[]));
    }
    if !a.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    Ok(())
}

/// `A = a_d(P² + Q²)` with `deg P = m`, `deg Q = m − 1` and interlacing real roots.
pub fn decompose_r(a: &RatPoly, prec: u64) -> Result<KarlinDecomposition> {
    check_positive_r(a)?;
    let m = a.deg0() / 2;
    let roots = RootSolver::new(RootBudget::from_env()).refine(a, prec)?;
    let pq = split_pq(&roots.pairs, &Rational::one())?;
    let (xi, karlin_x) = real_points(&pq.p, prec)?;
    let (yi, karlin_y) = if m == 0 { (Vec::new(), Vec::new()) } else { real_points(&pq.q, prec)? };
    if m > 0 && (pq.q.deg0() != m - 1 || !alternates(&xi, &yi)) {
        return Err(interleaving_error("interlacing on ℝ", prec));
    }
    Ok(KarlinDecomposition {
        domain: KarlinDomain::Real,
        p: pq.p,
        q: pq.q,
        w_p: a.lc(),
        w_q: a.lc(),
        m_p: RatPoly::one(),
        m_q: RatPoly::one(),
        karlin_x,
        karlin_y,
        precision: prec,
        branch: None,
    })
}

/// Roots of `A(y²)` in the upper half-plane made symmetric under `z ↦ −z̄`:
/// the `r` closest to the imaginary axis are put on it, the rest are paired.
fn symmetrize(pairs: &[(Dyadic, Dyadic)], r: usize) -> Result<Vec<(Dyadic, Dyadic)>> {
    let mut by_abs = pairs.to_vec();
    by_abs.sort_by(|x, y| x.0.abs().cmp(&y.0.abs()));
    let rest = by_abs.split_off(r);
    let mut out: Vec<(Dyadic, Dyadic)> = by_abs.into_iter().map(|(_, d)| (Dyadic::zero(), d)).collect();
    let (mut pos, mut neg): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(g, _)| g.is_positive());
    if pos.len() != neg.len() {
        return Err(Error::PrecisionInsufficient("roots of A(y²) are not symmetric".into()));
    }
    pos.sort();
    for (g, d) in pos {
        // Mirror partner: the negative root nearest to (−γ, δ).
        let dist = |(g2, d2): &(Dyadic, Dyadic)| (&g + g2).abs().max((&d - d2).abs());
        let j = (0..neg.len()).min_by(|&x, &y| dist(&neg[x]).cmp(&dist(&neg[y]))).unwrap();
        let (g2, d2) = neg.swap_remove(j);
        let gm = (&g - &g2).mul_pow2(-1);
        let dm = (&d + &d2).mul_pow2(-1);
        out.push((gm.clone(), dm.clone()));
        out.push((-gm, dm));
    }
    Ok(out)
}

/// Even part `Σ c_{2k} uᵏ` and odd part `Σ c_{2k+1} uᵏ`.
fn parity_parts(s: &RatPoly) -> (RatPoly, RatPoly) {
    let c = s.coeffs();
    (
        RatPoly::new(c.iter().step_by(2).cloned().collect()),
        RatPoly::new(c.iter().skip(1).step_by(2).cloned().collect()),
    )
}

fn positive_lc(p: RatPoly) -> RatPoly {
    if p.lc().is_negative() {
        p.scale(&-Rational::one())
    } else {
        p
    }
}

/// `𝒫, 𝒬, r mod 4` with `A ≈ a_d(𝒫² + x𝒬²)`; no interlacing checks.
fn halfline_pair(a: &RatPoly, prec: u64) -> Result<(RatPoly, RatPoly, u8)> {
    let d = a.deg0();
    let r = SturmChain::new(a).count(&Domain::Open(Bound::NegInf, Bound::Finite(Rational::zero())));
    let roots = RootSolver::new(RootBudget::from_env()).refine(&a.substitute_square(), prec)?;
    let sym = symmetrize(&roots.pairs, r)?;
    let pq = split_pq(&sym, &Rational::one())?;
    let (p_even, p_odd) = parity_parts(&pq.p);
    let (q_even, q_odd) = parity_parts(&pq.q);
    // P + iQ = iʳ(𝒫(y²) + iy𝒬(y²)): the even one of P, Q carries 𝒫.
    let (cal_p, cal_q, stray) = if d % 2 == 0 { (p_even, q_odd, (p_odd, q_even)) } else { (q_even, p_odd, (q_odd, p_even)) };
    if !stray.0.is_zero() || !stray.1.is_zero() {
        return Err(Error::Internal("symmetrized roots gave mixed parity".into()));
    }
    Ok((positive_lc(cal_p), positive_lc(cal_q), (r % 4) as u8))
}

fn check_positive_halfline(a: &RatPoly) -> Result<()> {
    let open = Domain::Open(Bound::Finite(Rational::zero()), Bound::PosInf);
    if a.is_zero() || a.lc().is_negative() || !a.tc().is_positive() || SturmChain::new(a).count(&open) > 0 {
        return Err(witness_error(a, find_witness_halfline(a), &[&Rational::zero()]));
    }
    if !a.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    Ok(())
}

/// Every root lies in the open `(lo, hi)`; `None` stands for infinity.
pub(crate) fn roots_inside(p: &RatPoly, lo: Option<&Rational>, hi: Option<&Rational>) -> bool {
    let b = |x: Option<&Rational>, inf: Bound| x.map_or(inf, |v| Bound::Finite(v.clone()));
    let ends_ok = lo.is_none_or(|v| !p.eval(v).is_zero()) && hi.is_none_or(|v| !p.eval(v).is_zero());
    p.is_constant() || (ends_ok && SturmChain::new(p).count(&Domain::Open(b(lo, Bound::NegInf), b(hi, Bound::PosInf))) == p.deg0())
}

/// `A = a_d(𝒫² + x𝒬²)` with interlacing positive roots.
pub fn decompose_halfline(a: &RatPoly, prec: u64) -> Result<KarlinDecomposition> {
    check_positive_halfline(a)?;
    let (p, q, branch) = halfline_pair(a, prec)?;
    let d = a.deg0();
    let (xi, karlin_x) = real_points(&p, prec)?;
    let (yi, karlin_y) = real_points(&q, prec)?;
    let zero = Rational::zero();
    let degrees_ok = if d % 2 == 0 { p.deg0() == d / 2 && (d == 0 || q.deg0() == d / 2 - 1) } else { p.deg0() == d / 2 && q.deg0() == d / 2 };
    if !degrees_ok || !roots_inside(&p, Some(&zero), None) || !roots_inside(&q, Some(&zero), None) || !alternates(&xi, &yi) {
        return Err(interleaving_error("interlacing on (0, ∞)", prec));
    }
    Ok(KarlinDecomposition {
        domain: KarlinDomain::HalfLine,
        p,
        q,
        w_p: a.lc(),
        w_q: a.lc(),
        m_p: RatPoly::one(),
        m_q: RatPoly::x(),
        karlin_x,
        karlin_y,
        precision: prec,
        branch: Some(branch),
    })
}

/// Karlin decomposition on `[a, b]`: even `d` gives multipliers `1, (x−a)(b−x)`,
/// odd `d` gives `(x−a), (b−x)`. For odd `d` the points start with a root of `Q`.
pub fn decompose_interval(a_poly: &RatPoly, a: &Rational, b: &Rational, prec: u64) -> Result<KarlinDecomposition> {
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    let d = a_poly.deg0();
    let open = Domain::Open(Bound::Finite(a.clone()), Bound::Finite(b.clone()));
    if a_poly.is_zero() || !a_poly.eval(a).is_positive() || !a_poly.eval(b).is_positive() || SturmChain::new(a_poly).count(&open) > 0 {
        return Err(witness_error(a_poly, find_witness_on(a_poly, Some(a), Some(b)), &[a, b]));
    }
    if !a_poly.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    let two = Rational::from_integer(2.into());
    let w = b - a;
    // B(x) = A(((b−a)x + a + b)/2) is positive on [−1, 1]; G = Goursat(B) on [0, ∞).
    let bx = a_poly.compose(&RatPoly::new(vec![(a + b) / &two, &w / &two]));
    let g = goursat(&bx, d)?;
    let (cp, cq, branch) = halfline_pair(&g, prec)?;
    // 1 + x = 2(X − a)/(b − a), 1 − x = 2(b − X)/(b − a).
    let la = RatPoly::linear_root(a).scale(&(&two / &w));
    let lb = RatPoly::linear_root(b).scale(&(-&two / &w));
    let xa = RatPoly::linear_root(a);
    let bxm = RatPoly::linear_root(b).scale(&-Rational::one());
    let scale = g.lc() * pow2(-(d as i64));
    let (p, q, m_p, m_q, w_p, w_q);
    if d % 2 == 0 {
        let m = d / 2;
        p = homogenize(&cp, m, &lb, &la);
        q = if m == 0 { RatPoly::zero() } else { homogenize(&cq, m - 1, &lb, &la) };
        // (1+x)(1−x) = 4(X − a)(b − X)/(b − a)².
        (m_p, m_q) = (RatPoly::one(), &xa * &bxm);
        (w_p, w_q) = (scale.clone(), &scale * Rational::from_integer(4.into()) / (&w * &w));
    } else {
        let m = d / 2;
        p = homogenize(&cp, m, &lb, &la);
        q = homogenize(&cq, m, &lb, &la);
        (m_p, m_q) = (xa, bxm);
        (w_p, w_q) = (&scale * &two / &w, &scale * &two / &w);
    }
    let p = positive_lc(p);
    let q = positive_lc(q);
    let (xi, karlin_x) = real_points(&p, prec)?;
    let (yi, karlin_y) = if q.is_zero() { (Vec::new(), Vec::new()) } else { real_points(&q, prec)? };
    let order_ok = if d % 2 == 0 { alternates(&xi, &yi) } else { alternates(&yi, &xi) };
    if !order_ok || !roots_inside(&p, Some(a), Some(b)) || (!q.is_zero() && !roots_inside(&q, Some(a), Some(b))) {
        return Err(interleaving_error("interlacing on the interval", prec));
    }
    Ok(KarlinDecomposition {
        domain: KarlinDomain::Interval { a: a.clone(), b: b.clone() },
        p,
        q,
        w_p,
        w_q,
        m_p,
        m_q,
        karlin_x,
        karlin_y,
        precision: prec,
        branch: Some(branch),
    })
}

/// Runs `f` at `prec, 2·prec, …` while it reports insufficient precision.
pub fn with_precision_retry<T>(prec: u64, max_prec: u64, mut f: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let mut p = prec.max(1);
    loop {
        match f(p) {
            Err(Error::PrecisionInsufficient(_)) if p < max_prec => p = (2 * p).min(max_prec),
            other => return other,
        }
    }
}

/// Bound on `‖A − a_d(P² + Q²)‖∞` for roots known to `2^(−prec)`, from the fan-in error lemma.
pub fn reconstruction_error_exponent(a: &RatPoly, prec: u64) -> i64 {
    let n = a.deg0();
    let tau = crate::arith::ceil_log2(&a.root_magnitude_bound()).max(1) as u64;
    let lc_bits = crate::arith::ceil_log2(&a.lc().abs()).max(0);
    crate::fanin::fanin_error_exponent(n, tau, prec) + lc_bits + lg(n) as i64
}
