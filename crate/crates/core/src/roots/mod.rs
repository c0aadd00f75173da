//! Certified approximation of all complex roots, and real root isolation.
//!
//! [`refine_all_roots`] returns dyadic approximations within `2^(−κ)` of the
//! roots of a square-free polynomial. Every answer is backed by pairwise
//! disjoint inclusion disks computed with outward-rounded magnitudes.

mod aberth;
pub(crate) mod float;
mod real;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::arith::{Dyadic, DyadicComplex};
use crate::error::{Error, Result};
use crate::upoly::RatPoly;
use aberth::Config;
use float::{CFloat, Float, Mag};

pub use real::{has_real_root, isolate_real_roots, refine_real_root, RealRootIsolation, RootInterval};
pub(crate) use real::strictly_before;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDisk {
    pub center: DyadicComplex,
    pub radius: Dyadic,
}

/// Approximations `γ ± iδ` (`δ > 0`) and real roots, each within `2^(−kappa)`
/// of a distinct root. The disks of radius `2^(−kappa)` are pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatePairSet {
    pub pairs: Vec<(Dyadic, Dyadic)>,
    pub real_roots: Vec<Dyadic>,
    pub kappa: u64,
}

impl ConjugatePairSet {
    pub fn degree(&self) -> usize {
        2 * self.pairs.len() + self.real_roots.len()
    }

    /// All approximations, conjugates included.
    pub fn all_roots(&self) -> Vec<DyadicComplex> {
        let mut v: Vec<DyadicComplex> = self.real_roots.iter().map(|r| DyadicComplex::real(r.clone())).collect();
        for (g, d) in &self.pairs {
            v.push(DyadicComplex::new(g.clone(), d.clone()));
            v.push(DyadicComplex::new(g.clone(), -d));
        }
        v
    }

    pub fn disks(&self) -> Vec<RootDisk> {
        let radius = Dyadic::new(BigInt::from(1), self.kappa);
        self.all_roots()
            .into_iter()
            .map(|center| RootDisk {
                center,
                radius: radius.clone(),
            })
            .collect()
    }
}

/// Limits on the precision schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBudget {
    /// Working precision of the first multiprecision pass; `None` picks `2(τ + d)`.
    pub initial_precision: Option<u64>,
    pub max_doublings: u32,
    pub max_precision: u64,
}

impl Default for RootBudget {
    fn default() -> Self {
        RootBudget {
            initial_precision: None,
            max_doublings: 20,
            max_precision: 1 << 24,
        }
    }
}

impl RootBudget {
    /// Default budget, with `UPOS_MAX_PRECISION` (bits) capping the schedule when set.
    pub fn from_env() -> Self {
        let mut b = RootBudget::default();
        if let Some(cap) = std::env::var("UPOS_MAX_PRECISION").ok().and_then(|v| v.trim().parse().ok()) {
            b.max_precision = cap;
        }
        b
    }
}

#[derive(Clone, Debug, Default)]
pub struct RootSolver {
    pub budget: RootBudget,
}

impl RootSolver {
    pub fn new(budget: RootBudget) -> Self {
        RootSolver { budget }
    }

    pub fn refine(&self, a: &RatPoly, kappa: u64) -> Result<ConjugatePairSet> {
        if a.is_zero() {
            return Err(Error::Precondition("zero polynomial has no finite root set".into()));
        }
        if !a.is_square_free() {
            return Err(Error::NotSquareFree);
        }
        let nreal = isolate_real_roots(a).intervals.len();
        self.refine_with_real_count(a, kappa, nreal)
    }

    /// As [`RootSolver::refine`] for a square-free `a` whose number of distinct real roots is known.
    pub(crate) fn refine_with_real_count(&self, a: &RatPoly, kappa: u64, nreal: usize) -> Result<ConjugatePairSet> {
        self.start(a, nreal)?.refine(kappa)
    }

    /// Isolates the roots once; the returned refiner can then be asked for any precision.
    pub(crate) fn start(&self, a: &RatPoly, nreal: usize) -> Result<Refiner> {
        let c = a.primitive_int();
        let cf = aberth::to_floats(&c);
        if c.len() == 1 {
            return Ok(Refiner {
                budget: self.budget.clone(),
                cf,
                cfg: Config { real: Vec::new(), upper: Vec::new() },
                prec: 64,
                radii: Vec::new(),
                extra: 0,
            });
        }
        let (cfg, prec, inc) = self.isolate(&c, &cf, nreal)?;
        Ok(Refiner {
            budget: self.budget.clone(),
            cf,
            cfg,
            prec,
            radii: inc.radii,
            extra: inc.cond.max(0.0).ceil() as u64,
        })
    }

    /// Aberth passes with doubling precision until the disks separate.
    fn isolate(&self, c: &[BigInt], cf: &[Float], nreal: usize) -> Result<(Config, u64, aberth::Inclusion)> {
        let d = c.len() - 1;
        let tau = c.iter().map(|v| v.bits()).max().unwrap_or(0);
        let mut start = aberth::newton_polygon_start(c);
        aberth::aberth_f64(c, &mut start, 60 + 4 * d);
        let mut z: Vec<CFloat> = start.iter().map(|w: &Complex64| CFloat::new(Float::from_f64(w.re), Float::from_f64(w.im))).collect();
        let mut prec = self.budget.initial_precision.unwrap_or(2 * (tau + d as u64)).max(64);
        for _ in 0..=self.budget.max_doublings {
            if prec > self.budget.max_precision {
                break;
            }
            let mut frozen = vec![false; d];
            let mut best = f64::INFINITY;
            let mut stalls = 0;
            for _ in 0..(40 + 2 * d) {
                let (done, worst) = aberth::aberth_sweep(cf, &mut z, prec, &mut frozen);
                if done {
                    break;
                }
                // Give up on this precision once the corrections stop shrinking.
                if worst < best - 1.0 {
                    best = worst;
                    stalls = 0;
                } else {
                    stalls += 1;
                    if stalls >= 4 {
                        break;
                    }
                }
            }
            if let Some(cfg) = Config::snap(&z, nreal) {
                let inc = aberth::inclusion(cf, &cfg, prec);
                if inc.disjoint {
                    return Ok((cfg, prec, inc));
                }
                z = cfg.all();
            }
            prec *= 2;
        }
        Err(Error::PrecisionExhausted { bits: prec })
    }

}

/// Isolated, conjugation-closed approximations that can be sharpened on demand.
pub(crate) struct Refiner {
    budget: RootBudget,
    cf: Vec<Float>,
    cfg: Config,
    prec: u64,
    radii: Vec<Mag>,
    /// Bits lost to conditioning, estimated at isolation.
    extra: u64,
}

impl Refiner {
    /// Newton steps until the radii fall below `2^(−κ−2)`, then rounding to dyadics
    /// whose `2^(−κ')` disks are disjoint.
    pub(crate) fn refine(&mut self, kappa: u64) -> Result<ConjugatePairSet> {
        let n = self.cf.len() - 1;
        let lgn = 64 - (n as u64).leading_zeros() as u64;
        let extra = self.extra;
        let mut target = (kappa + 8 + 2 * lgn + extra).max(self.prec);
        let mut rounds = 0;
        loop {
            let worst = self.radii.iter().map(|r| r.log2()).fold(f64::NEG_INFINITY, f64::max);
            if worst <= -((kappa + 2) as f64) {
                if let Some(out) = round_out(&self.cfg, &self.radii, kappa) {
                    return Ok(out);
                }
                target += target / 2;
            }
            if target > self.budget.max_precision || rounds > 64 + 2 * self.budget.max_doublings {
                return Err(Error::PrecisionExhausted { bits: target });
            }
            rounds += 1;
            let acc = (-worst).clamp(0.0, 1e9) as u64;
            self.prec = (2 * acc + 2 * extra + 64).clamp(self.prec, target);
            let prec = self.prec;
            for x in self.cfg.real.iter_mut() {
                aberth::newton_r(&self.cf, x, prec);
            }
            for u in self.cfg.upper.iter_mut() {
                aberth::newton_c(&self.cf, u, prec);
            }
            let inc = aberth::inclusion(&self.cf, &self.cfg, prec);
            if !inc.disjoint {
                return Err(Error::Internal("Newton refinement lost root isolation".into()));
            }
            let now = inc.radii.iter().map(|r| r.log2()).fold(f64::NEG_INFINITY, f64::max);
            if prec == target && now > worst - 1.0 {
                target += target / 2;
            }
            self.radii = inc.radii;
        }
    }
}

/// Rounds to `2^(−k)` with `k ≥ κ + 3`, raising `k` until every `δ > 0` and the
/// `2^(−k)` disks separate. `None` when the radii do not allow it.
fn round_out(cfg: &Config, radii: &[Mag], kappa: u64) -> Option<ConjugatePairSet> {
    for bump in 0..256 {
        let k = kappa + bump;
        let grid = k + 3;
        if radii.iter().any(|r| !r.lt(Mag::pow2(-(k as i64) - 2))) {
            return None;
        }
        let real: Vec<Dyadic> = cfg.real.iter().map(|x| x.to_dyadic(grid)).collect();
        let pairs: Vec<(Dyadic, Dyadic)> = cfg.upper.iter().map(|u| (u.re.to_dyadic(grid), u.im.to_dyadic(grid))).collect();
        if pairs.iter().any(|(_, d)| !d.is_positive()) {
            continue;
        }
        let set = ConjugatePairSet {
            pairs,
            real_roots: real,
            kappa: k,
        };
        if disks_disjoint(&set) {
            let mut set = set;
            set.real_roots.sort();
            set.pairs.sort();
            return Some(set);
        }
    }
    None
}

fn disks_disjoint(set: &ConjugatePairSet) -> bool {
    let pts: Vec<CFloat> = set
        .all_roots()
        .iter()
        .map(|z| CFloat::new(Float::from_dyadic(&z.re), Float::from_dyadic(&z.im)))
        .collect();
    let gap = Mag::pow2(1 - set.kappa as i64);
    (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| gap.lt(pts[i].sub(&pts[j]).mag_lo())))
}

/// Approximations of all roots of a square-free `a` within `2^(−kappa)`, under the
/// default budget (see [`RootBudget::from_env`]).
pub fn refine_all_roots(a: &RatPoly, kappa: u64) -> Result<ConjugatePairSet> {
    RootSolver::new(RootBudget::from_env()).refine(a, kappa)
}
