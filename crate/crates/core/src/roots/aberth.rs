//! Simultaneous approximation of all complex roots of an integer polynomial.
//!
//! A double-precision Aberth pass seeds a multiprecision Aberth pass; once the
//! roots are isolated, each one is polished by Newton steps. Inclusion radii come
//! from Gerschgorin's theorem applied to the Weierstrass correction matrix.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use super::float::{CFloat, Float, Mag};

fn log2_abs(c: &BigInt) -> f64 {
    Float::from_int(c.clone(), 0).mag_up().log2()
}

/// Starting points spread over circles whose radii follow the upper convex hull
/// of `(k, log2|c_k|)`.
pub(crate) fn newton_polygon_start(c: &[BigInt]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, log2_abs(v)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); pts[0].0];
    for (i, w) in hull.windows(2).enumerate() {
        let m = w[1].0 - w[0].0;
        let lr = ((w[0].1 - w[1].1) / m as f64).clamp(-1000.0, 1000.0);
        let r = lr.exp2();
        for t in 0..m {
            let theta = TAU * t as f64 / m as f64 + TAU * i as f64 / d as f64 + 0.7;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

/// `p(z)/p'(z)` and a flag telling whether `p(z)` is at rounding-noise level.
fn newton_ratio_f64(cf: &[f64], z: Complex64) -> Option<(Complex64, bool)> {
    let d = cf.len() - 1;
    let eps = f64::EPSILON;
    if z.norm() <= 1.0 {
        let (mut h, mut g, mut s) = (Complex64::new(cf[d], 0.0), Complex64::new(0.0, 0.0), cf[d].abs());
        let az = z.norm();
        for k in (0..d).rev() {
            g = g * z + h;
            h = h * z + cf[k];
            s = s * az + cf[k].abs();
        }
        let small = h.norm() <= 4.0 * (d as f64 + 1.0) * eps * s;
        let n = h / g;
        n.is_finite().then_some((n, small))
    } else {
        let w = 1.0 / z;
        let (mut q, mut dq, mut s) = (Complex64::new(cf[0], 0.0), Complex64::new(0.0, 0.0), cf[0].abs());
        let aw = w.norm();
        for &ck in &cf[1..] {
            dq = dq * w + q;
            q = q * w + ck;
            s = s * aw + ck.abs();
        }
        let small = q.norm() <= 4.0 * (d as f64 + 1.0) * eps * s;
        let n = z * q / (q * d as f64 - w * dq);
        n.is_finite().then_some((n, small))
    }
}

/// Gauss–Seidel Aberth iteration in double precision; converged roots are frozen.
pub(crate) fn aberth_f64(c: &[BigInt], z: &mut [Complex64], max_iter: usize) {
    let top = c.iter().map(|v| v.bits()).max().unwrap_or(0) as i64;
    let cf: Vec<f64> = c.iter().map(|v| Float::from_int(v.clone(), -top).to_f64()).collect();
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let Some((ratio, small)) = newton_ratio_f64(&cf, z[i]) else {
                continue;
            };
            if small {
                done[i] = true;
                continue;
            }
            all = false;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                if w.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            }
        }
        if all {
            break;
        }
    }
}

/// Integer coefficients as exact floats.
pub(crate) fn to_floats(c: &[BigInt]) -> Vec<Float> {
    c.iter().map(|v| Float::from_int(v.clone(), 0)).collect()
}

/// `(p(z), p'(z), bound on |p(z) − computed|)` by Horner at precision `prec`.
pub(crate) fn horner_c(c: &[Float], z: &CFloat, prec: u64) -> (CFloat, CFloat, Mag) {
    let d = c.len() - 1;
    let az = z.mag_up();
    let mut h = CFloat::new(c[d].clone(), Float::zero());
    let mut g = CFloat::zero();
    let mut err = Mag::zero();
    for k in (0..d).rev() {
        g = g.mul(z).add_p(&h, prec);
        let t = h.mul(z);
        let exact = CFloat::new(t.re.add(&c[k]), t.im);
        let (re, e1) = exact.re.round_err(prec);
        let (im, e2) = exact.im.round_err(prec);
        err = err.mul_up(az).add_up(e1).add_up(e2);
        h = CFloat::new(re, im);
    }
    (h, g, err)
}

/// Real analogue of [`horner_c`].
pub(crate) fn horner_r(c: &[Float], x: &Float, prec: u64) -> (Float, Float, Mag) {
    let d = c.len() - 1;
    let ax = x.mag_up();
    let mut h = c[d].clone();
    let mut g = Float::zero();
    let mut err = Mag::zero();
    for k in (0..d).rev() {
        g = g.mul(x).add_p(&h, prec);
        let (v, e) = h.mul(x).add(&c[k]).round_err(prec);
        err = err.mul_up(ax).add_up(e);
        h = v;
    }
    (h, g, err)
}

/// One Aberth sweep at precision `prec`: whether every root is at noise level,
/// and `log2` of the largest correction applied.
pub(crate) fn aberth_sweep(c: &[Float], z: &mut [CFloat], prec: u64, frozen: &mut [bool]) -> (bool, f64) {
    let n = z.len();
    let mut all = true;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        if frozen[i] {
            continue;
        }
        let (val, der, err) = horner_c(c, &z[i], prec);
        if val.mag_up().lt(err.mul_up(Mag::from_u64(4))) || val.is_zero() {
            frozen[i] = true;
            continue;
        }
        all = false;
        if der.is_zero() {
            continue;
        }
        let ratio = val.div_p(&der, prec);
        let mut s = CFloat::zero();
        for j in 0..n {
            if j != i {
                let diff = z[i].sub(&z[j]).round(prec);
                if !diff.is_zero() {
                    s = s.add_p(&diff.recip_p(prec), prec);
                }
            }
        }
        let one = CFloat::new(Float::from_int(1.into(), 0), Float::zero());
        let den = one.sub_p(&ratio.mul_p(&s, prec), prec);
        if den.is_zero() {
            continue;
        }
        let w = ratio.div_p(&den, prec);
        worst = worst.max(w.mag_up().log2());
        z[i] = z[i].sub_p(&w, prec);
    }
    (all, worst)
}

/// One Newton step on a complex approximation; returns the correction size.
pub(crate) fn newton_c(c: &[Float], z: &mut CFloat, prec: u64) -> Mag {
    let (val, der, _) = horner_c(c, z, prec);
    if val.is_zero() || der.is_zero() {
        return Mag::zero();
    }
    let w = val.div_p(&der, prec);
    *z = z.sub_p(&w, prec);
    w.mag_up()
}

pub(crate) fn newton_r(c: &[Float], x: &mut Float, prec: u64) -> Mag {
    let (val, der, _) = horner_r(c, x, prec);
    if val.is_zero() || der.is_zero() {
        return Mag::zero();
    }
    let w = val.div_p(&der, prec);
    *x = x.sub_p(&w, prec);
    w.mag_up()
}

/// Root approximations closed under conjugation: reals first, then the
/// upper half-plane representatives.
#[derive(Clone, Debug)]
pub(crate) struct Config {
    pub real: Vec<Float>,
    pub upper: Vec<CFloat>,
}

impl Config {
    pub fn all(&self) -> Vec<CFloat> {
        let mut v: Vec<CFloat> = self.real.iter().map(|x| CFloat::new(x.clone(), Float::zero())).collect();
        v.extend(self.upper.iter().cloned());
        v.extend(self.upper.iter().map(|u| CFloat::new(u.re.clone(), u.im.neg())));
        v
    }

    /// Picks the `nreal` approximations nearest the real axis as real and keeps the
    /// upper half of the rest; `None` if the remainder is not split evenly.
    pub fn snap(z: &[CFloat], nreal: usize) -> Option<Config> {
        let mut idx: Vec<usize> = (0..z.len()).collect();
        idx.sort_by(|&a, &b| z[a].im.abs().mag_up().log2().total_cmp(&z[b].im.abs().mag_up().log2()));
        let real: Vec<Float> = idx[..nreal].iter().map(|&i| z[i].re.clone()).collect();
        let upper: Vec<CFloat> = idx[nreal..]
            .iter()
            .filter(|&&i| z[i].im.sign() == num_bigint::Sign::Plus)
            .map(|&i| z[i].clone())
            .collect();
        (2 * upper.len() + nreal == z.len()).then_some(Config { real, upper })
    }
}

/// Outcome of an inclusion test: radii for `real` then `upper`, and a
/// conditioning estimate `log2(Σ|c_k||z|^k / (|c_d| ∏|z − z_j|))` per root.
#[derive(Clone, Debug)]
pub(crate) struct Inclusion {
    pub radii: Vec<Mag>,
    pub disjoint: bool,
    pub cond: f64,
}

/// Radii `n·|W_i|` with Weierstrass corrections `W_i = p(z_i)/(c_d ∏_{j≠i}(z_i − z_j))`;
/// when the disks are pairwise disjoint each holds exactly one root.
pub(crate) fn inclusion(c: &[Float], cfg: &Config, prec: u64) -> Inclusion {
    let all = cfg.all();
    let n = all.len();
    let s = cfg.real.len() + cfg.upper.len();
    let lc = c[n].mag_lo();
    let abs_c: Vec<Mag> = c.iter().map(|v| v.mag_up()).collect();
    let mut radii = Vec::with_capacity(s);
    let mut dist = vec![vec![Mag::zero(); n]; s];
    let mut cond = f64::NEG_INFINITY;
    for i in 0..s {
        let (val, err) = if i < cfg.real.len() {
            let (v, _, e) = horner_r(c, &cfg.real[i], prec);
            (v.mag_up(), e)
        } else {
            let (v, _, e) = horner_c(c, &all[i], prec);
            (v.mag_up(), e)
        };
        let mut den = lc;
        for j in 0..n {
            if j != i {
                let dj = all[i].sub(&all[j]).mag_lo();
                dist[i][j] = dj;
                den = den.mul_down(dj);
            }
        }
        let az = all[i].mag_up();
        let mut sum = Mag::zero();
        for a in abs_c.iter().rev() {
            sum = sum.mul_up(az).add_up(*a);
        }
        cond = cond.max(sum.log2() - den.log2());
        radii.push(val.add_up(err).div_up(den).mul_up(Mag::from_u64(n as u64)));
    }
    let radius_of = |j: usize| {
        if j < s {
            radii[j]
        } else {
            radii[j - cfg.upper.len()]
        }
    };
    let mut disjoint = radii.iter().all(|r| !r.log2().is_infinite() || r.is_zero());
    'outer: for i in 0..s {
        for j in 0..n {
            if j != i && (j >= s || j > i) && !radius_of(i).add_up(radius_of(j)).lt(dist[i][j]) {
                disjoint = false;
                break 'outer;
            }
        }
    }
    Inclusion { radii, disjoint, cond }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn start_points_follow_hull() {
        let z = newton_polygon_start(&ints(&[1, 0, 0, 0, 1]));
        assert_eq!(z.len(), 4);
        for w in &z {
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
        let z = newton_polygon_start(&ints(&[0, 1, 0, 1]));
        assert_eq!(z[0], Complex64::new(0.0, 0.0));
        assert_eq!(z.len(), 3);
    }

    #[test]
    fn f64_stage_finds_cubic_roots() {
        let c = ints(&[-6, 11, -6, 1]);
        let mut z = newton_polygon_start(&c);
        aberth_f64(&c, &mut z, 200);
        let mut re: Vec<f64> = z.iter().map(|w| w.re).collect();
        re.sort_by(f64::total_cmp);
        for (r, e) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - e).abs() < 1e-10);
        }
    }

    #[test]
    fn horner_error_bound_holds() {
        let c = to_floats(&ints(&[3, -7, 0, 5, 2]));
        let z = CFloat::new(Float::from_f64(0.123456789), Float::from_f64(-1.987654321));
        let (exact, _, _) = horner_c(&c, &z, 4000);
        let (approx, _, err) = horner_c(&c, &z, 20);
        let diff = approx.sub(&exact).mag_lo();
        assert!(diff.lt(err) || diff.is_zero());
    }

    #[test]
    fn inclusion_certifies_separated_roots() {
        let c = to_floats(&ints(&[1, 0, 1]));
        let cfg = Config {
            real: vec![],
            upper: vec![CFloat::new(Float::from_f64(1e-9), Float::from_f64(1.0 + 1e-9))],
        };
        let inc = inclusion(&c, &cfg, 128);
        assert!(inc.disjoint);
        assert!(inc.radii[0].log2() < -25.0);
        let bad = Config {
            real: vec![Float::from_f64(0.5), Float::from_f64(0.5000001)],
            upper: vec![],
        };
        assert!(!inclusion(&to_floats(&ints(&[-1, 0, 4])), &bad, 128).disjoint);
    }
}
