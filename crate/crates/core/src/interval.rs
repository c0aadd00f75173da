//! Positivity on `[a, b]` and `(0, ∞)` by reduction to the real line.
//!
//! `φ(y) = (a + by²)/(1 + y²)` maps ℝ onto `[a, b)`, and `A_φ = (1+y²)^d·A(φ)`.
//! Each summand `s(y) = s_e(y²) + y·s_o(y²)` of a certificate for `A_φ` is
//! pulled back through `y² ↦ (x−a)/(b−x)`.

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result, Witness};
use crate::upoly::RatPoly;
use crate::usos::{certify_positive_r, find_witness_halfline, find_witness_on, WsosCertificate};

/// `Σ cᵢ Xⁱ Y^{k−i}` for `c` of degree at most `k`.
pub(crate) fn homogenize(c: &RatPoly, k: usize, x: &RatPoly, y: &RatPoly) -> RatPoly {
    assert!(c.deg0() <= k || c.is_zero());
    let mut ypow = vec![RatPoly::one()];
    for j in 1..=k {
        ypow.push(&ypow[j - 1] * y);
    }
    // Horner in X with Y-powers filling the lower terms.
    let mut r = RatPoly::constant(c.coeff(k));
    for j in 1..=k {
        r = &(&r * x) + &ypow[j].scale(&c.coeff(k - j));
    }
    r
}

fn check_interval(a: &Rational, b: &Rational) -> Result<()> {
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    Ok(())
}

/// `(1+y²)^d·A((a + by²)/(1 + y²))` with `d = deg A`.
pub fn transform_to_line(a_poly: &RatPoly, a: &Rational, b: &Rational) -> Result<RatPoly> {
    check_interval(a, b)?;
    let d = a_poly.deg0();
    let num = RatPoly::new(vec![a.clone(), Rational::zero(), b.clone()]);
    let den = RatPoly::from_i64s(&[1, 0, 1]);
    Ok(homogenize(a_poly, d, &num, &den))
}

/// `A(y²)`.
pub fn transform_halfline(a_poly: &RatPoly) -> RatPoly {
    a_poly.substitute_square()
}

/// `(1+x)^d·A((1−x)/(1+x))`.
pub fn goursat(a_poly: &RatPoly, d: usize) -> Result<RatPoly> {
    if !a_poly.is_zero() && a_poly.deg0() > d {
        return Err(Error::DegreeUnderflow {
            degree: a_poly.deg0(),
            requested: d,
        });
    }
    Ok(homogenize(a_poly, d, &RatPoly::from_i64s(&[1, -1]), &RatPoly::from_i64s(&[1, 1])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Interval { a: Rational, b: Rational },
    HalfLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `multiplier·Σ w·s²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareGroup {
    pub multiplier: RatPoly,
    pub terms: Vec<(Rational, RatPoly)>,
}

impl SquareGroup {
    /// `Σ w·s²` without the multiplier.
    pub fn sum(&self) -> RatPoly {
        RatPoly::weighted_square_sum(self.terms.iter().map(|(w, s)| (w, s)))
    }

    pub fn expand(&self) -> RatPoly {
        &self.multiplier * &self.sum()
    }
}

/// `A = groups[0].expand() + groups[1].expand()`, every weight nonnegative and
/// both multipliers nonnegative on the region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalCertificate {
    pub region: Region,
    pub parity: Parity,
    pub groups: [SquareGroup; 2],
    /// Certificate of the transformed polynomial on ℝ.
    pub line: WsosCertificate,
}

impl IntervalCertificate {
    pub fn expand(&self) -> RatPoly {
        &self.groups[0].expand() + &self.groups[1].expand()
    }

    pub fn summand_count(&self) -> usize {
        self.groups.iter().map(|g| g.terms.len()).sum()
    }

    /// Weights nonnegative and multipliers nonnegative on the region.
    pub fn is_well_formed(&self) -> bool {
        let weights = self.groups.iter().all(|g| g.terms.iter().all(|(w, _)| !w.is_negative()));
        let ok_mult = |m: &RatPoly| match &self.region {
            Region::HalfLine => *m == RatPoly::one() || *m == RatPoly::x(),
            Region::Interval { a, b } => {
                let xa = RatPoly::linear_root(a);
                let bx = RatPoly::linear_root(b).scale(&-Rational::one());
                *m == RatPoly::one() || *m == xa || *m == bx || *m == &xa * &bx
            }
        };
        weights && self.groups.iter().all(|g| ok_mult(&g.multiplier))
    }
}

/// `s(y) = s_e(y²) + y·s_o(y²)`.
fn split_parity(s: &RatPoly) -> (RatPoly, RatPoly) {
    let c = s.coeffs();
    let even = c.iter().step_by(2).cloned().collect();
    let odd = c.iter().skip(1).step_by(2).cloned().collect();
    (RatPoly::new(even), RatPoly::new(odd))
}

fn interval_witness(a_poly: &RatPoly, a: &Rational, b: &Rational) -> Error {
    match find_witness_on(a_poly, Some(a), Some(b)) {
        Some(t) => Error::NotPositive(Witness {
            value: a_poly.eval(&t),
            t,
        }),
        None => Error::Internal("transformed polynomial rejected but no negative point on the interval".into()),
    }
}

/// Weighted SOS certificate of `A ≥ 0` on `[a, b]` with the boundary multipliers
/// `1, (x−a)(b−x)` for even `d` and `b−x, x−a` for odd `d`.
pub fn certify_interval(a_poly: &RatPoly, a: &Rational, b: &Rational) -> Result<IntervalCertificate> {
    let a_phi = transform_to_line(a_poly, a, b)?;
    let line = match certify_positive_r(&a_phi) {
        Ok(c) => c,
        Err(Error::NotPositive(_)) => return Err(interval_witness(a_poly, a, b)),
        Err(e) => return Err(e),
    };
    let d = a_poly.deg0();
    let xa = RatPoly::linear_root(a);
    let bx = RatPoly::linear_root(b).scale(&-Rational::one());
    let denom = (b - a).pow(d as i32);
    let (parity, ke, ko, me, mo) = if d % 2 == 0 {
        (Parity::Even, d / 2, (d / 2).saturating_sub(1), RatPoly::one(), &xa * &bx)
    } else {
        (Parity::Odd, (d - 1) / 2, (d - 1) / 2, bx.clone(), xa.clone())
    };
    let mut even_terms = Vec::new();
    let mut odd_terms = Vec::new();
    for (w, s) in line.summands() {
        let w = w / &denom;
        let (se, so) = split_parity(&s);
        if !se.is_zero() {
            even_terms.push((w.clone(), homogenize(&se, ke, &xa, &bx)));
        }
        if !so.is_zero() {
            odd_terms.push((w, homogenize(&so, ko, &xa, &bx)));
        }
    }
    Ok(IntervalCertificate {
        region: Region::Interval { a: a.clone(), b: b.clone() },
        parity,
        groups: [
            SquareGroup {
                multiplier: me,
                terms: even_terms,
            },
            SquareGroup {
                multiplier: mo,
                terms: odd_terms,
            },
        ],
        line,
    })
}

/// `A = Σ w·s_e(x)² + x·Σ w·s_o(x)²` from a certificate of `A(y²)`.
pub fn certify_halfline(a_poly: &RatPoly) -> Result<IntervalCertificate> {
    let line = match certify_positive_r(&transform_halfline(a_poly)) {
        Ok(c) => c,
        Err(Error::NotPositive(_)) => {
            return Err(match find_witness_halfline(a_poly) {
                Some(t) => Error::NotPositive(Witness {
                    value: a_poly.eval(&t),
                    t,
                }),
                None => Error::Internal("A(y²) rejected but no negative point on the half-line".into()),
            })
        }
        Err(e) => return Err(e),
    };
    let mut even_terms = Vec::new();
    let mut odd_terms = Vec::new();
    for (w, s) in line.summands() {
        let (se, so) = split_parity(&s);
        if !se.is_zero() {
            even_terms.push((w.clone(), se));
        }
        if !so.is_zero() {
            odd_terms.push((w, so));
        }
    }
    Ok(IntervalCertificate {
        region: Region::HalfLine,
        parity: if a_poly.deg0() % 2 == 0 { Parity::Even } else { Parity::Odd },
        groups: [
            SquareGroup {
                multiplier: RatPoly::one(),
                terms: even_terms,
            },
            SquareGroup {
                multiplier: RatPoly::x(),
                terms: odd_terms,
            },
        ],
        line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    #[test]
    fn transform_examples() {
        assert_eq!(transform_to_line(&p(&[0, 1]), &rat(1), &rat(2)).unwrap(), p(&[1, 0, 2]));
        assert_eq!(transform_to_line(&p(&[1]), &rat(1), &rat(2)).unwrap(), p(&[1]));
        assert_eq!(transform_to_line(&p(&[0, 0, 1]), &rat(0), &rat(1)).unwrap(), p(&[0, 0, 0, 0, 1]));
        assert!(matches!(transform_to_line(&p(&[0, 1]), &rat(2), &rat(2)), Err(Error::EmptyInterval)));
        assert!(matches!(transform_to_line(&p(&[0, 1]), &rat(3), &rat(2)), Err(Error::EmptyInterval)));
    }

    #[test]
    fn halfline_transform_examples() {
        assert_eq!(transform_halfline(&p(&[1, 1])), p(&[1, 0, 1]));
        assert_eq!(transform_halfline(&p(&[1, 0, 1])), p(&[1, 0, 0, 0, 1]));
        assert_eq!(transform_halfline(&p(&[0, 2])), p(&[0, 0, 2]));
    }

    #[test]
    fn goursat_examples() {
        assert_eq!(goursat(&p(&[0, 1]), 1).unwrap(), p(&[1, -1]));
        assert_eq!(goursat(&p(&[1, -1]), 1).unwrap(), p(&[0, 2]));
        assert_eq!(goursat(&p(&[1, 0, 1]), 2).unwrap(), p(&[2, 0, 2]));
        assert!(matches!(goursat(&p(&[1, 0, 1]), 1), Err(Error::DegreeUnderflow { degree: 2, requested: 1 })));
    }

    #[test]
    fn x_on_one_two() {
        let c = certify_interval(&p(&[0, 1]), &rat(1), &rat(2)).unwrap();
        assert_eq!(c.parity, Parity::Odd);
        assert_eq!(c.groups[0].multiplier, p(&[2, -1]));
        assert_eq!(c.groups[1].multiplier, p(&[-1, 1]));
        // x = (2 − x)·1 + (x − 1)·2.
        assert_eq!(c.groups[0].sum(), p(&[1]));
        assert_eq!(c.groups[1].sum(), p(&[2]));
        assert_eq!(c.expand(), p(&[0, 1]));
        assert!(c.is_well_formed());
    }

    #[test]
    fn constant_on_unit_interval() {
        let c = certify_interval(&p(&[1]), &rat(0), &rat(1)).unwrap();
        assert_eq!(c.expand(), p(&[1]));
        assert_eq!(c.groups[0].sum(), p(&[1]));
        assert!(c.groups[1].terms.is_empty());
    }

    #[test]
    fn quadratic_on_and_off_its_positive_range() {
        let a = p(&[2, -3, 1]);
        let c = certify_interval(&a, &rat(3), &rat(4)).unwrap();
        assert_eq!(c.parity, Parity::Even);
        assert_eq!(c.expand(), a);
        assert!(c.is_well_formed());
        match certify_interval(&a, &rat(0), &rat(3)) {
            Err(Error::NotPositive(w)) => {
                assert!(w.t >= rat(0) && w.t <= rat(3));
                assert!(w.value.is_negative());
                assert_eq!(a.eval(&w.t), w.value);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(a.eval(&ratio(3, 2)), ratio(-1, 4));
    }

    #[test]
    fn endpoint_zero_goes_through_the_cofactor() {
        let a = p(&[0, 0, 1]);
        let c = certify_interval(&a, &rat(0), &rat(1)).unwrap();
        assert_eq!(c.expand(), a);
        assert!(c.is_well_formed());
        let c = certify_interval(&p(&[1, -1]), &rat(0), &rat(1)).unwrap();
        assert_eq!(c.expand(), p(&[1, -1]));
    }

    #[test]
    fn halfline_examples() {
        let c = certify_halfline(&p(&[1, 1])).unwrap();
        assert_eq!(c.groups[0].sum(), p(&[1]));
        assert_eq!(c.groups[1].sum(), p(&[1]));
        assert_eq!(c.expand(), p(&[1, 1]));

        let c = certify_halfline(&p(&[1, 0, 1])).unwrap();
        assert_eq!(c.expand(), p(&[1, 0, 1]));
        assert!(c.is_well_formed());

        match certify_halfline(&p(&[-1, 1])) {
            Err(Error::NotPositive(w)) => assert_eq!((w.t, w.value), (ratio(1, 2), ratio(-1, 2))),
            other => panic!("{other:?}"),
        }
        // Negative only left of the origin.
        assert_eq!(certify_halfline(&p(&[1, 2])).unwrap().expand(), p(&[1, 2]));
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-64i64..64, 1i64..16).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn goursat_involution(c in prop::collection::vec(-30i64..30, 0..7), extra in 0usize..3) {
            let a = p(&c);
            let d = a.deg0() + extra;
            let g = goursat(&goursat(&a, d).unwrap(), d).unwrap();
            prop_assert_eq!(g, a.scale(&crate::arith::pow2(d as i64)));
        }

        #[test]
        fn transform_matches_pointwise(c in prop::collection::vec(-30i64..30, 1..6), a in small_rat(), w in 1i64..20, t in small_rat()) {
            let a_poly = p(&c);
            let b = &a + ratio(w, 3);
            let phi = transform_to_line(&a_poly, &a, &b).unwrap();
            let one_t2 = rat(1) + &t * &t;
            let x = (&a + &b * &t * &t) / &one_t2;
            prop_assert_eq!(phi.eval(&t), one_t2.pow(a_poly.deg0() as i32) * a_poly.eval(&x));
            prop_assert!(phi.deg0() <= 2 * a_poly.deg0());
        }

        #[test]
        fn interval_round_trip(roots in prop::collection::vec(-40i64..40, 0..4), q in 1i64..9, a in small_rat(), w in 1i64..30) {
            // Real roots only at multiples of 1/4 outside [a, b], plus a positive quadratic factor.
            let b = &a + ratio(w, 4);
            let mut poly = p(&[q, 1, 1]);
            for r in &roots {
                let r = ratio(*r, 4);
                prop_assume!(r < a || r > b);
                let f = if r < a { RatPoly::linear_root(&r) } else { RatPoly::linear_root(&r).scale(&-rat(1)) };
                poly = &poly * &f;
            }
            let c = certify_interval(&poly, &a, &b).unwrap();
            prop_assert_eq!(c.expand(), poly.clone());
            prop_assert!(c.is_well_formed());
            // Same answer on the rescaled polynomial over [0, 1].
            let scaled = poly.compose(&RatPoly::new(vec![a.clone(), &b - &a]));
            prop_assert_eq!(certify_interval(&scaled, &rat(0), &rat(1)).unwrap().expand(), scaled);
        }
    }
}
