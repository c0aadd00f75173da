//! GCD over ℚ and Yun's square-free factorization.

use super::sturm::prs;
use super::RatPoly;

pub(crate) fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_zero() {
        return b.make_monic();
    }
    if b.is_zero() {
        return a.make_monic();
    }
    let (u, v) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
    let seq = prs(u.primitive_int(), v.primitive_int(), false);
    let last = &seq.last().unwrap().0;
    RatPoly::from_ints(last.clone()).make_monic()
}

/// Pairwise-coprime monic square-free factors with multiplicities; `A = lc(A)·∏ fᵢ^mᵢ`.
pub fn yun_squarefree_factorization(a: &RatPoly) -> Vec<(RatPoly, u32)> {
    let f = a.make_monic();
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative();
    let g = gcd(&f, &df);
    let mut b = f.exact_div(&g);
    let mut c = df.exact_div(&g);
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let ai = gcd(&b, &d);
        b = b.exact_div(&ai);
        c = d.exact_div(&ai);
        d = &c - &b.derivative();
        if !ai.is_constant() {
            out.push((ai, i));
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    fn rebuild(a: &RatPoly, parts: &[(RatPoly, u32)]) -> RatPoly {
        let mut r = RatPoly::constant(a.lc());
        for (f, m) in parts {
            r = &r * &f.pow(*m);
        }
        r
    }

    #[test]
    fn yun_examples() {
        let a = &p(&[-1, 1]).pow(2) * &p(&[1, 0, 1]);
        assert_eq!(yun_squarefree_factorization(&a), vec![(p(&[1, 0, 1]), 1), (p(&[-1, 1]), 2)]);
        assert_eq!(yun_squarefree_factorization(&p(&[1, 0, 1])), vec![(p(&[1, 0, 1]), 1)]);
        assert_eq!(yun_squarefree_factorization(&p(&[1, 0, 1]).pow(3)), vec![(p(&[1, 0, 1]), 3)]);
        assert!(yun_squarefree_factorization(&p(&[5])).is_empty());
    }

    proptest! {
        #[test]
        fn yun_reconstructs(
            roots in prop::collection::vec((-6i64..6, 1i64..4, 1u32..4), 1..5),
            lc in 1i64..7,
        ) {
            let mut a = RatPoly::from_i64s(&[lc]);
            for (n, d, m) in &roots {
                a = &a * &RatPoly::linear_root(&ratio(*n, *d)).pow(*m);
            }
            let parts = yun_squarefree_factorization(&a);
            prop_assert_eq!(rebuild(&a, &parts), a.clone());
            for (i, (f, _)) in parts.iter().enumerate() {
                prop_assert!(f.gcd(&f.derivative()).is_constant());
                prop_assert_eq!(f.lc(), ratio(1, 1));
                for (g, _) in &parts[i + 1..] {
                    prop_assert!(f.gcd(g).is_constant());
                }
            }
        }
    }
}
