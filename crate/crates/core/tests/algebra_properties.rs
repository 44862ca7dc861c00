use addtheo::algebra::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn xy() -> Vars {
    Vars::new(&["x", "y"])
}

fn xyz() -> Vars {
    Vars::new(&["x", "y", "z"])
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Dense univariate polynomial in x (ascending coefficients).
fn uni(coeffs: &[i64]) -> MPoly {
    let v = xy();
    MPoly::from_terms(&v, coeffs.iter().enumerate().map(|(i, &c)| (Monomial::from_exps(&[i as u16, 0]), rat(c))))
}

/// Sparse polynomial over (x, y, z) from (exponents, coefficient) triples.
fn sparse(terms: &[((u16, u16, u16), i64)]) -> MPoly {
    MPoly::from_terms(&xyz(), terms.iter().map(|&((a, b, c), k)| (Monomial::from_exps(&[a, b, c]), rat(k))))
}

/// Bareiss fraction-free determinant.
fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Res(p, q) as the determinant of the Sylvester matrix.
fn sylvester(p: &[i64], q: &[i64]) -> BigInt {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, &c) in p.iter().rev().enumerate() {
            r[i + j] = c.into();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, &c) in q.iter().rev().enumerate() {
            r[i + j] = c.into();
        }
        rows.push(r);
    }
    det(rows)
}

fn dense(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 2..=max_deg + 1).prop_filter("nonzero leading", |v| *v.last().unwrap() != 0)
}

fn poly3() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u16..3, 0u16..3, 0u16..3), -5i64..=5), 1..6)
        .prop_map(|t| sparse(&t))
        .prop_filter("nonconstant", |p| !p.is_constant())
}

fn point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 3).prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_matches_sylvester_determinant(p in dense(4), q in dense(4)) {
        let r = resultant(&uni(&p), &uni(&q), "x").unwrap();
        let want = Rational::from_integer(sylvester(&p, &q));
        prop_assert_eq!(r.constant_value().unwrap_or_else(Rational::zero), want);
    }

    #[test]
    fn resultant_is_multiplicative(f in dense(3), g in dense(3), h in dense(3)) {
        let (f, g, h) = (uni(&f), uni(&g), uni(&h));
        let lhs = resultant(&(&f * &g), &h, "x").unwrap();
        let rhs = &resultant(&f, &h, "x").unwrap() * &resultant(&g, &h, "x").unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_commutes_with_specialization(p in poly3(), q in poly3(), a in -4i64..=4) {
        prop_assume!(p.degree(0) > 0 && q.degree(0) > 0);
        let at = |f: &MPoly| f.eval_var(1, &rat(a));
        prop_assume!(!at(&p.lc_in(0)).is_zero() && !at(&q.lc_in(0)).is_zero());
        let r = resultant(&p, &q, "x").unwrap();
        let (ps, qs) = (at(&p), at(&q));
        prop_assert_eq!(at(&r), resultant(&ps, &qs, "x").unwrap());
    }

    #[test]
    fn canonicalize_is_idempotent_and_scale_free(p in poly3(), k in prop::sample::select(vec![-6i64, -1, 2, 7])) {
        let c = canonicalize(&p).unwrap();
        prop_assert_eq!(canonicalize(&c).unwrap(), c.clone());
        prop_assert_eq!(canonicalize(&p.scale(&(rat(k) / rat(3)))).unwrap(), c);
    }

    #[test]
    fn text_round_trips(p in poly3()) {
        prop_assert_eq!(parse_poly(&p.to_string(), &xyz()).unwrap(), p);
    }

    #[test]
    fn gcd_divides_and_cofactors_are_coprime(a in poly3(), b in poly3(), c in poly3()) {
        let (f, g) = (&a * &c, &b * &c);
        let d = gcd(&f, &g).unwrap();
        let cf = f.div_exact(&d);
        let cg = g.div_exact(&d);
        prop_assert!(cf.is_some() && cg.is_some());
        prop_assert!(gcd(&cf.unwrap(), &cg.unwrap()).unwrap().is_constant());
        prop_assert!(d.div_exact(&canonicalize(&c).unwrap()).is_some());
    }

    #[test]
    fn factorization_multiplies_back(a in poly3(), b in poly3()) {
        let p = &(&a * &b) * &a;
        let fs = factor(&p).unwrap();
        let mut prod = MPoly::one(&xyz());
        for (f, m) in &fs {
            prod = &prod * &f.pow(*m);
            prop_assert_eq!(&canonicalize(f).unwrap(), f);
        }
        prop_assert_eq!(canonicalize(&prod).unwrap(), canonicalize(&p).unwrap());
    }

    #[test]
    fn squarefree_parts_are_coprime(a in poly3(), b in poly3()) {
        let p = &(&a * &a) * &b;
        let parts = squarefree(&p).unwrap();
        let mut prod = MPoly::one(&xyz());
        for (i, (f, m)) in parts.iter().enumerate() {
            prod = &prod * &f.pow(*m);
            for (g, _) in &parts[i + 1..] {
                prop_assert!(gcd(f, g).unwrap().is_constant());
            }
        }
        prop_assert_eq!(canonicalize(&prod).unwrap(), canonicalize(&p).unwrap());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly3(), q in poly3(), v in point()) {
        let tol = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()));
        prop_assert!(tol(eval_slice(&(&p * &q), &v), eval_slice(&p, &v) * eval_slice(&q, &v)));
        prop_assert!(tol(eval_slice(&(&p + &q), &v), eval_slice(&p, &v) + eval_slice(&q, &v)));
    }
}

#[test]
fn swinnerton_dyer_is_irreducible() {
    let p = parse_poly("x^4 - 10*x^2 + 1", &xy()).unwrap();
    assert_eq!(factor(&p).unwrap().len(), 1);
}

#[test]
fn canonical_examples() {
    let p = parse_poly("-2*x + 2*y", &xy()).unwrap();
    assert_eq!(canonicalize(&p).unwrap().to_string(), "y - x");
    assert_eq!(canonicalize(&MPoly::zero(&xy())), Err(AlgebraError::ZeroPolynomial));
}
