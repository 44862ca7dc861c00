//! Multivariate factorization over Z by evaluation, univariate factoring
//! and Hensel lifting over Q with a precomputed leading coefficient.

use super::gcd::{content_in, gcd_z};
use super::monomial::Monomial;
use super::poly::{MPoly, Vars, ZPoly};
use super::univariate::{
    factor_squarefree_uni, qdivrem, qmul, qsub, qxgcd, zmul, QDense, ZDense,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Irreducible factors of a square-free polynomial (integer content ignored).
pub(crate) fn factor_squarefree(p: &ZPoly) -> Vec<ZPoly> {
    let p = p.int_primitive().sign_normalized();
    if p.is_constant() {
        return Vec::new();
    }
    let support = p.support();
    if support.len() == 1 {
        let v = support[0];
        let dense = to_dense(&p, v);
        return factor_squarefree_uni(&dense)
            .into_iter()
            .map(|f| from_dense(p.vars(), v, &f))
            .collect();
    }
    let v = *support.iter().min_by_key(|&&v| (p.degree(v), v)).unwrap();
    let cont = content_in(&p, v);
    if !cont.is_constant() {
        let pp = p.div_exact(&cont).expect("content divides");
        let mut out = factor_squarefree(&cont);
        out.extend(factor_squarefree(&pp));
        return out;
    }
    factor_primitive(&p, v)
}

fn to_dense(p: &ZPoly, v: usize) -> ZDense {
    let mut out = vec![BigInt::zero(); p.degree(v) as usize + 1];
    for (m, c) in p.terms() {
        out[m.degree(v) as usize] = c.clone();
    }
    out
}

fn from_dense(vars: &Vars, v: usize, d: &[BigInt]) -> ZPoly {
    let mut p = ZPoly::zero(vars);
    for (i, c) in d.iter().enumerate() {
        if !c.is_zero() {
            p.add_term(Monomial::var(vars.len(), v, i as u16), c);
        }
    }
    p
}

struct Image {
    point: Vec<(usize, BigInt)>,
    factors: Vec<ZDense>,
}

/// Evaluate every variable except `v` at `point`.
fn specialize(p: &ZPoly, point: &[(usize, BigInt)]) -> ZPoly {
    point.iter().fold(p.clone(), |acc, (y, a)| acc.eval_var(*y, a))
}

fn choose_images(p: &ZPoly, v: usize, rng: &mut ChaCha8Rng) -> Vec<Image> {
    let others: Vec<usize> = p.support().into_iter().filter(|&y| y != v).collect();
    let lc = p.lc_in(v);
    let deg = p.degree(v);
    let mut images = Vec::new();
    let mut range = 3i64;
    let mut attempts = 0;
    while images.len() < 3 {
        attempts += 1;
        if attempts % 8 == 0 {
            range *= 2;
        }
        assert!(attempts < 10_000, "no lucky evaluation point found");
        let point: Vec<(usize, BigInt)> = others
            .iter()
            .map(|&y| {
                let mut a = 0;
                while a == 0 {
                    a = rng.gen_range(-range..=range);
                }
                (y, BigInt::from(a))
            })
            .collect();
        if specialize(&lc, &point).is_zero() {
            continue;
        }
        let img = specialize(p, &point);
        if img.degree(v) != deg {
            continue;
        }
        let g = gcd_z(&img, &img.derivative(v));
        if g.degree(v) > 0 {
            continue;
        }
        let dense = super::univariate::zprimitive(&to_dense(&img, v));
        let factors = factor_squarefree_uni(&dense);
        let done = factors.len() == 1;
        images.push(Image { point, factors });
        if done {
            break;
        }
    }
    images
}

fn factor_primitive(p: &ZPoly, v: usize) -> Vec<ZPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac7);
    let images = choose_images(p, v, &mut rng);
    let best = images.into_iter().min_by_key(|im| im.factors.len()).unwrap();
    if best.factors.len() == 1 {
        return vec![p.clone()];
    }
    let mut out = Vec::new();
    let mut current = p.clone();
    let mut rest = best.factors;
    let mut s = 1;
    while 2 * s <= rest.len() {
        let mut hit = None;
        for subset in combinations(rest.len(), s) {
            let g0 = subset.iter().fold(vec![BigInt::one()], |acc, &i| zmul(&acc, &rest[i]));
            if let Some((g, h)) = lift_split(&current, v, &best.point, &g0) {
                hit = Some((subset, g, h));
                break;
            }
        }
        match hit {
            Some((subset, g, h)) => {
                out.push(g);
                current = h;
                rest = rest
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, f)| f)
                    .collect();
            }
            None => s += 1,
        }
    }
    out.push(current);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Try to lift the image factor `g0` of `p` (other variables at `point`)
/// to a true factor. Returns primitive (factor, cofactor) on success.
fn lift_split(
    p: &ZPoly,
    v: usize,
    point: &[(usize, BigInt)],
    g0: &[BigInt],
) -> Option<(ZPoly, ZPoly)> {
    // a cheap necessary condition: the split survives in each bivariate image
    if point.len() > 1 {
        for (j, _) in point.iter().enumerate() {
            let rest: Vec<(usize, BigInt)> =
                point.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x.clone()).collect();
            let biv = specialize(p, &rest);
            if biv.degree(v) != p.degree(v) {
                continue;
            }
            lift_core(&biv, v, &point[j..=j], g0)?;
        }
    }
    let (g, _) = lift_core(p, v, point, g0)?;
    let g = primitive_v(&g, v);
    let h = p.div_exact(&g)?;
    Some((g.sign_normalized(), h.int_primitive().sign_normalized()))
}

fn primitive_v(g: &MPoly, v: usize) -> ZPoly {
    let z = g.to_primitive_z();
    let c = content_in(&z, v);
    z.div_exact(&c).expect("content divides")
}

fn qdense_of(img: &MPoly, v: usize) -> QDense {
    let mut out = vec![BigRational::zero(); img.degree(v) as usize + 1];
    for (m, c) in img.terms() {
        out[m.degree(v) as usize] = c.clone();
    }
    out
}

fn mpoly_of(vars: &Vars, v: usize, d: &[BigRational], ymono: &Monomial) -> MPoly {
    let mut out = MPoly::zero(vars);
    for (i, c) in d.iter().enumerate() {
        if !c.is_zero() {
            out.add_term(ymono.with_exp(v, i as u16), c);
        }
    }
    out
}

/// Two-factor Hensel lifting in the ideal (y - a) over Q, with the leading
/// coefficient L = lc_v(p) imposed on both factors of L*p.
fn lift_core(
    p: &ZPoly,
    v: usize,
    point: &[(usize, BigInt)],
    g0: &[BigInt],
) -> Option<(MPoly, MPoly)> {
    let vars = p.vars().clone();
    let pq = p.to_q();
    // shift y -> y + a so the lifting ideal is generated by the variables
    let shifted = point.iter().fold(pq, |acc, (y, a)| {
        let sub = &MPoly::var(&vars, *y) + &MPoly::constant(&vars, BigRational::from_integer(a.clone()));
        acc.substitute(*y, &sub)
    });
    let lc = shifted.lc_in(v);
    let f = &lc * &shifted;
    let ydeg = |m: &Monomial| m.total_degree() - m.degree(v) as u32;
    let bound = f.terms().map(|(m, _)| ydeg(m)).max().unwrap_or(0);
    let img = f.terms().filter(|(m, _)| ydeg(m) == 0).fold(MPoly::zero(&vars), |mut acc, (m, c)| {
        acc.add_term(m.clone(), c);
        acc
    });
    let l0 = lc.terms().filter(|(m, _)| ydeg(m) == 0).map(|(_, c)| c.clone()).next()?;
    let fimg = qdense_of(&img, v);
    let g0q: QDense = g0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let (h0q, r) = qdivrem(&fimg, &g0q);
    if !r.is_empty() {
        return None;
    }
    let dg = g0q.len() - 1;
    let dh = h0q.len() - 1;
    // normalize both images to leading coefficient L(0)
    let g0n: QDense = {
        let s = &l0 / g0q.last().unwrap();
        g0q.iter().map(|c| c * &s).collect()
    };
    let h0n: QDense = {
        let s = &l0 / h0q.last().unwrap();
        h0q.iter().map(|c| c * &s).collect()
    };
    let (_, t) = qxgcd(&g0n, &h0n)?;
    let one = Monomial::one(vars.len());
    let lead_fix = |d: usize| {
        let hi = &lc - &MPoly::constant(&vars, l0.clone());
        hi.mul_term(&Monomial::var(vars.len(), v, d as u16), &BigRational::one())
    };
    let mut g = &mpoly_of(&vars, v, &g0n, &one) + &lead_fix(dg);
    let mut h = &mpoly_of(&vars, v, &h0n, &one) + &lead_fix(dh);
    for k in 1..=bound + 1 {
        let e = &f - &(&g * &h);
        if e.is_zero() {
            return Some(unshift(&g, &h, point, &vars));
        }
        if k > bound {
            break;
        }
        let mut by_y: BTreeMap<Monomial, MPoly> = BTreeMap::new();
        for (m, c) in e.terms() {
            let d = ydeg(m);
            if d < k {
                return None;
            }
            if d == k {
                let key = m.with_exp(v, 0);
                by_y.entry(key).or_insert_with(|| MPoly::zero(&vars)).add_term(m.clone(), c);
            }
        }
        for (ymono, part) in by_y {
            let ev = qdense_of(&part, v);
            if ev.len() > dg + dh {
                return None;
            }
            // a * h0 + b * g0 = e, deg a < dg
            let (_, a) = qdivrem(&qmul(&ev, &t), &g0n);
            let (b, rem) = qdivrem(&qsub(&ev, &qmul(&a, &h0n)), &g0n);
            if !rem.is_empty() {
                return None;
            }
            g = &g + &mpoly_of(&vars, v, &a, &ymono);
            h = &h + &mpoly_of(&vars, v, &b, &ymono);
        }
    }
    None
}

fn unshift(g: &MPoly, h: &MPoly, point: &[(usize, BigInt)], vars: &Vars) -> (MPoly, MPoly) {
    let back = |p: &MPoly| {
        point.iter().fold(p.clone(), |acc, (y, a)| {
            let sub = &MPoly::var(vars, *y) - &MPoly::constant(vars, BigRational::from_integer(a.clone()));
            acc.substitute(*y, &sub)
        })
    };
    (back(g), back(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn zp(s: &str) -> ZPoly {
        let v = Vars::new(&["x", "y", "z"]);
        parse_poly(s, &v).unwrap().to_primitive_z()
    }

    fn sorted(mut v: Vec<ZPoly>) -> Vec<String> {
        let mut s: Vec<String> = v.drain(..).map(|p| p.sign_normalized().to_string()).collect();
        s.sort();
        s
    }

    #[test]
    fn bivariate_splits() {
        let got = sorted(factor_squarefree(&zp("x^2 - y^2")));
        assert_eq!(got, vec!["y + x".to_string(), "y - x".to_string()]);
    }

    #[test]
    fn trivariate_with_nontrivial_leading_coefficient() {
        let a = "x*y^2 + z*x - 3";
        let b = "y*z^2 - x + 2*y + 1";
        let p = zp(&format!("({a})*({b})"));
        let got = sorted(factor_squarefree(&p));
        assert_eq!(got, sorted(vec![zp(a), zp(b)]));
    }

    #[test]
    fn three_factors() {
        let p = zp("(z - x*y)*(z + x*y)*(x + y + z + 1)");
        assert_eq!(factor_squarefree(&p).len(), 3);
    }

    #[test]
    fn cosh_law_is_irreducible() {
        let p = zp("x^2 + y^2 + z^2 - 2*x*y*z - 1");
        assert_eq!(factor_squarefree(&p).len(), 1);
    }
}
