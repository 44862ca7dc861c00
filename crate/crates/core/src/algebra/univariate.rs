//! Dense univariate polynomials over Z and Q: Zassenhaus factorization and
//! the extended Euclidean algorithm used by multivariate Hensel lifting.
//! Coefficient vectors are ascending and carry no trailing zeros.

use super::modular::{Field, Fp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) type ZDense = Vec<BigInt>;
pub(crate) type QDense = Vec<BigRational>;

fn trim<T: Zero>(mut a: Vec<T>) -> Vec<T> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn zmul(a: &[BigInt], b: &[BigInt]) -> ZDense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

fn zcontent(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub(crate) fn zprimitive(a: &[BigInt]) -> ZDense {
    let c = zcontent(a);
    let c = if a.last().is_some_and(|l| l.is_negative()) { -c } else { c };
    a.iter().map(|x| x / &c).collect()
}

fn zderivative(a: &[BigInt]) -> ZDense {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Exact quotient over Z, if `b` divides `a`.
#[cfg(test)]
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZDense> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.len() > a.len() {
        return None;
    }
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &r[i + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= &c * y;
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| trim(q))
}

fn to_field(a: &[BigInt], fld: &Field) -> Fp {
    let p = BigInt::from(fld.p);
    fld.trim(a.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
}

fn from_field(a: &[u64]) -> ZDense {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn mod_poly(a: &[BigInt], m: &BigInt) -> ZDense {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZDense {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Lift f = g*h (mod p) to f = G*H (mod p^k), g monic.
fn hensel2(f: &[BigInt], g: &Fp, h: &Fp, fld: &Field, k: u32) -> (ZDense, ZDense) {
    let (one, s, t) = fld.xgcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let p = BigInt::from(fld.p);
    let modulus = p.pow(k);
    let mut big_g = from_field(g);
    let mut big_h = from_field(h);
    let mut pj = p.clone();
    for _ in 1..k {
        let diff: ZDense = {
            let gh = zmul(&big_g, &big_h);
            let n = f.len().max(gh.len());
            let d: ZDense = (0..n)
                .map(|i| {
                    f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default()
                })
                .collect();
            mod_poly(&d, &modulus)
        };
        if diff.is_empty() {
            break;
        }
        let e: ZDense = diff.iter().map(|c| c / &pj).collect();
        let e = to_field(&e, fld);
        let (q, sigma) = fld.divrem(&fld.mul_poly(&t, &e), g);
        let tau = fld.add_poly(&fld.mul_poly(&s, &e), &fld.mul_poly(&q, h));
        for (i, c) in sigma.iter().enumerate() {
            big_g[i] += &pj * BigInt::from(*c);
        }
        if big_h.len() < tau.len() {
            big_h.resize(tau.len(), BigInt::zero());
        }
        for (i, c) in tau.iter().enumerate() {
            big_h[i] += &pj * BigInt::from(*c);
        }
        pj *= &p;
    }
    (mod_poly(&big_g, &modulus), mod_poly(&big_h, &modulus))
}

/// Lift monic modular factors of f to monic factors modulo p^k.
fn hensel_multi(f: &[BigInt], factors: &[Fp], fld: &Field, k: u32) -> Vec<ZDense> {
    let modulus = BigInt::from(fld.p).pow(k);
    if factors.len() == 1 {
        let inv = mod_inverse(f.last().unwrap(), &modulus);
        return vec![mod_poly(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &modulus)];
    }
    let (a, b) = factors.split_at(factors.len() / 2);
    let g = a.iter().fold(vec![1u64], |acc, x| fld.mul_poly(&acc, x));
    let lc = to_field(&[f.last().unwrap().clone()], fld);
    let h = b.iter().fold(lc, |acc, x| fld.mul_poly(&acc, x));
    let (big_g, big_h) = hensel2(f, &g, &h, fld, k);
    let mut out = hensel_multi(&big_g, a, fld, k);
    out.extend(hensel_multi(&big_h, b, fld, k));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducible factors over Z of a square-free primitive polynomial with
/// positive leading coefficient.
pub(crate) fn factor_squarefree_uni(f: &[BigInt]) -> Vec<ZDense> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    if f[0].is_zero() {
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_squarefree_uni(&f[1..]));
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f.last().unwrap().clone();
    let df = zderivative(f);
    let mut best: Option<(Field, Vec<Fp>)> = None;
    let mut good = 0;
    let mut candidate = 10007u64;
    while good < 5 {
        candidate += 2;
        if !is_prime(candidate) || (&lc % BigInt::from(candidate)).is_zero() {
            continue;
        }
        let fld = Field::new(candidate);
        let fbar = fld.monic(&to_field(f, &fld));
        if fld.gcd(&fbar, &to_field(&df, &fld)).len() != 1 {
            continue;
        }
        good += 1;
        let fs = fld.factor(&fbar, &mut rng);
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((fld, fs));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (fld, modular) = best.unwrap();
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // bound on coefficients of lc(f)/lc(a) * a for any factor a of f
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + 1;
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm2;
    let p = BigInt::from(fld.p);
    let mut k = 1;
    let mut modulus = p.clone();
    while modulus <= bound {
        modulus *= &p;
        k += 1;
    }
    let lifted = hensel_multi(f, &modular, &fld, k);
    recombine(f, lifted, &modulus)
}

fn recombine(f: &[BigInt], lifted: Vec<ZDense>, modulus: &BigInt) -> Vec<ZDense> {
    let mut out = Vec::new();
    let mut rest: Vec<ZDense> = lifted;
    let mut fstar = f.to_vec();
    let mut s = 1;
    while 2 * s <= rest.len() {
        let b = fstar.last().unwrap().clone();
        let bf: ZDense = fstar.iter().map(|c| c * &b).collect();
        let mut hit = None;
        for subset in combinations(rest.len(), s) {
            let g = subset.iter().fold(vec![b.clone()], |acc, &i| mod_poly(&zmul(&acc, &rest[i]), modulus));
            let g = symmetric(&g, modulus);
            if !g[0].is_zero() && !(&bf[0] % &g[0]).is_zero() {
                continue;
            }
            let h = (0..rest.len())
                .filter(|i| !subset.contains(i))
                .fold(vec![b.clone()], |acc, i| mod_poly(&zmul(&acc, &rest[i]), modulus));
            let h = symmetric(&h, modulus);
            if zmul(&g, &h) == bf {
                hit = Some((subset, g, h));
                break;
            }
        }
        match hit {
            Some((subset, g, h)) => {
                out.push(zprimitive(&g));
                fstar = zprimitive(&h);
                rest = rest
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, x)| x)
                    .collect();
            }
            None => s += 1,
        }
    }
    out.push(fstar);
    out
}

pub(crate) fn qmul(a: &[BigRational], b: &[BigRational]) -> QDense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

pub(crate) fn qsub(a: &[BigRational], b: &[BigRational]) -> QDense {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

pub(crate) fn qdivrem(a: &[BigRational], b: &[BigRational]) -> (QDense, QDense) {
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().expect("division by zero polynomial");
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = &r[i + b.len() - 1] / lb;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= &c * y;
        }
        q[i] = c;
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

/// (s, t) with s*a + t*b = 1, or None when a and b are not coprime.
pub(crate) fn qxgcd(a: &[BigRational], b: &[BigRational]) -> Option<(QDense, QDense)> {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![BigRational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = qdivrem(&r0, &r1);
        let s2 = qsub(&s0, &qmul(&q, &s1));
        let t2 = qsub(&t0, &qmul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = BigRational::one() / &r0[0];
    Some((
        s0.iter().map(|c| c * &inv).collect(),
        t0.iter().map(|c| c * &inv).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZDense {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn sorted(mut v: Vec<ZDense>) -> Vec<ZDense> {
        v.sort();
        v
    }

    #[test]
    fn combinations_enumerate_all() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(5, 1).len(), 5);
    }

    #[test]
    fn factors_products_of_known_irreducibles() {
        // (x^2 + 1)(x - 3)(2x + 5)
        let f = zmul(&zmul(&z(&[1, 0, 1]), &z(&[-3, 1])), &z(&[5, 2]));
        let got = sorted(factor_squarefree_uni(&f));
        assert_eq!(got, sorted(vec![z(&[1, 0, 1]), z(&[-3, 1]), z(&[5, 2])]));
    }

    #[test]
    fn swinnerton_dyer_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime
        let f = z(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree_uni(&f), vec![f]);
    }

    #[test]
    fn cyclotomic_split() {
        // x^6 - 1 = (x - 1)(x + 1)(x^2 + x + 1)(x^2 - x + 1)
        let got = sorted(factor_squarefree_uni(&z(&[-1, 0, 0, 0, 0, 0, 1])));
        let want = sorted(vec![z(&[-1, 1]), z(&[1, 1]), z(&[1, 1, 1]), z(&[1, -1, 1])]);
        assert_eq!(got, want);
    }

    #[test]
    fn exact_division() {
        let f = zmul(&z(&[1, 2]), &z(&[3, 0, 1]));
        assert_eq!(zdiv_exact(&f, &z(&[1, 2])), Some(z(&[3, 0, 1])));
        assert_eq!(zdiv_exact(&f, &z(&[1, 1])), None);
    }
}
