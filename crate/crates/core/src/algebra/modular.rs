//! Dense univariate polynomials over a small prime field, used only as a
//! factorization device. Coefficients are ascending and kept in [0, p).

use num_bigint::BigUint;
use rand::Rng;

pub(crate) type Fp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 31));
        Field { p }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn trim(&self, mut a: Fp) -> Fp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add_poly(&self, a: &[u64], b: &[u64]) -> Fp {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        self.trim(r)
    }

    pub fn sub_poly(&self, a: &[u64], b: &[u64]) -> Fp {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| self.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
            .collect();
        self.trim(r)
    }

    pub fn mul_poly(&self, a: &[u64], b: &[u64]) -> Fp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % self.p;
            }
        }
        self.trim(r)
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Fp {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn monic(&self, a: &[u64]) -> Fp {
        match a.last() {
            None => Vec::new(),
            Some(&l) => self.scale(a, self.inv(l)),
        }
    }

    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (Fp, Fp) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), self.trim(r));
        }
        let inv = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let c = self.mul(r[i + b.len() - 1], inv);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = self.sub(r[i + j], self.mul(c, y));
            }
        }
        r.truncate(b.len() - 1);
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Fp {
        self.divrem(a, b).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Fp {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// (g, s, t) with s*a + t*b = g monic.
    pub fn xgcd(&self, a: &[u64], b: &[u64]) -> (Fp, Fp, Fp) {
        let (mut r0, mut r1) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub_poly(&s0, &self.mul_poly(&q, &s1));
            let t2 = self.sub_poly(&t0, &self.mul_poly(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = self.inv(*r0.last().expect("xgcd of zeros"));
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    fn powmod(&self, base: &[u64], e: &BigUint, m: &[u64]) -> Fp {
        let mut result = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            result = self.rem(&self.mul_poly(&result, &result), m);
            if e.bit(i) {
                result = self.rem(&self.mul_poly(&result, &b), m);
            }
        }
        result
    }

    /// Distinct-degree factorization of a monic square-free polynomial:
    /// pairs (product of all irreducible factors of degree d, d).
    pub fn ddf(&self, f: &[u64]) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                out.push((f.clone(), f.len() - 1));
                break;
            }
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&f, &self.sub_poly(&h, &x));
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        out
    }

    /// Equal-degree splitting (Cantor-Zassenhaus) of a monic product of
    /// distinct irreducibles of degree d; p must be odd.
    pub fn edf<R: Rng>(&self, f: &[u64], d: usize, rng: &mut R) -> Vec<Fp> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Fp = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub_poly(&self.powmod(&a, &e, f), &[1]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                let mut out = self.edf(&g, d, rng);
                out.extend(self.edf(&self.monic(&h), d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a monic square-free polynomial.
    pub fn factor<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<Fp> {
        let mut out = Vec::new();
        for (g, d) in self.ddf(f) {
            out.extend(self.edf(&g, d, rng));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn factors_mod_small_prime() {
        let fld = Field::new(10007);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        // (x - 1)(x - 2)(x^2 + 1): x^2 + 1 is irreducible since 10007 = 3 mod 4
        let f = fld.mul_poly(&fld.mul_poly(&[10006, 1], &[10005, 1]), &[1, 0, 1]);
        let mut fs = fld.factor(&f, &mut rng);
        fs.sort();
        assert_eq!(fs, vec![vec![1, 0, 1], vec![10005, 1], vec![10006, 1]]);
    }

    #[test]
    fn xgcd_identity() {
        let fld = Field::new(101);
        let a = vec![3, 0, 1, 5];
        let b = vec![7, 2, 1];
        let (g, s, t) = fld.xgcd(&a, &b);
        let lhs = fld.add_poly(&fld.mul_poly(&s, &a), &fld.mul_poly(&t, &b));
        assert_eq!(lhs, g);
    }
}
