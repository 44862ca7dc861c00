use super::monomial::Monomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

/// Coefficient ring of a sparse polynomial.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn mul_ref(&self, other: &Self) -> Self;
    /// Quotient when `other` divides `self` exactly in the ring.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    fn is_neg(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Coeff for BigInt {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Coeff for BigRational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Ordered variable names shared between polynomials of one context.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// Sparse multivariate polynomial; terms are keyed by graded-lex monomials.
#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn var(vars: &Vars, index: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), index, 1), C::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: C) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(vars: &Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<C> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(C::zero))
    }

    /// Ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Descending graded-lex order (the canonical printing order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> C {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.degree(var) as u32).max().unwrap_or(0)
    }

    pub fn min_degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.degree(var) as u32).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.degree(var) > 0)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.depends_on(v)).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(-c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() -= c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul_ref(c))).collect(),
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.mul_ref(c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Poly<D> {
        let mut out = Poly::<D>::zero(&self.vars);
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                out.terms.insert(m.clone(), d);
            }
        }
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`;
    /// entry `k` multiplies `var^k` and does not depend on `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly<C>> {
        let deg = self.degree(var) as usize;
        let mut out = vec![Self::zero(&self.vars); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let k = m.degree(var) as usize;
            out[k].terms.insert(m.with_exp(var, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, var: usize, coeffs: &[Poly<C>]) -> Self {
        let mut out = Self::zero(vars);
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                debug_assert_eq!(m.degree(var), 0);
                out.terms.insert(m.with_exp(var, k as u16), c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var` (a polynomial free of `var`).
    pub fn lc_in(&self, var: usize) -> Poly<C> {
        let d = self.degree(var) as u16;
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.degree(var) == d {
                out.terms.insert(m.with_exp(var, 0), c.clone());
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.degree(var);
            if e > 0 {
                let mut c2 = c.clone();
                c2 *= &C::from_i64(e as i64);
                out.add_term(m.with_exp(var, e - 1), &c2);
            }
        }
        out
    }

    /// Replace `var` by the polynomial `value` (Horner in `var`).
    pub fn substitute(&self, var: usize, value: &Poly<C>) -> Self {
        let coeffs = self.coeffs_in(var);
        let mut acc = Self::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn eval_var(&self, var: usize, value: &C) -> Self {
        let mut out = Self::zero(&self.vars);
        let deg = self.degree(var) as usize;
        let mut powers = Vec::with_capacity(deg + 1);
        let mut p = C::one();
        for _ in 0..=deg {
            powers.push(p.clone());
            p = p.mul_ref(value);
        }
        for (m, c) in &self.terms {
            let k = m.degree(var) as usize;
            out.add_term(m.with_exp(var, 0), &c.mul_ref(&powers[k]));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly<C>) -> Option<Poly<C>> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        if let Some(c) = d.constant_value() {
            let mut out = Self::zero(&self.vars);
            for (m, a) in &self.terms {
                out.terms.insert(m.clone(), a.div_exact(&c)?);
            }
            return Some(out);
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading() {
            let qm = dm.quotient_of(rm)?;
            let qc = rc.div_exact(&dc)?;
            for (m, c) in &d.terms {
                rem.sub_term(m.mul(&qm), &c.mul_ref(&qc));
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// Move exponents into another variable set: variable `i` of `self`
    /// becomes variable `map[i]` of `target`.
    pub fn remap(&self, target: &Vars, map: &[Option<usize>]) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let j = map[i].unwrap_or_else(|| {
                        panic!("variable {} has no image in {:?}", self.vars.name(i), target)
                    });
                    nm.set(j, nm.degree(j) + e);
                }
            }
            out.add_term(nm, c);
        }
        out
    }

    /// Re-express over `target`, matching variables by name.
    pub fn embed(&self, target: &Vars) -> Self {
        if &self.vars == target {
            return self.clone();
        }
        let map: Vec<Option<usize>> =
            self.vars.names().iter().map(|n| target.index(n)).collect();
        self.remap(target, &map)
    }

    /// Rename variables positionally (same number of variables).
    pub fn with_vars(&self, target: &Vars) -> Self {
        assert_eq!(self.nvars(), target.len());
        Poly { vars: target.clone(), terms: self.terms.clone() }
    }

    /// Multiply by -1 if needed so the leading coefficient is positive.
    pub fn sign_normalized(self) -> Self {
        match self.leading() {
            Some((_, c)) if c.is_neg() => -self,
            _ => self,
        }
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        debug_assert_eq!(self.vars, rhs.vars);
        let (big, small) = if self.nterms() >= rhs.nterms() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        debug_assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.sub_term(m.clone(), c);
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        debug_assert_eq!(self.vars, rhs.vars);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.vars);
        }
        if self.nterms() == 1 {
            let (m, c) = self.leading().unwrap();
            return rhs.mul_term(m, c);
        }
        if rhs.nterms() == 1 {
            let (m, c) = rhs.leading().unwrap();
            return self.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, C> =
            HashMap::with_capacity(self.nterms().max(rhs.nterms()) * 2);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let prod = c1.mul_ref(c2);
                match acc.entry(m1.mul(m2)) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &prod;
                    }
                }
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(mut self) -> Poly<C> {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$f(&rhs)
            }
        }
        impl<'a, C: Coeff> $tr<&'a Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: &'a Poly<C>) -> Poly<C> {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}[", self.vars)?;
        for (i, (m, c)) in self.terms_desc().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}*{:?}", c, m.exps())?;
        }
        write!(f, "]")
    }
}

/// Integer-coefficient polynomial used by the exact kernels.
pub type ZPoly = Poly<BigInt>;
/// Rational-coefficient polynomial; the public representation.
pub type MPoly = Poly<BigRational>;

impl MPoly {
    /// Scale to integer coefficients with content 1 (sign unchanged).
    pub fn to_primitive_z(&self) -> ZPoly {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&(c.numer() * (&den / c.denom())));
        }
        if num_gcd.is_zero() {
            return ZPoly::zero(&self.vars);
        }
        self.map_coeffs(|c| (c.numer() * (&den / c.denom())) / &num_gcd)
    }

    pub fn from_z(p: &ZPoly) -> MPoly {
        p.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    pub fn from_i64(vars: &Vars, c: i64) -> MPoly {
        MPoly::constant(vars, BigRational::from_integer(BigInt::from(c)))
    }
}

impl ZPoly {
    /// gcd of the integer coefficients (non-negative).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn int_primitive(&self) -> ZPoly {
        let g = self.int_content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        self.map_coeffs(|c| c / &g)
    }

    pub fn to_q(&self) -> MPoly {
        MPoly::from_z(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vars {
        Vars::new(&["x", "y", "z"])
    }

    fn zp(terms: &[(i64, [u16; 3])]) -> ZPoly {
        ZPoly::from_terms(&vars(), terms.iter().map(|(c, e)| (Monomial::from_exps(e), BigInt::from(*c))))
    }

    #[test]
    fn multiply_and_divide() {
        let a = zp(&[(1, [1, 0, 0]), (1, [0, 1, 0])]); // x + y
        let b = zp(&[(1, [1, 0, 0]), (-1, [0, 1, 0])]); // x - y
        let prod = &a * &b;
        assert_eq!(prod, zp(&[(1, [2, 0, 0]), (-1, [0, 2, 0])]));
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&zp(&[(1, [0, 0, 1])])), None);
    }

    #[test]
    fn coefficient_views_round_trip() {
        let p = zp(&[(3, [2, 1, 0]), (-2, [0, 1, 1]), (5, [0, 0, 0])]);
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 2);
        assert_eq!(ZPoly::from_coeffs_in(&vars(), 1, &cs), p);
        assert_eq!(p.lc_in(1), zp(&[(3, [2, 0, 0]), (-2, [0, 0, 1])]));
    }

    #[test]
    fn substitution_and_derivative() {
        // (x + 1)^2 with x -> y
        let x1 = zp(&[(1, [1, 0, 0]), (1, [0, 0, 0])]);
        let sq = x1.pow(2);
        let y = ZPoly::var(&vars(), 1);
        assert_eq!(sq.substitute(0, &y), zp(&[(1, [0, 2, 0]), (2, [0, 1, 0]), (1, [0, 0, 0])]));
        assert_eq!(sq.derivative(0), zp(&[(2, [1, 0, 0]), (2, [0, 0, 0])]));
    }
}
