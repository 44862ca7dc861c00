//! Subresultant polynomial remainder sequences over a multivariate
//! coefficient ring. A polynomial is viewed as univariate in one variable
//! with coefficients free of that variable.

use super::poly::{Coeff, Poly, Vars};

#[derive(Clone, Debug)]
pub(crate) struct UniPoly<C: Coeff> {
    pub coeffs: Vec<Poly<C>>,
    vars: Vars,
}

impl<C: Coeff> UniPoly<C> {
    pub fn from_poly(p: &Poly<C>, var: usize) -> Self {
        UniPoly { coeffs: p.coeffs_in(var), vars: p.vars().clone() }.trimmed()
    }

    pub fn to_poly(&self, var: usize) -> Poly<C> {
        Poly::from_coeffs_in(&self.vars, var, &self.coeffs)
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> &Poly<C> {
        self.coeffs.last().expect("nonzero")
    }

    fn scale(&self, c: &Poly<C>) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect(), vars: self.vars.clone() }
            .trimmed()
    }

    fn div_exact_scalar(&self, c: &Poly<C>) -> Option<Self> {
        if c.constant_value().is_some_and(|v| v.is_one()) {
            return Some(self.clone());
        }
        let coeffs = self.coeffs.iter().map(|a| a.div_exact(c)).collect::<Option<Vec<_>>>()?;
        Some(UniPoly { coeffs, vars: self.vars.clone() })
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &UniPoly<C>) -> UniPoly<C> {
        let db = b.deg();
        assert!(db >= 0, "pseudo-division by zero");
        if self.deg() < db {
            return self.clone();
        }
        let lcb = b.lc().clone();
        let mut r = self.clone();
        let mut e = self.deg() - db + 1;
        while !r.is_zero() && r.deg() >= db {
            let dr = r.deg();
            let lr = r.lc().clone();
            let shift = (dr - db) as usize;
            r = r.scale(&lcb);
            let mut coeffs = r.coeffs;
            coeffs.resize(dr as usize + 1, Poly::zero(&self.vars));
            for (j, bj) in b.coeffs.iter().enumerate() {
                let t = bj * &lr;
                coeffs[j + shift] = &coeffs[j + shift] - &t;
            }
            r = UniPoly { coeffs, vars: self.vars.clone() }.trimmed();
            e -= 1;
        }
        if e > 0 {
            r = r.scale(&lcb.pow(e as u32));
        }
        r
    }
}

fn is_odd(d: isize) -> bool {
    d % 2 != 0
}

/// Resultant of two univariate views via the subresultant PRS.
pub(crate) fn resultant_uni<C: Coeff>(a: &UniPoly<C>, b: &UniPoly<C>, vars: &Vars) -> Poly<C> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(vars);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if is_odd(a.deg()) && is_odd(b.deg()) {
            negate = true;
        }
    }
    if b.deg() == 0 {
        let r = b.lc().pow(a.deg() as u32);
        return if negate { -r } else { r };
    }
    let mut g = Poly::one(vars);
    let mut h = Poly::one(vars);
    loop {
        let da = a.deg();
        let db = b.deg();
        let delta = (da - db) as u32;
        if is_odd(da) && is_odd(db) {
            negate = !negate;
        }
        let r = a.prem(&b);
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact_scalar(&divisor).expect("subresultant division is exact");
        g = a.lc().clone();
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact h update");
        }
        if b.is_zero() {
            return Poly::zero(vars);
        }
        if b.deg() == 0 {
            let dega = a.deg() as u32;
            let num = b.lc().pow(dega);
            let r = if dega > 1 {
                num.div_exact(&h.pow(dega - 1)).expect("exact final step")
            } else {
                num
            };
            return if negate { -r } else { r };
        }
    }
}

/// Last nonzero element of the subresultant PRS of `a` and `b`
/// (a gcd up to a factor free of the main variable).
pub(crate) fn prs_last<C: Coeff>(a: &UniPoly<C>, b: &UniPoly<C>, vars: &Vars) -> UniPoly<C> {
    let (mut a, mut b) = if a.deg() >= b.deg() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if b.is_zero() {
        return a;
    }
    let mut g = Poly::one(vars);
    let mut h = Poly::one(vars);
    loop {
        let delta = (a.deg() - b.deg()) as u32;
        let r = a.prem(&b);
        if r.is_zero() {
            return b;
        }
        if r.deg() == 0 {
            return r;
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact_scalar(&divisor).expect("subresultant division is exact");
        g = a.lc().clone();
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact h update");
        }
    }
}

/// Resultant of `p` and `q` with respect to variable index `var`.
pub(crate) fn resultant_poly<C: Coeff>(p: &Poly<C>, q: &Poly<C>, var: usize) -> Poly<C> {
    let a = UniPoly::from_poly(p, var);
    let b = UniPoly::from_poly(q, var);
    resultant_uni(&a, &b, p.vars())
}

/// Pseudo-remainder of `p` by `q` in `var`.
#[cfg(test)]
fn prem_poly<C: Coeff>(p: &Poly<C>, q: &Poly<C>, var: usize) -> Poly<C> {
    UniPoly::from_poly(p, var).prem(&UniPoly::from_poly(q, var)).to_poly(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, ZPoly};

    fn zp(s: &str, v: &Vars) -> ZPoly {
        parse_poly(s, v).unwrap().map_coeffs(|c| c.to_integer())
    }

    #[test]
    fn resultant_examples() {
        let v = Vars::new(&["x", "y"]);
        let r = resultant_poly(&zp("y^2 - x", &v), &zp("y^2 - 2*x", &v), 1);
        assert_eq!(r, zp("x^2", &v));
        let r = resultant_poly(&zp("y^3 + x", &v), &zp("y - x", &v), 1);
        // Res(A, y - x) = (-1)^3 * A(x) = -(x^3 + x)
        assert_eq!(r, zp("-x^3 - x", &v));
    }

    #[test]
    fn prem_reduces_degree() {
        let v = Vars::new(&["x", "y"]);
        let r = prem_poly(&zp("x*y^2 + 1", &v), &zp("2*y - x", &v), 1);
        assert_eq!(r.degree(1), 0);
        // 4*(x*y^2 + 1) at y = x/2  ->  x^3 + 4
        assert_eq!(r, zp("x^3 + 4", &v));
    }
}
