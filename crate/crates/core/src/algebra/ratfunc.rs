use super::gcd::gcd_z;
use super::poly::{MPoly, Vars};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Quotient of two polynomials over the same variables.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Option<Self> {
        (!den.is_zero()).then_some(RatFunc { num, den })
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.vars());
        RatFunc { num: p, den }
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        RatFunc { num: MPoly::constant(vars, c), den: MPoly::one(vars) }
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc { num: &self.num + &o.num, den: self.den.clone() };
        }
        RatFunc { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        if o.num.is_zero() {
            return None;
        }
        Some(RatFunc { num: &self.num * &o.den, den: &self.den * &o.num }.reduced())
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let r = self.reduced();
        RatFunc { num: r.num.pow(e), den: r.den.pow(e) }
    }

    /// Cancel the polynomial gcd and scale so both parts have integer
    /// coefficients with joint content 1 and the denominator's leading
    /// coefficient is positive.
    pub fn reduced(&self) -> RatFunc {
        let vars = self.vars().clone();
        if self.num.is_zero() {
            return RatFunc { num: MPoly::zero(&vars), den: MPoly::one(&vars) };
        }
        let nz = self.num.to_primitive_z();
        let dz = self.den.to_primitive_z();
        // scalar ratio lost by passing to primitive integer parts
        let scale = (self.num.leading_coeff() / BigRational::from_integer(nz.leading_coeff()))
            / (self.den.leading_coeff() / BigRational::from_integer(dz.leading_coeff()));
        let g = gcd_z(&nz, &dz);
        let nz = nz.div_exact(&g).expect("gcd divides numerator");
        let dz = dz.div_exact(&g).expect("gcd divides denominator");
        let num = MPoly::from_z(&nz).scale(&scale);
        let den = MPoly::from_z(&dz);
        normalize_pair(num, den)
    }

    pub fn is_constant(&self) -> bool {
        let r = self.reduced();
        r.num.is_constant() && r.den.is_constant()
    }
}

fn normalize_pair(num: MPoly, den: MPoly) -> RatFunc {
    let mut lcm = BigInt::one();
    for (_, c) in num.terms().chain(den.terms()) {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut g = BigInt::zero();
    for (_, c) in num.terms().chain(den.terms()) {
        g = num_integer::gcd(g, c.numer() * (&lcm / c.denom()));
    }
    let mut s = BigRational::new(lcm, g);
    if den.leading_coeff().is_negative() {
        s = -s;
    }
    RatFunc { num: num.scale(&s), den: den.scale(&s) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn cancels_common_factors() {
        let v = Vars::new(&["t"]);
        let rf = RatFunc::new(parse_poly("t^2 - 1", &v).unwrap(), parse_poly("2*t - 2", &v).unwrap())
            .unwrap()
            .reduced();
        assert_eq!(rf.num.to_string(), "t + 1");
        assert_eq!(rf.den.to_string(), "2");
        let rf = RatFunc::new(parse_poly("-3*t", &v).unwrap(), parse_poly("-6", &v).unwrap())
            .unwrap()
            .reduced();
        assert_eq!((rf.num.to_string(), rf.den.to_string()), ("t".into(), "2".into()));
    }
}
