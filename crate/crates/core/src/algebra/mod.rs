//! Exact polynomial arithmetic over the rationals.
//!
//! Variables are ordered by declaration; monomials are compared by total
//! degree first and then by exponent of the later variable. The canonical
//! representative of a polynomial up to scalars has integer coefficients,
//! content 1 and a positive leading coefficient.

mod factor;
mod gcd;
mod modular;
mod monomial;
mod poly;
mod ratfunc;
mod resultant;
mod text;
mod univariate;

pub use monomial::Monomial;
pub use poly::{Coeff, MPoly, Poly, Vars, ZPoly};
pub use ratfunc::RatFunc;
pub use text::{parse_poly, parse_ratfunc, parse_ratfunc_at};

pub(crate) use gcd::{content_in, gcd_z, squarefree_part_z, squarefree_z};

use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("zero polynomial has no canonical form")]
    ZeroPolynomial,
    #[error("polynomial has degree 0 in {0}")]
    ZeroDegree(String),
    #[error("constant polynomial has no nontrivial factors")]
    Constant,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("no value assigned to variable '{0}'")]
    MissingAssignment(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

/// Integer, content-1, positive-leading representative of `p`.
pub fn canonicalize(p: &MPoly) -> Result<MPoly, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    Ok(MPoly::from_z(&p.to_primitive_z().sign_normalized()))
}

fn var_index(p: &MPoly, var: &str) -> Result<usize, AlgebraError> {
    p.vars().index(var).ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))
}

/// Res_var(p, q), exact over the rationals.
pub fn resultant(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly, AlgebraError> {
    let v = var_index(p, var)?;
    if p.degree(v) == 0 || q.degree(v) == 0 {
        return Err(AlgebraError::ZeroDegree(var.to_string()));
    }
    Ok(resultant_q(p, q, v))
}

/// Resultant over Q computed on integer primitive parts and rescaled:
/// Res(aP, bQ) = a^deg Q * b^deg P * Res(P, Q).
pub(crate) fn resultant_q(p: &MPoly, q: &MPoly, v: usize) -> MPoly {
    let pz = p.to_primitive_z();
    let qz = q.to_primitive_z();
    let r = resultant::resultant_poly(&pz, &qz, v);
    let a = p.leading_coeff() / Rational::from_integer(pz.leading_coeff());
    let b = q.leading_coeff() / Rational::from_integer(qz.leading_coeff());
    let s = num_traits::pow(a, q.degree(v) as usize) * num_traits::pow(b, p.degree(v) as usize);
    MPoly::from_z(&r).scale(&s)
}

/// Resultant of integer polynomials, up to a nonzero rational scalar.
pub(crate) fn resultant_z(p: &ZPoly, q: &ZPoly, v: usize) -> ZPoly {
    resultant::resultant_poly(p, q, v)
}

/// Canonical greatest common divisor.
pub fn gcd(p: &MPoly, q: &MPoly) -> Result<MPoly, AlgebraError> {
    if p.is_zero() && q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let g = gcd_z(&p.to_primitive_z(), &q.to_primitive_z());
    canonicalize(&MPoly::from_z(&g))
}

/// Square-free decomposition into canonical, pairwise coprime factors,
/// ordered by decreasing multiplicity.
pub fn squarefree(p: &MPoly) -> Result<Vec<(MPoly, u32)>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(AlgebraError::Constant);
    }
    let (_, fs) = squarefree_z(&p.to_primitive_z());
    Ok(fs.into_iter().map(|(f, m)| (MPoly::from_z(&f), m)).collect())
}

/// Complete factorization into canonical irreducibles over the rationals,
/// sorted by descending multiplicity then ascending canonical text.
pub fn factor(p: &MPoly) -> Result<Vec<(MPoly, u32)>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(AlgebraError::Constant);
    }
    Ok(factor_z(&p.to_primitive_z())
        .into_iter()
        .map(|(f, m)| (MPoly::from_z(&f), m))
        .collect())
}

pub(crate) fn factor_z(p: &ZPoly) -> Vec<(ZPoly, u32)> {
    let (_, sqf) = squarefree_z(p);
    let mut out = Vec::new();
    for (f, m) in sqf {
        for g in factor::factor_squarefree(&f) {
            out.push((g.sign_normalized(), m));
        }
    }
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    out
}

/// Floating-point evaluation in canonical (descending) term order.
pub fn eval(p: &MPoly, point: &HashMap<String, Complex64>) -> Result<Complex64, AlgebraError> {
    let mut vals = Vec::with_capacity(p.nvars());
    for (i, name) in p.vars().names().iter().enumerate() {
        match point.get(name) {
            Some(v) => vals.push(*v),
            None if p.depends_on(i) => return Err(AlgebraError::MissingAssignment(name.clone())),
            None => vals.push(Complex64::new(0.0, 0.0)),
        }
    }
    Ok(eval_slice(p, &vals))
}

/// Evaluation at values given in variable order.
pub fn eval_slice(p: &MPoly, vals: &[Complex64]) -> Complex64 {
    eval_terms(p, vals).0
}

/// Value and largest absolute monomial contribution.
pub(crate) fn eval_terms(p: &MPoly, vals: &[Complex64]) -> (Complex64, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for (m, c) in p.terms_desc() {
        let mut t = Complex64::new(c.to_f64(), 0.0);
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t *= vals[i].powu(e as u32);
            }
        }
        scale = scale.max(t.norm());
        sum += t;
    }
    (sum, scale)
}

/// |p(vals)| divided by the largest monomial contribution; 0 when every
/// contribution vanishes.
pub fn relative_residual(p: &MPoly, vals: &[Complex64]) -> f64 {
    let (v, s) = eval_terms(p, vals);
    if s == 0.0 {
        0.0
    } else {
        v.norm() / s
    }
}
