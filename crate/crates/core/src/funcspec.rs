//! Function descriptions: a class tag, a rational expression in the class
//! uniformizer and the class parameters.
//!
//! Uniformizer symbols are `u` (rational class), `t = e^{mu u}` (exp class)
//! and `p = wp(u)`, `q = wp'(u)` (elliptic class, with q^2 = 4p^3 - g2 p - g3).

use crate::algebra::{
    self, content_in, parse_ratfunc_at, MPoly, Monomial, ParseError, RatFunc, Rational, Vars,
};
use crate::numeric;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionClass {
    #[serde(rename = "rational")]
    RationalOfU,
    #[serde(rename = "exp")]
    RationalOfExp,
    #[serde(rename = "elliptic")]
    Elliptic,
}

impl FunctionClass {
    pub fn keyword(self) -> &'static str {
        match self {
            FunctionClass::RationalOfU => "rational",
            FunctionClass::RationalOfExp => "exp",
            FunctionClass::Elliptic => "elliptic",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(FunctionClass::RationalOfU),
            "exp" => Some(FunctionClass::RationalOfExp),
            "elliptic" => Some(FunctionClass::Elliptic),
            _ => None,
        }
    }

    /// Uniformizer symbols in declaration order.
    pub fn symbols(self) -> &'static [&'static str] {
        match self {
            FunctionClass::RationalOfU => &["u"],
            FunctionClass::RationalOfExp => &["t"],
            FunctionClass::Elliptic => &["p", "q"],
        }
    }

    pub fn vars(self) -> Vars {
        Vars::new(self.symbols())
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Exponential scale: mu = re + i*im; only used numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct Mu {
    pub re: Rational,
    pub im: Rational,
}

impl Mu {
    pub fn one() -> Self {
        Mu { re: Rational::one(), im: Rational::zero() }
    }

    pub fn i() -> Self {
        Mu { re: Rational::zero(), im: Rational::one() }
    }

    pub fn to_complex(&self) -> Complex64 {
        use algebra::Coeff;
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn scaled(&self, k: u32) -> Mu {
        let k = Rational::from_integer(k.into());
        Mu { re: &self.re * &k, im: &self.im * &k }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => write!(f, "{} + {}*i", self.re, self.im),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuncSpec {
    pub class: FunctionClass,
    /// Numerator and denominator over `class.vars()`; coprime, integer,
    /// jointly content 1, denominator with positive leading coefficient.
    pub num: MPoly,
    pub den: MPoly,
    pub mu: Mu,
    pub g2: Option<Rational>,
    pub g3: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("zero discriminant: g2^3 - 27*g3^2 = 0")]
    ZeroDiscriminant,
    #[error("denominator of phi is identically zero")]
    ZeroDenominator,
    #[error("phi is a constant function")]
    ConstantFunction,
    #[error("order mismatch: symbolic count {symbolic}, numeric preimage count {numeric}")]
    OrderMismatch { symbolic: u32, numeric: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderData {
    pub nu: u32,
    pub m: u32,
}

/// 4p^3 - g2 p - g3 over `vars`, with p at index `p`.
pub fn curve_rhs(vars: &Vars, p: usize, g2: &Rational, g3: &Rational) -> MPoly {
    let pv = MPoly::var(vars, p);
    let mut out = pv.pow(3).scale(&Rational::from_integer(4.into()));
    out = &out - &pv.scale(g2);
    &out - &MPoly::constant(vars, g3.clone())
}

/// Replace q^2 by 4p^3 - g2 p - g3 until deg_q <= 1.
pub fn reduce_mod_curve(f: &MPoly, p: usize, q: usize, g2: &Rational, g3: &Rational) -> MPoly {
    let rhs = curve_rhs(f.vars(), p, g2, g3);
    let coeffs = f.coeffs_in(q);
    let mut out = MPoly::zero(f.vars());
    let mut rhs_pow = MPoly::one(f.vars());
    let qv = MPoly::var(f.vars(), q);
    for (k, c) in coeffs.iter().enumerate() {
        if k >= 2 && k % 2 == 0 {
            rhs_pow = &rhs_pow * &rhs;
        }
        if c.is_zero() {
            continue;
        }
        let term = if k % 2 == 1 { &(c * &rhs_pow) * &qv } else { c * &rhs_pow };
        out = &out + &term;
    }
    out
}

impl FuncSpec {
    /// Validate and normalize. Exp-class expressions in t^k (k > 1) are
    /// rewritten in the uniformizer t^k with mu scaled by k; elliptic
    /// expressions are reduced modulo the curve with a q-free denominator.
    pub fn new(
        class: FunctionClass,
        phi: RatFunc,
        mu: Option<Mu>,
        g2: Option<Rational>,
        g3: Option<Rational>,
    ) -> Result<FuncSpec, SpecError> {
        let vars = class.vars();
        assert!(phi.vars() == &vars, "phi must be over the class uniformizers");
        let mut mu = mu.unwrap_or_else(Mu::one);
        let mut phi = phi;
        match class {
            FunctionClass::Elliptic => {
                let (a, b) = (g2.clone().unwrap(), g3.clone().unwrap());
                if discriminant(&a, &b).is_zero() {
                    return Err(SpecError::ZeroDiscriminant);
                }
                let num = reduce_mod_curve(&phi.num, 0, 1, &a, &b);
                let den = reduce_mod_curve(&phi.den, 0, 1, &a, &b);
                if den.is_zero() {
                    return Err(SpecError::ZeroDenominator);
                }
                let (num, den) = if den.depends_on(1) {
                    let conj = conjugate(&den);
                    (
                        reduce_mod_curve(&(&num * &conj), 0, 1, &a, &b),
                        reduce_mod_curve(&(&den * &conj), 0, 1, &a, &b),
                    )
                } else {
                    (num, den)
                };
                phi = RatFunc::new(num, den).ok_or(SpecError::ZeroDenominator)?.reduced();
            }
            FunctionClass::RationalOfExp => {
                let k = phi
                    .num
                    .terms()
                    .chain(phi.den.terms())
                    .fold(0u32, |g, (m, _)| g.gcd(&(m.degree(0) as u32)));
                if k > 1 {
                    let shrink = |p: &MPoly| {
                        MPoly::from_terms(
                            p.vars(),
                            p.terms().map(|(m, c)| {
                                (Monomial::var(1, 0, m.degree(0) / k as u16), c.clone())
                            }),
                        )
                    };
                    phi = RatFunc { num: shrink(&phi.num), den: shrink(&phi.den) }.reduced();
                    mu = mu.scaled(k);
                }
            }
            FunctionClass::RationalOfU => {}
        }
        let phi = phi.reduced();
        if phi.num.is_zero() || phi.is_constant() {
            return Err(SpecError::ConstantFunction);
        }
        let (g2, g3) = match class {
            FunctionClass::Elliptic => (g2, g3),
            _ => (None, None),
        };
        let mu = if class == FunctionClass::RationalOfExp { mu } else { Mu::one() };
        Ok(FuncSpec { class, num: phi.num, den: phi.den, mu, g2, g3 })
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn phi(&self) -> RatFunc {
        RatFunc { num: self.num.clone(), den: self.den.clone() }
    }

    /// (g2, g3) for elliptic specs.
    pub fn invariants(&self) -> Option<(&Rational, &Rational)> {
        Some((self.g2.as_ref()?, self.g3.as_ref()?))
    }

    /// Text of phi as it appears in a spec file.
    pub fn phi_text(&self) -> String {
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            self.num.to_string()
        } else {
            format!("({})/({})", self.num, self.den)
        }
    }

    /// Spec-file text; parsing it yields an equal spec.
    pub fn serialize(&self) -> String {
        let mut out = format!("class: {}\nphi: {}\n", self.class, self.phi_text());
        if self.class == FunctionClass::RationalOfExp && self.mu != Mu::one() {
            out.push_str(&format!("mu: {}\n", self.mu));
        }
        if let Some((g2, g3)) = self.invariants() {
            out.push_str(&format!("g2: {g2}\ng3: {g3}\n"));
        }
        out
    }

    /// Same function with the uniformizer scale mu replaced.
    pub fn with_mu(&self, mu: Mu) -> FuncSpec {
        FuncSpec { mu, ..self.clone() }
    }
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} phi = {}", self.class, self.phi_text())?;
        if self.class == FunctionClass::RationalOfExp && self.mu != Mu::one() {
            write!(f, ", mu = {}", self.mu)?;
        }
        if let Some((g2, g3)) = self.invariants() {
            write!(f, ", g2 = {g2}, g3 = {g3}")?;
        }
        Ok(())
    }
}

pub fn discriminant(g2: &Rational, g3: &Rational) -> Rational {
    g2 * g2 * g2 - Rational::from_integer(27.into()) * g3 * g3
}

/// d0(p) - d1(p) q for d = d0(p) + d1(p) q.
fn conjugate(d: &MPoly) -> MPoly {
    let c = d.coeffs_in(1);
    let d0 = c.first().cloned().unwrap_or_else(|| MPoly::zero(d.vars()));
    let d1 = c.get(1).cloned().unwrap_or_else(|| MPoly::zero(d.vars()));
    &d0 - &(&d1 * &MPoly::var(d.vars(), 1))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_constant(text: &str, line: usize, col: usize) -> Result<Rational, ParseError> {
    let rf = parse_ratfunc_at(text, &Vars::new::<&str>(&[]), line, col)?;
    Ok(rf.num.constant_value().unwrap_or_default() / rf.den.constant_value().unwrap())
}

fn parse_mu(text: &str, line: usize, col: usize) -> Result<Mu, ParseError> {
    let t = text.trim();
    if t == "i" {
        return Ok(Mu::i());
    }
    if let Some(coef) = t.strip_suffix("*i") {
        let im = parse_constant(coef, line, col)?;
        return Ok(Mu { re: Rational::zero(), im });
    }
    let re = parse_constant(t, line, col)?;
    if re.is_zero() {
        return Err(ParseError::new(line, col, "mu must be nonzero"));
    }
    Ok(Mu { re, im: Rational::zero() })
}

/// Parse spec-file text (`class`, `phi`, optional `mu`, `g2`/`g3`).
pub fn parse_spec(text: &str) -> Result<FuncSpec, SpecError> {
    let mut class: Option<(FunctionClass, usize)> = None;
    let mut phi: Option<(String, usize, usize)> = None;
    let mut mu: Option<(String, usize, usize)> = None;
    let mut g2: Option<Rational> = None;
    let mut g3: Option<Rational> = None;
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(ParseError::new(line, col, "expected 'key: value'").into());
        };
        let key = content[..colon].trim();
        let value = &content[colon + 1..];
        let lead = value.len() - value.trim_start().len();
        let vcol = colon + 2 + lead;
        let value = value.trim();
        let dup = |present: bool| -> Result<(), SpecError> {
            if present {
                Err(ParseError::new(line, 1, format!("duplicate key '{key}'")).into())
            } else {
                Ok(())
            }
        };
        match key {
            "class" => {
                dup(class.is_some())?;
                let c = FunctionClass::from_keyword(value).ok_or_else(|| {
                    ParseError::new(
                        line,
                        vcol,
                        format!("unknown class '{value}' (expected rational, exp or elliptic)"),
                    )
                })?;
                class = Some((c, line));
            }
            "phi" => {
                dup(phi.is_some())?;
                phi = Some((value.to_string(), line, vcol));
            }
            "mu" => {
                dup(mu.is_some())?;
                mu = Some((value.to_string(), line, vcol));
            }
            "g2" => {
                dup(g2.is_some())?;
                g2 = Some(parse_constant(value, line, vcol)?);
            }
            "g3" => {
                dup(g3.is_some())?;
                g3 = Some(parse_constant(value, line, vcol)?);
            }
            _ => {
                return Err(ParseError::new(line, 1, format!("unknown key '{key}'")).into());
            }
        }
    }
    let (class, class_line) =
        class.ok_or_else(|| ParseError::new(last_line, 1, "missing 'class' line"))?;
    let (phi_text, pline, pcol) =
        phi.ok_or_else(|| ParseError::new(last_line, 1, "missing 'phi' line"))?;
    let mu = match (class, mu) {
        (FunctionClass::RationalOfExp, Some((t, l, c))) => Some(parse_mu(&t, l, c)?),
        (_, Some((_, l, c))) => {
            return Err(ParseError::new(l, c, "'mu' is only allowed for class exp").into())
        }
        (_, None) => None,
    };
    match class {
        FunctionClass::Elliptic => {
            if g2.is_none() || g3.is_none() {
                return Err(ParseError::new(
                    class_line,
                    1,
                    "class elliptic requires both 'g2' and 'g3'",
                )
                .into());
            }
            if discriminant(g2.as_ref().unwrap(), g3.as_ref().unwrap()).is_zero() {
                return Err(SpecError::ZeroDiscriminant);
            }
        }
        _ => {
            if g2.is_some() || g3.is_some() {
                return Err(ParseError::new(
                    class_line,
                    1,
                    "'g2'/'g3' are only allowed for class elliptic",
                )
                .into());
            }
        }
    }
    let rf = parse_ratfunc_at(&phi_text, &class.vars(), pline, pcol)?;
    FuncSpec::new(class, rf, mu, g2, g3)
}

/// Branch count m; every supported spec is single-valued in u.
pub fn branch_count(_spec: &FuncSpec) -> u32 {
    1
}

/// Map degree in the uniformizer, computed symbolically.
pub fn symbolic_order(spec: &FuncSpec) -> u32 {
    match spec.class {
        FunctionClass::RationalOfU | FunctionClass::RationalOfExp => {
            spec.num.degree(0).max(spec.den.degree(0))
        }
        FunctionClass::Elliptic => {
            let (g2, g3) = spec.invariants().unwrap();
            let vars = Vars::new(&["p", "q", "c"]);
            let n = spec.num.embed(&vars);
            let d = spec.den.embed(&vars);
            let eq = &n - &(&MPoly::var(&vars, 2) * &d);
            let curve = &MPoly::var(&vars, 1).pow(2) - &curve_rhs(&vars, 0, g2, g3);
            let r = algebra::resultant_q(&eq, &curve, 1).to_primitive_z();
            let cont = content_in(&r, 2);
            r.div_exact(&cont).expect("content divides").degree(0)
        }
    }
}

/// Order nu and branch count m; the symbolic map degree is cross-checked
/// against a numeric preimage count of a pseudo-random value.
pub fn order(spec: &FuncSpec) -> Result<OrderData, SpecError> {
    let symbolic = symbolic_order(spec);
    let numeric = numeric::count_preimages(spec, Complex64::new(0.3719, 0.6142)) as u32;
    if symbolic != numeric {
        return Err(SpecError::OrderMismatch { symbolic, numeric });
    }
    Ok(OrderData { nu: symbolic, m: branch_count(spec) })
}

/// Specs shipped with the crate, by file stem.
pub const BUNDLED: &[(&str, &str)] = &[
    ("exp-t", include_str!("../specs/exp-t.spec")),
    ("cosh", include_str!("../specs/cosh.spec")),
    ("cos", include_str!("../specs/cos.spec")),
    ("tanh", include_str!("../specs/tanh.spec")),
    ("exp-t2", include_str!("../specs/exp-t2.spec")),
    ("exp-t-plus-1", include_str!("../specs/exp-t-plus-1.spec")),
    ("rational-u", include_str!("../specs/rational-u.spec")),
    ("rational-u2", include_str!("../specs/rational-u2.spec")),
    ("rational-u3", include_str!("../specs/rational-u3.spec")),
    ("moebius", include_str!("../specs/moebius.spec")),
    ("wp-lemniscatic", include_str!("../specs/wp-lemniscatic.spec")),
    ("wp-generic", include_str!("../specs/wp-generic.spec")),
    ("wp-prime", include_str!("../specs/wp-prime.spec")),
    ("wp-squared", include_str!("../specs/wp-squared.spec")),
];

/// A bundled spec by name.
pub fn bundled(name: &str) -> Option<FuncSpec> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| parse_spec(text).expect("bundled specs parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_specs_parse() {
        for (name, _) in BUNDLED {
            assert!(bundled(name).is_some(), "{name}");
        }
        assert_eq!(bundled("tanh").unwrap().phi_text(), "(t - 1)/(t + 1)");
    }

    #[test]
    fn parses_exp_spec_with_inner_fraction() {
        let s = parse_spec("class: exp\nphi: (t + 1/t)/2").unwrap();
        assert_eq!(s.class, FunctionClass::RationalOfExp);
        assert_eq!(s.num.to_string(), "t^2 + 1");
        assert_eq!(s.den.to_string(), "2*t");
    }

    #[test]
    fn parses_elliptic_spec() {
        let s = parse_spec("class: elliptic\ng2: 4\ng3: 0\nphi: p").unwrap();
        assert_eq!((s.num.to_string(), s.den.to_string()), ("p".into(), "1".into()));
        let e = parse_spec("class: elliptic\ng2: 0\ng3: 0\nphi: p").unwrap_err();
        assert_eq!(e, SpecError::ZeroDiscriminant);
        assert!(e.to_string().contains("zero discriminant"));
    }

    #[test]
    fn elliptic_reduction_and_rationalization() {
        let s = parse_spec("class: elliptic\ng2: 4\ng3: 0\nphi: q^2 + q^3").unwrap();
        assert_eq!(s.num.to_string(), "4*p^3*q + 4*p^3 - 4*p*q - 4*p");
        let s = parse_spec("class: elliptic\ng2: 4\ng3: 0\nphi: 1/q").unwrap();
        assert_eq!(s.num.to_string(), "q");
        assert_eq!(s.den.to_string(), "4*p^3 - 4*p");
        assert!(s.den.degree(1) == 0 && s.num.degree(1) <= 1);
        let e = parse_spec("class: elliptic\ng2: 4\ng3: 0\nphi: q^2 - 4*p^3 + 4*p").unwrap_err();
        assert_eq!(e, SpecError::ConstantFunction);
    }

    #[test]
    fn exp_power_rewrite() {
        let s = parse_spec("class: exp\nphi: (t^2 - 1)/(t^2 + 1)").unwrap();
        assert_eq!(s.phi_text(), "(t - 1)/(t + 1)");
        assert_eq!(s.mu, Mu { re: Rational::from_integer(2.into()), im: Rational::zero() });
        let s = parse_spec("class: exp\nphi: t^3\nmu: i").unwrap();
        assert_eq!(s.phi_text(), "t");
        assert_eq!(s.mu.to_string(), "3*i");
    }

    #[test]
    fn rejects_bad_input_with_positions() {
        let e = parse_spec("class: exp\nphi: t + u").unwrap_err();
        match e {
            SpecError::Parse(p) => assert_eq!((p.line, p.col), (2, 10)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spec("class: exp\nphi: 2*i*t"), Err(SpecError::Parse(_))));
        assert!(matches!(parse_spec("class: rational\nphi: 3"), Err(SpecError::ConstantFunction)));
        assert!(matches!(parse_spec("class: rational\nphi: u/(u-u)"), Err(SpecError::Parse(_))));
        assert!(matches!(parse_spec("class: rational\nphi: u\nmu: 2"), Err(SpecError::Parse(_))));
        assert!(matches!(parse_spec("class: elliptic\nphi: p\ng2: 1"), Err(SpecError::Parse(_))));
        assert!(matches!(parse_spec("class: foo\nphi: u"), Err(SpecError::Parse(_))));
    }

    #[test]
    fn serialize_round_trip() {
        for text in [
            "class: exp\nphi: (t + 1/t)/2",
            "class: exp\nphi: t + 1\nmu: i",
            "class: rational\nphi: (2*u + 1)/(u - 1)",
            "class: elliptic\ng2: 4\ng3: -1/3\nphi: (p + q)/(p^2 - q)",
        ] {
            let s = parse_spec(text).unwrap();
            assert_eq!(parse_spec(&s.serialize()).unwrap(), s, "{text}");
        }
    }

    #[test]
    fn orders() {
        let nu = |t: &str| order(&parse_spec(t).unwrap()).unwrap().nu;
        assert_eq!(nu("class: exp\nphi: t"), 1);
        assert_eq!(nu("class: exp\nphi: (t^2+1)/(2*t)"), 2);
        assert_eq!(nu("class: elliptic\ng2: 4\ng3: 0\nphi: p"), 2);
        assert_eq!(nu("class: elliptic\ng2: 4\ng3: 0\nphi: q"), 3);
        assert_eq!(nu("class: elliptic\ng2: 4\ng3: 1\nphi: p^2"), 4);
        assert_eq!(nu("class: elliptic\ng2: 4\ng3: 1\nphi: 1/q"), 3);
        assert_eq!(nu("class: elliptic\ng2: 4\ng3: 1\nphi: (p + q)/(p - 1)"), 3);
        assert_eq!(nu("class: rational\nphi: u^3"), 3);
    }

    #[test]
    fn branch_count_is_one() {
        for t in ["class: elliptic\ng2: 4\ng3: 0\nphi: p", "class: exp\nphi: t", "class: rational\nphi: (u^2+1)/u"] {
            assert_eq!(branch_count(&parse_spec(t).unwrap()), 1);
        }
    }
}
