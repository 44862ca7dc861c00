//! Multivariate gcd, content and square-free decomposition over the integers.

use super::poly::ZPoly;
use super::resultant::{prs_last, UniPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Greatest common divisor with positive leading coefficient.
pub fn gcd_z(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.clone().sign_normalized();
    }
    if b.is_zero() {
        return a.clone().sign_normalized();
    }
    if a.is_constant() || b.is_constant() {
        let g = a.int_content().gcd(&b.int_content());
        return ZPoly::constant(a.vars(), g);
    }
    if a == b {
        return a.clone().sign_normalized();
    }
    if let Some(g) = heuristic_gcd(a, b) {
        return g;
    }
    let var = (0..a.nvars()).rev().find(|&v| a.depends_on(v) || b.depends_on(v)).unwrap();
    if !a.depends_on(var) {
        return gcd_z(a, &content_in(b, var));
    }
    if !b.depends_on(var) {
        return gcd_z(&content_in(a, var), b);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_z(&ca, &cb);
    // cheap exits for the common case of one dividing the other
    let g = if pa.degree(var) <= pb.degree(var) && pb.div_exact(&pa).is_some() {
        pa
    } else if pb.degree(var) < pa.degree(var) && pa.div_exact(&pb).is_some() {
        pb
    } else {
        let last = prs_last(&UniPoly::from_poly(&pa, var), &UniPoly::from_poly(&pb, var), a.vars());
        if last.deg() <= 0 {
            ZPoly::one(a.vars())
        } else {
            let p = last.to_poly(var);
            let cp = content_in(&p, var);
            p.div_exact(&cp).expect("content divides")
        }
    };
    (&g * &c).sign_normalized()
}

fn max_norm(p: &ZPoly) -> BigInt {
    p.terms().map(|(_, c)| c.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Coefficient-wise symmetric residue modulo `m`.
fn symmetric_mod(p: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::from_terms(
        p.vars(),
        p.terms().map(|(mono, c)| {
            let mut r = c.mod_floor(m);
            if r > half {
                r -= m;
            }
            (mono.clone(), r)
        }),
    )
}

/// Heuristic gcd: evaluate the main variable at a large integer xi, take the
/// gcd of the images recursively and read the answer off the xi-adic
/// expansion. Any result is certified by division; None means give up.
fn heuristic_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if a.is_zero() || b.is_zero() {
        return Some(gcd_z(a, b));
    }
    if a.is_constant() && b.is_constant() {
        return Some(ZPoly::constant(a.vars(), a.int_content().gcd(&b.int_content())));
    }
    let var = (0..a.nvars()).rev().find(|&v| a.depends_on(v) || b.depends_on(v))?;
    let (ca, cb) = (a.int_content(), b.int_content());
    let k = ca.gcd(&cb);
    let pa = a.int_primitive();
    let pb = b.int_primitive();
    let mut xi: BigInt = 2 * max_norm(&pa).min(max_norm(&pb)) + 29;
    for _ in 0..6 {
        let ea = pa.eval_var(var, &xi);
        let eb = pb.eval_var(var, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(mut h) = heuristic_gcd(&ea, &eb) {
                let mut g = ZPoly::zero(a.vars());
                let mut i = 0u16;
                while !h.is_zero() {
                    let r = symmetric_mod(&h, &xi);
                    g = &g + &r.mul_term(&super::Monomial::var(a.nvars(), var, i), &BigInt::one());
                    h = (&h - &r).map_coeffs(|c| c / &xi);
                    i += 1;
                }
                if !g.is_zero() {
                    let g = g.int_primitive().sign_normalized();
                    if pa.div_exact(&g).is_some() && pb.div_exact(&g).is_some() {
                        return Some(g.scale(&k));
                    }
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// gcd of the coefficients of `p` viewed as a polynomial in `var`
/// (including the integer content), with positive leading coefficient.
pub fn content_in(p: &ZPoly, var: usize) -> ZPoly {
    let coeffs = p.coeffs_in(var);
    let mut nonzero: Vec<&ZPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| c.nterms());
    let mut g = ZPoly::zero(p.vars());
    for c in nonzero {
        g = gcd_z(&g, c);
        if g.is_constant() {
            let k = p.int_content();
            return ZPoly::constant(p.vars(), k);
        }
    }
    g
}

/// Square-free decomposition of a nonzero integer polynomial: pairwise
/// coprime square-free primitive factors with multiplicities, together with
/// the leftover integer unit/content.
pub fn squarefree_z(p: &ZPoly) -> (BigInt, Vec<(ZPoly, u32)>) {
    assert!(!p.is_zero());
    let k = p.int_content();
    let k = if p.leading_coeff() < BigInt::zero() { -k } else { k };
    let prim = p.div_exact(&ZPoly::constant(p.vars(), k.clone())).unwrap();
    let mut out = Vec::new();
    sqf_rec(&prim, &mut out);
    // merge equal multiplicities
    out.sort_by_key(|(_, m)| *m);
    let mut merged: Vec<(ZPoly, u32)> = Vec::new();
    for (f, m) in out {
        match merged.last_mut() {
            Some((g, mm)) if *mm == m => *g = (&*g * &f).sign_normalized(),
            _ => merged.push((f, m)),
        }
    }
    merged.reverse();
    (k, merged)
}

fn sqf_rec(p: &ZPoly, out: &mut Vec<(ZPoly, u32)>) {
    if p.is_constant() {
        return;
    }
    let var = (0..p.nvars()).rev().find(|&v| p.depends_on(v)).unwrap();
    let c = content_in(p, var);
    let pp = p.div_exact(&c).unwrap().sign_normalized();
    if !c.is_constant() {
        sqf_rec(&c, out);
    }
    yun(&pp, var, out);
}

/// Yun's algorithm for a polynomial primitive in `var`.
fn yun(a: &ZPoly, var: usize, out: &mut Vec<(ZPoly, u32)>) {
    let da = a.derivative(var);
    let a0 = gcd_z(a, &da);
    let mut b = a.div_exact(&a0).expect("gcd divides");
    let c = da.div_exact(&a0).expect("gcd divides derivative");
    let mut d = &c - &b.derivative(var);
    let mut i = 1;
    while !b.is_constant() {
        let ai = gcd_z(&b, &d);
        b = b.div_exact(&ai).expect("gcd divides");
        let ci = d.div_exact(&ai).expect("gcd divides");
        d = &ci - &b.derivative(var);
        if !ai.is_constant() {
            out.push((ai.sign_normalized(), i));
        }
        i += 1;
    }
}

/// Product of the distinct square-free factors.
pub fn squarefree_part_z(p: &ZPoly) -> ZPoly {
    let (_, fs) = squarefree_z(p);
    let mut acc = ZPoly::one(p.vars());
    for (f, _) in fs {
        acc = &acc * &f;
    }
    acc
}

#[allow(dead_code)]
pub(crate) fn is_unit_content(p: &ZPoly) -> bool {
    p.int_content().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Vars};

    fn zp(s: &str) -> ZPoly {
        let v = Vars::new(&["x", "y", "z"]);
        parse_poly(s, &v).unwrap().map_coeffs(|c| c.to_integer()).sign_normalized()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_z(&zp("x^2 - y^2"), &zp("x - y")), zp("x - y"));
        assert_eq!(gcd_z(&zp("(x+y)^2*z"), &zp("(x+y)*z^2")), zp("x*z + y*z"));
        assert_eq!(gcd_z(&zp("2*x + 2"), &zp("0")), zp("2*x + 2"));
        assert_eq!(gcd_z(&zp("x*y + 1"), &zp("x - z")), zp("1"));
        assert_eq!(gcd_z(&zp("6*x"), &zp("4*x^2")), zp("2*x"));
    }

    #[test]
    fn squarefree_examples() {
        let (_, f) = squarefree_z(&zp("(x - y)^2*(x + y)"));
        assert_eq!(f, vec![(zp("x - y"), 2), (zp("x + y"), 1)]);
        let (_, f) = squarefree_z(&zp("(z - x*y)^2"));
        assert_eq!(f, vec![(zp("x*y - z"), 2)]);
        let (_, f) = squarefree_z(&zp("x*y"));
        assert_eq!(f, vec![(zp("x*y"), 1)]);
        let (_, f) = squarefree_z(&zp("x^2*y^3*(x+y)^3"));
        assert_eq!(f, vec![(zp("x*y + y^2"), 3), (zp("x"), 2)]);
    }
}
