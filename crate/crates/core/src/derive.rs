//! Addition theorems by elimination.
//!
//! The graph {(phi(u), phi(v), phi(u+v))} is cut out by the slot relations
//! `x*D(w1) - N(w1)`, `y*D(w2) - N(w2)`, `z*D(w3) - N(w3)` together with the
//! uniformizer addition law. Iterated resultants remove the uniformizers; the
//! eliminant then carries the true relation times spurious factors, which are
//! discarded by numeric vanishing on graph samples.

use crate::algebra::{
    canonicalize, factor, resultant_z, squarefree_part_z, MPoly, Rational, Vars, ZPoly,
};
use crate::funcspec::{self, curve_rhs, discriminant, FuncSpec, FunctionClass, OrderData, SpecError};
use crate::laws;
use crate::numeric::{self, EvalConfig, NumericError};
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeriveError {
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Numeric(#[from] NumericError),
    #[error("degenerate elimination: common factor in {var} between {first} and {second}")]
    Degenerate { var: String, first: String, second: String },
    #[error("degenerate specialization: {0}")]
    DegenerateSpecialization(String),
    #[error("no graph component found (tolerance or sampling window too tight)")]
    NoComponent,
    #[error("ambiguous pruning: {} factors vanish on every sample: {}", .0.len(), .0.join("; "))]
    Ambiguous(Vec<String>),
    #[error("unequal degrees in x, y, z: {0:?}")]
    UnequalDegrees([u32; 3]),
    #[error("degree law violated: degrees {actual:?}, m*nu^2/lambda0 = {predicted}")]
    DegreeLaw { predicted: u32, actual: [u32; 3] },
    #[error("{0}")]
    Law(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl DeriveError {
    /// Degeneracies are reported separately from verification failures.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, DeriveError::Degenerate { .. } | DeriveError::DegenerateSpecialization(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeriveConfig {
    pub eval: EvalConfig,
    /// Graph samples used for pruning and verification (at least 100 are drawn).
    pub samples: usize,
    /// Tolerance for elliptic specs, whose series evaluation is less exact.
    pub elliptic_tol: f64,
}

impl Default for DeriveConfig {
    fn default() -> Self {
        DeriveConfig { eval: EvalConfig::default(), samples: 200, elliptic_tol: 1e-6 }
    }
}

impl DeriveConfig {
    pub fn with_seed(seed: u64) -> Self {
        DeriveConfig { eval: EvalConfig::with_seed(seed), ..Self::default() }
    }

    pub fn tol_for(&self, class: FunctionClass) -> f64 {
        match class {
            FunctionClass::Elliptic => self.elliptic_tol,
            _ => self.eval.tol,
        }
    }

    fn prune_samples(&self) -> usize {
        self.samples.max(100)
    }
}

/// Uniformizer addition law over slot variables (u1..u3, t1..t3 or p1,q1..p3,q3).
#[derive(Clone, Debug, PartialEq)]
pub struct BaseLaw {
    pub class: FunctionClass,
    pub vars: Vars,
    pub relations: Vec<MPoly>,
}

fn slot_names(class: FunctionClass) -> Vec<String> {
    (1..=3)
        .flat_map(|i| class.symbols().iter().map(move |s| format!("{s}{i}")))
        .collect()
}

pub fn base_law(class: FunctionClass, g2: Option<&Rational>, g3: Option<&Rational>) -> Result<BaseLaw, DeriveError> {
    let vars = Vars::new(&slot_names(class));
    let v = |i| MPoly::var(&vars, i);
    let relations = match class {
        FunctionClass::RationalOfU => vec![&(&v(2) - &v(0)) - &v(1)],
        FunctionClass::RationalOfExp => vec![&v(2) - &(&v(0) * &v(1))],
        FunctionClass::Elliptic => {
            let (g2, g3) = match (g2, g3) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(DeriveError::Invalid("elliptic law needs g2 and g3".into())),
            };
            if discriminant(g2, g3).is_zero() {
                return Err(SpecError::ZeroDiscriminant.into());
            }
            let (p1, q1, p2, q2, p3, q3) = (v(0), v(1), v(2), v(3), v(4), v(5));
            let dp = &p2 - &p1;
            let dq = &q2 - &q1;
            // p3 is the third abscissa on the chord through P1, P2
            let chord = &(&(&(&p1 + &p2) + &p3) * &(&dp * &dp)).scale(&Rational::from_integer(4.into()))
                - &(&dq * &dq);
            // (p3, -q3) lies on that chord
            let collinear = &(&(&q3 * &dp) + &(&q1 * &(&p2 - &p3))) + &(&q2 * &(&p3 - &p1));
            let mut rel = vec![chord, collinear];
            for (p, q) in [(0, 1), (2, 3), (4, 5)] {
                rel.push(&v(q).pow(2) - &curve_rhs(&vars, p, g2, g3));
            }
            rel
        }
    };
    Ok(BaseLaw { class, vars, relations })
}

/// One elimination step, kept for `--trace` output.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub var: String,
    pub pivot: String,
    pub results: Vec<String>,
}

/// Eliminates `order` from `polys` by iterated resultants: for each variable
/// the relation of least degree is the pivot and every other relation
/// containing the variable is replaced by its resultant with the pivot.
/// A relation that alone contains the variable is dropped.
fn eliminate_vars(
    mut polys: Vec<ZPoly>,
    order: &[usize],
    trace: &mut Vec<TraceStep>,
) -> Result<Vec<ZPoly>, DeriveError> {
    for &v in order {
        let (with, mut rest): (Vec<ZPoly>, Vec<ZPoly>) = polys.into_iter().partition(|p| p.depends_on(v));
        let name = rest.first().or(with.first()).map(|p| p.vars().name(v).to_string()).unwrap_or_default();
        if with.len() <= 1 {
            polys = rest;
            continue;
        }
        let pivot_at = (0..with.len())
            .min_by_key(|&i| (with[i].degree(v), with[i].nterms()))
            .unwrap();
        let pivot = &with[pivot_at];
        let mut step = TraceStep { var: name.clone(), pivot: pivot.to_string(), results: Vec::new() };
        for (i, other) in with.iter().enumerate() {
            if i == pivot_at {
                continue;
            }
            let r = resultant_z(pivot, other, v);
            if r.is_zero() || r.is_constant() {
                return Err(DeriveError::Degenerate {
                    var: name.clone(),
                    first: short(&pivot.to_string()),
                    second: short(&other.to_string()),
                });
            }
            let r = squarefree_part_z(&r.int_primitive()).sign_normalized();
            step.results.push(r.to_string());
            rest.push(r);
        }
        trace.push(step);
        polys = rest;
    }
    Ok(polys)
}

fn short(s: &str) -> String {
    if s.len() <= 80 {
        s.to_string()
    } else {
        format!("{}...", &s[..s.char_indices().nth(77).map_or(s.len(), |(i, _)| i)])
    }
}

/// Eliminant with the intermediate steps.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub eliminant: MPoly,
    pub trace: Vec<TraceStep>,
}

/// `target * den(w) - num(w)` with the class symbols sent to `slots`.
fn slot_relation(spec: &FuncSpec, vars: &Vars, target: usize, slots: &[usize]) -> ZPoly {
    let map: Vec<Option<usize>> = slots.iter().map(|&s| Some(s)).collect();
    let n = spec.num.remap(vars, &map);
    let d = spec.den.remap(vars, &map);
    (&(&MPoly::var(vars, target) * &d) - &n).to_primitive_z()
}

fn elimination_vars(spec: &FuncSpec) -> Vars {
    let mut names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    names.extend(slot_names(spec.class));
    Vars::new(&names)
}

/// Raw eliminant in x, y, z. Order of elimination: q3, q2, q1, p3, p2, p1
/// (elliptic), t3, t2, t1 (exp), u3, u2, u1 (rational). The curve relation
/// of the sum slot is implied by the chord and collinearity relations and
/// is not used.
pub fn eliminate(spec: &FuncSpec) -> Result<Elimination, DeriveError> {
    let law = base_law(spec.class, spec.g2.as_ref(), spec.g3.as_ref())?;
    let vars = elimination_vars(spec);
    let k = spec.class.symbols().len();
    let mut polys: Vec<ZPoly> = (0..3)
        .map(|slot| {
            let slots: Vec<usize> = (0..k).map(|j| 3 + slot * k + j).collect();
            slot_relation(spec, &vars, slot, &slots)
        })
        .collect();
    let used = match spec.class {
        FunctionClass::Elliptic => &law.relations[..4],
        _ => &law.relations[..],
    };
    polys.extend(used.iter().map(|r| r.embed(&vars).to_primitive_z()));
    let order: Vec<usize> = match spec.class {
        FunctionClass::Elliptic => vec![8, 6, 4, 7, 5, 3],
        _ => vec![5, 4, 3],
    };
    let mut trace = Vec::new();
    let left = eliminate_vars(polys, &order, &mut trace)?;
    let xyz = Vars::new(&["x", "y", "z"]);
    let mut acc = MPoly::one(&xyz);
    for p in &left {
        acc = &acc * &MPoly::from_z(p).remap(&xyz, &(0..vars.len()).map(|i| (i < 3).then_some(i)).collect::<Vec<_>>());
    }
    if left.is_empty() || acc.is_constant() {
        return Err(DeriveError::Degenerate { var: "all".into(), first: "graph".into(), second: "law".into() });
    }
    Ok(Elimination { eliminant: acc, trace })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub samples: usize,
    pub max_residual: f64,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdditionTheorem {
    /// Canonical, irreducible, vanishing on the graph.
    pub g: MPoly,
    pub degrees: [u32; 3],
    pub spec: FuncSpec,
    pub verification: Verification,
}

/// JSON form of an addition theorem.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremRecord {
    pub class: FunctionClass,
    pub spec: String,
    #[serde(rename = "G")]
    pub g: String,
    pub degrees: [u32; 3],
    pub nu: u32,
    pub lambda0: u32,
    pub predicted_degree: u32,
    pub max_residual: f64,
    pub samples: usize,
    pub seed: u64,
}

impl AdditionTheorem {
    pub fn record(&self) -> Result<TheoremRecord, DeriveError> {
        let order = funcspec::order(&self.spec)?;
        let lambda0 = laws::multiplier_group(&self.spec).lambda0;
        Ok(TheoremRecord {
            class: self.spec.class,
            spec: self.spec.serialize(),
            g: self.g.to_string(),
            degrees: self.degrees,
            nu: order.nu,
            lambda0,
            predicted_degree: laws::predicted_degree(order.m, order.nu, lambda0).unwrap_or(0),
            max_residual: self.verification.max_residual,
            samples: self.verification.samples,
            seed: self.verification.seed,
        })
    }
}

fn max_residual(g: &MPoly, points: &[Vec<Complex64>]) -> f64 {
    points.iter().map(|p| crate::algebra::relative_residual(g, p)).fold(0.0, f64::max)
}

/// Irreducible factor of `poly` vanishing on every sample point. With two or
/// more candidates the sample count is doubled and the tolerance divided by
/// ten once before the ambiguity is reported.
pub fn select_component<F>(poly: &MPoly, n: usize, tol: f64, sampler: F) -> Result<(MPoly, f64), DeriveError>
where
    F: Fn(usize) -> Result<Vec<Vec<Complex64>>, NumericError>,
{
    let factors: Vec<MPoly> = factor(poly).map_err(|e| DeriveError::Invalid(e.to_string()))?
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    let mut candidates = factors;
    for (count, tol) in [(n, tol), (2 * n, tol / 10.0)] {
        let points = sampler(count)?;
        candidates.retain(|f| points.iter().all(|p| crate::algebra::relative_residual(f, p) < tol));
        match candidates.len() {
            0 => return Err(DeriveError::NoComponent),
            1 => {
                let g = candidates.pop().unwrap();
                debug_assert!(poly.div_exact(&g).is_some());
                let r = max_residual(&g, &points);
                return Ok((g, r));
            }
            _ => {}
        }
    }
    Err(DeriveError::Ambiguous(candidates.iter().map(|f| f.to_string()).collect()))
}

fn graph_points(spec: &FuncSpec, n: usize, cfg: &EvalConfig) -> Result<Vec<Vec<Complex64>>, NumericError> {
    Ok(numeric::sample_graph(spec, n, cfg)?.into_iter().map(|s| vec![s.x, s.y, s.z]).collect())
}

/// The unique factor of the eliminant vanishing on the graph.
pub fn prune(eliminant: &MPoly, spec: &FuncSpec, cfg: &DeriveConfig) -> Result<AdditionTheorem, DeriveError> {
    if eliminant.is_zero() {
        return Err(DeriveError::Invalid("zero eliminant".into()));
    }
    let n = cfg.prune_samples();
    let tol = cfg.tol_for(spec.class);
    let (g, r) = select_component(eliminant, n, tol, |k| graph_points(spec, k, &cfg.eval))?;
    let g = canonicalize(&g).map_err(|e| DeriveError::Invalid(e.to_string()))?;
    let degrees = [g.degree(0), g.degree(1), g.degree(2)];
    Ok(AdditionTheorem {
        g,
        degrees,
        spec: spec.clone(),
        verification: Verification { samples: n, max_residual: r, seed: cfg.eval.seed, tol },
    })
}

/// Eliminate, prune and check the degree law m*nu^2/lambda0 in every slot.
pub fn derive_addition_theorem(spec: &FuncSpec, cfg: &DeriveConfig) -> Result<AdditionTheorem, DeriveError> {
    cfg.eval.validate()?;
    let elim = eliminate(spec)?;
    let thm = prune(&elim.eliminant, spec, cfg)?;
    let d = thm.degrees;
    if d[0] != d[1] || d[1] != d[2] {
        return Err(DeriveError::UnequalDegrees(d));
    }
    let OrderData { nu, m } = funcspec::order(spec)?;
    let lambda0 = laws::multiplier_group(spec).lambda0;
    let predicted = laws::predicted_degree(m, nu, lambda0).map_err(|e| DeriveError::Law(e.to_string()))?;
    if predicted != d[2] {
        return Err(DeriveError::DegreeLaw { predicted, actual: d });
    }
    Ok(thm)
}

/// Relation among chi(u), chi(v), chi(u+v) obtained from
/// F(phi(u), psi(v), chi(u+v)) = 0 by fixing the first two arguments at the
/// base values x0 = phi(a), y0 = psi(b). `f` is over (X, Y, Z); the result is
/// square-free and over (z1, z2, z3).
pub fn reduce_f_to_g(f: &MPoly, x0: &Rational, y0: &Rational) -> Result<MPoly, DeriveError> {
    if f.nvars() != 3 {
        return Err(DeriveError::Invalid("F must be a polynomial in X, Y, Z".into()));
    }
    if (0..3).any(|i| !f.depends_on(i)) {
        return Err(DeriveError::Invalid("F must involve each of X, Y, Z".into()));
    }
    let a = f.eval_var(0, x0);
    let b = f.eval_var(1, y0);
    if !a.depends_on(1) {
        return Err(DeriveError::DegenerateSpecialization(format!("F(x0, Y, Z) = {a} is free of Y")));
    }
    if !b.depends_on(0) {
        return Err(DeriveError::DegenerateSpecialization(format!("F(X, y0, Z) = {b} is free of X")));
    }
    // working variables X, Y, z1, z2, z3
    let w = Vars::new(&["X", "Y", "z1", "z2", "z3"]);
    let a = a.remap(&w, &[Some(0), Some(1), Some(3)]);
    let b = b.remap(&w, &[Some(0), Some(1), Some(2)]);
    let full = f.remap(&w, &[Some(0), Some(1), Some(4)]);
    let r1 = resultant_z(&a.to_primitive_z(), &full.to_primitive_z(), 1);
    if r1.is_zero() || !r1.depends_on(0) {
        return Err(DeriveError::DegenerateSpecialization("Res_Y(A, F) is free of X".into()));
    }
    let r = resultant_z(&b.to_primitive_z(), &r1, 0);
    if r.is_zero() || r.is_constant() {
        return Err(DeriveError::DegenerateSpecialization("final eliminant vanishes identically".into()));
    }
    let z = Vars::new(&["z1", "z2", "z3"]);
    let g = MPoly::from_z(&squarefree_part_z(&r.int_primitive())).remap(&z, &[None, None, Some(0), Some(1), Some(2)]);
    if (0..3).any(|i| !g.depends_on(i)) {
        return Err(DeriveError::DegenerateSpecialization(format!("relation {g} does not involve every slot")));
    }
    canonicalize(&g).map_err(|e| DeriveError::Invalid(e.to_string()))
}

/// Numerator and denominator of the derivative of phi in the class
/// uniformizers. The exp class uses t*d/dt, the derivative for mu = 1;
/// for general mu the true derivative is mu times this value.
pub fn derivative_parts(spec: &FuncSpec) -> (MPoly, MPoly) {
    let (n, d) = (&spec.num, &spec.den);
    let vars = n.vars().clone();
    let du = |f: &MPoly| -> MPoly {
        match spec.class {
            FunctionClass::RationalOfU => f.derivative(0),
            FunctionClass::RationalOfExp => &MPoly::var(&vars, 0) * &f.derivative(0),
            FunctionClass::Elliptic => {
                // p' = q, q' = 6p^2 - g2/2
                let g2 = spec.g2.clone().unwrap();
                let p = MPoly::var(&vars, 0);
                let dq = &p.pow(2).scale(&Rational::from_integer(6.into()))
                    - &MPoly::constant(&vars, g2 / Rational::from_integer(2.into()));
                &(&f.derivative(0) * &MPoly::var(&vars, 1)) + &(&f.derivative(1) * &dq)
            }
        }
    };
    let num = &(&du(n) * d) - &(n * &du(d));
    let den = d * d;
    (num, den)
}

/// Value of the (normalized) derivative at u, from the symbolic derivative.
pub fn derivative_eval(spec: &FuncSpec, u: Complex64, cfg: &EvalConfig) -> Result<Complex64, NumericError> {
    let (num, den) = derivative_parts(spec);
    let vals = numeric::uniformizer_values(spec, u, cfg)?;
    numeric::ratio_at(&num, &den, &vals)
}

/// Canonical relation D(x, d) = 0 between phi and its derivative.
pub fn derivative_relation(spec: &FuncSpec, cfg: &DeriveConfig) -> Result<MPoly, DeriveError> {
    let k = spec.class.symbols().len();
    let mut names: Vec<String> = vec!["x".into(), "d".into()];
    names.extend(spec.class.symbols().iter().map(|s| s.to_string()));
    let vars = Vars::new(&names);
    let slots: Vec<usize> = (2..2 + k).collect();
    let map: Vec<Option<usize>> = slots.iter().map(|&s| Some(s)).collect();
    let (dn, dd) = derivative_parts(spec);
    let mut polys = vec![
        slot_relation(spec, &vars, 0, &slots),
        (&(&MPoly::var(&vars, 1) * &dd.remap(&vars, &map)) - &dn.remap(&vars, &map)).to_primitive_z(),
    ];
    let order: Vec<usize> = if spec.class == FunctionClass::Elliptic {
        let (g2, g3) = spec.invariants().unwrap();
        polys.push((&MPoly::var(&vars, 3).pow(2) - &curve_rhs(&vars, 2, g2, g3)).to_primitive_z());
        vec![3, 2]
    } else {
        vec![2]
    };
    let mut trace = Vec::new();
    let left = eliminate_vars(polys, &order, &mut trace)?;
    let xd = Vars::new(&["x", "d"]);
    let mut acc = MPoly::one(&xd);
    for p in &left {
        acc = &acc * &MPoly::from_z(p).remap(&xd, &(0..vars.len()).map(|i| (i < 2).then_some(i)).collect::<Vec<_>>());
    }
    if acc.is_constant() {
        return Err(DeriveError::Degenerate { var: "all".into(), first: "phi".into(), second: "phi'".into() });
    }
    let ev = &cfg.eval;
    let sampler = |n: usize| {
        numeric::sample_with(n, ev, 0x0d, |rng| {
            let u = numeric::draw_arg(rng, ev);
            let x = numeric::phi_guarded(spec, u, ev)?;
            let d = derivative_eval(spec, u, ev).ok().filter(|d| d.norm() <= ev.pole_guard)?;
            Some(vec![x, d])
        })
    };
    let (g, _) = select_component(&acc, cfg.prune_samples(), cfg.tol_for(spec.class), sampler)?;
    canonicalize(&g).map_err(|e| DeriveError::Invalid(e.to_string()))
}
