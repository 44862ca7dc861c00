//! Floating-point evaluation of spec functions near the origin and
//! deterministic sampling of graph points (phi(u), phi(v), phi(u+v)).

use crate::algebra::{eval_slice, relative_residual, Coeff, MPoly, Rational, Vars};
use crate::funcspec::{FuncSpec, FunctionClass};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub series_terms: usize,
    pub tol: f64,
    pub seed: u64,
    /// Allowed |u| for sampled arguments.
    pub sample_radius: (f64, f64),
    /// Samples with any |value| above this are redrawn.
    pub pole_guard: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { series_terms: 30, tol: 1e-9, seed: 0, sample_radius: (0.05, 0.25), pole_guard: 1e6 }
    }
}

impl EvalConfig {
    pub fn with_seed(seed: u64) -> Self {
        EvalConfig { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        let (lo, hi) = self.sample_radius;
        if self.series_terms < 10 {
            return Err(NumericError::InvalidConfig("series_terms must be at least 10".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(NumericError::InvalidConfig("tol must lie in (0, 1)".into()));
        }
        if !(lo > 0.0 && lo < hi) {
            return Err(NumericError::InvalidConfig("sample_radius must satisfy 0 < lo < hi".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("pole at u = 0")]
    Pole,
    #[error("|u| = {modulus} outside the series range (limit {limit})")]
    OutOfRange { modulus: f64, limit: f64 },
    #[error("near pole: denominator below 1e-12")]
    NearPole,
    #[error("spec has dense poles in sampling window")]
    DensePoles,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSample {
    pub u: Complex64,
    pub v: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

/// Laurent data of wp: c_k for k = 2..terms+1 and an estimate of the
/// convergence radius (distance to the nearest nonzero lattice point).
struct WpSeries {
    coeffs: Vec<f64>,
    radius: f64,
}

fn wp_series(g2: &Rational, g3: &Rational, terms: usize) -> WpSeries {
    let mut c = vec![0.0f64; terms + 2];
    c[2] = g2.to_f64() / 20.0;
    if terms >= 2 {
        c[3] = g3.to_f64() / 28.0;
    }
    for k in 4..terms + 2 {
        let s: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c[k] = 3.0 * s / (((2 * k + 1) * (k - 3)) as f64);
    }
    let radius = (terms / 2 + 2..terms + 2)
        .filter(|&k| c[k] != 0.0)
        .map(|k| c[k].abs().powf(-1.0 / (2 * k - 2) as f64))
        .fold(f64::INFINITY, f64::min);
    WpSeries { coeffs: c[2..].to_vec(), radius }
}

fn check_range(s: &WpSeries, u: Complex64) -> Result<(), NumericError> {
    if u.norm() == 0.0 {
        return Err(NumericError::Pole);
    }
    let limit = s.radius / 2.0;
    if u.norm() > limit {
        return Err(NumericError::OutOfRange { modulus: u.norm(), limit });
    }
    Ok(())
}

/// Largest |u| accepted by the elliptic evaluators for these invariants.
pub fn wp_range(g2: &Rational, g3: &Rational, cfg: &EvalConfig) -> f64 {
    wp_series(g2, g3, cfg.series_terms).radius / 2.0
}

/// wp(u) = 1/u^2 + sum_k c_k u^(2k-2).
pub fn wp_eval(g2: &Rational, g3: &Rational, u: Complex64, cfg: &EvalConfig) -> Result<Complex64, NumericError> {
    let s = wp_series(g2, g3, cfg.series_terms);
    check_range(&s, u)?;
    Ok(wp_pair(&s, u).0)
}

/// wp'(u) = -2/u^3 + sum_k (2k-2) c_k u^(2k-3).
pub fn wp_prime_eval(
    g2: &Rational,
    g3: &Rational,
    u: Complex64,
    cfg: &EvalConfig,
) -> Result<Complex64, NumericError> {
    let s = wp_series(g2, g3, cfg.series_terms);
    check_range(&s, u)?;
    Ok(wp_pair(&s, u).1)
}

fn wp_pair(s: &WpSeries, u: Complex64) -> (Complex64, Complex64) {
    let z = u * u;
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    // Horner in z; coefficient index i corresponds to k = i + 2
    for (i, &c) in s.coeffs.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        p = p * z + c;
        dp = dp * z + c * (2.0 * k - 2.0);
    }
    (z.inv() + p * z, -2.0 / (z * u) + dp * u)
}

/// Values of the uniformizer symbols of `spec` at `u`.
pub fn uniformizer_values(spec: &FuncSpec, u: Complex64, cfg: &EvalConfig) -> Result<Vec<Complex64>, NumericError> {
    match spec.class {
        FunctionClass::RationalOfU => Ok(vec![u]),
        FunctionClass::RationalOfExp => Ok(vec![(spec.mu.to_complex() * u).exp()]),
        FunctionClass::Elliptic => {
            let (g2, g3) = spec.invariants().unwrap();
            let s = wp_series(g2, g3, cfg.series_terms);
            check_range(&s, u)?;
            let (p, q) = wp_pair(&s, u);
            Ok(vec![p, q])
        }
    }
}

/// Value of N/D at uniformizer values.
pub fn ratio_at(num: &MPoly, den: &MPoly, vals: &[Complex64]) -> Result<Complex64, NumericError> {
    let d = eval_slice(den, vals);
    if d.norm() < 1e-12 {
        return Err(NumericError::NearPole);
    }
    Ok(eval_slice(num, vals) / d)
}

pub fn phi_eval(spec: &FuncSpec, u: Complex64, cfg: &EvalConfig) -> Result<Complex64, NumericError> {
    let vals = uniformizer_values(spec, u, cfg)?;
    ratio_at(&spec.num, &spec.den, &vals)
}

/// Value of phi that also enforces the pole guard.
pub fn phi_guarded(spec: &FuncSpec, u: Complex64, cfg: &EvalConfig) -> Option<Complex64> {
    phi_eval(spec, u, cfg).ok().filter(|x| x.norm() <= cfg.pole_guard && x.is_finite())
}

/// Random stream for sample `index`; results do not depend on evaluation order.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Argument with uniform phase and modulus in the sample window.
pub fn draw_arg(rng: &mut ChaCha8Rng, cfg: &EvalConfig) -> Complex64 {
    let (lo, hi) = cfg.sample_radius;
    let r = rng.gen_range(lo..hi);
    let th = rng.gen_range(0.0..2.0 * PI);
    Complex64::from_polar(r, th)
}

pub fn in_window(u: Complex64, cfg: &EvalConfig) -> bool {
    let (lo, hi) = cfg.sample_radius;
    (lo..=hi).contains(&u.norm())
}

const MAX_ATTEMPTS: usize = 100;

/// Draw `n` items, each from its own stream, redrawing while `draw`
/// returns None; more than 99% rejections for an item is an error.
pub fn sample_with<T, F>(n: usize, cfg: &EvalConfig, salt: u64, draw: F) -> Result<Vec<T>, NumericError>
where
    F: Fn(&mut ChaCha8Rng) -> Option<T>,
{
    (0..n)
        .map(|i| {
            let mut rng = stream(cfg.seed ^ salt, i as u64);
            (0..MAX_ATTEMPTS).find_map(|_| draw(&mut rng)).ok_or(NumericError::DensePoles)
        })
        .collect()
}

/// Graph samples (phi(u), phi(v), phi(u+v)) with u, v and u+v in the window
/// and u, v kept apart.
pub fn sample_graph(spec: &FuncSpec, n: usize, cfg: &EvalConfig) -> Result<Vec<GraphSample>, NumericError> {
    cfg.validate()?;
    sample_with(n, cfg, 0, |rng| {
        let u = draw_arg(rng, cfg);
        let v = draw_arg(rng, cfg);
        if !in_window(u + v, cfg) || (u - v).norm() < 0.02 {
            return None;
        }
        let x = phi_guarded(spec, u, cfg)?;
        let y = phi_guarded(spec, v, cfg)?;
        let z = phi_guarded(spec, u + v, cfg)?;
        Some(GraphSample { u, v, x, y, z })
    })
}

/// Largest relative residual of `g` (variables x, y, z) over the samples.
pub fn max_graph_residual(g: &MPoly, samples: &[GraphSample]) -> f64 {
    samples.iter().map(|s| relative_residual(g, &[s.x, s.y, s.z])).fold(0.0, f64::max)
}

/// Index of the worst sample and its residual.
pub fn worst_sample(g: &MPoly, samples: &[GraphSample]) -> Option<(usize, f64)> {
    samples
        .iter()
        .map(|s| relative_residual(g, &[s.x, s.y, s.z]))
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial with ascending coefficients
/// (Aberth-Ehrlich iteration).
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    while a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    if a.len() < 2 {
        return Vec::new();
    }
    let n = a.len() - 1;
    let lead = a[n];
    let a: Vec<Complex64> = a.iter().map(|c| c / lead).collect();
    let radius = (0..n)
        .map(|i| a[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(&a, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[k] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn dense_at(p: &MPoly, var: usize, fixed: &[Complex64]) -> Vec<Complex64> {
    p.coeffs_in(var).iter().map(|c| eval_slice(c, fixed)).collect()
}

/// Number of uniformizer points where phi takes the value `c` (for a
/// generic `c`); used to cross-check the symbolic order.
pub fn count_preimages(spec: &FuncSpec, c: Complex64) -> usize {
    let cq = |x: &MPoly| x.clone();
    match spec.class {
        FunctionClass::RationalOfU | FunctionClass::RationalOfExp => {
            let n: Vec<Complex64> = dense_at(&spec.num, 0, &[Complex64::new(0.0, 0.0)]);
            let d: Vec<Complex64> = dense_at(&spec.den, 0, &[Complex64::new(0.0, 0.0)]);
            let len = n.len().max(d.len());
            let f: Vec<Complex64> = (0..len)
                .map(|i| n.get(i).copied().unwrap_or_default() - c * d.get(i).copied().unwrap_or_default())
                .collect();
            poly_roots(&f)
                .into_iter()
                .filter(|r| relative_residual(&spec.den, &[*r]) > 1e-6)
                .filter(|r| spec.class == FunctionClass::RationalOfU || r.norm() > 1e-9)
                .count()
        }
        FunctionClass::Elliptic => {
            let (g2, g3) = spec.invariants().unwrap();
            let vars = Vars::new(&["p", "q"]);
            let parts = spec.num.coeffs_in(1);
            let a = parts.first().cloned().unwrap_or_else(|| MPoly::zero(&vars));
            let b = parts.get(1).cloned().unwrap_or_else(|| MPoly::zero(&vars));
            let d = cq(&spec.den);
            let zero = Complex64::new(0.0, 0.0);
            let da = dense_at(&a, 0, &[zero, zero]);
            let dd = dense_at(&d, 0, &[zero, zero]);
            let len = da.len().max(dd.len());
            // a(p) - c d(p)
            let lin: Vec<Complex64> = (0..len)
                .map(|i| da.get(i).copied().unwrap_or_default() - c * dd.get(i).copied().unwrap_or_default())
                .collect();
            let rhs = crate::funcspec::curve_rhs(&vars, 0, g2, g3);
            let pole = |r: &Complex64| relative_residual(&d, &[*r, zero]) < 1e-6;
            if b.is_zero() {
                // each p gives the two points (p, +-q)
                2 * poly_roots(&lin).into_iter().filter(|r| !pole(r)).count()
            } else {
                let db = dense_at(&b, 0, &[zero, zero]);
                let df = dense_at(&rhs, 0, &[zero, zero]);
                let sq = cmul(&lin, &lin);
                let bf = cmul(&cmul(&db, &db), &df);
                let n = sq.len().max(bf.len());
                let f: Vec<Complex64> = (0..n)
                    .map(|i| sq.get(i).copied().unwrap_or_default() - bf.get(i).copied().unwrap_or_default())
                    .collect();
                poly_roots(&f).into_iter().filter(|r| !pole(r)).count()
            }
        }
    }
}

fn cmul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::parse_spec;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn wp_values_near_origin() {
        let cfg = EvalConfig::default();
        let u = Complex64::new(0.1, 0.0);
        let p = wp_eval(&r(4), &r(0), u, &cfg).unwrap();
        // 1/u^2 + (g2/20) u^2 + (g2^2/1200) u^6
        let hand = 100.0 + 0.2 * 0.01 + (16.0 / 1200.0) * 1e-6;
        assert!((p.re - hand).abs() < 1e-9 && p.im.abs() < 1e-12);
        let dp = wp_prime_eval(&r(4), &r(0), u, &cfg).unwrap();
        assert!((dp.re + 2000.0).abs() < 0.1);
        let small = Complex64::new(0.0, 0.01);
        let p = wp_eval(&r(4), &r(1), small, &cfg).unwrap();
        assert!((small * small * p - 1.0).norm() < 1e-8);
    }

    #[test]
    fn wp_errors() {
        let cfg = EvalConfig::default();
        assert_eq!(wp_eval(&r(4), &r(0), Complex64::new(0.0, 0.0), &cfg), Err(NumericError::Pole));
        assert!(matches!(
            wp_eval(&r(4), &r(0), Complex64::new(5.0, 0.0), &cfg),
            Err(NumericError::OutOfRange { .. })
        ));
    }

    #[test]
    fn phi_examples() {
        let cfg = EvalConfig::default();
        let cosh = parse_spec("class: exp\nphi: (t^2+1)/(2*t)").unwrap();
        let v = phi_eval(&cosh, Complex64::new(0.0, 0.0), &cfg).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        let cos = cosh.with_mu(crate::funcspec::Mu::i());
        let v = phi_eval(&cos, Complex64::new(0.7, 0.0), &cfg).unwrap();
        assert!((v - 0.7f64.cos()).norm() < 1e-14);
        let sq = parse_spec("class: rational\nphi: u^2").unwrap();
        assert_eq!(phi_eval(&sq, Complex64::new(3.0, 0.0), &cfg).unwrap(), Complex64::new(9.0, 0.0));
        let inv = parse_spec("class: rational\nphi: 1/u").unwrap();
        assert_eq!(phi_eval(&inv, Complex64::new(0.0, 0.0), &cfg), Err(NumericError::NearPole));
    }

    #[test]
    fn exp_samples_satisfy_functional_equation() {
        let spec = parse_spec("class: exp\nphi: t").unwrap();
        let cfg = EvalConfig::default();
        let s = sample_graph(&spec, 50, &cfg).unwrap();
        assert!(s.iter().all(|g| (g.z - g.x * g.y).norm() < 1e-12));
        assert_eq!(s, sample_graph(&spec, 50, &cfg).unwrap());
        // a prefix does not depend on how many samples are requested
        assert_eq!(s[..10], sample_graph(&spec, 10, &cfg).unwrap()[..]);
    }

    #[test]
    fn dense_poles_are_reported() {
        let spec = parse_spec("class: rational\nphi: 1/u^12").unwrap();
        let e = sample_graph(&spec, 5, &EvalConfig::default()).unwrap_err();
        assert_eq!(e, NumericError::DensePoles);
    }

    #[test]
    fn aberth_finds_roots() {
        let c = |x: f64| Complex64::new(x, 0.0);
        // (z - 1)(z + 2)(z - 3i)
        let roots = poly_roots(&[Complex64::new(0.0, 6.0), Complex64::new(-2.0, -3.0), Complex64::new(1.0, -3.0), c(1.0)]);
        for want in [c(1.0), c(-2.0), Complex64::new(0.0, 3.0)] {
            assert!(roots.iter().any(|r| (r - want).norm() < 1e-10), "{roots:?}");
        }
    }
}
