use addtheo::algebra::{parse_poly, MPoly, Rational, Vars};
use addtheo::derive::{self, AdditionTheorem, DeriveConfig, DeriveError};
use addtheo::funcspec::{self, FuncSpec, SpecError};
use addtheo::laws::{self, LawError};
use addtheo::numeric::{self, GraphSample, NumericError};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "addtheo", version, about = "Derive and check algebraic addition theorems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Emit the full JSON run report instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for every numeric sample stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance; defaults to 1e-9, or 1e-6 for elliptic specs.
    #[arg(long)]
    tol: Option<f64>,
    /// Graph samples drawn for pruning and verification.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Record wall-clock milliseconds in the JSON report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the irreducible addition theorem G(x, y, z) = 0.
    Derive {
        spec: String,
        /// Print intermediate eliminants to stderr (not part of the output contract).
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check a candidate G numerically on the graph of phi.
    Verify {
        spec: String,
        /// G over x, y, z: a file path or the polynomial itself.
        #[arg(long)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Order data and the predicted degree m*nu^2/lambda0.
    Degrees {
        spec: String,
        /// Also derive G and report its actual degrees.
        #[arg(long)]
        derive: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Multipliers, lambda0 and the full substitution group.
    Symmetry {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Relation K among phi(u), phi(v), phi(w), phi(t) with u + v = w + t.
    Krel {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce F(phi(u), psi(v), chi(u+v)) = 0 to a relation for chi alone.
    #[command(name = "reduce-f")]
    ReduceF {
        /// F over X, Y, Z: a file path or the polynomial itself.
        f: String,
        #[arg(long, default_value = "0")]
        x0: Rational,
        #[arg(long, default_value = "0")]
        y0: Rational,
        #[command(flatten)]
        common: Common,
    },
    /// Do two specs share an addition theorem, and with which rescaling?
    Same {
        spec_a: String,
        spec_b: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Ok,
    VerificationFailed,
    Degenerate,
    ParseError,
}

impl Status {
    fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::ParseError => 2,
            Status::Degenerate => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Settings {
    tol: f64,
    elliptic_tol: f64,
    samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RunReport {
    command: String,
    paths: Vec<String>,
    seed: u64,
    settings: Settings,
    timing_ms: Option<u64>,
    status: Status,
    results: Option<Value>,
    error: Option<String>,
}

/// A failed command: status, message, and an optional partial result.
struct Failure {
    status: Status,
    message: String,
    results: Option<Value>,
    text: Vec<String>,
}

impl Failure {
    fn new(status: Status, message: impl Into<String>) -> Self {
        Failure { status, message: message.into(), results: None, text: Vec::new() }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::new(Status::ParseError, e.to_string())
    }
}

impl From<DeriveError> for Failure {
    fn from(e: DeriveError) -> Self {
        let status = match &e {
            _ if e.is_degenerate() => Status::Degenerate,
            DeriveError::Spec(_) | DeriveError::Invalid(_) | DeriveError::Numeric(NumericError::InvalidConfig(_)) => {
                Status::ParseError
            }
            _ => Status::VerificationFailed,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<LawError> for Failure {
    fn from(e: LawError) -> Self {
        match e {
            LawError::Derive(d) => d.into(),
            other => Failure::new(Status::VerificationFailed, other.to_string()),
        }
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        DeriveError::from(e).into()
    }
}

/// Text lines for stdout plus the JSON result.
type Outcome = Result<(Vec<String>, Value), Failure>;

fn read_input(path_or_inline: &str) -> String {
    std::fs::read_to_string(path_or_inline).unwrap_or_else(|_| path_or_inline.to_string())
}

/// Spec from a file, or a bundled spec given as `bundled:<name>`.
fn load_spec(path: &str) -> Result<FuncSpec, Failure> {
    if let Some(name) = path.strip_prefix("bundled:") {
        return funcspec::bundled(name).ok_or_else(|| Failure::new(Status::ParseError, format!("no bundled spec named {name}")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(Status::ParseError, format!("cannot read {path}: {e}")))?;
    Ok(funcspec::parse_spec(&text)?)
}

fn config(common: &Common) -> DeriveConfig {
    let mut cfg = DeriveConfig { samples: common.samples, ..DeriveConfig::with_seed(common.seed) };
    if let Some(t) = common.tol {
        cfg.eval.tol = t;
        cfg.elliptic_tol = t;
    }
    cfg
}

fn complex_text(c: Complex64) -> String {
    format!("{:.12e}{:+.12e}i", c.re, c.im)
}

fn int_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn derive_thm(spec: &FuncSpec, cfg: &DeriveConfig) -> Result<AdditionTheorem, Failure> {
    Ok(derive::derive_addition_theorem(spec, cfg)?)
}

fn cmd_derive(path: &str, trace: bool, cfg: &DeriveConfig) -> Outcome {
    let spec = load_spec(path)?;
    if trace {
        let elim = derive::eliminate(&spec)?;
        eprintln!("# trace (debugging aid, not part of the output contract)");
        for step in &elim.trace {
            eprintln!("# eliminate {}: pivot {}", step.var, step.pivot);
            for r in &step.results {
                eprintln!("#   {r}");
            }
        }
        eprintln!("# eliminant {}", elim.eliminant);
    }
    let thm = derive_thm(&spec, cfg)?;
    let record = thm.record()?;
    Ok((vec![thm.g.to_string()], serde_json::to_value(record).expect("record serializes")))
}

fn cmd_verify(path: &str, g: &str, cfg: &DeriveConfig) -> Outcome {
    let spec = load_spec(path)?;
    cfg.eval.validate()?;
    let xyz = Vars::new(&["x", "y", "z"]);
    let g: MPoly = parse_poly(read_input(g).trim(), &xyz).map_err(|e| Failure::new(Status::ParseError, e.to_string()))?;
    let tol = cfg.tol_for(spec.class);
    let samples: Vec<GraphSample> = numeric::sample_graph(&spec, cfg.samples, &cfg.eval)?;
    let (worst_index, max_residual) = numeric::worst_sample(&g, &samples).unwrap_or((0, 0.0));
    let worst = samples.get(worst_index).cloned();
    let result = json!({
        "G": g.to_string(),
        "max_residual": max_residual,
        "samples": samples.len(),
        "tol": tol,
        "worst": worst,
    });
    let summary = format!("max_residual={max_residual:.3e} samples={} tol={tol:e}", samples.len());
    if max_residual < tol {
        return Ok((vec![format!("ok {summary}")], result));
    }
    let mut text = vec![format!("failed {summary}")];
    if let Some(s) = worst {
        text.push(format!(
            "worst sample: u={} v={} x={} y={} z={}",
            complex_text(s.u),
            complex_text(s.v),
            complex_text(s.x),
            complex_text(s.y),
            complex_text(s.z)
        ));
    }
    Err(Failure {
        status: Status::VerificationFailed,
        message: format!("residual {max_residual:.3e} is not below tol {tol:e}"),
        results: Some(result),
        text,
    })
}

fn cmd_degrees(path: &str, with_derive: bool, cfg: &DeriveConfig) -> Outcome {
    let spec = load_spec(path)?;
    let thm = if with_derive { Some(derive_thm(&spec, cfg)?) } else { None };
    let report = laws::degree_report(&spec, thm.as_ref())?;
    let mut line = format!("m={} nu={} lambda0={} predicted={}", report.m, report.nu, report.lambda0, report.predicted);
    if let Some(a) = report.actual {
        line.push_str(&format!(" actual={}", int_list(&a)));
    }
    Ok((vec![line], serde_json::to_value(report).expect("report serializes")))
}

fn cmd_symmetry(path: &str) -> Outcome {
    let spec = load_spec(path)?;
    let sym = laws::full_substitution_group(&spec);
    let list = |xs: &[laws::RootOfUnity]| xs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
    let text = vec![
        format!("multipliers: {}", list(&sym.multipliers)),
        format!("lambda0: {}", sym.lambda0),
        format!("group_alphas: {}", list(&sym.group_alphas)),
        format!("lambda: {}", sym.lambda),
        format!("beta_search: {}", sym.beta_search),
    ];
    Ok((text, serde_json::to_value(sym).expect("report serializes")))
}

fn krel_text(k: &laws::KRelation) -> Vec<String> {
    vec![
        k.k.to_string(),
        format!("degrees={} lambda={} max_residual={:.3e} samples={}", int_list(&k.degrees), k.lambda, k.max_residual, k.samples),
    ]
}

fn cmd_krel(path: &str, cfg: &DeriveConfig) -> Outcome {
    let spec = load_spec(path)?;
    let thm = derive_thm(&spec, cfg)?;
    match laws::k_relation(&thm, &spec, cfg) {
        Ok(k) => Ok((krel_text(&k), serde_json::to_value(&k).expect("relation serializes"))),
        Err(LawError::KDegree { relation, predicted }) => {
            let mut result = serde_json::to_value(&*relation).expect("relation serializes");
            result["predicted"] = json!(predicted);
            Err(Failure {
                status: Status::VerificationFailed,
                message: format!("K degrees {:?} differ from m*nu^2/lambda = {predicted}", relation.degrees),
                results: Some(result),
                text: krel_text(&relation),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_reduce_f(f: &str, x0: &Rational, y0: &Rational) -> Outcome {
    let xyz = Vars::new(&["X", "Y", "Z"]);
    let f = parse_poly(read_input(f).trim(), &xyz).map_err(|e| Failure::new(Status::ParseError, e.to_string()))?;
    let g = derive::reduce_f_to_g(&f, x0, y0)?;
    let result = json!({ "F": f.to_string(), "x0": x0.to_string(), "y0": y0.to_string(), "G": g.to_string() });
    Ok((vec![g.to_string()], result))
}

fn cmd_same(a: &str, b: &str, cfg: &DeriveConfig) -> Outcome {
    let (sa, sb) = (load_spec(a)?, load_spec(b)?);
    let v = laws::same_theorem(&sa, &sb, cfg)?;
    let mut text = vec![if v.same { "same".to_string() } else { "different".to_string() }];
    if let Some(al) = v.alpha {
        text.push(format!("alpha: {}", complex_text(al)));
    }
    if let Some(w) = &v.warning {
        text.push(format!("warning: {w}"));
    }
    for (label, g) in [("G_A", &v.g_a), ("G_B", &v.g_b)] {
        if let Some(g) = g {
            text.push(format!("{label}: {g}"));
        }
    }
    Ok((text, serde_json::to_value(&v).expect("verdict serializes")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, paths, common, outcome) = match &cli.command {
        Command::Derive { spec, trace, common } => ("derive", vec![spec.clone()], common, cmd_derive(spec, *trace, &config(common))),
        Command::Verify { spec, g, common } => ("verify", vec![spec.clone()], common, cmd_verify(spec, g, &config(common))),
        Command::Degrees { spec, derive, common } => {
            ("degrees", vec![spec.clone()], common, cmd_degrees(spec, *derive, &config(common)))
        }
        Command::Symmetry { spec, common } => ("symmetry", vec![spec.clone()], common, cmd_symmetry(spec)),
        Command::Krel { spec, common } => ("krel", vec![spec.clone()], common, cmd_krel(spec, &config(common))),
        Command::ReduceF { f, x0, y0, common } => ("reduce-f", vec![f.clone()], common, cmd_reduce_f(f, x0, y0)),
        Command::Same { spec_a, spec_b, common } => {
            ("same", vec![spec_a.clone(), spec_b.clone()], common, cmd_same(spec_a, spec_b, &config(common)))
        }
    };
    let cfg = config(common);
    let (status, text, results, error) = match outcome {
        Ok((text, value)) => (Status::Ok, text, Some(value), None),
        Err(f) => (f.status, f.text, f.results, Some(f.message)),
    };
    let report = RunReport {
        command: name.to_string(),
        paths,
        seed: common.seed,
        settings: Settings { tol: cfg.eval.tol, elliptic_tol: cfg.elliptic_tol, samples: cfg.samples },
        timing_ms: common.timing.then(|| start.elapsed().as_millis() as u64),
        status,
        results,
        error: error.clone(),
    };
    if common.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for line in text {
            println!("{line}");
        }
    }
    if let Some(e) = error {
        eprintln!("error: {e}");
    }
    ExitCode::from(status.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let report = RunReport {
            command: "derive".into(),
            paths: vec!["a.spec".into()],
            seed: 3,
            settings: Settings { tol: 1e-9, elliptic_tol: 1e-6, samples: 200 },
            timing_ms: Some(12),
            status: Status::VerificationFailed,
            results: Some(json!({ "G": "x*y - z", "degrees": [1, 1, 1] })),
            error: Some("residual too large".into()),
        };
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"verification-failed\""));
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), report);
    }

    #[test]
    fn status_codes_are_distinct() {
        let codes: Vec<u8> =
            [Status::Ok, Status::VerificationFailed, Status::ParseError, Status::Degenerate].iter().map(|s| s.exit_code()).collect();
        assert_eq!(codes, [0, 1, 2, 3]);
    }

    #[test]
    fn degeneracy_maps_to_its_own_status() {
        let f: Failure = DeriveError::DegenerateSpecialization("x".into()).into();
        assert_eq!(f.status, Status::Degenerate);
        let f: Failure = DeriveError::Spec(SpecError::ZeroDiscriminant).into();
        assert_eq!(f.status, Status::ParseError);
        let f: Failure = DeriveError::NoComponent.into();
        assert_eq!(f.status, Status::VerificationFailed);
    }
}
