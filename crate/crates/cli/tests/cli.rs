use addtheo::algebra::{canonicalize, parse_poly, Vars};
use serde_json::Value;
use std::process::Command;

const SPECS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/specs/");
const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/");
const SCHEMA: &str = include_str!("../schema/report.schema.json");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn addtheo(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_addtheo")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn spec(name: &str) -> String {
    format!("{SPECS}{name}.spec")
}

fn same_poly(a: &str, b: &str, vars: &[&str]) -> bool {
    let v = Vars::new(vars);
    canonicalize(&parse_poly(a, &v).unwrap()) == canonicalize(&parse_poly(b, &v).unwrap())
}

/// Runs with --json, checks the schema and the status/exit-code pairing.
fn report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let run = addtheo(&full);
    let value: Value = serde_json::from_str(&run.stdout).expect("json on stdout");
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}\n{value:#}");
    let want = match value["status"].as_str().unwrap() {
        "ok" => 0,
        "verification-failed" => 1,
        "parse-error" => 2,
        "degenerate" => 3,
        other => panic!("status {other}"),
    };
    assert_eq!(run.code, want, "{args:?}");
    (run.code, value)
}

#[test]
fn derive_prints_one_canonical_line() {
    let r = addtheo(&["derive", &spec("exp-t")]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "x*y - z\n"));
    let r = addtheo(&["derive", &spec("cosh")]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "2*x*y*z - z^2 - y^2 - x^2 + 1\n"));
}

#[test]
fn zero_discriminant_is_a_parse_error() {
    let r = addtheo(&["derive", &format!("{FIXTURES}broken.spec")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("zero discriminant"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn bad_inputs_exit_with_code_two() {
    assert_eq!(addtheo(&["derive", "bundled:no-such-spec"]).code, 2);
    assert_eq!(addtheo(&["derive", &format!("{FIXTURES}missing.spec")]).code, 2);
    assert_eq!(addtheo(&["derive", &spec("exp-t"), "--tol", "0"]).code, 2);
    assert_eq!(addtheo(&["verify", &spec("exp-t"), "--g", "x*y - w"]).code, 2);
}

#[test]
fn verify_accepts_the_law_and_rejects_a_wrong_one() {
    let (_, v) = report(&["verify", &spec("exp-t"), "--g", "x*y - z"]);
    assert!(v["results"]["max_residual"].as_f64().unwrap() < 1e-12);
    let r = addtheo(&["verify", &spec("exp-t"), "--g", "x + y - z"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("worst sample: u="), "{}", r.stdout);
}

#[test]
fn verify_reads_a_derived_theorem_from_a_file() {
    let g = addtheo(&["derive", &spec("wp-generic")]).stdout;
    let path = std::env::temp_dir().join(format!("addtheo-wp-{}.txt", std::process::id()));
    std::fs::write(&path, &g).unwrap();
    let (code, v) = report(&["verify", &spec("wp-generic"), "--g", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(v["results"]["tol"].as_f64(), Some(1e-6));
    assert_eq!(v["settings"]["elliptic_tol"].as_f64(), Some(1e-6));
}

#[test]
fn degrees_table() {
    for (name, derive, want) in [
        ("exp-t", false, "m=1 nu=1 lambda0=1 predicted=1\n"),
        ("wp-lemniscatic", false, "m=1 nu=2 lambda0=2 predicted=2\n"),
        ("wp-squared", true, "m=1 nu=4 lambda0=4 predicted=4 actual=4,4,4\n"),
    ] {
        let mut args = vec!["degrees".to_string(), spec(name)];
        if derive {
            args.push("--derive".into());
        }
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(addtheo(&args).stdout, want, "{name}");
    }
}

#[test]
fn symmetry_reports_lambda0() {
    for (name, l0) in [("wp-lemniscatic", 2), ("wp-prime", 1), ("exp-t", 1)] {
        let (_, v) = report(&["symmetry", &spec(name)]);
        assert_eq!(v["results"]["lambda0"], l0, "{name}");
    }
    let out = addtheo(&["symmetry", &spec("wp-lemniscatic")]).stdout;
    assert!(out.starts_with("multipliers: 1, -1\nlambda0: 2\n"), "{out}");
}

#[test]
fn krel_for_linear_laws() {
    let xs = ["x1", "x2", "x3", "x4"];
    for (name, want) in [("exp-t", "x1*x2 - x3*x4"), ("rational-u", "x1 + x2 - x3 - x4")] {
        let r = addtheo(&["krel", &spec(name)]);
        assert_eq!(r.code, 0);
        let first = r.stdout.lines().next().unwrap();
        assert!(same_poly(first, want, &xs), "{name}: {first}");
    }
}

#[test]
fn reduce_f_examples() {
    let r = addtheo(&["reduce-f", "Z - X*Y", "--x0", "1", "--y0", "1"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "z1*z2 - z3\n"));
    let r = addtheo(&["reduce-f", "Z - X*Y", "--x0", "0", "--y0", "1"]);
    assert_eq!(r.code, 3);
    let z = ["z1", "z2", "z3"];
    let r = addtheo(&["reduce-f", "Z - X - Y"]);
    assert!(same_poly(r.stdout.trim(), "z1 + z2 - z3", &z), "{}", r.stdout);
    // base values shift the law: chi(a + v) + chi(u + b) = chi(u + v) + x0 + y0
    let r = addtheo(&["reduce-f", "Z - X - Y", "--x0", "1/2", "--y0", "3"]);
    assert!(same_poly(r.stdout.trim(), "2*z1 + 2*z2 - 2*z3 - 7", &z), "{}", r.stdout);
    let (code, v) = report(&["reduce-f", "Z - X*Y", "--x0", "0", "--y0", "1"]);
    assert_eq!((code, v["status"].as_str()), (3, Some("degenerate")));
}

#[test]
fn same_compares_theorems() {
    let (_, v) = report(&["same", &spec("exp-t"), &spec("exp-t2")]);
    assert_eq!(v["results"]["same"], true);
    assert!((v["results"]["alpha"][0].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let r = addtheo(&["same", &spec("exp-t"), &spec("exp-t-plus-1")]);
    assert!(r.stdout.starts_with("different\n"));
    let r = addtheo(&["same", &spec("cosh"), &spec("cosh")]);
    assert!(r.stdout.starts_with("same\nalpha: 1.000000000000e0+0.000000000000e0i\n"), "{}", r.stdout);
}

#[test]
fn every_command_emits_schema_valid_json() {
    let wp = spec("wp-lemniscatic");
    let t = spec("exp-t");
    let cases: Vec<Vec<&str>> = vec![
        vec!["derive", &t],
        vec!["derive", &wp, "--seed", "4", "--samples", "120"],
        vec!["verify", &t, "--g", "x + y - z"],
        vec!["degrees", &wp, "--derive"],
        vec!["symmetry", &wp],
        vec!["krel", &t],
        vec!["krel", &wp],
        vec!["reduce-f", "Z - X - Y", "--x0", "1", "--y0", "2"],
        vec!["same", &t, &wp],
        vec!["derive", concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/broken.spec")],
    ];
    for args in cases {
        let (_, v) = report(&args);
        assert_eq!(v["command"], args[0]);
    }
    let (_, v) = report(&["derive", &wp, "--seed", "4", "--samples", "120", "--tol", "1e-7"]);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["settings"]["samples"], 120);
    assert_eq!(v["settings"]["elliptic_tol"].as_f64(), Some(1e-7));
    assert!(v["timing_ms"].is_null());
    let (_, v) = report(&["derive", &t, "--timing"]);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [vec!["derive", "bundled:wp-generic", "--json"], vec!["krel", "bundled:rational-u"], vec!["verify", "bundled:cos", "--g", "x*y - z"]] {
        let a = addtheo(&args);
        let b = addtheo(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn trace_goes_to_stderr_only() {
    let plain = addtheo(&["derive", &spec("cosh")]);
    let traced = addtheo(&["derive", &spec("cosh"), "--trace"]);
    assert_eq!(plain.stdout, traced.stdout);
    assert!(traced.stderr.contains("not part of the output contract"));
    assert!(traced.stderr.contains("# eliminate"));
}
