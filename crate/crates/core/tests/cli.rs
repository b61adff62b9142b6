use std::path::PathBuf;

use flatfix::cli::run;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    root.to_string_lossy().into_owned()
}

fn flatfix(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("flatfix").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const EX1: &str = "(p & [a]x) | (~p & <a>(x & <a>x))";

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = flatfix(&["--help"]);
    assert_eq!(code, 0);
    for cmd in [
        "normalize",
        "represent",
        "simulate",
        "axiomatize",
        "classify",
        "eval",
        "check",
    ] {
        assert!(out.contains(cmd), "{cmd} missing from help");
    }
    assert_eq!(flatfix(&["--version"]).0, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(flatfix(&["frobnicate"]).0, 2);
    let (code, _, err) = flatfix(&["classify", "<a>(x &"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "), "{err}");
    let (code, _, err) = flatfix(&["represent"]);
    assert_eq!(code, 2);
    assert!(err.contains("--body"));
    let (code, _, err) = flatfix(&[
        "eval",
        "--model",
        "/nonexistent.json",
        "--formula",
        "/nonexistent",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn classify_prints_one_line_verdict() {
    let (code, out, _) = flatfix(&["classify", "<a>(x & <b>x)"]);
    assert_eq!(code, 0);
    assert_eq!(out, "harmless: no, untied(∇-form): no\n");
    let (_, out, _) = flatfix(&["classify", "<a>x & <a><a>x & [b]<a>x"]);
    assert!(out.starts_with("harmless: yes"));
    assert!(out.contains("untied form: "));
    let (_, out, _) = flatfix(&["--json", "classify", "<a>x"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["harmless"], true);
}

#[test]
fn normalize_pure_form() {
    let (code, out, _) = flatfix(&["normalize", "--form", "pure-nbx", EX1]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "(p & nab a {}) | (p & nab a {x}) | (~p & nab a {T, x & nab a {T, x}})\n"
    );
    let (_, out, _) = flatfix(&["normalize", "<a>p"]);
    assert_eq!(out, "nab a {T, p}\n");
}

#[test]
fn represent_and_simulate() {
    let (_, out, _) = flatfix(&["represent", "--body", EX1]);
    assert!(
        out.contains("*z_g = (p & nab a {}) | (p & nab a {z_g}) | (~p & nab a {T, z_4 & z_g})\n")
    );
    assert!(out.contains("z_4 = nab a {T, z_g}\n"));
    let (_, out, _) = flatfix(&["simulate", "--body", EX1]);
    assert!(out.contains("y_g4 = (p & nab a {y_g}) | (~p & nab a {T, y_g, y_g4})\n"));
}

#[test]
fn simulate_reads_a_system_file() {
    let dir = std::env::temp_dir().join(format!("flatfix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.sys");
    std::fs::write(&path, "*z_g = (p & nab a {}) | (p & nab a {z_g}) | (~p & nab a {T, z_4 & z_g})\nz_4 = nab a {T, z_g}\n").unwrap();
    let (code, out, err) = flatfix(&["simulate", "--system", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("*y_g = "));
    assert!(out.contains("y_g4 = "));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn axiomatize_names_and_formats() {
    let sigs = data("ex1.sigs");
    let (code, out, _) = flatfix(&["--sigs", &sigs, "axiomatize"]);
    assert_eq!(code, 0);
    assert!(out.contains("[kffplus] g"));
    for name in [
        "sharp-prefix:",
        "A_g:",
        "A_4:",
        "A_g4:",
        "sharp-least:",
        "R_g:",
        "R_4:",
        "R_g4:",
    ] {
        assert!(out.contains(name), "{name} missing");
    }
    let (_, kff, _) = flatfix(&["--sigs", &sigs, "axiomatize", "--system", "kff"]);
    assert!(kff.contains("[kff] g") && !kff.contains("A_g:"));
    let (_, lean, _) = flatfix(&["--sigs", &sigs, "axiomatize", "--lean"]);
    assert!(!lean.contains("sharp-prefix"));
    let (_, json, _) = flatfix(&["--sigs", &sigs, "--json", "axiomatize"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["entries"].is_array());
}

#[test]
fn eval_on_the_chain() {
    let sigs = data("corpus.sigs");
    let args = [
        "--sigs",
        &sigs,
        "eval",
        "--model",
        &data("chain3.json"),
        "--formula",
        &data("sharp-delta.txt"),
    ];
    let (code, out, err) = flatfix(&args);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "{0,1,2}\n");
}

#[test]
fn output_is_deterministic() {
    let sigs = data("corpus.sigs");
    let first = flatfix(&["--sigs", &sigs, "axiomatize"]).1;
    let second = flatfix(&["--sigs", &sigs, "axiomatize"]).1;
    assert_eq!(first, second);
    let check = [
        "--sigs",
        &data("ex1.sigs"),
        "check",
        "--models",
        "10",
        "--random-formulas",
        "5",
        "--seed",
        "3",
    ];
    let (code, a, _) = flatfix(&check);
    assert_eq!(code, 0);
    assert_eq!(a, flatfix(&check).1);
    assert!(a.ends_with("result: PASS\n"));
}

#[test]
fn recommendations_and_json_round_trip() {
    let sigs_path = data("corpus.sigs");
    let (_, out, _) = flatfix(&["--sigs", &sigs_path, "axiomatize"]);
    assert!(out.starts_with("# delta: body is harmless, kff is already complete\n"));
    assert!(out.contains("# ex1: body is neither harmless nor untied, use kffplus\n"));
    let sigs =
        flatfix::syntax::Signatures::load(&std::fs::read_to_string(&sigs_path).unwrap()).unwrap();
    let (_, json, _) = flatfix(&["--sigs", &sigs_path, "--json", "axiomatize"]);
    let sets = flatfix::axioms::load_axioms(&json, &sigs).unwrap();
    assert_eq!(sets.len(), sigs.len());
}

#[test]
fn simulate_accepts_represent_json() {
    let dir = std::env::temp_dir().join(format!("flatfix-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    let (_, json, _) = flatfix(&["--sigs", &data("ex1.sigs"), "--json", "represent"]);
    std::fs::write(&path, json).unwrap();
    let (code, out, err) = flatfix(&["simulate", "--system", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (_, direct, _) = flatfix(&["--sigs", &data("ex1.sigs"), "simulate"]);
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&out), body(&direct));
    std::fs::remove_dir_all(&dir).unwrap();
}
