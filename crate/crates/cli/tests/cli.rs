use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use liftcert::LiftingCertificate;
use tempfile::TempDir;

const EXAMPLE: &str = "x^2*y^2+3*x*y+6*x+3*y+1";

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Fixture { dir: tempfile::tempdir().unwrap() };
        f.write(
            "gauss2.json",
            r#"{"prime":3,"pairs":[{"kind":"rational_center","center":"0","delta":"0"},{"kind":"rational_center","center":"0","delta":"0"}]}"#,
        );
        f.write("eis2.json", r#"{"prime":2,"pairs":[{"kind":"rational_center","center":"0","delta":"1/2"}]}"#);
        f.write("inert.json", r#"{"prime":3,"pairs":[{"kind":"inert","phi":[1,0,1],"delta":"1/3"}]}"#);
        f.write("reducible.json", r#"{"prime":2,"pairs":[{"kind":"inert","phi":[1,0,1],"delta":"1"}]}"#);
        f
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, content).unwrap();
        path
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_liftcert")).args(args).current_dir(self.dir.path()).output().unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn certify_example_exits_zero() {
    let fx = Fixture::new();
    let out = fx.run(&["certify", "--prime", "3", "--vars", "x,y", "--pairs", "gauss2.json", EXAMPLE]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("verdict: Certified"));
    assert!(stdout(&out).contains("T: Z1^2*Z2^2 + 1"));
}

#[test]
fn certify_excluded_residues_exit_three() {
    let fx = Fixture::new();
    let out = fx.run(&["certify", "--prime", "3", "--vars", "x,y", "--pairs", "gauss2.json", "x^2*y^2-1"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("ResidueReducible"));
    let out = fx.run(&["certify", "--prime", "2", "--vars", "x", "--pairs", "eis2.json", "x^2+2*x+4"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("ResidueIsVariable"));
    let shared = fx.write(
        "shared.json",
        r#"{"prime":2,"pairs":[{"kind":"rational_center","center":"0","delta":"1/2"},{"kind":"rational_center","center":"0","delta":"1/2"}]}"#,
    );
    let out = fx.run(&["certify", "--vars", "x,y", "--pairs", shared.to_str().unwrap(), "x^2*y^2-4"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("RamificationNotCoprime"));
}

#[test]
fn certify_not_a_lifting_exits_two() {
    let fx = Fixture::new();
    let out = fx.run(&["certify", "--vars", "x", "--pairs", "eis2.json", "2*x"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("NotALifting"));
    let out = fx.run(&["certify", "--prime", "3", "--vars", "x,y", "x^2*y^2+1/3"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("(ii) w(f)"));
}

#[test]
fn certify_input_errors_exit_four() {
    let fx = Fixture::new();
    for args in [
        vec!["certify", "--prime", "3", "--vars", "x", "x^-1"],
        vec!["certify", "--prime", "3", "--vars", "x", "x + z"],
        vec!["certify", "--prime", "4", "--vars", "x", "x"],
        vec!["certify", "--vars", "x", "x"],
        vec!["certify", "--prime", "3", "x"],
        vec!["certify", "--prime", "5", "--vars", "x", "--pairs", "eis2.json", "x"],
        vec!["certify", "--vars", "x,y", "--pairs", "eis2.json", "x*y"],
        vec!["certify", "--vars", "x", "--pairs", "missing.json", "x"],
        vec!["certify", "--vars", "x", "--pairs", "reducible.json", "x"],
        vec!["certify", "--vars", "x,x", "--prime", "3", "x"],
        vec!["certify", "--bogus"],
    ] {
        let out = fx.run(&args);
        assert_eq!(code(&out), 4, "{args:?}: {}", stderr(&out));
        assert!(stdout(&out).is_empty(), "{args:?}");
        assert!(!stderr(&out).is_empty(), "{args:?}");
    }
    let out = fx.run(&["certify", "--prime", "3", "--vars", "x", "x^-1"]);
    assert!(stderr(&out).contains("^-"));
}

#[test]
fn certify_guard_exits_five() {
    let fx = Fixture::new();
    let out = fx.run(&["certify", "--prime", "3", "--vars", "x,y", "--limit", "1", EXAMPLE]);
    assert_eq!(code(&out), 5, "{}", stdout(&out));
    assert!(stderr(&out).contains("limit"));
}

#[test]
fn certificate_json_round_trips_byte_identically() {
    let fx = Fixture::new();
    for (pairs, vars, poly) in [
        ("gauss2.json", "x,y", EXAMPLE),
        ("gauss2.json", "x,y", "x^2*y^2-1"),
        ("eis2.json", "x", "2*x"),
        ("inert.json", "x", "x^6 + 3*x^4 + 3*x^2 + 4"),
    ] {
        let out = fx.run(&["certify", "--json", "--oracle", "--vars", vars, "--pairs", pairs, poly]);
        let text = stdout(&out);
        let json = text.strip_suffix('\n').unwrap();
        let cert = LiftingCertificate::from_json(json).unwrap();
        assert_eq!(cert.to_json(), json);
        assert!(cert.oracle.is_some());
    }
}

#[test]
fn certify_each_keeps_input_order() {
    let fx = Fixture::new();
    let list = fx.write("list.txt", &format!("# corpus\n{EXAMPLE}\n\nx^2*y^2-1\nx^2*y^2+1\n"));
    let out = fx.run(&["certify", "--json", "--prime", "3", "--vars", "x,y", "--each", list.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let verdicts: Vec<String> = stdout(&out)
        .lines()
        .map(|l| LiftingCertificate::from_json(l).unwrap().verdict.name().to_string())
        .collect();
    assert_eq!(verdicts, ["Certified", "ResidueReducible", "Certified"]);
    let list = fx.write("bad.txt", &format!("{EXAMPLE}\nx^^2\n"));
    let out = fx.run(&["certify", "--prime", "3", "--vars", "x,y", "--each", list.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("Certified"));
}

#[test]
fn expand_and_value() {
    let fx = Fixture::new();
    let out = fx.run(&["expand", "--prime", "3", "--vars", "x,y", EXAMPLE]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[2, 2]: a = 1, v(a) = 0, value = 0"));
    let out = fx.run(&["expand", "--prime", "3", "--vars", "x", "x^"]);
    assert_eq!(code(&out), 4);

    let out = fx.run(&["value", "--vars", "x", "--pairs", "eis2.json", "x^2+2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "w: 1\nw_x: 1\ncontributing: [[0], [2]]\n");
    let out = fx.run(&["value", "--vars", "x", "--json", "--pairs", "eis2.json", "x^2+2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["w"], "1");
    let out = fx.run(&["value", "--vars", "x", "--pairs", "eis2.json", "(x"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn residue_codes() {
    let fx = Fixture::new();
    let out = fx.run(&["residue", "--vars", "x", "--pairs", "eis2.json", "x^2+2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "t: [1]\nT: Z1 + 1\n");
    let out = fx.run(&["residue", "--vars", "x", "--pairs", "eis2.json", "--t", "1", "2*x"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("3/2"));
    let out = fx.run(&["residue", "--vars", "x", "--pairs", "eis2.json", "2*x"]);
    assert_eq!(code(&out), 2);
    let out = fx.run(&["residue", "--vars", "x", "--pairs", "eis2.json", "--t", "1,1", "x^2+2"]);
    assert_eq!(code(&out), 2);
    let out = fx.run(&["residue", "--vars", "x", "--prime", "6", "x"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn generate_codes_and_round_trip() {
    let fx = Fixture::new();
    let t = fx.write("t.json", r#"{"p":3,"coeffs":[{"exp":[2,2],"c":"1"},{"exp":[0,0],"c":"1"}]}"#);
    let out = fx.run(&["generate", "--vars", "x,y", "--pairs", "gauss2.json", t.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "x^2*y^2 + 1\n");
    let f = stdout(&out).trim().to_string();
    let out = fx.run(&["certify", "--vars", "x,y", "--pairs", "gauss2.json", &f]);
    assert_eq!(code(&out), 0);

    let t = fx.write("t9.json", r#"{"p":3,"coeffs":[{"exp":[2],"c":"1"},{"exp":[1],"c":"y1"},{"exp":[0],"c":"y1 + 1"}]}"#);
    for seed in ["0", "1", "2"] {
        let out = fx.run(&["generate", "--seed", seed, "--vars", "x", "--pairs", "inert.json", t.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let f = stdout(&out).trim().to_string();
        let out = fx.run(&["residue", "--vars", "x", "--pairs", "inert.json", &f]);
        assert_eq!(stdout(&out), "t: [2]\nT: Z1^2 + y1*Z1 + (y1 + 1)\n");
    }

    let z = fx.write("z.json", r#"{"p":2,"coeffs":[{"exp":[1],"c":"1"}]}"#);
    let out = fx.run(&["generate", "--pairs", "eis2.json", z.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let not_monic = fx.write("nm.json", r#"{"p":2,"coeffs":[{"exp":[0],"c":"1"}]}"#);
    let out = fx.run(&["generate", "--pairs", "eis2.json", not_monic.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let out = fx.run(&["generate", "--pairs", "eis2.json", "nowhere.json"]);
    assert_eq!(code(&out), 4);
    let wrong_p = fx.write("wp.json", r#"{"p":3,"coeffs":[{"exp":[1],"c":"1"},{"exp":[0],"c":"1"}]}"#);
    let out = fx.run(&["generate", "--pairs", "eis2.json", wrong_p.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
}

#[test]
fn factor_oracle_codes() {
    let fx = Fixture::new();
    let out = fx.run(&["factor-oracle", "--vars", "x,y", "x^2*y^2-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 * (x*y + 1) * (x*y - 1)\n");
    let out = fx.run(&["factor-oracle", "--vars", "x,y", "--json", EXAMPLE]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["irreducible"], true);
    let out = fx.run(&["factor-oracle", "--vars", "x", "x^9+1"]);
    assert_eq!(code(&out), 5);
    let out = fx.run(&["factor-oracle", "--vars", "x,y,z", "x*y*z+1"]);
    assert_eq!(code(&out), 5);
    let out = fx.run(&["factor-oracle", "--vars", "x,y", "--limit", "2", EXAMPLE]);
    assert_eq!(code(&out), 5);
    let out = fx.run(&["factor-oracle", "--vars", "x", "x+"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn suggest_prints_pair_files() {
    let fx = Fixture::new();
    let out = fx.run(&["suggest", "--prime", "2", "--vars", "x", "x^2+2"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines[0], r#"{"prime":2,"pairs":[{"kind":"rational_center","center":"0","delta":"0"}]}"#);
    assert!(lines.contains(&r#"{"prime":2,"pairs":[{"kind":"rational_center","center":"0","delta":"1/2"}]}"#.to_string()));
    let candidate = fx.write("cand.json", &lines[1]);
    let out = fx.run(&["certify", "--vars", "x", "--pairs", candidate.to_str().unwrap(), "x^2+2"]);
    assert_eq!(code(&out), 0);
    let out = fx.run(&["suggest", "--vars", "x", "x"]);
    assert_eq!(code(&out), 4);
}
