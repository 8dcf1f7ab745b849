use std::path::Path;
use std::process::{Command, Output};

use cramer::cli::InputDocument;
use cramer::involution::PairingCertificate;
use serde_json::Value;
use tempfile::TempDir;

fn cramer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cramer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_doc(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_text_and_json() {
    let dir = TempDir::new().unwrap();
    let f = write_doc(
        &dir,
        "s.json",
        r#"{"n": 2, "mode": "rational", "A": [["1","1"],["1","-1"]], "b": ["3","1"]}"#,
    );
    let o = cramer(&["solve", "--input", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x1 = 2, x2 = 1");

    let o = cramer(&["solve", "--input", &f, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["x"], serde_json::json!(["2", "1"]));
    assert_eq!(v["X0"], "-2");
}

#[test]
fn solve_one_by_one_and_fractions() {
    let dir = TempDir::new().unwrap();
    let f = write_doc(
        &dir,
        "s.json",
        r#"{"n": 1, "mode": "rational", "A": [["5"]], "b": ["5"]}"#,
    );
    let o = cramer(&["solve", "--input", &f]);
    assert_eq!(stdout(&o).trim(), "x1 = 1");
    let f = write_doc(
        &dir,
        "t.json",
        r#"{"n": 1, "mode": "rational", "A": [["-4/3"]], "b": ["2"]}"#,
    );
    assert_eq!(
        stdout(&cramer(&["solve", "--input", &f])).trim(),
        "x1 = -3/2"
    );
}

#[test]
fn solve_symbolic_generic() {
    let dir = TempDir::new().unwrap();
    let f = write_doc(&dir, "g.json", r#"{"n": 2, "mode": "symbolic"}"#);
    let o = cramer(&["solve", "--input", &f]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("X0 = a[1,1]*a[2,2] - a[1,2]*a[2,1]"),
        "{text}"
    );
    assert!(text.contains("x1 = (-a[1,2]*b[2] + a[2,2]*b[1]) / (a[1,1]*a[2,2] - a[1,2]*a[2,1])"));
    let o = cramer(&["solve", "--input", &f, "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["x"][1]["numerator"], "a[1,1]*b[2] - a[2,1]*b[1]");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let singular = write_doc(
        &dir,
        "sing.json",
        r#"{"n": 2, "mode": "rational", "A": [["1","1"],["1","1"]], "b": ["1","2"]}"#,
    );
    let o = cramer(&["solve", "--input", &singular]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("singular system: X_0 = 0"));

    let broken = write_doc(
        &dir,
        "bad.json",
        r#"{"n": 2, "mode": "rational", "A": [["1"]], "b": []}"#,
    );
    assert_eq!(
        cramer(&["solve", "--input", &broken]).status.code(),
        Some(2)
    );
    let not_json = write_doc(&dir, "nj.json", "hello");
    assert_eq!(
        cramer(&["solve", "--input", &not_json]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("nope.json");
    assert_eq!(
        cramer(&["solve", "--input", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cramer(&["frobnicate"]).status.code(), Some(2));

    let big = write_doc(&dir, "big.json", r#"{"n": 10, "mode": "symbolic"}"#);
    assert_eq!(cramer(&["det", "--input", &big]).status.code(), Some(4));
    assert_eq!(cramer(&["solve", "--input", &big]).status.code(), Some(4));
    assert_eq!(
        cramer(&["verify-identity", "--n", "10"]).status.code(),
        Some(4)
    );
    assert_eq!(
        cramer(&["verify-identity", "--n", "4", "--max-n", "3"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        cramer(&["check-involution", "--n", "0", "--i", "1"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        cramer(&["check-involution", "--n", "3", "--i", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_identity_command() {
    let o = cramer(&["verify-identity", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for i in 1..=3 {
        assert!(text.contains(&format!("i={i}: PASS")), "{text}");
    }
    let o = cramer(&["verify-identity", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("i=1: PASS"));

    let o = cramer(&["verify-identity", "--n", "3", "--i", "2", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"][0]["i"], 2);
    assert_eq!(v["results"][0]["holds"], true);
    assert_eq!(v["results"][0]["lhs"], v["results"][0]["rhs"]);
}

#[test]
fn verify_identity_n5_is_quick() {
    let start = std::time::Instant::now();
    let o = cramer(&["verify-identity", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 5);
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

fn check_involution(n: usize, i: usize, good: usize, pairs: usize) {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let o = cramer(&[
        "check-involution",
        "--n",
        &n.to_string(),
        "--i",
        &i.to_string(),
        "--emit-certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let c: PairingCertificate =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!((c.good.len(), c.bad_pairs.len()), (good, pairs));
    c.validate().unwrap();
}

#[test]
fn check_involution_command() {
    check_involution(2, 1, 2, 1);
    check_involution(1, 1, 1, 0);
    check_involution(4, 3, 24, 36);
}

#[test]
fn check_involution_json_and_write_failure() {
    let o = cramer(&["check-involution", "--n", "3", "--i", "1", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fact1"]["good"], 6);
    assert_eq!(v["fact2"]["pairs"], 6);
    assert_eq!(v["all_pass"], true);

    let dir = TempDir::new().unwrap();
    let target = dir.path().join("missing-dir").join("cert.json");
    let o = cramer(&[
        "check-involution",
        "--n",
        "2",
        "--i",
        "1",
        "--emit-certificate",
        target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn det_command() {
    let dir = TempDir::new().unwrap();
    let diag = write_doc(
        &dir,
        "d.json",
        r#"{"n": 2, "mode": "rational", "A": [["2","0"],["0","3"]], "b": ["0","0"]}"#,
    );
    let o = cramer(&["det", "--input", &diag]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "leibniz: 6\ncofactor: 6\nbareiss: 6\nagree: yes\n"
    );
    let o = cramer(&["det", "--input", &diag, "--method", "bareiss"]);
    assert_eq!(stdout(&o), "bareiss: 6\n");

    let g3 = write_doc(&dir, "g3.json", r#"{"n": 3, "mode": "symbolic"}"#);
    let o = cramer(&["det", "--input", &g3, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["determinant"]["leibniz"], v["determinant"]["cofactor"]);
    let poly: cramer::Polynomial = v["determinant"]["leibniz"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(poly.len(), 6);
    assert_eq!(
        cramer(&["det", "--input", &g3, "--method", "bareiss"])
            .status
            .code(),
        Some(2)
    );

    let g10 = write_doc(&dir, "g10.json", r#"{"n": 10, "mode": "symbolic"}"#);
    assert_eq!(cramer(&["det", "--input", &g10]).status.code(), Some(4));
}

#[test]
fn max_n_override() {
    let dir = TempDir::new().unwrap();
    let doc = r#"{"n": 10, "mode": "rational",
        "A": [["1","0","0","0","0","0","0","0","0","0"],["0","1","0","0","0","0","0","0","0","0"],
              ["0","0","1","0","0","0","0","0","0","0"],["0","0","0","1","0","0","0","0","0","0"],
              ["0","0","0","0","1","0","0","0","0","0"],["0","0","0","0","0","1","0","0","0","0"],
              ["0","0","0","0","0","0","1","0","0","0"],["0","0","0","0","0","0","0","1","0","0"],
              ["0","0","0","0","0","0","0","0","1","0"],["0","0","0","0","0","0","0","0","0","2"]],
        "b": ["1","2","3","4","5","6","7","8","9","1"]}"#;
    let f = write_doc(&dir, "i10.json", doc);
    assert_eq!(cramer(&["det", "--input", &f]).status.code(), Some(4));
    let o = cramer(&["det", "--input", &f, "--method", "bareiss", "--max-n", "10"]);
    assert_eq!(stdout(&o), "bareiss: 2\n");
}

#[test]
fn bench_command() {
    let o = cramer(&["bench", "--n", "4", "--reps", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agree"], true);
    assert!(v["ms"]["leibniz_det"].as_f64().unwrap() >= 0.0);
}

#[test]
fn document_roundtrip_from_disk() {
    let dir = TempDir::new().unwrap();
    let src = r#"{"n": 2, "mode": "rational", "A": [["2/4","-0"],["7","-3/9"]], "b": ["1","+5"]}"#;
    let doc = InputDocument::from_json(src).unwrap();
    let sys = doc.to_system().unwrap();
    let written = InputDocument::from_system(&sys);
    let path = dir.path().join("w.json");
    std::fs::write(&path, written.to_json()).unwrap();
    let again =
        InputDocument::from_json(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(again.to_system().unwrap(), sys);
    assert_eq!(again.a.as_ref().unwrap()[0], vec!["1/2", "0"]);
}
