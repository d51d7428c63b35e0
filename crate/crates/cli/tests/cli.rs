use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nilorb::{classify, AffineElement, GaussianRational, GroupElement, Laurent, MatK, Partition, Settings, ZeroTest};
use serde_json::{json, Value};
use tempfile::TempDir;

fn nilorb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilorb")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

struct Docs(TempDir);

impl Docs {
    fn new() -> Self {
        Docs(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, value: &Value) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, serde_json::to_string_pretty(value).unwrap()).unwrap();
        p
    }

    fn raw(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix_of(v: &Value) -> MatK {
    let rows = v.as_array().unwrap();
    MatK::from_rows(
        rows.iter()
            .map(|r| r.as_array().unwrap().iter().map(|e| Laurent::parse(e.as_str().unwrap()).unwrap()).collect())
            .collect(),
    )
    .unwrap()
}

fn scalar_of(v: &Value) -> GaussianRational {
    Laurent::parse(v.as_str().unwrap()).unwrap().as_exact_constant().unwrap()
}

fn element_of(v: &Value) -> AffineElement {
    AffineElement::new(matrix_of(&v["matrix"]), scalar_of(&v["c"]), scalar_of(&v["d"])).unwrap()
}

fn lit(s: &str) -> Laurent {
    Laurent::parse(s).unwrap()
}

fn d42() -> Value {
    json!({"n": 4, "matrix": [
        ["0", "1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "t^2"],
        ["0", "0", "0", "0"]
    ], "c": "0", "d": "0"})
}

#[test]
fn classify_canonical_four_two() {
    let docs = Docs::new();
    let f = docs.write("d42.json", &d42());
    let out = nilorb(&["classify", s(&f)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "partition=[4] k=2 level=0");
}

#[test]
fn classify_json_output() {
    let docs = Docs::new();
    let f = docs.write("d42.json", &d42());
    let out = nilorb(&["--json", "classify", s(&f)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, json!({"partition": [4], "k": 2, "level": "0"}));
}

#[test]
fn classify_zero_matrix_with_level() {
    let docs = Docs::new();
    let zero = vec![vec!["0"; 4]; 4];
    let f = docs.write("z.json", &json!({"n": 4, "matrix": zero, "c": "5", "d": "0"}));
    let out = nilorb(&["classify", s(&f)]);
    assert_eq!(stdout(&out).trim(), "partition=[1,1,1,1] k=0 level=5");
}

#[test]
fn classify_rejects_derivation_component() {
    let docs = Docs::new();
    let f = docs.write("d.json", &json!({"n": 2, "matrix": [["0", "1"], ["0", "0"]], "c": "0", "d": "1"}));
    let out = nilorb(&["classify", s(&f)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("element has nonzero derivation component"));
}

#[test]
fn classify_rejects_non_nilpotent() {
    let docs = Docs::new();
    let f = docs.write("x.json", &json!({"n": 2, "matrix": [["0", "1"], ["t", "0"]]}));
    assert_eq!(code(&nilorb(&["classify", s(&f)])), 3);
}

#[test]
fn truncated_input_exhausts_precision() {
    let docs = Docs::new();
    let f = docs.write("o.json", &json!({"n": 2, "matrix": [["0", "O(t^3)"], ["0", "0"]]}));
    let out = nilorb(&["classify", s(&f)]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("--prec"));
}

#[test]
fn malformed_inputs_exit_two() {
    let docs = Docs::new();
    let cases = [
        docs.raw("a.json", "{ not json"),
        docs.write("b.json", &json!({"n": 2, "matrix": [["0", "t^"], ["0", "0"]]})),
        docs.write("c.json", &json!({"n": 2, "matrix": [["1", "0"], ["0", "0"]]})),
        docs.write("d.json", &json!({"n": 3, "matrix": [["0", "1"], ["0", "0"]]})),
        docs.write("e.json", &json!({"n": 2, "matrix": [["0", "1"], ["0", "0"]], "c": "t"})),
        docs.write("f.json", &json!({"n": 2, "matrix": [["0", "1"], ["0", "0"]], "extra": 1})),
    ];
    for f in &cases {
        let out = nilorb(&["classify", s(f)]);
        assert_eq!(code(&out), 2, "{}: {}", f.display(), stderr(&out));
    }
    assert_eq!(code(&nilorb(&["classify", "/nonexistent/x.json"])), 2);
    assert_eq!(code(&nilorb(&["--prec", "0", "enumerate", "-n", "2"])), 2);
    assert_eq!(code(&nilorb(&["--form", "weird", "enumerate", "-n", "2"])), 2);
    assert_eq!(code(&nilorb(&["enumerate", "-n", "2", "--level", "t"])), 2);
}

fn table_rows(out: &Output) -> Vec<String> {
    stdout(out).lines().skip(1).map(str::to_owned).collect()
}

#[test]
fn enumerate_four_matches_table() {
    let out = nilorb(&["enumerate", "-n", "4", "--level", "0"]);
    assert_eq!(code(&out), 0);
    let labels: Vec<String> =
        table_rows(&out).iter().map(|r| r.split('\t').take(2).collect::<Vec<_>>().join(" ")).collect();
    assert_eq!(
        labels,
        ["[1,1,1,1] 0", "[2,1,1] 0", "[2,2] 0", "[2,2] 1", "[3,1] 0", "[4] 0", "[4] 1", "[4] 2", "[4] 3"]
    );
}

#[test]
fn enumerate_small_counts() {
    assert_eq!(table_rows(&nilorb(&["enumerate", "-n", "1", "--level", "0"])).len(), 1);
    assert_eq!(table_rows(&nilorb(&["enumerate", "-n", "2", "--level", "0"])).len(), 3);
    for n in 1..=6usize {
        let expected: usize = Partition::all(n).iter().map(Partition::smallest).sum();
        assert_eq!(table_rows(&nilorb(&["enumerate", "-n", &n.to_string()])).len(), expected);
    }
    assert_eq!(code(&nilorb(&["enumerate", "-n", "0"])), 2);
}

#[test]
fn enumerate_is_byte_identical() {
    for format in ["table", "json"] {
        let a = nilorb(&["enumerate", "-n", "5", "--level", "(3/2+i)", "--format", format]);
        let b = nilorb(&["enumerate", "-n", "5", "--level", "(3/2+i)", "--format", format]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn enumerate_json_rows_classify_to_themselves() {
    let out = nilorb(&["enumerate", "-n", "4", "--level", "-3/2", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 9);
    let level = GaussianRational::from_ratio(-3, 2);
    for row in rows {
        assert_eq!(row["level"], "-3/2");
        let a = AffineElement::from_matrix(matrix_of(&row["matrix"])).unwrap().with_c(level.clone());
        let label = classify(&a, &Settings::default()).unwrap();
        let parts: Vec<usize> = serde_json::from_value(row["partition"].clone()).unwrap();
        assert_eq!(label.partition.parts(), parts.as_slice());
        assert_eq!(label.k as u64, row["k"].as_u64().unwrap());
        assert_eq!(label.level, level);
    }
}

#[test]
fn act_with_identity_echoes_input() {
    let docs = Docs::new();
    let input = json!({"n": 2, "matrix": [["3*t^-1", "1 + (0+i)*t"], ["t^2", "-3*t^-1"]], "c": "7/3", "d": "0"});
    let e = docs.write("e.json", &input);
    let g = docs.write("g.json", &json!({"matrix": [["1", "0"], ["0", "1"]]}));
    let out = nilorb(&["act", s(&g), s(&e)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(element_of(&v).compare(&element_of(&input)).unwrap(), ZeroTest::Zero);
}

#[test]
fn act_output_round_trips_and_matches_library() {
    let docs = Docs::new();
    let input = json!({"n": 2, "matrix": [["0", "t"], ["0", "0"]], "c": "1", "d": "-2"});
    let e = docs.write("e.json", &input);
    let g = docs.write("g.json", &json!({"z": "2", "matrix": [["1", "0"], ["t^-1", "1"]]}));
    let out = nilorb(&["act", s(&g), s(&e)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();

    let h = GroupElement::new(
        GaussianRational::from(2),
        MatK::from_rows(vec![vec![lit("1"), lit("0")], vec![lit("t^-1"), lit("1")]]).unwrap(),
        64,
    )
    .unwrap();
    let expected = nilorb::adjoint_act(&h, &element_of(&input), &Settings::default()).unwrap();
    assert_eq!(element_of(&v).compare(&expected).unwrap(), ZeroTest::Zero);

    let again = docs.write("again.json", &v);
    let echoed = nilorb(&["act", s(&docs.write("id.json", &json!({"matrix": [["1", "0"], ["0", "1"]]}))), s(&again)]);
    let w: Value = serde_json::from_slice(&echoed.stdout).unwrap();
    assert_eq!(v, w);
}

#[test]
fn act_rejects_bad_group_elements() {
    let docs = Docs::new();
    let e = docs.write("e.json", &json!({"n": 2, "matrix": [["0", "1"], ["0", "0"]]}));
    let det_t = docs.write("g1.json", &json!({"matrix": [["t", "0"], ["0", "1"]]}));
    let zero_z = docs.write("g2.json", &json!({"z": "0", "matrix": [["1", "0"], ["0", "1"]]}));
    assert_eq!(code(&nilorb(&["act", s(&det_t), s(&e)])), 2);
    assert_eq!(code(&nilorb(&["act", s(&zero_z), s(&e)])), 2);
}

#[test]
fn bracket_with_central_element_vanishes() {
    let docs = Docs::new();
    let c = docs.write("c.json", &json!({"n": 2, "matrix": [["0", "0"], ["0", "0"]], "c": "1", "d": "0"}));
    let x = docs.write("x.json", &json!({"n": 2, "matrix": [["t", "t^-2"], ["5", "-t"]], "c": "3", "d": "1"}));
    let out = nilorb(&["bracket", s(&c), s(&x)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, json!({"n": 2, "matrix": [["0", "0"], ["0", "0"]], "c": "0", "d": "0"}));
}

#[test]
fn bracket_cocycle_respects_form_flag() {
    let docs = Docs::new();
    let a = docs.write("a.json", &json!({"n": 2, "matrix": [["0", "t"], ["0", "0"]]}));
    let b = docs.write("b.json", &json!({"n": 2, "matrix": [["0", "0"], ["t^-1", "0"]]}));
    let killing: Value = serde_json::from_slice(&nilorb(&["bracket", s(&a), s(&b)]).stdout).unwrap();
    let trace: Value = serde_json::from_slice(&nilorb(&["--form", "trace", "bracket", s(&a), s(&b)]).stdout).unwrap();
    assert_eq!(killing["matrix"], json!([["1", "0"], ["0", "-1"]]));
    assert_eq!(killing["c"], "4");
    assert_eq!(trace["c"], "1");
}

#[test]
fn conjugator_between_quasi_jordan_blocks() {
    let docs = Docs::new();
    let from = docs.write("f.json", &json!({"n": 2, "matrix": [["0", "t"], ["0", "0"]]}));
    let to = docs.write("t.json", &json!({"n": 2, "matrix": [["0", "t^3"], ["0", "0"]]}));
    let out = nilorb(&["conjugator", s(&from), s(&to)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["z"], "1");
    let g = matrix_of(&v["matrix"]);
    assert_eq!(g.compare(&MatK::diag(vec![lit("t"), lit("t^-1")])).unwrap(), ZeroTest::Zero);
    let x = MatK::from_rows(vec![vec![lit("0"), lit("t")], vec![lit("0"), lit("0")]]).unwrap();
    let y = MatK::from_rows(vec![vec![lit("0"), lit("t^3")], vec![lit("0"), lit("0")]]).unwrap();
    assert_eq!(g.mul(&x).unwrap().compare(&y.mul(&g).unwrap()).unwrap(), ZeroTest::Zero);
}

#[test]
fn conjugator_for_general_nilpotents() {
    let docs = Docs::new();
    let from = docs.write("f.json", &d42());
    let shear =
        json!({"matrix": [["1", "0", "0", "0"], ["t^-1", "1", "0", "0"], ["0", "2", "1", "0"], ["0", "0", "t", "1"]]});
    let g = docs.write("g.json", &shear);
    let moved: Value = serde_json::from_slice(&nilorb(&["act", s(&g), s(&from)]).stdout).unwrap();
    let to = docs.write("t.json", &moved);
    let out = nilorb(&["conjugator", s(&from), s(&to)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let g = matrix_of(&v["matrix"]);
    let (x, y) = (matrix_of(&d42()["matrix"]), matrix_of(&moved["matrix"]));
    assert_eq!(g.mul(&x).unwrap().compare(&y.mul(&g).unwrap()).unwrap(), ZeroTest::Zero);
}

#[test]
fn conjugator_refuses_distinct_orbits() {
    let docs = Docs::new();
    let from = docs.write("f.json", &json!({"n": 2, "matrix": [["0", "t"], ["0", "0"]]}));
    let to = docs.write("t.json", &json!({"n": 2, "matrix": [["0", "t^2"], ["0", "0"]]}));
    let zero = docs.write("z.json", &json!({"n": 2, "matrix": [["0", "0"], ["0", "0"]]}));
    assert_eq!(code(&nilorb(&["conjugator", s(&from), s(&to)])), 5);
    assert_eq!(code(&nilorb(&["conjugator", s(&from), s(&zero)])), 5);
}

#[test]
fn selfcheck_default_passes() {
    let out = nilorb(&["selfcheck"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAILED"));
}

#[test]
fn selfcheck_is_deterministic() {
    let a = nilorb(&["selfcheck", "--seed", "42", "--cases", "8"]);
    let b = nilorb(&["selfcheck", "--seed", "42", "--cases", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("seed 42 cases 8"));
}

#[test]
fn selfcheck_catches_injected_fault() {
    let out = nilorb(&["selfcheck", "--cases", "10", "--inject-fault", "residue-sign-flip"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("counterexample for adjoint action homomorphism"));
}
