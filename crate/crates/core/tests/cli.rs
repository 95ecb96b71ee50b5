use std::process::Command;

use coh_core::cli::run;
use coh_core::coherence::{coherent_set, Book, CoherenceVerdict, DutchBook, EventList, StateWitness};
use coh_core::rational::{parse_rational, rat, Point, Rational};
use serde_json::{json, Value};

fn coh(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["coh", "--json"];
    argv.extend_from_slice(args);
    let out = run(argv.iter().map(|s| s.to_string()));
    let v = if out.stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", out.stdout))
    };
    (out.code, v)
}

fn code(args: &[&str]) -> i32 {
    let argv = std::iter::once("coh").chain(args.iter().copied());
    run(argv.map(str::to_string)).code
}

fn rational(v: &Value) -> Rational {
    parse_rational(v.as_str().expect("rational string")).unwrap()
}

fn point(v: &Value) -> Point {
    v.as_array().unwrap().iter().map(rational).collect()
}

// Rebuilds the verdict from its JSON form and re-checks it with the library.
fn reverify(events: &[&str], prices: &[Rational], v: &Value) {
    let obj = v.as_object().unwrap();
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    let coherent = v["coherent"].as_bool().unwrap();
    let verdict = CoherenceVerdict {
        coherent,
        state_witness: obj.get("witness").map(|w| StateWitness {
            points: w["points"].as_array().unwrap().iter().map(point).collect(),
            weights: point(&w["weights"]),
        }),
        dutch_book: obj.get("dutch_book").map(|d| DutchBook {
            stakes: point(&d["stakes"]),
            guaranteed_loss: rational(&d["guaranteed_loss"]),
        }),
    };
    assert_eq!(keys.len(), 2, "{keys:?}");
    let set = coherent_set(&EventList::parse(events).unwrap()).unwrap();
    assert!(verdict.verify(&set, &Book::new(prices.to_vec()).unwrap()));
}

#[test]
fn check_join_sum_book() {
    let (c, v) = coh(&["check", "--events", "x|y", "x+y", "--book", "1/2", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["coherent"], json!(true));
    assert_eq!(v["witness"]["points"], json!([["1/2", "1/2"]]));
    reverify(&["x|y", "x+y"], &[rat(1, 2), rat(1, 1)], &v);
}

#[test]
fn check_incoherent_book() {
    let (c, v) = coh(&["check", "--events", "x|~x", "--book", "1/4"]);
    assert_eq!(c, 0);
    assert_eq!(v["coherent"], json!(false));
    assert_eq!(v["dutch_book"], json!({"stakes": ["1"], "guaranteed_loss": "1/4"}));
    reverify(&["x|~x"], &[rat(1, 4)], &v);
}

#[test]
fn prove_p3_instance() {
    let (c, v) = coh(&["fp", "prove", "P(x+y) <-> (P(x) -> P(x*y)) -> P(y)"]);
    assert_eq!(c, 0);
    assert_eq!(v, json!({"holds": true}));
}

#[test]
fn entail_with_countermodel() {
    let (c, v) = coh(&["fp", "entail", "P(x|y)", "P(x)"]);
    assert_eq!(c, 0);
    assert_eq!(v["holds"], json!(false));
    assert_eq!(v["countermodel"]["(x | y)"], json!("1"));
}

#[test]
fn extend_negation() {
    let (c, v) = coh(&["extend", "--events", "x", "--book", "1/3", "--new", "~x"]);
    assert_eq!(c, 0);
    assert_eq!(v, json!({"lo": "2/3", "hi": "2/3"}));
}

#[test]
fn set_schema() {
    let (c, v) = coh(&["set", "--events", "x|y", "x+y"]);
    assert_eq!(c, 0);
    assert_eq!(v["events"], json!(["(x | y)", "(x + y)"]));
    let vertices: Vec<Point> = v["vertices"].as_array().unwrap().iter().map(point).collect();
    assert_eq!(vertices.len(), 3);
    assert!(vertices.contains(&vec![rat(1, 2), rat(1, 1)]));
    for h in v["halfspaces"].as_array().unwrap() {
        let normal = point(&h["normal"]);
        let offset = rational(&h["offset"]);
        for p in &vertices {
            let s: Rational = normal.iter().zip(p).map(|(a, b)| a * b).sum();
            assert!(s <= offset);
        }
    }
    assert_eq!(v["valuations"].as_array().unwrap().len(), vertices.len());
}

#[test]
fn chi_ldt_and_unify() {
    let (c, v) = coh(&["chi", "--points", "0,0", "1,1", "1/2,1"]);
    assert_eq!(c, 0);
    assert!(v["formula"].as_str().unwrap().contains("p1"));
    let (c, v) = coh(&["chi", "--events", "x|y", "x+y"]);
    assert_eq!(c, 0);
    assert!(v["formula"].is_string());
    let (c, v) = coh(&["ldt", "P(x)", "P(x)*P(x)"]);
    assert_eq!(c, 0);
    assert_eq!(v, json!({"holds": true, "exponent": 2}));
    let (c, v) = coh(&["ldt", "P(x|y)", "P(x)"]);
    assert_eq!(c, 0);
    assert_eq!(v["holds"], json!(false));
    let (c, v) = coh(&[
        "unify", "verify", "--identity", "P(x1) | ~P(x1) | P(x2) | ~P(x2)", "1", "--sigma", "P(x1)=P(x1)", "--sigma",
        "P(x2)=P(x1)",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["holds"], json!(false));
    let (c, v) = coh(&[
        "unify", "generality", "--identity", "P(x)", "P(x)", "--sigma", "P(x)=1", "--tau",
        "P(x)=P(y | ~y) + P(y | ~y)", "--delta", "P(y | ~y)=P(y | ~y)",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["holds"], json!(true));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["check", "--events", "x", "--book", "0.5"]), 2);
    assert_eq!(code(&["check", "--events", "x", "--book", "3/2"]), 2);
    assert_eq!(code(&["check", "--events", "x +", "--book", "1"]), 2);
    assert_eq!(code(&["check", "--events", "x", "y", "--book", "1"]), 2);
    assert_eq!(code(&["fp", "prove", "P(P(x))"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["set", "--events", "a", "b", "c", "d", "e", "f", "g"]), 3);
    assert_eq!(code(&["set", "--events", "a+b+c+d+e"]), 3);
    let (c, v) = coh(&["extend", "--events", "x|~x", "--book", "1/4", "--new", "x"]);
    assert_eq!(c, 0);
    assert_eq!(v["coherent"], json!(false));
    assert!(v["dutch_book"].is_object());
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["set", "--events", "x+y", "x*y", "x&y"];
    let a = run(std::iter::once("coh").chain(args).map(str::to_string));
    let b = run(std::iter::once("coh").chain(args).map(str::to_string));
    assert_eq!(a, b);
    let a = run(["coh", "--json", "fp", "entail", "P(x|y)", "P(x)"].map(str::to_string));
    let b = run(["coh", "--json", "fp", "entail", "P(x|y)", "P(x)"].map(str::to_string));
    assert_eq!(a.stdout, b.stdout);
}

fn batch_file(name: &str, doc: &Value) -> String {
    let dir = std::env::temp_dir().join(format!("coh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn batch_runs_every_query() {
    let doc = json!([
        {"events": ["x|y", "x+y"], "book": {"x|y": "1/2", "x+y": "1"}},
        {"events": ["x|~x"], "book": {"x|~x": "1/4"}},
        {"events": ["x+y", "x*y"]},
        {"events": ["x"], "book": {"x": "1/3"}, "new": "~x"},
        {"premise": "P(x)", "conclusion": "P(x)*P(x)"},
        {"events": ["x|~x"], "substitution": {"P(x|~x)": "P(y)"}},
        {"identities": [["P(x)", "P(x)"]], "substitution": {"P(x)": "P(x)"}}
    ]);
    let path = batch_file("ok.json", &doc);
    let (c1, one) = coh(&["batch", &path]);
    let (c4, four) = coh(&["batch", &path, "--jobs", "4"]);
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(one, four);
    let rs = one.as_array().unwrap();
    assert_eq!(rs.len(), 7);
    assert_eq!(rs[0]["coherent"], json!(true));
    assert_eq!(rs[1]["coherent"], json!(false));
    assert!(rs[2]["vertices"].is_array());
    assert_eq!(rs[3], json!({"lo": "2/3", "hi": "2/3"}));
    assert_eq!(rs[4]["holds"], json!(true));
    assert_eq!(rs[5]["holds"], json!(false));
    assert_eq!(rs[6]["holds"], json!(true));
}

#[test]
fn batch_reports_errors_per_query() {
    let doc = json!([
        {"events": ["x"], "book": {"x": "0.5"}},
        {"events": ["x"], "book": {"x": "1/2"}}
    ]);
    let path = batch_file("err.json", &doc);
    let (c, v) = coh(&["batch", &path, "--jobs", "2"]);
    assert_eq!(c, 2);
    assert_eq!(v[0]["code"], json!(2));
    assert!(v[0]["error"].is_string());
    assert_eq!(v[1]["coherent"], json!(true));
    assert_eq!(code(&["batch", "/nonexistent/query.json"]), 2);
}

#[test]
fn binary_exit_codes_and_env_override() {
    let bin = env!("CARGO_BIN_EXE_coh");
    let out = Command::new(bin)
        .args(["--json", "extend", "--events", "x", "--book", "1/3", "--new", "~x"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lo"], json!("2/3"));

    let seven = ["x", "~x", "x+x", "x*x", "x|x", "x&x", "x->x"];
    let out = Command::new(bin).arg("set").arg("--events").args(seven).env_remove("COH_MAX_DIM").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    let out = Command::new(bin).arg("set").arg("--events").args(seven).env("COH_MAX_DIM", "7").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin).args(["set", "--events", "x"]).env("COH_MAX_DIM", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
