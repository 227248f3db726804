use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const WORKED_ACUN: &str = "theory acun\nconsts c1 c2 c3\n\
eq x1 + x2 + x3 + c1 + c2 = 0\n\
eq x1 + x3 + c2 + c3 = 0\n\
diseq x2 + x3 != c3\n";

const SAT_EXAMPLE: &str = "p cnf 3 2\n1 -2 3 0\n-1 -2 3 0\n";
const GRAPH_EXAMPLE: &str = "e 1 3\ne 1 2\ne 2 3\ne 3 4\n";
const NAE_EXAMPLE: &str = "p cnf 4 4\n1 2 3 0\n1 2 4 0\n1 3 4 0\n2 3 4 0\n";

fn uniflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniflab"))
        .args(args)
        .env_remove("UNIFLAB_SEED")
        .output()
        .expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("valid JSON")
}

fn drop_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.remove("millis");
            m.values_mut().for_each(drop_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(drop_timings),
        _ => {}
    }
}

#[test]
fn solve_worked_acun_example() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "w.txt", WORKED_ACUN);
    let out = uniflab(&["solve", s(&p), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["solvable"], true);
    assert_eq!(v["backend"], "xor-linear/gaussian");
    assert!(v["unifier"]["x1"].is_string());
    assert!(v["elapsed_ms"].is_number());
}

#[test]
fn clash_reports_f4() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "f4.txt", "theory r1\neq X = a\neq X = b\n");
    let out = uniflab(&["solve", s(&p), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["fail_rule"], "F4");
}

#[test]
fn malformed_term_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "bad.txt", "theory r1\neq X = h(a,\n");
    let out = uniflab(&["solve", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn unsupported_combination_exits_2() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "mix.txt", "theory acun\nconsts c1\nasym x =v c1\ndiseq x != 0\n");
    let out = uniflab(&["solve", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("cannot be mixed"));
}

#[test]
fn theory_override() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "t.txt", "theory r1\nasym X =v g(Y)\n");
    assert_eq!(uniflab(&["solve", s(&p)]).status.code(), Some(2));
    let out = uniflab(&["solve", s(&p), "--theory", "r5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["backend"], "asym-syntactic");
}

#[test]
fn automata_worked_example() {
    let dir = TempDir::new().unwrap();
    let p = file(
        &dir,
        "hom.txt",
        "theory acunh\nconsts a\nvars V W Y U\nasym U =v V + Y\neq W = h(V)\nasym Y =v h(W)\n",
    );
    let out = uniflab(&["solve", s(&p), "--json", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["unifier"]["U"], "a + h(h(a))");
    assert_eq!(v["trace"][0], "U =v V + Y");
}

#[test]
fn reduce_sat_example() {
    let dir = TempDir::new().unwrap();
    let cnf = file(&dir, "f.cnf", SAT_EXAMPLE);
    let out = uniflab(&["reduce", "3sat", s(&cnf)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let items: Vec<&str> = text.lines().filter(|l| l.starts_with("eq") || l.starts_with("diseq")).collect();
    assert_eq!(
        items,
        [
            "eq h(x1) = f(x1,c)",
            "eq h(x2) = f(x2,c)",
            "eq h(x3) = f(x3,c)",
            "diseq f(x1,f(x2,x3)) != f(b,f(a,b))",
            "diseq f(x1,f(x2,x3)) != f(a,f(a,b))",
        ]
    );
}

#[test]
fn reduce_then_solve_graph() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.edges", GRAPH_EXAMPLE);
    let out_path = dir.path().join("col.txt");
    let out = uniflab(&["reduce", "3col", s(&g), "-o", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&out_path).unwrap();
    let asym: Vec<&str> = text.lines().filter(|l| l.starts_with("asym")).collect();
    assert_eq!(
        asym,
        [
            "asym c1 + c2 + c3 =v y1 + y3 + z1",
            "asym c1 + c2 + c3 =v y1 + y2 + z2",
            "asym c1 + c2 + c3 =v y2 + y3 + z3",
            "asym c1 + c2 + c3 =v y3 + y4 + z4",
        ]
    );
    let solved = uniflab(&["solve", s(&out_path), "--json"]);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(json(&solved)["backend"], "xor-linear/ground-search");
}

#[test]
fn reduce_nae_and_solve() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "n.cnf", NAE_EXAMPLE);
    let out_path = dir.path().join("nae.txt");
    assert_eq!(uniflab(&["reduce", "nae3sat", s(&f), "-o", s(&out_path)]).status.code(), Some(0));
    let solved = uniflab(&["solve", s(&out_path), "--json"]);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(json(&solved)["backend"], "reductions/r4-ground-search");
}

#[test]
fn reduce_empty_cnf() {
    let dir = TempDir::new().unwrap();
    let cnf = file(&dir, "e.cnf", "p cnf 2 0\n");
    let text = stdout(&uniflab(&["reduce", "3sat", s(&cnf)]));
    assert!(text.contains("eq h(x2) = f(x2,c)"));
    assert!(!text.contains("diseq"));
}

#[test]
fn reduce_rejects_bad_dimacs() {
    let dir = TempDir::new().unwrap();
    let cnf = file(&dir, "bad.cnf", "p cnf 3 1\n1 2 0\n");
    assert_eq!(uniflab(&["reduce", "3sat", s(&cnf)]).status.code(), Some(2));
}

#[test]
fn oracles() {
    let dir = TempDir::new().unwrap();
    let cnf = file(&dir, "f.cnf", SAT_EXAMPLE);
    assert_eq!(uniflab(&["oracle", "3sat", s(&cnf)]).status.code(), Some(0));
    let k4 = file(&dir, "k4.edges", "e 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
    assert_eq!(uniflab(&["oracle", "3col", s(&k4)]).status.code(), Some(1));
    let p = file(&dir, "r1.txt", "theory r1\neq h(x) = f(x, c)\ndiseq x != a\n");
    let out = uniflab(&["oracle", "ground", s(&p), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["answer"], true);
}

#[test]
fn normalize_terms() {
    let out = uniflab(&["normalize", "h(a)", "--theory", "r1"]);
    assert_eq!(stdout(&out).trim(), "f(a,c)");
    let out = uniflab(&["normalize", "h(x + y)", "--theory", "acunh"]);
    assert_eq!(stdout(&out).trim(), "h(x) + h(y)");
    let out = uniflab(&["normalize", "c1 + c1", "--theory", "acun", "--consts", "c1"]);
    assert_eq!(stdout(&out).trim(), "0");
    assert_eq!(uniflab(&["normalize", "h(a)"]).status.code(), Some(2));
}

#[test]
fn solve_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "w.txt", WORKED_ACUN);
    let mut a = json(&uniflab(&["solve", s(&p), "--json", "--trace"]));
    let mut b = json(&uniflab(&["solve", s(&p), "--json", "--trace"]));
    drop_timings(&mut a);
    drop_timings(&mut b);
    assert_eq!(a, b);
}

#[test]
fn crosscheck_is_seeded() {
    let dir = TempDir::new().unwrap();
    let replays = dir.path().join("r");
    let args = ["crosscheck", "--instances", "5", "--no-timing", "--json", "--replay-dir", s(&replays)];
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_uniflab"))
            .args(args)
            .env("UNIFLAB_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let mut v = json(&out);
        drop_timings(&mut v);
        v
    };
    let a = run("11");
    assert_eq!(a["seed"], 11);
    assert_eq!(a, run("11"));
    assert!(!replays.exists());
}

#[test]
fn crosscheck_catches_injected_bug() {
    let dir = TempDir::new().unwrap();
    let replays = dir.path().join("r");
    let out = uniflab(&[
        "crosscheck",
        "--suite",
        "acun-disunif",
        "--instances",
        "100",
        "--no-timing",
        "--inject-bug",
        "--replay-dir",
        s(&replays),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("MISMATCH"));
    let written: Vec<_> = fs::read_dir(&replays).unwrap().collect();
    assert!(!written.is_empty());
    let first = written[0].as_ref().unwrap().path();
    let text = fs::read_to_string(first).unwrap();
    assert!(text.contains("theory acun"));
}

#[test]
fn crosscheck_size_zero_passes() {
    let out = uniflab(&["crosscheck", "--instances", "0", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_suite_is_an_error() {
    let out = uniflab(&["crosscheck", "--suite", "nope", "--no-timing"]);
    assert_eq!(out.status.code(), Some(2));
}
