use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SHEAR: &str = "vars 2\ndegree 4\ncomp 1: 1 0 -> 1\ncomp 1: 0 2 -> 1\ncomp 2: 0 1 -> 1\n";
const SHEAR_INVERSE: &str =
    "vars 2\ndegree 4\ncomp 1: 1 0 -> 1\ncomp 1: 0 2 -> -1\ncomp 2: 0 1 -> 1\n";
const QUADRATIC: &str = "vars 1\ndegree 6\ncomp 1: 1 -> 1\ncomp 1: 2 -> 1\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn fpsrev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpsrev"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn invert_all_writes_the_shear_inverse() {
    let ws = Workspace::new();
    let input = ws.file("shear.txt", SHEAR);
    let out = ws.path("inv.txt");
    let o = fpsrev(&[
        "invert",
        "--in",
        p(&input),
        "--degree",
        "4",
        "--method",
        "all",
        "--out",
        p(&out),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(std::fs::read_to_string(out).unwrap(), SHEAR_INVERSE);
    assert!(String::from_utf8_lossy(&o.stderr).contains("agree"));
}

#[test]
fn each_method_gives_the_catalan_series() {
    let ws = Workspace::new();
    let input = ws.file("q.txt", QUADRATIC);
    let expected = "vars 1\ndegree 6\ncomp 1: 1 -> 1\ncomp 1: 2 -> -1\ncomp 1: 3 -> 2\ncomp 1: 4 -> -5\ncomp 1: 5 -> 14\ncomp 1: 6 -> -42\n";
    for method in ["neumann", "recurrence", "fixpoint", "all"] {
        let o = fpsrev(&["invert", "--in", p(&input), "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), expected, "{method}");
    }
}

#[test]
fn raising_the_degree_keeps_listed_terms() {
    let ws = Workspace::new();
    let input = ws.file("q.txt", QUADRATIC);
    let o = fpsrev(&[
        "invert",
        "--in",
        p(&input),
        "--degree",
        "8",
        "--method",
        "recurrence",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("vars 1\ndegree 8\n"));
    assert!(text.contains("comp 1: 8 -> -429\n"));
    let o = fpsrev(&[
        "invert",
        "--in",
        p(&input),
        "--degree",
        "3",
        "--method",
        "recurrence",
    ]);
    assert_eq!(
        stdout(&o),
        "vars 1\ndegree 3\ncomp 1: 1 -> 1\ncomp 1: 2 -> -1\ncomp 1: 3 -> 2\n"
    );
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let linear = ws.file("linear.txt", "vars 1\ndegree 4\ncomp 1: 1 -> 2\n");
    let constant = ws.file("constant.txt", "vars 1\ndegree 4\ncomp 1: 0 -> 1\n");
    let duplicate = ws.file(
        "dup.txt",
        "vars 1\ndegree 4\ncomp 1: 2 -> 1\ncomp 1: 2 -> 1\n",
    );
    let overflow = ws.file("high.txt", "vars 1\ndegree 2\ncomp 1: 3 -> 1\n");
    let quadratic = ws.file("q.txt", QUADRATIC);

    assert_eq!(
        fpsrev(&["invert", "--in", p(&linear)]).status.code(),
        Some(3)
    );
    let o = fpsrev(&["invert", "--in", p(&constant)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(
        fpsrev(&["invert", "--in", p(&duplicate)]).status.code(),
        Some(2)
    );
    assert_eq!(
        fpsrev(&["invert", "--in", p(&overflow)]).status.code(),
        Some(2)
    );
    assert_eq!(
        fpsrev(&["invert", "--in", p(&ws.path("missing.txt"))])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fpsrev(&["invert"]).status.code(), Some(1));
    assert_eq!(fpsrev(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        fpsrev(&["invert", "--in", p(&quadratic), "--method", "magic"])
            .status
            .code(),
        Some(1)
    );
    let capped = fpsrev(&[
        "tail-test",
        "--in",
        p(&quadratic),
        "--max-m",
        "10",
        "--max-terms",
        "20",
    ]);
    assert_eq!(capped.status.code(), Some(5));
    assert_eq!(fpsrev(&["--help"]).status.code(), Some(0));
}

#[test]
fn compose_and_iterate() {
    let ws = Workspace::new();
    let shear = ws.file("s.txt", SHEAR);
    let inverse = ws.file("i.txt", SHEAR_INVERSE);
    let o = fpsrev(&[
        "compose",
        "--outer",
        p(&shear),
        "--inner",
        p(&inverse),
        "--degree",
        "4",
    ]);
    assert_eq!(
        stdout(&o),
        "vars 2\ndegree 4\ncomp 1: 1 0 -> 1\ncomp 2: 0 1 -> 1\n"
    );

    let o = fpsrev(&[
        "iterate",
        "--in",
        p(&shear),
        "--times",
        "3",
        "--degree",
        "4",
    ]);
    assert_eq!(
        stdout(&o),
        "vars 2\ndegree 4\ncomp 1: 1 0 -> 1\ncomp 1: 0 2 -> 3\ncomp 2: 0 1 -> 1\n"
    );

    let quadratic = ws.file("q.txt", QUADRATIC);
    let o = fpsrev(&[
        "iterate",
        "--in",
        p(&quadratic),
        "--times",
        "2",
        "--degree",
        "4",
    ]);
    assert_eq!(
        stdout(&o),
        "vars 1\ndegree 4\ncomp 1: 1 -> 1\ncomp 1: 2 -> 2\ncomp 1: 3 -> 2\ncomp 1: 4 -> 1\n"
    );
    let o = fpsrev(&["compose", "--outer", p(&quadratic), "--inner", p(&shear)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn phi_sequence_orders() {
    let ws = Workspace::new();
    let quadratic = ws.file("q.txt", QUADRATIC);
    let o = fpsrev(&[
        "phi-seq",
        "--in",
        p(&quadratic),
        "--m",
        "3",
        "--degree",
        "4",
    ]);
    assert_eq!(
        stdout(&o),
        "vars 1\ndegree 4\n## Phi_0 order 1\ncomp 1: 1 -> 1\n## Phi_1 order 2\ncomp 1: 2 -> -1\n\
         ## Phi_2 order 3\ncomp 1: 3 -> 2\ncomp 1: 4 -> 1\n## Phi_3 order 4\ncomp 1: 4 -> -6\n"
    );
    let shear = ws.file("s.txt", SHEAR);
    let o = fpsrev(&["phi-seq", "--in", p(&shear), "--m", "2"]);
    assert!(stdout(&o).contains("## Phi_2 order inf\n"));
}

#[test]
fn tail_test_reports() {
    let ws = Workspace::new();
    let shear = ws.file("s.txt", SHEAR);
    let o = fpsrev(&["tail-test", "--in", p(&shear), "--max-m", "4"]);
    let text = stdout(&o);
    assert!(text.contains("vanishing_m0 2\n"));
    assert!(
        text.ends_with("vars 2\ndegree 2\ncomp 1: 1 0 -> 1\ncomp 1: 0 2 -> -1\ncomp 2: 0 1 -> 1\n")
    );

    let quadratic = ws.file("q.txt", QUADRATIC);
    let o = fpsrev(&["tail-test", "--in", p(&quadratic), "--max-m", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("vanishing_m0 none\n"));
    assert!(text.contains("m 6 degree 64 "));

    let o = fpsrev(&["--json", "tail-test", "--in", p(&quadratic), "--max-m", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vanishing_m0"], serde_json::Value::Null);
    assert_eq!(v["records"][2]["degree"], 8);
}

#[test]
fn jacobian_check() {
    let ws = Workspace::new();
    let shear = ws.file("s.txt", SHEAR);
    let o = fpsrev(&[
        "jacobian-check",
        "--in",
        p(&shear),
        "--m",
        "2",
        "--degree",
        "5",
    ]);
    assert_eq!(stdout(&o), "jacobian-check m 2 degree 5 holds true\n");
    let quadratic = ws.file("q.txt", QUADRATIC);
    let o = fpsrev(&[
        "jacobian-check",
        "--in",
        p(&quadratic),
        "--m",
        "2",
        "--degree",
        "3",
    ]);
    assert_eq!(
        stdout(&o),
        "jacobian-check m 2 degree 3 holds false\nresidual (1,1): 2 -> -6\nresidual (1,1): 3 -> -4\n"
    );
}

#[test]
fn matrix_dumps() {
    let ws = Workspace::new();
    let shear = ws.file("s.txt", SHEAR);
    let o = fpsrev(&["matrix", "--in", p(&shear), "--degree", "4"]);
    assert_eq!(
        stdout(&o),
        "1 1 | 1 0 | 1 0 | 1\n1 1 | 0 1 | 0 1 | 1\n2 1 | 0 2 | 1 0 | 1\n"
    );
    let o = fpsrev(&["matrix", "--in", p(&shear), "--degree", "2", "--exp"]);
    assert_eq!(
        stdout(&o),
        "0 0 | 0 0 | 0 0 | 1\n1 1 | 1 0 | 1 0 | 1\n1 1 | 0 1 | 0 1 | 1\n2 1 | 0 2 | 1 0 | 1\n\
         2 2 | 2 0 | 2 0 | 1\n2 2 | 1 1 | 1 1 | 1\n2 2 | 0 2 | 0 2 | 1\n"
    );
    let o = fpsrev(&["--json", "matrix", "--in", p(&shear)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[2]["row"], serde_json::json!([0, 2]));
}

#[test]
fn json_output_is_exact() {
    let ws = Workspace::new();
    let input = ws.file(
        "h.txt",
        "vars 1\ndegree 3\ncomp 1: 1 -> 1\ncomp 1: 2 -> 1/2\n",
    );
    let o = fpsrev(&["invert", "--in", p(&input), "--method", "all", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vars"], 1);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[1]["num"], "-1");
    assert_eq!(terms[1]["den"], "2");
    assert_eq!(terms[2]["num"], "1");
    assert_eq!(terms[2]["den"], "2");
}

#[test]
fn outputs_are_deterministic() {
    let ws = Workspace::new();
    let quadratic = ws.file("q.txt", QUADRATIC);
    let shear = ws.file("s.txt", SHEAR);
    let runs: [&[&str]; 4] = [
        &["invert", "--in", p(&quadratic), "--method", "all", "--json"],
        &["phi-seq", "--in", p(&shear), "--m", "3", "--json"],
        &["matrix", "--in", p(&quadratic), "--exp"],
        &["tail-test", "--in", p(&shear), "--max-m", "3", "--json"],
    ];
    for args in runs {
        assert_eq!(fpsrev(args).stdout, fpsrev(args).stdout, "{args:?}");
    }
}

#[test]
fn bench_reports_agreement() {
    let o = fpsrev(&["bench", "--n", "2", "--degree", "6", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["neumann", "recurrence", "fixpoint", "agreement yes"] {
        assert!(text.contains(name), "{text}");
    }
}
