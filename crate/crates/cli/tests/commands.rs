use std::fs;
use std::path::PathBuf;

use clap::Parser;
use relsem_cli::{run, Cli, Output};
use tempfile::TempDir;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Files {
        let f = Files {
            dir: TempDir::new().unwrap(),
        };
        f.write(
            "u.txt",
            "var x : 0..3\nevents a b c d\nevent a = 0\nevent b = 1\nevent c = 2\nevent d = 3\n",
        );
        f
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

fn relsem(args: &[&str]) -> Output {
    let mut full = vec!["relsem"];
    full.extend_from_slice(args);
    run(Cli::try_parse_from(full).unwrap())
}

#[test]
fn denote_skip_is_identity() {
    let f = Files::new();
    let p = f.write("skip.imp", "skip");
    let out = relsem(&["denote", &p, "--universe", &f.path("u.txt")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with(
        "(x=0) -> (x=0)\n(x=1) -> (x=1)\n(x=2) -> (x=2)\n(x=3) -> (x=3)\n# states: 4,"
    ));
}

#[test]
fn denote_while_example() {
    let f = Files::new();
    let p = f.write("w.imp", "while (x < 2) do { x := x + 1 }");
    let out = relsem(&["denote", &p, "--universe", &f.path("u.txt")]);
    let table: Vec<&str> = out.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        table,
        ["(x=0) -> (x=2)", "(x=1) -> (x=2)", "(x=2) -> (x=2)", "(x=3) -> (x=3)"]
    );
    assert!(out.stdout.contains("fixpointReached: true"));
}

#[test]
fn denote_traced_writes() {
    let f = Files::new();
    let p = f.write("t.imp", "while (x < 2) do { write(x); x := x + 1 }");
    let out = relsem(&["denote", &p, "--universe", &f.path("u.txt"), "--flavor", "traced"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("(x=0) -[a,b]-> (x=2)\n(x=1) -[b]-> (x=2)\n(x=2) -[]-> (x=2)\n"));
}

#[test]
fn equiv_verdicts_and_exit_codes() {
    let f = Files::new();
    let u = f.path("u.txt");
    let a = f.write("a.imp", "{ if (x == 0) then { x := 1 } else { skip } }; x := 2");
    let b = f.write("b.imp", "if (x == 0) then { x := 1; x := 2 } else { skip; x := 2 }");
    let c = f.write("c.imp", "x := 1");
    for flavor in ["plain", "nrminf", "traced"] {
        let out = relsem(&["equiv", &a, &b, "--universe", &u, "--flavor", flavor]);
        assert_eq!((out.stdout.as_str(), out.code), ("EQUIV\n", 0), "{flavor}");
    }
    let out = relsem(&["equiv", &a, &c, "--universe", &u]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "DISTINCT\n(x=0) -> (x=2) (first only)\n");
}

#[test]
fn unfold_displays() {
    let out = relsem(&["unfold", "-e", "rel X Y Z : A*B\nX <= Y + Z"]);
    assert_eq!(out.stdout, "forall a b, (a, b) ∈ X -> (a, b) ∈ Y \\/ (a, b) ∈ Z\n");
    assert_eq!(relsem(&["unfold", "-e", "t in empty"]).stdout, "False\n");
    let f = Files::new();
    let s = f.write("assoc.txt", "rel R1 : A*B\nrel R2 : B*C\nrel R3 : C*D\n(R1;R2);R3 == R1;(R2;R3)\n");
    let out = relsem(&["unfold", &s]);
    assert!(out.stdout.starts_with("forall a d, (exists c : C, (exists b : B,"), "{}", out.stdout);
}

#[test]
fn unfold_with_model() {
    let f = Files::new();
    let u = f.write("s.txt", "sort A = {0,1,2}\nsort B = {0,1}\n");
    let m = f.write("m.txt", "R = {(0,1)}\nS = {(1,2)}\n");
    let out = relsem(&[
        "unfold", "-e", "rel R : A*B\nrel S : B*A\n(0,2) in R;S", "--model", &m, "--universe", &u,
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "exists b : B, (0, b) ∈ R /\\ (b, 2) ∈ S\ndirect: true\nunfolded: true\n"
    );
}

#[test]
fn laws_report_is_deterministic() {
    let a = relsem(&["laws", "--seed", "7", "--cases", "30"]);
    let b = relsem(&["laws", "--seed", "7", "--cases", "30", "--sequential"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a, b);
    assert!(a.stdout.lines().all(|l| l.starts_with("PASS ") || l.ends_with("0 failed")));
}

#[test]
fn errors_exit_with_two() {
    let f = Files::new();
    let u = f.path("u.txt");
    let bad = f.write("bad.imp", "x := ");
    let out = relsem(&["denote", &bad, "--universe", &u]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1"), "{}", out.stderr);
    let w = f.write("w.imp", "write(1)");
    assert_eq!(relsem(&["denote", &w, "--universe", &u]).code, 2);
    assert_eq!(relsem(&["denote", &f.path("missing.imp"), "--universe", &u]).code, 2);
    assert_eq!(relsem(&["unfold", "-e", "rel X : A\nX == Y"]).code, 2);
    assert!(Cli::try_parse_from(["relsem", "laws", "--cases", "0"]).is_err());
    assert!(Cli::try_parse_from(["relsem", "denote", "p", "--universe", "u", "--flavor", "x"]).is_err());
}

#[test]
fn parse_normalizes() {
    let f = Files::new();
    let p = f.write("p.imp", "x:=1 ;skip");
    assert_eq!(relsem(&["parse", &p, "--universe", &f.path("u.txt")]).stdout, "x := 1; skip\n");
}
