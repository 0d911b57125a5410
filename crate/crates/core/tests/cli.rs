//! End-to-end tests of the `shapestride` binary.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_shapestride")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    stdout.trim_end().to_string()
}

#[test]
fn operators() {
    assert_eq!(ok(&["compose", "(4,6,8,10):(2,3,5,7)", "6:12"]), "(2,3):(9,5)");
    assert_eq!(ok(&["compose", "(12,(4,8)):(59,(13,1))", "[3:4,8:2]"]), "(3,(2,4)):(236,(26,1))");
    assert_eq!(ok(&["coalesce", "((2,2),4):((1,2),4)"]), "16:1");
    assert_eq!(ok(&["complement", "(4,8):(1,8)"]), "(2,1):(4,64)");
    assert_eq!(ok(&["complement", "(3,4):(4,1)", "24"]), "2:12");
    assert_eq!(ok(&["rinv", "(4,8):(8,1)"]), "(8,4):(4,1)");
    assert_eq!(ok(&["linv", "(4,8):(1,5)"]), "(5,8):(1,4)");
    assert_eq!(ok(&["divide", "24:3", "8:3"]), "(8,3):(9,3)");
    assert_eq!(ok(&["zipped-divide", "(8,16):(20,1)", "[4:1,8:2]"]), "((4,8),(2,2)):((20,2),(80,1))");
    assert_eq!(ok(&["product", "(3,4):(4,1)", "(2,5):(1,2)"]), "((3,4),(2,5)):((4,1),(12,24))");
    assert_eq!(ok(&["blocked-product", "(3,4):(4,1)", "(2,5):(1,2)"]), "((3,2),(4,5)):((4,12),(1,24))");
    assert_eq!(ok(&["raked-product", "(3,4):(4,1)", "(2,5):(1,2)"]), "((2,3),(5,4)):((12,4),(24,1))");
    assert_eq!(ok(&["vectorize", "(4,4):(1,4)", "((2,2),4):((1,8),2)"]), "2");
    assert_eq!(ok(&["eval", "(4,8):(1,4)", "22"]), "22");
    assert_eq!(ok(&["linear-form", "((2,2),(4,2)):((1,8),(2,16))"]), "[1 8 2 16]");
}

#[test]
fn chain_reproduces_its_table() {
    let out = ok(&["chain", "0,3,1,2"]);
    assert!(out.contains('∘'), "{out}");
}

#[test]
fn render_grid() {
    let out = ok(&["--render", "blocked-product", "(3,4):(4,1)", "(2,5):(1,2)"]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    let first: Vec<i64> = rows[0].split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[..5], [0, 1, 2, 3, 24]);
    let coords = ok(&["--render", "print", "(2,2):(e0,e1)"]);
    assert!(coords.contains("(1,1)"), "{coords}");
}

#[test]
fn complement_rules() {
    assert_eq!(ok(&["complement", "(4,8):(20,2)"]), "(2,1):(1,80)");
    assert_eq!(ok(&["--relaxed-complement", "complement", "(4,8):(20,2)"]), "(2,1):(1,80)");
    let (code, _, err) = run(&["--strict-complement", "complement", "(4,8):(20,2)"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["compose", "(4,6,8):(2,3,5)", "6:3"]);
    assert_eq!(code, 1);
    assert!(err.contains("stride divisibility"), "{err}");
    let (code, _, err) = run(&["locate", "(4,8):(1,4)", "5:8"]);
    assert_eq!(code, 1);
    assert!(err.contains("offset 32"), "{err}");
    let (code, _, err) = run(&["compose", "(4,8):(1,x)", "2:1"]);
    assert_eq!(code, 2);
    assert!(err.contains("byte 9"), "{err}");
    assert_eq!(run(&["print", "(4,8):(1,2,3)"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&[]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("compose"));
}
