use std::fs;
use std::process::{Command, Output};

use irredcert::certio::parse;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irredcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x4.irredcert.json");
    let path_s = path.to_str().unwrap();
    let o = run(&["certify", "x^4+1", "--out", path_s]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(parse(&text).is_ok());

    let o = run(&["verify", "[1,0,0,0,1]", "--cert", path_s]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "accept");

    let o = run(&["verify", "x^4+2", "--cert", path_s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject: "));
}

#[test]
fn certify_stdout_matches_file_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let a = run(&["certify", "x^4+x^3+3x+4"]);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&["certify", "x^4+x^3+3x+4", "--out", path.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(stdout(&a), fs::read_to_string(&path).unwrap());
    assert!(stdout(&a).contains("\"kind\":\"degree_analysis\""));
}

#[test]
fn poly_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(&path, "2x + 4\n").unwrap();
    let arg = format!("@{}", path.display());
    let o = run(&["certify", &arg]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"format\":\"irredcert/1\",\"polynomial\":[\"4\",\"2\"],\"certificate\":{\"kind\":\"linear\"}}\n"
    );
}

#[test]
fn exit_codes() {
    let o = run(&["certify", "x^4+2x^2+1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reducible: factor"));

    let o = run(&["certify", "x^4+1", "--max-iters", "0", "--no-transforms"]);
    assert_eq!(o.status.code(), Some(2));

    for args in [
        &["certify", "x^^2"][..],
        &["certify", "5"],
        &["certify"],
        &["bogus"],
        &["verify", "x^2+1", "--cert", "/nonexistent/file"],
        &["certify", "x^2+1", "--smooth-bound", "1"],
    ] {
        assert_eq!(run(args).status.code(), Some(3), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_reports_parse_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"format\":\"irredcert/2\"}").unwrap();
    let o = run(&["verify", "x^2+1", "--cert", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject: parse"));
}

#[test]
fn strict_verification_refuses_probable_primes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let cert = "{\"format\":\"irredcert/1\",\"polynomial\":[\"1\",\"0\",\"0\",\"0\",\"1\"],\
\"certificate\":{\"kind\":\"lpfw\",\"rho\":\"2/1\",\"graeffe_iters\":\"0\",\"delta\":\"1\",\"evidence\":[],\
\"n\":\"4\",\"p\":\"257\",\"primality\":{\"kind\":\"probable\",\"rounds\":\"40\"}}}\n";
    fs::write(&path, cert).unwrap();
    let p = path.to_str().unwrap();
    let loose = run(&["verify", "x^4+1", "--cert", p]);
    let strict = run(&["verify", "x^4+1", "--cert", p, "--strict"]);
    assert_eq!(loose.status.code(), Some(0), "{}", stdout(&loose));
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn info_lists_degrees() {
    let o = run(&["info", "x^4+x^3+3x+4", "--primes", "2,31,47"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("degree: 4"));
    assert!(s.contains("fixed divisor: "));
    assert!(s.contains("p=31"));
    assert!(s.contains("degree analysis proves irreducibility"));
}
