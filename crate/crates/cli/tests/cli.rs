use std::sync::atomic::{AtomicUsize, Ordering};
use std::process::{Command, Output};

fn ellkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellkit")).args(args).output().expect("binary runs")
}

struct Temp(String);

impl Drop for Temp {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn with_problem(text: &str, args: &[&str]) -> Output {
    static N: AtomicUsize = AtomicUsize::new(0);
    let path = std::env::temp_dir()
        .join(format!("ellkit-cli-{}-{}.txt", std::process::id(), N.fetch_add(1, Ordering::SeqCst)))
        .to_string_lossy()
        .into_owned();
    std::fs::write(&path, text).unwrap();
    let file = Temp(path);
    let mut all = vec![args[0], file.0.as_str()];
    all.extend_from_slice(&args[1..]);
    ellkit(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const WORKED: &str = "prime=5; precision=20\ndegree=4\n\n[unit-cert]\nsigma = [6]\ng = [0]:1 + [1]:1\n";

#[test]
fn unit_cert_worked_instance() {
    let o = with_problem(WORKED, &["unit-cert"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("length=1"), "{s}");
    assert!(s.contains("step 1: m=[1] loss=1"), "{s}");
}

#[test]
fn weil_check_modulus_one() {
    let o = with_problem("prime=5\n[weil-check]\ncharpoly = x - 1\n", &["weil-check"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn weil_check_passes_on_frobenius_like_polynomial() {
    let o = with_problem("prime=5\n[weil-check]\ncharpoly = x^2 + 2*x + 5\n", &["weil-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn jump_trivial_rank_one() {
    let p = "prime=5; precision=10\n[jump]\ndata = rank=1; M1=[[1]]; quotient=none\nlevel = 2\n";
    let o = with_problem(p, &["jump"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("sigma i=0 j=0 level=2: [[0]]; generic=[0,0]; euler=0"), "{}", stdout(&o));
}

#[test]
fn verify_qlin_match_and_mismatch() {
    let base = "prime=3\n[verify-qlin]\ndata = rank=1; M1=[[1]]; quotient=none\nlevel = 2\nset =\n";
    let ok = with_problem(&format!("{base}  component 1: s=[0]/1 lattice=[1]\n"), &["verify-qlin"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = with_problem(&format!("{base}  component 1: s=[1]/3 lattice=[1]\n"), &["verify-qlin"]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
    let unsat = with_problem(&format!("{base}  component 1: s=[0]/1 lattice=[3]\n"), &["verify-qlin"]);
    assert_eq!(unsat.status.code(), Some(2), "{}", stdout(&unsat));
}

#[test]
fn explog_reproduces_exp_five() {
    let o = with_problem("prime=5; precision=12\n[explog]\nt = 5\ndigits = 3\n", &["explog"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exp(t) mod 5^3 = [81]"), "{}", stdout(&o));
}

#[test]
fn explog_at_low_precision_is_undecided() {
    let o = with_problem("prime=5; precision=2\n[explog]\nt = 5\ndigits = 3\n", &["explog"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn every_task_block_runs() {
    let p = "prime=3; precision=12\ndegree=3\n\
        [group-law-check]\ng = [0,0]:2 + [1,1]:-1 + [0,3]:4\n\
        [torsion]\ng = [3]:1 + [1]:3 + [2]:3\nlevel = 1\n\
        [divisibility]\nm = 1\nlevel = 3\n\
        [mellin]\ndata = rank=1; M1=[[z3]]; quotient=none\n\
        [twist]\ng = [1]:1\n\
        [grade-check]\nsigma = [3]\nn = 3\ngenerators =\n  [1]:1 + [2]:1\n";
    for task in ["group-law-check", "torsion", "divisibility", "mellin", "twist", "grade-check"] {
        let o = with_problem(p, &[task]);
        assert_eq!(o.status.code(), Some(0), "{task}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn malformed_inputs_exit_two() {
    for p in [
        "prime=5; colour=blue\n[weil-check]\ncharpoly = x - 2\n",
        "prime=6\n[weil-check]\ncharpoly = x - 2\n",
        "prime=5\n[weil-check]\ncharpoly = x - 2\nextra = 1\n",
        "prime=5\n[jump]\ndata = rank=1; M1=[[1]\n",
        "prime=5\n[twist]\n",
    ] {
        let task = if p.contains("[jump]") { "jump" } else if p.contains("[twist]") { "twist" } else { "weil-check" };
        let o = with_problem(p, &[task]);
        assert_eq!(o.status.code(), Some(2), "{p}: {}", stdout(&o));
    }
    assert_eq!(ellkit(&["jump", "/nonexistent/problem.txt"]).status.code(), Some(2));
    assert_eq!(ellkit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn flags_override_header() {
    let o = with_problem(WORKED, &["unit-cert", "--precision", "9", "--seed", "4"]);
    let s = stdout(&o);
    assert!(s.contains("precision=9"), "{s}");
    assert!(s.contains("seed: 4"), "{s}");
}

#[test]
fn reports_are_deterministic_and_mirrored() {
    let p = "prime=3\n[jump]\ndata = rank=1; M1=[[z3]]; quotient=none\nlevel = 2\n";
    let a = with_problem(p, &["jump"]);
    let b = with_problem(p, &["jump"]);
    assert_eq!(a.stdout, b.stdout);
    let j = with_problem(p, &["jump", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).expect("json report");
    assert_eq!(v["exit"], 0);
    assert_eq!(v["tasks"][0]["status"], "pass");
    assert!(v["op_count"].as_u64().unwrap() > 0);
}

#[test]
fn selftest_quick_passes() {
    let o = ellkit(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn selftest_at_precision_one_is_undecided() {
    let o = ellkit(&["selftest", "--precision", "1"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(3), "{s}");
    assert!(s.contains("[hopf-explog]: undecided"), "{s}");
    assert!(!s.contains("FAIL"), "{s}");
}

#[test]
fn selftest_full_catches_phi_sign_error() {
    let o = ellkit(&["selftest", "--profile", "full", "--mutate", "phi-sign"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{s}");
    assert!(s.contains("[phi-laws]: FAIL"), "{s}");
}

#[test]
fn selftest_rejects_unknown_names() {
    assert_eq!(ellkit(&["selftest", "--profile", "huge"]).status.code(), Some(2));
    assert_eq!(ellkit(&["selftest", "--mutate", "nothing"]).status.code(), Some(2));
    assert_eq!(ellkit(&["selftest", "--suite", "nothing"]).status.code(), Some(2));
}
