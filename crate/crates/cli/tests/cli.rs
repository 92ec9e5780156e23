use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_torsionlab");

fn experiments() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("TORSIONLAB_HORIZON").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn file(name: &str) -> String {
    experiments().join(name).display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn expand_lists_digits_and_supports() {
    let o = run(&["expand", &file("third-b2.toml"), "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("c_1..c_6: 0,1,0,1,0,1"), "{out}");
    assert!(out.contains("supp = progression 2 2"), "{out}");
    assert!(out.contains("infinite support"), "{out}");
}

#[test]
fn expand_reports_finite_support() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "dyadic.toml",
        "[sequence]\nratio = \"constant 2\"\n[element]\nelement = \"rational 5/8\"\n",
    );
    let o = run(&["expand", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("supp = finite 1,3"), "{out}");
    assert!(out.contains("finite support"), "{out}");
}

#[test]
fn malformed_ratio_exits_two_and_names_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.toml", "[sequence]\nratio = \"constnat 2\"\n[element]\nelement = \"rational 1/3\"\n");
    let o = run(&["classify", &p]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("ratio grammar, rule"), "{err}");
    assert_eq!(err.matches("ratio grammar").count(), 1, "{err}");
}

#[test]
fn unknown_keys_and_bad_flags_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "extra.toml", "[sequence]\nratio = \"constant 2\"\nspeed = 3\n[element]\nelement = \"rational 1/3\"\n");
    assert_eq!(run(&["classify", &p]).status.code(), Some(2));
    assert_eq!(run(&["classify", &file("half3.toml"), "--epsilons", "1/4,x"]).status.code(), Some(2));
    assert_eq!(run(&["demo", "nothing"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "/nonexistent/file.toml"]).status.code(), Some(2));
}

#[test]
fn classify_exit_codes_follow_the_decision() {
    for (name, code) in [
        ("half3.toml", 1),
        ("squares.toml", 0),
        ("euler.toml", 0),
        ("third-b2.toml", 1),
        ("evens-convexity.toml", 1),
        ("unknown-case.toml", 3),
    ] {
        let o = run(&["classify", &file(name)]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("R1 FiniteSupport"), "{name}: trace missing");
    }
}

#[test]
fn audit_probe_is_traced() {
    let o = run(&["classify", &file("half3.toml"), "--audit", "evens"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Audit"), "{}", stdout(&o));
}

#[test]
fn scan_writes_csv_with_one_row_per_index() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let dens = dir.path().join("density.csv");
    let o = run(&[
        "scan",
        &file("half3.toml"),
        "--n-max",
        "100",
        "--csv",
        csv.to_str().unwrap(),
        "--density-csv",
        dens.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("oracle corroborates"), "{}", stdout(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,norm_num,norm_den,lo_num,lo_den,hi_num,hi_den,mode");
    assert_eq!(lines.len(), 102);
    assert_eq!(lines[1], "0,1,2,1,2,1,2,exact-modular");
    let d = std::fs::read_to_string(&dens).unwrap();
    assert!(d.starts_with("N,epsilon,count,ratio\n"), "{d}");
    assert_eq!(d.lines().count(), 1 + 2 * 4);
}

#[test]
fn horizon_env_sets_the_default() {
    let o = Command::new(BIN)
        .args(["scan", &file("half3.toml"), "--epsilons", "1/4"])
        .env("TORSIONLAB_HORIZON", "80")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("N=80 "), "{}", stdout(&o));
    let bad = Command::new(BIN).args(["scan", &file("half3.toml")]).env("TORSIONLAB_HORIZON", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn witness_prints_an_element() {
    let o = run(&["witness", "--ratio", "constant 2", "--set", "evens", "--ideal", "density 1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("element = digits on"), "{}", stdout(&o));
    let refused = run(&["witness", "--ratio", "constant 2", "--set", "squares", "--ideal", "density 1"]);
    assert_ne!(refused.status.code(), Some(1));
}

#[test]
fn classify_all_covers_the_corpus() {
    let o = run(&["classify", "--all", &file("corpus")]);
    let out = stdout(&o);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.lines().count() >= 30, "{out}");
    assert!(out.lines().all(|l| l.contains(": Member by ") || l.contains(": NonMember by ")), "{out}");
}

#[test]
fn scan_all_finds_no_contradiction() {
    let o = run(&["scan", "--all", &file("corpus"), "--n-max", "2048"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn grammar_is_printed() {
    let o = run(&["grammar"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ideal   :="));
}

#[test]
fn demos_run() {
    for (name, code, needle) in [
        ("euler", 0, "Member by R8"),
        ("squares", 0, "Member by R2"),
        ("half3", 1, "= 1/2 for every n"),
        ("splitting", 0, "(3_x)"),
        ("dk", 0, "e pattern"),
        ("dl", 0, "every complement bound holds: true"),
    ] {
        let o = run(&["demo", name, "--n-max", "2048"]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stderr(&o));
        assert!(stdout(&o).contains(needle), "{name}: {}", stdout(&o));
    }
}
