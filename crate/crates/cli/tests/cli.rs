use std::process::{Command, Output};

fn exzero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exzero")).args(args).output().expect("binary runs")
}

fn last_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().last().unwrap_or_default().to_string()
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = exzero(&["tree", "--p", "3", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(exzero(&["nosuch"]).status.code(), Some(2));
}

#[test]
fn exceptional_zero_report_passes() {
    let o = exzero(&["ezero", "--curve", "11a1.txt", "--p", "11", "--level", "4", "--prec", "3"]);
    assert!(o.status.success());
    assert!(last_line(&o).starts_with("PASS curve=11a1 p=11"));
}

#[test]
fn refused_computation_fails_with_exit_one() {
    let o = exzero(&["ezero", "--curve", "15a1", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(last_line(&o).starts_with("FAIL"));
}

#[test]
fn json_reports_are_objects() {
    let o = exzero(&["--format", "json", "gauss", "--p", "7", "--conductor-exp", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&last_line(&o)).unwrap();
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["characters"], 5);
}

#[test]
fn seeded_runs_are_deterministic() {
    let args = ["detcheck", "--trials", "30", "--kmax", "3", "--mmax", "5", "--seed", "7"];
    let (a, b) = (exzero(&args), exzero(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn negative_alpha_is_accepted() {
    let o = exzero(&["local-integral", "--p", "5", "--char", "1:1", "--alpha", "-1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tree_counts() {
    let o = exzero(&["tree", "--p", "2", "--radius", "3", "--check"]);
    assert!(o.status.success());
    assert_eq!(last_line(&o), "PASS p=2 radius=3 vertices=22 edges=21");
}
