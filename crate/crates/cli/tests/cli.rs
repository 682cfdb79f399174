use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn flp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flp")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "programs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn temp_program(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".flp").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn well_founded_of_a_positive_program_is_exact() {
    let o = flp(&["wf", &fixture("weighted.flp")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("({r: 3/10, s: 0}, {r: 3/10, s: 0})"), "{out}");
    assert!(out.contains("r ∈ [3/10, 3/10]"));
}

#[test]
fn stable_witness_verdicts_set_the_exit_code() {
    let p4 = fixture("self_negation.flp");
    let o = flp(&["stable", &p4, "--witness", "p=0.5"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "stable"));
    let o = flp(&["stable", &p4, "--witness", "p=1"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "not stable"));
    let o = flp(&["stable", &p4, "--witness", "q=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumeration_lists_the_grid_models() {
    let o = flp(&["stable", &fixture("choice.flp"), "--enumerate", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let models = doc["models"].as_array().unwrap();
    assert_eq!(models.len(), 8);
    assert_eq!(models[0][0]["value"], "3/10");
    assert_eq!(models[0][1]["value"], "7/10");
    assert_eq!(doc["well_founded"][1]["upper"], "7/10");
}

#[test]
fn trace_contains_the_first_revision_step() {
    let o = flp(&["trace", &fixture("choice.flp")]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("upper (1.0, 1.0, 0.3, 0.0)\\nlower (0.3, 0.0, 0.3, 0.0)"), "{dot}");
    for label in ["A_P", "A_P^st", "AW_P"] {
        assert!(dot.contains(&format!("[label=\"{label}\"]")), "{label}");
    }
}

#[test]
fn structured_output_is_deterministic() {
    let path = fixture("choice.flp");
    let args = ["ultimate-wf", path.as_str(), "--format", "structured", "--trace"];
    let (a, b) = (flp(&args), flp(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["kind"], "ultimate_well_founded");
    assert_eq!(doc["bounds"][0]["atom"], "p");
    assert_eq!(doc["bounds"][0]["lower"], "3/10");
    assert_eq!(doc["bounds"][0]["lower_decimal"], 0.3);
    assert_eq!(doc["status"], "converged");
    assert!(doc["trace"].as_array().unwrap().len() >= 2);
}

#[test]
fn ultimate_bounds_for_self_negation() {
    let p4 = fixture("self_negation.flp");
    let kk = stdout(&flp(&["ultimate-kk", &p4]));
    assert!(kk.contains("p ∈ [1/2, 1]  (candidates)"), "{kk}");
    let wf = stdout(&flp(&["wf", &p4]));
    assert!(wf.contains("p ∈ [0, 1]"), "{wf}");
    let grid = stdout(&flp(&["ultimate-wf", &p4, "--grid", "4"]));
    assert!(grid.contains("(grid)"), "{grid}");
}

#[test]
fn crosscheck_and_strata_pass_on_the_fixtures() {
    for name in ["weighted.flp", "choice.flp", "loop.flp", "self_negation.flp"] {
        let o = flp(&["crosscheck", &fixture(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let o = flp(&["strata", &fixture(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
    let o = flp(&["strata", &fixture("choice.flp"), "--partition", "s,r|p,q"]);
    assert!(stdout(&o).contains("split and monolithic agree"));
}

#[test]
fn a_partition_that_reads_upwards_fails_the_check() {
    let o = flp(&["strata", &fixture("choice.flp"), "--partition", "p,q|r,s"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not stratifiable"));
}

#[test]
fn check_reports_every_connective() {
    let o = flp(&["check", &fixture("mixed.flp"), "--mode", "approx", "--grid", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for id in ["G", "L", "P"] {
        assert!(out.contains(&format!("{id} adjointness: pass")), "{out}");
    }
}

#[test]
fn approximate_mode_and_family_override() {
    let mixed = fixture("mixed.flp");
    let o = flp(&["wf", &mixed]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("approximate mode"));
    let o = flp(&["wf", &mixed, "--mode", "approx", "--epsilon", "1/1000000"]);
    assert_eq!(o.status.code(), Some(0));

    let f = temp_program("p <- 0.6 /\\ 0.7.\n");
    let path = f.path().to_str().unwrap();
    assert!(stdout(&flp(&["wf", path])).contains("p ∈ [3/5, 3/5]"));
    assert!(stdout(&flp(&["wf", path, "--family", "L"])).contains("p ∈ [3/10, 3/10]"));
}

#[test]
fn errors_exit_with_status_two() {
    let bad = temp_program("p <- q");
    let o = flp(&["wf", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(flp(&["wf", "does-not-exist.flp"]).status.code(), Some(2));
    let ok = fixture("weighted.flp");
    assert_eq!(flp(&["kk", &ok, "--epsilon", "0.1"]).status.code(), Some(2));
    assert_eq!(flp(&["kk", &ok, "--max-iters", "0"]).status.code(), Some(2));
    assert_eq!(flp(&["kk", &ok, "--partition", "r|s"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget() {
    // The outer iteration reports its status; an inner one cannot.
    let o = flp(&["kk", &fixture("choice.flp"), "--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("iteration_budget_exhausted"));
    let o = flp(&["wf", &fixture("weighted.flp"), "--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}
