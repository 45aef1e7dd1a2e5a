use std::path::PathBuf;
use std::process::{Command, Output};

fn uasym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uasym")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("uasym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn analyze_reports_quasianalytic_rotation() {
    let o = uasym(&["analyze", &data("rotation.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("quasianalytic = true"), "{s}");
    assert!(s.contains("# seed: 0"));
}

#[test]
fn csv_rows_have_three_columns() {
    let o = uasym(&["analyze", &data("diagonal_pair.txt"), "--format", "csv", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("section,key,value"));
    for l in lines {
        assert!(l.splitn(3, ',').count() == 3, "bad row {l}");
    }
    assert!(s.contains("header,seed,5"));
    assert!(s.contains("quasi,quasianalytic,false"));
}

#[test]
fn same_seed_same_report() {
    let a = stdout(&uasym(&["analyze", &data("kernel_free.txt"), "--seed", "9"]));
    let b = stdout(&uasym(&["analyze", &data("kernel_free.txt"), "--seed", "9"]));
    assert_eq!(a, b);
}

#[test]
fn subcommands_run_on_tuple_input() {
    for cmd in ["asymptote", "spectrum", "quasi", "split", "norm-control"] {
        let o = uasym(&[cmd, &data("jordan.txt")]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
    }
}

#[test]
fn shift_model_file() {
    let o = uasym(&["analyze", &data("shift2.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("loc_deviation = 0.000000e0"));
}

#[test]
fn reproduce_examples() {
    for id in ["9", "14", "17", "23", "26"] {
        let o = uasym(&["reproduce-example", id]);
        assert_eq!(o.status.code(), Some(0), "example {id}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn unknown_example_is_input_error() {
    assert_eq!(uasym(&["reproduce-example", "99"]).status.code(), Some(1));
}

#[test]
fn malformed_input_is_input_error() {
    let p = tmp_file("bad.txt", "tuple n=1 dim=2\n1 0\n0 x\n");
    let o = uasym(&["analyze", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 3"), "{}", stdout(&o));
}

#[test]
fn non_commuting_input_is_input_error() {
    let p = tmp_file("noncomm.txt", "tuple n=2 dim=2\n0 1\n0 0\n0 0\n1 0\n");
    assert_eq!(uasym(&["analyze", &p]).status.code(), Some(1));
}

#[test]
fn unimodular_jordan_block_is_rejected() {
    let p = tmp_file("jordan_unimodular.txt", "tuple n=1 dim=2\n1 1\n0 1\n");
    let o = uasym(&["analyze", &p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nonpositive_threshold_rejected() {
    assert_eq!(uasym(&["analyze", &data("rotation.txt"), "--tol-rank", "0"]).status.code(), Some(1));
}

#[test]
fn out_directory_receives_report() {
    let dir = std::env::temp_dir().join(format!("uasym-out-{}", std::process::id()));
    let o = uasym(&["quasi", &data("rotation.txt"), "--format", "csv", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
}
