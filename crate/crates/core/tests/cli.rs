use std::path::Path;
use std::process::{Command, Output};

use qlab::report::{Format, RawTable};

fn qlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlab")).args(args).output().expect("binary runs")
}

fn qlab_threads(args: &[&str], threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ball_lists_seventeen_elements() {
    let o = qlab(&["ball", "--group", "F2", "--radius", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let t = RawTable::parse(&stdout(&o), Format::Csv).unwrap();
    assert_eq!(t.rows.len(), 17);
    assert_eq!(t.columns, vec!["length", "element"]);
}

#[test]
fn exit_statuses() {
    assert_eq!(qlab(&["verify-roe", "--group", "Z^1", "--trials", "20"]).status.code(), Some(0));
    // the weighted-norm bound fails for the default operator
    assert_eq!(qlab(&["neumann", "--group", "Z^1"]).status.code(), Some(1));
    assert_eq!(qlab(&["ball", "--group", "Q8", "--radius", "2"]).status.code(), Some(2));
    assert_eq!(qlab(&["ball", "--radius", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(qlab(&["verify-roe", "--radii", "0.5..2"]).status.code(), Some(2));
    assert_eq!(
        qlab(&["vankampen", "--presentation", "<a,b|[a,b]>", "--word", "[a^3,b^3]", "--max-area", "4"]).status.code(),
        Some(3)
    );
    assert_eq!(qlab(&["dehn", "--grid", "3x3", "--kmax", "6", "--state-cap", "100"]).status.code(), Some(3));
    let capped = Command::new(env!("CARGO_BIN_EXE_qlab"))
        .args(["ball", "--group", "F3", "--radius", "6"])
        .env("QLAB_BALL_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(qlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn thread_count_does_not_change_output() {
    let cases: [&[&str]; 4] = [
        &["verify-roe", "--group", "F2", "--trials", "200", "--p", "1.5", "--seed", "9"],
        &["chi", "--group", "Z^1", "--degree", "1..3", "--trials", "40", "--seed", "9", "--format", "json"],
        &["kernel-est", "--group", "Z^2", "--trials", "100", "--seed", "9"],
        &["young", "--group", "F2", "--trials", "40", "--seed", "9", "--format", "json"],
    ];
    for args in cases {
        let one = qlab_threads(args, 1);
        let four = qlab_threads(args, 4);
        assert!(!one.stdout.is_empty());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn out_files_and_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("kernel.json");
    std::fs::write(
        &kernel,
        r#"{ "group": "Z^1", "entries": [ { "word": "", "re": 1.0, "im": 0.0 }, { "word": "e1", "re": -0.02, "im": 0.0 }, { "word": "e1^-1", "re": -0.02, "im": 0.0 } ] }"#,
    )
    .unwrap();
    let csv = dir.path().join("opnorm.csv");
    let json = dir.path().join("opnorm.json");
    let k = kernel.to_str().unwrap();
    for (path, format) in [(&csv, "csv"), (&json, "json")] {
        let o = qlab(&["opnorm", "--group", "Z^1", "--kernel", k, "--p", "2", "--out", path.to_str().unwrap(), "--format", format]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
    let a = read(&csv, Format::Csv);
    let b = read(&json, Format::Json);
    assert_eq!(a.columns, b.columns);
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.rows.len(), 1);

    let complex = dir.path().join("disc.json");
    std::fs::write(&complex, "[[0,1,2],[0,2,3],[0,3,4]]").unwrap();
    let o = qlab(&["dehn", "--complex", complex.to_str().unwrap(), "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let t = RawTable::parse(&stdout(&o), Format::Csv).unwrap();
    assert_eq!(t.rows.len(), 6);

    std::fs::write(dir.path().join("broken.json"), "{").unwrap();
    let bad = qlab(&["opnorm", "--kernel", dir.path().join("broken.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

fn read(path: &Path, format: Format) -> RawTable {
    RawTable::parse(&std::fs::read_to_string(path).unwrap(), format).unwrap()
}
