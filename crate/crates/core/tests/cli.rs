use std::path::PathBuf;
use std::process::{Command, Output};

fn hindman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hindman")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

fn coloring_file(name: &str, digits: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hindman-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, format!("colors 2\n{digits}\n")).unwrap();
    path
}

#[test]
fn finite_sums() {
    let o = hindman(&["fs", "--set", "1,2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "FS"), Some("0,1,2,3,4,5,6,7"));
    assert_eq!(value(&out, "NS"), Some("1,2,3,4,5,6,7"));
}

#[test]
fn witness_round_trips_into_verify() {
    let path = coloring_file("parity.txt", "121212121212");
    let path = path.to_str().unwrap();
    let o = hindman(&["hindman", "--coloring", path, "--size", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let (w, c) = (value(&out, "witness").unwrap(), value(&out, "color").unwrap());
    assert_eq!((w, c), ("2,4", "2"));
    assert_eq!(out.matches("\ndomain: ").count(), 1);

    let v = hindman(&["verify", "--coloring", path, "--witness", w, "--color", c]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "verified"), Some("NS={2,4,6} ⊆ C_2"));

    let v = hindman(&["verify", "--coloring", path, "--witness", "2,3", "--color", "2"]);
    assert_eq!(v.status.code(), Some(2));
}

#[test]
fn witness_free_coloring_exits_2() {
    let path = coloring_file("ws8.txt", "11212221");
    let o = hindman(&["hindman", "--coloring", path.to_str().unwrap(), "--size", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert_eq!(value(&out, "result"), Some("NoWitnessAtBound"));
    assert_eq!(value(&out, "exhaustive"), Some("true"));
}

#[test]
fn decide_sides() {
    let o = hindman(&["decide", "--pred", "n % 2 == 0", "--size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "side"), Some("A"));
    assert_eq!(value(&out, "witness"), Some("2,4,6"));

    let o = hindman(&["decide", "--pred", "n % 2 == 1", "--size", "2"]);
    assert_eq!(value(&stdout(&o), "side"), Some("A^c"));
}

#[test]
fn inconclusive_exits_3() {
    let o = hindman(&["decide", "--pred", "n >= 8109 && n <= 10832", "--size", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(value(&stdout(&o), "result"), Some("Inconclusive"));
}

#[test]
fn input_errors_exit_4() {
    let o = hindman(&["decide", "--pred", "n %%", "--size", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 4"));
    assert_eq!(hindman(&["check-family", "--builtin", "bogus"]).status.code(), Some(4));
    assert_eq!(hindman(&["hindman", "--coloring", "/nonexistent/c.txt", "--size", "2"]).status.code(), Some(4));
    assert_eq!(hindman(&["--help"]).status.code(), Some(0));
}

#[test]
fn minbound() {
    let o = hindman(&["oracle-minbound", "--colors", "2", "--size", "2", "--max", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let o = hindman(&["oracle-minbound", "--colors", "2", "--size", "2", "--max", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["decide", "--pred", "(n + 2) % 8 >= 4", "--size", "4"];
    let first = hindman(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, hindman(&args).stdout);
    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "4"]);
    assert_eq!(first.stdout, hindman(&jobs).stdout);
}
