use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use atlsat::report::BenchReport;
use atlsat_core::formula::parse_formula;
use atlsat_core::mas::Witness;
use atlsat_core::mc::check_validity;

const EXAMPLE: &str = "<<0,1>> F (p0 & !p1 & !p2) & <<0>> F (!p0 & p1 & !p2) & <<0,1>> X (!p0 & !p1 & p2)";

fn atlsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atlsat")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let unsat = atlsat(&["check", "-f", "p0 & !p0", "--locals", "2,2", "--props", "1"]);
    assert_eq!(code(&unsat), 20);
    assert_eq!(stdout(&unsat).trim(), "UNSAT");

    let sat = atlsat(&["check", "-f", EXAMPLE, "--locals", "3,2", "--props", "3"]);
    assert_eq!(code(&sat), 10);
    assert!(stdout(&sat).starts_with("SAT\n"));

    let bad = atlsat(&["check", "-f", "p0 &", "--locals", "2", "--props", "1"]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));

    let no_shape = atlsat(&["check", "-f", "p0"]);
    assert_eq!(code(&no_shape), 1);

    let out_of_range = atlsat(&["check", "-f", "p3", "--locals", "2", "--props", "1"]);
    assert_eq!(code(&out_of_range), 1);
}

#[test]
fn witness_round_trip_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("w.json");
    let out =
        atlsat(&["check", "-f", EXAMPLE, "--locals", "3,2", "--props", "3", "--out-json", path(&json), "--verify"]);
    assert_eq!(code(&out), 10);
    assert!(stdout(&out).contains("verified"));

    let m = Witness::from_json(&fs::read_to_string(&json).unwrap()).unwrap().to_model().unwrap();
    assert!(check_validity(&m, &parse_formula(EXAMPLE).unwrap()).unwrap());

    let valid = atlsat(&["verify", "--witness", path(&json), "-f", EXAMPLE]);
    assert_eq!((code(&valid), stdout(&valid).trim()), (10, "VALID"));
    let invalid = atlsat(&["verify", "--witness", path(&json), "-f", "!p0 & p0"]);
    assert_eq!((code(&invalid), stdout(&invalid).trim()), (20, "INVALID"));
}

#[test]
fn dot_output_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("w.dot");
    let out = atlsat(&["check", "-f", EXAMPLE, "--locals", "3,2", "--props", "3", "--out-dot", path(&dot)]);
    assert_eq!(code(&out), 10);
    let text = fs::read_to_string(&dot).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("digraph ") && lines[0].ends_with('{'));
    assert_eq!(*lines.last().unwrap(), "}");
    let (mut nodes, mut edges) = (0, 0);
    for line in &lines[1..lines.len() - 1] {
        let line = line.trim();
        assert!(line.ends_with(';'), "unterminated statement {line:?}");
        if line.contains("->") {
            edges += 1;
        } else if line.starts_with('s') {
            nodes += 1;
        }
    }
    // 3 x 2 local states
    assert_eq!(nodes, 6);
    assert!(edges >= nodes, "every state has a successor");
}

#[test]
fn requirements_file_fixes_cells() {
    let dir = tempfile::tempdir().unwrap();
    let req = dir.path().join("req.json");
    // p0 forced false in the initial state makes p0 unsatisfiable
    fs::write(&req, r#"{"agents":[{"locals":2},{"locals":2}],"props":1,"cv":[[0,0,0]]}"#).unwrap();
    assert_eq!(code(&atlsat(&["check", "-f", "p0", "--req", path(&req)])), 20);
    assert_eq!(code(&atlsat(&["check", "-f", "!p0", "--req", path(&req)])), 10);
    fs::write(&req, r#"{"agents":[{"locals":2}],"props":1,"cp":[[0,0,5,1]]}"#).unwrap();
    assert_eq!(code(&atlsat(&["check", "-f", "p0", "--req", path(&req)])), 1);
}

#[test]
fn bench_json_matches_table() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    let json = dir.path().join("bench.json");
    fs::write(&list, "# three small cases\np0\n\np0 & !p0\n<<0>> X p0 & <<0>> X !p0\n").unwrap();
    let out = atlsat(&["bench", "--formulas", path(&list), "--locals", "2,2", "--props", "1", "--json", path(&json)]);
    assert_eq!(code(&out), 0);
    let report = BenchReport::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert_eq!(report.table(), stdout(&out));
    let verdicts: Vec<&str> = report.rows.iter().map(|r| r.verdict.as_str()).collect();
    assert_eq!(verdicts, ["SAT", "UNSAT", "SAT"]);
    assert!(report.rows.iter().all(|r| r.time_seconds.is_some()));
}

#[test]
fn empty_formula_list_gives_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("empty.txt");
    fs::write(&list, "# nothing here\n\n").unwrap();
    let out = atlsat(&["bench", "--formulas", path(&list), "--locals", "2", "--props", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "header only: {text:?}");
}

#[test]
fn bench_reports_timeouts() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    let json = dir.path().join("bench.json");
    fs::write(&list, format!("{EXAMPLE}\n")).unwrap();
    let out = atlsat(&[
        "bench",
        "--formulas",
        path(&list),
        "--locals",
        "3,2",
        "--props",
        "3",
        "--timeout",
        "0",
        "--json",
        path(&json),
    ]);
    assert_eq!(code(&out), 0);
    let report = BenchReport::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.rows[0].verdict, "TIMEOUT");
    assert!(stdout(&out).contains("TIMEOUT"));

    let check = atlsat(&["check", "-f", EXAMPLE, "--locals", "3,2", "--props", "3", "--timeout", "0"]);
    assert_eq!((code(&check), stdout(&check).trim()), (0, "TIMEOUT"));
}

#[test]
fn omit_timing_makes_bench_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    fs::write(&list, format!("{EXAMPLE}\n<<0>> G p0 & <<1>> F p1\n")).unwrap();
    let run = |name: &str| {
        let json = dir.path().join(name);
        let out = atlsat(&[
            "bench",
            "--formulas",
            path(&list),
            "--locals",
            "3,2",
            "--props",
            "3",
            "--omit-timing",
            "--json",
            path(&json),
        ]);
        assert_eq!(code(&out), 0);
        (stdout(&out), fs::read(&json).unwrap())
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn generate_is_deterministic_and_parsable() {
    let args =
        ["generate", "--agents", "3", "--groups", "4", "--props", "2", "--depth", "4", "--seed", "7", "--count", "25"];
    let a = atlsat(&args);
    let b = atlsat(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 25);
    for line in text.lines() {
        let f = parse_formula(line).unwrap();
        assert_eq!(f.strategic_depth(), 4, "{line}");
    }

    let pooled = atlsat(&["generate", "--depth", "3", "--pool", "0;1;0,1;2", "--connectives", "5", "--count", "3"]);
    assert_eq!(code(&pooled), 0);
    for line in stdout(&pooled).lines() {
        let f = parse_formula(line).unwrap();
        assert_eq!((f.strategic_depth(), f.connective_count()), (3, 5), "{line}");
    }

    assert_eq!(code(&atlsat(&["generate", "--pool", "0;x"])), 1);
}
