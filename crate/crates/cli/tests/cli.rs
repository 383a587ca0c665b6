use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use std::io::Write;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn fixture(name: &str) -> String {
    dir().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn pne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pne")).args(args).current_dir(dir()).output().expect("spawn pne")
}

fn pne_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pne"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn pne");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Golden cases: (golden file, arguments). Paths are relative to `tests/`.
const GOLDEN: &[(&str, &[&str])] = &[
    ("coord2.decide", &["decide", "fixtures/coord2.game"]),
    ("pennies.decide", &["decide", "fixtures/pennies.game"]),
    ("path3.count", &["count", "fixtures/path3.game"]),
    ("pennies.count", &["count", "fixtures/pennies.game"]),
    ("coord2.enumerate", &["enumerate", "fixtures/coord2.game"]),
    ("path3.enumerate", &["enumerate", "fixtures/path3.game", "--limit", "unbounded"]),
    ("path3.marginals", &["marginals", "fixtures/path3.game"]),
    ("path3.potentials", &["decide", "fixtures/path3.game", "--dump-potentials"]),
    ("pennies.map", &["map", "fixtures/pennies.game", "--epsilon", "0.5"]),
    ("path3.map", &["map", "fixtures/path3.game", "--dump-potentials"]),
    ("solo.sample", &["sample", "fixtures/solo.game", "--epsilon", "0.1", "--steps", "5000", "--seed", "3"]),
    ("coord2.sample", &["sample", "fixtures/coord2.game", "--chains", "3", "--steps", "1000"]),
    ("pennies.anneal", &["anneal", "fixtures/pennies.game", "--seed", "11"]),
    ("path3.lift-td", &["count", "fixtures/path3.game", "--decomposition", "fixtures/path3.td"]),
    ("path3.lift-htd", &["count", "fixtures/path3.game", "--decomposition", "fixtures/path3.htd"]),
    ("path3.validate", &["validate", "fixtures/path3.game"]),
    ("path3.validate-td", &["validate", "fixtures/path3.game", "--decomposition", "fixtures/path3.td"]),
    ("path3.validate-htd", &["validate", "fixtures/path3.game", "--decomposition", "fixtures/path3.htd"]),
    ("path3.validate-broken", &["validate", "fixtures/path3.game", "--decomposition", "fixtures/path3-broken.td"]),
    ("tree.gen", &["gen", "--family", "tree", "--players", "5", "--seed", "4"]),
];

/// Set `PNE_BLESS=1` to rewrite the golden files from the current binary.
#[test]
fn golden_outputs_are_byte_identical() {
    let bless = std::env::var_os("PNE_BLESS").is_some();
    for (name, args) in GOLDEN {
        let first = pne(args);
        let second = pne(args);
        assert_eq!(first.stdout, second.stdout, "{name}: output differs between runs");
        let path = dir().join("golden").join(format!("{name}.out"));
        if bless {
            std::fs::write(&path, &first.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(stdout(&first), String::from_utf8(expected).unwrap(), "{name}");
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["decide", "fixtures/coord2.game"], 0),
        (&["decide", "fixtures/pennies.game"], 1),
        (&["count", "fixtures/pennies.game"], 0),
        (&["validate", "fixtures/path3.game", "--decomposition", "fixtures/path3-broken.td"], 1),
        (&["count", "fixtures/path3.game", "--decomposition", "fixtures/path3-broken.td"], 2),
        (&["count", "fixtures/arity.game"], 2),
        (&["count", "fixtures/missing.game"], 2),
        (&["count", "fixtures/path3.game", "--no-such-flag"], 2),
        (&["count", "fixtures/path3.game", "--strategy", "lift-tree-decomposition"], 2),
        (
            &[
                "count",
                "fixtures/path3.game",
                "--strategy",
                "triangulate-primal",
                "--decomposition",
                "fixtures/path3.td",
            ],
            2,
        ),
        (
            &[
                "count",
                "fixtures/path3.game",
                "--strategy",
                "lift-hypertree-decomposition",
                "--decomposition",
                "fixtures/path3.td",
            ],
            2,
        ),
        (&["map", "fixtures/path3.game", "--epsilon", "1"], 2),
        (&["sample", "fixtures/path3.game", "--epsilon", "0"], 2),
        (&["anneal", "fixtures/path3.game", "--decay", "1.5"], 2),
        (&["gen", "--family", "cycle", "--min-strategies", "3", "--max-strategies", "2"], 2),
        (&["bogus"], 2),
        (&["--help"], 0),
        (&["--version"], 0),
    ];
    for (args, code) in cases {
        let out = pne(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if *code == 2 {
            assert!(out.stdout.is_empty(), "{args:?} wrote to stdout on error");
            assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
        }
    }
}

#[test]
fn diagnostics_name_file_and_line() {
    let out = pne(&["count", "fixtures/arity.game"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("arity.game: line 5: payoff table for player 1 has 3 entries, expected 4"), "{err}");
}

#[test]
fn stdin_matches_file_input() {
    let text = std::fs::read(fixture("path3.game")).unwrap();
    let piped = pne_stdin(&["enumerate", "-"], &text);
    let file = pne(&["enumerate", "fixtures/path3.game"]);
    assert_eq!(piped.status.code(), Some(0));
    assert_eq!(piped.stdout, file.stdout);
}

#[test]
fn sequential_flag_does_not_change_results() {
    for args in [
        &["enumerate", "fixtures/path3.game"][..],
        &["marginals", "fixtures/path3.game"],
        &["map", "fixtures/coord2.game"],
        &["sample", "fixtures/coord2.game", "--chains", "4", "--steps", "500"],
        &["anneal", "fixtures/path3.game", "--chains", "4"],
    ] {
        let mut seq = args.to_vec();
        seq.push("--sequential");
        assert_eq!(pne(args).stdout, pne(&seq).stdout, "{args:?}");
    }
}

#[test]
fn timings_are_opt_in() {
    let plain = stdout(&pne(&["count", "fixtures/path3.game"]));
    assert!(!plain.contains("\"timings\""));
    let timed = stdout(&pne(&["count", "fixtures/path3.game", "--timings"]));
    let last = timed.lines().last().unwrap();
    assert!(last.starts_with(r#"{"type":"timings","stages":[["structure","#), "{last}");
}

#[test]
fn generated_games_round_trip_through_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    for (family, players) in [("tree", "9"), ("cycle", "6"), ("grid", "6"), ("random-bounded-degree", "7")] {
        let g = pne(&["gen", "--family", family, "--players", players, "--seed", "5", "--max-strategies", "3"]);
        assert_eq!(g.status.code(), Some(0));
        let path = dir.path().join(format!("{family}.game"));
        std::fs::write(&path, &g.stdout).unwrap();
        let p = path.to_str().unwrap();
        let count = stdout(&pne(&["count", p]));
        let listed = stdout(&pne(&["enumerate", p, "--limit", "unbounded"]));
        let n: usize = listed.lines().filter(|l| l.contains("\"type\":\"equilibrium\"")).count();
        assert!(count.contains(&format!("\"count\":\"{n}\"")), "{family}: {count}");
        let via_triangulation = stdout(&pne(&["count", p, "--strategy", "triangulate-primal"]));
        assert!(via_triangulation.contains(&format!("\"count\":\"{n}\"")), "{family}");
    }
}
