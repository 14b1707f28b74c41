//! End-to-end tests of the binary: worked examples, exit codes, and
//! byte-identical outputs across repeated runs with the same seed.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tandemdup"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("tandemdup-test-{}-{name}", std::process::id()));
    p
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let p = temp_path(name);
    std::fs::write(&p, contents).unwrap();
    p
}

const FOUR_READS: &str =
    "# q=3 k=2\n10101012122222222\n10101010122222222\n10101012222222222\n10101012121222222\n";
const TWO_READS: &str = "# q=3 k=2\n10101012122222222\n10101010122222222\n";

#[test]
fn decode_worked_example() {
    let reads = write_temp("ex1.txt", FOUR_READS);
    let out = run(&[
        "decode",
        "--reads",
        reads.to_str().unwrap(),
        "--t",
        "3",
        "--m",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("root=10122"));
    assert!(text.contains("required_reads=4"));
    assert!(text.contains("guaranteed=true"));
    assert!(text.contains("list.0=10101012222"));
    assert!(text.contains("list.1=10101222222"));
    assert!(text.contains("list_size=2"));
    // Timing goes to stderr so stdout stays reproducible.
    assert!(!text.contains("elapsed"));
}

#[test]
fn decode_ecc_worked_example_and_alternate() {
    let reads = write_temp("ex2.txt", TWO_READS);
    let code = write_temp(
        "cb1.txt",
        "# root=10122 q=3 k=2 w=2 r=2 d=2 typ=0\n2,0,0\n0,2,0\n0,0,2\n",
    );
    let out = run(&[
        "decode",
        "--reads",
        reads.to_str().unwrap(),
        "--t",
        "4",
        "--m",
        "3",
        "--ecc",
        code.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("list.0=101010122"));
    assert!(text.contains("list.1=101222222"));

    let alt = write_temp(
        "cb2.txt",
        "# root=10122 q=3 k=2 w=2 r=2 d=2\n2,0,0\n0,1,1\n",
    );
    let out = run(&[
        "decode",
        "--reads",
        reads.to_str().unwrap(),
        "--t",
        "4",
        "--m",
        "3",
        "--ecc",
        alt.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("list_size=1"));
    assert!(text.contains("list.0=101010122"));
    assert!(text.contains("discarded=2"));
}

#[test]
fn simulate_then_decode_recovers_message() {
    let reads_path = temp_path("roundtrip.txt");
    let out = run(&[
        "simulate",
        "--q",
        "3",
        "--k",
        "2",
        "--message",
        "2101121",
        "--t",
        "2",
        "--count",
        "6",
        "--seed",
        "42",
        "--out",
        reads_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "decode",
        "--reads",
        reads_path.to_str().unwrap(),
        "--t",
        "2",
        "--m",
        "4",
        "--filter",
        "all",
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("=2101121"));
}

#[test]
fn exit_codes_are_distinct() {
    // 2: infeasible simulate request (only 3 distinct single-step reads exist).
    let out = run(&[
        "simulate",
        "--q",
        "3",
        "--k",
        "2",
        "--message",
        "10122",
        "--t",
        "1",
        "--count",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // 2: empty reads file.
    let empty = write_temp("empty.txt", "# q=3 k=2\n");
    let out = run(&[
        "decode",
        "--reads",
        empty.to_str().unwrap(),
        "--t",
        "1",
        "--m",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // 3: reads from different cones.
    let bad = write_temp("bad.txt", "# q=3 k=2\n1010122\n2102121\n");
    let out = run(&[
        "decode",
        "--reads",
        bad.to_str().unwrap(),
        "--t",
        "1",
        "--m",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // 4: same cone but no ancestor at the requested level.
    let disjoint = write_temp("disjoint.txt", "# q=3 k=2\n101010122\n101222222\n");
    let out = run(&[
        "decode",
        "--reads",
        disjoint.to_str().unwrap(),
        "--t",
        "1",
        "--m",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(4));

    // 5: codebook anchored in a different cone.
    let reads = write_temp("ex2b.txt", TWO_READS);
    let foreign = write_temp(
        "foreign.txt",
        "# root=21011 q=3 k=2 w=2 r=2 d=2\n2,0,0\n0,0,2\n",
    );
    let out = run(&[
        "decode",
        "--reads",
        reads.to_str().unwrap(),
        "--t",
        "4",
        "--m",
        "3",
        "--ecc",
        foreign.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn codebook_generation_matches_greedy() {
    let out = run(&[
        "codebook", "--q", "3", "--k", "2", "--root", "10122", "--r", "2", "--d", "2",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out),
        "# root=10122 q=3 k=2 w=2 r=2 d=2 typ=0\n0,0,2\n0,2,0\n2,0,0\n"
    );
}

#[test]
fn quantities_match_named_values() {
    let out = run(&["mu", "--w", "2", "--r", "3", "--s", "1"]);
    assert_eq!(stdout_of(&out), "mu=3\n");
    let out = run(&["mu", "--w", "2", "--r", "2", "--s", "4", "--d", "2"]);
    assert_eq!(stdout_of(&out), "mu=3\n");
    let out = run(&["sigma", "--m", "4", "--w", "2", "--r", "3", "--exhaustive"]);
    assert_eq!(stdout_of(&out), "sigma=2\n");
    let out = run(&[
        "uncertainty",
        "--w",
        "2",
        "--r",
        "2",
        "--t",
        "4",
        "--m",
        "3",
        "--d",
        "2",
    ]);
    assert!(stdout_of(&out).contains("required_reads=2"));
    let out = run(&["typical", "--q", "3", "--k", "2", "--string", "10101012222"]);
    let text = stdout_of(&out);
    assert!(text.contains("typical=true"));
    assert!(text.contains("w=2"));
    assert!(text.contains("r=3"));
}

#[test]
fn tables_regime_marks_and_monotone_reads() {
    let out = run(&[
        "tables", "--q", "3", "--k", "2", "--n", "40", "--t", "2", "--m", "2,3,4,5", "--d", "0",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut required: Vec<u64> = Vec::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 11);
        required.push(cols[9].parse().unwrap());
    }
    assert_eq!(required.len(), 4);
    // The read requirement never grows with the list budget m.
    for pair in required.windows(2) {
        assert!(
            pair[0] >= pair[1],
            "required reads increased with m: {required:?}"
        );
    }

    // Matching the design distance to the noise level pins the uncertainty
    // at one: two reads always suffice for a unique answer.
    let out = run(&[
        "tables", "--q", "3", "--k", "2", "--n", "1000", "--t", "2", "--m", "2", "--d", "2",
    ]);
    let text = stdout_of(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[8], "1", "N column at d=t, m=2");
    assert_eq!(row[9], "2", "required reads at d=t, m=2");
    assert_eq!(row[7], "0", "exponent at d=t, m=2");
}

#[test]
fn verify_passes_and_fault_injection_trips() {
    let out = run(&["verify", "--seed", "5"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("verify: PASS"));
    assert!(text.contains("adjudication mu(2,3,2): brute-force value 5"));
    assert!(text.contains("adjudication worked-example list"));

    let out = run(&["verify", "--seed", "5", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("check mu-vs-exhaustive: FAIL mu(2,2,1)"));
    assert!(text.contains("verify: FAIL"));
}

/// Criterion 10: byte-identical stdout across two runs of the same seeded
/// configuration, for the verify sweep and for every report-producing
/// command.
#[test]
fn criterion_10_determinism() {
    let reads = write_temp("det-reads.txt", FOUR_READS);
    let code = write_temp(
        "det-code.txt",
        "# root=10122 q=3 k=2 w=2 r=2 d=2\n2,0,0\n0,2,0\n0,0,2\n",
    );
    let two = write_temp("det-two.txt", TWO_READS);
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--seed", "9"],
        vec![
            "simulate",
            "--q",
            "2",
            "--k",
            "2",
            "--message",
            "01101001",
            "--t",
            "3",
            "--count",
            "10",
            "--seed",
            "123",
        ],
        vec![
            "decode",
            "--reads",
            reads.to_str().unwrap(),
            "--t",
            "3",
            "--m",
            "4",
            "--json",
        ],
        vec![
            "decode",
            "--reads",
            two.to_str().unwrap(),
            "--t",
            "4",
            "--m",
            "3",
            "--ecc",
            code.to_str().unwrap(),
        ],
        vec![
            "tables", "--q", "2", "--k", "2", "--n", "30,1000", "--t", "2", "--m", "2,3", "--d",
            "0,1,2",
        ],
        vec![
            "typical", "--q", "2", "--k", "2", "--sample", "2000", "--n", "120", "--seed", "77",
        ],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?} failed: {}", stdout_of(&a));
        assert_eq!(
            a.stdout, b.stdout,
            "stdout differs across runs for {args:?}"
        );
    }
    println!("criterion 10: PASS byte-identical outputs");
}
