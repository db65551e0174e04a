//! End-to-end runs of the `dilators` binary: exit codes, output
//! stability, and the machine-readable counterexample blocks.

use std::collections::BTreeSet;
use std::process::{Command, Output};

use dilators::{dilator_file, Dilator, Table};

fn dilators_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilators"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn counterexample_json(out: &Output) -> serde_json::Value {
    let text = stdout(out);
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix("COUNTEREXAMPLE "))
        .expect("counterexample block present");
    serde_json::from_str(line).expect("block is JSON")
}

#[test]
fn help_succeeds_and_bad_usage_exits_two() {
    assert_eq!(dilators_cmd(&["--help"]).status.code(), Some(0));
    assert_eq!(dilators_cmd(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        dilators_cmd(&["leq1", "--dilator", "identity", "--universe", "w..3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dilators_cmd(&["trace", "--dilator", "frobnicate", "--bound", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn lawful_presentations_validate_with_exit_zero() {
    for spec in ["identity", "none", "const:w", "sum(const:1,identity)", "sigma(identity)"] {
        let out = dilators_cmd(&["validate", "--dilator", spec, "--bound", "5"]);
        assert_eq!(out.status.code(), Some(0), "{spec}: {}", stdout(&out));
    }
    for spec in ["identity", "sum(const:1,identity)", "sigma(identity)", "sigma(const:1)"] {
        let out = dilators_cmd(&["normality", "--dilator", spec, "--bound", "5"]);
        assert_eq!(out.status.code(), Some(0), "{spec}: {}", stdout(&out));
    }
    // Constants carry no normality data, which surfaces as the single
    // mu-present failure rather than a crash.
    let out = dilators_cmd(&["normality", "--dilator", "const:w", "--bound", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(counterexample_json(&out)["law"], "mu-present");
}

// A tabulated presentation whose second coface runs backwards.
fn corrupt_table() -> Dilator {
    Dilator::Table(
        Table::new(
            vec![0, 3, 6],
            vec![vec![vec![]], vec![vec![0, 2, 4], vec![5, 3, 1]]],
            vec![
                vec![],
                vec![BTreeSet::from([0]), BTreeSet::from([0]), BTreeSet::from([0])],
                vec![
                    BTreeSet::from([0]),
                    BTreeSet::from([0]),
                    BTreeSet::from([1]),
                    BTreeSet::from([1]),
                    BTreeSet::from([0]),
                    BTreeSet::from([1]),
                ],
            ],
            None,
        )
        .unwrap(),
    )
}

#[test]
fn violations_exit_one_with_a_machine_readable_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.dil");
    dilator_file::save(&corrupt_table(), &path).unwrap();
    let out = dilators_cmd(&["validate", "--dilator", path.to_str().unwrap(), "--bound", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let block = counterexample_json(&out);
    assert_eq!(block["law"], "coface-monotone");
    assert!(block["failure"]["location"].is_string());
}

#[test]
fn resemblance_tables_print_deterministically() {
    let args = ["leq1", "--dilator", "sigma(const:1)", "--universe", "0..7"];
    let first = dilators_cmd(&args);
    let second = dilators_cmd(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let table = dilators::resemblance::Leq1Table::from_tsv(&stdout(&first)).unwrap();
    assert_eq!(table.universe().len(), 7);

    let dot = dilators_cmd(&[
        "leq1",
        "--dilator",
        "identity",
        "--universe",
        "0,1,w",
        "--format",
        "dot",
    ]);
    assert!(stdout(&dot).starts_with("digraph leq1 {"));
}

#[test]
fn sampled_validation_reruns_are_byte_identical() {
    let args = [
        "validate",
        "--dilator",
        "const:w",
        "--bound",
        "3",
        "--samples",
        "40",
        "--seed",
        "7",
    ];
    let first = dilators_cmd(&args);
    let second = dilators_cmd(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let fund = [
        "fundlemma",
        "--dilator",
        "sum(const:1,identity)",
        "--samples",
        "60",
        "--seed",
        "11",
    ];
    let first = dilators_cmd(&fund);
    let second = dilators_cmd(&fund);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn collapse_tables_build_check_and_reject_mutations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("collapse.tsv");
    let out = dilators_cmd(&[
        "collapse",
        "build",
        "--dilator",
        "identity",
        "--alpha",
        "w",
        "--count",
        "6",
        "--oracle",
        "star",
        "--range",
        "0..9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let check = dilators_cmd(&[
        "collapse",
        "check",
        "--dilator",
        "identity",
        "--alpha",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
    assert!(stdout(&check).contains("valid"));

    // Swap two collapse values in the text and expect an order violation.
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let swap = |line: &str, v: &str| -> String {
        let term = line.split('\t').next().unwrap();
        format!("{term}\t{v}")
    };
    let (v2, v3) = (
        lines[2].split('\t').nth(1).unwrap().to_string(),
        lines[3].split('\t').nth(1).unwrap().to_string(),
    );
    lines[2] = swap(&lines[2], &v3);
    lines[3] = swap(&lines[3], &v2);
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();

    let check = dilators_cmd(&[
        "collapse",
        "check",
        "--dilator",
        "identity",
        "--alpha",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(check.status.code(), Some(1), "{}", stdout(&check));
    // The swap breaks the order condition (and support at the moved
    // entry); the block carries the first violation found.
    assert!(stdout(&check).contains("order violation"), "{}", stdout(&check));
    let block = counterexample_json(&check);
    assert!(block["condition"] == "order" || block["condition"] == "support");
}

#[test]
fn sigma_emits_a_loadable_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sigma.dil");
    let out = dilators_cmd(&[
        "sigma",
        "--dilator",
        "sum(const:1,identity)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let loaded = dilator_file::load(&path).unwrap();
    assert_eq!(
        loaded,
        Dilator::sigma(Dilator::sum(
            Dilator::constant(dilators::Ordinal::nat(1)),
            Dilator::identity()
        ))
    );
}

#[test]
fn compare_repr_club_and_fd_speak_the_term_language() {
    let less = dilators_cmd(&["compare", "--dilator", "identity", "(0 ; 2 ; w)", "(0 ; 5 ; w)"]);
    assert_eq!(stdout(&less).trim(), "less");
    let eq = dilators_cmd(&["compare", "--dilator", "identity", "(0 ; 2 ; w)", "(0 ; 2 ; w)"]);
    assert_eq!(stdout(&eq).trim(), "equal");

    let repr = dilators_cmd(&["repr", "--dilator", "sigma(const:1)", "6"]);
    assert_eq!(stdout(&repr).trim(), "(0 ; 3)");
    let repr = dilators_cmd(&["repr", "--dilator", "identity", "(0 ; 4 ; w)"]);
    assert_eq!(stdout(&repr).trim(), "(0 ; 4)");

    let club = dilators_cmd(&[
        "club",
        "--dilator",
        "sum(const:1,identity)",
        "--universe",
        "0,1,2,3,w",
        "--element",
        "<1 ;>",
    ]);
    assert_eq!(club.status.code(), Some(0));
    let text = stdout(&club);
    assert!(text.contains("w\tin"), "{text}");
    assert!(text.contains("0\tout"), "{text}");

    let fd = dilators_cmd(&[
        "fd",
        "--dilator",
        "sigma(identity)",
        "--universe",
        "0..9",
        "--rho",
        "<2 ; 3>",
        "--eta",
        "2",
    ]);
    assert_eq!(fd.status.code(), Some(0), "{}", stdout(&fd));
    assert_eq!(stdout(&fd).lines().count(), 9);
}
