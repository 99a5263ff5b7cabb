use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ccmsp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccmsp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_reaches_the_closed_form_optimum() {
    let tmp = tempfile::tempdir().unwrap();
    let inst =
        "variant = CCMSP1\nk = 4\nsizes = 10 10 10 10\na = 100\nd = 0.01\nc = 0.01\ngamma = 0.05\n";
    fs::write(tmp.path().join("p.inst"), inst).unwrap();
    let exact = stdout(&ccmsp(tmp.path(), &["exact", "--instance", "p.inst"]));
    let value = exact
        .lines()
        .find_map(|l| l.strip_prefix("value = "))
        .unwrap()
        .to_string();
    let solved = stdout(&ccmsp(
        tmp.path(),
        &[
            "solve",
            "--instance",
            "p.inst",
            "--algo",
            "rls",
            "--seed",
            "3",
        ],
    ));
    assert!(solved.contains("stop_reason = target"), "{solved}");
    assert!(
        solved.contains(&format!("final_fitness = {value}")),
        "{solved}\n{exact}"
    );
}

#[test]
fn exact_refuses_large_even_instances() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = "variant = CCMSP2PLUS\nsizes = 10 20\na = 100\nd = 0.01\nc = 1e-7\ngamma = 0.05\n";
    fs::write(tmp.path().join("e.inst"), inst).unwrap();
    let out = ccmsp(tmp.path(), &["exact", "--instance", "e.inst"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exhaustive-search limit"));
}

#[test]
fn reduce_reports_the_decision() {
    let tmp = tempfile::tempdir().unwrap();
    let yes = stdout(&ccmsp(
        tmp.path(),
        &["reduce", "--values", "1", "1", "2", "2"],
    ));
    assert!(yes.contains("sizes = 3 3 5 5"));
    assert!(yes.contains("# balanced_partition = true"));
    let no = stdout(&ccmsp(
        tmp.path(),
        &["reduce", "--values", "1", "1", "1", "3"],
    ));
    assert!(no.contains("sizes = 3 3 3 7"));
    assert!(no.contains("# balanced_partition = false"));
    assert!(!ccmsp(tmp.path(), &["reduce", "--values", "1", "2", "3"])
        .status
        .success());
}

#[test]
fn summarize_rejects_mixed_campaigns() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("a.conf"),
        "variant = CCMSP1\nk = 4\nm = 10\nc = 0.01\nrepetitions = 2\n",
    )
    .unwrap();
    fs::write(
        dir.join("b.conf"),
        "variant = CCMSP1\nk = 8\nm = 10\nc = 0.01\nrepetitions = 2\ncap = 50\n",
    )
    .unwrap();
    stdout(&ccmsp(
        dir,
        &["campaign", "--config", "a.conf", "--out", "a"],
    ));
    stdout(&ccmsp(
        dir,
        &["campaign", "--config", "b.conf", "--out", "b"],
    ));
    let out = ccmsp(
        dir,
        &[
            "summarize",
            "--results",
            "a/results.csv",
            "b/results.csv",
            "--out",
            "s",
        ],
    );
    assert!(!out.status.success());
    stdout(&ccmsp(
        dir,
        &["summarize", "--results", "a/results.csv", "--out", "s"],
    ));
    let summary = fs::read_to_string(dir.join("s/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn campaign_with_zero_cap_is_all_censored() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("z.conf"),
        "variant = CCMSP2PLUS\nk = 4\nm = 10\nrepetitions = 1\ncap = 0\n",
    )
    .unwrap();
    stdout(&ccmsp(
        dir,
        &["campaign", "--config", "z.conf", "--out", "z"],
    ));
    let results = fs::read_to_string(dir.join("z/results.csv")).unwrap();
    let rows: Vec<&str> = results.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!((fields[11], fields[13]), ("0", "cap"), "{row}");
    }
}
