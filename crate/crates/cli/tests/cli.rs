use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_treemine");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn sorted_lines(s: &str) -> Vec<String> {
    let mut v: Vec<String> = s.lines().map(str::to_string).collect();
    v.sort();
    v
}

#[test]
fn mine_closed_two_paths() {
    let dir = TempDir::new().unwrap();
    let d = file(&dir, "d.trees", "((()))\n((()()))\n");
    let o = run(&[
        "mine",
        "closed",
        "--input",
        d.to_str().unwrap(),
        "--theta",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "((()))\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("solutions=1"));
}

#[test]
fn oracle_mis_golden() {
    let dir = TempDir::new().unwrap();
    let h = file(&dir, "h.hg", "4 2\n1 2\n3 4\n");
    let o = run(&["oracle", "mis", "--input", h.to_str().unwrap()]);
    assert_eq!(stdout(&o), "1 3\n1 4\n2 3\n2 4\n");
}

#[test]
fn iso_golden() {
    let o = run(&[
        "iso",
        "--pattern",
        "(())",
        "--target",
        "((()))",
        "--mode",
        "unordered",
    ]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "true\n"));
    let o = run(&[
        "iso",
        "--pattern",
        "((())())",
        "--target",
        "(()(()))",
        "--mode",
        "ordered",
    ]);
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn canon_and_mct() {
    let o = run(&["canon", "--pattern", "(()(()))"]);
    assert_eq!(stdout(&o), "((())())\n");
    let o = run_stdin(&["mct"], "((()))\n(()(()))\n");
    assert_eq!(stdout(&o), "((()))\n");
    // A common star that does not fit under the signature meet.
    let o = run_stdin(&["mct"], "((()()))\n((())(()))\n");
    assert_eq!(stdout(&o), "((()))\n(()())\n");
}

#[test]
fn miner_and_oracle_agree_and_round_trip() {
    let data = [
        "((())()())\n((())(())()())\n((()()())(()()))\n",
        "(()()())\n((()()))\n()\n((())(()))\n",
        "((()()()())(()))\n((()())(()())())\n((()()()))\n",
    ];
    for text in data {
        for theta in ["1", "2", "3"] {
            let mined = run_stdin(&["mine", "closed", "--theta", theta], text);
            let brute = run_stdin(&["oracle", "closed", "--theta", theta], text);
            assert_eq!(mined.status.code(), Some(0));
            assert_eq!(sorted_lines(&stdout(&mined)), sorted_lines(&stdout(&brute)));
            let again = run_stdin(&["mine", "closed", "--theta", theta], text);
            assert_eq!(stdout(&mined), stdout(&again));

            let dir = TempDir::new().unwrap();
            let d = file(&dir, "d.trees", text);
            let sup = run_stdin(
                &["support", "--input", d.to_str().unwrap()],
                &stdout(&mined),
            );
            assert_eq!(sup.status.code(), Some(0));
            for line in stdout(&sup).lines() {
                let count: usize = line.split(' ').nth(1).unwrap().parse().unwrap();
                assert!(count >= theta.parse().unwrap());
            }
        }
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    // 2: parse errors, unknown flags, missing files.
    let o = run_stdin(&["mine", "closed"], "(()\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(run(&["mine", "closed", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["canon", "--input", "/nonexistent/x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run_stdin(&["mine", "closed", "--theta", "0"], "()\n")
            .status
            .code(),
        Some(2)
    );
    // 3: height bound, universal vertex, (3,4) form.
    let o = run_stdin(&["mine", "closed"], "()\n(((())))\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tree 1"));
    let h = file(&dir, "u.hg", "3 2\n1 2\n1 3\n");
    assert_eq!(
        run(&["gen", "dual", "--input", h.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let f = file(&dir, "bad.cnf", "p cnf 1 5\n1 0\n1 0\n1 0\n1 0\n1 0\n");
    assert_eq!(
        run(&["gen", "sat", "--input", f.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    // 4: size guard.
    let big = format!("({})\n", "(())".repeat(24));
    let o = run_stdin(&["oracle", "frequent", "--mode", "ordered"], &big);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn closed_pipe_exits_cleanly() {
    let mut child = Command::new(BIN)
        .args(["mine", "closed"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"((()()())(()))\n((()())(()()))\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(!err.contains("panicked"), "{err}");
    assert!(err.contains("stopped_early=true"), "{err}");
}

#[test]
fn limit_stops_early() {
    let o = run_stdin(
        &["mine", "closed", "--limit", "2"],
        "((()()())(()))\n((()())(()()))\n(()()()())\n",
    );
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn gadget_generation_and_verification() {
    let dir = TempDir::new().unwrap();
    let h = file(&dir, "h.hg", "# two edges\n4 2\n1 2\n3 4\n");
    let o = run(&["gen", "dual", "--input", h.to_str().unwrap()]);
    assert_eq!(
        stdout(&o),
        "# mode=ordered\n# theta=3\n((())(())(())(()))\n(()(())()(())(()))\n((())(())()(())())\n"
    );
    let o = run(&["verify", "dual", "--input", h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "check=w_common status=pass\n\
         check=mct_equals_mis_plus_w status=pass mis=4 mct=5 expected=5\n\
         check=count_is_mis_plus_one status=pass count=5\n\
         overall=pass\n"
    );
    // Generated datasets feed back into the oracles.
    let g = file(
        &dir,
        "g.trees",
        &stdout(&run(&["gen", "dual", "--input", h.to_str().unwrap()])),
    );
    let mct = run(&["oracle", "mct", "--input", g.to_str().unwrap()]);
    assert_eq!(stdout(&mct).lines().count(), 5);

    let tx = file(&dir, "tx", "# n=5\n1 2\n1 2 4\n3\n3 5\n");
    let o = run(&[
        "verify",
        "itemset",
        "--input",
        tx.to_str().unwrap(),
        "--theta",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("check=maximal_trees_match status=pass"));
    let o = run(&[
        "gen",
        "itemset",
        "--input",
        tx.to_str().unwrap(),
        "--theta",
        "2",
    ]);
    assert!(stdout(&o).starts_with("# mode=ordered\n# theta=2\n"));
    assert_eq!(stdout(&o).lines().count(), 2 + 4 + 2);

    let cnf = file(&dir, "f.cnf", "c tiny\np cnf 3 3\n1 -2 0\n2 3 0\n-1 -3 0\n");
    let o = run(&["gen", "sat", "--input", cnf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(stdout(&o).lines().count(), 2 + 3 + 2);
    let o = run(&[
        "verify",
        "sat",
        "--input",
        cnf.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("check=gamma_alpha_criterion status=pass assignments=64"));
}
