use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const IFF: &str = "p cnf 2 2\na 1 0\ne 2 0\n-1 2 0\n1 -2 0\n";

fn qsym(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qsym"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_prints_truth() {
    let o = qsym(&["solve", "-"], Some(IFF));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "TRUE\n");
    let swapped = "p cnf 2 2\ne 2 0\na 1 0\n-1 2 0\n1 -2 0\n";
    assert_eq!(stdout(&qsym(&["solve", "-"], Some(swapped))), "FALSE\n");
}

#[test]
fn parse_normalizes() {
    let o = qsym(&["parse", "-"], Some("c hi\np cnf 2 1\ne 1 0\ne 2 0\n2 1 0\n"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("e 1 2 0"), "{text}");
}

#[test]
fn detect_and_generators_file() {
    let dir = tempfile::tempdir().unwrap();
    let kbkf = stdout(&qsym(&["gen", "kbkf", "3"], None));
    let input = write(dir.path(), "kbkf.qdimacs", &kbkf);
    let o = qsym(&["detect", &input], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
    assert_eq!(stdout(&qsym(&["solve", &input], None)), "FALSE\n");

    let gens = write(dir.path(), "gens.txt", "(2 3)(-4)\n");
    let o = qsym(&["detect", &input, "--generators", &gens], None);
    assert_eq!(stdout(&o), "(2 3)(-4)\n");
    let bad = write(dir.path(), "bad.txt", "(1 4)\n");
    assert_eq!(
        qsym(&["detect", &input, "--generators", &bad], None).status.code(),
        Some(2)
    );
}

#[test]
fn break_both_keeps_truth() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, plant) in [("1", true), ("2", true), ("3", false)] {
        let mut args = vec![
            "gen",
            "random",
            "--seed",
            seed,
            "--vars",
            "6",
            "--clauses",
            "10",
            "--blocks",
            "3",
        ];
        if plant {
            args.push("--plant");
        }
        let instance = stdout(&qsym(&args, None));
        let input = write(dir.path(), "in.qdimacs", &instance);
        let truth = stdout(&qsym(&["solve", &input], None));

        let out = dir.path().join("out.qdimacs");
        let dnf = dir.path().join("out.dnf");
        let o = qsym(
            &[
                "break",
                &input,
                "--both",
                "-o",
                out.to_str().unwrap(),
                "--dnf-out",
                dnf.to_str().unwrap(),
            ],
            None,
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let solved = qsym(
            &[
                "solve",
                out.to_str().unwrap(),
                "--dnf",
                dnf.to_str().unwrap(),
                "--cap",
                "64",
            ],
            None,
        );
        assert_eq!(stdout(&solved), truth, "seed {seed}");

        let o = qsym(&["break", &input, "--exists"], None);
        let exists = write(dir.path(), "exists.qdimacs", &stdout(&o));
        assert_eq!(
            stdout(&qsym(&["solve", &exists, "--cap", "64"], None)),
            truth,
            "seed {seed}"
        );
    }
}

#[test]
fn verify_reports() {
    let o = qsym(&["verify", "-", "--json"], Some(IFF));
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["truth"], serde_json::Value::Bool(true));
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] != "fail"));
    let o = qsym(&["verify", "-"], Some(IFF));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn exit_codes() {
    assert_eq!(qsym(&[], None).status.code(), Some(1));
    assert_eq!(qsym(&["break", "-"], Some(IFF)).status.code(), Some(1));
    assert_eq!(qsym(&["break", "-", "--forall"], Some(IFF)).status.code(), Some(1));
    assert_eq!(qsym(&["solve", "-"], Some("p cnf 1 1\n1 x 0\n")).status.code(), Some(2));
    assert_eq!(qsym(&["solve", "/no/such/file"], None).status.code(), Some(2));
    assert_eq!(qsym(&["solve", "-", "--cap", "1"], Some(IFF)).status.code(), Some(3));
    assert_eq!(qsym(&["gen", "kbkf", "0"], None).status.code(), Some(2));
}
