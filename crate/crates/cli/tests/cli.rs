use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use vcover_core::bench::read_rows;

fn vcover() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vcover"))
}

fn with_stdin(mut cmd: Command, input: &str) -> Output {
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const P3: &str = "p td 3 2\n1 2\n2 3\n";

#[test]
fn p3_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p3.gr", P3);
    let out = vcover().arg("--input").arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s vc 3 1\n2\n");
}

#[test]
fn p3_from_stdin() {
    let out = with_stdin(vcover(), P3);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s vc 3 1\n2\n");
}

#[test]
fn malformed_input_exits_one() {
    for bad in ["p td 3 2\n1 x\n", "p td 2 1\n1 5\n", "hello\n", "p td 3 1\n1 1\n"] {
        let out = with_stdin(vcover(), bad);
        assert_eq!(out.status.code(), Some(1), "{bad:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn missing_input_file_exits_one() {
    let out = vcover().args(["--input", "/nonexistent/x.gr"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c5.gr", "p td 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n");
    let json = dir.path().join("s.json");
    let out = vcover().arg("--input").arg(&input).arg("--stats-json").arg(&json).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    for key in ["instance", "phase", "size", "n", "m", "n_prime", "m_prime", "elapsed_ms", "branches", "verified"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["instance"], "c5");
    assert_eq!(v["size"], 3);
    assert_eq!(v["verified"], true);
}

#[test]
fn kernel_only_writes_kernel_and_stats_line() {
    // a 4-cycle with a pendant path hanging off it reduces completely
    let out = with_stdin(
        {
            let mut c = vcover();
            c.arg("--kernel-only");
            c
        },
        "p td 6 6\n1 2\n2 3\n3 4\n4 1\n4 5\n5 6\n",
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let stats = lines.next().unwrap();
    assert!(stats.starts_with("c kernel n'=0 m'=0 offset=3"), "{stats}");
    assert_eq!(lines.next(), Some("p td 0 0"));
}

#[test]
fn kernel_only_output_is_a_valid_instance() {
    // Petersen graph: nothing applies, so the kernel is the input relabelled
    let edges = [
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 1),
        (1, 6),
        (2, 7),
        (3, 8),
        (4, 9),
        (5, 10),
        (6, 8),
        (8, 10),
        (10, 7),
        (7, 9),
        (9, 6),
    ];
    let mut text = String::from("p td 10 15\n");
    for (u, v) in edges {
        text += &format!("{u} {v}\n");
    }
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "petersen.gr", &text);
    let kernel = dir.path().join("k.gr");
    assert!(vcover()
        .arg("--kernel-only")
        .arg("--input")
        .arg(&input)
        .arg("--output")
        .arg(&kernel)
        .status()
        .unwrap()
        .success());
    let k = vcover_core::io::read_instance_file(&kernel).unwrap();
    let header = std::fs::read_to_string(&kernel).unwrap();
    let first = header.lines().next().unwrap();
    let np: usize = first.split("n'=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert_eq!(k.header.n, np);
    let out = vcover().arg("--input").arg(&input).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("s vc 10 6\n"));
}

#[test]
fn verify_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "p3.gr", P3);
    let good = write(dir.path(), "good.sol", "s vc 3 1\n2\n");
    let bad = write(dir.path(), "bad.sol", "s vc 3 1\n1\n");
    let wrong_n = write(dir.path(), "n.sol", "s vc 4 1\n2\n");
    let run = |sol: &Path| {
        vcover().arg("verify").arg("--instance").arg(&inst).arg("--solution").arg(sol).output().unwrap().status
    };
    assert_eq!(run(&good).code(), Some(0));
    assert_eq!(run(&bad).code(), Some(1));
    assert_eq!(run(&wrong_n).code(), Some(1));
}

#[test]
fn timeout_exits_two_without_solution() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let n = 600;
    let mut edges = std::collections::BTreeSet::new();
    while edges.len() < 2400 {
        let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut text = format!("p td {n} {}\n", edges.len());
    for (a, b) in edges {
        text += &format!("{a} {b}\n");
    }
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "hard.gr", &text);
    let out = vcover()
        .args(["--time-limit", "0.5", "--short-limit", "0.1", "--long-limit", "0.2", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn inconsistent_limits_are_rejected() {
    let out = with_stdin(
        {
            let mut c = vcover();
            c.args(["--time-limit", "1", "--long-limit", "5"]);
            c
        },
        P3,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_run_is_resumable_and_records_failures() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    std::fs::create_dir(&inst).unwrap();
    write(&inst, "p3.gr", P3);
    write(&inst, "k3.gr", "p td 3 3\n1 2\n2 3\n1 3\n");
    write(&inst, "broken.gr", "p td 3 2\n1 x\n");
    write(&inst, "notes.txt", "ignored\n");
    let out = dir.path().join("r.csv");
    let run = || {
        vcover()
            .args(["bench", "run", "--test-mode", "--ablation", "BnR", "--dir"])
            .arg(&inst)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(String::from_utf8(first.stdout).unwrap().trim(), "3 run, 2 solved");
    let rows = read_rows(&out).unwrap();
    assert_eq!(rows.len(), 3);
    let broken = rows.iter().find(|r| r.instance == "broken").unwrap();
    assert_eq!(broken.solved, 0);
    assert!(broken.error.starts_with("exit 1"), "{}", broken.error);
    let k3 = rows.iter().find(|r| r.instance == "k3").unwrap();
    assert_eq!((k3.solved, k3.verified, k3.size, k3.ablation.as_str()), (1, 1, Some(2), "BnR"));

    let second = run();
    assert_eq!(String::from_utf8(second.stdout).unwrap().trim(), "0 run, 0 solved");
    assert_eq!(read_rows(&out).unwrap().len(), 3);

    let curve = dir.path().join("c.csv");
    assert!(vcover().args(["bench", "curve", "--in"]).arg(&out).arg("--out").arg(&curve).status().unwrap().success());
    let text = std::fs::read_to_string(&curve).unwrap();
    assert_eq!(text.lines().next(), Some("ablation,t,solved"));
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(last[2], "2");
}

#[test]
fn unknown_ablation_is_rejected() {
    let out = with_stdin(
        {
            let mut c = vcover();
            c.args(["--ablation", "nope"]);
            c
        },
        P3,
    );
    assert_ne!(out.status.code(), Some(0));
}
