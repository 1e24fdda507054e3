//! Acceptance gate for the binary: the exit-code contract and byte-stable
//! reports, asserted end to end through a real process.

use std::path::Path;
use std::process::{Command, Output};

fn fracslice(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fracslice"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn reports(dir: &Path) -> (Vec<u8>, Vec<u8>) {
    (
        std::fs::read(dir.join("report.json")).unwrap(),
        std::fs::read(dir.join("report.csv")).unwrap(),
    )
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracslice(&["verify", "--out", dir.path().to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = fracslice(
        &["verify", "--variant", "alt", "--out", dir.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(code(&out), 1, "alt reading must fail the suite");

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"seed": "not a number"}"#).unwrap();
    let out = fracslice(
        &[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(code(&out), 2, "malformed config must be a usage error");
    println!("[acceptance] PASS cli_exit_codes: 0 on pass, 1 on failed identities, 2 on usage");
}

#[test]
fn reports_are_byte_stable_across_runs_and_thread_counts() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let d3 = tempfile::tempdir().unwrap();
    for (d, envs) in [
        (&d1, &[][..]),
        (&d2, &[][..]),
        (&d3, &[("FRACSLICE_THREADS", "1")][..]),
    ] {
        let out = fracslice(
            &["verify", "--seed", "11", "--out", d.path().to_str().unwrap()],
            envs,
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (j1, c1) = reports(d1.path());
    assert_eq!((j1.clone(), c1.clone()), reports(d2.path()), "rerun changed bytes");
    assert_eq!((j1.clone(), c1), reports(d3.path()), "thread count changed bytes");
    assert!(!j1.is_empty());
    println!("[acceptance] PASS cli_determinism: report bytes independent of run and threads");
}
