use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

use wittkit::artinmazur::{closed_form_logarithm, FamilyId};
use wittkit::cli::THREADS_ENV;

fn wittkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittkit"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = wittkit(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    wittkit(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["am-log", "--mmax", "3"]), 1);
    assert_eq!(code(&["am-log", "--family", "sextic", "--mmax", "3"]), 1);
    assert_eq!(
        code(&["am-log", "--family", "hesse", "--mmax", "3", "--mod", "1"]),
        1
    );
    assert_eq!(code(&["pf-check", "--family", "quintic"]), 1);
    assert_eq!(code(&["witt", "--op", "add", "--a", "1,2"]), 1);
    assert_eq!(code(&["congruence", "--family", "hesse", "--p", "2"]), 2);
    assert_eq!(code(&["congruence", "--family", "hesse", "--p", "9"]), 2);
    assert_eq!(
        code(&["scan-ordinary", "--family", "quartic", "--pmax", "7", "--oracle"]),
        2
    );
    assert_eq!(code(&["pf-check", "--family", "hesse", "--kmax", "5"]), 1);
    assert_eq!(code(&["witt", "--op", "from-ghost", "--a", "0,1"]), 2);
    assert_eq!(
        code(&["scan-ordinary", "--family", "hesse", "--pmax", "37", "--oracle"]),
        3
    );
    assert_eq!(
        code(&[
            "scan-ordinary",
            "--family",
            "hesse",
            "--pmax",
            "11",
            "--oracle",
            "--budget",
            "100"
        ]),
        3
    );
}

#[test]
fn errors_go_to_stderr() {
    let out = wittkit(&["congruence", "--family", "hesse", "--p", "2"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn matches_library() {
    let json: Value = serde_json::from_str(&stdout(&[
        "am-log",
        "--family",
        "quartic-k3",
        "--mmax",
        "10",
        "--method",
        "closed-form",
        "--format",
        "json",
    ]))
    .unwrap();
    let log = closed_form_logarithm(FamilyId::QuarticK3, 10).unwrap();
    let coeffs = json["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 10);
    for (row, a) in coeffs.iter().zip(log.coeffs()) {
        assert_eq!(row["a_m"], serde_json::to_value(a).unwrap());
    }
    let tsv = stdout(&["am-log", "--family", "quartic-k3", "--mmax", "10"]);
    let last = tsv.lines().last().unwrap();
    assert_eq!(last, format!("10\t{}", log.coeffs()[9]));
}

#[test]
fn config_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wittkit.toml");
    fs::write(&cfg, "family = \"hesse-cubic\"\nformat = \"json\"\nbudget = 50\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let json: Value = serde_json::from_str(&stdout(&["--config", cfg, "am-log", "--mmax", "4"])).unwrap();
    assert_eq!(json["family"], "hesse-cubic");
    // flags win over the config
    let tsv = stdout(&[
        "--config", cfg, "am-log", "--mmax", "2", "--family", "quintic", "--format", "tsv",
    ]);
    assert_eq!(tsv, "m\ta_m\n1\t1\n2\t1\n");
    // budget 50 is too small for P^2(F_7)
    assert_eq!(
        code(&["--config", cfg, "scan-ordinary", "--pmax", "7", "--oracle"]),
        3
    );
    fs::write(dir.path().join("bad.toml"), "colour = 3\n").unwrap();
    assert_eq!(
        code(&[
            "--config",
            dir.path().join("bad.toml").to_str().unwrap(),
            "families"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "--config",
            dir.path().join("missing.toml").to_str().unwrap(),
            "families"
        ]),
        1
    );
}

#[test]
fn out_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("result.tsv");
    let manifest = dir.path().join("manifest.json");
    let printed = stdout(&[
        "congruence",
        "--family",
        "quintic",
        "--p",
        "3",
        "--p",
        "5",
        "--out",
        out.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(printed.is_empty());
    let body = fs::read(&out).unwrap();
    assert_eq!(
        String::from_utf8_lossy(&body),
        "p\tnu\tpass\tdifference\n3\t2\ttrue\t0\n5\t2\ttrue\t0\n"
    );
    let m: Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["tool"], "wittkit");
    assert_eq!(m["request"]["subcommand"], "congruence");
    assert_eq!(m["request"]["args"][0], "congruence");
    assert!(m["wall_time_ms"].is_u64());
    use sha2::{Digest, Sha256};
    let digest: String = Sha256::digest(&body).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(m["content_sha256"], digest);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "scan-ordinary",
        "--family",
        "hesse",
        "--pmax",
        "23",
        "--oracle",
        "--format",
        "json",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_wittkit"))
            .args(args)
            .env(THREADS_ENV, threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}

#[test]
fn witt_operations() {
    assert_eq!(
        stdout(&["witt", "--op", "add", "--a", "1,0", "--b", "1,0"]),
        "index\tvalue\n1\t2\n2\t-1\n"
    );
    assert_eq!(
        stdout(&["witt", "--op", "from-ghost", "--a", "2,2,2"]),
        "index\tvalue\n1\t2\n2\t-1\n3\t-2\n"
    );
    assert_eq!(
        stdout(&["witt", "--op", "teichmueller", "--a", "x", "--len", "3"]),
        "index\tvalue\n1\tx\n2\t0\n3\t0\n"
    );
    assert_eq!(
        code(&[
            "witt",
            "--op",
            "verschiebung",
            "--a",
            "5",
            "--m",
            "2",
            "--len",
            "4"
        ]),
        2
    );
    assert_eq!(
        stdout(&[
            "witt",
            "--op",
            "verschiebung",
            "--a",
            "5",
            "--m",
            "2",
            "--len",
            "3"
        ]),
        "index\tvalue\n1\t0\n2\t5\n3\t0\n"
    );
    assert_eq!(
        stdout(&["witt", "--op", "frobenius", "--a", "1,1,1,1", "--m", "2"]),
        "index\tvalue\n1\t3\n2\t-1\n"
    );
}

#[test]
fn fgl_reports_denominators() {
    let json: Value = serde_json::from_str(&stdout(&[
        "fgl", "--family", "quintic", "--deg", "6", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["integral"], true);
    assert_eq!(json["offending"], Value::Array(vec![]));
}

#[test]
fn pf_check_with_a_wrong_operator_fails_rows() {
    let tsv = stdout(&[
        "pf-check",
        "--family",
        "quintic",
        "--kmax",
        "7",
        "--operator",
        "theta^4 - 3125*x^5",
    ]);
    assert!(tsv.lines().skip(1).any(|l| l.contains("false")), "{tsv}");
}
