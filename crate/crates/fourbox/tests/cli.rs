//! End-to-end checks of the installed binary: artifact content, determinism
//! and the stable exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fourbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourbox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tempdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fourbox-it-{name}"));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn decompose_writes_flagged_csv_and_is_deterministic() {
    let dir = tempdir("decompose");
    let out = dir.join("d.csv");
    for _ in 0..2 {
        let r = fourbox(&[
            "decompose",
            "--shells",
            "22",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("multiset,count,e0_over_pi2,irreps,flag\n"));
    assert_eq!(csv.lines().count(), 13); // header + 12 multisets
    assert!(csv.contains("\"{1,1,1,2}\""));
    assert_eq!(csv.matches("printed").count(), 2);
    // byte-for-byte determinism across runs
    let again = fourbox(&["decompose", "--shells", "22"]);
    assert_eq!(String::from_utf8_lossy(&again.stdout), csv);
}

#[test]
fn pt_stdout_has_expected_header() {
    let r = fourbox(&[
        "pt",
        "--shells",
        "7",
        "--lambda-start",
        "0",
        "--lambda-stop",
        "1",
        "--count",
        "2",
    ]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.starts_with("label,irrep,e0,e1,E@0,E@1\n"));
    assert!(text.contains("1A1u,A1u,"));
}

#[test]
fn ritz_produces_csv_and_svg() {
    let dir = tempdir("ritz");
    let csv = dir.join("r.csv");
    let svg = dir.join("r.svg");
    let r = fourbox(&[
        "ritz",
        "--irrep",
        "A1g",
        "--irrep",
        "T2g",
        "--shells",
        "4,10,12",
        "--lambda-start",
        "0",
        "--lambda-stop",
        "1",
        "--count",
        "5",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(csv).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("3A1g,")));
    let svg = std::fs::read_to_string(svg).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("viewBox=\"0 0 800 600\""));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempdir("config");
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "shells=7\nlambda_start=0\nlambda_stop=1\ncount=2\n").unwrap();
    let r = fourbox(&["--config", conf.to_str().unwrap(), "pt"]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.starts_with("label,irrep,e0,e1,E@0,E@1\n"));
}

#[test]
fn lambda_subcommand_prints_product() {
    let r = fourbox(&["lambda", "--mass", "2", "--length", "3", "--spring", "5"]);
    assert!(r.status.success());
    assert_eq!(String::from_utf8(r.stdout).unwrap(), "lambda=90\n");
}

#[test]
fn exit_code_2_on_invalid_config() {
    let r = fourbox(&["pt", "--shells", "3"]);
    assert_eq!(r.status.code(), Some(2));
    let r = fourbox(&[
        "pt",
        "--lambda-start",
        "2",
        "--lambda-stop",
        "1",
        "--count",
        "3",
    ]);
    assert_eq!(r.status.code(), Some(2));
    let r = fourbox(&["lambda", "--mass", "-1", "--length", "1", "--spring", "1"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn exit_code_3_on_empty_basis() {
    let r = fourbox(&["ritz", "--irrep", "T2g", "--shells", "4", "--count", "2"]);
    assert_eq!(r.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&r.stderr);
    assert!(msg.contains("T2g"), "message must name the irrep: {msg}");
}

#[test]
fn exit_code_5_on_short_limit_tail() {
    let r = fourbox(&[
        "limit",
        "--lambda-start",
        "1e4",
        "--lambda-stop",
        "1e5",
        "--count",
        "2",
        "--spacing",
        "geometric",
    ]);
    assert_eq!(r.status.code(), Some(5));
}
