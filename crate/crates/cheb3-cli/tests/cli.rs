//! End-to-end command tests: exit-code contract, determinism under fixed
//! seeds, and artifact formats.

use std::process::{Command, Output};

fn cheb3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cheb3"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn gen_matches_library_and_exit_codes() {
    let out = cheb3(&["gen", "-d", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = cheb3::poly::ChebyshevMapA3::from_json(text.trim()).unwrap();
    let direct = cheb3::poly::build_map(3).unwrap();
    assert!(parsed.same_map(&direct));
    assert!(text.contains("{\"e\":[2,0,0],\"c\":\"3\"}"));

    let out = cheb3(&["gen", "-d", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = cheb3(&["verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_semiconjugacy_passes() {
    let out = cheb3(&["verify", "semiconjugacy", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"passed\":true"));
}

#[test]
fn classify_rows_and_error_exit() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pts.csv");
    std::fs::write(&input, "t,2,0,1,0,0.5,0\nz,4,0,6,4,0\n").unwrap();
    let out = cheb3(&["classify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("StableMobius,StableMobius"));
    assert!(text.contains("BoundedK"));

    std::fs::write(&input, "t,2,0,1,0,0.5,0\nnot a row\n").unwrap();
    let out = cheb3(&["classify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("error"));
}

#[test]
fn determinism_byte_identical() {
    let a = cheb3(&["measure", "--samples", "5000", "--seed", "7"]);
    let b = cheb3(&["measure", "--samples", "5000", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = cheb3(&["measure", "--samples", "5000", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);

    let a = cheb3(&["periodic", "-d", "2", "-n", "2"]);
    let b = cheb3(&["periodic", "-d", "2", "-n", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn periodic_counts() {
    let out = cheb3(&["periodic", "-d", "2", "-n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // 64 rows + header + summary line
    let rows = text.lines().filter(|l| !l.starts_with('s') && !l.starts_with('{')).count();
    assert_eq!(rows, 64);
    assert!(text.contains("\"count\":64"));
}

#[test]
fn mesh_obj_is_parseable() {
    let out = cheb3(&["mesh", "--kind", "mobius", "--nu", "16", "--nv", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut nv = 0usize;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("v ") {
            nv += 1;
            for tok in rest.split_whitespace() {
                tok.parse::<f64>().unwrap();
            }
        } else if let Some(rest) = line.strip_prefix("f ") {
            for tok in rest.split_whitespace() {
                let idx: usize = tok.parse().unwrap();
                assert!(idx >= 1);
            }
        }
    }
    assert!(nv > 0);
}

#[test]
fn config_file_is_applied_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfgfile = dir.path().join("run.cfg");
    std::fs::write(&cfgfile, "seed = 7\n").unwrap();
    let from_file = cheb3(&["--config", cfgfile.to_str().unwrap(), "measure", "--samples", "2000"]);
    let explicit = cheb3(&["measure", "--samples", "2000", "--seed", "7"]);
    assert_eq!(from_file.stdout, explicit.stdout);
    // flag overrides the file
    let flag_wins = cheb3(&[
        "--config",
        cfgfile.to_str().unwrap(),
        "--seed",
        "9",
        "measure",
        "--samples",
        "2000",
    ]);
    let direct = cheb3(&["measure", "--samples", "2000", "--seed", "9"]);
    assert_eq!(flag_wins.stdout, direct.stdout);

    std::fs::write(&cfgfile, "bogus_key = 1\n").unwrap();
    let out = cheb3(&["--config", cfgfile.to_str().unwrap(), "gen", "-d", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_dir_receives_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb3(&["--out", dir.path().to_str().unwrap(), "gen", "-d", "2"]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.path().join("map_d2.json")).unwrap();
    assert!(written.contains("\"degree\":2"));
}

#[test]
fn rays_json_shape() {
    let out = cheb3(&["rays", "--alpha", "0.3", "--beta", "0.9", "--samples", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kind\":\"external\""));
    assert!(text.matches("[[").count() >= 1);
    let out = cheb3(&["rays", "--alpha", "0.3", "--beta", "0.9", "--samples", "5", "--internal"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"kind\":\"internal\""));
}
