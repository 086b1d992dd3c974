//! End-to-end CLI checks through the compiled binary.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zetalab"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{tag}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn zeros_subcommand_certifies_the_classic_window() {
    let dir = scratch("zeros");
    let out = bin()
        .args([
            "zeros",
            "--t-low",
            "10",
            "--t-high",
            "100",
            "--cache-dir",
        ])
        .arg(dir.join("cache"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("29 zeros"), "{text}");
    assert!(text.contains("certified = true"), "{text}");
    assert!(text.contains("14.134725"), "{text}");
    // The cache file follows the documented format.
    let cache = fs::read_to_string(dir.join("cache/zeros_10.000_100.000.txt")).unwrap();
    let header = cache.lines().next().unwrap();
    assert!(header.starts_with("# zeros 10"), "{header}");
    assert!(header.ends_with("29 true"), "{header}");
    assert_eq!(cache.lines().count(), 30);
}

#[test]
fn run_subcommand_is_deterministic_and_reportable() {
    let dir = scratch("run");
    let config = dir.join("exp.cfg");
    fs::write(
        &config,
        "[experiment]\n\
         kind = joint_moments\n\
         T = 1e4\n\
         integrand = dirichlet\n\
         h = 1\n\
         l = 1\n\
         k = 0\n\
         x_exponent = 0.1\n\
         seed = 5\n\
         [test_function]\n\
         family = smooth_bump_hat\n\
         eta = 0.4\n\
         [quadrature]\n\
         mode = stratified_random\n\
         points = 2000\n",
    )
    .unwrap();
    for tag in ["one", "two"] {
        let out = bin()
            .args(["run", "--config"])
            .arg(&config)
            .arg("--cache-dir")
            .arg(dir.join("cache"))
            .arg("--out")
            .arg(dir.join(tag))
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(dir.join("one/records.jsonl")).unwrap();
    let b = fs::read(dir.join("two/records.jsonl")).unwrap();
    assert_eq!(a, b, "records must be byte-identical for a fixed config");
    let a = fs::read(dir.join("one/table.csv")).unwrap();
    let b = fs::read(dir.join("two/table.csv")).unwrap();
    assert_eq!(a, b);

    // The report subcommand merges records into the flat table.
    let merged = dir.join("merged.csv");
    let out = bin()
        .args(["report", "--inputs"])
        .arg(dir.join("one/records.jsonl"))
        .arg(dir.join("two/records.jsonl"))
        .arg("--out")
        .arg(&merged)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(&merged).unwrap();
    assert!(text.starts_with(zetalab::report::CSV_HEADER));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn invalid_config_fails_with_one_line_reason() {
    let dir = scratch("invalid");
    let config = dir.join("bad.cfg");
    fs::write(
        &config,
        "[experiment]\nkind = correlation\nT = 1e5\nbogus_key = 1\n",
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus_key"), "{err}");
}

#[test]
fn tampered_support_is_rejected() {
    // eta = 1.5 with an order-2 statistic violates every support rule.
    let dir = scratch("support");
    let config = dir.join("exp.cfg");
    fs::write(
        &config,
        "[experiment]\n\
         kind = hughes_rudnick\n\
         T = 1e3\n\
         k = 2\n\
         [test_function]\n\
         family = smooth_bump_hat\n\
         eta = 1.5\n\
         [quadrature]\n\
         points = 1000\n",
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--cache-dir")
        .arg(dir.join("cache"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("eta") || err.contains("support"),
        "unexpected error text: {err}"
    );
}
