//! End-to-end runs of the `displace` binary: exit codes, negative controls,
//! output files and byte-identical re-runs.

use std::path::Path;
use std::process::{Command, Output};

use displace_core::kv::KvDoc;

fn displace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_displace")).args(args).output().unwrap()
}

fn report(out: &Output) -> KvDoc {
    KvDoc::parse(&String::from_utf8_lossy(&out.stdout)).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn prop422_radius_zero_is_trivial() {
    let out = displace(&["prop422", "--radius", "0"]);
    assert!(out.status.success());
    let kv = report(&out);
    assert_eq!(kv.get("rows"), Some("1"));
    assert_eq!(kv.get("summary.words_scanned"), Some("1"));
    assert_eq!(kv.get("summary.prop422_violations"), Some("0"));
}

#[test]
fn prop422_broken_alpha_fails_the_run() {
    let out = displace(&["prop422", "--radius", "10", "--alpha-override", "-100"]);
    assert_eq!(out.status.code(), Some(1));
    let kv = report(&out);
    let violations: u64 = kv.get("summary.prop422_violations").unwrap().parse().unwrap();
    assert!(violations > 0);
    assert_eq!(kv.get("check.prop422"), Some("fail"));
    assert!(kv.get("summary.example.0").unwrap().starts_with("prop422 "));
    // The selector and the stable-norm bound do not depend on the override.
    assert_eq!(kv.get("check.selector"), Some("pass"));
    assert!(stderr(&out).contains("check failed: prop422"));
}

#[test]
fn prop422_rejects_a_non_ping_pong_pair() {
    let out = displace(&["prop422", "--radius", "3", "--u", "aab", "--v", "aaB"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a ping-pong pair: condition 2"), "{}", stderr(&out));
}

#[test]
fn caps_and_irrelevant_flags_are_errors() {
    let out = displace(&["prop422", "--radius", "40"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds cap"));
    let out = displace(&["word", "reduce", "aA", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--seed is not used by word"));
    let out = displace(&["prop507", "--control", "--power-max", "1000000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn prop507_single_power_and_control() {
    let out = displace(&["prop507", "--power-max", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "p,log2_p,gcd_minus_identity,displacement,translation_length_lower,word_length\n1,0,1,0,0,1\n"
    );
    let out = displace(&["prop507", "--control", "--power-max", "1024"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let kv = report(&out);
    assert_eq!(kv.get("check.displacement_positive"), Some("pass"));
    // d([[2,1],[1,1]] ⊕ 1) = √2·ln φ², and d(γ^p) = p·d(γ).
    let d: f64 = kv.get("summary.displacement_of_gamma").unwrap().parse().unwrap();
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((d - 2.0 * std::f64::consts::SQRT_2 * golden).abs() < 1e-10);
}

#[test]
fn ams_gap_needs_a_seed_and_handles_edge_cases() {
    let out = displace(&["ams-gap"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--seed is required"));

    let out = displace(&["ams-gap", "--seed", "1", "--samples", "0"]);
    assert!(out.status.success());
    let kv = report(&out);
    assert_eq!(kv.get("rows"), Some("0"));
    assert!(kv.get("summary.gap_max").is_none());

    let out = displace(&["ams-gap", "--seed", "7", "--sampler", "diagonal", "--dimension", "3"]);
    assert!(out.status.success());
    let kv = report(&out);
    let certified: u64 = kv.get("summary.proximal").unwrap().parse().unwrap();
    assert!(certified > 0);
    let max: f64 = kv.get("summary.gap_max").unwrap().parse().unwrap();
    assert!(max <= 1e-12, "{max}");

    let out = displace(&["ams-gap", "--seed", "1", "--r", "0.1", "--epsilon", "0.05"]);
    assert_eq!(out.status.code(), Some(2));
    let out = displace(&["ams-gap", "--seed", "1", "--dimension", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--gap-bound"));
}

#[test]
fn ams_gap_reference_run() {
    let out = displace(&["ams-gap", "--seed", "42"]);
    assert!(out.status.success());
    let kv = report(&out);
    assert_eq!(kv.get("config.prng"), Some("ChaCha8"));
    let max: f64 = kv.get("summary.gap_max").unwrap().parse().unwrap();
    assert!(max.is_finite() && max > 0.0 && max <= 1.0);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn depth_roots_rows() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.txt", "# inputs\n[[2,1],[1,1]]\n\n[[1,0],[0,1]]\n[[1,1],[0,1]]\n");
    let out = displace(&["depth-roots", &file, "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].contains(",certificate,hyperbolic,") && rows[0].contains(",2,4,2..3,"), "{}", rows[0]);
    assert!(rows[1].contains(",TorsionInput,"));
    assert!(rows[2].contains(",certificate,trivial_hyperbolic_part,"));
    assert!(rows[2].ends_with(",0,true"), "{}", rows[2]);
}

#[test]
fn depth_roots_parse_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.txt", "[[2,1],[1,1]]\n# comment\n[[1,2],[3\n");
    let out = displace(&["depth-roots", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    let file = write(dir.path(), "frac.txt", "[[1,\"1/2\"],[0,1]]\n");
    let out = displace(&["depth-roots", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));
}

#[test]
fn csv_output_writes_summary_alongside() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("prop507.csv");
    let out = displace(&["prop507", "--power-max", "64", "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(csv.lines().count(), 8);
    let summary = std::fs::read_to_string(dir.path().join("prop507.csv.summary")).unwrap();
    let kv = KvDoc::parse(&summary).unwrap();
    assert_eq!(kv.get("experiment"), Some("prop507"));
    assert_eq!(kv.get("passed"), Some("true"));
}

#[test]
fn reruns_are_byte_identical_and_timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["prop422", "--radius", "9"],
        &["ams-gap", "--seed", "3", "--samples", "300", "--dimension", "3"],
        &["prop507", "--power-max", "4096"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut files = Vec::new();
        for k in 0..2 {
            let p = dir.path().join(format!("{i}-{k}.txt"));
            let mut a = args.to_vec();
            a.extend(["--out", p.to_str().unwrap()]);
            assert!(displace(&a).status.success());
            files.push(std::fs::read(&p).unwrap());
        }
        assert_eq!(files[0], files[1], "{args:?}");
        assert!(!String::from_utf8_lossy(&files[0]).contains("wall_clock"));
    }
    let out = displace(&["prop422", "--radius", "2", "--timing"]);
    assert!(report(&out).get("wall_clock_seconds").is_some());
    assert!(stderr(&out).contains("wall clock"));
}

#[test]
fn adhoc_commands() {
    let kv = report(&displace(&["word", "cyclic", "bAbaB"]));
    assert_eq!(kv.get("summary.core"), Some("b"));
    assert_eq!(kv.get("summary.conjugator"), Some("bA"));
    let kv = report(&displace(&["word", "gromov", "ab", "ac", "--rank", "3"]));
    assert_eq!(kv.get("summary.gromov_product"), Some("1"));
    let kv = report(&displace(&["word", "power", "ab", "-2"]));
    assert_eq!(kv.get("summary.power"), Some("BABA"));
    let kv = report(&displace(&["word", "acr", "bbbaBBB"]));
    assert_eq!(kv.get("summary.acr"), Some("false"));

    let out = displace(&["pingpong", "--u", "aab", "--v", "bba"]);
    assert!(out.status.success());
    assert_eq!(report(&out).get("summary.certificate.alpha"), Some("9"));
    let out = displace(&["pingpong", "--u", "aab", "--v", "aaB"]);
    assert_eq!(out.status.code(), Some(1));
    let out = displace(&["pingpong", "--find", "ab", "--a", "b"]);
    assert!(out.status.success());

    let out = displace(&[
        "contortion",
        "--gamma",
        "[[1,0,1],[0,1,0],[0,0,1]]",
        "--reps",
        "[[[1,0,1],[0,1,0],[0,0,1]],[[1,0,2],[0,1,0],[0,0,1]]]",
    ]);
    assert!(out.status.success());
    let kv = report(&out);
    assert_eq!(kv.get("summary.witness.modulus"), Some("3"));
    assert_eq!(kv.get("summary.witness.k"), Some("5616"));

    let out = displace(&["matgeo", "--matrix", "[[100,0],[0,\"1/100\"]]", "--r", "0.5", "--epsilon", "0.05"]);
    assert!(out.status.success());
    let out = displace(&["matgeo", "--matrix", "[[10,0],[0,0.1]]", "--r", "0.5", "--epsilon", "0.05"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out).get("check.proximal.detail").unwrap().starts_with("contraction fails"));
}
