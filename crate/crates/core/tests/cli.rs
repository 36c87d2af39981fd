use std::path::Path;
use std::process::Command;

use approxdct::cli::{self, CheckStatus, VerifyOptions};
use approxdct::imageio::{self, ImagePlane};
use approxdct::transforms::PROPOSED_KERNEL;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_approxdct"));
    c.env_remove("APPROXDCT_BAS_MATRIX");
    c
}

fn checkerboard(path: &Path) -> ImagePlane {
    let s = (0..64 * 32)
        .map(|i| (((i % 64) / 4 + (i / 64) / 4) % 2 * 180 + (i % 7) * 5) as u16)
        .collect();
    let img = ImagePlane::new(64, 32, s).unwrap();
    imageio::save_pgm(&img, path).unwrap();
    img
}

#[test]
fn verify_reports_counts_and_passes() {
    let out = bin().arg("verify").output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("additions(fast)=72 additions(direct)=208 mults=0 shifts=0 PASS"));
    assert!(stdout.contains("bas2010") && stdout.contains("SKIPPED"));
}

#[test]
fn verify_names_the_check_a_corrupted_kernel_breaks() {
    let mut kernel = PROPOSED_KERNEL;
    kernel[3][5] = -kernel[3][5];
    let report = cli::run_verify(&VerifyOptions {
        kernel,
        random_vectors: 100,
        ..VerifyOptions::default()
    })
    .unwrap();
    assert!(!report.passed());
    assert!(report.failed_checks().contains(&"factorization-equality"));
    assert!(report.to_string().ends_with("FAIL"));
    let parseval = report.checks.iter().find(|c| c.name == "parseval").unwrap();
    assert_eq!(parseval.status, CheckStatus::Pass);
}

#[test]
fn compress_full_retention_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    let original = checkerboard(&input);
    let out = dir.path().join("out.pgm");
    let diff = dir.path().join("diff.pgm");
    let res = bin()
        .args(["compress", "--transform", "wht", "--r", "256"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .arg("--diff-out")
        .arg(&diff)
        .output()
        .unwrap();
    assert!(res.status.success());
    assert_eq!(
        String::from_utf8(res.stdout).unwrap().trim(),
        "psnr_db=inf mse=0 uqi=1"
    );
    assert_eq!(imageio::load_pgm(&out).unwrap(), original);
    assert!(imageio::load_pgm(&diff)
        .unwrap()
        .samples()
        .iter()
        .all(|&v| v == 0));
}

#[test]
fn compress_rejects_out_of_range_r_and_bad_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    checkerboard(&input);
    for r in ["0", "257"] {
        let res = bin()
            .args(["compress", "--r", r])
            .arg(&input)
            .args(["--out", "x.pgm"])
            .output()
            .unwrap();
        assert!(!res.status.success());
    }
    let odd = dir.path().join("odd.pgm");
    imageio::save_pgm(&ImagePlane::filled(20, 16, 9).unwrap(), &odd).unwrap();
    let res = bin()
        .args(["compress", "--r", "8"])
        .arg(&odd)
        .arg("--out")
        .arg(dir.path().join("o.pgm"))
        .output()
        .unwrap();
    assert!(!res.status.success());
    assert!(String::from_utf8(res.stderr).unwrap().contains("20x16"));
}

#[test]
fn sweep_on_empty_corpus_fails() {
    let dir = tempfile::tempdir().unwrap();
    let res = bin()
        .arg("sweep")
        .arg("--corpus")
        .arg(dir.path())
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(!res.status.success());
    assert!(String::from_utf8(res.stderr)
        .unwrap()
        .contains("no .pgm images"));
}

#[test]
fn sweep_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    checkerboard(&corpus.join("a.pgm"));
    checkerboard(&corpus.join("b.pgm"));
    let out = dir.path().join("out");
    let res = bin()
        .arg("sweep")
        .arg("--corpus")
        .arg(&corpus)
        .args(["--r-range", "1:256:85", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(res.status.success());
    let per_image = std::fs::read_to_string(out.join("sweep_per_image.csv")).unwrap();
    let averages = std::fs::read_to_string(out.join("sweep_averages.csv")).unwrap();
    // 3 transforms × 4 r values × 2 images, plus headers.
    assert_eq!(per_image.lines().count(), 1 + 3 * 4 * 2);
    assert_eq!(averages.lines().count(), 1 + 3 * 4);
    assert!(
        averages
            .lines()
            .any(|l| l.starts_with("proposed,256,inf,0,1,0,0,0")),
        "{averages}"
    );
}

#[test]
fn analyze_writes_table_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let res = bin()
        .args(["analyze", "--grid", "64", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(res.status.success());
    let table = std::fs::read_to_string(dir.path().join("error_energy.csv")).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "m,proposed,wht,dct_self_check"
    );
    assert_eq!(table.lines().last().unwrap(), "total,8.08,92.56,0.00");
    let curves = std::fs::read_to_string(dir.path().join("curves_proposed.csv")).unwrap();
    assert_eq!(curves.lines().count(), 65);
    assert_eq!(curves.lines().next().unwrap().split(',').count(), 16);
}

#[test]
fn bitwidth_reports_thirteen_bits_for_eight_bit_input() {
    let res = bin()
        .args(["bitwidth", "--bitwidth", "8"])
        .output()
        .unwrap();
    let s = String::from_utf8(res.stdout).unwrap();
    assert!(s.contains("1-D output: 13 bits (|y| <= 4080"), "{s}");
    assert!(s.contains("2-D output: 17 bits"));
    let res = bin()
        .args(["bitwidth", "--bitwidth", "10"])
        .output()
        .unwrap();
    assert!(String::from_utf8(res.stdout).unwrap().contains("warning"));
}
