//! Commands behind the `approxdct` binary.
//!
//! Each command is a plain function returning a report, so the same code
//! paths are exercised by the binary, the examples and the tests.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{self, NamedImage, QualityReport, RetentionPolicy};
use crate::error::{Error, Result};
use crate::fastdct::{self, BitGrowthReport, InputDomain};
use crate::imageio;
use crate::spectral::{self, DEFAULT_GRID};
use crate::transforms::{
    self, build_exact_dct, build_wht, IntMatrix, TransformKind, TransformSpec, BAS_MATRIX_ENV, N,
    ORTHO_TOL, PROPOSED_KERNEL,
};

#[derive(Debug, Parser)]
#[command(
    name = "approxdct",
    version,
    about = "16-point multiplierless DCT approximation toolkit"
)]
pub struct Cli {
    /// BAS-2010 comparator matrix file.
    #[arg(long, global = true, env = BAS_MATRIX_ENV, value_name = "PATH")]
    pub bas_matrix: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check factorization equality, orthogonality, operation counts and
    /// the Parseval identity.
    Verify,
    /// Write the error-energy table and D_m curve data.
    Analyze {
        #[arg(long, default_value_t = DEFAULT_GRID, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        grid: usize,
        /// Output directory.
        #[arg(long, default_value = "analysis")]
        out: PathBuf,
    },
    /// Compress one PGM image.
    Compress {
        input: PathBuf,
        #[arg(long, default_value = "proposed")]
        transform: TransformKind,
        #[arg(long, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..=256))]
        r: usize,
        /// Reconstructed image.
        #[arg(long)]
        out: PathBuf,
        /// Difference image scaled by two.
        #[arg(long)]
        diff_out: Option<PathBuf>,
    },
    /// Sweep transforms × retention counts over an image corpus.
    Sweep {
        /// Directory of P5 PGM images (defaults to the bundled corpus).
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value = "2:256:2", value_parser = parse_r_range)]
        r_range: RRange,
        /// Repeat to select transforms; defaults to every available one.
        #[arg(long)]
        transform: Vec<TransformKind>,
        /// Output directory.
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
    /// Word-length growth of the fast algorithm.
    Bitwidth {
        /// Input word length; all of 4, 8, 12 and 16 when omitted.
        #[arg(long)]
        bitwidth: Option<u32>,
        /// Treat inputs as two's complement instead of unsigned pixels.
        #[arg(long)]
        signed: bool,
    },
}

/// Inclusive `start:end:step` range of retention counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRange(pub Vec<usize>);

pub fn parse_r_range(s: &str) -> Result<RRange> {
    let bad = || Error::InvalidArgument(format!("r-range `{s}` must look like start:end:step"));
    let parts: Vec<usize> = s
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (start, end, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, c] => (a, b, c),
        _ => return Err(bad()),
    };
    if step == 0 || start > end {
        return Err(bad());
    }
    if start == 0 || end > codec::BLOCK_LEN {
        return Err(Error::InvalidRetention(if start == 0 { 0 } else { end }));
    }
    Ok(RRange((start..=end).step_by(step).collect()))
}

pub fn bundled_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("corpus")
}

/// Every `.pgm` file in `dir`, ordered by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<NamedImage>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no .pgm images in {}",
            dir.display()
        )));
    }
    paths
        .iter()
        .map(|p| {
            Ok(NamedImage {
                name: p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                plane: imageio::load_pgm(p)?,
            })
        })
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn bas_spec(bas: Option<&Path>) -> Result<TransformSpec> {
    transforms::build(TransformKind::Bas2010, bas)
}

// --- verify -----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Kernel the fast pipeline is checked against.
    pub kernel: IntMatrix,
    pub bas_matrix: Option<PathBuf>,
    pub random_vectors: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            kernel: PROPOSED_KERNEL,
            bas_matrix: None,
            random_vectors: 10_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub fast_ops: fastdct::OpCounts,
    pub direct_additions: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name)
            .collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<22} {:<7} {}", c.name, c.status, c.detail)?;
        }
        write!(
            f,
            "additions(fast)={} additions(direct)={} mults={} shifts={} {}",
            self.fast_ops.additions,
            self.direct_additions,
            self.fast_ops.multiplications,
            self.fast_ops.shifts,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail,
    }
}

fn parseval_gap(spec: &TransformSpec) -> Result<f64> {
    let dct = build_exact_dct();
    let mut worst: f64 = 0.0;
    for m in 0..N {
        let q = spectral::error_energy_against(spec, &dct, m)?;
        let closed: f64 = std::f64::consts::PI
            * dct
                .scaled_row(m)
                .iter()
                .zip(spec.scaled_row(m))
                .map(|(c, a)| (c - a).powi(2))
                .sum::<f64>();
        worst = worst.max((q - closed).abs());
    }
    Ok(worst)
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let ft = fastdct::build_factorization()?;

    checks.push(match fastdct::derive_s() {
        Ok(s) => check(
            "s-derivation",
            true,
            format!("{} unit entries, one per row", s.nonzeros()),
        ),
        Err(e) => check("s-derivation", false, e.to_string()),
    });

    // Fast pipeline against the supplied kernel.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut mismatches = 0usize;
    let mut probes = 0usize;
    let mut compare = |x: &[i32; N]| -> Result<()> {
        probes += 1;
        let fast = ft.forward(x)?;
        let (direct, _) = fastdct::direct_forward_with(&opts.kernel, x)?;
        if fast != direct {
            mismatches += 1;
        }
        Ok(())
    };
    for j in 0..N {
        let mut e = [0; N];
        e[j] = 1;
        compare(&e)?;
    }
    for _ in 0..opts.random_vectors {
        let x: [i32; N] = std::array::from_fn(|_| rng.gen_range(-(1 << 15)..(1 << 15)));
        compare(&x)?;
    }
    checks.push(check(
        "factorization-equality",
        mismatches == 0,
        format!(
            "{} of {probes} probes differ from the direct matrix",
            mismatches
        ),
    ));

    let spec = TransformSpec::from_integer_kernel(TransformKind::Proposed, opts.kernel);
    let ortho = spec.orthogonality_error();
    let gram = spec.integer_gram_diagonal();
    let pattern_ok = gram.is_some_and(|d| {
        d.iter()
            .enumerate()
            .all(|(m, &v)| v == [16, 14, 12, 14][m % 4])
    });
    checks.push(check(
        "orthogonality",
        ortho < ORTHO_TOL && pattern_ok,
        format!("max|C·Cᵀ − I| = {ortho:.3e}, T·Tᵀ diagonal = {gram:?}"),
    ));

    let (_, fast_ops) = ft.forward_counted(&[1; N])?;
    let (_, direct_ops) = fastdct::direct_forward_with(&opts.kernel, &[1; N])?;
    checks.push(check(
        "operation-counts",
        fast_ops.additions == 72
            && direct_ops.additions == 208
            && fast_ops.multiplications == 0
            && fast_ops.shifts == 0,
        format!(
            "fast {} adds / {} mults / {} shifts, direct {} adds",
            fast_ops.additions, fast_ops.multiplications, fast_ops.shifts, direct_ops.additions
        ),
    ));

    let mut worst: f64 = 0.0;
    for s in [&spec, &build_wht(), &build_exact_dct()] {
        worst = worst.max(parseval_gap(s)?);
    }
    checks.push(check(
        "parseval",
        worst < 1e-6,
        format!("max |quadrature − closed form| = {worst:.3e}"),
    ));

    let bas = match &opts.bas_matrix {
        Some(p) => transforms::build_bas2010_from(p),
        None => transforms::build_bas2010(),
    };
    checks.push(match bas {
        Ok(bas) => {
            let o = bas.orthogonality_error();
            let gap = parseval_gap(&bas)?;
            check(
                "bas2010",
                o < 1e-6 && gap < 1e-6,
                format!("orthogonality error {o:.3e}, parseval gap {gap:.3e}"),
            )
        }
        Err(e) => Check {
            name: "bas2010",
            status: CheckStatus::Skipped,
            detail: e.to_string(),
        },
    });

    Ok(VerifyReport {
        checks,
        fast_ops,
        direct_additions: direct_ops.additions,
    })
}

// --- analyze ----------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AnalyzeOutput {
    /// Column names after `m`, in CSV order.
    pub columns: Vec<String>,
    /// `rows[m][c]`; `rows[16]` holds totals.
    pub rows: Vec<Vec<f64>>,
    pub files: Vec<PathBuf>,
}

impl AnalyzeOutput {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }

    fn csv(&self, two_decimals: bool) -> String {
        let mut s = format!("m,{}\n", self.columns.join(","));
        for (m, row) in self.rows.iter().enumerate() {
            let label = if m == N {
                "total".to_string()
            } else {
                m.to_string()
            };
            let cells: Vec<String> = row
                .iter()
                .map(|v| {
                    if two_decimals {
                        format!("{v:.2}")
                    } else {
                        v.to_string()
                    }
                })
                .collect();
            let _ = writeln!(s, "{label},{}", cells.join(","));
        }
        s
    }

    /// Two-decimal table view.
    pub fn table(&self) -> String {
        self.csv(true)
    }
}

fn curves_csv(report: &spectral::SpectralReport) -> String {
    let mut s = String::from("omega");
    for m in 1..N {
        let _ = write!(s, ",D_{m}");
    }
    s.push('\n');
    for (k, w) in report.grid.iter().enumerate() {
        let _ = write!(s, "{w:e}");
        for m in 1..N {
            let _ = write!(s, ",{:e}", report.curves[m][k]);
        }
        s.push('\n');
    }
    s
}

/// Writes `error_energy.csv` (two decimals), `error_energy_full.csv` and
/// one `curves_<transform>.csv` per approximation. The BAS-2010 column is
/// omitted when the comparator is unavailable.
pub fn run_analyze(grid: usize, out_dir: &Path, bas: Option<&Path>) -> Result<AnalyzeOutput> {
    let mut specs = vec![transforms::build_proposed(), build_wht()];
    if let Ok(b) = bas_spec(bas) {
        specs.push(b);
    }
    let dct = build_exact_dct();
    let mut reports = specs
        .iter()
        .map(|s| spectral::full_report(s, grid))
        .collect::<Result<Vec<_>>>()?;
    let self_check = spectral::full_report(&dct, 2)?;

    let mut columns: Vec<String> = specs.iter().map(|s| s.name().to_string()).collect();
    columns.push("dct_self_check".into());
    let all: Vec<_> = reports.iter().chain(std::iter::once(&self_check)).collect();
    let mut rows: Vec<Vec<f64>> = (0..N)
        .map(|m| all.iter().map(|rep| rep.energies[m]).collect())
        .collect();
    rows.push(all.iter().map(|rep| rep.total).collect());

    let mut out = AnalyzeOutput {
        columns,
        rows,
        files: Vec::new(),
    };
    let table = out_dir.join("error_energy.csv");
    write_file(&table, &out.csv(true))?;
    let full = out_dir.join("error_energy_full.csv");
    write_file(&full, &out.csv(false))?;
    out.files.extend([table, full]);
    for rep in reports.drain(..) {
        let path = out_dir.join(format!("curves_{}.csv", rep.transform));
        write_file(&path, &curves_csv(&rep))?;
        out.files.push(path);
    }
    Ok(out)
}

// --- compress ---------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressSummary {
    pub psnr_db: f64,
    pub mse: f64,
    pub uqi: f64,
}

impl fmt::Display for CompressSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "psnr_db={} mse={} uqi={}",
            self.psnr_db, self.mse, self.uqi
        )
    }
}

pub fn run_compress(
    transform: TransformKind,
    r: usize,
    input: &Path,
    out: &Path,
    diff_out: Option<&Path>,
    bas: Option<&Path>,
) -> Result<CompressSummary> {
    let spec = transforms::build(transform, bas)?;
    let policy = RetentionPolicy::new(r)?;
    let original = imageio::load_pgm(input)?;
    let rec = codec::compress_image(&spec, &original, policy)?;
    imageio::save_pgm(&rec, out)?;
    if let Some(p) = diff_out {
        imageio::save_pgm(&codec::difference_image(&original, &rec)?, p)?;
    }
    Ok(CompressSummary {
        psnr_db: codec::psnr(&original, &rec)?,
        mse: codec::mse(&original, &rec)?,
        uqi: codec::uqi(&original, &rec)?,
    })
}

// --- sweep ------------------------------------------------------------------

/// Available specs for the sweep: the requested ones, or proposed, dct,
/// wht and (when loadable) bas2010.
pub fn sweep_specs(requested: &[TransformKind], bas: Option<&Path>) -> Result<Vec<TransformSpec>> {
    if requested.is_empty() {
        let mut specs = vec![transforms::build_proposed(), build_exact_dct(), build_wht()];
        if let Ok(b) = bas_spec(bas) {
            specs.push(b);
        }
        return Ok(specs);
    }
    requested
        .iter()
        .map(|&k| transforms::build(k, bas))
        .collect()
}

pub fn run_sweep(
    corpus_dir: &Path,
    r_values: &[usize],
    requested: &[TransformKind],
    out_dir: &Path,
    bas: Option<&Path>,
) -> Result<QualityReport> {
    let corpus = load_corpus(corpus_dir)?;
    let specs = sweep_specs(requested, bas)?;
    let report = codec::sweep(&specs, &corpus, r_values)?;
    write_file(
        &out_dir.join("sweep_per_image.csv"),
        &report.per_image_csv(),
    )?;
    write_file(&out_dir.join("sweep_averages.csv"), &report.averages_csv())?;
    Ok(report)
}

// --- bitwidth ---------------------------------------------------------------

pub fn render_bit_growth(r: &BitGrowthReport) -> String {
    let mut s = String::new();
    let domain = match r.domain {
        InputDomain::Unsigned => "unsigned",
        InputDomain::Signed => "signed",
    };
    let _ = writeln!(s, "W={} ({domain} inputs)", r.input_width);
    if !r.standard_width {
        let _ = writeln!(s, "warning: W={} is not one of 4, 8, 12, 16", r.input_width);
    }
    for st in &r.stages {
        let _ = writeln!(
            s,
            "  {:<40} range [{}, {}] -> {} bits",
            st.label, st.min, st.max, st.width
        );
    }
    let _ = writeln!(
        s,
        "  1-D output: {} bits (|y| <= {}, attained at output {})",
        r.output_width_1d, r.max_magnitude_1d, r.witness_1d_output
    );
    let _ = write!(
        s,
        "  2-D output: {} bits (|Y| <= {}, attained at {:?})",
        r.output_width_2d, r.max_magnitude_2d, r.witness_2d_output
    );
    s
}

// --- entry point ------------------------------------------------------------

/// Runs one command, writing human-readable output to `stdout`. Returns
/// `Ok(false)` when a verification check failed.
pub fn run(cli: Cli, stdout: &mut impl Write) -> Result<bool> {
    let bas = cli.bas_matrix.as_deref();
    let io = |e| Error::io("<stdout>", e);
    match cli.command {
        Command::Verify => {
            let report = run_verify(&VerifyOptions {
                bas_matrix: cli.bas_matrix.clone(),
                ..VerifyOptions::default()
            })?;
            writeln!(stdout, "{report}").map_err(io)?;
            Ok(report.passed())
        }
        Command::Analyze { grid, out } => {
            let res = run_analyze(grid, &out, bas)?;
            write!(stdout, "{}", res.table()).map_err(io)?;
            for f in &res.files {
                writeln!(stdout, "wrote {}", f.display()).map_err(io)?;
            }
            Ok(true)
        }
        Command::Compress {
            input,
            transform,
            r,
            out,
            diff_out,
        } => {
            let s = run_compress(transform, r, &input, &out, diff_out.as_deref(), bas)?;
            writeln!(stdout, "{s}").map_err(io)?;
            Ok(true)
        }
        Command::Sweep {
            corpus,
            r_range,
            transform,
            out,
        } => {
            let dir = corpus.unwrap_or_else(bundled_corpus_dir);
            let rep = run_sweep(&dir, &r_range.0, &transform, &out, bas)?;
            writeln!(
                stdout,
                "{} per-image rows, {} averages written to {}",
                rep.per_image.len(),
                rep.averages.len(),
                out.display()
            )
            .map_err(io)?;
            Ok(true)
        }
        Command::Bitwidth { bitwidth, signed } => {
            let domain = if signed {
                InputDomain::Signed
            } else {
                InputDomain::Unsigned
            };
            let widths = bitwidth
                .map(|w| vec![w])
                .unwrap_or_else(|| fastdct::STANDARD_WIDTHS.to_vec());
            for w in widths {
                let r = fastdct::analyze_bit_growth_with(w, domain)?;
                writeln!(stdout, "{}", render_bit_growth(&r)).map_err(io)?;
            }
            Ok(true)
        }
    }
}
