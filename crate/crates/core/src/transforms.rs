//! 16×16 transform kernels: the multiplierless approximation, the exact
//! DCT-II, the Walsh–Hadamard transform and the external BAS-2010 comparator.
//!
//! Every transform is stored as a kernel matrix plus a diagonal scaling
//! vector; the effective (scaled) matrix is `diag(scaling) · kernel`.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Transform length. Everything in this crate operates on 16-point data.
pub const N: usize = 16;

pub type Vector = [f64; N];
pub type Matrix = [[f64; N]; N];
pub type IntMatrix = [[i8; N]; N];

/// Environment variable consulted for the BAS-2010 matrix file.
pub const BAS_MATRIX_ENV: &str = "APPROXDCT_BAS_MATRIX";

/// Orthonormality tolerance for the built-in transforms.
pub const ORTHO_TOL: f64 = 1e-12;

/// Looser tolerance used to decide whether `apply_inverse` may use the
/// transpose. File-loaded scalings carry only a handful of decimals.
const INVERSE_ORTHO_TOL: f64 = 1e-6;

/// The proposed multiplierless kernel `T`.
#[rustfmt::skip]
pub const PROPOSED_KERNEL: IntMatrix = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 0, 1, 1, -1, -1, 0, -1, -1, -1, -1, -1],
    [1, 1, 1, 0, 0, -1, -1, -1, -1, -1, -1, 0, 0, 1, 1, 1],
    [1, 1, 1, 0, -1, -1, -1, -1, 1, 1, 1, 1, 0, -1, -1, -1],
    [1, 1, -1, -1, -1, -1, 1, 1, 1, 1, -1, -1, -1, -1, 1, 1],
    [1, 1, -1, -1, -1, 1, 1, 0, 0, -1, -1, 1, 1, 1, -1, -1],
    [1, 0, -1, -1, 1, 1, 0, -1, -1, 0, 1, 1, -1, -1, 0, 1],
    [1, 0, -1, 1, 1, 1, -1, -1, 1, 1, -1, -1, -1, 1, 0, -1],
    [1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1],
    [1, -1, -1, 1, -1, -1, 0, 1, -1, 0, 1, 1, -1, 1, 1, -1],
    [1, -1, 0, 1, -1, 0, 1, -1, -1, 1, 0, -1, 1, 0, -1, 1],
    [0, -1, 1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1, -1, 1, 0],
    [1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1, 1],
    [1, -1, 1, -1, 0, 1, -1, 1, -1, 1, -1, 0, 1, -1, 1, -1],
    [0, -1, 1, -1, 1, -1, 1, 0, 0, 1, -1, 1, -1, 1, -1, 0],
    [1, -1, 0, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, 0, 1, -1],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    Proposed,
    Dct,
    Wht,
    Bas2010,
}

impl TransformKind {
    pub const ALL: [TransformKind; 4] = [
        TransformKind::Proposed,
        TransformKind::Dct,
        TransformKind::Wht,
        TransformKind::Bas2010,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Proposed => "proposed",
            TransformKind::Dct => "dct",
            TransformKind::Wht => "wht",
            TransformKind::Bas2010 => "bas2010",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" => Ok(TransformKind::Proposed),
            "dct" => Ok(TransformKind::Dct),
            "wht" => Ok(TransformKind::Wht),
            "bas2010" | "bas-2010" | "bas" => Ok(TransformKind::Bas2010),
            _ => Err(Error::UnknownTransform(s.to_string())),
        }
    }
}

/// Row ordering of the Walsh–Hadamard matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WalshOrder {
    /// Sylvester construction order, `H[i][j] = (-1)^popcount(i & j)`.
    #[default]
    Natural,
    /// Rows sorted by number of sign changes.
    Sequency,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelMatrix {
    Integer(IntMatrix),
    Real(Matrix),
}

impl KernelMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        match self {
            KernelMatrix::Integer(k) => f64::from(k[row][col]),
            KernelMatrix::Real(k) => k[row][col],
        }
    }

    pub fn as_integer(&self) -> Option<&IntMatrix> {
        match self {
            KernelMatrix::Integer(k) => Some(k),
            KernelMatrix::Real(_) => None,
        }
    }

    pub fn to_real(&self) -> Matrix {
        let mut out = [[0.0; N]; N];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.get(r, c);
            }
        }
        out
    }
}

/// Diagonal normalizer applied to kernel rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingDiagonal(pub Vector);

impl ScalingDiagonal {
    pub fn identity() -> Self {
        ScalingDiagonal([1.0; N])
    }

    pub fn uniform(value: f64) -> Self {
        ScalingDiagonal([value; N])
    }

    /// `d_m = 1 / ‖row m‖`, which makes an orthogonal kernel orthonormal.
    pub fn from_row_norms(kernel: &IntMatrix) -> Self {
        let mut d = [0.0; N];
        for (m, row) in kernel.iter().enumerate() {
            let sq: i32 = row.iter().map(|&v| i32::from(v) * i32::from(v)).sum();
            d[m] = if sq == 0 {
                0.0
            } else {
                1.0 / f64::from(sq).sqrt()
            };
        }
        ScalingDiagonal(d)
    }

    pub fn values(&self) -> &Vector {
        &self.0
    }
}

/// A named 16×16 transform `diag(scaling) · kernel`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSpec {
    kind: TransformKind,
    kernel: KernelMatrix,
    scaling: ScalingDiagonal,
    external: bool,
}

impl TransformSpec {
    pub fn new(kind: TransformKind, kernel: KernelMatrix, scaling: ScalingDiagonal) -> Self {
        TransformSpec {
            kind,
            kernel,
            scaling,
            external: false,
        }
    }

    /// Integer kernel normalized by its row norms.
    pub fn from_integer_kernel(kind: TransformKind, kernel: IntMatrix) -> Self {
        let scaling = ScalingDiagonal::from_row_norms(&kernel);
        Self::new(kind, KernelMatrix::Integer(kernel), scaling)
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn kernel(&self) -> &KernelMatrix {
        &self.kernel
    }

    pub fn scaling(&self) -> &ScalingDiagonal {
        &self.scaling
    }

    /// True for comparators whose data comes from outside this crate.
    pub fn is_external(&self) -> bool {
        self.external
    }

    pub fn scaled_row(&self, m: usize) -> Vector {
        let d = self.scaling.0[m];
        std::array::from_fn(|n| d * self.kernel.get(m, n))
    }

    pub fn scaled_matrix(&self) -> Matrix {
        std::array::from_fn(|m| self.scaled_row(m))
    }

    /// `‖Â·Âᵀ − I‖∞` (largest absolute entry).
    pub fn orthogonality_error(&self) -> f64 {
        let a = self.scaled_matrix();
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                let dot: f64 = (0..N).map(|n| a[i][n] * a[j][n]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonality_error() < INVERSE_ORTHO_TOL
    }

    /// Integer Gram diagonal of `K·Kᵀ`, or `None` when the kernel is real or
    /// the Gram matrix has off-diagonal entries.
    pub fn integer_gram_diagonal(&self) -> Option<[i32; N]> {
        let k = self.kernel.as_integer()?;
        let mut diag = [0i32; N];
        for i in 0..N {
            for j in 0..N {
                let dot: i32 = (0..N)
                    .map(|n| i32::from(k[i][n]) * i32::from(k[j][n]))
                    .sum();
                if i == j {
                    diag[i] = dot;
                } else if dot != 0 {
                    return None;
                }
            }
        }
        Some(diag)
    }

    /// `kernel · x` in exact integer arithmetic. `None` for real kernels.
    pub fn kernel_product_int(&self, x: &[i32; N]) -> Option<[i64; N]> {
        let k = self.kernel.as_integer()?;
        Some(std::array::from_fn(|m| {
            k[m].iter()
                .zip(x)
                .map(|(&a, &v)| i64::from(a) * i64::from(v))
                .sum()
        }))
    }

    pub fn forward(&self, x: &Vector) -> Vector {
        let d = &self.scaling.0;
        match &self.kernel {
            KernelMatrix::Integer(k) => std::array::from_fn(|m| {
                // ±1/0 kernels: add or subtract, no products.
                let mut acc = 0.0;
                for (&a, &v) in k[m].iter().zip(x) {
                    match a {
                        0 => {}
                        1 => acc += v,
                        -1 => acc -= v,
                        a => acc += f64::from(a) * v,
                    }
                }
                d[m] * acc
            }),
            KernelMatrix::Real(k) => {
                std::array::from_fn(|m| d[m] * k[m].iter().zip(x).map(|(a, v)| a * v).sum::<f64>())
            }
        }
    }

    /// `Âᵀ · y`; requires an orthogonal scaled matrix.
    pub fn inverse(&self, y: &Vector) -> Result<Vector> {
        if !self.is_orthogonal() {
            return Err(Error::NotInvertibleAsTranspose(self.name().to_string()));
        }
        let a = self.scaled_matrix();
        Ok(std::array::from_fn(|n| {
            (0..N).map(|m| a[m][n] * y[m]).sum()
        }))
    }
}

/// The proposed transform `Ĉ = D·T`.
pub fn build_proposed() -> TransformSpec {
    TransformSpec::from_integer_kernel(TransformKind::Proposed, PROPOSED_KERNEL)
}

/// Orthonormal DCT-II computed from the closed form; the scaling is folded
/// into the kernel so the scaling vector is all ones.
pub fn build_exact_dct() -> TransformSpec {
    let nf = N as f64;
    let kernel: Matrix = std::array::from_fn(|k| {
        let beta = if k == 0 { 1.0 / 2f64.sqrt() } else { 1.0 };
        std::array::from_fn(|n| {
            beta * (2.0 / nf).sqrt() * (PI * (2 * n + 1) as f64 * k as f64 / (2.0 * nf)).cos()
        })
    });
    TransformSpec::new(
        TransformKind::Dct,
        KernelMatrix::Real(kernel),
        ScalingDiagonal::identity(),
    )
}

pub fn build_wht() -> TransformSpec {
    build_wht_ordered(WalshOrder::default())
}

pub fn build_wht_ordered(order: WalshOrder) -> TransformSpec {
    let natural: IntMatrix = std::array::from_fn(|i| {
        std::array::from_fn(|j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })
    });
    let kernel = match order {
        WalshOrder::Natural => natural,
        WalshOrder::Sequency => {
            let mut rows = natural.to_vec();
            rows.sort_by_key(|row| sign_changes(row));
            std::array::from_fn(|i| rows[i])
        }
    };
    TransformSpec::new(
        TransformKind::Wht,
        KernelMatrix::Integer(kernel),
        ScalingDiagonal::uniform(0.25),
    )
}

pub(crate) fn sign_changes(row: &[i8]) -> usize {
    row.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Default location of the BAS-2010 matrix file inside the crate.
pub fn bundled_bas_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("bas2010.txt")
}

/// Loads BAS-2010 from `$APPROXDCT_BAS_MATRIX`, falling back to the bundled
/// data file.
pub fn build_bas2010() -> Result<TransformSpec> {
    let path = std::env::var_os(BAS_MATRIX_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(bundled_bas_path);
    build_bas2010_from(&path)
}

pub fn build_bas2010_from(path: &Path) -> Result<TransformSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ComparatorUnavailable(format!("{}: {e}", path.display())))?;
    parse_bas2010(&text)
}

/// Parses the comparator file: 16 lines of 16 integers followed by a line of
/// 16 scaling values. Blank lines and `#` comments are ignored.
pub fn parse_bas2010(text: &str) -> Result<TransformSpec> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.len() != N + 1 {
        return Err(Error::ComparatorUnavailable(format!(
            "expected {} non-empty lines, found {}",
            N + 1,
            lines.len()
        )));
    }
    let mut kernel = [[0i8; N]; N];
    for (m, line) in lines[..N].iter().enumerate() {
        let row: Vec<i8> = line
            .split_whitespace()
            .map(|t| t.parse::<i8>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::ComparatorUnavailable(format!("row {m}: {e}")))?;
        if row.len() != N {
            return Err(Error::ComparatorUnavailable(format!(
                "row {m} has {} entries",
                row.len()
            )));
        }
        kernel[m].copy_from_slice(&row);
    }
    let scaling: Vec<f64> = lines[N]
        .split_whitespace()
        .map(parse_real)
        .collect::<Result<_>>()?;
    if scaling.len() != N || scaling.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
        return Err(Error::ComparatorUnavailable(
            "scaling line must hold 16 positive reals".into(),
        ));
    }
    let mut spec = TransformSpec::new(
        TransformKind::Bas2010,
        KernelMatrix::Integer(kernel),
        ScalingDiagonal(std::array::from_fn(|i| scaling[i])),
    );
    spec.external = true;
    Ok(spec)
}

// Accepts plain decimals and `1/x` or `1/sqrt(x)` shorthands.
fn parse_real(token: &str) -> Result<f64> {
    let bad = || Error::ComparatorUnavailable(format!("bad scaling value `{token}`"));
    if let Some(den) = token.strip_prefix("1/") {
        let den = if let Some(inner) = den.strip_prefix("sqrt(").and_then(|s| s.strip_suffix(')')) {
            inner.parse::<f64>().map_err(|_| bad())?.sqrt()
        } else {
            den.parse::<f64>().map_err(|_| bad())?
        };
        return Ok(1.0 / den);
    }
    token.parse::<f64>().map_err(|_| bad())
}

/// Builds a spec by name. `bas2010` uses `bas_path` when given.
pub fn build(kind: TransformKind, bas_path: Option<&Path>) -> Result<TransformSpec> {
    match kind {
        TransformKind::Proposed => Ok(build_proposed()),
        TransformKind::Dct => Ok(build_exact_dct()),
        TransformKind::Wht => Ok(build_wht()),
        TransformKind::Bas2010 => match bas_path {
            Some(p) => build_bas2010_from(p),
            None => build_bas2010(),
        },
    }
}

pub fn apply_forward(spec: &TransformSpec, x: &Vector) -> Vector {
    spec.forward(x)
}

pub fn apply_inverse(spec: &TransformSpec, y: &Vector) -> Result<Vector> {
    spec.inverse(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn proposed_entries_from_printed_matrix() {
        let k = PROPOSED_KERNEL;
        assert_eq!(k[0][0], 1);
        assert_eq!(k[1][5], 0);
        assert_eq!(k[15][13], 0);
        assert!(k.iter().flatten().all(|v| (-1..=1).contains(v)));
        assert!(k[0].iter().all(|&v| v == 1));
        assert_eq!(k[1].iter().filter(|&&v| v != 0).count(), 14);
    }

    #[test]
    fn proposed_gram_is_diagonal_with_period_four_pattern() {
        let diag = build_proposed()
            .integer_gram_diagonal()
            .expect("diagonal Gram");
        for (m, &v) in diag.iter().enumerate() {
            assert_eq!(v, [16, 14, 12, 14][m % 4], "row {m}");
        }
    }

    #[test]
    fn proposed_scaling_pattern() {
        let d = build_proposed().scaling().0;
        let expect = [
            0.25,
            1.0 / 14f64.sqrt(),
            1.0 / (2.0 * 3f64.sqrt()),
            1.0 / 14f64.sqrt(),
        ];
        for m in 0..N {
            assert!((d[m] - expect[m % 4]).abs() < 1e-15);
        }
    }

    #[test]
    fn builtin_transforms_are_orthonormal() {
        for spec in [
            build_proposed(),
            build_exact_dct(),
            build_wht(),
            build_wht_ordered(WalshOrder::Sequency),
        ] {
            assert!(spec.orthogonality_error() < ORTHO_TOL, "{}", spec.name());
        }
    }

    #[test]
    fn proposed_times_ones() {
        let spec = build_proposed();
        let prod = spec.kernel_product_int(&[1; N]).unwrap();
        let mut expect = [0i64; N];
        expect[0] = 16;
        assert_eq!(prod, expect);
        let y = spec.forward(&[1.0; N]);
        let mut e = [0.0; N];
        e[0] = 4.0;
        assert!(close(&y, &e, 1e-15));
    }

    #[test]
    fn forward_of_first_basis_vector_is_scaled_first_column() {
        let spec = build_proposed();
        let mut e1 = [0.0; N];
        e1[0] = 1.0;
        let y = spec.forward(&e1);
        let d = spec.scaling().0;
        for m in 0..N {
            assert_eq!(y[m], d[m] * f64::from(PROPOSED_KERNEL[m][0]));
        }
    }

    #[test]
    fn identity_spec_is_identity() {
        let id: IntMatrix = std::array::from_fn(|i| std::array::from_fn(|j| i8::from(i == j)));
        let spec = TransformSpec::new(
            TransformKind::Proposed,
            KernelMatrix::Integer(id),
            ScalingDiagonal::identity(),
        );
        let x: Vector = std::array::from_fn(|i| i as f64 * 0.5 - 3.0);
        assert_eq!(spec.forward(&x), x);
    }

    #[test]
    fn dct_rows() {
        let c = build_exact_dct().scaled_matrix();
        assert!(c[0].iter().all(|&v| (v - 0.25).abs() < 1e-15));
        let p = build_proposed().scaled_matrix();
        for m in [0, 8] {
            assert!(close(&c[m], &p[m], 1e-15), "row {m}");
        }
        assert!(c[8].iter().all(|v| (v.abs() - 0.25).abs() < 1e-15));
    }

    #[test]
    fn wht_entries_and_orders() {
        let nat = build_wht();
        let k = nat.kernel().as_integer().unwrap();
        assert!(k.iter().flatten().all(|&v| v == 1 || v == -1));
        let seq = build_wht_ordered(WalshOrder::Sequency);
        let ks = seq.kernel().as_integer().unwrap();
        for (i, row) in ks.iter().enumerate() {
            assert_eq!(sign_changes(row), i);
        }
        // natural order: row i has sign changes equal to the Gray-decoded bit reversal of i
        assert_eq!(sign_changes(&k[1]), 15);
        assert_eq!(sign_changes(&k[8]), 1);
    }

    #[test]
    fn round_trips() {
        let x: Vector = std::array::from_fn(|i| (i + 1) as f64);
        for spec in [build_proposed(), build_exact_dct(), build_wht()] {
            let back = spec.inverse(&spec.forward(&x)).unwrap();
            assert!(close(&back, &x, 1e-10), "{}", spec.name());
        }
        let mut y = [0.0; N];
        y[0] = 4.0;
        let ones = build_proposed().inverse(&y).unwrap();
        assert!(close(&ones, &[1.0; N], 1e-12));
    }

    #[test]
    fn non_orthogonal_inverse_is_rejected() {
        let mut k = PROPOSED_KERNEL;
        k[1][5] = 1;
        let spec = TransformSpec::new(
            TransformKind::Proposed,
            KernelMatrix::Integer(k),
            *build_proposed().scaling(),
        );
        assert!(matches!(
            spec.inverse(&[0.0; N]),
            Err(Error::NotInvertibleAsTranspose(_))
        ));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("WHT".parse::<TransformKind>().unwrap(), TransformKind::Wht);
        assert_eq!(
            "bas2010".parse::<TransformKind>().unwrap(),
            TransformKind::Bas2010
        );
        assert!(matches!(
            "foo".parse::<TransformKind>(),
            Err(Error::UnknownTransform(_))
        ));
    }

    fn sample_bas_file() -> String {
        // Sequency WHT stands in for the comparator in format tests.
        let wht = build_wht_ordered(WalshOrder::Sequency);
        let k = wht.kernel().as_integer().unwrap();
        let mut s = String::from("# synthetic comparator\n");
        for row in k {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s.push_str(&vec!["0.25"; N].join(" "));
        s.push('\n');
        s
    }

    #[test]
    fn bas_file_parses() {
        let spec = parse_bas2010(&sample_bas_file()).unwrap();
        assert_eq!(spec.kind(), TransformKind::Bas2010);
        assert!(spec.is_external());
        assert!(spec.orthogonality_error() < 1e-12);
    }

    #[test]
    fn bas_scaling_shorthands() {
        assert_eq!(parse_real("1/4").unwrap(), 0.25);
        assert!((parse_real("1/sqrt(14)").unwrap() - 1.0 / 14f64.sqrt()).abs() < 1e-16);
        assert!(parse_real("x").is_err());
    }

    #[test]
    fn bas_file_errors() {
        let missing = build_bas2010_from(Path::new("/nonexistent/bas2010.txt"));
        assert!(matches!(missing, Err(Error::ComparatorUnavailable(_))));
        let truncated: String = sample_bas_file()
            .lines()
            .take(10)
            .collect::<Vec<_>>()
            .join("\n");
        assert!(matches!(
            parse_bas2010(&truncated),
            Err(Error::ComparatorUnavailable(_))
        ));
        let bad = sample_bas_file().replace("0.25 0.25", "0.25 -1");
        assert!(matches!(
            parse_bas2010(&bad),
            Err(Error::ComparatorUnavailable(_))
        ));
    }
}
