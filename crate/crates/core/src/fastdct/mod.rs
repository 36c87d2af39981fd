//! Decimation-in-frequency factorization of the proposed kernel.
//!
//! ```text
//! T = P · diag(B2, B̄2, E, O) · diag(B4, I12) · diag(B8, I8) · B16
//! O = O' + S,   O' = M · (I4 ⊗ B2)
//! ```
//!
//! Every stage works on `i32` samples with checked arithmetic, and every
//! addition, subtraction and sign inversion is tallied in [`OpCounts`].

mod bitgrowth;

pub use bitgrowth::{
    analyze_bit_growth, analyze_bit_growth_with, signed_width, BitGrowthReport, InputDomain,
    StageBound, STANDARD_WIDTHS,
};

use crate::error::{Error, Result};
use crate::transforms::{IntMatrix, N, PROPOSED_KERNEL};

/// Even-odd block.
#[rustfmt::skip]
pub const E_BLOCK: [[i8; 4]; 4] = [
    [0, 1, 1, 1],
    [-1, -1, 0, 1],
    [1, 0, -1, 1],
    [-1, 1, -1, 0],
];

/// Odd block.
#[rustfmt::skip]
pub const O_BLOCK: [[i8; 8]; 8] = [
    [1, 1, 0, 1, 1, 1, 1, 1],
    [-1, -1, -1, -1, 0, 1, 1, 1],
    [0, 1, 1, -1, -1, -1, 1, 1],
    [-1, -1, 1, 1, 1, -1, 0, 1],
    [1, 0, -1, -1, 1, -1, -1, 1],
    [-1, 1, 1, -1, 1, 1, -1, 0],
    [1, -1, 1, 0, -1, 1, -1, 1],
    [-1, 1, -1, 1, -1, 0, -1, 1],
];

/// Left factor of `O' = M · (I4 ⊗ B2)`.
#[rustfmt::skip]
pub const M_BLOCK: [[i8; 8]; 8] = [
    [1, 0, 0, 0, 1, 0, 1, 0],
    [-1, 0, -1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, -1, 0, 1, 0],
    [-1, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, -1, 0, 0, 1, 0, -1],
    [0, -1, 0, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, -1, 0, -1],
    [0, -1, 0, -1, 0, 0, 0, -1],
];

/// Reflected two-point butterfly `B2 · Ī2`.
pub const B2_BAR: [[i8; 2]; 2] = [[1, 1], [-1, 1]];

/// Output positions of the final permutation: stage output `j` lands at
/// `PERMUTATION[j]` (one-based column list `e1, e9, e5, e13, …, e16`).
pub const PERMUTATION: [usize; N] = [0, 8, 4, 12, 2, 6, 10, 14, 1, 3, 5, 7, 9, 11, 13, 15];

/// Arithmetic tally of one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub additions: usize,
    pub multiplications: usize,
    pub shifts: usize,
    /// Sign inversions of a single operand. Not additions; absorbed into the
    /// next adder's sign in hardware.
    pub negations: usize,
}

impl OpCounts {
    fn add(&mut self, a: i32, b: i32) -> Result<i32> {
        self.additions += 1;
        a.checked_add(b)
            .ok_or(Error::ArithmeticOverflow("addition"))
    }

    fn sub(&mut self, a: i32, b: i32) -> Result<i32> {
        self.additions += 1;
        a.checked_sub(b)
            .ok_or(Error::ArithmeticOverflow("subtraction"))
    }

    fn neg(&mut self, a: i32) -> Result<i32> {
        self.negations += 1;
        a.checked_neg().ok_or(Error::ArithmeticOverflow("negation"))
    }

    fn signed_add(&mut self, acc: i32, coeff: i8, v: i32) -> Result<i32> {
        if coeff > 0 {
            self.add(acc, v)
        } else {
            self.sub(acc, v)
        }
    }
}

/// Row-major matrix with entries in {−1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignedMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::FactorizationInconsistent(format!(
                "{rows}x{cols} matrix given {} entries",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::FactorizationInconsistent(
                "sparse stage entries must lie in {-1, 0, 1}".into(),
            ));
        }
        Ok(SignedMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<const R: usize, const C: usize>(rows: &[[i8; C]; R]) -> Result<Self> {
        Self::new(R, C, rows.iter().flatten().copied().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0).count()
    }

    /// Row sums computed with `nnz − 1` additions per row. A row with only
    /// negative entries needs one extra sign inversion.
    fn apply(&self, x: &[i32], ops: &mut OpCounts) -> Result<Vec<i32>> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let terms: Vec<(i8, i32)> = row
                .iter()
                .zip(x)
                .filter(|(c, _)| **c != 0)
                .map(|(&c, &v)| (c, v))
                .collect();
            let Some(lead) = terms.iter().position(|(c, _)| *c > 0) else {
                // all negative: −(a + b + …)
                let mut acc = match terms.first() {
                    Some(&(_, v)) => v,
                    None => {
                        out.push(0);
                        continue;
                    }
                };
                for &(_, v) in &terms[1..] {
                    acc = ops.add(acc, v)?;
                }
                out.push(ops.neg(acc)?);
                continue;
            };
            let mut acc = terms[lead].1;
            for (i, &(c, v)) in terms.iter().enumerate() {
                if i != lead {
                    acc = ops.signed_add(acc, c, v)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// One sparse stage of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Stage {
    /// `B_n = [[I, Ī], [Ī, −I]]`.
    Butterfly(usize),
    Identity(usize),
    Sparse(SignedMatrix),
    /// `I_copies ⊗ B_size`.
    KroneckerButterfly {
        copies: usize,
        size: usize,
    },
    BlockDiag(Vec<Stage>),
    /// `path(x) + correction · x`; realizes `O = O' + S`.
    Corrected {
        path: Vec<Stage>,
        correction: SignedMatrix,
    },
    /// `y[sigma[j]] = x[j]`.
    Permutation(Vec<usize>),
    /// A stage shown under its block name in labels.
    Named(&'static str, Box<Stage>),
}

impl Stage {
    pub fn width(&self) -> usize {
        match self {
            Stage::Butterfly(n) | Stage::Identity(n) => *n,
            Stage::Sparse(m) => m.cols(),
            Stage::KroneckerButterfly { copies, size } => copies * size,
            Stage::BlockDiag(parts) => parts.iter().map(Stage::width).sum(),
            Stage::Corrected { correction, .. } => correction.cols(),
            Stage::Permutation(sigma) => sigma.len(),
            Stage::Named(_, inner) => inner.width(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Stage::Butterfly(n) => format!("B{n}"),
            Stage::Identity(n) => format!("I{n}"),
            Stage::Sparse(m) => format!("sparse{}x{}", m.rows(), m.cols()),
            Stage::KroneckerButterfly { copies, size } => format!("I{copies}(x)B{size}"),
            Stage::BlockDiag(parts) => {
                let inner: Vec<String> = parts.iter().map(Stage::label).collect();
                format!("diag({})", inner.join(", "))
            }
            Stage::Corrected { path, .. } => {
                let inner: Vec<String> = path.iter().rev().map(Stage::label).collect();
                format!("({}) + S", inner.join(" * "))
            }
            Stage::Permutation(_) => "P".to_string(),
            Stage::Named(name, _) => (*name).to_string(),
        }
    }

    /// Checks structural invariants: sparse entries and permutation bijectivity.
    pub fn validate(&self) -> Result<()> {
        match self {
            Stage::Butterfly(n) if n % 2 != 0 || *n == 0 => Err(Error::FactorizationInconsistent(
                format!("butterfly size {n} must be even"),
            )),
            Stage::BlockDiag(parts) => parts.iter().try_for_each(Stage::validate),
            Stage::Named(_, inner) => inner.validate(),
            Stage::Corrected { path, correction } => {
                path.iter().try_for_each(Stage::validate)?;
                for r in 0..correction.rows() {
                    if correction.row(r).iter().filter(|&&v| v != 0).count() > 1 {
                        return Err(Error::FactorizationInconsistent(format!(
                            "correction row {r} has more than one nonzero"
                        )));
                    }
                }
                Ok(())
            }
            Stage::Permutation(sigma) => {
                let mut seen = vec![false; sigma.len()];
                for &s in sigma {
                    if s >= sigma.len() || std::mem::replace(&mut seen[s], true) {
                        return Err(Error::FactorizationInconsistent(
                            "permutation is not a bijection".into(),
                        ));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, x: &[i32], ops: &mut OpCounts) -> Result<Vec<i32>> {
        debug_assert_eq!(x.len(), self.width());
        match self {
            Stage::Butterfly(n) => {
                let h = n / 2;
                let mut y = vec![0; *n];
                for i in 0..h {
                    y[i] = ops.add(x[i], x[n - 1 - i])?;
                    y[h + i] = ops.sub(x[h - 1 - i], x[h + i])?;
                }
                Ok(y)
            }
            Stage::Identity(_) => Ok(x.to_vec()),
            Stage::Sparse(m) => m.apply(x, ops),
            Stage::KroneckerButterfly { copies, size } => {
                let b = Stage::Butterfly(*size);
                let mut y = Vec::with_capacity(copies * size);
                for chunk in x.chunks(*size) {
                    y.extend(b.apply(chunk, ops)?);
                }
                Ok(y)
            }
            Stage::BlockDiag(parts) => {
                let mut y = Vec::with_capacity(x.len());
                let mut at = 0;
                for part in parts {
                    let w = part.width();
                    y.extend(part.apply(&x[at..at + w], ops)?);
                    at += w;
                }
                Ok(y)
            }
            Stage::Corrected { path, correction } => {
                let mut y = x.to_vec();
                for stage in path {
                    y = stage.apply(&y, ops)?;
                }
                for (r, out) in y.iter_mut().enumerate() {
                    if let Some((c, &s)) =
                        correction.row(r).iter().enumerate().find(|(_, s)| **s != 0)
                    {
                        *out = ops.signed_add(*out, s, x[c])?;
                    }
                }
                Ok(y)
            }
            Stage::Permutation(sigma) => {
                let mut y = vec![0; sigma.len()];
                for (j, &s) in sigma.iter().enumerate() {
                    y[s] = x[j];
                }
                Ok(y)
            }
            Stage::Named(_, inner) => inner.apply(x, ops),
        }
    }
}

/// The full stage pipeline, applied input to output.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedTransform {
    stages: Vec<Stage>,
    addition_count: usize,
}

impl FactorizedTransform {
    pub fn new(stages: Vec<Stage>) -> Result<Self> {
        let mut width = N;
        for stage in &stages {
            stage.validate()?;
            if stage.width() != width {
                return Err(Error::FactorizationInconsistent(format!(
                    "stage {} has width {} but receives {width} samples",
                    stage.label(),
                    stage.width()
                )));
            }
            width = stage.width();
        }
        let mut ft = FactorizedTransform {
            stages,
            addition_count: 0,
        };
        // The stage structure is data independent, so any probe gives the count.
        let (_, ops) = ft.forward_counted(&[1; N])?;
        ft.addition_count = ops.additions;
        Ok(ft)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn addition_count(&self) -> usize {
        self.addition_count
    }

    pub fn forward(&self, x: &[i32; N]) -> Result<[i32; N]> {
        self.forward_counted(x).map(|(y, _)| y)
    }

    pub fn forward_counted(&self, x: &[i32; N]) -> Result<([i32; N], OpCounts)> {
        let mut ops = OpCounts::default();
        let mut y = x.to_vec();
        for stage in &self.stages {
            y = stage.apply(&y, &mut ops)?;
        }
        let out: [i32; N] = y.try_into().map_err(|_| {
            Error::FactorizationInconsistent("pipeline does not produce 16 outputs".into())
        })?;
        Ok((out, ops))
    }

    /// Output of every top-level stage, in order.
    pub fn trace(&self, x: &[i32; N]) -> Result<Vec<Vec<i32>>> {
        let mut ops = OpCounts::default();
        let mut y = x.to_vec();
        let mut out = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            y = stage.apply(&y, &mut ops)?;
            out.push(y.clone());
        }
        Ok(out)
    }

    /// The matrix realized by the pipeline, recovered column by column.
    pub fn to_matrix(&self) -> Result<[[i32; N]; N]> {
        let mut m = [[0i32; N]; N];
        for j in 0..N {
            let mut e = [0; N];
            e[j] = 1;
            let col = self.forward(&e)?;
            for i in 0..N {
                m[i][j] = col[i];
            }
        }
        Ok(m)
    }
}

/// `S = O − M · (I4 ⊗ B2)`, checked to have at most one ±1 per row.
pub fn derive_s() -> Result<SignedMatrix> {
    let mut entries = Vec::with_capacity(64);
    for r in 0..8 {
        for c in 0..8 {
            // (I4 ⊗ B2)[k][c] is nonzero only within c's pair.
            let pair = c / 2 * 2;
            let kron = |k: usize| -> i32 {
                if k / 2 * 2 != pair {
                    0
                } else if k % 2 == 1 && c % 2 == 1 {
                    -1
                } else {
                    1
                }
            };
            let prime: i32 = (0..8).map(|k| i32::from(M_BLOCK[r][k]) * kron(k)).sum();
            let s = i32::from(O_BLOCK[r][c]) - prime;
            if !(-1..=1).contains(&s) {
                return Err(Error::FactorizationInconsistent(format!(
                    "S[{r}][{c}] = {s} is outside {{-1, 0, 1}}"
                )));
            }
            entries.push(s as i8);
        }
        let nnz = entries[r * 8..].iter().filter(|&&v| v != 0).count();
        if nnz > 1 {
            return Err(Error::FactorizationInconsistent(format!(
                "S row {r} has {nnz} nonzeros"
            )));
        }
    }
    SignedMatrix::new(8, 8, entries)
}

pub fn build_factorization() -> Result<FactorizedTransform> {
    let s = derive_s()?;
    let odd = Stage::Corrected {
        path: vec![
            Stage::KroneckerButterfly { copies: 4, size: 2 },
            Stage::Named(
                "M",
                Box::new(Stage::Sparse(SignedMatrix::from_rows(&M_BLOCK)?)),
            ),
        ],
        correction: s,
    };
    FactorizedTransform::new(vec![
        Stage::Butterfly(16),
        Stage::BlockDiag(vec![Stage::Butterfly(8), Stage::Identity(8)]),
        Stage::BlockDiag(vec![Stage::Butterfly(4), Stage::Identity(12)]),
        Stage::BlockDiag(vec![
            Stage::Butterfly(2),
            Stage::Named(
                "B2bar",
                Box::new(Stage::Sparse(SignedMatrix::from_rows(&B2_BAR)?)),
            ),
            Stage::Named(
                "E",
                Box::new(Stage::Sparse(SignedMatrix::from_rows(&E_BLOCK)?)),
            ),
            Stage::Named("O", Box::new(odd)),
        ]),
        Stage::Permutation(PERMUTATION.to_vec()),
    ])
}

/// `T · x` through the fast pipeline.
pub fn fast_forward(x: &[i32; N]) -> Result<[i32; N]> {
    static PIPELINE: std::sync::OnceLock<FactorizedTransform> = std::sync::OnceLock::new();
    let ft =
        PIPELINE.get_or_init(|| build_factorization().expect("built-in factorization is valid"));
    ft.forward(x)
}

/// `kernel · x` by direct sparse row sums, with its operation count.
pub fn direct_forward_with(kernel: &IntMatrix, x: &[i32; N]) -> Result<([i32; N], OpCounts)> {
    let m = SignedMatrix::new(N, N, kernel.iter().flatten().copied().collect())?;
    let mut ops = OpCounts::default();
    let y = m.apply(x, &mut ops)?;
    Ok((std::array::from_fn(|i| y[i]), ops))
}

pub fn direct_forward(x: &[i32; N]) -> Result<([i32; N], OpCounts)> {
    direct_forward_with(&PROPOSED_KERNEL, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(j: usize) -> [i32; N] {
        std::array::from_fn(|i| i32::from(PROPOSED_KERNEL[i][j]))
    }

    #[test]
    fn basis_vectors_give_columns_of_t() {
        let ft = build_factorization().unwrap();
        for j in 0..N {
            let mut e = [0; N];
            e[j] = 1;
            assert_eq!(ft.forward(&e).unwrap(), column(j), "column {j}");
        }
    }

    #[test]
    fn first_column_matches_printed_first_entries() {
        let mut e1 = [0; N];
        e1[0] = 1;
        assert_eq!(
            fast_forward(&e1).unwrap(),
            [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 1]
        );
    }

    #[test]
    fn ones_and_zeros() {
        let mut expect = [0; N];
        expect[0] = 16;
        assert_eq!(fast_forward(&[1; N]).unwrap(), expect);
        assert_eq!(fast_forward(&[0; N]).unwrap(), [0; N]);
    }

    #[test]
    fn counts() {
        let ft = build_factorization().unwrap();
        assert_eq!(ft.addition_count(), 72);
        let (_, ops) = ft
            .forward_counted(&[3, -1, 4, 1, -5, 9, 2, -6, 5, 3, -5, 8, 9, -7, 9, 3])
            .unwrap();
        assert_eq!((ops.additions, ops.multiplications, ops.shifts), (72, 0, 0));
        let (_, ops) = direct_forward(&[1; N]).unwrap();
        assert_eq!(ops.additions, 208);
    }

    #[test]
    fn direct_last_column() {
        let mut e = [0; N];
        e[15] = 1;
        assert_eq!(direct_forward(&e).unwrap().0, column(15));
    }

    #[test]
    fn derived_s_matches_printed_rows() {
        // The printed S repeats its first row; dropping the duplicate gives the
        // derived matrix.
        #[rustfmt::skip]
        let printed: [[i8; 8]; 9] = [
            [0, 0, 0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1],
            [1, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, -1, 0],
            [0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, -1, 0, 0, 0],
        ];
        let s = derive_s().unwrap();
        for r in 0..8 {
            let src = if r == 0 { 0 } else { r + 1 };
            assert_eq!(s.row(r), &printed[src], "row {r}");
            assert_eq!(s.row(r).iter().filter(|&&v| v != 0).count(), 1);
        }
    }

    #[test]
    fn o_prime_plus_s_reproduces_o() {
        let s = derive_s().unwrap();
        let odd = Stage::Corrected {
            path: vec![
                Stage::KroneckerButterfly { copies: 4, size: 2 },
                Stage::Sparse(SignedMatrix::from_rows(&M_BLOCK).unwrap()),
            ],
            correction: s.clone(),
        };
        for j in 0..8 {
            let mut e = vec![0; 8];
            e[j] = 1;
            let mut ops = OpCounts::default();
            let col = odd.apply(&e, &mut ops).unwrap();
            let expect: Vec<i32> = (0..8).map(|i| i32::from(O_BLOCK[i][j])).collect();
            assert_eq!(col, expect, "column {j}");
            // 8 for I4⊗B2, 16 for M, 8 for S
            assert_eq!(ops.additions, 32);
        }
        // S alone costs one signed accumulate per row
        let o_prime = Stage::Corrected {
            path: vec![
                Stage::KroneckerButterfly { copies: 4, size: 2 },
                Stage::Sparse(SignedMatrix::from_rows(&M_BLOCK).unwrap()),
            ],
            correction: SignedMatrix::new(8, 8, vec![0; 64]).unwrap(),
        };
        let mut ops = OpCounts::default();
        o_prime.apply(&[1; 8], &mut ops).unwrap();
        assert_eq!(ops.additions, 24);
    }

    #[test]
    fn permutation_row_reading_fails_the_oracle() {
        // Interpreting the column list as rows (inverse permutation) must not
        // reproduce T; this pins the convention used in PERMUTATION.
        let mut inverse = [0usize; N];
        for (j, &s) in PERMUTATION.iter().enumerate() {
            inverse[s] = j;
        }
        let mut stages = build_factorization().unwrap().stages().to_vec();
        *stages.last_mut().unwrap() = Stage::Permutation(inverse.to_vec());
        let ft = FactorizedTransform::new(stages).unwrap();
        let t: [[i32; N]; N] =
            std::array::from_fn(|i| std::array::from_fn(|j| i32::from(PROPOSED_KERNEL[i][j])));
        assert_ne!(ft.to_matrix().unwrap(), t);
    }

    #[test]
    fn stage_entries_are_signed_units() {
        assert!(SignedMatrix::new(1, 2, vec![2, 0]).is_err());
        assert!(Stage::Permutation(vec![0, 0, 1]).validate().is_err());
        assert!(Stage::Permutation(PERMUTATION.to_vec()).validate().is_ok());
    }

    #[test]
    fn overflow_is_reported() {
        let x = [i32::MAX; N];
        assert!(matches!(
            fast_forward(&x),
            Err(Error::ArithmeticOverflow(_))
        ));
        assert!(matches!(
            direct_forward(&x),
            Err(Error::ArithmeticOverflow(_))
        ));
    }

    #[test]
    fn all_negative_row_uses_negation_not_addition() {
        let m = SignedMatrix::new(1, 3, vec![-1, -1, 0]).unwrap();
        let mut ops = OpCounts::default();
        assert_eq!(m.apply(&[2, 3, 7], &mut ops).unwrap(), vec![-5]);
        assert_eq!(ops.additions, 1);
        assert_eq!(ops.negations, 1);
    }
}
