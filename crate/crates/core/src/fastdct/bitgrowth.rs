//! Word-length growth through the fast pipeline.
//!
//! Each stage output is a linear form of the input, so the exact range of
//! every intermediate value over a box of inputs follows from the composite
//! row: push the positive coefficients to one end of the box and the
//! negative ones to the other.

use super::build_factorization;
use crate::error::{Error, Result};
use crate::transforms::{N, PROPOSED_KERNEL};

/// Input word lengths the hardware study targets.
pub const STANDARD_WIDTHS: [u32; 4] = [4, 8, 12, 16];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputDomain {
    /// Pixel data, `[0, 2^W − 1]`.
    #[default]
    Unsigned,
    /// Two's complement, `[−2^(W−1), 2^(W−1) − 1]`.
    Signed,
}

impl InputDomain {
    pub fn bounds(self, width: u32) -> (i64, i64) {
        match self {
            InputDomain::Unsigned => (0, (1i64 << width) - 1),
            InputDomain::Signed => (-(1i64 << (width - 1)), (1i64 << (width - 1)) - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageBound {
    pub label: String,
    pub min: i64,
    pub max: i64,
    pub max_magnitude: i64,
    /// Signed two's complement bits holding `[min, max]`.
    pub width: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitGrowthReport {
    pub input_width: u32,
    pub domain: InputDomain,
    /// False when the width is outside {4, 8, 12, 16}.
    pub standard_width: bool,
    pub stages: Vec<StageBound>,
    pub output_width_1d: u32,
    pub max_magnitude_1d: i64,
    /// Input attaining `max_magnitude_1d` at the pipeline output.
    pub witness_1d: [i32; N],
    pub witness_1d_output: usize,
    pub output_width_2d: u32,
    pub max_magnitude_2d: i64,
    /// Block attaining `max_magnitude_2d` for `T · X · Tᵀ`.
    pub witness_2d: [[i32; N]; N],
    pub witness_2d_output: (usize, usize),
}

/// Smallest two's complement width that holds every value in `[min, max]`.
pub fn signed_width(min: i64, max: i64) -> u32 {
    let mut bits = 1;
    while min < -(1i64 << (bits - 1)) || max > (1i64 << (bits - 1)) - 1 {
        bits += 1;
    }
    bits
}

// Range of Σ coeff·x over the input box, plus the maximizing input for the
// larger-magnitude end.
fn form_range(coeffs: &[i64], lo: i64, hi: i64) -> (i64, i64, Vec<i64>) {
    let mut min = 0;
    let mut max = 0;
    for &c in coeffs {
        min += (c * lo).min(c * hi);
        max += (c * lo).max(c * hi);
    }
    let witness = if max.abs() >= min.abs() {
        coeffs
            .iter()
            .map(|&c| if c >= 0 { hi } else { lo })
            .collect()
    } else {
        coeffs
            .iter()
            .map(|&c| if c >= 0 { lo } else { hi })
            .collect()
    };
    (min, max, witness)
}

pub fn analyze_bit_growth(width: u32) -> Result<BitGrowthReport> {
    analyze_bit_growth_with(width, InputDomain::Unsigned)
}

pub fn analyze_bit_growth_with(width: u32, domain: InputDomain) -> Result<BitGrowthReport> {
    if !(1..=16).contains(&width) || (domain == InputDomain::Signed && width < 2) {
        return Err(Error::InvalidArgument(format!(
            "input width {width} outside the supported 1..=16 bits"
        )));
    }
    let (lo, hi) = domain.bounds(width);
    let ft = build_factorization()?;

    // Composite matrix after each stage, one basis vector at a time.
    let mut composites = vec![[[0i64; N]; N]; ft.stages().len()];
    for j in 0..N {
        let mut e = [0; N];
        e[j] = 1;
        for (s, out) in ft.trace(&e)?.iter().enumerate() {
            for (i, &v) in out.iter().enumerate() {
                composites[s][i][j] = i64::from(v);
            }
        }
    }

    let mut stages = Vec::with_capacity(composites.len());
    for (stage, comp) in ft.stages().iter().zip(&composites) {
        let (mut min, mut max) = (0, 0);
        for row in comp {
            let (a, b, _) = form_range(row, lo, hi);
            min = min.min(a);
            max = max.max(b);
        }
        stages.push(StageBound {
            label: stage.label(),
            min,
            max,
            max_magnitude: min.abs().max(max),
            width: signed_width(min, max),
        });
    }

    let kernel: [[i64; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| i64::from(PROPOSED_KERNEL[i][j])));

    let mut best_1d = (0i64, 0usize, vec![0i64; N]);
    let (mut min_1d, mut max_1d) = (0, 0);
    for (i, row) in kernel.iter().enumerate() {
        let (a, b, w) = form_range(row, lo, hi);
        min_1d = min_1d.min(a);
        max_1d = max_1d.max(b);
        let mag = a.abs().max(b);
        if mag > best_1d.0 {
            best_1d = (mag, i, w);
        }
    }

    // Y[i][j] = Σ_k Σ_l T[i][k] T[j][l] X[k][l]
    let mut best_2d = (0i64, (0usize, 0usize), Vec::new());
    let (mut min_2d, mut max_2d) = (0, 0);
    for i in 0..N {
        for j in 0..N {
            let coeffs: Vec<i64> = (0..N * N)
                .map(|kl| kernel[i][kl / N] * kernel[j][kl % N])
                .collect();
            let (a, b, w) = form_range(&coeffs, lo, hi);
            min_2d = min_2d.min(a);
            max_2d = max_2d.max(b);
            let mag = a.abs().max(b);
            if mag > best_2d.0 {
                best_2d = (mag, (i, j), w);
            }
        }
    }

    let to_i32 = |v: i64| i32::try_from(v).expect("inputs fit in 16 bits");
    Ok(BitGrowthReport {
        input_width: width,
        domain,
        standard_width: STANDARD_WIDTHS.contains(&width),
        stages,
        output_width_1d: signed_width(min_1d, max_1d),
        max_magnitude_1d: best_1d.0,
        witness_1d: std::array::from_fn(|k| to_i32(best_1d.2[k])),
        witness_1d_output: best_1d.1,
        output_width_2d: signed_width(min_2d, max_2d),
        max_magnitude_2d: best_2d.0,
        witness_2d: std::array::from_fn(|k| std::array::from_fn(|l| to_i32(best_2d.2[k * N + l]))),
        witness_2d_output: best_2d.1,
    })
}
