//! Frequency-domain distance between an approximation and the exact DCT.
//!
//! Row `m` of a transform is read as a 16-tap FIR filter. `D_m(ω)` is the
//! squared magnitude of the difference of the two transfer functions and
//! `ε_m` its integral over `[0, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::transforms::{build_exact_dct, TransformSpec, Vector, N};

/// Absolute tolerance for the `ε_m` quadrature.
pub const ENERGY_TOL: f64 = 1e-8;

/// Grid size used for plot data.
pub const DEFAULT_GRID: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowFilter {
    pub index: usize,
    pub coefficients: Vector,
}

impl RowFilter {
    pub fn from_spec(spec: &TransformSpec, m: usize) -> Self {
        RowFilter {
            index: m,
            coefficients: spec.scaled_row(m),
        }
    }
}

/// `H(ω) = Σ h[n]·e^{−jnω}`.
pub fn transfer_function(row: &RowFilter, omega: f64) -> Complex64 {
    row.coefficients
        .iter()
        .enumerate()
        .map(|(n, &h)| Complex64::from_polar(h, -(n as f64) * omega))
        .sum()
}

fn difference(approx: &RowFilter, reference: &RowFilter) -> Result<RowFilter> {
    if approx.index != reference.index {
        return Err(Error::RowMismatch {
            approx: approx.index,
            reference: reference.index,
        });
    }
    Ok(RowFilter {
        index: approx.index,
        coefficients: std::array::from_fn(|n| reference.coefficients[n] - approx.coefficients[n]),
    })
}

// |H_C(ω) − H_A(ω)|² = |Σ d_n e^{−jnω}|² with d = c − a.
fn distance_at(diff: &RowFilter, omega: f64) -> f64 {
    transfer_function(diff, omega).norm_sqr()
}

/// `D_m(ω)` on each grid point.
pub fn distance_curve(approx: &RowFilter, dct: &RowFilter, grid: &[f64]) -> Result<Vec<f64>> {
    let diff = difference(approx, dct)?;
    Ok(grid.iter().map(|&w| distance_at(&diff, w)).collect())
}

/// `ε_m` by adaptive quadrature of `D_m` over `[0, π]`.
pub fn error_energy(approx: &TransformSpec, m: usize) -> Result<f64> {
    error_energy_against(approx, &build_exact_dct(), m)
}

pub fn error_energy_against(approx: &TransformSpec, dct: &TransformSpec, m: usize) -> Result<f64> {
    if m >= N {
        return Err(Error::InvalidArgument(format!(
            "row index {m} outside 0..16"
        )));
    }
    let diff = difference(
        &RowFilter::from_spec(approx, m),
        &RowFilter::from_spec(dct, m),
    )?;
    let est = quadrature::integrate(|w| distance_at(&diff, w), 0.0, PI, ENERGY_TOL)?;
    Ok(est.value)
}

/// `n` evenly spaced points covering `[0, π]` inclusive.
pub fn uniform_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid size {n} must be at least 2"
        )));
    }
    let step = PI / (n - 1) as f64;
    Ok((0..n)
        .map(|k| if k == n - 1 { PI } else { k as f64 * step })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub transform: String,
    pub energies: [f64; N],
    pub total: f64,
    pub grid: Vec<f64>,
    /// `curves[m][k] = D_m(grid[k])`, all sixteen rows.
    pub curves: Vec<Vec<f64>>,
}

pub fn full_report(approx: &TransformSpec, grid_size: usize) -> Result<SpectralReport> {
    let dct = build_exact_dct();
    let grid = uniform_grid(grid_size)?;
    let mut energies = [0.0; N];
    let mut curves = Vec::with_capacity(N);
    for m in 0..N {
        energies[m] = error_energy_against(approx, &dct, m)?;
        curves.push(distance_curve(
            &RowFilter::from_spec(approx, m),
            &RowFilter::from_spec(&dct, m),
            &grid,
        )?);
    }
    Ok(SpectralReport {
        transform: approx.name().to_string(),
        energies,
        total: energies.iter().sum(),
        grid,
        curves,
    })
}
