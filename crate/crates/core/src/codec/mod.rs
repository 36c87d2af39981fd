//! 16×16 block transform coding harness: separable 2-D transform, zig-zag
//! hard thresholding, reconstruction and quality measurement.

mod metrics;
mod sweep;
mod zigzag;

pub use metrics::{difference_image, mse, psnr, psnr_from_mse, uqi, UqiReference, UQI_WINDOW};
pub use sweep::{default_r_values, sweep, AverageRow, MetricRow, NamedImage, QualityReport};
pub use zigzag::{zigzag_order, RetentionPolicy, ZigzagOrder, BLOCK_LEN};

use crate::error::{Error, Result};
use crate::imageio::ImagePlane;
use crate::transforms::{KernelMatrix, Matrix, TransformSpec, N};

pub type Block = [[f64; N]; N];

// Integer path bound: kernel rows have at most 16 unit entries, so
// |T·K·Tᵀ| ≤ 256·max|K| stays far inside i64.
const INT_PATH_LIMIT: f64 = (1u64 << 40) as f64;

/// `Â · K · Âᵀ`. Integer kernels applied to integer-valued blocks are
/// evaluated as `D · (T·K·Tᵀ) · D` with the inner product in integers.
pub fn transform_block(spec: &TransformSpec, block: &Block) -> Block {
    if let KernelMatrix::Integer(t) = spec.kernel() {
        let integral = block
            .iter()
            .flatten()
            .all(|&v| v.fract() == 0.0 && v.abs() < INT_PATH_LIMIT);
        if integral {
            let k: [[i64; N]; N] =
                std::array::from_fn(|i| std::array::from_fn(|j| block[i][j] as i64));
            let mut tk = [[0i64; N]; N];
            for i in 0..N {
                for j in 0..N {
                    tk[i][j] = (0..N).map(|n| i64::from(t[i][n]) * k[n][j]).sum();
                }
            }
            let d = spec.scaling().values();
            return std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let v: i64 = (0..N).map(|n| tk[i][n] * i64::from(t[j][n])).sum();
                    d[i] * d[j] * v as f64
                })
            });
        }
    }
    let a = spec.scaled_matrix();
    mul_abt(&mul(&a, block), &a)
}

/// `Âᵀ · Y · Â`; requires an orthogonal spec.
pub fn inverse_block(spec: &TransformSpec, coeffs: &Block) -> Result<Block> {
    if !spec.is_orthogonal() {
        return Err(Error::NotInvertibleAsTranspose(spec.name().to_string()));
    }
    let a = spec.scaled_matrix();
    Ok(mul(&mul_atb(&a, coeffs), &a))
}

fn mul(a: &Matrix, b: &Block) -> Block {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik != 0.0 {
                for j in 0..N {
                    out[i][j] += aik * b[k][j];
                }
            }
        }
    }
    out
}

// a · bᵀ
fn mul_abt(a: &Block, b: &Matrix) -> Block {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[j][k]).sum()))
}

// aᵀ · b
fn mul_atb(a: &Matrix, b: &Block) -> Block {
    let mut out = [[0.0; N]; N];
    for k in 0..N {
        for i in 0..N {
            let aki = a[k][i];
            if aki != 0.0 {
                for j in 0..N {
                    out[i][j] += aki * b[k][j];
                }
            }
        }
    }
    out
}

/// Forward transform, zero every coefficient past the first `r` zig-zag
/// positions, inverse transform. The output is not rounded.
pub fn compress_block(
    spec: &TransformSpec,
    block: &Block,
    policy: RetentionPolicy,
) -> Result<Block> {
    let zigzag = zigzag_order();
    let mut coeffs = transform_block(spec, block);
    for (i, row) in coeffs.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            if !policy.keeps(&zigzag, i, j) {
                *c = 0.0;
            }
        }
    }
    inverse_block(spec, &coeffs)
}

fn check_tiling(image: &ImagePlane) -> Result<()> {
    if !image.width().is_multiple_of(N) || !image.height().is_multiple_of(N) {
        return Err(Error::BadGeometry(format!(
            "{}x{} is not a multiple of {N} in both directions",
            image.width(),
            image.height()
        )));
    }
    Ok(())
}

/// Copies block `(bx, by)` of a plane into a real block.
pub fn extract_block(image: &ImagePlane, bx: usize, by: usize) -> Block {
    std::array::from_fn(|i| std::array::from_fn(|j| f64::from(image.get(bx * N + j, by * N + i))))
}

/// Round half away from zero, then clamp into the plane's sample range.
pub fn quantize_sample(v: f64, max: u16) -> u16 {
    v.round().clamp(0.0, f64::from(max)) as u16
}

/// Block-wise compression of a whole plane; returns the rounded, clamped
/// reconstruction.
pub fn compress_image(
    spec: &TransformSpec,
    image: &ImagePlane,
    policy: RetentionPolicy,
) -> Result<ImagePlane> {
    check_tiling(image)?;
    let (w, h) = (image.width(), image.height());
    let max = image.max_value();
    let mut out = vec![0u16; w * h];
    for by in 0..h / N {
        for bx in 0..w / N {
            let rec = compress_block(spec, &extract_block(image, bx, by), policy)?;
            for (i, row) in rec.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    out[(by * N + i) * w + bx * N + j] = quantize_sample(v, max);
                }
            }
        }
    }
    ImagePlane::with_depth(w, h, image.bit_depth(), out)
}
