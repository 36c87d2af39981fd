//! Image quality measures: MSE, PSNR and the universal quality index.

use crate::error::{Error, Result};
use crate::imageio::ImagePlane;

/// Side of the square sliding UQI window (unit step, uniform weights).
pub const UQI_WINDOW: usize = 8;

pub fn mse(original: &ImagePlane, reconstructed: &ImagePlane) -> Result<f64> {
    original.same_geometry(reconstructed)?;
    let sum: u64 = original
        .samples()
        .iter()
        .zip(reconstructed.samples())
        .map(|(&a, &b)| {
            let d = i64::from(a) - i64::from(b);
            (d * d) as u64
        })
        .sum();
    Ok(sum as f64 / original.samples().len() as f64)
}

/// `10·log10(peak² / mse)`; `+∞` when the images are identical.
pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

pub fn psnr(original: &ImagePlane, reconstructed: &ImagePlane) -> Result<f64> {
    let m = mse(original, reconstructed)?;
    Ok(psnr_from_mse(m, f64::from(original.max_value())))
}

/// `|original − reconstructed| · 2`, clamped to the sample range.
pub fn difference_image(original: &ImagePlane, reconstructed: &ImagePlane) -> Result<ImagePlane> {
    original.same_geometry(reconstructed)?;
    let max = u32::from(original.max_value());
    let samples = original
        .samples()
        .iter()
        .zip(reconstructed.samples())
        .map(|(&a, &b)| (u32::from(a.abs_diff(b)) * 2).min(max) as u16)
        .collect();
    ImagePlane::with_depth(
        original.width(),
        original.height(),
        original.bit_depth(),
        samples,
    )
}

// Summed-area table with a zero first row and column.
fn integral(width: usize, height: usize, value: impl Fn(usize) -> i64) -> Vec<i64> {
    let stride = width + 1;
    let mut sat = vec![0i64; stride * (height + 1)];
    for y in 0..height {
        let mut row_sum = 0;
        for x in 0..width {
            row_sum += value(y * width + x);
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + row_sum;
        }
    }
    sat
}

fn window_sum(sat: &[i64], stride: usize, x: usize, y: usize) -> i64 {
    let w = UQI_WINDOW;
    sat[(y + w) * stride + x + w] - sat[y * stride + x + w] - sat[(y + w) * stride + x]
        + sat[y * stride + x]
}

/// Precomputed window statistics of the reference image, reusable across
/// many reconstructions.
#[derive(Debug, Clone)]
pub struct UqiReference<'a> {
    image: &'a ImagePlane,
    sum: Vec<i64>,
    sum_sq: Vec<i64>,
}

impl<'a> UqiReference<'a> {
    pub fn new(image: &'a ImagePlane) -> Result<Self> {
        if image.width() < UQI_WINDOW || image.height() < UQI_WINDOW {
            return Err(Error::BadGeometry(format!(
                "{}x{} is smaller than the {UQI_WINDOW}x{UQI_WINDOW} UQI window",
                image.width(),
                image.height()
            )));
        }
        let s = image.samples();
        Ok(UqiReference {
            image,
            sum: integral(image.width(), image.height(), |i| i64::from(s[i])),
            sum_sq: integral(image.width(), image.height(), |i| {
                i64::from(s[i]) * i64::from(s[i])
            }),
        })
    }

    /// Mean of the per-window index
    /// `Q = 4·σxy·x̄·ȳ / ((σx² + σy²)·(x̄² + ȳ²))`.
    ///
    /// Windows where both denominator factors vanish are all-zero in both
    /// images and count as 1. Windows where only one factor vanishes have
    /// no defined index and are left out of the mean. If every window is
    /// left out the result is 1 for identical images and 0 otherwise.
    pub fn index(&self, other: &ImagePlane) -> Result<f64> {
        let x = self.image;
        x.same_geometry(other)?;
        let (w, h) = (x.width(), x.height());
        let xs = x.samples();
        let ys = other.samples();
        let sum_y = integral(w, h, |i| i64::from(ys[i]));
        let sum_yy = integral(w, h, |i| i64::from(ys[i]) * i64::from(ys[i]));
        let sum_xy = integral(w, h, |i| i64::from(xs[i]) * i64::from(ys[i]));
        let stride = w + 1;
        let n = (UQI_WINDOW * UQI_WINDOW) as i64;

        let mut total = 0.0;
        let mut counted = 0usize;
        for wy in 0..=h - UQI_WINDOW {
            for wx in 0..=w - UQI_WINDOW {
                let sx = window_sum(&self.sum, stride, wx, wy);
                let sy = window_sum(&sum_y, stride, wx, wy);
                let sxx = window_sum(&self.sum_sq, stride, wx, wy);
                let syy = window_sum(&sum_yy, stride, wx, wy);
                let sxy = window_sum(&sum_xy, stride, wx, wy);
                // Common 1/(n(n−1)) and 1/n² factors cancel in the ratio.
                let cov = n * sxy - sx * sy;
                let spread = (n * sxx - sx * sx) + (n * syy - sy * sy);
                let lum = sx * sx + sy * sy;
                match (spread == 0, lum == 0) {
                    (true, true) => {
                        total += 1.0;
                        counted += 1;
                    }
                    (false, false) => {
                        total +=
                            4.0 * cov as f64 * sx as f64 * sy as f64 / (spread as f64 * lum as f64);
                        counted += 1;
                    }
                    _ => {}
                }
            }
        }
        if counted == 0 {
            return Ok(if xs == ys { 1.0 } else { 0.0 });
        }
        Ok(total / counted as f64)
    }
}

pub fn uqi(original: &ImagePlane, reconstructed: &ImagePlane) -> Result<f64> {
    original.same_geometry(reconstructed)?;
    UqiReference::new(original)?.index(reconstructed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(w: usize, h: usize) -> ImagePlane {
        let s = (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                ((x * 7 + y * 13 + (x * y) % 17) % 200 + 20) as u16
            })
            .collect();
        ImagePlane::new(w, h, s).unwrap()
    }

    fn map(img: &ImagePlane, f: impl Fn(u16) -> u16) -> ImagePlane {
        ImagePlane::new(
            img.width(),
            img.height(),
            img.samples().iter().map(|&v| f(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn psnr_values() {
        let a = textured(16, 16);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        let b = map(&a, |v| v + 1);
        assert!((psnr(&a, &b).unwrap() - 48.1308).abs() < 1e-3);
        let black = ImagePlane::filled(4, 4, 0).unwrap();
        let white = ImagePlane::filled(4, 4, 255).unwrap();
        assert!(psnr(&black, &white).unwrap().abs() < 1e-12);
        assert_eq!(mse(&black, &white).unwrap(), 65025.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = textured(16, 16);
        let b = textured(16, 8);
        assert!(matches!(psnr(&a, &b), Err(Error::BadGeometry(_))));
        assert!(matches!(uqi(&a, &b), Err(Error::BadGeometry(_))));
        let tiny = textured(4, 4);
        assert!(matches!(uqi(&tiny, &tiny), Err(Error::BadGeometry(_))));
    }

    #[test]
    fn uqi_identity_inversion_and_offset() {
        let a = textured(24, 20);
        assert!((uqi(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let inv = map(&a, |v| 255 - v);
        assert!(uqi(&a, &inv).unwrap() < 0.0);
        let shifted = map(&a, |v| v + 30);
        let q = uqi(&a, &shifted).unwrap();
        assert!(q < 1.0 && q > 0.5, "{q}");
    }

    #[test]
    fn uqi_degenerate_windows() {
        let zero = ImagePlane::filled(8, 8, 0).unwrap();
        assert_eq!(uqi(&zero, &zero).unwrap(), 1.0);
        let flat = ImagePlane::filled(8, 8, 100).unwrap();
        assert_eq!(uqi(&flat, &flat).unwrap(), 1.0);
        let other = ImagePlane::filled(8, 8, 90).unwrap();
        assert_eq!(uqi(&flat, &other).unwrap(), 0.0);
    }

    #[test]
    fn uqi_matches_brute_force_window_average() {
        let a = textured(13, 11);
        let b = map(&a, |v| (v * 3 / 4 + (v % 5) * 4).min(255));
        let brute = {
            let mut total = 0.0;
            let mut count = 0;
            for wy in 0..=a.height() - 8 {
                for wx in 0..=a.width() - 8 {
                    let mut xs = vec![];
                    let mut ys = vec![];
                    for y in wy..wy + 8 {
                        for x in wx..wx + 8 {
                            xs.push(f64::from(a.get(x, y)));
                            ys.push(f64::from(b.get(x, y)));
                        }
                    }
                    let n = 64.0;
                    let mx = xs.iter().sum::<f64>() / n;
                    let my = ys.iter().sum::<f64>() / n;
                    let vx = xs.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / (n - 1.0);
                    let vy = ys.iter().map(|v| (v - my).powi(2)).sum::<f64>() / (n - 1.0);
                    let cxy = xs
                        .iter()
                        .zip(&ys)
                        .map(|(p, q)| (p - mx) * (q - my))
                        .sum::<f64>()
                        / (n - 1.0);
                    total += 4.0 * cxy * mx * my / ((vx + vy) * (mx * mx + my * my));
                    count += 1;
                }
            }
            total / f64::from(count)
        };
        assert!((uqi(&a, &b).unwrap() - brute).abs() < 1e-12);
    }

    #[test]
    fn difference_image_is_doubled_and_clamped() {
        let a = ImagePlane::new(3, 1, vec![10, 200, 0]).unwrap();
        let b = ImagePlane::new(3, 1, vec![13, 50, 0]).unwrap();
        assert_eq!(difference_image(&a, &b).unwrap().samples(), &[6, 255, 0]);
    }
}
