//! Factorial evaluation over transforms, images and retention counts.
//!
//! For one (transform, image) pair the forward coefficients are computed
//! once and the reconstruction is grown one zig-zag position at a time by
//! adding the coefficient times its separable basis image. Pairs run in
//! parallel; each pair is sequential, so results do not depend on the
//! scheduler.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::metrics::{mse, psnr_from_mse, UqiReference};
use super::zigzag::{zigzag_order, BLOCK_LEN};
use super::{extract_block, quantize_sample, transform_block};
use crate::error::{Error, Result};
use crate::imageio::ImagePlane;
use crate::transforms::{TransformKind, TransformSpec, N};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedImage {
    pub name: String,
    pub plane: ImagePlane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub transform: String,
    pub r: usize,
    pub image: String,
    pub psnr_db: f64,
    pub mse: f64,
    pub uqi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageRow {
    pub transform: String,
    pub r: usize,
    pub avg_psnr_db: f64,
    pub avg_mse: f64,
    pub avg_uqi: f64,
    /// Differences against the exact DCT at the same `r`; `None` when the
    /// DCT was not part of the sweep.
    pub psnr_diff_vs_dct_db: Option<f64>,
    pub mse_diff_vs_dct: Option<f64>,
    pub uqi_diff_vs_dct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    /// Ordered by transform, then `r`, then image.
    pub per_image: Vec<MetricRow>,
    /// Ordered by transform, then `r`.
    pub averages: Vec<AverageRow>,
}

/// `{2, 4, …, 256}`.
pub fn default_r_values() -> Vec<usize> {
    (2..=BLOCK_LEN).step_by(2).collect()
}

// Equal values (including two infinities) differ by zero.
fn diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        a - b
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl QualityReport {
    pub fn average(&self, transform: &str, r: usize) -> Option<&AverageRow> {
        self.averages
            .iter()
            .find(|a| a.transform == transform && a.r == r)
    }

    pub fn rows_for(&self, transform: &str, image: &str) -> impl Iterator<Item = &MetricRow> {
        let (t, i) = (transform.to_string(), image.to_string());
        self.per_image
            .iter()
            .filter(move |m| m.transform == t && m.image == i)
    }

    pub fn per_image_csv(&self) -> String {
        let mut s = String::from("transform,r,image,psnr_db,mse,uqi\n");
        for m in &self.per_image {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                m.transform, m.r, m.image, m.psnr_db, m.mse, m.uqi
            );
        }
        s
    }

    pub fn averages_csv(&self) -> String {
        let mut s = String::from(
            "transform,r,avg_psnr_db,avg_mse,avg_uqi,psnr_diff_vs_dct_db,mse_diff_vs_dct,uqi_diff_vs_dct\n",
        );
        for a in &self.averages {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                a.transform,
                a.r,
                a.avg_psnr_db,
                a.avg_mse,
                a.avg_uqi,
                fmt_opt(a.psnr_diff_vs_dct_db),
                fmt_opt(a.mse_diff_vs_dct),
                fmt_opt(a.uqi_diff_vs_dct)
            );
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
struct Triple {
    psnr: f64,
    mse: f64,
    uqi: f64,
}

/// Metrics of one image for every requested `r` (sorted ascending).
fn evaluate_pair(
    spec: &TransformSpec,
    image: &ImagePlane,
    sorted_r: &[usize],
) -> Result<Vec<Triple>> {
    if !spec.is_orthogonal() {
        return Err(Error::NotInvertibleAsTranspose(spec.name().to_string()));
    }
    let (w, h) = (image.width(), image.height());
    if w % N != 0 || h % N != 0 {
        return Err(Error::BadGeometry(format!(
            "{w}x{h} is not a multiple of {N} in both directions"
        )));
    }
    let (bw, bh) = (w / N, h / N);
    let a = spec.scaled_matrix();
    let zigzag = zigzag_order();
    let uqi_ref = UqiReference::new(image)?;
    let peak = f64::from(image.max_value());
    let max = image.max_value();

    let coeffs: Vec<[[f64; N]; N]> = (0..bh)
        .flat_map(|by| (0..bw).map(move |bx| (bx, by)))
        .map(|(bx, by)| transform_block(spec, &extract_block(image, bx, by)))
        .collect();

    let mut recon = vec![0.0f64; w * h];
    let mut out = Vec::with_capacity(sorted_r.len());
    let mut next = sorted_r.iter().peekable();
    for (k, &(ri, ci)) in zigzag.sequence().iter().enumerate() {
        let basis: [[f64; N]; N] =
            std::array::from_fn(|p| std::array::from_fn(|q| a[ri][p] * a[ci][q]));
        for (b, block) in coeffs.iter().enumerate() {
            let c = block[ri][ci];
            if c == 0.0 {
                continue;
            }
            let (bx, by) = (b % bw, b / bw);
            for (p, brow) in basis.iter().enumerate() {
                let row = &mut recon[(by * N + p) * w + bx * N..][..N];
                for (v, &bv) in row.iter_mut().zip(brow) {
                    *v += c * bv;
                }
            }
        }
        while next.peek().is_some_and(|&&r| r == k + 1) {
            next.next();
            let samples = recon.iter().map(|&v| quantize_sample(v, max)).collect();
            let rec = ImagePlane::with_depth(w, h, image.bit_depth(), samples)?;
            let m = mse(image, &rec)?;
            out.push(Triple {
                psnr: psnr_from_mse(m, peak),
                mse: m,
                uqi: uqi_ref.index(&rec)?,
            });
        }
        if next.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

pub fn sweep(
    specs: &[TransformSpec],
    corpus: &[NamedImage],
    r_values: &[usize],
) -> Result<QualityReport> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("empty image corpus".into()));
    }
    if let Some(&bad) = r_values.iter().find(|&&r| !(1..=BLOCK_LEN).contains(&r)) {
        return Err(Error::InvalidRetention(bad));
    }
    let sorted: Vec<usize> = r_values
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let pairs: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|s| (0..corpus.len()).map(move |i| (s, i)))
        .collect();
    let results: Vec<Vec<Triple>> = pairs
        .par_iter()
        .map(|&(s, i)| evaluate_pair(&specs[s], &corpus[i].plane, &sorted))
        .collect::<Result<_>>()?;
    let lookup = |s: usize, i: usize, r: usize| -> Triple {
        let pos = sorted.binary_search(&r).expect("r was requested");
        results[s * corpus.len() + i][pos]
    };

    let mut per_image = Vec::with_capacity(pairs.len() * r_values.len());
    let mut averages = Vec::with_capacity(specs.len() * r_values.len());
    let n = corpus.len() as f64;
    let avg_of = |s: usize, r: usize| -> Triple {
        let (mut p, mut m, mut u) = (0.0, 0.0, 0.0);
        // image-index order
        for i in 0..corpus.len() {
            let t = lookup(s, i, r);
            p += t.psnr;
            m += t.mse;
            u += t.uqi;
        }
        Triple {
            psnr: p / n,
            mse: m / n,
            uqi: u / n,
        }
    };
    let dct_index = specs.iter().position(|s| s.kind() == TransformKind::Dct);

    for (s, spec) in specs.iter().enumerate() {
        for &r in r_values {
            for (i, img) in corpus.iter().enumerate() {
                let t = lookup(s, i, r);
                per_image.push(MetricRow {
                    transform: spec.name().to_string(),
                    r,
                    image: img.name.clone(),
                    psnr_db: t.psnr,
                    mse: t.mse,
                    uqi: t.uqi,
                });
            }
            let avg = avg_of(s, r);
            let reference = dct_index.map(|d| avg_of(d, r));
            averages.push(AverageRow {
                transform: spec.name().to_string(),
                r,
                avg_psnr_db: avg.psnr,
                avg_mse: avg.mse,
                avg_uqi: avg.uqi,
                psnr_diff_vs_dct_db: reference.map(|d| diff(avg.psnr, d.psnr)),
                mse_diff_vs_dct: reference.map(|d| diff(avg.mse, d.mse)),
                uqi_diff_vs_dct: reference.map(|d| diff(avg.uqi, d.uqi)),
            });
        }
    }
    Ok(QualityReport {
        per_image,
        averages,
    })
}
