//! Compress one image at a few retention levels and write the
//! reconstructions and difference images.
//!
//! cargo run --release --example compress_image -- [input.pgm] [out_dir]

use std::path::PathBuf;

use approxdct::cli::bundled_corpus_dir;
use approxdct::codec::{self, RetentionPolicy};
use approxdct::imageio;
use approxdct::transforms::build_proposed;

fn run() -> approxdct::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| bundled_corpus_dir().join("camera.pgm"));
    let out_dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("approxdct"));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| approxdct::Error::InvalidArgument(e.to_string()))?;

    let spec = build_proposed();
    let original = imageio::load_pgm(&input)?;
    println!(
        "{} ({}x{})",
        input.display(),
        original.width(),
        original.height()
    );
    println!("   r   psnr_db       mse      uqi");
    for r in [6, 20, 50, 150] {
        let rec = codec::compress_image(&spec, &original, RetentionPolicy::new(r)?)?;
        println!(
            "{r:>4} {:>9.3} {:>9.3} {:>8.4}",
            codec::psnr(&original, &rec)?,
            codec::mse(&original, &rec)?,
            codec::uqi(&original, &rec)?
        );
        imageio::save_pgm(&rec, out_dir.join(format!("rec_r{r}.pgm")))?;
        imageio::save_pgm(
            &codec::difference_image(&original, &rec)?,
            out_dir.join(format!("diff_r{r}.pgm")),
        )?;
    }
    println!("images written to {}", out_dir.display());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
