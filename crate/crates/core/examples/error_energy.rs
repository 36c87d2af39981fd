//! Per-row spectral error energy against the exact DCT, with the Parseval
//! closed form alongside the quadrature result.
//!
//! cargo run --example error_energy

use std::f64::consts::PI;

use approxdct::spectral;
use approxdct::transforms::{build_exact_dct, build_proposed, build_wht, N};

fn run() -> approxdct::Result<()> {
    let dct = build_exact_dct();
    let specs = [build_proposed(), build_wht()];
    let reports = specs
        .iter()
        .map(|s| spectral::full_report(s, 256))
        .collect::<approxdct::Result<Vec<_>>>()?;

    println!(
        " m  {:>10} {:>10}   parseval({})",
        specs[0].name(),
        specs[1].name(),
        specs[0].name()
    );
    for m in 0..N {
        let closed: f64 = PI
            * dct
                .scaled_row(m)
                .iter()
                .zip(specs[0].scaled_row(m))
                .map(|(c, a)| (c - a).powi(2))
                .sum::<f64>();
        println!(
            "{m:>2}  {:>10.4} {:>10.4}   {closed:.4}",
            reports[0].energies[m], reports[1].energies[m]
        );
    }
    println!("tot {:>10.4} {:>10.4}", reports[0].total, reports[1].total);

    // Where in frequency does row 5 of the proposed transform deviate most?
    let curve = &reports[0].curves[5];
    let (k, peak) = curve
        .iter()
        .enumerate()
        .fold((0, 0.0), |a, (k, &v)| if v > a.1 { (k, v) } else { a });
    println!(
        "\nrow 5: |H_C − H_A|² peaks at ω = {:.4} with {peak:.4}",
        reports[0].grid[k]
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
