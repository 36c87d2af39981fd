//! Build the proposed transform, check orthonormality and compare its
//! output with the exact DCT on a smooth input.
//!
//! cargo run --example transform_basics

use approxdct::transforms::{build_exact_dct, build_proposed, build_wht, N};

fn run() -> approxdct::Result<()> {
    let proposed = build_proposed();
    let kernel = proposed.kernel().as_integer().expect("integer kernel");
    println!("kernel T:");
    for row in kernel {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
        println!("  [{}]", cells.join(" "));
    }
    println!(
        "T·Tᵀ diagonal: {:?}",
        proposed.integer_gram_diagonal().unwrap()
    );
    let d: Vec<String> = proposed
        .scaling()
        .values()
        .iter()
        .map(|v| format!("{v:.4}"))
        .collect();
    println!("scaling D: {}", d.join(" "));
    println!("max|C·Cᵀ − I| = {:.2e}", proposed.orthogonality_error());

    let x: [f64; N] = std::array::from_fn(|n| 100.0 + 40.0 * (n as f64 / 5.0).sin());
    let dct = build_exact_dct();
    let wht = build_wht();
    let (yp, yd, yw) = (proposed.forward(&x), dct.forward(&x), wht.forward(&x));
    println!("\n  k   proposed        dct        wht");
    for k in 0..N {
        println!("{k:>3} {:>10.3} {:>10.3} {:>10.3}", yp[k], yd[k], yw[k]);
    }

    let back = proposed.inverse(&yp)?;
    let err = back
        .iter()
        .zip(&x)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("\ninverse round trip max error: {err:.2e}");
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
