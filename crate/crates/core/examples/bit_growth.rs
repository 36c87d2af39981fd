//! Register widths needed by the fast algorithm for common input word
//! lengths, with a check that the worst-case witness really reaches the
//! bound.
//!
//! cargo run --example bit_growth

use approxdct::cli::render_bit_growth;
use approxdct::fastdct::{self, analyze_bit_growth, STANDARD_WIDTHS};

fn run() -> approxdct::Result<()> {
    for w in STANDARD_WIDTHS {
        let report = analyze_bit_growth(w)?;
        println!("{}", render_bit_growth(&report));
        let y = fastdct::fast_forward(&report.witness_1d)?;
        assert_eq!(
            i64::from(y[report.witness_1d_output]).abs(),
            report.max_magnitude_1d
        );
        println!("  witness input {:?}\n", report.witness_1d);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
