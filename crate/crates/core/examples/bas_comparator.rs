//! Load a BAS-2010 matrix file and compare it with the proposed transform.
//!
//! The matrix is not shipped. Point the example at a file with 16 rows of
//! 16 integers followed by one line of 16 scale factors (plain numbers,
//! `1/x` or `1/sqrt(x)`):
//!
//! cargo run --example bas_comparator -- path/to/bas2010.txt
//!
//! Without an argument the `APPROXDCT_BAS_MATRIX` variable and the bundled
//! location are tried.

use std::path::PathBuf;

use approxdct::spectral;
use approxdct::transforms::{self, build_proposed};
use approxdct::Error;

fn run() -> approxdct::Result<()> {
    let bas = match std::env::args().nth(1).map(PathBuf::from) {
        Some(p) => transforms::build_bas2010_from(&p),
        None => transforms::build_bas2010(),
    };
    let bas = match bas {
        Ok(b) => b,
        Err(Error::ComparatorUnavailable(why)) => {
            println!("BAS-2010 comparator unavailable ({why}); nothing to compare");
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    println!("orthogonality error: {:.2e}", bas.orthogonality_error());
    let p = spectral::full_report(&build_proposed(), 256)?;
    let b = spectral::full_report(&bas, 256)?;
    println!(" m   proposed    bas2010");
    for m in 0..p.energies.len() {
        println!("{m:>2} {:>10.4} {:>10.4}", p.energies[m], b.energies[m]);
    }
    println!("tot {:>9.4} {:>10.4}", p.total, b.total);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
