//! Average PSNR of every transform over the bundled corpus for a handful of
//! retention levels.
//!
//! cargo run --release --example quality_sweep

use approxdct::cli::{bundled_corpus_dir, load_corpus, sweep_specs};
use approxdct::codec;

fn run() -> approxdct::Result<()> {
    let corpus = load_corpus(&bundled_corpus_dir())?;
    let specs = sweep_specs(&[], None)?;
    let r_values = [4, 16, 36, 64, 128, 200];
    let report = codec::sweep(&specs, &corpus, &r_values)?;

    let names: Vec<&str> = corpus.iter().map(|i| i.name.as_str()).collect();
    println!("corpus: {}", names.join(", "));
    print!("   r");
    for s in &specs {
        print!(" {:>10}", s.name());
    }
    println!("   (average PSNR, dB)");
    for r in r_values {
        print!("{r:>4}");
        for s in &specs {
            print!(
                " {:>10.3}",
                report.average(s.name(), r).unwrap().avg_psnr_db
            );
        }
        println!();
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
