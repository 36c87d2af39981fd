//! Walk an input through the butterfly factorization stage by stage and
//! compare operation counts with the direct matrix product.
//!
//! cargo run --example fast_algorithm

use approxdct::fastdct::{self, build_factorization};
use approxdct::transforms::{N, PROPOSED_KERNEL};

fn run() -> approxdct::Result<()> {
    let ft = build_factorization()?;
    let x: [i32; N] = [12, -3, 7, 0, 5, 9, -8, 2, 4, 4, -1, 6, 3, -7, 10, 1];

    println!("{:<22} {x:?}", "input");
    for (stage, values) in ft.stages().iter().zip(ft.trace(&x)?) {
        println!("{:<22} {values:?}", stage.label());
    }

    let (fast, fast_ops) = ft.forward_counted(&x)?;
    let (direct, direct_ops) = fastdct::direct_forward(&x)?;
    assert_eq!(fast, direct);
    println!(
        "\nfast:   {} additions, {} multiplications, {} shifts",
        fast_ops.additions, fast_ops.multiplications, fast_ops.shifts
    );
    println!("direct: {} additions", direct_ops.additions);
    let t: [[i32; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| i32::from(PROPOSED_KERNEL[i][j])));
    println!(
        "the factorization reproduces T exactly: {}",
        ft.to_matrix()? == t
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
