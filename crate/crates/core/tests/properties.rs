use approxdct::codec::{self, zigzag_order, Block, RetentionPolicy};
use approxdct::fastdct::{self, analyze_bit_growth_with, InputDomain};
use approxdct::transforms::{build_exact_dct, build_proposed, build_wht, N};
use proptest::prelude::*;

fn vector(bound: i32) -> impl Strategy<Value = [i32; N]> {
    proptest::array::uniform16(-bound..bound)
}

fn block() -> impl Strategy<Value = Block> {
    proptest::array::uniform16(proptest::array::uniform16(0.0f64..256.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn fast_equals_direct(x in vector(1 << 15)) {
        prop_assert_eq!(fastdct::fast_forward(&x).unwrap(), fastdct::direct_forward(&x).unwrap().0);
    }

    #[test]
    fn fast_transform_is_linear(x in vector(1 << 12), y in vector(1 << 12), a in -8i32..8) {
        let z: [i32; N] = std::array::from_fn(|i| a * x[i] + y[i]);
        let fx = fastdct::fast_forward(&x).unwrap();
        let fy = fastdct::fast_forward(&y).unwrap();
        let fz = fastdct::fast_forward(&z).unwrap();
        for i in 0..N {
            prop_assert_eq!(fz[i], a * fx[i] + fy[i]);
        }
    }

    #[test]
    fn signed_inputs_respect_reported_width(x in vector(1 << 11)) {
        let report = analyze_bit_growth_with(12, InputDomain::Signed).unwrap();
        let y = fastdct::fast_forward(&x).unwrap();
        prop_assert!(y.iter().all(|&v| i64::from(v).abs() <= report.max_magnitude_1d));
    }

    #[test]
    fn forward_inverse_round_trip(x in proptest::array::uniform16(-1e3f64..1e3)) {
        for spec in [build_proposed(), build_exact_dct(), build_wht()] {
            let back = spec.inverse(&spec.forward(&x)).unwrap();
            for i in 0..N {
                prop_assert!((back[i] - x[i]).abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Before rounding, each extra coefficient removes its own energy from
    // the error, so the error never grows with r.
    #[test]
    fn unrounded_error_is_monotone_in_r(k in block()) {
        for spec in [build_proposed(), build_wht()] {
            let mut prev = f64::INFINITY;
            for r in 1..=codec::BLOCK_LEN {
                let rec = codec::compress_block(&spec, &k, RetentionPolicy::new(r).unwrap()).unwrap();
                let err: f64 = rec.iter().flatten().zip(k.iter().flatten()).map(|(a, b)| (a - b).powi(2)).sum();
                prop_assert!(err <= prev + 1e-7, "{} r={r}: {err} > {prev}", spec.name());
                prev = err;
            }
            prop_assert!(prev < 1e-12);
        }
    }
}

#[test]
fn zigzag_is_a_permutation_of_the_block() {
    let z = zigzag_order();
    let mut seen = [[false; N]; N];
    for &(i, j) in z.sequence() {
        assert!(!seen[i][j]);
        seen[i][j] = true;
    }
    assert_eq!(z.sequence()[..4], [(0, 0), (0, 1), (1, 0), (2, 0)]);
}
