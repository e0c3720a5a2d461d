//! Property tests for the structural invariants: numeric transparency of
//! the counted scalar, tally additivity, transform algebra (involution,
//! linearity, scaling, Parseval, conjugate symmetry), and the partition
//! combinatorics.

use countfft::complex::{max_rel_err, ComplexPair};
use countfft::counting::{counted_vec, value_vec, with_stats, with_tally, Constant, CountedScalar};
use countfft::fft::{dft_naive, fft_sr, msr, whufft, ScaledVariant};
use countfft::hprime::{f_count, partition};
use countfft::rng::SplitMix64;
use countfft::wht::{wht_folklore, wht_h4, wht_h8, wht_naive};
use proptest::prelude::*;

fn real_vec(log2n: u32, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::derive(seed, "props-real");
    (0..1usize << log2n).map(|_| rng.next_signed_unit()).collect()
}

fn complex_vec_seeded(log2n: u32, seed: u64) -> Vec<ComplexPair> {
    let mut rng = SplitMix64::derive(seed, "props-complex");
    (0..1usize << log2n)
        .map(|_| ComplexPair::new(rng.next_signed_unit(), rng.next_signed_unit()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Counted arithmetic returns bit-identical values to plain f64.
    #[test]
    fn numeric_transparency(a in -1e6f64..1e6, b in -1e6f64..1e6, c in -8i32..8) {
        let ((sum, dif, prod, neg, half, scaled), _) = with_tally(|| {
            let x = CountedScalar::new(a);
            let y = CountedScalar::new(b);
            (
                (x + y).value(),
                (x - y).value(),
                (x * y).value(),
                (-x).value(),
                Constant::new(0.5).unwrap().times(x).value(),
                Constant::new(f64::powi(2.0, c)).unwrap().times(x).value(),
            )
        });
        prop_assert_eq!(sum, a + b);
        prop_assert_eq!(dif, a - b);
        prop_assert_eq!(prod, a * b);
        prop_assert_eq!(neg, -a);
        prop_assert_eq!(half, a * 0.5);
        prop_assert_eq!(scaled, a * f64::powi(2.0, c));
    }

    // Tallies of independent computations add componentwise.
    #[test]
    fn tally_additivity(n1 in 1usize..40, n2 in 1usize..40) {
        let work = |n: usize| move || {
            let mut acc = CountedScalar::new(1.0);
            for i in 0..n {
                let v = CountedScalar::new(i as f64);
                acc = if i % 3 == 0 { acc + v } else if i % 3 == 1 { acc - v } else { acc * v };
            }
            acc.value()
        };
        let (_, both) = with_tally(|| {
            work(n1)();
            work(n2)();
        });
        let (_, t1) = with_tally(work(n1));
        let (_, t2) = with_tally(work(n2));
        prop_assert_eq!(both, t1 + t2);
    }

    // All WHT implementations agree with the signed-sum definition.
    #[test]
    fn wht_oracle_equivalence(log2n in 0u32..9, seed in 0u64..1000) {
        let x = counted_vec(&real_vec(log2n, seed));
        let want = value_vec(&wht_naive(&x).unwrap());
        for (name, got) in [
            ("folklore", wht_folklore(&x).unwrap()),
            ("h4", wht_h4(&x, 0).unwrap()),
            ("h8", wht_h8(&x, 0).unwrap()),
        ] {
            let got = value_vec(&got);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).abs() <= 1e-12 * want.iter().fold(1.0f64, |m, v| m.max(v.abs())), "{name}");
            }
        }
    }

    // H(H(x)) = N x, exactly on integer inputs.
    #[test]
    fn wht_involution(log2n in 0u32..8, seed in 0u64..1000) {
        let n = 1usize << log2n;
        let mut rng = SplitMix64::derive(seed, "props-int");
        let xs: Vec<f64> = (0..n).map(|_| rng.next_small_int(8)).collect();
        for f in [wht_folklore as fn(&[CountedScalar]) -> _, |x: &[CountedScalar]| wht_h4(x, 0), |x: &[CountedScalar]| wht_h8(x, 0)] {
            let once = f(&counted_vec(&xs)).unwrap();
            let twice = value_vec(&f(&once).unwrap());
            for (t, x0) in twice.iter().zip(&xs) {
                prop_assert_eq!(*t, n as f64 * x0);
            }
        }
    }

    // H(alpha x + beta y) = alpha H(x) + beta H(y).
    #[test]
    fn wht_linearity(log2n in 0u32..8, seed in 0u64..1000, alpha in -4.0f64..4.0, beta in -4.0f64..4.0) {
        let n = 1usize << log2n;
        let xs = real_vec(log2n, seed);
        let ys = real_vec(log2n, seed ^ 0xdead);
        let mixed: Vec<f64> = (0..n).map(|i| alpha * xs[i] + beta * ys[i]).collect();
        let hx = value_vec(&wht_h8(&counted_vec(&xs), 0).unwrap());
        let hy = value_vec(&wht_h8(&counted_vec(&ys), 0).unwrap());
        let hm = value_vec(&wht_h8(&counted_vec(&mixed), 0).unwrap());
        let scale = hm.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            prop_assert!((hm[i] - (alpha * hx[i] + beta * hy[i])).abs() <= 1e-12 * scale);
        }
    }

    // The partition size histogram is the F count.
    #[test]
    fn partition_histogram_matches_f(log2n in 0u32..13) {
        let part = partition(1usize << log2n).unwrap();
        let hist = part.size_counts();
        let mut covered = 0usize;
        for j in 0..=log2n {
            let got = hist.get(&(1usize << j)).copied().unwrap_or(0);
            prop_assert_eq!(u128::from(got), f_count(1 << log2n, 1 << j));
            covered += got as usize * (1usize << j);
        }
        prop_assert_eq!(covered, 1usize << log2n);
    }
}

#[test]
fn parseval_all_ffts() {
    for log2n in 0..=10u32 {
        let x = complex_vec_seeded(log2n, 99);
        let input_energy: f64 = x
            .iter()
            .map(|v| {
                let (re, im) = v.values();
                re * re + im * im
            })
            .sum();
        let n = (1usize << log2n) as f64;
        for (name, y) in [
            ("naive", dft_naive(&x).unwrap()),
            ("sr", fft_sr(&x).unwrap()),
            ("msr", msr(&x, ScaledVariant::Plain).unwrap()),
            ("whufft", whufft(&x).unwrap()),
        ] {
            let out_energy: f64 = y
                .iter()
                .map(|v| {
                    let (re, im) = v.values();
                    re * re + im * im
                })
                .sum();
            let rel = (out_energy - n * input_energy).abs() / (n * input_energy).max(1e-300);
            assert!(rel <= 1e-9, "{name} at 2^{log2n}: {rel:.2e}");
        }
    }
}

#[test]
fn conjugate_symmetry_on_real_inputs() {
    for log2n in 1..=10u32 {
        let n = 1usize << log2n;
        let xs = real_vec(log2n, 7);
        let x: Vec<ComplexPair> = xs.iter().map(|&v| ComplexPair::new(v, 0.0)).collect();
        for (name, y) in [
            ("sr", fft_sr(&x).unwrap()),
            ("msr", msr(&x, ScaledVariant::Plain).unwrap()),
            ("whufft", whufft(&x).unwrap()),
        ] {
            let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs_max()));
            for k in 1..n {
                let (ar, ai) = y[n - k].values();
                let (br, bi) = y[k].values();
                assert!(
                    (ar - br).abs() <= 1e-10 * scale && (ai + bi).abs() <= 1e-10 * scale,
                    "{name} at 2^{log2n} k={k}"
                );
            }
        }
    }
}

#[test]
fn cross_implementation_agreement() {
    for log2n in 0..=11u32 {
        let x = complex_vec_seeded(log2n, 31);
        let sr = fft_sr(&x).unwrap();
        let m = msr(&x, ScaledVariant::Plain).unwrap();
        let w = whufft(&x).unwrap();
        assert!(max_rel_err(&sr, &m) <= 1e-10, "sr vs msr at 2^{log2n}");
        assert!(max_rel_err(&w, &m) <= 1e-10, "whufft vs msr at 2^{log2n}");
    }
}

// Scale exponents commute with the transform exactly: H(x, k) = 2^k H(x, 0).
#[test]
fn wht_scaling_law() {
    let xs = real_vec(7, 5);
    let base4 = value_vec(&wht_h4(&counted_vec(&xs), 0).unwrap());
    let base8 = value_vec(&wht_h8(&counted_vec(&xs), 0).unwrap());
    for k in 1..=8u32 {
        let s = f64::powi(2.0, k as i32);
        let got4 = value_vec(&wht_h4(&counted_vec(&xs), k).unwrap());
        let got8 = value_vec(&wht_h8(&counted_vec(&xs), k).unwrap());
        for i in 0..xs.len() {
            assert_eq!(got4[i], s * base4[i]);
            assert_eq!(got8[i], s * base8[i]);
        }
    }
}

// Intermediates of the uprooted pipeline stay well below 4N on unit inputs.
#[test]
fn whufft_intermediate_magnitudes_are_tame() {
    for log2n in 4..=10u32 {
        let n = 1usize << log2n;
        let x = complex_vec_seeded(log2n, 13);
        let ((), stats) = with_stats(|| {
            whufft(&x).unwrap();
        });
        assert!(
            stats.max_abs <= 4.0 * n as f64,
            "peak {} exceeds 4N at 2^{log2n}",
            stats.max_abs
        );
    }
}

// The eighth-split WHT first undercuts the radix-2 count exactly where the
// closed forms cross, and not before.
#[test]
fn h8_folklore_ordering_tracks_the_crossover() {
    use countfft::predict::{crossover, predict, PredAlgo};
    let cross = crossover(PredAlgo::H8, PredAlgo::Folklore, 40)
        .unwrap()
        .unwrap();
    for log2n in 1..cross {
        let h8 = predict(PredAlgo::H8, log2n).unwrap().total();
        let folk = predict(PredAlgo::Folklore, log2n).unwrap().total();
        assert!(h8 >= folk, "no early win at 2^{log2n}");
    }
    // Measured tallies agree with the predicted ordering at small sizes.
    for log2n in 1..=10u32 {
        let x = counted_vec(&real_vec(log2n, 23));
        let ((), t8) = with_tally(|| {
            wht_h8(&x, 0).unwrap();
        });
        let ((), tf) = with_tally(|| {
            wht_folklore(&x).unwrap();
        });
        assert!(t8.total() >= tf.total());
    }
}

// Integer inputs bounded by 2^20/N keep every intermediate of the
// eighth-split recursion an exact integer.
#[test]
fn h8_integer_exactness() {
    for log2n in [5u32, 9] {
        let n = 1usize << log2n;
        let bound = (1u32 << 20) / (n as u32);
        let mut rng = SplitMix64::derive(17, "props-bigint");
        let xs: Vec<f64> = (0..n).map(|_| rng.next_small_int(bound.min(1 << 15))).collect();
        let got = value_vec(&wht_h8(&counted_vec(&xs), 0).unwrap());
        let want = value_vec(&wht_naive(&counted_vec(&xs)).unwrap());
        assert_eq!(got, want, "exact integer match at 2^{log2n}");
    }
}
