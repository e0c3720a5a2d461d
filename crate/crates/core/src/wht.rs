//! Walsh-Hadamard transforms, four ways.
//!
//! * [`wht_naive`]: the quadratic signed-sum definition; the oracle.
//! * [`wht_folklore`]: the radix-2 recursion; exactly `N log2 N` additions.
//! * [`wht_h4`]: quarter splitting with a rank-one-plus-sparse combination
//!   step; children carry a power-of-two scale exponent so the sparse `2`
//!   entries cost halvings and leaf scalings instead of multiplications.
//! * [`wht_h8`]: the eighth-splitting analogue; 23 operations per 8 output
//!   entries at each level, which beats the radix-2 recursion's 24.
//!
//! `wht_h4(x, k)` and `wht_h8(x, k)` return `2^k * H(x)`. The scale stage is
//! part of the circuit: every input except the first passes through one
//! multiply-by-`2^k` gate at its leaf, and each gate charges one
//! multiply-by-power-of-two per real component whatever its exponent. The
//! intermediate quarter-split form that scales by `2` on the way down instead
//! of carrying `k` is not implemented separately: it computes the same values
//! with the same combination step, which is exactly the `2^k`-linearity of
//! these procedures.

use crate::complex::ComplexPair;
use crate::counting::CountedScalar;
use crate::{require_power_of_two, Error};

/// Entrywise operations the transforms need from the working field.
pub trait Field: Copy {
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    /// Multiply by `1/2`; charges one halving per real component.
    fn halve(self) -> Self;
    /// Multiply by `2^k` through a scale gate; charges one
    /// multiply-by-power-of-two per real component, including `k == 0`.
    fn scale_gate(self, k: u32) -> Self;
}

impl Field for CountedScalar {
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn halve(self) -> Self {
        crate::counting::Constant::new(0.5)
            .expect("finite")
            .times(self)
    }
    fn scale_gate(self, k: u32) -> Self {
        crate::counting::gate_pow2(self, k)
    }
}

impl Field for ComplexPair {
    fn add(self, rhs: Self) -> Self {
        ComplexPair::add(self, rhs)
    }
    fn sub(self, rhs: Self) -> Self {
        ComplexPair::sub(self, rhs)
    }
    fn halve(self) -> Self {
        ComplexPair {
            re: self.re.halve(),
            im: self.im.halve(),
        }
    }
    fn scale_gate(self, k: u32) -> Self {
        ComplexPair {
            re: self.re.scale_gate(k),
            im: self.im.scale_gate(k),
        }
    }
}

/// Signed-sum definition: `y_k = sum_j (-1)^<j,k> x_j`. Quadratic; the
/// oracle all fast versions are checked against.
pub fn wht_naive<F: Field>(x: &[F]) -> Result<Vec<F>, Error> {
    require_power_of_two(x.len())?;
    let n = x.len();
    let mut y = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = x[0];
        for (j, &v) in x.iter().enumerate().skip(1) {
            if (j & k).count_ones() % 2 == 1 {
                acc = acc.sub(v);
            } else {
                acc = acc.add(v);
            }
        }
        y.push(acc);
    }
    Ok(y)
}

/// Radix-2 recursion, iterated in place: exactly `N log2 N` additions and
/// subtractions, nothing else.
pub fn wht_folklore<F: Field>(x: &[F]) -> Result<Vec<F>, Error> {
    require_power_of_two(x.len())?;
    let mut y = x.to_vec();
    folklore_in_place(&mut y);
    Ok(y)
}

fn folklore_in_place<F: Field>(buf: &mut [F]) {
    let n = buf.len();
    let mut half = 1;
    while half < n {
        let step = half * 2;
        for block in (0..n).step_by(step) {
            for i in block..block + half {
                let a = buf[i];
                let b = buf[i + half];
                buf[i] = a.add(b);
                buf[i + half] = a.sub(b);
            }
        }
        half = step;
    }
}

/// Quarter-splitting scaled transform: returns `2^k * H(x)`.
pub fn wht_h4<F: Field>(x: &[F], k: u32) -> Result<Vec<F>, Error> {
    require_power_of_two(x.len())?;
    Ok(h4_rec(x, k, true))
}

fn h4_rec<F: Field>(x: &[F], k: u32, leftmost: bool) -> Vec<F> {
    let n = x.len();
    if n <= 2 {
        return scaled_leaf(x, k, leftmost);
    }
    let q = n / 4;
    let a = h4_rec(&x[..q], k, leftmost);
    let b = h4_rec(&x[q..2 * q], k + 1, false);
    let c = h4_rec(&x[2 * q..3 * q], k + 1, false);
    let d = h4_rec(&x[3 * q..], k + 1, false);

    let mut y = Vec::with_capacity(n);
    let mut y1 = Vec::with_capacity(q);
    let mut y2 = Vec::with_capacity(q);
    let mut y3 = Vec::with_capacity(q);
    for i in 0..q {
        let e = b[i].add(c[i]).add(d[i]).halve();
        let f = a[i].sub(e);
        y.push(a[i].add(e));
        y1.push(f.add(c[i]));
        y2.push(f.add(b[i]));
        y3.push(f.add(d[i]));
    }
    y.extend(y1);
    y.extend(y2);
    y.extend(y3);
    y
}

/// Eighth-splitting scaled transform: returns `2^k * H(x)`.
pub fn wht_h8<F: Field>(x: &[F], k: u32) -> Result<Vec<F>, Error> {
    require_power_of_two(x.len())?;
    Ok(h8_rec(x, k, true))
}

fn h8_rec<F: Field>(x: &[F], k: u32, leftmost: bool) -> Vec<F> {
    let n = x.len();
    if n <= 4 {
        return scaled_leaf(x, k, leftmost);
    }
    let w = n / 8;
    let a = h8_rec(&x[..w], k, leftmost);
    let b = h8_rec(&x[w..2 * w], k + 1, false);
    let c = h8_rec(&x[2 * w..3 * w], k + 1, false);
    let d = h8_rec(&x[3 * w..4 * w], k + 1, false);
    let e = h8_rec(&x[4 * w..5 * w], k + 1, false);
    let f = h8_rec(&x[5 * w..6 * w], k + 1, false);
    let g = h8_rec(&x[6 * w..7 * w], k + 1, false);
    let h = h8_rec(&x[7 * w..], k + 1, false);

    let mut segs: [Vec<F>; 8] = Default::default();
    for s in segs.iter_mut() {
        s.reserve(w);
    }
    for i in 0..w {
        let b1 = b[i].add(c[i]);
        let b2 = d[i].add(h[i]);
        let b3 = f[i].add(g[i]);
        let tot = b1.add(b2).add(b3).add(e[i]).halve();
        let diff = a[i].sub(tot);
        let dd = diff.add(d[i]);
        let ee = diff.add(e[i]);
        let hh = diff.add(h[i]);
        segs[0].push(a[i].add(tot));
        segs[1].push(ee.add(c[i]).add(g[i]));
        segs[2].push(ee.add(b[i]).add(f[i]));
        segs[3].push(ee.add(b2));
        segs[4].push(dd.add(b1));
        segs[5].push(hh.add(c[i]).add(f[i]));
        segs[6].push(hh.add(b[i]).add(g[i]));
        segs[7].push(dd.add(b3));
    }
    let mut y = Vec::with_capacity(n);
    for s in segs {
        y.extend(s);
    }
    y
}

/// Base case: run every entry through its scale gate (the first entry of the
/// whole input has no gate), then do the radix-2 transform in place.
fn scaled_leaf<F: Field>(x: &[F], k: u32, leftmost: bool) -> Vec<F> {
    let mut leaf: Vec<F> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if leftmost && i == 0 && k == 0 {
                v
            } else {
                v.scale_gate(k)
            }
        })
        .collect();
    folklore_in_place(&mut leaf);
    leaf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{counted_vec, value_vec, with_tally, OpTally};
    use crate::rng::SplitMix64;

    fn run(xs: &[f64], f: impl FnOnce(&[CountedScalar]) -> Vec<CountedScalar>) -> Vec<f64> {
        value_vec(&f(&counted_vec(xs)))
    }

    #[test]
    fn naive_examples() {
        assert_eq!(
            run(&[1.0, 0.0, 0.0, 0.0], |x| wht_naive(x).unwrap()),
            vec![1.0, 1.0, 1.0, 1.0]
        );
        assert_eq!(
            run(&[1.0, 1.0, 1.0, 1.0], |x| wht_naive(x).unwrap()),
            vec![4.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            run(&[1.0, 2.0, 3.0, 4.0], |x| wht_naive(x).unwrap()),
            vec![10.0, -2.0, -4.0, 0.0]
        );
    }

    #[test]
    fn rejects_bad_lengths() {
        let x = counted_vec(&[1.0, 2.0, 3.0]);
        assert_eq!(wht_naive(&x), Err(Error::NonPowerOfTwoLength(3)));
        assert_eq!(wht_folklore(&x), Err(Error::NonPowerOfTwoLength(3)));
        assert_eq!(wht_h4(&x, 0), Err(Error::NonPowerOfTwoLength(3)));
        assert_eq!(wht_h8(&x, 0), Err(Error::NonPowerOfTwoLength(3)));
        let empty: Vec<CountedScalar> = Vec::new();
        assert_eq!(wht_folklore(&empty), Err(Error::NonPowerOfTwoLength(0)));
    }

    #[test]
    fn folklore_tally_is_n_log_n() {
        let (y, t) = with_tally(|| {
            let x = counted_vec(&[1.0, -1.0, 2.0, 0.0, 3.0, 1.0, -2.0, 4.0]);
            wht_folklore(&x).unwrap()
        });
        assert_eq!(
            t,
            OpTally {
                add_sub: 24,
                ..OpTally::ZERO
            }
        );
        let x = counted_vec(&[1.0, -1.0, 2.0, 0.0, 3.0, 1.0, -2.0, 4.0]);
        assert_eq!(value_vec(&y), value_vec(&wht_naive(&x).unwrap()));

        let (_, t1) = with_tally(|| wht_folklore(&counted_vec(&[5.0])).unwrap());
        assert!(t1.is_zero());
    }

    #[test]
    fn h4_traces_the_quarter_split() {
        let y = run(&[1.0, 2.0, 3.0, 4.0], |x| wht_h4(x, 0).unwrap());
        assert_eq!(y, vec![10.0, -2.0, -4.0, 0.0]);
    }

    #[test]
    fn h4_tally_n4() {
        let ((), t) = with_tally(|| {
            let x = counted_vec(&[1.0, 2.0, 3.0, 4.0]);
            wht_h4(&x, 0).unwrap();
        });
        assert_eq!(
            t,
            OpTally {
                add_sub: 7,
                mul: 0,
                div2: 1,
                mul_pow2: 3,
            }
        );
        assert_eq!(t.total(), 11);
    }

    #[test]
    fn h8_delta_input_gives_all_ones() {
        let mut x = vec![0.0; 8];
        x[0] = 1.0;
        assert_eq!(run(&x, |x| wht_h8(x, 0).unwrap()), vec![1.0; 8]);
    }

    #[test]
    fn h8_tallies_small() {
        let ((), t8) = with_tally(|| {
            let x = counted_vec(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
            wht_h8(&x, 0).unwrap();
        });
        assert_eq!(
            t8,
            OpTally {
                add_sub: 22,
                mul: 0,
                div2: 1,
                mul_pow2: 7,
            }
        );
        assert_eq!(t8.total(), 30);

        let ((), t16) = with_tally(|| {
            let x: Vec<f64> = (0..16).map(|i| i as f64).collect();
            wht_h8(&counted_vec(&x), 0).unwrap();
        });
        assert_eq!(
            t16,
            OpTally {
                add_sub: 60,
                mul: 0,
                div2: 2,
                mul_pow2: 15,
            }
        );
        assert_eq!(t16.total(), 77);
    }

    #[test]
    fn scaled_variants_match_oracle_exactly_on_integers() {
        let mut rng = SplitMix64::new(0xABCD);
        for log2n in 0..=9 {
            let n = 1usize << log2n;
            let xs: Vec<f64> = (0..n).map(|_| rng.next_small_int(8)).collect();
            let want = run(&xs, |x| wht_naive(x).unwrap());
            assert_eq!(run(&xs, |x| wht_folklore(x).unwrap()), want, "folklore n={n}");
            assert_eq!(run(&xs, |x| wht_h4(x, 0).unwrap()), want, "h4 n={n}");
            assert_eq!(run(&xs, |x| wht_h8(x, 0).unwrap()), want, "h8 n={n}");
        }
    }

    #[test]
    fn scaling_law_is_exact() {
        let mut rng = SplitMix64::new(3);
        let xs: Vec<f64> = (0..64).map(|_| rng.next_signed_unit()).collect();
        let base4 = run(&xs, |x| wht_h4(x, 0).unwrap());
        let base8 = run(&xs, |x| wht_h8(x, 0).unwrap());
        for k in 1..=8 {
            let scale = f64::powi(2.0, k);
            let got4 = run(&xs, |x| wht_h4(x, k as u32).unwrap());
            let got8 = run(&xs, |x| wht_h8(x, k as u32).unwrap());
            for i in 0..64 {
                assert_eq!(got4[i], scale * base4[i]);
                assert_eq!(got8[i], scale * base8[i]);
            }
        }
    }

    #[test]
    fn involution_on_integers() {
        let mut rng = SplitMix64::new(11);
        let n = 32;
        let xs: Vec<f64> = (0..n).map(|_| rng.next_small_int(4)).collect();
        let once = run(&xs, |x| wht_h8(x, 0).unwrap());
        let twice = run(&once, |x| wht_h8(x, 0).unwrap());
        for i in 0..n {
            assert_eq!(twice[i], n as f64 * xs[i]);
        }
    }

    #[test]
    fn complex_entries_charge_double() {
        let xs: Vec<ComplexPair> = (0..8)
            .map(|i| ComplexPair::new(i as f64, -(i as f64)))
            .collect();
        let ((), tc) = with_tally(|| {
            wht_h8(&xs, 0).unwrap();
        });
        assert_eq!(
            tc,
            OpTally {
                add_sub: 44,
                mul: 0,
                div2: 2,
                mul_pow2: 14,
            }
        );
    }
}
