//! DFT kernels over counted complex arithmetic.
//!
//! * [`dft_naive`]: quadratic summation; the oracle.
//! * [`fft_sr`]: conjugate-pair split-radix, with one half-size call on the
//!   even indices and two quarter-size calls on indices `1 mod 4` and
//!   `3 mod 4` (where `x[-1]` wraps to `x[N-1]`).
//! * [`msr`]: the scaled split-radix family: four mutually recursive
//!   procedures whose outputs are the DFT divided entrywise by
//!   `1`, `s(N,k)`, `s(2N,k)`, `s(4N,k)`. The scaled twiddles `t(N,k)` have
//!   a `+-1` component, which makes the quarter-size workhorse cheaper.
//! * [`whufft_tw`] / [`whufft`]: the uprooted pipeline: the input is
//!   reordered by the recursive split-radix permutation (a free index
//!   gather), all pre-twiddle additions are hoisted into one `H'` pass, and
//!   the remaining twiddle recursion computes each cross term
//!   `D = r*b - r'*c'`, `E = r*b' + r'*c`, `F = r'*b + r*c'`,
//!   `G = r'*b' - r*c` once and uses it twice. After the reordering the
//!   twiddle recursion's children are contiguous: the first half, third
//!   quarter, and fourth quarter of its input.
//!
//! Root convention: `omega_N = e^{-2 pi i / N}`.

use crate::complex::{ComplexConst, ComplexPair};
use crate::counting::{mul_add, mul_sub, with_tally, Constant, CountedScalar, OpTally};
use crate::hprime::{apply_hprime, WhtImpl};
use crate::twiddles::{s_scale, SizeTables};
use crate::{require_power_of_two, Error};
use std::f64::consts::PI;

/// Output scaling of the scaled split-radix procedures: the DFT divided by
/// `1`, `s(N,k)`, `s(2N,k)`, or `s(4N,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaledVariant {
    Plain,
    S,
    S2,
    S4,
}

/// The divisor `d` with `variant_output[k] * d = dft(x)[k]`.
pub fn scaled_divisor(variant: ScaledVariant, n: u64, k: u64) -> Result<f64, Error> {
    match variant {
        ScaledVariant::Plain => {
            if k < n {
                Ok(1.0)
            } else {
                Err(Error::IndexOutOfRange { k, n })
            }
        }
        ScaledVariant::S => s_scale(n, k),
        ScaledVariant::S2 => s_scale(2 * n, k),
        ScaledVariant::S4 => s_scale(4 * n, k),
    }
}

/// Quadratic-summation DFT: `y_k = sum_j omega_N^{jk} x_j`.
pub fn dft_naive(x: &[ComplexPair]) -> Result<Vec<ComplexPair>, Error> {
    require_power_of_two(x.len())?;
    let n = x.len();
    if n == 1 {
        return Ok(x.to_vec());
    }
    let roots: Vec<ComplexConst> = (0..n)
        .map(|m| {
            let angle = 2.0 * PI * m as f64 / n as f64;
            let im = if m == 0 { 0.0 } else { -angle.sin() };
            ComplexConst::new(angle.cos(), im).expect("finite")
        })
        .collect();
    let mut y = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = roots[0].mul(x[0]);
        for (j, &v) in x.iter().enumerate().skip(1) {
            acc = acc.add(roots[(j * k) % n].mul(v));
        }
        y.push(acc);
    }
    Ok(y)
}

fn gather_even(x: &[ComplexPair]) -> Vec<ComplexPair> {
    (0..x.len() / 2).map(|j| x[2 * j]).collect()
}

fn gather_mod4_plus1(x: &[ComplexPair]) -> Vec<ComplexPair> {
    (0..x.len() / 4).map(|j| x[4 * j + 1]).collect()
}

// x[4j - 1] with x[-1] = x[N - 1].
fn gather_mod4_minus1(x: &[ComplexPair]) -> Vec<ComplexPair> {
    let n = x.len();
    (0..n / 4).map(|j| x[(4 * j + n - 1) % n]).collect()
}

fn butterfly2(x: &[ComplexPair]) -> Vec<ComplexPair> {
    vec![x[0].add(x[1]), x[0].sub(x[1])]
}

/// Base cases shared by the scaled procedures: identity at length 1, the
/// 2-point DFT at length 2. The `S4` variant's length-2 divisor `s(8,1)` is
/// not 1, so that output entry carries its scaling.
fn scaled_base(x: &[ComplexPair], variant: ScaledVariant) -> Vec<ComplexPair> {
    if x.len() == 1 {
        return x.to_vec();
    }
    let mut y = butterfly2(x);
    if variant == ScaledVariant::S4 {
        let inv = Constant::new(1.0 / s_scale(8, 1).expect("in range")).expect("finite");
        y[1] = inv.scale(y[1]);
    }
    y
}

fn a_child_variant(variant: ScaledVariant) -> ScaledVariant {
    match variant {
        ScaledVariant::Plain => ScaledVariant::Plain,
        ScaledVariant::S => ScaledVariant::S2,
        ScaledVariant::S2 => ScaledVariant::S4,
        ScaledVariant::S4 => ScaledVariant::S2,
    }
}

/// Conjugate-pair split-radix FFT.
pub fn fft_sr(x: &[ComplexPair]) -> Result<Vec<ComplexPair>, Error> {
    require_power_of_two(x.len())?;
    Ok(sr_rec(x))
}

fn sr_rec(x: &[ComplexPair]) -> Vec<ComplexPair> {
    let n = x.len();
    if n == 1 {
        return x.to_vec();
    }
    if n == 2 {
        return butterfly2(x);
    }
    let a = sr_rec(&gather_even(x));
    let b = sr_rec(&gather_mod4_plus1(x));
    let c = sr_rec(&gather_mod4_minus1(x));
    let tables = SizeTables::get(n.trailing_zeros());
    let q = n / 4;
    let mut y = vec![ComplexPair::zero(); n];
    for k in 0..q {
        let wb = tables.om[k].mul(b[k]);
        let wc = tables.om_conj[k].mul(c[k]);
        let sum = wb.add(wc);
        let dif = wb.sub(wc);
        y[k] = a[k].add(sum);
        y[k + q] = a[k + q].sub_mul_i(dif);
        y[k + 2 * q] = a[k].sub(sum);
        y[k + 3 * q] = a[k + q].add_mul_i(dif);
    }
    y
}

/// Scaled split-radix: output entry `k` is `dft(x)[k] / divisor(variant)`.
pub fn msr(x: &[ComplexPair], variant: ScaledVariant) -> Result<Vec<ComplexPair>, Error> {
    require_power_of_two(x.len())?;
    Ok(msr_rec(x, variant))
}

fn msr_rec(x: &[ComplexPair], variant: ScaledVariant) -> Vec<ComplexPair> {
    let n = x.len();
    if n <= 2 {
        return scaled_base(x, variant);
    }
    let a = msr_rec(&gather_even(x), a_child_variant(variant));
    let b = msr_rec(&gather_mod4_plus1(x), ScaledVariant::S);
    let c = msr_rec(&gather_mod4_minus1(x), ScaledVariant::S);
    let tables = SizeTables::get(n.trailing_zeros());
    let q = n / 4;
    let mut y = vec![ComplexPair::zero(); n];
    for k in 0..q {
        let (tw, tw_conj) = match variant {
            ScaledVariant::Plain => (tables.w[k], tables.w_conj[k]),
            _ => (tables.t[k], tables.t_conj[k]),
        };
        let wb = tw.mul(b[k]);
        let wc = tw_conj.mul(c[k]);
        let sum = wb.add(wc);
        let dif = wb.sub(wc);
        match variant {
            ScaledVariant::Plain | ScaledVariant::S => {
                y[k] = a[k].add(sum);
                y[k + q] = a[k + q].sub_mul_i(dif);
                y[k + 2 * q] = a[k].sub(sum);
                y[k + 3 * q] = a[k + q].add_mul_i(dif);
            }
            ScaledVariant::S2 => {
                let sum = tables.r2a[k].scale(sum);
                let dif = tables.r2b[k].scale(dif);
                y[k] = a[k].add(sum);
                y[k + q] = a[k + q].sub_mul_i(dif);
                y[k + 2 * q] = a[k].sub(sum);
                y[k + 3 * q] = a[k + q].add_mul_i(dif);
            }
            ScaledVariant::S4 => {
                y[k] = tables.r4[0][k].scale(a[k].add(sum));
                y[k + q] = tables.r4[1][k].scale(a[k + q].sub_mul_i(dif));
                y[k + 2 * q] = tables.r4[2][k].scale(a[k].sub(sum));
                y[k + 3 * q] = tables.r4[3][k].scale(a[k + q].add_mul_i(dif));
            }
        }
    }
    y
}

/// The four cross terms of the conjugate-pair butterfly and the four outputs
/// they produce.
#[derive(Debug, Clone, Copy)]
pub struct ConjButterfly {
    /// `D, E, F, G`.
    pub cross: [CountedScalar; 4],
    /// `y_k, y_{k+N/4}, y_{k+N/2}, y_{k+3N/4}`.
    pub out: [ComplexPair; 4],
}

/// Compute `D = r*b - r'*c'`, `E = r*b' + r'*c`, `F = r'*b + r*c'`,
/// `G = r'*b' - r*c` once, then the eight output reals
/// `(a+-D) + (a'+-E)i` and `(z+-F) + (z'+-G)i`.
///
/// With `b, c` holding the sum/difference coordinates of two subtransforms
/// `B, C` and `w = r + r'i`, the outputs equal `A + (wB + w*C)`,
/// `Z - i(wB - w*C)`, `A - (wB + w*C)`, `Z + i(wB - w*C)`.
pub fn conj_combine(
    a: ComplexPair,
    z: ComplexPair,
    b: ComplexPair,
    c: ComplexPair,
    w: ComplexConst,
) -> ConjButterfly {
    let [d, e, f, g] = cross_terms(w, b, c);
    ConjButterfly {
        cross: [d, e, f, g],
        out: [
            ComplexPair {
                re: a.re + d,
                im: a.im + e,
            },
            ComplexPair {
                re: z.re + f,
                im: z.im + g,
            },
            ComplexPair {
                re: a.re - d,
                im: a.im - e,
            },
            ComplexPair {
                re: z.re - f,
                im: z.im - g,
            },
        ],
    }
}

fn cross_terms(w: ComplexConst, b: ComplexPair, c: ComplexPair) -> [CountedScalar; 4] {
    [
        mul_sub(w.re, b.re, w.im, c.im),
        mul_add(w.re, b.im, w.im, c.re),
        mul_add(w.im, b.re, w.re, c.im),
        mul_sub(w.im, b.im, w.re, c.re),
    ]
}

/// The recursive input reordering of the uprooted pipeline: even indices
/// first, then `4j+1`, then `4j-1` (wrapping), applied within each block all
/// the way down. Gathering through it costs nothing.
pub fn whufft_input_permutation(n: usize) -> Result<Vec<usize>, Error> {
    require_power_of_two(n)?;
    Ok(build_perm(n))
}

fn build_perm(n: usize) -> Vec<usize> {
    if n <= 2 {
        return (0..n).collect();
    }
    let mut out = Vec::with_capacity(n);
    for j in build_perm(n / 2) {
        out.push(2 * j);
    }
    for j in build_perm(n / 4) {
        out.push(4 * j + 1);
    }
    for j in build_perm(n / 4) {
        out.push((4 * j + n - 1) % n);
    }
    out
}

/// The twiddle recursion of the uprooted pipeline. The input is understood
/// to be `H'`-transformed, permutation-ordered data:
/// `whufft_tw(apply_hprime(permuted x), Plain)` is the DFT of `x`, and the
/// scaled variants divide by the same tables as [`msr`].
pub fn whufft_tw(x: &[ComplexPair], variant: ScaledVariant) -> Result<Vec<ComplexPair>, Error> {
    require_power_of_two(x.len())?;
    Ok(tw_rec(x, variant))
}

fn tw_rec(x: &[ComplexPair], variant: ScaledVariant) -> Vec<ComplexPair> {
    let n = x.len();
    if n <= 2 {
        return scaled_base(x, variant);
    }
    let a = tw_rec(&x[..n / 2], a_child_variant(variant));
    let b = tw_rec(&x[n / 2..3 * n / 4], ScaledVariant::S);
    let c = tw_rec(&x[3 * n / 4..], ScaledVariant::S);
    let tables = SizeTables::get(n.trailing_zeros());
    let q = n / 4;
    let mut y = vec![ComplexPair::zero(); n];
    for k in 0..q {
        let w = match variant {
            ScaledVariant::Plain => tables.w[k],
            _ => tables.t[k],
        };
        match variant {
            ScaledVariant::Plain | ScaledVariant::S => {
                let bf = conj_combine(a[k], a[k + q], b[k], c[k], w);
                y[k] = bf.out[0];
                y[k + q] = bf.out[1];
                y[k + 2 * q] = bf.out[2];
                y[k + 3 * q] = bf.out[3];
            }
            ScaledVariant::S2 => {
                let [d, e, f, g] = cross_terms(w, b[k], c[k]);
                let d = tables.r2a[k].times(d);
                let e = tables.r2a[k].times(e);
                let f = tables.r2b[k].times(f);
                let g = tables.r2b[k].times(g);
                let (ak, zk) = (a[k], a[k + q]);
                y[k] = ComplexPair {
                    re: ak.re + d,
                    im: ak.im + e,
                };
                y[k + q] = ComplexPair {
                    re: zk.re + f,
                    im: zk.im + g,
                };
                y[k + 2 * q] = ComplexPair {
                    re: ak.re - d,
                    im: ak.im - e,
                };
                y[k + 3 * q] = ComplexPair {
                    re: zk.re - f,
                    im: zk.im - g,
                };
            }
            ScaledVariant::S4 => {
                let bf = conj_combine(a[k], a[k + q], b[k], c[k], w);
                y[k] = tables.r4[0][k].scale(bf.out[0]);
                y[k + q] = tables.r4[1][k].scale(bf.out[1]);
                y[k + 2 * q] = tables.r4[2][k].scale(bf.out[2]);
                y[k + 3 * q] = tables.r4[3][k].scale(bf.out[3]);
            }
        }
    }
    y
}

/// The full uprooted FFT: reorder the input, run one `H'` pass
/// (eighth-splitting WHT per block), then the twiddle recursion.
pub fn whufft(x: &[ComplexPair]) -> Result<Vec<ComplexPair>, Error> {
    let perm = whufft_input_permutation(x.len())?;
    let v: Vec<ComplexPair> = perm.iter().map(|&i| x[i]).collect();
    let h = apply_hprime(&v, WhtImpl::H8)?;
    Ok(tw_rec(&h, ScaledVariant::Plain))
}

/// [`whufft`], with the two phases measured under their own tallies.
/// Charges still propagate to any enclosing context, so an outer tally of
/// this call equals the sum of the two phase tallies exactly.
pub fn whufft_phases(
    x: &[ComplexPair],
) -> Result<(Vec<ComplexPair>, OpTally, OpTally), Error> {
    let perm = whufft_input_permutation(x.len())?;
    let v: Vec<ComplexPair> = perm.iter().map(|&i| x[i]).collect();
    let (h, hprime_tally) = with_tally(|| apply_hprime(&v, WhtImpl::H8));
    let h = h?;
    let (y, tw_tally) = with_tally(|| tw_rec(&h, ScaledVariant::Plain));
    Ok((y, hprime_tally, tw_tally))
}
