//! Scale factors and twiddle tables for the scaled split-radix family.
//!
//! With `k4 = k mod N/4`, the scale factor is
//!
//! ```text
//! s(N, k) = 1                                   for N <= 4
//!         = s(N/4, k4) * cos(2 pi k4 / N)       for k4 <= N/8
//!         = s(N/4, k4) * sin(2 pi k4 / N)       for k4 >  N/8
//! ```
//!
//! so `s(N, k + N/4) = s(N, k)` and `0 < s(N, k) <= 1`. The scaled twiddle
//! `t(N, k) = omega_N^k * s(N/4, k) / s(N, k)` then always has one component
//! equal to `+-1`: `1 - i tan(...)` in the cosine branch, `cot(...) - i` in
//! the sine branch. Tables snap that component to exactly `+-1` (and the
//! other to `0` at `k4 = 0`) so the free-constant rules see it.
//!
//! Everything here is evaluated in plain `f64` when a table is first built,
//! cached per size, and never charged: tables are circuit constants.
//!
//! Root convention: `omega_N = e^{-2 pi i / N}`.

use crate::complex::{ComplexConst, ComplexPair};
use crate::counting::Constant;
use crate::{require_power_of_two, Error};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

fn s_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// One period (`N/4` entries) of `s(2^m, .)`, by the recursive definition.
fn s_table(m: u32) -> Arc<Vec<f64>> {
    if let Some(t) = s_cache().lock().unwrap().get(&m) {
        return Arc::clone(t);
    }
    let table = if m <= 2 {
        Arc::new(vec![1.0])
    } else {
        let n = 1u64 << m;
        let period = (n / 4) as usize;
        let inner = s_table(m - 2);
        let mut vals = Vec::with_capacity(period);
        for k in 0..period {
            let angle = 2.0 * PI * k as f64 / n as f64;
            let trig = if (k as u64) <= n / 8 {
                angle.cos()
            } else {
                angle.sin()
            };
            vals.push(inner[k % inner.len()] * trig);
        }
        Arc::new(vals)
    };
    let mut guard = s_cache().lock().unwrap();
    Arc::clone(guard.entry(m).or_insert(table))
}

/// `s(n, k)` for `0 <= k < n`.
pub fn s_scale(n: u64, k: u64) -> Result<f64, Error> {
    let m = require_power_of_two(usize::try_from(n).unwrap_or(0))?;
    if k >= n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    let table = s_table(m);
    Ok(table[(k as usize) % table.len()])
}

/// `t(n, k) = omega_n^k * s(n/4, k) / s(n, k)` for `0 <= k < n`, with the
/// unit component snapped to exactly `+-1` and, at `k4 = 0`, the other
/// component snapped to exactly `0`.
pub fn t_twiddle(n: u64, k: u64) -> Result<ComplexPair, Error> {
    let m = require_power_of_two(usize::try_from(n).unwrap_or(0))?;
    if k >= n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    if n <= 2 {
        // s ratios are 1 here, so t is the bare root of unity, +-1.
        let re = if k == 0 { 1.0 } else { -1.0 };
        return Ok(ComplexPair::new(re, 0.0));
    }
    let period = n / 4;
    let (re, im) = t_component_values(m, (k % period) as usize);
    // omega_n^{k4 + q n/4} = omega_n^{k4} * (-i)^q.
    let rotated = match k / period {
        0 => (re, im),
        1 => (im, -re),
        2 => (-re, -im),
        _ => (-im, re),
    };
    Ok(ComplexPair::new(rotated.0, rotated.1))
}

/// Raw snapped components of `t(2^m, k4)` for `k4` within one period.
fn t_component_values(m: u32, k4: usize) -> (f64, f64) {
    let n = 1u64 << m;
    let s_n = s_table(m);
    let s_quarter = s_table(m.saturating_sub(2));
    let angle = 2.0 * PI * k4 as f64 / n as f64;
    let ratio = s_quarter[k4 % s_quarter.len()] / s_n[k4];
    if (k4 as u64) <= n / 8 {
        // 1 - i tan(angle); at k4 = n/8 the tangent is exactly 1.
        let im = if k4 == 0 { 0.0 } else { -angle.sin() * ratio };
        debug_assert!((angle.cos() * ratio - 1.0).abs() < 1e-12);
        (1.0, snap_unit(im))
    } else {
        // cot(angle) - i
        debug_assert!((angle.sin() * ratio - 1.0).abs() < 1e-12);
        (snap_unit(angle.cos() * ratio), -1.0)
    }
}

// Components within 1e-12 of +-1 are +-1 exactly (boundary tangents); snap
// so constant classification sees them.
fn snap_unit(v: f64) -> f64 {
    if (v - 1.0).abs() < 1e-12 {
        1.0
    } else if (v + 1.0).abs() < 1e-12 {
        -1.0
    } else {
        v
    }
}

/// Per-size constant tables for one recursion level of the split-radix
/// family (loop size `n = 2^m`, `m >= 2`).
pub(crate) struct SizeTables {
    /// `omega_n^k`.
    pub om: Vec<ComplexConst>,
    pub om_conj: Vec<ComplexConst>,
    /// `omega_n^k * s(n/4, k)`.
    pub w: Vec<ComplexConst>,
    pub w_conj: Vec<ComplexConst>,
    /// `t(n, k)`, snapped.
    pub t: Vec<ComplexConst>,
    pub t_conj: Vec<ComplexConst>,
    /// `s(n, k) / s(2n, k)` and `s(n, k) / s(2n, k + n/4)`.
    pub r2a: Vec<Constant>,
    pub r2b: Vec<Constant>,
    /// `s(n, k) / s(4n, k + q n/4)` for `q = 0..4`.
    pub r4: [Vec<Constant>; 4],
}

impl SizeTables {
    fn build(m: u32) -> SizeTables {
        let n = 1u64 << m;
        let quarter = (n / 4) as usize;
        let s_n = s_table(m);
        let s_q = s_table(m.saturating_sub(2));
        let s_2n = s_table(m + 1);
        let s_4n = s_table(m + 2);

        let mut om = Vec::with_capacity(quarter);
        let mut w = Vec::with_capacity(quarter);
        let mut t = Vec::with_capacity(quarter);
        let mut r2a = Vec::with_capacity(quarter);
        let mut r2b = Vec::with_capacity(quarter);
        let mut r4: [Vec<Constant>; 4] = Default::default();

        for k in 0..quarter {
            let angle = 2.0 * PI * k as f64 / n as f64;
            let (c, s) = (angle.cos(), angle.sin());
            let im = if k == 0 { 0.0 } else { -s };
            om.push(ComplexConst::new(c, im).expect("finite"));
            let sq = s_q[k % s_q.len()];
            w.push(ComplexConst::new(c * sq, im * sq).expect("finite"));
            let (tre, tim) = t_component_values(m, k);
            t.push(ComplexConst::new(tre, tim).expect("finite"));

            let sk = s_n[k];
            r2a.push(Constant::new(sk / s_2n[k % s_2n.len()]).expect("finite"));
            r2b.push(Constant::new(sk / s_2n[(k + quarter) % s_2n.len()]).expect("finite"));
            for (q, table) in r4.iter_mut().enumerate() {
                let idx = (k + q * quarter) % s_4n.len();
                table.push(Constant::new(sk / s_4n[idx]).expect("finite"));
            }
        }
        SizeTables {
            om_conj: om.iter().map(|c| c.conj()).collect(),
            om,
            w_conj: w.iter().map(|c| c.conj()).collect(),
            w,
            t_conj: t.iter().map(|c| c.conj()).collect(),
            t,
            r2a,
            r2b,
            r4,
        }
    }

    pub fn get(m: u32) -> Arc<SizeTables> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<SizeTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&m) {
            return Arc::clone(t);
        }
        let built = Arc::new(SizeTables::build(m));
        let mut guard = cache.lock().unwrap();
        Arc::clone(guard.entry(m).or_insert(built))
    }
}
