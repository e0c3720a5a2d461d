//! The `H'` transform: a permuted direct sum of Walsh-Hadamard blocks.
//!
//! `H'_N` is defined by `H'_1 = [1]`, `H'_2 = I_2`, and the block recursion
//! whose upper-left quadrant is `H'_{N/2}` and whose lower-right quadrant is
//! the 2x2 block matrix `[[H'_{N/4}, H'_{N/4}], [H'_{N/4}, -H'_{N/4}]]`.
//! Applying it reduces to one WHT per subset of a fixed index partition of
//! `[N]`, so the whole transform inherits whatever WHT algorithm is plugged
//! in. `F(N1, N2)` counts the size-`N2` subsets of the length-`N1` partition.

use crate::complex::ComplexPair;
use crate::wht;
use crate::{require_power_of_two, Error};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Largest size the dense `H'` matrix oracle will build.
pub const MATRIX_ORACLE_MAX: usize = 1024;

/// The index partition of `[n]` into power-of-two blocks, one WHT each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    pub n: usize,
    /// Ordered subsets; pairwise disjoint, each a power-of-two size, and
    /// covering `0..n` exactly.
    pub subsets: Vec<Vec<usize>>,
}

impl PartitionSpec {
    /// Number of subsets per block size, in increasing size order.
    pub fn size_counts(&self) -> BTreeMap<usize, u64> {
        let mut counts = BTreeMap::new();
        for s in &self.subsets {
            *counts.entry(s.len()).or_insert(0) += 1;
        }
        counts
    }
}

fn build_partition(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    if n == 2 {
        return vec![vec![0], vec![1]];
    }
    let mut subsets = build_partition(n / 2);
    for subset in build_partition(n / 4) {
        let mut merged = Vec::with_capacity(subset.len() * 2);
        for i in subset {
            merged.push(i + n / 2);
            merged.push(i + 3 * n / 4);
        }
        subsets.push(merged);
    }
    subsets
}

/// The partition for length `n`, cached: it depends only on `n` and is part
/// of the circuit, not of any particular run.
pub fn partition(n: usize) -> Result<Arc<PartitionSpec>, Error> {
    require_power_of_two(n)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PartitionSpec>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Ok(Arc::clone(p));
    }
    let spec = Arc::new(PartitionSpec {
        n,
        subsets: build_partition(n),
    });
    let mut guard = cache.lock().unwrap();
    Ok(Arc::clone(guard.entry(n).or_insert(spec)))
}

/// Memoized table of `F(N1, N2)`, indexed by base-2 logs.
#[derive(Debug, Clone)]
pub struct FCountTable {
    grid: Vec<Vec<u128>>,
}

impl FCountTable {
    pub fn new(max_log2n1: u32) -> FCountTable {
        let rows = max_log2n1 as usize + 1;
        let mut grid: Vec<Vec<u128>> = Vec::with_capacity(rows);
        for l1 in 0..rows {
            let mut row = vec![0u128; l1 + 1];
            match l1 {
                0 => row[0] = 1,
                1 => row[0] = 2,
                _ => {
                    for l2 in 0..=l1 {
                        let from_half = *grid[l1 - 1].get(l2).unwrap_or(&0);
                        let from_quarter = if l2 >= 1 {
                            *grid[l1 - 2].get(l2 - 1).unwrap_or(&0)
                        } else {
                            0
                        };
                        row[l2] = from_half + from_quarter;
                    }
                }
            }
            grid.push(row);
        }
        FCountTable { grid }
    }

    /// `F(2^l1, 2^l2)`.
    pub fn get(&self, log2n1: u32, log2n2: u32) -> u128 {
        if log2n2 > log2n1 {
            return 0;
        }
        self.grid[log2n1 as usize][log2n2 as usize]
    }
}

/// `F(n1, n2)`: how many size-`n2` blocks the length-`n1` partition has.
/// Degenerate `n2` (zero, larger than `n1`, or not a power of two) count
/// zero blocks.
pub fn f_count(n1: u64, n2: u64) -> u128 {
    assert!(n1.is_power_of_two(), "n1 must be a power of two");
    if n2 == 0 || n2 > n1 || !n2.is_power_of_two() {
        return 0;
    }
    let l1 = n1.trailing_zeros();
    FCountTable::new(l1).get(l1, n2.trailing_zeros())
}

/// Which WHT algorithm drives the per-block transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhtImpl {
    Naive,
    Folklore,
    H4,
    H8,
}

impl WhtImpl {
    fn apply(self, block: &[ComplexPair]) -> Result<Vec<ComplexPair>, Error> {
        match self {
            WhtImpl::Naive => wht::wht_naive(block),
            WhtImpl::Folklore => wht::wht_folklore(block),
            WhtImpl::H4 => wht::wht_h4(block, 0),
            WhtImpl::H8 => wht::wht_h8(block, 0),
        }
    }
}

/// Apply `H'` to `x`: gather each partition subset, transform it with the
/// selected WHT, scatter back to the same indices. Index moves are free.
pub fn apply_hprime(x: &[ComplexPair], wht_impl: WhtImpl) -> Result<Vec<ComplexPair>, Error> {
    let part = partition(x.len())?;
    let mut y = x.to_vec();
    for subset in &part.subsets {
        let gathered: Vec<ComplexPair> = subset.iter().map(|&i| x[i]).collect();
        let transformed = wht_impl.apply(&gathered)?;
        for (value, &idx) in transformed.into_iter().zip(subset) {
            y[idx] = value;
        }
    }
    Ok(y)
}

/// Dense `H'_n` as a sign matrix; the test oracle for [`apply_hprime`].
pub fn hprime_matrix(n: usize) -> Result<Vec<Vec<i8>>, Error> {
    require_power_of_two(n)?;
    if n > MATRIX_ORACLE_MAX {
        return Err(Error::TooLarge {
            what: "H' matrix oracle size",
            requested: n as u64,
            max: MATRIX_ORACLE_MAX as u64,
        });
    }
    Ok(build_matrix(n))
}

fn build_matrix(n: usize) -> Vec<Vec<i8>> {
    if n == 1 {
        return vec![vec![1]];
    }
    if n == 2 {
        return vec![vec![1, 0], vec![0, 1]];
    }
    let mut m = vec![vec![0i8; n]; n];
    let upper = build_matrix(n / 2);
    for (r, row) in upper.iter().enumerate() {
        m[r][..n / 2].copy_from_slice(row);
    }
    let quarter = build_matrix(n / 4);
    let h = n / 2;
    let q = n / 4;
    for (r, row) in quarter.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m[h + r][h + c] = v;
            m[h + r][h + q + c] = v;
            m[h + q + r][h + c] = v;
            m[h + q + r][h + q + c] = -v;
        }
    }
    m
}

/// One row of the combinatorial identity sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaRow {
    pub log2n: u32,
    /// `sum_j F(N, 2^j) 2^j`; must equal `N` exactly.
    pub block_mass: u128,
    pub block_mass_ok: bool,
    /// `9 * sum_j F(N, 2^j) 2^j j  ==  3 N log N + 2 (-1)^log N - 2 N`,
    /// checked in exact integers.
    pub weighted_ok: bool,
    /// `sum_j F(N, 2^j) 2^j (j mod 3)`, exact.
    pub mod3_mass: u128,
    /// `(mod3_mass - N) / (12 N^0.8)`: the constant this `N` needs in the
    /// `N/12 + C N^0.8` bound.
    pub excess_c: f64,
}

/// Results of the exact identity sweep over all `N = 2^t`, `t <= log2n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub rows: Vec<LemmaRow>,
    /// Largest observed `excess_c` (clamped below at zero).
    pub max_c: f64,
}

impl LemmaReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.block_mass_ok && r.weighted_ok)
    }
}

pub const LEMMA_SWEEP_MAX: u32 = 40;

/// Exact integer checks of the partition-count identities.
pub fn lemma_checks(log2n_max: u32) -> Result<LemmaReport, Error> {
    if log2n_max > LEMMA_SWEEP_MAX {
        return Err(Error::TooLarge {
            what: "identity sweep log2 size",
            requested: u64::from(log2n_max),
            max: u64::from(LEMMA_SWEEP_MAX),
        });
    }
    let table = FCountTable::new(log2n_max);
    let mut rows = Vec::with_capacity(log2n_max as usize + 1);
    let mut max_c = 0.0f64;
    for t in 0..=log2n_max {
        let n: u128 = 1 << t;
        let mut block_mass: u128 = 0;
        let mut weighted: u128 = 0;
        let mut mod3_mass: u128 = 0;
        for j in 0..=t {
            let f = table.get(t, j);
            let size = 1u128 << j;
            block_mass += f * size;
            weighted += f * size * u128::from(j);
            mod3_mass += f * size * u128::from(j % 3);
        }
        let sign: i128 = if t % 2 == 0 { 1 } else { -1 };
        let rhs9 = 3 * (n as i128) * i128::from(t) + 2 * sign - 2 * (n as i128);
        let weighted_ok = 9 * (weighted as i128) == rhs9;
        let excess_c =
            (mod3_mass as f64 - n as f64) / (12.0 * (n as f64).powf(0.8));
        if excess_c > max_c {
            max_c = excess_c;
        }
        rows.push(LemmaRow {
            log2n: t,
            block_mass,
            block_mass_ok: block_mass == n,
            weighted_ok,
            mod3_mass,
            excess_c,
        });
    }
    Ok(LemmaReport { rows, max_c })
}
