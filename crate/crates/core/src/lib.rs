//! Walsh-Hadamard and Fourier transform kernels over an exact
//! operation-counting scalar.
//!
//! Every transform in this crate runs on [`counting::CountedScalar`] (or
//! [`complex::ComplexPair`], a pair of them), so a single run yields both the
//! numeric result and an exact [`counting::OpTally`]: how many real
//! additions/subtractions, generic multiplications, halvings, and
//! multiplications by larger powers of two the circuit performed.
//!
//! The kernels come in families, each with a brute-force oracle:
//!
//! * [`wht`]: Walsh-Hadamard transforms: quadratic definition, the radix-2
//!   recursion, and the scaled quarter- and eighth-splitting variants that
//!   trade generic work for power-of-two scalings.
//! * [`hprime`]: the block-diagonal `H'` transform, its index partition,
//!   and the partition-counting combinatorics `F(N1, N2)`.
//! * [`fft`]: the DFT: quadratic definition, conjugate-pair split-radix,
//!   the four mutually recursive scaled split-radix procedures, and the
//!   uprooted pipeline that runs all pre-twiddle additions through `H'`.
//! * [`predict`]: closed-form operation-count predictors and crossover
//!   search between algorithms.

pub mod complex;
pub mod counting;
pub mod fft;
pub mod hprime;
pub mod predict;
pub mod rng;
pub mod twiddles;
pub mod wht;

use std::fmt;

/// Errors shared across the kernel modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input length must be a power of two (and nonzero).
    NonPowerOfTwoLength(usize),
    /// A circuit constant must be finite to be classified.
    NonFiniteConstant(f64),
    /// A size exceeded the limit supported by the requested operation.
    TooLarge {
        what: &'static str,
        requested: u64,
        max: u64,
    },
    /// An index was outside `0..n`.
    IndexOutOfRange { k: u64, n: u64 },
    /// Unrecognized algorithm identifier.
    UnknownAlgorithm(String),
    /// Predictions of different kinds cannot be compared.
    IncomparablePredictions(&'static str, &'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPowerOfTwoLength(n) => {
                write!(f, "length {n} is not a power of two")
            }
            Error::NonFiniteConstant(c) => write!(f, "constant {c} is not finite"),
            Error::TooLarge {
                what,
                requested,
                max,
            } => write!(f, "{what} {requested} exceeds supported maximum {max}"),
            Error::IndexOutOfRange { k, n } => write!(f, "index {k} out of range 0..{n}"),
            Error::UnknownAlgorithm(s) => write!(f, "unknown algorithm {s:?}"),
            Error::IncomparablePredictions(a, b) => {
                write!(f, "cannot compare a {a} prediction with a {b} prediction")
            }
        }
    }
}

impl std::error::Error for Error {}

pub(crate) fn require_power_of_two(n: usize) -> Result<u32, Error> {
    if n == 0 || !n.is_power_of_two() {
        Err(Error::NonPowerOfTwoLength(n))
    } else {
        Ok(n.trailing_zeros())
    }
}
