//! Complex values as two separately stored counted reals.
//!
//! Real and imaginary parts are never combined into one storage cell, so the
//! usual real-operation costs fall out of the scalar rules: complex addition
//! is 2 real additions, a generic complex product is 4 multiplications and
//! 2 additions, a product where one stored component is `±1` is 4 real
//! operations, and multiplying by `±i` is a free swap.

use crate::counting::{mul_add, mul_sub, Constant, CountedScalar};
use crate::Error;

/// A complex number with separately stored real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub re: CountedScalar,
    pub im: CountedScalar,
}

impl ComplexPair {
    pub fn new(re: f64, im: f64) -> ComplexPair {
        ComplexPair {
            re: CountedScalar::new(re),
            im: CountedScalar::new(im),
        }
    }

    pub fn zero() -> ComplexPair {
        ComplexPair::new(0.0, 0.0)
    }

    pub fn values(self) -> (f64, f64) {
        (self.re.value(), self.im.value())
    }

    pub fn add(self, rhs: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }

    pub fn sub(self, rhs: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }

    /// `self + i*rhs`; the rotation by `i` is free.
    pub fn add_mul_i(self, rhs: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: self.re - rhs.im,
            im: self.im + rhs.re,
        }
    }

    /// `self - i*rhs`; the rotation by `i` is free.
    pub fn sub_mul_i(self, rhs: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: self.re + rhs.im,
            im: self.im - rhs.re,
        }
    }

    /// Product of two non-constant complex values: 4 Mul + 2 AddSub.
    pub fn mul(self, rhs: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }

    pub fn abs_max(self) -> f64 {
        self.re.value().abs().max(self.im.value().abs())
    }
}

/// A complex circuit constant with classified components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexConst {
    pub re: Constant,
    pub im: Constant,
}

impl ComplexConst {
    pub fn new(re: f64, im: f64) -> Result<ComplexConst, Error> {
        Ok(ComplexConst {
            re: Constant::new(re)?,
            im: Constant::new(im)?,
        })
    }

    pub const ONE: ComplexConst = ComplexConst {
        re: Constant::ONE,
        im: Constant::ZERO,
    };

    pub fn conj(self) -> ComplexConst {
        ComplexConst {
            re: self.re,
            im: self.im.negated(),
        }
    }

    pub fn values(self) -> (f64, f64) {
        (self.re.value(), self.im.value())
    }

    /// `self * v`, charged per component classification.
    pub fn mul(self, v: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: mul_sub(self.re, v.re, self.im, v.im),
            im: mul_add(self.re, v.im, self.im, v.re),
        }
    }
}

impl Constant {
    /// Scale a complex value by a real constant: two charges of this
    /// constant's class.
    pub fn scale(self, v: ComplexPair) -> ComplexPair {
        ComplexPair {
            re: self.times(v.re),
            im: self.times(v.im),
        }
    }
}

/// Wrap a slice of `(re, im)` pairs.
pub fn complex_vec(xs: &[(f64, f64)]) -> Vec<ComplexPair> {
    xs.iter().map(|&(re, im)| ComplexPair::new(re, im)).collect()
}

/// Wrap a real slice as complex values with zero imaginary parts.
pub fn complex_from_real(xs: &[f64]) -> Vec<ComplexPair> {
    xs.iter().map(|&re| ComplexPair::new(re, 0.0)).collect()
}

/// Largest componentwise deviation of `got` from `want`, relative to the
/// largest component magnitude of `want`. Zero-against-zero compares equal.
pub fn max_rel_err(got: &[ComplexPair], want: &[ComplexPair]) -> f64 {
    assert_eq!(got.len(), want.len());
    let mut scale = 0.0f64;
    for w in want {
        scale = scale.max(w.abs_max());
    }
    let mut worst = 0.0f64;
    for (g, w) in got.iter().zip(want) {
        let dre = (g.re.value() - w.re.value()).abs();
        let dim = (g.im.value() - w.im.value()).abs();
        worst = worst.max(dre.max(dim));
    }
    if worst == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        worst / scale
    }
}

/// Same deviation measure for real vectors.
pub fn max_rel_err_real(got: &[CountedScalar], want: &[CountedScalar]) -> f64 {
    assert_eq!(got.len(), want.len());
    let scale = want.iter().fold(0.0f64, |m, w| m.max(w.value().abs()));
    let worst = got
        .iter()
        .zip(want)
        .fold(0.0f64, |m, (g, w)| m.max((g.value() - w.value()).abs()));
    if worst == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{with_tally, OpTally};

    #[test]
    fn complex_add_charges_two() {
        let ((), t) = with_tally(|| {
            let a = ComplexPair::new(1.0, 2.0);
            let b = ComplexPair::new(3.0, 4.0);
            let _ = a.add(b);
        });
        assert_eq!(
            t,
            OpTally {
                add_sub: 2,
                ..OpTally::ZERO
            }
        );
    }

    #[test]
    fn generic_product_is_six_ops() {
        let ((), t) = with_tally(|| {
            let a = ComplexPair::new(1.0, 2.0);
            let b = ComplexPair::new(3.0, 4.0);
            let _ = a.mul(b);
        });
        assert_eq!(t.mul, 4);
        assert_eq!(t.add_sub, 2);
    }

    #[test]
    fn constant_product_charges_by_component_kind() {
        // Both components generic: 4 Mul + 2 AddSub.
        let w = ComplexConst::new(0.6, -0.8).unwrap();
        let ((), t) = with_tally(|| {
            let _ = w.mul(ComplexPair::new(1.5, 2.5));
        });
        assert_eq!((t.mul, t.add_sub), (4, 2));

        // One component is 1: 2 Mul + 2 AddSub.
        let w = ComplexConst::new(1.0, -0.75).unwrap();
        let ((), t) = with_tally(|| {
            let _ = w.mul(ComplexPair::new(1.5, 2.5));
        });
        assert_eq!((t.mul, t.add_sub), (2, 2));

        // Identity: free.
        let ((), t) = with_tally(|| {
            let _ = ComplexConst::ONE.mul(ComplexPair::new(1.5, 2.5));
        });
        assert!(t.is_zero());

        // Multiplying by a generic real: 2 Mul.
        let r = Constant::new(0.123).unwrap();
        let ((), t) = with_tally(|| {
            let _ = r.scale(ComplexPair::new(1.5, 2.5));
        });
        assert_eq!(t, OpTally { mul: 2, ..OpTally::ZERO });

        // Multiplying by the constant 1: free.
        let ((), t) = with_tally(|| {
            let _ = Constant::ONE.scale(ComplexPair::new(1.5, 2.5));
        });
        assert!(t.is_zero());
    }

    #[test]
    fn i_rotations_are_free() {
        let ((vs, vd), t) = with_tally(|| {
            let a = ComplexPair::new(1.0, 2.0);
            let d = ComplexPair::new(3.0, 5.0);
            (a.add_mul_i(d).values(), a.sub_mul_i(d).values())
        });
        assert_eq!(vs, (1.0 - 5.0, 2.0 + 3.0));
        assert_eq!(vd, (1.0 + 5.0, 2.0 - 3.0));
        assert_eq!(t.add_sub, 4);
        assert_eq!(t.total(), 4);
    }
}
