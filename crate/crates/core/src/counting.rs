//! The operation-counting scalar and its charging rules.
//!
//! Arithmetic is modeled as a fan-in-2 circuit over real numbers. Each step
//! charges the innermost active tally (and every enclosing one) according to
//! a fixed convention:
//!
//! * an addition or subtraction costs one `AddSub`;
//! * multiplying by the literal constants `0`, `1`, `-1` is free;
//! * multiplying by `1/2` costs one `Div2`;
//! * multiplying by any other power of two costs one `MulPow2`;
//! * any other multiplication costs one `Mul`;
//! * an addition whose operand is a product with the literal constant zero
//!   is elided at construction and charges nothing.
//!
//! Constants are classified once, when the circuit is built (twiddle tables,
//! signs, powers of two); runtime values are never re-classified. The numeric
//! value of every operation is bit-identical to uninstrumented `f64`
//! arithmetic.

use crate::Error;
use std::cell::RefCell;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// The four operation classes that are tallied separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpClass {
    AddSub,
    Mul,
    Div2,
    MulPow2,
}

/// Exact per-class operation counts for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct OpTally {
    pub add_sub: u64,
    pub mul: u64,
    pub div2: u64,
    pub mul_pow2: u64,
}

impl OpTally {
    pub const ZERO: OpTally = OpTally {
        add_sub: 0,
        mul: 0,
        div2: 0,
        mul_pow2: 0,
    };

    pub fn total(&self) -> u64 {
        self.add_sub + self.mul + self.div2 + self.mul_pow2
    }

    pub fn is_zero(&self) -> bool {
        *self == OpTally::ZERO
    }

    fn bump(&mut self, class: OpClass, n: u64) {
        match class {
            OpClass::AddSub => self.add_sub += n,
            OpClass::Mul => self.mul += n,
            OpClass::Div2 => self.div2 += n,
            OpClass::MulPow2 => self.mul_pow2 += n,
        }
    }

    /// Tally after one more arithmetic step, per the charging convention.
    pub fn charge(mut self, step: ArithStep) -> OpTally {
        if let Some(class) = step.class() {
            self.bump(class, 1);
        }
        self
    }
}

impl Add for OpTally {
    type Output = OpTally;
    fn add(self, rhs: OpTally) -> OpTally {
        OpTally {
            add_sub: self.add_sub + rhs.add_sub,
            mul: self.mul + rhs.mul,
            div2: self.div2 + rhs.div2,
            mul_pow2: self.mul_pow2 + rhs.mul_pow2,
        }
    }
}

impl AddAssign for OpTally {
    fn add_assign(&mut self, rhs: OpTally) {
        *self = *self + rhs;
    }
}

impl Sum for OpTally {
    fn sum<I: Iterator<Item = OpTally>>(iter: I) -> OpTally {
        iter.fold(OpTally::ZERO, |a, b| a + b)
    }
}

/// One charged step, as seen by [`OpTally::charge`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithStep {
    /// Real addition or subtraction.
    AddSub,
    /// Real multiplication by a constant of known classification.
    MulConst(ConstKind),
    /// Real multiplication of two non-constant values.
    MulVar,
}

impl ArithStep {
    fn class(self) -> Option<OpClass> {
        match self {
            ArithStep::AddSub => Some(OpClass::AddSub),
            ArithStep::MulVar => Some(OpClass::Mul),
            ArithStep::MulConst(kind) => match kind {
                ConstKind::Zero | ConstKind::PlusOne | ConstKind::MinusOne => None,
                ConstKind::PowTwo(-1) => Some(OpClass::Div2),
                ConstKind::PowTwo(_) => Some(OpClass::MulPow2),
                ConstKind::Generic => Some(OpClass::Mul),
            },
        }
    }
}

/// Classification of a compile-time circuit constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstKind {
    Zero,
    PlusOne,
    MinusOne,
    /// Exactly `2^e` with `e != 0`; never `0` or `±1`.
    PowTwo(i32),
    Generic,
}

/// Classify a finite real constant.
pub fn classify_constant(c: f64) -> Result<ConstKind, Error> {
    if !c.is_finite() {
        return Err(Error::NonFiniteConstant(c));
    }
    if c == 0.0 {
        return Ok(ConstKind::Zero);
    }
    if c == 1.0 {
        return Ok(ConstKind::PlusOne);
    }
    if c == -1.0 {
        return Ok(ConstKind::MinusOne);
    }
    let bits = c.to_bits();
    let mantissa = bits & ((1u64 << 52) - 1);
    let biased = ((bits >> 52) & 0x7ff) as i32;
    if c > 0.0 && mantissa == 0 && biased != 0 {
        return Ok(ConstKind::PowTwo(biased - 1023));
    }
    Ok(ConstKind::Generic)
}

/// A classified circuit constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant {
    value: f64,
    kind: ConstKind,
}

impl Constant {
    pub const ZERO: Constant = Constant {
        value: 0.0,
        kind: ConstKind::Zero,
    };
    pub const ONE: Constant = Constant {
        value: 1.0,
        kind: ConstKind::PlusOne,
    };

    pub fn new(value: f64) -> Result<Constant, Error> {
        Ok(Constant {
            value,
            kind: classify_constant(value)?,
        })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn kind(self) -> ConstKind {
        self.kind
    }

    pub fn is_zero(self) -> bool {
        self.kind == ConstKind::Zero
    }

    pub fn negated(self) -> Constant {
        Constant::new(-self.value).expect("negation of a finite constant is finite")
    }

    pub fn reciprocal(self) -> Constant {
        Constant::new(1.0 / self.value).expect("reciprocal must be finite")
    }

    /// `self * x`, charged by classification.
    pub fn times(self, x: CountedScalar) -> CountedScalar {
        match self.kind {
            ConstKind::Zero => CountedScalar::new(0.0),
            ConstKind::PlusOne => x,
            ConstKind::MinusOne => -x,
            ConstKind::PowTwo(-1) => CountedScalar::fresh(x.0 * self.value, OpClass::Div2),
            ConstKind::PowTwo(_) => CountedScalar::fresh(x.0 * self.value, OpClass::MulPow2),
            ConstKind::Generic => CountedScalar::fresh(x.0 * self.value, OpClass::Mul),
        }
    }
}

/// Multiply by `2^k` through an explicit scale gate.
///
/// Gates are fixed circuit structure: each charges one `MulPow2` whatever its
/// exponent, including `k == 0`. Use [`Constant::times`] for ordinary
/// power-of-two constants, which are free at exponent zero.
pub fn gate_pow2(x: CountedScalar, k: u32) -> CountedScalar {
    CountedScalar::fresh(x.0 * f64::powi(2.0, k as i32), OpClass::MulPow2)
}

/// `p*x + q*y` with construction-time elision of zero-constant terms.
pub fn mul_add(p: Constant, x: CountedScalar, q: Constant, y: CountedScalar) -> CountedScalar {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => CountedScalar::new(0.0),
        (true, false) => q.times(y),
        (false, true) => p.times(x),
        (false, false) => p.times(x) + q.times(y),
    }
}

/// `p*x - q*y` with construction-time elision of zero-constant terms.
pub fn mul_sub(p: Constant, x: CountedScalar, q: Constant, y: CountedScalar) -> CountedScalar {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => CountedScalar::new(0.0),
        (true, false) => -q.times(y),
        (false, true) => p.times(x),
        (false, false) => p.times(x) - q.times(y),
    }
}

#[derive(Default, Clone, Copy)]
struct Frame {
    tally: OpTally,
    max_abs: f64,
}

thread_local! {
    static FRAMES: RefCell<Vec<Frame>> = const { RefCell::new(Vec::new()) };
}

fn charge_frames(class: OpClass, value: f64) {
    FRAMES.with(|frames| {
        let mut frames = frames.borrow_mut();
        let abs = value.abs();
        for frame in frames.iter_mut() {
            frame.tally.bump(class, 1);
            if abs > frame.max_abs {
                frame.max_abs = abs;
            }
        }
    });
}

fn note_value(value: f64) {
    FRAMES.with(|frames| {
        let mut frames = frames.borrow_mut();
        let abs = value.abs();
        for frame in frames.iter_mut() {
            if abs > frame.max_abs {
                frame.max_abs = abs;
            }
        }
    });
}

/// Summary of one instrumented run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub tally: OpTally,
    /// Largest absolute value produced by any charged or created scalar.
    pub max_abs: f64,
}

struct FrameGuard;

impl Drop for FrameGuard {
    fn drop(&mut self) {
        FRAMES.with(|frames| {
            frames.borrow_mut().pop();
        });
    }
}

/// Run `f` under a fresh tally and return its result with the tally and the
/// peak intermediate magnitude.
///
/// Contexts nest: an inner context sees only its own charges, while every
/// charge inside it also lands in the enclosing contexts, so a parent tally
/// always covers its whole computation.
pub fn with_stats<T>(f: impl FnOnce() -> T) -> (T, RunStats) {
    FRAMES.with(|frames| frames.borrow_mut().push(Frame::default()));
    let guard = FrameGuard;
    let out = f();
    let frame = FRAMES.with(|frames| {
        frames
            .borrow_mut()
            .pop()
            .expect("tally frame stack underflow")
    });
    std::mem::forget(guard);
    (
        out,
        RunStats {
            tally: frame.tally,
            max_abs: frame.max_abs,
        },
    )
}

/// Run `f` under a fresh tally and return its result and the tally.
pub fn with_tally<T>(f: impl FnOnce() -> T) -> (T, OpTally) {
    let (out, stats) = with_stats(f);
    (out, stats.tally)
}

/// A real value whose arithmetic charges the active tally contexts.
///
/// Values are plain `f64`s; instrumentation never changes a result bit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CountedScalar(f64);

impl CountedScalar {
    pub fn new(value: f64) -> CountedScalar {
        note_value(value);
        CountedScalar(value)
    }

    fn fresh(value: f64, class: OpClass) -> CountedScalar {
        charge_frames(class, value);
        CountedScalar(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for CountedScalar {
    fn from(value: f64) -> CountedScalar {
        CountedScalar::new(value)
    }
}

impl Add for CountedScalar {
    type Output = CountedScalar;
    fn add(self, rhs: CountedScalar) -> CountedScalar {
        CountedScalar::fresh(self.0 + rhs.0, OpClass::AddSub)
    }
}

impl Sub for CountedScalar {
    type Output = CountedScalar;
    fn sub(self, rhs: CountedScalar) -> CountedScalar {
        CountedScalar::fresh(self.0 - rhs.0, OpClass::AddSub)
    }
}

impl Mul for CountedScalar {
    type Output = CountedScalar;
    fn mul(self, rhs: CountedScalar) -> CountedScalar {
        CountedScalar::fresh(self.0 * rhs.0, OpClass::Mul)
    }
}

impl Neg for CountedScalar {
    type Output = CountedScalar;
    // Sign absorption is free.
    fn neg(self) -> CountedScalar {
        CountedScalar::new(-self.0)
    }
}

/// Wrap a slice of plain reals.
pub fn counted_vec(xs: &[f64]) -> Vec<CountedScalar> {
    xs.iter().copied().map(CountedScalar::new).collect()
}

/// Unwrap back to plain reals.
pub fn value_vec(xs: &[CountedScalar]) -> Vec<f64> {
    xs.iter().map(|x| x.value()).collect()
}
