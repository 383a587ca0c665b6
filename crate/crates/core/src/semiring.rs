//! Commutative semirings for junction-tree message passing.
//!
//! All three instances are nonnegative and free of zero divisors, which is
//! what lets the calibrated beliefs be read as "zero or positive" and lets
//! enumeration extend any nonzero partial assignment without backtracking.
//!
//! - [`Boolean`]: `({0, 1}, or, and)` decides existence.
//! - [`Counting`]: `(N, +, *)` with arbitrary precision counts equilibria.
//! - [`MaxProduct`]: `max` and `*` over powers of a symbolic `eps`, stored
//!   as exponents, so `eps^a * eps^b = eps^(a+b)` and `max` picks the
//!   smaller exponent. The numeric `eps` is only applied when rendering.

use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub trait Semiring: Clone + Debug + Send + Sync {
    type Value: Clone + PartialEq + Debug + Send + Sync;

    fn name(&self) -> &'static str;
    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn add_assign(&self, a: &mut Self::Value, b: &Self::Value) {
        *a = self.add(a, b);
    }

    fn mul_assign(&self, a: &mut Self::Value, b: &Self::Value) {
        *a = self.mul(a, b);
    }

    fn is_zero(&self, a: &Self::Value) -> bool {
        *a == self.zero()
    }

    /// Value of the indicator of a player who is not best-responding, when
    /// the unsatisfied weight is `epsilon`. `None` if this semiring cannot
    /// represent it.
    fn penalty(&self, epsilon: f64) -> Option<Self::Value>;

    /// Folds `add` over an iterator, starting from zero.
    fn sum<'a>(&self, values: impl IntoIterator<Item = &'a Self::Value>) -> Self::Value
    where
        Self::Value: 'a,
    {
        let mut acc = self.zero();
        for v in values {
            self.add_assign(&mut acc, v);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Boolean;

impl Semiring for Boolean {
    type Value = bool;

    fn name(&self) -> &'static str {
        "boolean"
    }
    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn penalty(&self, epsilon: f64) -> Option<bool> {
        (epsilon == 0.0).then_some(false)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counting;

impl Semiring for Counting {
    type Value = BigUint;

    fn name(&self) -> &'static str {
        "counting"
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn add_assign(&self, a: &mut BigUint, b: &BigUint) {
        *a += b;
    }
    fn mul_assign(&self, a: &mut BigUint, b: &BigUint) {
        if a.is_zero() {
            return;
        }
        if b.is_zero() {
            a.set_zero();
        } else if a.is_one() {
            a.clone_from(b);
        } else if !b.is_one() {
            *a *= b;
        }
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn penalty(&self, epsilon: f64) -> Option<BigUint> {
        (epsilon == 0.0).then(BigUint::zero)
    }
}

/// `eps^k` for a symbolic `eps`; `None` stands for the exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EpsPower(pub Option<u64>);

impl EpsPower {
    pub const ZERO: EpsPower = EpsPower(None);
    pub const ONE: EpsPower = EpsPower(Some(0));

    pub fn pow(k: u64) -> Self {
        EpsPower(Some(k))
    }

    pub fn exponent(self) -> Option<u64> {
        self.0
    }

    /// Numeric value at a concrete `eps`, with `0^0 = 1`.
    pub fn at(self, eps: f64) -> f64 {
        match self.0 {
            None => 0.0,
            Some(0) => 1.0,
            Some(k) if k <= i32::MAX as u64 => eps.powi(k as i32),
            Some(k) => eps.powf(k as f64),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaxProduct;

impl Semiring for MaxProduct {
    type Value = EpsPower;

    fn name(&self) -> &'static str {
        "max-product"
    }
    fn zero(&self) -> EpsPower {
        EpsPower::ZERO
    }
    fn one(&self) -> EpsPower {
        EpsPower::ONE
    }
    fn add(&self, a: &EpsPower, b: &EpsPower) -> EpsPower {
        match (a.0, b.0) {
            (None, _) => *b,
            (_, None) => *a,
            (Some(x), Some(y)) => EpsPower(Some(x.min(y))),
        }
    }
    fn mul(&self, a: &EpsPower, b: &EpsPower) -> EpsPower {
        match (a.0, b.0) {
            (Some(x), Some(y)) => EpsPower(Some(x + y)),
            _ => EpsPower::ZERO,
        }
    }
    fn penalty(&self, epsilon: f64) -> Option<EpsPower> {
        (0.0..1.0).contains(&epsilon).then_some(EpsPower::pow(1))
    }
}
