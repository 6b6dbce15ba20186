//! Coefficient arithmetic shared by the integer fast path and the exact path.

use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;

use crate::Rational;

pub(crate) trait Coeff: Clone + Eq + Hash + Debug + Send + Sync {
    fn zero_value() -> Self;
    fn is_zero_value(&self) -> bool;
    fn accumulate(&mut self, other: &Self);
    fn to_rational(&self) -> Rational;
}

impl Coeff for i128 {
    fn zero_value() -> Self {
        0
    }

    fn is_zero_value(&self) -> bool {
        *self == 0
    }

    fn accumulate(&mut self, other: &Self) {
        *self += *other;
    }

    fn to_rational(&self) -> Rational {
        Rational::from_integer((*self).into())
    }
}

impl Coeff for Rational {
    fn zero_value() -> Self {
        Zero::zero()
    }

    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }

    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }
}
