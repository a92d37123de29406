//! Budgets: naturals extended with infinity.
//!
//! Every threshold in this crate is a [`Budget`]. The sink's threshold is
//! [`Budget::Infinite`], which absorbs addition and dominates every finite
//! value, so solvers never need sentinel integers.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::Add;

use num_traits::{PrimInt, Unsigned};

/// Unsigned integer types usable as budget values.
pub trait BudgetInt:
    PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> BudgetInt for T where
    T: PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static
{
}

/// A natural number or infinity.
///
/// Ordering is total with `Infinite` greatest; the derived order relies on
/// `Finite` being declared first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Budget<N> {
    Finite(N),
    Infinite,
}

impl<N: BudgetInt> Budget<N> {
    pub fn zero() -> Self {
        Budget::Finite(N::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Budget::Finite(_))
    }

    pub fn finite(self) -> Option<N> {
        match self {
            Budget::Finite(n) => Some(n),
            Budget::Infinite => None,
        }
    }

    /// Converts an index-sized count. Panics if it does not fit `N`.
    pub fn from_count(n: usize) -> Self {
        Budget::Finite(to_int(n))
    }

    /// `self + n` for an index-sized amount.
    pub fn plus(self, n: usize) -> Self {
        self + Budget::from_count(n)
    }

    /// `self - n`, or `None` when the result would be negative.
    /// Infinity minus anything is infinity.
    pub fn checked_sub(self, n: usize) -> Option<Self> {
        match self {
            Budget::Finite(v) => v.checked_sub(&to_int(n)).map(Budget::Finite),
            Budget::Infinite => Some(Budget::Infinite),
        }
    }

    /// The value as `u128`, for mixed-width arithmetic in callers.
    pub fn to_u128(self) -> Option<u128> {
        self.finite()
            .map(|v| v.to_u128().expect("budget fits u128"))
    }
}

pub(crate) fn to_int<N: BudgetInt>(n: usize) -> N {
    N::from(n).unwrap_or_else(|| panic!("budget {n} does not fit the budget type"))
}

impl<N: BudgetInt> Add for Budget<N> {
    type Output = Budget<N>;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Budget::Finite(a), Budget::Finite(b)) => {
                Budget::Finite(a.checked_add(&b).expect("budget overflow"))
            }
            _ => Budget::Infinite,
        }
    }
}

impl<N: BudgetInt> From<N> for Budget<N> {
    fn from(n: N) -> Self {
        Budget::Finite(n)
    }
}

impl<N: Display> Display for Budget<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(n) => Display::fmt(n, f),
            Budget::Infinite => f.write_str("inf"),
        }
    }
}

impl<N: Debug> Debug for Budget<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(n) => Debug::fmt(n, f),
            Budget::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type B = Budget<u64>;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(B::Finite(3) + B::Infinite, B::Infinite);
        assert_eq!(B::Infinite + B::Finite(3), B::Infinite);
        assert_eq!(B::Finite(3) + B::Finite(4), B::Finite(7));
    }

    #[test]
    fn infinity_is_greatest() {
        assert!(B::Finite(u64::MAX) < B::Infinite);
        assert_eq!(B::Finite(5).min(B::Infinite), B::Finite(5));
        assert_eq!(B::Finite(5).max(B::Infinite), B::Infinite);
        assert!(B::Finite(2) < B::Finite(3));
    }

    #[test]
    fn subtraction_stays_natural() {
        assert_eq!(B::Finite(5).checked_sub(2), Some(B::Finite(3)));
        assert_eq!(B::Finite(1).checked_sub(2), None);
        assert_eq!(B::Infinite.checked_sub(7), Some(B::Infinite));
    }

    #[test]
    #[should_panic(expected = "budget overflow")]
    fn finite_overflow_panics() {
        let _ = Budget::<u8>::Finite(200) + Budget::Finite(100);
    }

    #[test]
    fn displays_infinity_as_inf() {
        assert_eq!(B::Infinite.to_string(), "inf");
        assert_eq!(B::Finite(12).to_string(), "12");
    }
}
