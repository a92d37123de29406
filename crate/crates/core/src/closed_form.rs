//! Closed-form thresholds for races and short tugs of war.
//!
//! Golden-ratio floors are exact: `floor(b √5) = isqrt(5b²)` because `5b²`
//! is not a square for `b > 0`, and `b/φ = (b√5 - b)/2`, `bφ = (b√5 + b)/2`
//! where `b√5 ± b` has an irrational part, so halving the integer floor
//! keeps the floor.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::budget::{to_int, Budget, BudgetInt};
use crate::error::{Error, Result};

/// `floor(b/φ)` and `floor(bφ)`; they differ by exactly `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoldenFloorPair<N> {
    pub b: N,
    pub floor_div_phi: N,
    pub floor_mul_phi: N,
}

fn fits<N: BudgetInt>(x: &BigUint) -> Result<N> {
    x.to_u128()
        .and_then(N::from)
        .ok_or_else(|| Error::Overflow(x.to_string()))
}

/// Exact golden floors of an arbitrarily large `b`.
pub fn golden_floors_big(b: &BigUint) -> (BigUint, BigUint) {
    let root = (b * b * 5u32).sqrt();
    ((&root - b) / 2u32, (root + b) / 2u32)
}

pub fn golden_floors<N: BudgetInt>(b: N) -> Result<GoldenFloorPair<N>> {
    let big = BigUint::from(b.to_u128().expect("budget fits u128"));
    let (div, mul) = golden_floors_big(&big);
    Ok(GoldenFloorPair {
        b,
        floor_div_phi: fits(&div)?,
        floor_mul_phi: fits(&mul)?,
    })
}

/// Threshold at `v_{x,y}` of a race: `x · floor(B / y)`.
pub fn race_threshold<N: BudgetInt>(x: N, y: N, b: N) -> Result<Budget<N>> {
    if y.is_zero() {
        return Err(Error::InvalidArgument("race needs y ≥ 1".into()));
    }
    x.checked_mul(&(b / y))
        .map(Budget::Finite)
        .ok_or_else(|| Error::Overflow(format!("{x} * ({b} / {y})")))
}

/// Tug of war on two vertices; `k` counts steps to the target.
pub fn tow2_threshold<N: BudgetInt>(k: usize, b: N) -> Result<Budget<N>> {
    let pair = golden_floors(b)?;
    match k {
        1 => Ok(Budget::Finite(pair.floor_div_phi)),
        2 => Ok(Budget::Finite(pair.floor_mul_phi)),
        _ => Err(Error::InvalidArgument(format!("k = {k} outside 1..=2"))),
    }
}

/// Tug of war on three vertices, for `b ≥ 1`; `k` counts steps to the target.
pub fn tow3_threshold<N: BudgetInt>(k: usize, b: N) -> Result<Budget<N>> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("closed form holds for b ≥ 1".into()));
    }
    let one = N::one();
    let two: N = to_int(2);
    let value = match k {
        1 => (b - one) / two,
        2 => b - one,
        3 => {
            b.checked_mul(&two)
                .ok_or_else(|| Error::Overflow(format!("2 * {b}")))?
                - one
        }
        _ => return Err(Error::InvalidArgument(format!("k = {k} outside 1..=3"))),
    };
    Ok(Budget::Finite(value))
}
