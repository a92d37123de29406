//! Eventual periodicity of thresholds: `T_v(B + u_x) = T_v(B) + u_y` for
//! all `B ≥ B_start`.
//!
//! On a DAG the period of a vertex follows from its successors. Past some
//! budget only the successors of least ratio decide the cheapest move and
//! only those of greatest ratio decide the costliest one; both groups climb
//! with the lcm of their periods. If the cheap side climbs by `(u_x, u_y)`
//! and the costly side by `(w_x, w_y)`, the vertex climbs by
//! `(u_x (w_x + w_y), w_y (u_x + u_y))`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::budget::{to_int, BudgetInt};
use crate::error::{Error, Result};
use crate::game::{max_paths, topological_order, Game, VertexId};
use crate::iteration::ThresholdTable;
use crate::ratio::{ExtRatio, RatioMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PeriodSpec<N> {
    pub start: N,
    /// `u_x ≥ 1`.
    pub period: N,
    pub rise: N,
}

/// Climbing behaviour of one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Climb<N> {
    Periodic(PeriodSpec<N>),
    /// The threshold is infinite at every budget.
    Unbounded,
}

/// Period of a vertex whose cheap side climbs by `u` and costly side by `w`.
pub fn compose_period<N: BudgetInt>(u: (N, N), w: (N, N)) -> Result<(N, N)> {
    if u.0.is_zero() || w.0.is_zero() {
        return Err(Error::InvalidArgument("periods must be positive".into()));
    }
    let overflow = || Error::Overflow(format!("composing {u:?} with {w:?}"));
    let x =
        w.0.checked_add(&w.1)
            .and_then(|s| u.0.checked_mul(&s))
            .ok_or_else(overflow)?;
    let y =
        u.0.checked_add(&u.1)
            .and_then(|s| w.1.checked_mul(&s))
            .ok_or_else(overflow)?;
    Ok((x, y))
}

struct BigClimb {
    start: BigInt,
    period: BigInt,
    rise: BigInt,
}

type Q = Ratio<BigInt>;

fn ceil(q: &Q) -> BigInt {
    q.ceil().to_integer()
}

/// Merges a group of equal-ratio successors: lcm of periods, rise `lcm · t`,
/// latest start.
fn merge(group: &[&BigClimb], t: &Q) -> BigClimb {
    let period = group.iter().fold(BigInt::one(), |l, c| l.lcm(&c.period));
    let rise = (Q::from_integer(period.clone()) * t).to_integer();
    let start = group
        .iter()
        .map(|c| c.start.clone())
        .max()
        .unwrap_or_default();
    BigClimb {
        start,
        period,
        rise,
    }
}

/// Predicted climbing behaviour of every vertex of a DAG.
///
/// Vertices listed in `child_specs` take the given behaviour instead of a
/// prediction; this lets known periods, such as those of race roots, replace
/// the much longer composed ones. Starts are conservative: each is a budget
/// from which the relation is guaranteed, not the first budget where it holds.
pub fn predict_period_dag<N: BudgetInt>(
    g: &Game,
    ratios: &RatioMap<BigInt>,
    child_specs: &HashMap<VertexId, Climb<N>>,
) -> Result<Vec<Climb<N>>> {
    let paths = max_paths(g)?;
    let mut climbs: Vec<Option<BigClimb>> = (0..g.vertex_count()).map(|_| None).collect();
    climbs[g.target().index()] = Some(BigClimb {
        start: BigInt::zero(),
        period: BigInt::one(),
        rise: BigInt::zero(),
    });
    for v in topological_order(g)? {
        if let Some(given) = child_specs.get(&v) {
            climbs[v.index()] = match given {
                Climb::Unbounded => None,
                Climb::Periodic(p) => {
                    let big = |n: N| BigInt::from(n.to_u128().expect("budget fits u128"));
                    if p.period.is_zero() {
                        return Err(Error::InvalidArgument("periods must be positive".into()));
                    }
                    Some(BigClimb {
                        start: big(p.start),
                        period: big(p.period),
                        rise: big(p.rise),
                    })
                }
            };
        } else if !g.is_leaf(v) {
            climbs[v.index()] = predict_vertex(g, ratios, &paths, &climbs, v);
        }
    }
    climbs
        .into_iter()
        .map(|c| match c {
            None => Ok(Climb::Unbounded),
            Some(c) => Ok(Climb::Periodic(PeriodSpec {
                start: narrow(&c.start)?,
                period: narrow(&c.period)?,
                rise: narrow(&c.rise)?,
            })),
        })
        .collect()
}

fn narrow<N: BudgetInt>(x: &BigInt) -> Result<N> {
    x.to_u128()
        .and_then(N::from)
        .ok_or_else(|| Error::Overflow(x.to_string()))
}

fn predict_vertex(
    g: &Game,
    ratios: &RatioMap<BigInt>,
    paths: &[usize],
    climbs: &[Option<BigClimb>],
    v: VertexId,
) -> Option<BigClimb> {
    let ExtRatio::Finite(t_v) = ratios.get(v) else {
        return None;
    };
    let n_v = BigInt::from(paths[v.index()]);
    if t_v.is_zero() {
        return Some(BigClimb {
            start: BigInt::zero(),
            period: BigInt::one(),
            rise: BigInt::zero(),
        });
    }
    let succ = g.successors(v);
    let ratio = |u: &VertexId| ratios.get(*u);
    let low = succ.iter().map(ratio).min()?.finite()?.clone();
    let high = succ.iter().map(ratio).max()?.clone();
    let n = |u: &VertexId| Q::from_integer(BigInt::from(paths[u.index()]));

    // The cheapest successor is in the least-ratio group once every other
    // successor's lower pipe bound clears the group's upper bound.
    let cheap_group: Vec<_> = succ
        .iter()
        .filter(|u| ratio(u).finite() == Some(&low))
        .collect();
    let cheap = merge(
        &cheap_group
            .iter()
            .map(|u| climbs[u.index()].as_ref().unwrap())
            .collect::<Vec<_>>(),
        &low,
    );
    let overtaken = succ
        .iter()
        .filter_map(|u| ratio(u).finite().filter(|&t| *t != low).map(|t| (u, t)))
        .map(|(u, t)| ceil(&(t * n(u) / (t - &low))))
        .max()
        .unwrap_or_default();
    let cheap_start = cheap.start.clone().max(overtaken);

    let ExtRatio::Finite(high) = high else {
        // The sink is a successor, so every winning bid is the whole budget.
        return Some(BigClimb {
            start: cheap_start,
            period: cheap.period.clone(),
            rise: &cheap.period + &cheap.rise,
        });
    };
    let costly_group: Vec<_> = succ
        .iter()
        .filter(|u| ratio(u).finite() == Some(&high))
        .collect();
    let costly = merge(
        &costly_group
            .iter()
            .map(|u| climbs[u.index()].as_ref().unwrap())
            .collect::<Vec<_>>(),
        &high,
    );
    let widest = costly_group.iter().map(|u| n(u)).max().unwrap();
    let overtaking = succ
        .iter()
        .filter_map(|u| ratio(u).finite().filter(|&t| *t != high))
        .map(|t| ceil(&(&high * &widest / (&high - t))))
        .max()
        .unwrap_or_default();
    let costly_start = costly.start.clone().max(overtaking);

    // Past this budget the residue Player 2 can force lies where the costly
    // side already climbs.
    let reach = Q::from_integer(n_v) + (&high * Q::from_integer(costly_start) + Q::one()) / t_v;
    let start = cheap_start.max(ceil(&reach));
    let period = &cheap.period * (&costly.period + &costly.rise);
    let rise = &costly.rise * (&cheap.period + &cheap.rise);
    Some(BigClimb {
        start,
        period,
        rise,
    })
}

/// Smallest period `u_x` for which `T(B + u_x) - T(B)` is constant from
/// some `B_start` to the end of the table, with at least `min_periods` full
/// periods between `B_start` and `B_max`. Returns the earliest such start.
pub fn detect_period<N: BudgetInt>(
    table: &ThresholdTable<N>,
    v: VertexId,
    min_periods: usize,
) -> Option<PeriodSpec<N>> {
    let row = table.row(v);
    let values: Vec<u128> = row.iter().map(|b| b.to_u128()).collect::<Option<_>>()?;
    let b_max = table.b_max();
    let min_periods = min_periods.max(1);
    for p in 1..=b_max / min_periods {
        let rise = values[b_max] as i128 - values[b_max - p] as i128;
        let mut start = b_max - p;
        while start > 0 && values[start - 1 + p] as i128 - values[start - 1] as i128 == rise {
            start -= 1;
        }
        if rise >= 0 && b_max - start >= min_periods * p {
            return Some(PeriodSpec {
                start: to_int(start),
                period: to_int(p),
                rise: N::from(rise).expect("rise fits the budget type"),
            });
        }
    }
    None
}
