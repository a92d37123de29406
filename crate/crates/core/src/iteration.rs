//! The step operator and value iteration.
//!
//! `f(v, B)` is the least budget with which Player 1 wins from `v` against
//! `B`. One step lets Player 1 try every bid `b ≤ B`:
//!
//! * `b = B` always wins the bidding, costing `B + min_u f(u, B)`;
//! * `b < B` costs `max(b + min_u f(u, B), max_u f(u, B - b - 1))`, since
//!   Player 2 either lets `b` win or overbids with `b + 1`.
//!
//! Iterating from `f = ∞` on interior vertices decreases monotonically to the
//! thresholds.

use rayon::prelude::*;

use crate::budget::{Budget, BudgetInt};
use crate::error::{Error, Result};
use crate::game::{Game, VertexId};

/// Thresholds for every vertex and every opponent budget `0..=b_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdTable<N> {
    vertices: usize,
    b_max: usize,
    values: Vec<Budget<N>>,
}

impl<N: BudgetInt> ThresholdTable<N> {
    /// The seed table: `0` at the target, `∞` everywhere else.
    pub fn seed(g: &Game, b_max: usize) -> Self {
        let width = b_max + 1;
        let mut values = vec![Budget::Infinite; g.vertex_count() * width];
        let t = g.target().index();
        values[t * width..(t + 1) * width].fill(Budget::zero());
        ThresholdTable {
            vertices: g.vertex_count(),
            b_max,
            values,
        }
    }

    /// Builds a table from one row per vertex; rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Budget<N>>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidArgument(
                "rows must be non-empty and equal".into(),
            ));
        }
        Ok(ThresholdTable {
            vertices: rows.len(),
            b_max: width - 1,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn b_max(&self) -> usize {
        self.b_max
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn get(&self, v: VertexId, b: usize) -> Budget<N> {
        self.row(v)[b]
    }

    pub fn row(&self, v: VertexId) -> &[Budget<N>] {
        let w = self.b_max + 1;
        &self.values[v.index() * w..(v.index() + 1) * w]
    }

    fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, Budget<N>> {
        self.values.chunks_mut(self.b_max + 1)
    }
}

/// Anything that assigns a budget to `(vertex, opponent budget)`.
pub trait Thresholds<N> {
    fn threshold(&self, v: VertexId, b: usize) -> Budget<N>;
}

impl<N: BudgetInt> Thresholds<N> for ThresholdTable<N> {
    fn threshold(&self, v: VertexId, b: usize) -> Budget<N> {
        self.get(v, b)
    }
}

impl<N, F: Fn(VertexId, usize) -> Budget<N>> Thresholds<N> for F {
    fn threshold(&self, v: VertexId, b: usize) -> Budget<N> {
        self(v, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Try every bid.
    Scan,
    /// Locate where the two branches of the bid cost cross.
    #[default]
    BinarySearch,
}

/// Inclusive range of winning bids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BidInterval {
    pub low: usize,
    pub high: usize,
}

#[derive(Clone, Debug)]
pub struct Solution<N> {
    pub table: ThresholdTable<N>,
    /// Step applications performed, including the last one that changed nothing.
    pub iterations: usize,
}

fn min_succ<N: BudgetInt>(g: &Game, f: &impl Thresholds<N>, v: VertexId, b: usize) -> Budget<N> {
    g.successors(v)
        .iter()
        .map(|&u| f.threshold(u, b))
        .min()
        .unwrap_or(Budget::Infinite)
}

fn max_succ<N: BudgetInt>(g: &Game, f: &impl Thresholds<N>, v: VertexId, b: usize) -> Budget<N> {
    g.successors(v)
        .iter()
        .map(|&u| f.threshold(u, b))
        .max()
        .unwrap_or(Budget::Infinite)
}

/// Cost of winning from `v` against `budget` when Player 1 bids `bid`.
pub fn step_bid<N: BudgetInt>(
    g: &Game,
    f: &impl Thresholds<N>,
    v: VertexId,
    bid: usize,
    budget: usize,
) -> Result<Budget<N>> {
    if bid > budget {
        return Err(Error::BidTooLarge { bid, budget });
    }
    let cheapest = min_succ(g, f, v, budget);
    Ok(bid_cost(bid, budget, cheapest, &|r| max_succ(g, f, v, r)))
}

fn bid_cost<N: BudgetInt>(
    bid: usize,
    budget: usize,
    cheapest: Budget<N>,
    costliest: &impl Fn(usize) -> Budget<N>,
) -> Budget<N> {
    let won = cheapest.plus(bid);
    if bid == budget {
        won
    } else {
        won.max(costliest(budget - bid - 1))
    }
}

/// Minimum bid cost over bids in `lo..=hi`, or `None` if the range is empty.
///
/// `cheapest` is the minimum successor threshold at `budget` and
/// `costliest(r)` the maximum successor threshold at `r`. For `b < budget`,
/// `b + cheapest` is increasing and `costliest(budget - b - 1)` nonincreasing
/// in `b`, so the cost is minimized next to their crossing point.
pub(crate) fn best_bid<N: BudgetInt>(
    budget: usize,
    lo: usize,
    hi: usize,
    cheapest: Budget<N>,
    costliest: impl Fn(usize) -> Budget<N>,
    mode: SearchMode,
) -> Option<Budget<N>> {
    best_bid_near(budget, lo, hi, cheapest, costliest, mode, lo).map(|(c, _)| c)
}

/// [`best_bid`], also returning the crossing point; the binary search starts
/// galloping from `hint`.
fn best_bid_near<N: BudgetInt>(
    budget: usize,
    lo: usize,
    hi: usize,
    cheapest: Budget<N>,
    costliest: impl Fn(usize) -> Budget<N>,
    mode: SearchMode,
    hint: usize,
) -> Option<(Budget<N>, usize)> {
    let hi = hi.min(budget);
    if lo > hi {
        return None;
    }
    let cost = |b| bid_cost(b, budget, cheapest, &costliest);
    match mode {
        SearchMode::Scan => (lo..=hi).map(cost).min().map(|c| (c, lo)),
        SearchMode::BinarySearch => {
            let mut best = if hi == budget {
                Some(cost(budget))
            } else {
                None
            };
            let top = if hi == budget {
                budget.checked_sub(1)
            } else {
                Some(hi)
            };
            let mut cross = lo;
            if let Some(top) = top.filter(|&t| t >= lo) {
                let crossed = |b: usize| cheapest.plus(b) >= costliest(budget - b - 1);
                cross = first_true(lo, top + 1, hint.clamp(lo, top), crossed);
                let mut consider = |b: usize| {
                    let c = cost(b);
                    best = Some(best.map_or(c, |x: Budget<N>| x.min(c)));
                };
                if cross <= top {
                    consider(cross);
                }
                if cross > lo {
                    consider(cross - 1);
                }
            }
            best.map(|c| (c, cross))
        }
    }
}

/// Smallest `b` in `lo..end` with `pred(b)`, or `end` if none, for a
/// predicate that is false then true. Gallops outward from `hint`.
fn first_true(lo: usize, end: usize, hint: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut a, mut z);
    if pred(hint) {
        // Answer in lo..=hint.
        z = hint;
        let mut step = 1;
        loop {
            if z - lo <= step {
                a = lo;
                break;
            }
            let probe = z - step;
            if pred(probe) {
                z = probe;
                step *= 2;
            } else {
                a = probe + 1;
                break;
            }
        }
    } else {
        // Answer in hint+1..=end.
        a = hint + 1;
        let mut step = 1;
        loop {
            let probe = a + step - 1;
            if probe >= end {
                z = end;
                break;
            }
            if pred(probe) {
                z = probe;
                break;
            }
            a = probe + 1;
            step *= 2;
        }
    }
    while a < z {
        let mid = a + (z - a) / 2;
        if pred(mid) {
            z = mid;
        } else {
            a = mid + 1;
        }
    }
    a
}

/// Least cost over all bids: one application of the step operator at `v`.
pub fn step<N: BudgetInt>(
    g: &Game,
    f: &impl Thresholds<N>,
    v: VertexId,
    budget: usize,
    mode: SearchMode,
) -> Budget<N> {
    let cheapest = min_succ(g, f, v, budget);
    best_bid(budget, 0, budget, cheapest, |r| max_succ(g, f, v, r), mode)
        .expect("bid range 0..=budget is non-empty")
}

/// Crude bound on the iterations needed to reach the fixed point.
pub fn step_bound(g: &Game, b2: usize) -> usize {
    g.vertex_count() * (b2 + 1)
}

/// Gauss–Jacobi value iteration, one step at a time.
///
/// A vertex's entries at budgets below the first budget where any successor
/// changed in the previous step are copied rather than recomputed; the step
/// at budget `B` reads successors only at budgets `≤ B`, so the copies are
/// exactly what a full step would produce.
pub struct ValueIteration<'g, N> {
    game: &'g Game,
    mode: SearchMode,
    table: ThresholdTable<N>,
    changed_from: Vec<usize>,
    iterations: usize,
}

impl<'g, N: BudgetInt> ValueIteration<'g, N> {
    pub fn new(game: &'g Game, b_max: usize, mode: SearchMode) -> Self {
        ValueIteration {
            game,
            mode,
            table: ThresholdTable::seed(game, b_max),
            changed_from: vec![0; game.vertex_count()],
            iterations: 0,
        }
    }

    pub fn table(&self) -> &ThresholdTable<N> {
        &self.table
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Applies the step operator to every interior vertex; returns whether
    /// anything changed.
    pub fn advance(&mut self) -> bool {
        let g = self.game;
        let mode = self.mode;
        let width = self.table.b_max + 1;
        let prev = self.table.clone();
        let changed_from = &self.changed_from;
        let next_changed: Vec<usize> = self
            .table
            .rows_mut()
            .enumerate()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(i, row)| {
                let v = VertexId(i);
                if g.is_leaf(v) {
                    return width;
                }
                let succ = g.successors(v);
                let start = succ
                    .iter()
                    .map(|u| changed_from[u.index()])
                    .min()
                    .unwrap_or(width);
                if start >= width {
                    return width;
                }
                let (mins, maxs) = envelope(&prev, succ);
                let mut first = width;
                let mut hint = 0;
                for b in start..width {
                    let (value, cross) =
                        best_bid_near(b, 0, b, mins[b], |r| maxs[r], mode, hint).unwrap();
                    hint = cross;
                    if value != row[b] {
                        row[b] = value;
                        first = first.min(b);
                    }
                }
                first
            })
            .collect();
        self.changed_from = next_changed;
        self.iterations += 1;
        self.changed_from.iter().any(|&c| c < width)
    }

    pub fn into_solution(self) -> Solution<N> {
        Solution {
            table: self.table,
            iterations: self.iterations,
        }
    }
}

/// Pointwise minimum and maximum of the successor rows.
fn envelope<N: BudgetInt>(
    table: &ThresholdTable<N>,
    succ: &[VertexId],
) -> (Vec<Budget<N>>, Vec<Budget<N>>) {
    let mut mins = table.row(succ[0]).to_vec();
    let mut maxs = mins.clone();
    for &u in &succ[1..] {
        for (b, &x) in table.row(u).iter().enumerate() {
            mins[b] = mins[b].min(x);
            maxs[b] = maxs[b].max(x);
        }
    }
    (mins, maxs)
}

/// Thresholds of every vertex for opponent budgets `0..=b2`.
pub fn solve<N: BudgetInt>(g: &Game, b2: usize, mode: SearchMode) -> Solution<N> {
    let mut it = ValueIteration::new(g, b2, mode);
    while it.advance() {}
    log::debug!("value iteration converged after {} steps", it.iterations());
    it.into_solution()
}

fn checked_threshold<N: BudgetInt>(
    table: &ThresholdTable<N>,
    g: &Game,
    v: VertexId,
    budget: usize,
) -> Result<usize> {
    if budget > table.b_max() {
        return Err(Error::OutOfRange {
            budget,
            b_max: table.b_max(),
        });
    }
    if g.is_leaf(v) {
        return Err(Error::InvalidArgument(format!(
            "{} is not an interior vertex",
            g.name(v)
        )));
    }
    let t = table
        .get(v, budget)
        .to_u128()
        .ok_or(Error::NoWinningBudget)?;
    usize::try_from(t).map_err(|_| Error::Overflow(t.to_string()))
}

/// Bids that win from `v` with exactly the threshold budget against `budget`.
pub fn winning_bids<N: BudgetInt>(
    g: &Game,
    table: &ThresholdTable<N>,
    v: VertexId,
    budget: usize,
) -> Result<BidInterval> {
    let threshold = checked_threshold(table, g, v, budget)?;
    let t = Budget::<N>::from_count(threshold);
    let cheapest = min_succ(g, table, v, budget);
    let fits = |b: usize| {
        cheapest.plus(b) <= t && (b == budget || max_succ(g, table, v, budget - b - 1) <= t)
    };
    // The first condition holds on a prefix of bids, the second on a suffix.
    let high = cheapest
        .to_u128()
        .and_then(|c| (threshold as u128).checked_sub(c))
        .map(|slack| slack.min(budget as u128) as usize);
    let Some(high) = high.filter(|&h| fits(h)) else {
        return Err(Error::NoWinningBudget);
    };
    let (mut a, mut z) = (0, high);
    while a < z {
        let mid = a + (z - a) / 2;
        if fits(mid) {
            z = mid;
        } else {
            a = mid + 1;
        }
    }
    Ok(BidInterval { low: a, high })
}

/// Successors Player 1 may move to after winning the bidding with some
/// winning bid: those whose threshold fits in what is left after the
/// cheapest winning bid.
pub fn winning_moves<N: BudgetInt>(
    g: &Game,
    table: &ThresholdTable<N>,
    v: VertexId,
    budget: usize,
) -> Result<Vec<VertexId>> {
    let bids = winning_bids(g, table, v, budget)?;
    let left = checked_threshold(table, g, v, budget)? - bids.low;
    let left = Budget::<N>::from_count(left);
    Ok(g.successors(v)
        .iter()
        .copied()
        .filter(|&u| table.get(u, budget) <= left)
        .collect())
}
