//! Single-pass solver for acyclic games.
//!
//! Vertices are solved once each, leaves first. At budget `B` some optimal
//! bid leaves Player 1 exactly a pipe-sized budget after paying for the
//! cheapest successor, so the bid search is confined to
//! `[ceil(t_v (B - maxpath)) - T', floor(t_v B) - T']` where `T'` is the
//! cheapest successor threshold.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::budget::{Budget, BudgetInt};
use crate::error::Result;
use crate::game::{max_paths, topological_order, Game};
use crate::iteration::{best_bid, SearchMode, ThresholdTable};
use crate::ratio::{ratios_dag, ExtRatio};

#[derive(Clone, Debug)]
pub struct DagSolution<N> {
    pub table: ThresholdTable<N>,
    /// Entries where the pipe interval was empty and every bid was tried.
    pub fallbacks: usize,
}

pub fn solve_dag<N: BudgetInt>(g: &Game, b2: usize) -> Result<DagSolution<N>> {
    let order = topological_order(g)?;
    let ratios = ratios_dag::<BigInt>(g)?;
    let paths = max_paths(g)?;
    let mut rows: Vec<Vec<Budget<N>>> = g
        .vertices()
        .map(|v| {
            let fill = if v == g.target() {
                Budget::zero()
            } else {
                Budget::Infinite
            };
            vec![fill; b2 + 1]
        })
        .collect();
    let mut fallbacks = 0;
    for v in order {
        if g.is_leaf(v) {
            continue;
        }
        let succ = g.successors(v);
        let mut row = Vec::with_capacity(b2 + 1);
        for b in 0..=b2 {
            let cheapest = succ.iter().map(|u| rows[u.index()][b]).min().unwrap();
            let costliest = |r: usize| succ.iter().map(|u| rows[u.index()][r]).max().unwrap();
            let range = match ratios.get(v) {
                ExtRatio::Finite(t) => {
                    bid_range(t.numer(), t.denom(), paths[v.index()], b, cheapest)
                }
                ExtRatio::Infinite => Some((0, b)),
            };
            let best = range.and_then(|(lo, hi)| {
                best_bid(b, lo, hi, cheapest, costliest, SearchMode::BinarySearch)
            });
            let value = best.unwrap_or_else(|| {
                fallbacks += 1;
                log::debug!(
                    "{}: empty pipe interval at B={b}, scanning all bids",
                    g.name(v)
                );
                best_bid(b, 0, b, cheapest, costliest, SearchMode::BinarySearch).unwrap()
            });
            row.push(value);
        }
        rows[v.index()] = row;
    }
    Ok(DagSolution {
        table: ThresholdTable::from_rows(rows)?,
        fallbacks,
    })
}

/// Bids `[lo, hi]` allowed by the pipe of ratio `p/q`, or `None` when empty.
fn bid_range<N: BudgetInt>(
    p: &BigInt,
    q: &BigInt,
    maxpath: usize,
    b: usize,
    cheapest: Budget<N>,
) -> Option<(usize, usize)> {
    let cheapest = BigInt::from(cheapest.to_u128()?);
    let rest = BigInt::from(b.saturating_sub(maxpath));
    let lower = (p * rest).div_ceil(q);
    let upper = (p * BigInt::from(b)).div_floor(q);
    let lo = (lower - &cheapest).max(BigInt::from(0));
    let hi = upper - cheapest;
    if hi.is_negative() || lo > hi {
        return None;
    }
    Some((lo.to_usize()?, hi.to_usize().unwrap_or(usize::MAX).min(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{gen_choice, gen_race};
    use crate::iteration::solve;

    #[test]
    fn race_matches_value_iteration() {
        let g = gen_race(4, 5).unwrap();
        let dag = solve_dag::<u64>(&g, 144).unwrap();
        assert_eq!(dag.table, solve::<u64>(&g, 144, SearchMode::Scan).table);
    }

    #[test]
    fn fig2_points() {
        let g = gen_choice(&[gen_race(4, 5).unwrap(), gen_race(3, 5).unwrap()]).unwrap();
        let table = solve_dag::<u64>(&g, 144).unwrap().table;
        let root = g.vertex("root").unwrap();
        for (b, t) in [(44, 28), (89, 60), (134, 92)] {
            assert_eq!(table.get(root, b), Budget::Finite(t));
        }
    }

    #[test]
    fn single_race_costs_budget() {
        let g = gen_race(1, 1).unwrap();
        let table = solve_dag::<u32>(&g, 50).unwrap().table;
        let v = g.vertex("v_{1,1}").unwrap();
        for b in 0..=50 {
            assert_eq!(table.get(v, b), Budget::Finite(b as u32));
        }
    }

    #[test]
    fn cyclic_game_rejected() {
        assert!(solve_dag::<u64>(&crate::game::gen_tow(2).unwrap(), 3).is_err());
    }
}
