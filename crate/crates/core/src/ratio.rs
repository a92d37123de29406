//! Continuous threshold ratios and the pipe around `t_v · B`.
//!
//! On a DAG each vertex has a ratio `t_v` with
//! `t_v (B - maxpath(v)) ≤ T_v(B) ≤ t_v B`. The ratio of an interior vertex
//! depends only on the largest and smallest successor ratios.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Zero};

use crate::budget::BudgetInt;
use crate::error::{Error, Result};
use crate::game::{max_paths, topological_order, Game, VertexId};
use crate::iteration::ThresholdTable;

/// A nonnegative rational or infinity; infinity is greatest.
#[derive(Clone, Debug)]
pub enum ExtRatio<T> {
    Finite(Ratio<T>),
    Infinite,
}

impl<T: Clone + Integer> ExtRatio<T> {
    pub fn zero() -> Self {
        ExtRatio::Finite(Ratio::zero())
    }

    pub fn finite(&self) -> Option<&Ratio<T>> {
        match self {
            ExtRatio::Finite(r) => Some(r),
            ExtRatio::Infinite => None,
        }
    }

    /// Pipe bounds on `T_v(b2)` for a vertex with this ratio.
    pub fn pipe_bounds(&self, maxpath: usize, b2: usize) -> Result<PipeBounds<Ratio<T>>>
    where
        T: FromPrimitive + Debug,
    {
        match self {
            ExtRatio::Finite(t) => Ok(pipe_bounds(t, maxpath, b2)),
            ExtRatio::Infinite => Err(Error::InvalidArgument(
                "pipe bounds need a finite ratio".into(),
            )),
        }
    }
}

impl<T: Clone + Integer> PartialEq for ExtRatio<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Clone + Integer> Eq for ExtRatio<T> {}

impl<T: Clone + Integer> PartialOrd for ExtRatio<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Clone + Integer> Ord for ExtRatio<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRatio::Finite(a), ExtRatio::Finite(b)) => a.cmp(b),
            (ExtRatio::Finite(_), ExtRatio::Infinite) => Ordering::Less,
            (ExtRatio::Infinite, ExtRatio::Finite(_)) => Ordering::Greater,
            (ExtRatio::Infinite, ExtRatio::Infinite) => Ordering::Equal,
        }
    }
}

impl<T: Display + Clone + Integer> Display for ExtRatio<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRatio::Finite(r) => Display::fmt(r, f),
            ExtRatio::Infinite => f.write_str("inf"),
        }
    }
}

/// One ratio per vertex: `0` at the target, infinity at the sink.
#[derive(Clone, Debug)]
pub struct RatioMap<T> {
    ratios: Vec<ExtRatio<T>>,
}

impl<T> RatioMap<T> {
    pub fn get(&self, v: VertexId) -> &ExtRatio<T> {
        &self.ratios[v.index()]
    }

    pub fn as_slice(&self) -> &[ExtRatio<T>] {
        &self.ratios
    }
}

/// Ratios of every vertex of a DAG, evaluated exactly from the leaves up.
pub fn ratios_dag<T: Clone + Integer>(g: &Game) -> Result<RatioMap<T>> {
    let mut ratios = vec![ExtRatio::Infinite; g.vertex_count()];
    ratios[g.target().index()] = ExtRatio::zero();
    for v in topological_order(g)? {
        if g.is_leaf(v) {
            continue;
        }
        let succ = g.successors(v).iter().map(|u| &ratios[u.index()]);
        let hi = succ
            .clone()
            .max()
            .expect("interior vertex has successors")
            .clone();
        let lo = succ.min().expect("interior vertex has successors").clone();
        ratios[v.index()] = match (hi, lo) {
            (_, ExtRatio::Infinite) => ExtRatio::Infinite,
            (ExtRatio::Infinite, ExtRatio::Finite(lo)) => ExtRatio::Finite(Ratio::one() + lo),
            (ExtRatio::Finite(hi), ExtRatio::Finite(lo)) => {
                let one = Ratio::<T>::one();
                ExtRatio::Finite(hi.clone() / (one.clone() + hi) * (one + lo))
            }
        };
    }
    Ok(RatioMap { ratios })
}

/// Scalars the pipe can be evaluated in: exact rationals or floats.
pub trait PipeScalar: Clone + PartialOrd + Num + Debug {
    fn from_u128(n: u128) -> Self;
}

impl PipeScalar for f64 {
    fn from_u128(n: u128) -> Self {
        n as f64
    }
}

impl<T: Clone + Integer + FromPrimitive + Debug> PipeScalar for Ratio<T> {
    fn from_u128(n: u128) -> Self {
        Ratio::from_integer(T::from_u128(n).expect("integer fits the ratio type"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipeBounds<S> {
    pub lower: S,
    pub upper: S,
}

/// `t_v (b2 - maxpath)`, clamped at zero, and `t_v b2`.
pub fn pipe_bounds<S: PipeScalar>(t_v: &S, maxpath: usize, b2: usize) -> PipeBounds<S> {
    let lower = if b2 > maxpath {
        t_v.clone() * S::from_u128((b2 - maxpath) as u128)
    } else {
        S::zero()
    };
    PipeBounds {
        lower,
        upper: t_v.clone() * S::from_u128(b2 as u128),
    }
}

/// An interval known to contain a vertex's ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioBracket<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Clone> RatioBracket<S> {
    pub fn exact(t: S) -> Self {
        RatioBracket {
            lo: t.clone(),
            hi: t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// A threshold outside the pipe. `bound` is the bound it crosses.
#[derive(Clone, Debug, PartialEq)]
pub struct PipeViolation<S> {
    pub vertex: VertexId,
    pub budget: usize,
    pub value: u128,
    pub bound: S,
    pub side: Side,
}

/// Checks every finite entry against the pipe built from `brackets`.
///
/// The upper bound uses `hi · B`. The lower bound `lo · (B - width)` is
/// checked only when `widths` is given; with a bracket `lo ≤ t ≤ hi` a
/// reported violation holds for the true ratio as well.
pub fn check_pipe_with<S: PipeScalar, N: BudgetInt>(
    table: &ThresholdTable<N>,
    brackets: &[Option<RatioBracket<S>>],
    widths: Option<&[usize]>,
) -> Vec<PipeViolation<S>> {
    let mut out = Vec::new();
    for (i, bracket) in brackets.iter().enumerate() {
        let Some(bracket) = bracket else { continue };
        let v = VertexId(i);
        for b in 0..=table.b_max() {
            let Some(value) = table.get(v, b).to_u128() else {
                continue;
            };
            let t = S::from_u128(value);
            let upper = pipe_bounds(&bracket.hi, 0, b).upper;
            if t > upper {
                out.push(PipeViolation {
                    vertex: v,
                    budget: b,
                    value,
                    bound: upper,
                    side: Side::Upper,
                });
            }
            if let Some(widths) = widths {
                let lower = pipe_bounds(&bracket.lo, widths[i], b).lower;
                if t < lower {
                    out.push(PipeViolation {
                        vertex: v,
                        budget: b,
                        value,
                        bound: lower,
                        side: Side::Lower,
                    });
                }
            }
        }
    }
    out
}

/// Pipe violations of a solved table. On a DAG both bounds are checked with
/// each vertex's longest path; otherwise only the upper bound.
pub fn check_pipe<T, N>(
    g: &Game,
    table: &ThresholdTable<N>,
    ratios: &RatioMap<T>,
) -> Vec<PipeViolation<Ratio<T>>>
where
    T: Clone + Integer + FromPrimitive + Debug,
    N: BudgetInt,
{
    let brackets: Vec<_> = g
        .vertices()
        .map(|v| {
            let r = ratios.get(v).finite().filter(|_| !g.is_leaf(v))?;
            Some(RatioBracket::exact(r.clone()))
        })
        .collect();
    let widths = max_paths(g).ok();
    check_pipe_with(table, &brackets, widths.as_deref())
}
