//! Exhaustive solver used as ground truth for small budgets.
//!
//! The winner of `⟨v, B1, B2⟩` is read off the bidding matrix, whose entry
//! `(b1, b2)` is the winner after both bids are revealed. Player 1 wins iff
//! some row is all 1.
//!
//! Winners are computed per budget pair. A positive winning bid lowers the
//! total budget, so rows `b1 ≥ 1` depend only on pairs computed earlier. The
//! `(0, 0)` entry keeps both budgets, and the winners at a fixed pair are the
//! least set closed under "Player 1 can win here with a positive bid" and
//! "Player 1 survives every positive counter-bid and can step into the set".

use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::game::{Configuration, Game, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::One => "1",
            Player::Two => "2",
        })
    }
}

/// Default bound on `(B1 + 1)(B2 + 1)|V|`.
pub const DEFAULT_LIMIT: u128 = 50_000_000;

/// Winner labels for bids `b1 ∈ 0..=B1` (rows) and `b2 ∈ 0..=B2` (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiddingMatrix {
    cols: usize,
    entries: Vec<Player>,
}

impl BiddingMatrix {
    pub fn from_rows(rows: Vec<Vec<Player>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument(
                "matrix rows must be non-empty and equal".into(),
            ));
        }
        Ok(BiddingMatrix {
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.entries.len() / self.cols
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, b1: usize, b2: usize) -> Player {
        self.entries[b1 * self.cols + b2]
    }

    /// Rows in which every entry is a Player 1 win.
    pub fn one_rows(&self) -> Vec<usize> {
        (0..self.rows())
            .filter(|&r| (0..self.cols).all(|c| self.entry(r, c) == Player::One))
            .collect()
    }

    /// Columns in which every entry is a Player 2 win.
    pub fn two_cols(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|&c| (0..self.rows()).all(|r| self.entry(r, c) == Player::Two))
            .collect()
    }

    /// Whether the entries are constant above the diagonal along columns,
    /// left of the diagonal along rows, and the diagonal repeats its left
    /// neighbour.
    pub fn has_poorman_structure(&self) -> bool {
        let (rows, cols) = (self.rows(), self.cols);
        let above =
            (0..cols).all(|c| (0..rows.min(c)).all(|r| self.entry(r, c) == self.entry(0, c)));
        let left =
            (0..rows).all(|r| (0..cols.min(r)).all(|c| self.entry(r, c) == self.entry(r, 0)));
        let diagonal = (1..rows.min(cols)).all(|b| self.entry(b, b) == self.entry(b, b - 1));
        above && left && diagonal
    }
}

/// Whether the matrix has a row of Player 1 wins or a column of Player 2 wins.
pub fn check_local_determinacy(m: &BiddingMatrix) -> bool {
    !m.one_rows().is_empty() || !m.two_cols().is_empty()
}

/// Memoized exhaustive solver for one game.
pub struct Oracle<'g> {
    game: &'g Game,
    limit: u128,
    // wins[b1][b2][v]: Player 1 wins from ⟨v, b1, b2⟩.
    wins: Vec<Vec<Vec<bool>>>,
    b2_max: usize,
}

impl<'g> Oracle<'g> {
    pub fn new(game: &'g Game) -> Self {
        Oracle::with_limit(game, DEFAULT_LIMIT)
    }

    pub fn with_limit(game: &'g Game, limit: u128) -> Self {
        Oracle {
            game,
            limit,
            wins: Vec::new(),
            b2_max: 0,
        }
    }

    fn guard(&self, b1: usize, b2: usize) -> Result<()> {
        let size = (b1 as u128 + 1) * (b2 as u128 + 1) * self.game.vertex_count() as u128;
        if size > self.limit {
            Err(Error::OracleLimit {
                size,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Grows the memo to cover every pair up to `(b1, b2)`.
    fn ensure(&mut self, b1: usize, b2: usize) -> Result<()> {
        self.guard(b1, b2)?;
        self.b2_max = self.b2_max.max(b2);
        let rows = self.wins.len().max(b1 + 1);
        for x in 0..rows {
            if x == self.wins.len() {
                self.wins.push(Vec::new());
            }
            // Row-major order: every dependency of (x, y) is already present.
            while self.wins[x].len() <= self.b2_max {
                let level = self.level(x, self.wins[x].len());
                self.wins[x].push(level);
            }
        }
        Ok(())
    }

    fn win(&self, v: VertexId, b1: usize, b2: usize) -> bool {
        self.wins[b1][b2][v.index()]
    }

    fn any_succ(&self, v: VertexId, b1: usize, b2: usize) -> bool {
        self.game.successors(v).iter().any(|&u| self.win(u, b1, b2))
    }

    fn all_succ(&self, v: VertexId, b1: usize, b2: usize) -> bool {
        self.game.successors(v).iter().all(|&u| self.win(u, b1, b2))
    }

    /// Winners at budgets `(x, y)`, given every pair with `b1 < x` or
    /// `b1 = x, b2 < y`.
    fn level(&self, x: usize, y: usize) -> Vec<bool> {
        let g = self.game;
        let mut won = vec![false; g.vertex_count()];
        won[g.target().index()] = true;
        // survives[v]: Player 1 still wins after every counter-bid of 1..=y.
        let mut survives = vec![false; g.vertex_count()];
        for v in g.interior() {
            // prefix[k]: every successor wins at (x, k') for all k' < k.
            let mut prefix = Vec::with_capacity(y + 1);
            prefix.push(true);
            for k in 0..y {
                prefix.push(prefix[k] && self.all_succ(v, x, k));
            }
            survives[v.index()] = prefix[y];
            won[v.index()] =
                (1..=x).any(|b| self.any_succ(v, x - b, y) && prefix[y.saturating_sub(b)]);
        }
        loop {
            let mut grew = false;
            for v in g.interior() {
                if !won[v.index()]
                    && survives[v.index()]
                    && g.successors(v).iter().any(|u| won[u.index()])
                {
                    won[v.index()] = true;
                    grew = true;
                }
            }
            if !grew {
                return won;
            }
        }
    }

    pub fn winner(&mut self, c: Configuration) -> Result<Player> {
        self.ensure(c.b1, c.b2)?;
        Ok(if self.win(c.vertex, c.b1, c.b2) {
            Player::One
        } else {
            Player::Two
        })
    }

    /// Largest `B1` the threshold scan tries before answering infinity.
    fn scan_cap(&self, b2: usize) -> usize {
        (self.game.vertex_count() - 1) * (b2 + 1) + 1
    }

    /// Fails fast when a full threshold scan at `b2` could exceed the limit.
    pub fn check_threshold_scan(&self, b2: usize) -> Result<()> {
        self.guard(self.scan_cap(b2), b2)
    }

    /// Least `B1` with which Player 1 wins from `v` against `b2`.
    pub fn threshold(&mut self, v: VertexId, b2: usize) -> Result<Budget<u64>> {
        let g = self.game;
        if v == g.target() {
            return Ok(Budget::zero());
        }
        if v == g.sink() {
            return Ok(Budget::Infinite);
        }
        for b1 in 0..=self.scan_cap(b2) {
            if self.winner(Configuration::new(v, b1, b2))? == Player::One {
                return Ok(Budget::Finite(b1 as u64));
            }
        }
        Ok(Budget::Infinite)
    }

    pub fn bidding_matrix(&mut self, c: Configuration) -> Result<BiddingMatrix> {
        self.ensure(c.b1, c.b2)?;
        let v = c.vertex;
        if self.game.is_leaf(v) {
            let p = if v == self.game.target() {
                Player::One
            } else {
                Player::Two
            };
            return Ok(BiddingMatrix {
                cols: c.b2 + 1,
                entries: vec![p; (c.b1 + 1) * (c.b2 + 1)],
            });
        }
        let mut entries = Vec::with_capacity((c.b1 + 1) * (c.b2 + 1));
        for i in 0..=c.b1 {
            for j in 0..=c.b2 {
                let one = if i >= j {
                    self.any_succ(v, c.b1 - i, c.b2)
                } else {
                    self.all_succ(v, c.b1, c.b2 - j)
                };
                entries.push(if one { Player::One } else { Player::Two });
            }
        }
        Ok(BiddingMatrix {
            cols: c.b2 + 1,
            entries,
        })
    }

    /// Successors from which Player 1 wins with budgets `(b1, b2)`.
    pub fn winning_successors(
        &mut self,
        v: VertexId,
        b1: usize,
        b2: usize,
    ) -> Result<Vec<VertexId>> {
        self.ensure(b1, b2)?;
        Ok(self
            .game
            .successors(v)
            .iter()
            .copied()
            .filter(|&u| self.win(u, b1, b2))
            .collect())
    }
}

pub fn oracle_winner(g: &Game, c: Configuration) -> Result<Player> {
    Oracle::new(g).winner(c)
}

pub fn oracle_threshold(g: &Game, v: VertexId, b2: usize) -> Result<Budget<u64>> {
    Oracle::new(g).threshold(v, b2)
}

pub fn bidding_matrix(g: &Game, c: Configuration) -> Result<BiddingMatrix> {
    Oracle::new(g).bidding_matrix(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{gen_race, gen_tow};

    fn fig1() -> (Game, VertexId, VertexId) {
        let g = gen_tow(2).unwrap();
        let near = g.vertex("v_1").unwrap();
        let far = g.vertex("v_0").unwrap();
        (g, near, far)
    }

    #[test]
    fn fig1_small_configurations() {
        let (g, near, far) = fig1();
        assert_eq!(
            oracle_winner(&g, Configuration::new(far, 0, 1)).unwrap(),
            Player::Two
        );
        assert_eq!(
            oracle_winner(&g, Configuration::new(near, 0, 1)).unwrap(),
            Player::One
        );
        assert_eq!(
            oracle_winner(&g, Configuration::new(g.target(), 0, 0)).unwrap(),
            Player::One
        );
    }

    #[test]
    fn fig1_thresholds() {
        let (g, near, far) = fig1();
        let mut o = Oracle::new(&g);
        let near_row: Vec<_> = (0..=5).map(|b| o.threshold(near, b).unwrap()).collect();
        let far_row: Vec<_> = (0..=5).map(|b| o.threshold(far, b).unwrap()).collect();
        let f = |xs: [u64; 6]| xs.map(Budget::Finite).to_vec();
        assert_eq!(near_row, f([0, 0, 1, 1, 2, 3]));
        assert_eq!(far_row, f([0, 1, 3, 4, 6, 8]));
        assert_eq!(o.threshold(g.target(), 9).unwrap(), Budget::Finite(0));
        assert_eq!(o.threshold(g.sink(), 2).unwrap(), Budget::Infinite);
    }

    #[test]
    fn fig1_matrices() {
        let (g, near, far) = fig1();
        let m = bidding_matrix(&g, Configuration::new(near, 0, 0)).unwrap();
        assert_eq!(
            m,
            BiddingMatrix::from_rows(vec![vec![Player::One]]).unwrap()
        );
        let m = bidding_matrix(&g, Configuration::new(far, 1, 1)).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.one_rows(), [1]);
        let m = bidding_matrix(&g, Configuration::new(far, 0, 1)).unwrap();
        assert_eq!(m.two_cols(), [1]);
        assert!(m.has_poorman_structure());
    }

    #[test]
    fn determinacy_check() {
        use Player::*;
        assert!(check_local_determinacy(
            &BiddingMatrix::from_rows(vec![vec![One]]).unwrap()
        ));
        let pennies = BiddingMatrix::from_rows(vec![vec![One, Two], vec![Two, One]]).unwrap();
        assert!(!check_local_determinacy(&pennies));
        assert!(!pennies.has_poorman_structure());
    }

    #[test]
    fn race_thresholds_match_floor_formula() {
        let g = gen_race(3, 2).unwrap();
        let mut o = Oracle::new(&g);
        for x in 1..=3 {
            for y in 1..=2 {
                let v = g.vertex(&crate::game::race_name(x, y)).unwrap();
                for b in 0..=8 {
                    let want = (x * (b / y)) as u64;
                    assert_eq!(
                        o.threshold(v, b).unwrap(),
                        Budget::Finite(want),
                        "v_{{{x},{y}}} B={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn size_guard() {
        let (g, near, _) = fig1();
        let mut o = Oracle::with_limit(&g, 100);
        assert!(matches!(
            o.winner(Configuration::new(near, 10, 10)),
            Err(Error::OracleLimit { .. })
        ));
        // Scan cap at B2 = 2 is 3 · 3 + 1 = 10: 11 · 3 · 4 = 132 cells.
        assert!(o.check_threshold_scan(1).is_ok());
        assert!(o.check_threshold_scan(2).is_err());
    }
}
