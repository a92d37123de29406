#![allow(dead_code)]

use std::collections::HashMap;

use poorman_core::game::{gen_choice, gen_race, validate_game};
use poorman_core::period::{Climb, PeriodSpec};
use poorman_core::{Game, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random valid game on `n` vertices: `0` is the target, `1` the sink.
/// With `acyclic`, interior vertex `i` only moves to vertices below `i`.
pub fn random_game(rng: &mut impl Rng, n: usize, acyclic: bool) -> Game {
    loop {
        let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let mut edges = Vec::new();
        for v in 2..n {
            let pool: Vec<usize> = if acyclic {
                (0..v).collect()
            } else {
                (0..n).collect()
            };
            let k = rng.gen_range(1..=3.min(pool.len()));
            for &u in pool.choose_multiple(rng, k) {
                edges.push((v, u));
            }
        }
        let g = Game::from_parts(names, &edges, 0, 1).unwrap();
        if validate_game(&g).is_empty() {
            return g;
        }
    }
}

/// A random choice tree of depth at most `depth` over races with sides up
/// to `side`.
pub fn random_choice_tree(rng: &mut impl Rng, depth: usize, side: usize) -> Game {
    if depth == 0 || rng.gen_bool(0.3) {
        return gen_race(rng.gen_range(1..=side), rng.gen_range(1..=side)).unwrap();
    }
    let k = rng.gen_range(1..=3);
    let kids: Vec<Game> = (0..k)
        .map(|_| random_choice_tree(rng, depth - 1, side))
        .collect();
    gen_choice(&kids).unwrap()
}

/// Race roots of a choice tree with their known climb `(b, a)` from 0.
/// A race root is a race vertex that no race vertex moves to.
pub fn race_roots(g: &Game) -> HashMap<VertexId, Climb<u128>> {
    let mut entered = vec![false; g.vertex_count()];
    for (a, b) in g.edges() {
        if g.name(a) != "root" && !g.name(a).ends_with("/root") {
            entered[b.index()] = true;
        }
    }
    let mut known = HashMap::new();
    for v in g.interior() {
        let tail = g.name(v).rsplit('/').next().unwrap();
        if entered[v.index()] || !tail.starts_with("v_{") {
            continue;
        }
        let (x, y) = tail[3..tail.len() - 1].split_once(',').unwrap();
        let spec = PeriodSpec {
            start: 0,
            period: y.parse().unwrap(),
            rise: x.parse().unwrap(),
        };
        known.insert(v, Climb::Periodic(spec));
    }
    known
}
