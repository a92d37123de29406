#![allow(dead_code)]

use poorman_core::game::{gen_choice, gen_race, validate_game};
use poorman_core::Game;
use rand::seq::SliceRandom;
use rand::Rng;

/// A random valid game on `n` vertices: `0` is the target, `1` the sink.
/// With `acyclic`, interior vertex `i` only moves to vertices below `i`.
pub fn random_game(rng: &mut impl Rng, n: usize, acyclic: bool) -> Game {
    assert!(n >= 3);
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

/// A random choice tree of depth at most `depth` whose leaves are races
/// with sides up to `side`.
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
