use num_bigint::BigUint;
use poorman_core::closed_form::{
    golden_floors, golden_floors_big, race_threshold, tow2_threshold, tow3_threshold,
};
use poorman_core::game::{gen_race, gen_tow, race_name};
use poorman_core::iteration::solve;
use poorman_core::{Budget, SearchMode};

/// φ to 220 significant digits.
const PHI: &str = "1.6180339887498948482045868343656381177203091798057628621354486227052604628189024497072072041893911374847540880753868917521266338622235369317931800607667263544333890865959395829056383226613199282902678806752087668925017116";

/// `floor(b φ)` and `floor(b / φ) = floor(b φ) - b` from the decimal expansion.
fn decimal_floors(b: &BigUint) -> (BigUint, BigUint) {
    let digits: String = PHI.chars().filter(|c| *c != '.').collect();
    let scale = BigUint::from(10u32).pow(digits.len() as u32 - 1);
    let mul = b * digits.parse::<BigUint>().unwrap() / scale;
    (&mul - b, mul)
}

#[test]
fn race_formula_matches_solver() {
    for a in 1..=5 {
        for b in 1..=5 {
            let g = gen_race(a, b).unwrap();
            let table = solve::<u64>(&g, 200, SearchMode::BinarySearch).table;
            for x in 1..=a {
                for y in 1..=b {
                    let v = g.vertex(&race_name(x, y)).unwrap();
                    for budget in 0..=200u64 {
                        let want = race_threshold(x as u64, y as u64, budget).unwrap();
                        assert_eq!(table.get(v, budget as usize), want);
                    }
                }
            }
        }
    }
}

#[test]
fn tug_of_war_formulas_match_solver() {
    let g = gen_tow(2).unwrap();
    let table = solve::<u64>(&g, 500, SearchMode::BinarySearch).table;
    for k in 1..=2 {
        let v = g.vertex(&format!("v_{}", 2 - k)).unwrap();
        for b in 0..=500u64 {
            assert_eq!(
                table.get(v, b as usize),
                tow2_threshold(k, b).unwrap(),
                "k={k} b={b}"
            );
        }
    }
    let g = gen_tow(3).unwrap();
    let table = solve::<u64>(&g, 500, SearchMode::BinarySearch).table;
    for k in 1..=3 {
        let v = g.vertex(&format!("v_{}", 3 - k)).unwrap();
        for b in 1..=500u64 {
            assert_eq!(
                table.get(v, b as usize),
                tow3_threshold(k, b).unwrap(),
                "k={k} b={b}"
            );
        }
    }
}

#[test]
fn golden_floors_match_decimal_expansion() {
    for b in 0..=100_000u64 {
        let p = golden_floors(b).unwrap();
        let (div, mul) = decimal_floors(&BigUint::from(b));
        assert_eq!(
            (
                BigUint::from(p.floor_div_phi),
                BigUint::from(p.floor_mul_phi)
            ),
            (div, mul)
        );
        assert_eq!(p.floor_mul_phi, p.floor_div_phi + b);
    }
    for e in [20u32, 50, 100, 150] {
        let b = BigUint::from(10u32).pow(e) + BigUint::from(12345u32);
        assert_eq!(golden_floors_big(&b), decimal_floors(&b));
    }
}

#[test]
fn golden_floors_satisfy_the_recurrence() {
    let n = 10_000;
    let t: Vec<u64> = (0..=n)
        .map(|b| golden_floors(b).unwrap().floor_div_phi)
        .collect();
    let u: Vec<u64> = (0..=n)
        .map(|b| golden_floors(b).unwrap().floor_mul_phi)
        .collect();
    for b in 1..=n as usize {
        let best = (0..b)
            .map(|x| (x as u64).max(u[b - 1 - x]))
            .min()
            .unwrap()
            .min(b as u64);
        assert_eq!(t[b], best, "b={b}");
    }
}

#[test]
fn race_roots_touch_both_ends_of_the_pipe() {
    let n = 10_000;
    for a in 1..=6 {
        for b in 1..=6 {
            let g = gen_race(a, b).unwrap();
            let table = solve::<u64>(&g, n, SearchMode::BinarySearch).table;
            let root = g.vertex(&race_name(a, b)).unwrap();
            let (mut top, mut below, mut bottom) = (0, 0, 0);
            for budget in 0..=n {
                let Budget::Finite(t) = table.get(root, budget) else {
                    panic!()
                };
                // Compare b·T with a·B to stay in integers.
                let scaled = t as usize * b;
                if scaled == a * budget {
                    top += 1;
                } else {
                    below += 1;
                }
                if budget + 1 >= b && scaled == a * (budget + 1 - b) {
                    bottom += 1;
                }
            }
            assert!(top >= n / b, "race({a},{b})");
            assert!(b == 1 || below >= n / 2);
            assert!(bottom >= n / b - 1, "race({a},{b})");
        }
    }
}
