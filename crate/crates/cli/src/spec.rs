//! Generator specs: `race:a:b`, `tow:n`, `pipe-violation`, and
//! `choice:<spec>,<spec>,...`. A nested choice must be parenthesized, as in
//! `choice:(choice:race:1:1,race:2:2),tow:2`.

use anyhow::{bail, Context, Result};
use poorman_core::game::{gen_choice, gen_pipe_violation, gen_race, gen_tow};
use poorman_core::Game;

pub fn parse_gen(spec: &str) -> Result<Game> {
    let spec = strip_parens(spec.trim());
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let nat = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .with_context(|| format!("expected a natural number, got {s:?} in {spec:?}"))
    };
    let game = match kind {
        "race" => {
            let (a, b) = rest.split_once(':').context("race needs race:a:b")?;
            gen_race(nat(a)?, nat(b)?)?
        }
        "tow" => gen_tow(nat(rest)?)?,
        "pipe-violation" if rest.is_empty() => gen_pipe_violation(),
        "choice" => {
            let kids = split_top(rest)?
                .into_iter()
                .map(parse_gen)
                .collect::<Result<Vec<_>>>()?;
            gen_choice(&kids)?
        }
        _ => bail!("unknown generator spec {spec:?}"),
    };
    Ok(game)
}

fn strip_parens(s: &str) -> &str {
    if s.starts_with('(') && s.ends_with(')') && split_top(&s[1..s.len() - 1]).is_ok() {
        strip_parens(&s[1..s.len() - 1])
    } else {
        s
    }
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut from) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    bail!("unbalanced parentheses in {s:?}");
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[from..i]);
                from = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        bail!("unbalanced parentheses in {s:?}");
    }
    parts.push(&s[from..]);
    if parts.iter().any(|p| p.trim().is_empty()) {
        bail!("empty component in {s:?}");
    }
    Ok(parts)
}
