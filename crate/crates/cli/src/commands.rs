use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use num_bigint::BigInt;
use poorman_core::closed_form::{race_threshold, tow2_threshold, tow3_threshold};
use poorman_core::dag::solve_dag;
use poorman_core::iteration::{solve, winning_bids, winning_moves};
use poorman_core::oracle::Oracle;
use poorman_core::period::{detect_period, predict_period_dag, Climb, PeriodSpec};
use poorman_core::ratio::{ratios_dag, ExtRatio};
use poorman_core::{
    Budget, Configuration, Error, Game, SearchMode, Table, ThresholdTable, VertexId,
};

use crate::spec::parse_gen;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Engine {
    Scan,
    #[default]
    Binary,
    Dag,
    Oracle,
}

pub fn load_game(gen: Option<&str>, file: Option<&Path>) -> Result<Game> {
    match (gen, file) {
        (Some(spec), None) => parse_gen(spec),
        (None, Some(path)) => {
            Game::load(path).with_context(|| format!("loading {}", path.display()))
        }
        _ => bail!("give exactly one of --gen and --game"),
    }
}

pub fn solve_with(g: &Game, b2: usize, engine: Engine) -> Result<Table> {
    Ok(match engine {
        Engine::Scan => solve(g, b2, SearchMode::Scan).table,
        Engine::Binary => {
            let sol = solve(g, b2, SearchMode::BinarySearch);
            log::info!("converged after {} iterations", sol.iterations);
            sol.table
        }
        Engine::Dag => {
            let sol = solve_dag(g, b2)?;
            log::info!("pipe interval fallbacks: {}", sol.fallbacks);
            sol.table
        }
        Engine::Oracle => {
            let mut oracle = Oracle::new(g);
            oracle.check_threshold_scan(b2)?;
            let rows = g
                .vertices()
                .map(|v| (0..=b2).map(|b| oracle.threshold(v, b)).collect())
                .collect::<Result<Vec<Vec<_>>, Error>>()?;
            ThresholdTable::from_rows(rows)?
        }
    })
}

/// Resolves vertex names; an empty list means every vertex in index order.
pub fn pick_vertices(g: &Game, names: &[String]) -> Result<Vec<VertexId>> {
    if names.is_empty() {
        return Ok(g.vertices().collect());
    }
    names
        .iter()
        .map(|n| {
            g.vertex(n)
                .with_context(|| format!("no vertex named {n:?}"))
        })
        .collect()
}

fn one_vertex(g: &Game, name: Option<&str>) -> Result<VertexId> {
    let name = name.context("--vertex is required")?;
    g.vertex(name)
        .with_context(|| format!("no vertex named {name:?}"))
}

pub fn csv_writer(out: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

pub fn write_table(
    out: Box<dyn Write>,
    g: &Game,
    table: &Table,
    columns: &[VertexId],
) -> Result<()> {
    let mut w = csv_writer(out);
    let header =
        std::iter::once("b2".to_string()).chain(columns.iter().map(|&v| g.name(v).to_string()));
    w.write_record(header)?;
    for b in 0..=table.b_max() {
        let row = std::iter::once(b.to_string())
            .chain(columns.iter().map(|&v| table.get(v, b).to_string()));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_bids(out: Box<dyn Write>, g: &Game, table: &Table, vertex: Option<&str>) -> Result<()> {
    let v = one_vertex(g, vertex)?;
    let mut w = csv_writer(out);
    w.write_record(["b2", "threshold", "low", "high"])?;
    for b in 0..=table.b_max() {
        let t = table.get(v, b).to_string();
        match winning_bids(g, table, v, b) {
            Ok(bids) => w.write_record([
                b.to_string(),
                t,
                bids.low.to_string(),
                bids.high.to_string(),
            ])?,
            Err(Error::NoWinningBudget) => {
                w.write_record([b.to_string(), t, String::new(), String::new()])?
            }
            Err(e) => return Err(e.into()),
        }
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_moves(out: Box<dyn Write>, g: &Game, table: &Table, vertex: Option<&str>) -> Result<()> {
    let v = one_vertex(g, vertex)?;
    let succ = g.successors(v);
    let mut w = csv_writer(out);
    w.write_record(std::iter::once("b2").chain(succ.iter().map(|&u| g.name(u))))?;
    for b in 0..=table.b_max() {
        let moves = match winning_moves(g, table, v, b) {
            Ok(m) => m,
            Err(Error::NoWinningBudget) => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        let row = succ
            .iter()
            .map(|u| if moves.contains(u) { "1" } else { "0" }.to_string());
        w.write_record(std::iter::once(b.to_string()).chain(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_ratios(out: Box<dyn Write>, g: &Game, names: &[String]) -> Result<()> {
    let ratios = ratios_dag::<BigInt>(g)?;
    let mut w = csv_writer(out);
    w.write_record(["vertex", "numerator", "denominator"])?;
    for v in pick_vertices(g, names)? {
        match ratios.get(v) {
            ExtRatio::Finite(r) => {
                w.write_record([g.name(v), &r.numer().to_string(), &r.denom().to_string()])?
            }
            ExtRatio::Infinite => w.write_record([g.name(v), "inf", "1"])?,
        }
    }
    w.flush()?;
    Ok(())
}

/// Parses `name:start:period:rise`.
pub fn parse_known(g: &Game, items: &[String]) -> Result<HashMap<VertexId, Climb<u128>>> {
    let mut known = HashMap::new();
    for item in items {
        let parts: Vec<&str> = item.rsplitn(4, ':').collect();
        let [rise, period, start, name] = parts[..] else {
            bail!("expected name:start:period:rise, got {item:?}");
        };
        let v = g
            .vertex(name)
            .with_context(|| format!("no vertex named {name:?}"))?;
        let spec = PeriodSpec {
            start: start.parse()?,
            period: period.parse()?,
            rise: rise.parse()?,
        };
        known.insert(v, Climb::Periodic(spec));
    }
    Ok(known)
}

fn write_climb(w: &mut csv::Writer<Box<dyn Write>>, name: &str, climb: Climb<u128>) -> Result<()> {
    match climb {
        Climb::Periodic(p) => w.write_record([
            name,
            &p.start.to_string(),
            &p.period.to_string(),
            &p.rise.to_string(),
        ])?,
        Climb::Unbounded => w.write_record([name, "0", "1", "inf"])?,
    }
    Ok(())
}

pub fn cmd_predict(
    out: Box<dyn Write>,
    g: &Game,
    names: &[String],
    known: &[String],
) -> Result<()> {
    let ratios = ratios_dag::<BigInt>(g)?;
    let climbs = predict_period_dag::<u128>(g, &ratios, &parse_known(g, known)?)?;
    let mut w = csv_writer(out);
    w.write_record(["vertex", "B_start", "u_x", "u_y"])?;
    for v in pick_vertices(g, names)? {
        write_climb(&mut w, g.name(v), climbs[v.index()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_detect(
    out: Box<dyn Write>,
    g: &Game,
    table: &Table,
    names: &[String],
    min_periods: usize,
) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["vertex", "B_start", "u_x", "u_y"])?;
    for v in pick_vertices(g, names)? {
        if table.row(v).iter().all(|b| !b.is_finite()) {
            write_climb(&mut w, g.name(v), Climb::Unbounded)?;
            continue;
        }
        match detect_period(table, v, min_periods) {
            Some(p) => {
                let wide = PeriodSpec {
                    start: p.start.into(),
                    period: p.period.into(),
                    rise: p.rise.into(),
                };
                write_climb(&mut w, g.name(v), Climb::Periodic(wide))?
            }
            None => w.write_record([g.name(v), "none", "", ""])?,
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Race,
    Tow2,
    Tow3,
}

pub fn cmd_closed_form(out: Box<dyn Write>, family: Family, b2: u64, x: u64, y: u64) -> Result<()> {
    let mut w = csv_writer(out);
    let cell = |b: Result<Budget<u64>, Error>| b.map(|b| b.to_string());
    match family {
        Family::Race => {
            w.write_record(["b2", "threshold"])?;
            for b in 0..=b2 {
                w.write_record([b.to_string(), cell(race_threshold(x, y, b))?])?;
            }
        }
        Family::Tow2 => {
            w.write_record(["b2", "k1", "k2"])?;
            for b in 0..=b2 {
                w.write_record([
                    b.to_string(),
                    cell(tow2_threshold(1, b))?,
                    cell(tow2_threshold(2, b))?,
                ])?;
            }
        }
        Family::Tow3 => {
            w.write_record(["b2", "k1", "k2", "k3"])?;
            for b in 1..=b2 {
                let k = |k| cell(tow3_threshold(k, b));
                w.write_record([b.to_string(), k(1)?, k(2)?, k(3)?])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the bidding matrix of `⟨v, b1, b2⟩`; returns the winner.
pub fn cmd_oracle(
    out: Box<dyn Write>,
    g: &Game,
    vertex: Option<&str>,
    b1: usize,
    b2: usize,
) -> Result<String> {
    let v = one_vertex(g, vertex)?;
    let mut oracle = Oracle::new(g);
    let c = Configuration::new(v, b1, b2);
    let m = oracle.bidding_matrix(c)?;
    let mut w = csv_writer(out);
    w.write_record(std::iter::once("b1".to_string()).chain((0..m.cols()).map(|c| c.to_string())))?;
    for r in 0..m.rows() {
        w.write_record(
            std::iter::once(r.to_string()).chain((0..m.cols()).map(|c| m.entry(r, c).to_string())),
        )?;
    }
    w.flush()?;
    Ok(oracle.winner(c)?.to_string())
}
