use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use poorman_cli::commands::{
    cmd_bids, cmd_closed_form, cmd_detect, cmd_moves, cmd_oracle, cmd_predict, cmd_ratios,
    pick_vertices, write_table, Family,
};
use poorman_cli::{
    load_game, parse_gen, run_experiment, solve_with, Engine, Experiment, ExperimentOptions,
};

#[derive(Parser)]
#[command(
    name = "poorman",
    version,
    about = "Threshold budgets of poorman discrete-bidding reachability games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GameArgs {
    /// Generator spec: race:a:b | tow:n | choice:<spec>,<spec> | pipe-violation
    #[arg(long)]
    gen: Option<String>,
    /// Game JSON file.
    #[arg(long)]
    game: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Output path; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Threshold table as CSV.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        b2: usize,
        #[arg(long, value_enum, default_value_t)]
        engine: Engine,
        /// Columns to emit, in order; every vertex when absent.
        #[arg(long)]
        vertex: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Winning-bid interval of one vertex per budget.
    Bids {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        b2: usize,
        #[arg(long, value_enum, default_value_t)]
        engine: Engine,
        #[arg(long)]
        vertex: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Winning successors of one vertex per budget.
    Moves {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        b2: usize,
        #[arg(long, value_enum, default_value_t)]
        engine: Engine,
        #[arg(long)]
        vertex: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Exact continuous ratios of a DAG.
    Ratios {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        vertex: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Predicted or detected periods.
    Period {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, conflicts_with = "detect")]
        predict: bool,
        #[arg(long)]
        detect: bool,
        /// Table size for --detect.
        #[arg(long)]
        b2: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        engine: Engine,
        /// Periods a detected relation must span.
        #[arg(long, default_value_t = 3)]
        min_periods: usize,
        /// Known behaviour `name:start:period:rise` replacing a prediction.
        #[arg(long)]
        known: Vec<String>,
        #[arg(long)]
        vertex: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Closed-form thresholds.
    ClosedForm {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        b2: u64,
        /// Race vertex coordinates.
        #[arg(long, default_value_t = 1)]
        x: u64,
        #[arg(long, default_value_t = 1)]
        y: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force winner and bidding matrix of one configuration.
    Oracle {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        b1: usize,
        #[arg(long)]
        b2: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Writes a generated game as JSON.
    Generate {
        spec: String,
        #[command(flatten)]
        out: Output,
    },
    /// Runs a reproduction experiment.
    Experiment {
        #[arg(value_enum)]
        name: Experiment,
        #[arg(long)]
        b2: Option<usize>,
        /// Game for the conjecture experiments.
        #[arg(long)]
        gen: Option<String>,
        #[arg(long)]
        vertex: Option<String>,
        /// Ratio for conjecture-diff.
        #[arg(long)]
        ratio: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
}

fn game_of(args: &GameArgs) -> Result<poorman_core::Game> {
    load_game(args.gen.as_deref(), args.game.as_deref())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve {
            game,
            b2,
            engine,
            vertex,
            out,
        } => {
            let g = game_of(&game)?;
            let table = solve_with(&g, b2, engine)?;
            write_table(out.open()?, &g, &table, &pick_vertices(&g, &vertex)?)?;
        }
        Command::Bids {
            game,
            b2,
            engine,
            vertex,
            out,
        } => {
            let g = game_of(&game)?;
            let table = solve_with(&g, b2, engine)?;
            cmd_bids(out.open()?, &g, &table, vertex.as_deref())?;
        }
        Command::Moves {
            game,
            b2,
            engine,
            vertex,
            out,
        } => {
            let g = game_of(&game)?;
            let table = solve_with(&g, b2, engine)?;
            cmd_moves(out.open()?, &g, &table, vertex.as_deref())?;
        }
        Command::Ratios { game, vertex, out } => {
            cmd_ratios(out.open()?, &game_of(&game)?, &vertex)?
        }
        Command::Period {
            game,
            predict,
            detect,
            b2,
            engine,
            min_periods,
            known,
            vertex,
            out,
        } => {
            let g = game_of(&game)?;
            match (predict, detect, b2) {
                (true, false, _) => cmd_predict(out.open()?, &g, &vertex, &known)?,
                (false, true, Some(b2)) => {
                    let table = solve_with(&g, b2, engine)?;
                    cmd_detect(out.open()?, &g, &table, &vertex, min_periods)?;
                }
                (false, true, None) => bail!("--detect needs --b2"),
                _ => bail!("give one of --predict and --detect"),
            }
        }
        Command::ClosedForm {
            family,
            b2,
            x,
            y,
            out,
        } => cmd_closed_form(out.open()?, family, b2, x, y)?,
        Command::Oracle {
            game,
            vertex,
            b1,
            b2,
            out,
        } => {
            let winner = cmd_oracle(out.open()?, &game_of(&game)?, vertex.as_deref(), b1, b2)?;
            eprintln!("winner: player {winner}");
        }
        Command::Generate { spec, out } => {
            let mut w = out.open()?;
            writeln!(w, "{}", parse_gen(&spec)?.to_json())?;
            w.flush()?;
        }
        Command::Experiment {
            name,
            b2,
            gen,
            vertex,
            ratio,
            out,
        } => {
            let report = run_experiment(
                name,
                &ExperimentOptions {
                    b2,
                    gen,
                    vertex,
                    ratio,
                },
            )?;
            report.write_csv(out.open()?)?;
            eprint!("{}", report.summary());
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
