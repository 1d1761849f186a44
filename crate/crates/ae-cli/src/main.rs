//! `ae` — exact Avoider-Enforcer game laboratory.
//!
//! Subcommands: `solve` a game file, `reduce` a DIMACS formula to a game,
//! `verify` formulas end to end (SAT oracle vs. solved game), `play`
//! interactively, `gen` seeded random games, and `bench` timing sweeps.
//!
//! Exit codes are a scripting contract: 0 for success (for `solve`, an
//! Avoider win), 1 for an Enforcer win or a failed verification, 2 for
//! usage, input, or resource errors.

mod bench;
mod play;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ae_core::generate::{random_spec, SpecParams};
use ae_core::io::{parse_dimacs, parse_game, serialize_game, write_report, ReportLine};
use ae_core::model::{validate_spec, GameSpec, Player, VertexId};
use ae_core::reduction::{build_reduction, normalize_cnf, verify_instance, Normalized, VarMap};
use ae_core::solver::{solve, SolveOptions};

#[derive(Parser)]
#[command(name = "ae", version, about = "Exact Avoider-Enforcer game laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Side {
    #[value(alias = "a")]
    Avoider,
    #[value(alias = "e")]
    Enforcer,
}

impl From<Side> for Player {
    fn from(side: Side) -> Player {
        match side {
            Side::Avoider => Player::Avoider,
            Side::Enforcer => Player::Enforcer,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Opponent {
    Optimal,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game file; exit 0 on an Avoider win, 1 on an Enforcer win.
    Solve {
        game: PathBuf,
        /// Who moves first (default: the game file's `first` line).
        #[arg(long)]
        first: Option<Side>,
        /// Search without dominance pruning.
        #[arg(long)]
        no_pruning: bool,
        /// Print one optimal line of play.
        #[arg(long)]
        pv: bool,
        /// Give up after expanding this many positions.
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Translate a DIMACS CNF file into a game file.
    Reduce {
        cnf: PathBuf,
        /// Output path (default: game text on stdout, summary on stderr).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// First player; choosing avoider appends the spare opening vertex.
        #[arg(long, default_value = "enforcer")]
        first: Side,
    },
    /// Check formulas end to end: oracle satisfiability vs. the solved game.
    Verify {
        /// A single CNF file.
        cnf: Option<PathBuf>,
        /// Verify every .cnf file in this directory instead.
        #[arg(long, conflicts_with = "cnf")]
        dir: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Per-instance solver budget.
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Play a game file interactively against the engine.
    Play {
        game: PathBuf,
        /// Side the human plays.
        #[arg(long = "as", value_name = "SIDE", default_value = "avoider")]
        side: Side,
        #[arg(long, default_value = "optimal")]
        opponent: Opponent,
        /// Seed for the random opponent.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a seeded random game file.
    Gen {
        #[arg(long)]
        vertices: u32,
        #[arg(long)]
        sets: u32,
        #[arg(long)]
        max_size: u32,
        /// Draw thresholds below the set size too.
        #[arg(long)]
        subset: bool,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Timing sweeps over generated instances.
    Bench {
        #[arg(long, value_enum)]
        suite: bench::Suite,
        /// Variables (theorem1) or board vertices (pruning).
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 20)]
        samples: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { game, first, no_pruning, pv, node_limit } => {
            cmd_solve(&game, first, no_pruning, pv, node_limit)
        }
        Command::Reduce { cnf, output, first } => cmd_reduce(&cnf, output.as_deref(), first),
        Command::Verify { cnf, dir, report, node_limit } => {
            cmd_verify(cnf.as_deref(), dir.as_deref(), report.as_deref(), node_limit)
        }
        Command::Play { game, side, opponent, seed } => {
            play::cmd_play(&load_game(&game)?, side.into(), opponent, seed)
        }
        Command::Gen { vertices, sets, max_size, subset, seed, output } => {
            cmd_gen(vertices, sets, max_size, subset, seed, output.as_deref())
        }
        Command::Bench { suite, n, samples, seed } => bench::cmd_bench(suite, n, samples, seed),
    }
}

/// Loads, parses and validates a game file.
fn load_game(path: &Path) -> Result<GameSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec =
        parse_game(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let defects = validate_spec(&spec);
    if !defects.is_empty() {
        let listing: Vec<String> = defects.iter().map(|d| d.to_string()).collect();
        bail!("{} is not a valid game: {}", path.display(), listing.join("; "));
    }
    Ok(spec)
}

/// `idx` or `idx:alias` when the game carries the box layout.
fn move_label(v: VertexId, map: Option<&VarMap>) -> String {
    match map {
        Some(m) => format!("{v}:{}", m.display_name(v)),
        None => v.to_string(),
    }
}

fn cmd_solve(
    game: &Path,
    first: Option<Side>,
    no_pruning: bool,
    pv: bool,
    node_limit: Option<u64>,
) -> Result<ExitCode> {
    let spec = load_game(game)?;
    let first = first.map(Player::from).unwrap_or(spec.default_first);
    let opts = SolveOptions {
        pruning: !no_pruning,
        node_limit,
        collect_pv: pv,
        ..Default::default()
    };
    let result = solve(&spec, first, &opts)?;
    println!("winner: {}", result.winner);
    println!("nodes: {}", result.nodes_expanded);
    println!("table hits: {}", result.table_hits);
    if let Some(line) = &result.principal_variation {
        let map = VarMap::detect(&spec);
        let moves: Vec<String> = line.iter().map(|&v| move_label(v, map.as_ref())).collect();
        println!("pv: {}", moves.join(" "));
    }
    Ok(match result.winner {
        Player::Avoider => ExitCode::SUCCESS,
        Player::Enforcer => ExitCode::from(1),
    })
}

fn cmd_reduce(cnf_path: &Path, output: Option<&Path>, first: Side) -> Result<ExitCode> {
    let text =
        fs::read_to_string(cnf_path).with_context(|| format!("reading {}", cnf_path.display()))?;
    let cnf = parse_dimacs(&text).map_err(|e| anyhow::anyhow!("{}: {e}", cnf_path.display()))?;
    let ncnf = match normalize_cnf(&cnf)? {
        Normalized::TriviallyUnsat => {
            bail!("formula contains an empty clause: unsatisfiable outright, no game to emit")
        }
        Normalized::Ready(n) => n,
    };
    let (spec, _) = build_reduction(&ncnf, first.into());
    let game_text = serialize_game(&spec);
    let summary = format!("{} vertices, {} sets", spec.board_size, spec.constraints.len());
    match output {
        Some(path) => {
            fs::write(path, game_text).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            print!("{game_text}");
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    cnf: Option<&Path>,
    dir: Option<&Path>,
    report: Option<&Path>,
    node_limit: Option<u64>,
) -> Result<ExitCode> {
    let files: Vec<PathBuf> = match (cnf, dir) {
        (Some(file), None) => vec![file.to_path_buf()],
        (None, Some(dir)) => {
            let mut files: Vec<PathBuf> = fs::read_dir(dir)
                .with_context(|| format!("reading {}", dir.display()))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "cnf"))
                .collect();
            files.sort();
            if files.is_empty() {
                bail!("no .cnf files under {}", dir.display());
            }
            files
        }
        _ => bail!("give a CNF file or --dir DIRECTORY"),
    };

    let mut lines = Vec::with_capacity(files.len());
    let mut all_consistent = true;
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let line = match instance_report(path, node_limit) {
            Ok(report) => {
                all_consistent &= report.consistent;
                ReportLine::Verified { name, report }
            }
            Err(message) => {
                all_consistent = false;
                ReportLine::Failed { name, message }
            }
        };
        lines.push(line);
    }

    let text = write_report(&lines);
    match report {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("{} instances -> {}", lines.len(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(if all_consistent { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn instance_report(
    path: &Path,
    node_limit: Option<u64>,
) -> Result<ae_core::reduction::VerifyReport, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let cnf = parse_dimacs(&text).map_err(|e| e.to_string())?;
    verify_instance(&cnf, node_limit).map_err(|e| e.to_string())
}

fn cmd_gen(
    vertices: u32,
    sets: u32,
    max_size: u32,
    subset: bool,
    seed: u64,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let params = SpecParams { vertices, sets, max_size, subset_thresholds: subset };
    let spec = random_spec(&params, seed)?;
    let text = serialize_game(&spec);
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
