//! Interactive play against the engine: a plain line-oriented loop that
//! shows the claimed and open vertices every turn, re-prompts on bad input,
//! and announces the violated losing set when Enforcer wins.

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ae_core::engine::{self, GameStatus};
use ae_core::model::{GameSpec, Player, Position, VertexId, VertexSet};
use ae_core::reduction::VarMap;
use ae_core::solver::{best_move, SolveOptions};

use crate::{move_label, Opponent};

pub fn cmd_play(spec: &GameSpec, human: Player, opponent: Opponent, seed: u64) -> Result<ExitCode> {
    let map = VarMap::detect(spec);
    let first = spec.default_first;
    let mut pos = Position::empty(spec.board_size);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stdin = io::stdin();
    let mut input = stdin.lock();

    println!(
        "board of {} vertices, {} losing sets; {} moves first",
        spec.board_size,
        spec.constraints.len(),
        first
    );
    println!("you play {human}; the engine plays {}", human.opponent());

    loop {
        match engine::status(spec, &pos) {
            GameStatus::AvoiderWins => {
                print_board(spec, &pos, map.as_ref());
                println!("Avoider wins: board full with no losing set completed.");
                break;
            }
            GameStatus::EnforcerWins => {
                print_board(spec, &pos, map.as_ref());
                let c = engine::violated_constraint(spec, pos.avoider())
                    .expect("a violated constraint must exist");
                let members: Vec<String> =
                    c.members().iter().map(|&v| move_label(v, map.as_ref())).collect();
                println!(
                    "Enforcer wins: Avoider claimed {} of {{{}}} (threshold {}).",
                    c.claimed_count(pos.avoider()),
                    members.join(" "),
                    c.threshold()
                );
                break;
            }
            GameStatus::Ongoing => {}
        }

        let mover = engine::to_move(first, &pos)?;
        let v = if mover == human {
            print_board(spec, &pos, map.as_ref());
            match prompt_move(&mut input, spec, &pos, map.as_ref())? {
                Some(v) => v,
                None => {
                    println!("quit.");
                    return Ok(ExitCode::SUCCESS);
                }
            }
        } else {
            match opponent {
                Opponent::Optimal => best_move(spec, &pos, first, &SolveOptions::default())?.vertex(),
                Opponent::Random => {
                    let open = engine::legal_moves(spec, &pos);
                    open[rng.gen_range(0..open.len())]
                }
            }
        };
        println!("{mover} claims {}", move_label(v, map.as_ref()));
        pos = engine::apply_move(spec, &pos, v, mover)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn render(set: &VertexSet, map: Option<&VarMap>) -> String {
    if set.is_empty() {
        return "-".to_string();
    }
    set.iter().map(|v| move_label(v, map)).collect::<Vec<_>>().join(" ")
}

fn print_board(spec: &GameSpec, pos: &Position, map: Option<&VarMap>) {
    println!("  avoider : {}", render(pos.avoider(), map));
    println!("  enforcer: {}", render(pos.enforcer(), map));
    let open = VertexSet::from_vertices(
        spec.board_size,
        engine::legal_moves(spec, pos),
    );
    println!("  open    : {}", render(&open, map));
}

/// Reads a vertex (by index, or by alias like `x2` when the layout is
/// known). `None` means the human quit. Anything else re-prompts.
fn prompt_move(
    input: &mut impl BufRead,
    spec: &GameSpec,
    pos: &Position,
    map: Option<&VarMap>,
) -> Result<Option<VertexId>> {
    loop {
        print!("your move> ");
        io::stdout().flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(None); // end of input
        }
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        if token == "q" || token == "quit" {
            return Ok(None);
        }
        let vertex = match token.parse::<u32>() {
            Ok(i) => Some(VertexId(i)),
            Err(_) => map.and_then(|m| m.parse_name(token)),
        };
        match vertex {
            Some(v) if v.0 < spec.board_size && !pos.is_claimed(v) => return Ok(Some(v)),
            Some(v) if v.0 < spec.board_size => println!("{} is already claimed", move_label(v, map)),
            _ => println!("'{token}' is not an open vertex (enter an index from the open list)"),
        }
    }
}
