//! Timing sweeps: `theorem1` runs the end-to-end verification harness over
//! random formulas; `pruning` times the solver with and without dominance
//! pruning on the same random boards.

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{ensure, Result};
use clap::ValueEnum;

use ae_core::generate::{random_cnf, random_spec, SpecParams};
use ae_core::model::Player;
use ae_core::reduction::verify_instance;
use ae_core::solver::{solve, SolveOptions};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem1,
    Pruning,
}

pub fn cmd_bench(suite: Suite, n: u32, samples: u32, seed: u64) -> Result<ExitCode> {
    match suite {
        Suite::Theorem1 => theorem1(n, samples, seed),
        Suite::Pruning => pruning(n, samples, seed),
    }
}

fn theorem1(n: u32, samples: u32, seed: u64) -> Result<ExitCode> {
    let clauses = 2 * n;
    println!("theorem1 suite: n={n} m={clauses} samples={samples} seed={seed}");
    println!(
        "{:<6} {:>3} {:>3} {:>4} {:>9} {:>11} {:>9} {:>7}",
        "name", "n", "m", "sat", "winner", "consistent", "nodes", "ms"
    );
    let mut all_consistent = true;
    for i in 0..samples {
        let cnf = random_cnf(n, clauses, seed.wrapping_add(i.into()))?;
        let report = verify_instance(&cnf, None)?;
        println!(
            "f{i:03}   {n:>3} {clauses:>3} {:>4} {:>9} {:>11} {:>9} {:>7}",
            u8::from(report.sat),
            report.winner.to_string(),
            u8::from(report.consistent),
            report.nodes,
            report.elapsed.as_millis()
        );
        all_consistent &= report.consistent;
    }
    println!("all consistent: {}", if all_consistent { "yes" } else { "NO" });
    Ok(if all_consistent { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn pruning(n: u32, samples: u32, seed: u64) -> Result<ExitCode> {
    println!("pruning suite: vertices={n} samples={samples} seed={seed}");
    println!(
        "{:<6} {:>8} {:>5} {:>8} {:>12} {:>10} {:>11} {:>9}",
        "name", "vertices", "sets", "winner", "nodes(prune)", "ms(prune)", "nodes(full)", "ms(full)"
    );
    let params = SpecParams { vertices: n, sets: n, max_size: 4.min(n), subset_thresholds: true };
    let pruned_opts = SolveOptions::default();
    let full_opts = SolveOptions { pruning: false, ..Default::default() };
    let mut never_more_nodes = true;
    for i in 0..samples {
        let spec = random_spec(&params, seed.wrapping_add(i.into()))?;

        let started = Instant::now();
        let pruned = solve(&spec, Player::Enforcer, &pruned_opts)?;
        let pruned_ms = started.elapsed().as_millis();

        let started = Instant::now();
        let full = solve(&spec, Player::Enforcer, &full_opts)?;
        let full_ms = started.elapsed().as_millis();

        ensure!(pruned.winner == full.winner, "pruning changed the winner on g{i:03}");
        never_more_nodes &= pruned.nodes_expanded <= full.nodes_expanded;
        println!(
            "g{i:03}   {:>8} {:>5} {:>8} {:>12} {:>10} {:>11} {:>9}",
            spec.board_size,
            spec.constraints.len(),
            pruned.winner.to_string(),
            pruned.nodes_expanded,
            pruned_ms,
            full.nodes_expanded,
            full_ms
        );
    }
    println!("pruned <= full nodes on every row: {}", if never_more_nodes { "yes" } else { "no" });
    Ok(ExitCode::SUCCESS)
}
