//! Randomized structural properties of the model, engine and solver. The
//! heavyweight cross-implementation sweeps live in the acceptance suite; this
//! file covers the local invariants.

use ae_core::engine::{self};
use ae_core::generate::{random_spec, SpecParams};
use ae_core::io::{parse_game, serialize_game};
use ae_core::model::{
    dominates, expand_to_plain, neighborhood, validate_spec, Constraint, GameSpec, Player,
    Position, VertexId, VertexSet, DEFAULT_EXPANSION_CAP,
};
use ae_core::solver::{solve, SolveOptions};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_spec(seed: u64) -> GameSpec {
    let params = SpecParams {
        vertices: 4 + (seed % 9) as u32, // 4..=12
        sets: 1 + (seed % 7) as u32,
        max_size: 4.min(4 + (seed % 9) as u32),
        subset_thresholds: seed.is_multiple_of(2),
    };
    random_spec(&params, seed).unwrap()
}

/// Random legal prefix of alternating claims.
fn random_prefix(spec: &GameSpec, first: Player, rng: &mut ChaCha8Rng) -> Position {
    let mut pos = Position::empty(spec.board_size);
    let moves = rng.gen_range(0..=spec.board_size);
    for _ in 0..moves {
        let open = engine::legal_moves(spec, &pos);
        if open.is_empty() {
            break;
        }
        let v = open[rng.gen_range(0..open.len())];
        let mover = engine::to_move(first, &pos).unwrap();
        pos = engine::apply_move(spec, &pos, v, mover).unwrap();
    }
    pos
}

#[test]
fn generated_specs_validate_cleanly() {
    for seed in 0..200 {
        assert!(validate_spec(&small_spec(seed)).is_empty());
    }
}

#[test]
fn dominance_is_a_preorder_on_random_specs() {
    for seed in 0..60 {
        let spec = small_spec(seed);
        let n = spec.board_size;
        let dom: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n).map(|b| dominates(&spec, VertexId(a), VertexId(b)).unwrap()).collect()
            })
            .collect();
        for a in 0..n as usize {
            assert!(dom[a][a], "reflexivity failed on seed {seed}");
            for b in 0..n as usize {
                for c in 0..n as usize {
                    if dom[a][b] && dom[b][c] {
                        assert!(dom[a][c], "transitivity failed on seed {seed}");
                    }
                }
            }
        }
    }
}

#[test]
fn neighborhood_matches_the_naive_filter() {
    for seed in 0..100 {
        let spec = small_spec(seed);
        for v in spec.vertices() {
            let naive: Vec<&Constraint> =
                spec.constraints.iter().filter(|c| c.members().contains(&v)).collect();
            assert_eq!(neighborhood(&spec, v).unwrap(), naive);
        }
    }
}

#[test]
fn expansion_introduces_no_new_vertices() {
    for seed in 0..100 {
        let spec = small_spec(seed);
        let plain = expand_to_plain(&spec, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(plain.board_size, spec.board_size);
        let source: VertexSet = VertexSet::from_vertices(
            spec.board_size,
            spec.constraints.iter().flat_map(|c| c.members().iter().copied()),
        );
        for c in &plain.constraints {
            assert!(c.is_plain());
            assert!(c.members().iter().all(|&v| source.contains(v)));
        }
    }
}

#[test]
fn violation_is_monotone_in_avoider_claims() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 0..100 {
        let spec = small_spec(seed);
        let pos = random_prefix(&spec, Player::Enforcer, &mut rng);
        if engine::violated_constraint(&spec, pos.avoider()).is_none() {
            continue;
        }
        for v in engine::legal_moves(&spec, &pos) {
            let grown = pos.avoider().with(v);
            assert!(engine::violated_constraint(&spec, &grown).is_some());
        }
    }
}

#[test]
fn full_board_status_matches_the_expanded_view() {
    // On a full board the subset thresholds and the plain expansion must
    // agree about whether Avoider completed a losing set.
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for seed in 0..100 {
        let spec = small_spec(seed);
        let plain = expand_to_plain(&spec, DEFAULT_EXPANSION_CAP).unwrap();
        let mut pos = Position::empty(spec.board_size);
        let mut mover = Player::Enforcer;
        loop {
            let open = engine::legal_moves(&spec, &pos);
            if open.is_empty() {
                break;
            }
            let v = open[rng.gen_range(0..open.len())];
            pos = engine::apply_move(&spec, &pos, v, mover).unwrap();
            mover = mover.opponent();
        }
        let subset_lost = engine::violated_constraint(&spec, pos.avoider()).is_some();
        let plain_lost = plain
            .constraints
            .iter()
            .any(|c| c.members().iter().all(|&v| pos.avoider().contains(v)));
        assert_eq!(subset_lost, plain_lost, "seed {seed}");
    }
}

#[test]
fn solver_is_deterministic_including_the_line_of_play() {
    let opts = SolveOptions { collect_pv: true, ..Default::default() };
    for seed in 0..40 {
        let spec = small_spec(seed);
        for first in [Player::Avoider, Player::Enforcer] {
            let a = solve(&spec, first, &opts).unwrap();
            let b = solve(&spec, first, &opts).unwrap();
            assert_eq!(a, b, "seed {seed}");
            assert!(a.nodes_expanded >= 1);
        }
    }
}

proptest! {
    #[test]
    fn game_format_round_trips(
        board in 1u32..30,
        raw_sets in proptest::collection::vec(
            (proptest::collection::vec(0u32..30, 1..6), 1u32..6),
            0..8,
        ),
        first in proptest::bool::ANY,
    ) {
        let constraints: Vec<Constraint> = raw_sets
            .iter()
            .map(|(members, t)| {
                let members: Vec<VertexId> =
                    members.iter().map(|&v| VertexId(v % board)).collect();
                let mut c = Constraint::new(members, 0);
                let t = (*t).min(c.members().len() as u32);
                c = Constraint::new(c.members().to_vec(), t.max(1));
                c
            })
            .collect();
        let first = if first { Player::Avoider } else { Player::Enforcer };
        let spec = GameSpec::new(board, constraints, first);
        prop_assume!(validate_spec(&spec).is_empty());

        let text = serialize_game(&spec);
        let parsed = parse_game(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(serialize_game(&parsed), text);
    }
}
