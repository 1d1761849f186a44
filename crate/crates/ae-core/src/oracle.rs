//! Brute-force references: satisfiability by exhaustive assignment
//! enumeration and game values by unmemoized minimax. Deliberately plain so
//! the optimized paths can be measured against them.

use thiserror::Error;

use crate::model::{GameSpec, Player, VertexSet};
use crate::reduction::{Assignment, Cnf};

/// Variable budget for [`brute_force_sat`].
pub const MAX_ORACLE_VARS: u32 = 26;
/// Board budget for [`brute_force_game`].
pub const MAX_ORACLE_BOARD: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{num_vars} variables exceed the oracle budget of {MAX_ORACLE_VARS}")]
    TooManyVariables { num_vars: u32 },
    #[error("board of {board_size} exceeds the oracle budget of {MAX_ORACLE_BOARD}")]
    BoardTooLarge { board_size: u32 },
}

/// The satisfying assignment with the lowest binary encoding (variable 0 is
/// the least significant bit, counting up from all-false), or `None`.
pub fn brute_force_sat(cnf: &Cnf) -> Result<Option<Assignment>, OracleError> {
    if cnf.num_vars > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVariables { num_vars: cnf.num_vars });
    }
    for mask in 0u64..(1u64 << cnf.num_vars) {
        let satisfied = cnf.clauses.iter().all(|clause| {
            clause.iter().any(|lit| (mask >> lit.var) & 1 == u64::from(lit.positive))
        });
        if satisfied {
            return Ok(Some(Assignment::from_mask(cnf.num_vars, mask)));
        }
    }
    Ok(None)
}

/// Exact winner by full-tree minimax: no transposition table, no move
/// filtering, just terminal checks and the definition of optimal play.
pub fn brute_force_game(spec: &GameSpec, first: Player) -> Result<Player, OracleError> {
    if spec.board_size > MAX_ORACLE_BOARD {
        return Err(OracleError::BoardTooLarge { board_size: spec.board_size });
    }
    let avoider = VertexSet::empty(spec.board_size);
    let enforcer = VertexSet::empty(spec.board_size);
    Ok(fight(spec, &avoider, &enforcer, first))
}

fn fight(spec: &GameSpec, avoider: &VertexSet, enforcer: &VertexSet, mover: Player) -> Player {
    if spec.constraints.iter().any(|c| c.claimed_count(avoider) >= c.threshold()) {
        return Player::Enforcer;
    }
    if avoider.len() + enforcer.len() == spec.board_size {
        return Player::Avoider;
    }
    for v in spec.vertices() {
        if avoider.contains(v) || enforcer.contains(v) {
            continue;
        }
        let won = match mover {
            Player::Avoider => fight(spec, &avoider.with(v), enforcer, Player::Enforcer),
            Player::Enforcer => fight(spec, avoider, &enforcer.with(v), Player::Avoider),
        };
        if won == mover {
            return mover;
        }
    }
    mover.opponent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraint, VertexId};
    use crate::reduction::Literal;

    fn spec(board: u32, sets: &[(&[u32], u32)]) -> GameSpec {
        let constraints = sets
            .iter()
            .map(|(m, t)| Constraint::new(m.iter().map(|&v| VertexId(v)), *t))
            .collect();
        GameSpec::new(board, constraints, Player::Enforcer)
    }

    #[test]
    fn sat_returns_lowest_encoded_assignment() {
        let cnf = Cnf::new(
            3,
            vec![vec![
                Literal::positive(0),
                Literal::positive(1),
                Literal::positive(2),
            ]],
        );
        let a = brute_force_sat(&cnf).unwrap().unwrap();
        // All-false fails; the next enumerated assignment sets only x1.
        assert_eq!((a.value(0), a.value(1), a.value(2)), (true, false, false));
    }

    #[test]
    fn sat_detects_contradiction() {
        let cnf = Cnf::new(1, vec![vec![Literal::positive(0)], vec![Literal::negative(0)]]);
        assert_eq!(brute_force_sat(&cnf).unwrap(), None);
    }

    #[test]
    fn sat_of_empty_clause_list_is_all_false() {
        let cnf = Cnf::new(2, vec![]);
        let a = brute_force_sat(&cnf).unwrap().unwrap();
        assert!(!a.value(0) && !a.value(1));
    }

    #[test]
    fn sat_enforces_variable_budget() {
        let cnf = Cnf::new(27, vec![]);
        assert!(matches!(
            brute_force_sat(&cnf),
            Err(OracleError::TooManyVariables { num_vars: 27 })
        ));
    }

    #[test]
    fn empty_board_is_an_avoider_win() {
        let s = spec(0, &[]);
        assert_eq!(brute_force_game(&s, Player::Avoider).unwrap(), Player::Avoider);
    }

    #[test]
    fn forced_singleton_is_an_enforcer_win() {
        let s = spec(1, &[(&[0], 1)]);
        assert_eq!(brute_force_game(&s, Player::Avoider).unwrap(), Player::Enforcer);
    }

    #[test]
    fn single_box_of_triples_is_an_avoider_win() {
        let s = spec(
            4,
            &[(&[0, 1, 2], 3), (&[0, 1, 3], 3), (&[0, 2, 3], 3), (&[1, 2, 3], 3)],
        );
        assert_eq!(brute_force_game(&s, Player::Enforcer).unwrap(), Player::Avoider);
    }

    #[test]
    fn game_enforces_board_budget() {
        let s = spec(15, &[]);
        assert!(matches!(
            brute_force_game(&s, Player::Avoider),
            Err(OracleError::BoardTooLarge { board_size: 15 })
        ));
    }
}
