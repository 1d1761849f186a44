//! Game mechanics: legal moves, claim application, violation detection,
//! terminal status, turn order, and residual (induced) games.

use crate::model::{Constraint, GameError, GameSpec, Player, Position, VertexId};

/// Outcome state of a position. A violation ends the game immediately: the
/// loss condition only ever gains claims, so playing on cannot undo it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GameStatus {
    Ongoing,
    AvoiderWins,
    EnforcerWins,
}

/// Unclaimed vertices, in ascending index order.
pub fn legal_moves(spec: &GameSpec, pos: &Position) -> Vec<VertexId> {
    spec.vertices().filter(|&v| !pos.is_claimed(v)).collect()
}

/// New position with `v` claimed by `player`.
pub fn apply_move(
    spec: &GameSpec,
    pos: &Position,
    v: VertexId,
    player: Player,
) -> Result<Position, GameError> {
    if v.0 >= spec.board_size {
        return Err(GameError::VertexOutOfRange { vertex: v, board_size: spec.board_size });
    }
    if pos.is_claimed(v) {
        return Err(GameError::AlreadyClaimed { vertex: v });
    }
    let mut next = pos.clone();
    match player {
        Player::Avoider => next.avoider.insert(v),
        Player::Enforcer => next.enforcer.insert(v),
    };
    Ok(next)
}

/// First constraint (in spec order) whose threshold the avoider set meets.
pub fn violated_constraint<'a>(
    spec: &'a GameSpec,
    avoider: &crate::model::VertexSet,
) -> Option<&'a Constraint> {
    spec.constraints.iter().find(|c| c.claimed_count(avoider) >= c.threshold())
}

pub fn status(spec: &GameSpec, pos: &Position) -> GameStatus {
    if violated_constraint(spec, pos.avoider()).is_some() {
        GameStatus::EnforcerWins
    } else if pos.claimed_count() == spec.board_size {
        GameStatus::AvoiderWins
    } else {
        GameStatus::Ongoing
    }
}

/// Player to move under strict alternation starting from `first`.
pub fn to_move(first: Player, pos: &Position) -> Result<Player, GameError> {
    let a = pos.avoider().len();
    let e = pos.enforcer().len();
    let (first_count, second_count) = match first {
        Player::Avoider => (a, e),
        Player::Enforcer => (e, a),
    };
    if first_count == second_count {
        Ok(first)
    } else if first_count == second_count + 1 {
        Ok(first.opponent())
    } else {
        Err(GameError::InconsistentCounts { avoider: a, enforcer: e, first })
    }
}

/// Residual game after the claims in `pos`, or the fact that Avoider has
/// already met a threshold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Induced {
    /// Some constraint's reduced threshold hit zero: the game is over and
    /// Enforcer has won, so no residual spec is meaningful.
    AlreadyLost,
    Game(InducedGame),
}

/// Residual game over the unclaimed vertices, re-indexed densely.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedGame {
    pub spec: GameSpec,
    /// Maps each new vertex index back to the source board.
    pub to_source: Vec<VertexId>,
}

/// Shrinks every constraint to its unclaimed members and lowers its threshold
/// by the number of members Avoider already holds. Constraints that can no
/// longer trigger are dropped; a threshold at or below zero means the source
/// position is already lost.
pub fn induced_game(spec: &GameSpec, pos: &Position) -> Induced {
    let to_source: Vec<VertexId> = spec.vertices().filter(|&v| !pos.is_claimed(v)).collect();
    let mut to_new = vec![u32::MAX; spec.board_size as usize];
    for (new, &old) in to_source.iter().enumerate() {
        to_new[old.index()] = new as u32;
    }

    let mut constraints = Vec::new();
    for c in &spec.constraints {
        let claimed = c.claimed_count(pos.avoider());
        if claimed >= c.threshold() {
            return Induced::AlreadyLost;
        }
        let reduced = c.threshold() - claimed;
        let members: Vec<VertexId> = c
            .members()
            .iter()
            .filter(|&&v| !pos.is_claimed(v))
            .map(|&v| VertexId(to_new[v.index()]))
            .collect();
        if reduced as usize > members.len() {
            continue;
        }
        constraints.push(Constraint::new(members, reduced));
    }

    Induced::Game(InducedGame {
        spec: GameSpec::new(to_source.len() as u32, constraints, spec.default_first),
        to_source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VertexSet;

    fn spec(board: u32, sets: &[(&[u32], u32)]) -> GameSpec {
        let constraints = sets
            .iter()
            .map(|(m, t)| Constraint::new(m.iter().map(|&v| VertexId(v)), *t))
            .collect();
        GameSpec::new(board, constraints, Player::Enforcer)
    }

    fn pos(board: u32, a: &[u32], e: &[u32]) -> Position {
        Position::from_sets(
            VertexSet::from_vertices(board, a.iter().map(|&v| VertexId(v))),
            VertexSet::from_vertices(board, e.iter().map(|&v| VertexId(v))),
        )
        .unwrap()
    }

    #[test]
    fn legal_moves_are_the_unclaimed_complement() {
        let s = spec(4, &[]);
        assert_eq!(legal_moves(&s, &pos(4, &[0], &[1])), vec![VertexId(2), VertexId(3)]);
    }

    #[test]
    fn legal_moves_on_full_board_are_empty() {
        let s = spec(2, &[]);
        assert!(legal_moves(&s, &pos(2, &[0], &[1])).is_empty());
    }

    #[test]
    fn legal_moves_on_empty_position_cover_the_board() {
        let s = spec(3, &[]);
        assert_eq!(legal_moves(&s, &Position::empty(3)).len(), 3);
    }

    #[test]
    fn apply_move_adds_to_the_movers_set() {
        let s = spec(4, &[]);
        let p = apply_move(&s, &Position::empty(4), VertexId(2), Player::Avoider).unwrap();
        assert!(p.avoider().contains(VertexId(2)));
        assert!(p.enforcer().is_empty());

        let p2 = apply_move(&s, &p, VertexId(0), Player::Enforcer).unwrap();
        assert!(p2.enforcer().contains(VertexId(0)));
    }

    #[test]
    fn apply_move_rejects_claimed_vertex() {
        let s = spec(4, &[]);
        let p = pos(4, &[2], &[]);
        assert_eq!(
            apply_move(&s, &p, VertexId(2), Player::Enforcer),
            Err(GameError::AlreadyClaimed { vertex: VertexId(2) })
        );
    }

    #[test]
    fn apply_move_rejects_out_of_range_vertex() {
        let s = spec(4, &[]);
        assert!(matches!(
            apply_move(&s, &Position::empty(4), VertexId(9), Player::Avoider),
            Err(GameError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn violation_counts_claims_against_threshold() {
        let s = spec(3, &[(&[0, 1, 2], 2)]);
        let hit = violated_constraint(&s, pos(3, &[0, 2], &[]).avoider());
        assert_eq!(hit, Some(&s.constraints[0]));

        let t = spec(3, &[(&[0, 1, 2], 3)]);
        assert!(violated_constraint(&t, pos(3, &[0, 2], &[]).avoider()).is_none());
        assert!(violated_constraint(&t, pos(3, &[0, 1, 2], &[]).avoider()).is_some());
    }

    #[test]
    fn status_ends_game_on_mid_game_violation() {
        let s = spec(4, &[(&[0, 1], 2)]);
        assert_eq!(status(&s, &pos(4, &[0, 1], &[2])), GameStatus::EnforcerWins);
    }

    #[test]
    fn status_full_board_without_violation_is_avoider_win() {
        let s = spec(2, &[(&[0, 1], 2)]);
        assert_eq!(status(&s, &pos(2, &[0], &[1])), GameStatus::AvoiderWins);
    }

    #[test]
    fn status_empty_position_is_ongoing() {
        let s = spec(3, &[]);
        assert_eq!(status(&s, &Position::empty(3)), GameStatus::Ongoing);
    }

    #[test]
    fn to_move_alternates_from_first() {
        assert_eq!(to_move(Player::Enforcer, &Position::empty(4)).unwrap(), Player::Enforcer);
        assert_eq!(to_move(Player::Enforcer, &pos(4, &[1], &[0])).unwrap(), Player::Enforcer);
        assert_eq!(to_move(Player::Avoider, &pos(4, &[1], &[])).unwrap(), Player::Enforcer);
    }

    #[test]
    fn to_move_rejects_unbalanced_counts() {
        assert!(matches!(
            to_move(Player::Avoider, &pos(4, &[], &[0])),
            Err(GameError::InconsistentCounts { .. })
        ));
    }

    #[test]
    fn induced_game_shrinks_sets_and_thresholds() {
        let s = spec(3, &[(&[0, 1, 2], 3)]);
        match induced_game(&s, &pos(3, &[0], &[])) {
            Induced::Game(g) => {
                assert_eq!(g.spec.board_size, 2);
                assert_eq!(g.to_source, vec![VertexId(1), VertexId(2)]);
                assert_eq!(
                    g.spec.constraints,
                    vec![Constraint::new([VertexId(0), VertexId(1)], 2)]
                );
            }
            Induced::AlreadyLost => panic!("unexpected loss"),
        }
    }

    #[test]
    fn induced_game_drops_untriggerable_constraints() {
        let s = spec(3, &[(&[0, 1, 2], 3)]);
        match induced_game(&s, &pos(3, &[0, 1], &[2])) {
            Induced::Game(g) => {
                assert_eq!(g.spec.board_size, 0);
                assert!(g.spec.constraints.is_empty());
            }
            Induced::AlreadyLost => panic!("threshold 1 over empty set is not yet met"),
        }
    }

    #[test]
    fn induced_game_reports_met_threshold() {
        let s = spec(1, &[(&[0], 1)]);
        assert_eq!(induced_game(&s, &pos(1, &[0], &[])), Induced::AlreadyLost);
    }
}
