//! Exact perfect-play evaluation.
//!
//! Outcomes are binary (someone always wins), so the search is win/loss
//! minimax over canonical claimed-set positions with a transposition table.
//! Two optional move filters narrow the branching without changing the game
//! value:
//!
//! * dominance pruning — at each node, a move `b` is skipped when some other
//!   playable vertex `a` dominates it in the residual game (see
//!   [`crate::model::dominates`]); mutually dominating vertices keep only
//!   their lowest index. Either player can adopt the preference, so the
//!   filter applies to every node.
//! * an order restriction — an acyclic "u before v" relation; a vertex is
//!   playable only once all its predecessors are claimed. Unlike pruning this
//!   changes the game being analyzed, which some constructions rely on.
//!
//! When both are active, dominance is evaluated among the currently playable
//! vertices only: a blocked vertex cannot be preferred over a playable one.

use std::collections::HashMap;

use thiserror::Error;

use crate::engine::{self, GameStatus};
use crate::model::{self, GameError, GameSpec, Player, Position, VertexId};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Skip dominated moves (on by default; never changes the winner).
    pub pruning: bool,
    /// Pairs `(u, v)` meaning `u` must be claimed before `v`.
    pub order_restriction: Option<Vec<(VertexId, VertexId)>>,
    /// Abort with an error once this many positions have been expanded.
    pub node_limit: Option<u64>,
    /// Also extract one optimal line of play.
    pub collect_pv: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { pruning: true, order_restriction: None, node_limit: None, collect_pv: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub winner: Player,
    /// Positions evaluated (transposition-table misses).
    pub nodes_expanded: u64,
    pub table_hits: u64,
    pub principal_variation: Option<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("node limit of {limit} exhausted")]
    NodeLimitExceeded { limit: u64 },
    #[error("order restriction contains a cycle")]
    CyclicOrderRestriction,
    #[error("order restriction names vertex {vertex} outside the board of {board_size}")]
    OrderVertexOutOfRange { vertex: VertexId, board_size: u32 },
    #[error("the position is already decided")]
    GameFinished,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Winner under optimal play from the empty board.
pub fn solve(spec: &GameSpec, first: Player, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    solve_position(spec, first, &Position::empty(spec.board_size), opts)
}

/// Winner under optimal play from a half-played position. The position must
/// use the spec's board and have claim counts consistent with `first` moving
/// first.
pub fn solve_position(
    spec: &GameSpec,
    first: Player,
    pos: &Position,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    if pos.board_size() != spec.board_size {
        return Err(GameError::BoardMismatch { left: pos.board_size(), right: spec.board_size }.into());
    }
    engine::to_move(first, pos)?;
    let mut search = Search::new(spec, first, opts)?;
    let winner = search.winner_of(pos)?;
    let principal_variation =
        if opts.collect_pv { Some(search.principal_variation(pos)?) } else { None };
    Ok(SolveResult {
        winner,
        nodes_expanded: search.nodes,
        table_hits: search.hits,
        principal_variation,
    })
}

/// Moves worth searching from `pos`: legal moves, minus those blocked by the
/// order restriction, minus dominated ones when pruning is on. Without any
/// filtering this is exactly [`engine::legal_moves`] in index order.
pub fn candidate_moves(spec: &GameSpec, pos: &Position, opts: &SolveOptions) -> Vec<VertexId> {
    let preds = opts
        .order_restriction
        .as_deref()
        .map(|pairs| predecessor_lists(spec.board_size, pairs));
    let allowed = playable_moves(spec, pos, preds.as_deref());
    if opts.pruning {
        prune_dominated(spec, pos, allowed)
    } else {
        allowed
    }
}

/// A move that keeps the mover's game value, or the lowest-index legal move
/// when every move loses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BestMove {
    Winning(VertexId),
    /// Every move loses; the carried vertex is the lowest-index fallback.
    Losing(VertexId),
}

impl BestMove {
    pub fn vertex(self) -> VertexId {
        match self {
            BestMove::Winning(v) | BestMove::Losing(v) => v,
        }
    }
}

/// Lowest-index candidate move that preserves the mover's game value.
pub fn best_move(
    spec: &GameSpec,
    pos: &Position,
    first: Player,
    opts: &SolveOptions,
) -> Result<BestMove, SolveError> {
    if engine::status(spec, pos) != GameStatus::Ongoing {
        return Err(SolveError::GameFinished);
    }
    let mover = engine::to_move(first, pos)?;
    let mut search = Search::new(spec, first, opts)?;
    for v in search.candidates(pos) {
        let child = engine::apply_move(spec, pos, v, mover)?;
        if search.winner_of(&child)? == mover {
            return Ok(BestMove::Winning(v));
        }
    }
    let fallback = engine::legal_moves(spec, pos)[0];
    Ok(BestMove::Losing(fallback))
}

struct Search<'a> {
    spec: &'a GameSpec,
    first: Player,
    pruning: bool,
    preds: Option<Vec<Vec<VertexId>>>,
    node_limit: Option<u64>,
    // Keyed by claimed sets alone: the mover is parity-determined, and the
    // table never outlives its (spec, first) pair.
    memo: HashMap<Position, Player>,
    nodes: u64,
    hits: u64,
}

impl<'a> Search<'a> {
    fn new(spec: &'a GameSpec, first: Player, opts: &SolveOptions) -> Result<Self, SolveError> {
        let preds = match opts.order_restriction.as_deref() {
            Some(pairs) => {
                validate_order(spec.board_size, pairs)?;
                Some(predecessor_lists(spec.board_size, pairs))
            }
            None => None,
        };
        Ok(Search {
            spec,
            first,
            pruning: opts.pruning,
            preds,
            node_limit: opts.node_limit,
            memo: HashMap::new(),
            nodes: 0,
            hits: 0,
        })
    }

    fn mover(&self, pos: &Position) -> Player {
        if pos.claimed_count().is_multiple_of(2) {
            self.first
        } else {
            self.first.opponent()
        }
    }

    fn candidates(&self, pos: &Position) -> Vec<VertexId> {
        let allowed = playable_moves(self.spec, pos, self.preds.as_deref());
        if self.pruning {
            prune_dominated(self.spec, pos, allowed)
        } else {
            allowed
        }
    }

    fn winner_of(&mut self, pos: &Position) -> Result<Player, SolveError> {
        if let Some(&w) = self.memo.get(pos) {
            self.hits += 1;
            return Ok(w);
        }
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return Err(SolveError::NodeLimitExceeded { limit });
            }
        }
        let winner = match engine::status(self.spec, pos) {
            GameStatus::EnforcerWins => Player::Enforcer,
            GameStatus::AvoiderWins => Player::Avoider,
            GameStatus::Ongoing => {
                let mover = self.mover(pos);
                let mut winner = mover.opponent();
                for v in self.candidates(pos) {
                    let child = engine::apply_move(self.spec, pos, v, mover)?;
                    if self.winner_of(&child)? == mover {
                        winner = mover;
                        break;
                    }
                }
                winner
            }
        };
        self.memo.insert(pos.clone(), winner);
        Ok(winner)
    }

    /// One optimal line from `start`, following the lowest-index candidate
    /// that preserves the solved value at each step.
    fn principal_variation(&mut self, start: &Position) -> Result<Vec<VertexId>, SolveError> {
        let mut pv = Vec::new();
        let mut pos = start.clone();
        while engine::status(self.spec, &pos) == GameStatus::Ongoing {
            let mover = self.mover(&pos);
            let winner = self.winner_of(&pos)?;
            let mut step = None;
            for v in self.candidates(&pos) {
                let child = engine::apply_move(self.spec, &pos, v, mover)?;
                if winner != mover || self.winner_of(&child)? == mover {
                    step = Some((v, child));
                    break;
                }
            }
            match step {
                Some((v, child)) => {
                    pv.push(v);
                    pos = child;
                }
                None => break,
            }
        }
        Ok(pv)
    }
}

/// Legal moves whose required predecessors (if any) are all claimed.
fn playable_moves(
    spec: &GameSpec,
    pos: &Position,
    preds: Option<&[Vec<VertexId>]>,
) -> Vec<VertexId> {
    let legal = engine::legal_moves(spec, pos);
    match preds {
        None => legal,
        Some(preds) => legal
            .into_iter()
            .filter(|v| preds[v.index()].iter().all(|&u| pos.is_claimed(u)))
            .collect(),
    }
}

/// Drops every playable move that is strictly dominated by another playable
/// move in the residual game, keeping only the lowest index of each mutually
/// dominating class. Dominance over the residual game is what makes the
/// filter valid at interior nodes.
fn prune_dominated(spec: &GameSpec, pos: &Position, allowed: Vec<VertexId>) -> Vec<VertexId> {
    if allowed.len() < 2 {
        return allowed;
    }

    // Residual constraints: unclaimed members, thresholds lowered by
    // Avoider's claims. Source vertex ids are kept; re-indexing would not
    // change the relation.
    let mut alive: Vec<(Vec<VertexId>, u32)> = Vec::with_capacity(spec.constraints.len());
    for c in &spec.constraints {
        let claimed = c.claimed_count(pos.avoider());
        if claimed >= c.threshold() {
            return allowed; // already lost; the status check owns this case
        }
        let reduced = c.threshold() - claimed;
        let members: Vec<VertexId> =
            c.members().iter().copied().filter(|&v| !pos.is_claimed(v)).collect();
        if (reduced as usize) <= members.len() {
            alive.push((members, reduced));
        }
    }

    // Constraint lists per allowed vertex.
    let mut slot = vec![usize::MAX; spec.board_size as usize];
    for (k, &v) in allowed.iter().enumerate() {
        slot[v.index()] = k;
    }
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); allowed.len()];
    for (ci, (members, _)) in alive.iter().enumerate() {
        for &m in members {
            if slot[m.index()] != usize::MAX {
                lists[slot[m.index()]].push(ci);
            }
        }
    }

    // prefers[i][j]: every constraint through i has a tighter-or-equal
    // witness through j, so claiming i first is at least as good.
    let prefers = |i: usize, j: usize| -> bool {
        lists[i].iter().all(|&fi| {
            lists[j].iter().any(|&gi| {
                alive[gi].1 <= alive[fi].1 && model::is_sorted_subset(&alive[gi].0, &alive[fi].0)
            })
        })
    };

    let n = allowed.len();
    let mut dom = vec![vec![false; n]; n];
    for (i, row) in dom.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = prefers(i, j);
            }
        }
    }

    let kept: Vec<VertexId> = (0..n)
        .filter(|&j| !(0..n).any(|i| i != j && dom[i][j] && (!dom[j][i] || i < j)))
        .map(|j| allowed[j])
        .collect();
    if kept.is_empty() {
        allowed
    } else {
        kept
    }
}

fn validate_order(board_size: u32, pairs: &[(VertexId, VertexId)]) -> Result<(), SolveError> {
    for &(u, v) in pairs {
        for w in [u, v] {
            if w.0 >= board_size {
                return Err(SolveError::OrderVertexOutOfRange { vertex: w, board_size });
            }
        }
    }
    // Kahn's algorithm over the "u before v" digraph.
    let n = board_size as usize;
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v) in pairs {
        out[u.index()].push(v.index());
        indegree[v.index()] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop() {
        seen += 1;
        for &j in &out[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push(j);
            }
        }
    }
    if seen == n {
        Ok(())
    } else {
        Err(SolveError::CyclicOrderRestriction)
    }
}

fn predecessor_lists(board_size: u32, pairs: &[(VertexId, VertexId)]) -> Vec<Vec<VertexId>> {
    let mut preds = vec![Vec::new(); board_size as usize];
    for &(u, v) in pairs {
        if v.0 < board_size {
            preds[v.index()].push(u);
        }
    }
    preds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraint, VertexSet};

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

    fn single_box() -> GameSpec {
        spec(4, &[(&[0, 1, 2], 3), (&[0, 1, 3], 3), (&[0, 2, 3], 3), (&[1, 2, 3], 3)])
    }

    #[test]
    fn single_box_is_an_avoider_win() {
        let r = solve(&single_box(), Player::Enforcer, &SolveOptions::default()).unwrap();
        assert_eq!(r.winner, Player::Avoider);
        assert!(r.nodes_expanded >= 1);
    }

    #[test]
    fn forced_singleton_is_an_enforcer_win() {
        let s = spec(1, &[(&[0], 1)]);
        let r = solve(&s, Player::Avoider, &SolveOptions::default()).unwrap();
        assert_eq!(r.winner, Player::Enforcer);
    }

    #[test]
    fn candidates_in_cardinality_box_collapse_to_lowest_vertex() {
        let s = spec(4, &[(&[0, 1, 2, 3], 3)]);
        let c = candidate_moves(&s, &Position::empty(4), &SolveOptions::default());
        assert_eq!(c, vec![VertexId(0)]);
    }

    #[test]
    fn mutual_domination_keeps_the_lowest_index() {
        let s = spec(2, &[(&[0, 1], 2)]);
        let c = candidate_moves(&s, &Position::empty(2), &SolveOptions::default());
        assert_eq!(c, vec![VertexId(0)]);
    }

    #[test]
    fn unconstrained_vertex_dominates_constrained_ones() {
        let s = spec(3, &[(&[0, 1], 2)]);
        let c = candidate_moves(&s, &Position::empty(3), &SolveOptions::default());
        assert_eq!(c, vec![VertexId(2)]);
    }

    #[test]
    fn pruning_off_returns_legal_moves_in_index_order() {
        let s = spec(4, &[(&[0, 1, 2, 3], 3)]);
        let opts = SolveOptions { pruning: false, ..Default::default() };
        let c = candidate_moves(&s, &Position::empty(4), &opts);
        assert_eq!(c, (0..4).map(VertexId).collect::<Vec<_>>());
    }

    #[test]
    fn order_restriction_blocks_until_predecessor_claimed() {
        let s = spec(3, &[]);
        let opts = SolveOptions {
            pruning: false,
            order_restriction: Some(vec![(VertexId(0), VertexId(1))]),
            ..Default::default()
        };
        assert_eq!(
            candidate_moves(&s, &Position::empty(3), &opts),
            vec![VertexId(0), VertexId(2)]
        );
        assert_eq!(
            candidate_moves(&s, &pos(3, &[], &[0]), &opts),
            vec![VertexId(1), VertexId(2)]
        );
    }

    #[test]
    fn blocked_vertices_cannot_act_as_dominators() {
        // Vertex 0 is constraint-free and would dominate vertex 1 outright,
        // but the restriction forbids playing 0 first. The only playable
        // vertex must survive the dominance filter.
        let s = spec(2, &[(&[1], 1)]);
        let opts = SolveOptions {
            order_restriction: Some(vec![(VertexId(1), VertexId(0))]),
            ..Default::default()
        };
        assert_eq!(candidate_moves(&s, &Position::empty(2), &opts), vec![VertexId(1)]);
        // Forced to open on the losing singleton, Avoider loses a game she
        // would win unrestricted.
        assert_eq!(solve(&s, Player::Avoider, &opts).unwrap().winner, Player::Enforcer);
        assert_eq!(
            solve(&s, Player::Avoider, &SolveOptions::default()).unwrap().winner,
            Player::Avoider
        );
    }

    #[test]
    fn cyclic_order_restriction_is_rejected() {
        let s = spec(2, &[]);
        let opts = SolveOptions {
            order_restriction: Some(vec![
                (VertexId(0), VertexId(1)),
                (VertexId(1), VertexId(0)),
            ]),
            ..Default::default()
        };
        assert_eq!(
            solve(&s, Player::Avoider, &opts),
            Err(SolveError::CyclicOrderRestriction)
        );
    }

    #[test]
    fn node_limit_yields_an_explicit_error() {
        let s = single_box();
        let opts = SolveOptions { node_limit: Some(2), ..Default::default() };
        assert_eq!(
            solve(&s, Player::Enforcer, &opts),
            Err(SolveError::NodeLimitExceeded { limit: 2 })
        );
    }

    #[test]
    fn best_move_reports_all_losing_with_fallback() {
        let s = spec(1, &[(&[0], 1)]);
        let b = best_move(&s, &Position::empty(1), Player::Avoider, &SolveOptions::default());
        assert_eq!(b.unwrap(), BestMove::Losing(VertexId(0)));
    }

    #[test]
    fn best_move_on_free_vertex_wins() {
        let s = spec(1, &[]);
        let b = best_move(&s, &Position::empty(1), Player::Avoider, &SolveOptions::default());
        assert_eq!(b.unwrap(), BestMove::Winning(VertexId(0)));
    }

    #[test]
    fn best_move_replies_within_the_undominated_set() {
        // Cardinality box, Enforcer already on vertex 0: the three replies
        // are interchangeable and the lowest one is chosen.
        let s = spec(4, &[(&[0, 1, 2, 3], 3)]);
        let b = best_move(&s, &pos(4, &[], &[0]), Player::Enforcer, &SolveOptions::default());
        assert_eq!(b.unwrap(), BestMove::Winning(VertexId(1)));
    }

    #[test]
    fn solve_position_checks_consistency() {
        let s = spec(3, &[]);
        let bad = pos(3, &[], &[0]);
        assert!(matches!(
            solve_position(&s, Player::Avoider, &bad, &SolveOptions::default()),
            Err(SolveError::Game(GameError::InconsistentCounts { .. }))
        ));
    }

    #[test]
    fn principal_variation_reaches_a_terminal_position() {
        let s = spec(1, &[(&[0], 1)]);
        let opts = SolveOptions { collect_pv: true, ..Default::default() };
        let r = solve(&s, Player::Avoider, &opts).unwrap();
        assert_eq!(r.principal_variation, Some(vec![VertexId(0)]));
    }
}
