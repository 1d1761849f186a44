//! 3SAT instances and their translation into Avoider-Enforcer games.
//!
//! Each variable becomes a four-vertex box `a_i, s_i, x_i, ~x_i` whose four
//! internal triples are losing sets, so neither player can afford to fall
//! behind inside a box. Each clause adds one losing set holding, for every
//! variable in the clause, that box's `s` vertex and the vertex of the
//! negated literal. Avoider then wins the game exactly when the formula is
//! satisfiable. When Avoider is to move first, one extra vertex outside every
//! losing set absorbs her opening move.
//!
//! Besides the construction itself this module carries the two certificates
//! that make the translation testable end to end: a concrete Avoider strategy
//! compiled from a satisfying assignment, and assignment extraction from a
//! finished game.

use std::time::{Duration, Instant};

use std::collections::HashSet;

use thiserror::Error;

use crate::model::{Constraint, GameSpec, Player, Position, VertexId, VertexSet};
use crate::oracle::{self, OracleError};
use crate::solver::{self, SolveError, SolveOptions};

/// A possibly negated propositional variable, 0-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Self {
        Literal { var, positive: true }
    }

    pub fn negative(var: u32) -> Self {
        Literal { var, positive: false }
    }

    pub fn negated(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // 1-based, matching DIMACS numbering.
        if self.positive {
            write!(f, "x{}", self.var + 1)
        } else {
            write!(f, "~x{}", self.var + 1)
        }
    }
}

/// A CNF formula: clause lists over `num_vars` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Self {
        Cnf { num_vars, clauses }
    }
}

/// A total truth assignment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Assignment encoded in `mask` with variable 0 as the least significant
    /// bit.
    pub fn from_mask(num_vars: u32, mask: u64) -> Self {
        Assignment { values: (0..num_vars).map(|v| (mask >> v) & 1 == 1).collect() }
    }

    pub fn len(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize]
    }

    pub fn satisfies(&self, cnf: &Cnf) -> bool {
        cnf.clauses
            .iter()
            .all(|clause| clause.iter().any(|lit| self.value(lit.var) == lit.positive))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("clause {clause}: literal {literal} exceeds the declared {num_vars} variables")]
    VariableOutOfRange { clause: usize, literal: Literal, num_vars: u32 },
    #[error("clause {clause} has {distinct} distinct variables; at most 3 are supported")]
    ClauseTooWide { clause: usize, distinct: usize },
}

/// A formula in the shape the construction expects: clauses are duplicate-free
/// sets of one to three literals over distinct variables, with no repeated
/// clause and no tautology.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalCnf(Cnf);

impl NormalCnf {
    pub fn cnf(&self) -> &Cnf {
        &self.0
    }

    pub fn num_vars(&self) -> u32 {
        self.0.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.0.clauses
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Normalized {
    /// The input contains an empty clause; no assignment can satisfy it.
    TriviallyUnsat,
    Ready(NormalCnf),
}

/// Cleans a raw formula: duplicate literals collapse, tautological clauses
/// drop, duplicate clauses drop, and an empty clause short-circuits the whole
/// formula. Clauses wider than three distinct variables are rejected.
pub fn normalize_cnf(cnf: &Cnf) -> Result<Normalized, CnfError> {
    let mut seen: HashSet<Vec<Literal>> = HashSet::new();
    let mut clauses = Vec::new();
    'clauses: for (ci, clause) in cnf.clauses.iter().enumerate() {
        for &lit in clause {
            if lit.var >= cnf.num_vars {
                return Err(CnfError::VariableOutOfRange {
                    clause: ci,
                    literal: lit,
                    num_vars: cnf.num_vars,
                });
            }
        }
        let mut lits = clause.clone();
        lits.sort_unstable();
        lits.dedup();
        if lits.is_empty() {
            return Ok(Normalized::TriviallyUnsat);
        }
        for pair in lits.windows(2) {
            if pair[0].var == pair[1].var {
                continue 'clauses; // tautology: both polarities present
            }
        }
        if lits.len() > 3 {
            return Err(CnfError::ClauseTooWide { clause: ci, distinct: lits.len() });
        }
        if seen.insert(lits.clone()) {
            clauses.push(lits);
        }
    }
    Ok(Normalized::Ready(NormalCnf(Cnf::new(cnf.num_vars, clauses))))
}

/// Layout of a reduction's board: variable `i` owns vertices `4i..4i+4` in
/// the order `a, s, x, ~x`; the optional extra vertex for an Avoider-first
/// game sits at the end.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VarMap {
    num_vars: u32,
    dummy: Option<VertexId>,
}

impl VarMap {
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn dummy(&self) -> Option<VertexId> {
        self.dummy
    }

    pub fn board_size(&self) -> u32 {
        4 * self.num_vars + u32::from(self.dummy.is_some())
    }

    pub fn a_vertex(&self, var: u32) -> VertexId {
        VertexId(4 * var)
    }

    pub fn s_vertex(&self, var: u32) -> VertexId {
        VertexId(4 * var + 1)
    }

    pub fn pos_vertex(&self, var: u32) -> VertexId {
        VertexId(4 * var + 2)
    }

    pub fn neg_vertex(&self, var: u32) -> VertexId {
        VertexId(4 * var + 3)
    }

    pub fn box_vertices(&self, var: u32) -> [VertexId; 4] {
        [self.a_vertex(var), self.s_vertex(var), self.pos_vertex(var), self.neg_vertex(var)]
    }

    pub fn literal_vertex(&self, lit: Literal) -> VertexId {
        if lit.positive {
            self.pos_vertex(lit.var)
        } else {
            self.neg_vertex(lit.var)
        }
    }

    pub fn negation_vertex(&self, lit: Literal) -> VertexId {
        self.literal_vertex(lit.negated())
    }

    /// Box owning `v`, or `None` for the dummy vertex or anything off-board.
    pub fn box_of(&self, v: VertexId) -> Option<u32> {
        (v.0 < 4 * self.num_vars).then_some(v.0 / 4)
    }

    /// Display alias: `a1`, `s1`, `x1`, `~x1`, ... or `dummy`.
    pub fn display_name(&self, v: VertexId) -> String {
        if self.dummy == Some(v) {
            return "dummy".to_string();
        }
        match self.box_of(v) {
            Some(var) => {
                let slot = v.0 % 4;
                let tag = ["a", "s", "x", "~x"][slot as usize];
                format!("{tag}{}", var + 1)
            }
            None => v.to_string(),
        }
    }

    /// Inverse of [`Self::display_name`], for interactive input.
    pub fn parse_name(&self, name: &str) -> Option<VertexId> {
        let name = name.trim();
        if name == "dummy" {
            return self.dummy;
        }
        let (slot, rest) = if let Some(r) = name.strip_prefix("~x") {
            (3, r)
        } else if let Some(r) = name.strip_prefix('a') {
            (0, r)
        } else if let Some(r) = name.strip_prefix('s') {
            (1, r)
        } else {
            (2, name.strip_prefix('x')?)
        };
        let var: u32 = rest.parse().ok()?;
        (1..=self.num_vars).contains(&var).then(|| VertexId(4 * (var - 1) + slot))
    }

    /// Recognizes a spec produced by [`build_reduction`] from its shape: the
    /// leading constraints must be exactly the box triples in canonical
    /// order, and every remaining constraint must pair an `s` vertex with one
    /// literal vertex per participating box.
    pub fn detect(spec: &GameSpec) -> Option<VarMap> {
        let (num_vars, dummy) = match spec.board_size % 4 {
            0 => (spec.board_size / 4, None),
            1 => (spec.board_size / 4, Some(VertexId(spec.board_size - 1))),
            _ => return None,
        };
        if num_vars == 0 || spec.constraints.len() < (4 * num_vars) as usize {
            return None;
        }
        let map = VarMap { num_vars, dummy };
        let mut expected = Vec::with_capacity((4 * num_vars) as usize);
        for var in 0..num_vars {
            let [a, s, x, nx] = map.box_vertices(var);
            for triple in [[a, s, x], [a, s, nx], [a, x, nx], [s, x, nx]] {
                expected.push(Constraint::plain(triple));
            }
        }
        if spec.constraints[..expected.len()] != expected[..] {
            return None;
        }
        for c in &spec.constraints[expected.len()..] {
            if !c.is_plain() || c.members().len() % 2 != 0 || c.members().len() > 6 {
                return None;
            }
            let mut vars_seen = HashSet::new();
            for pair in c.members().chunks(2) {
                let var = map.box_of(pair[0])?;
                let is_clause_shape = pair[0] == map.s_vertex(var)
                    && (pair[1] == map.pos_vertex(var) || pair[1] == map.neg_vertex(var));
                if !is_clause_shape || !vars_seen.insert(var) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

/// Builds the game for a normalized formula. The board has `4n` vertices
/// (`4n + 1` when Avoider moves first), `4n` box triples, and one constraint
/// per clause of size twice the clause width. Runs in time linear in the
/// formula size.
pub fn build_reduction(cnf: &NormalCnf, first: Player) -> (GameSpec, VarMap) {
    let num_vars = cnf.num_vars();
    let dummy = (first == Player::Avoider).then(|| VertexId(4 * num_vars));
    let map = VarMap { num_vars, dummy };

    let mut constraints = Vec::with_capacity((4 * num_vars) as usize + cnf.clauses().len());
    for var in 0..num_vars {
        let [a, s, x, nx] = map.box_vertices(var);
        for triple in [[a, s, x], [a, s, nx], [a, x, nx], [s, x, nx]] {
            constraints.push(Constraint::plain(triple));
        }
    }
    for clause in cnf.clauses() {
        let mut members = Vec::with_capacity(clause.len() * 2);
        for &lit in clause {
            members.push(map.s_vertex(lit.var));
            members.push(map.negation_vertex(lit));
        }
        constraints.push(Constraint::plain(members));
    }

    (GameSpec::new(map.board_size(), constraints, first), map)
}

/// The "u before v" pairs under which each box is claimed in the order
/// `a`, then the literals, then `s`. Restricting play this way never changes
/// the winner, and it is the regime in which assignment extraction is exact.
pub fn box_order_restriction(map: &VarMap) -> Vec<(VertexId, VertexId)> {
    let mut pairs = Vec::with_capacity(4 * map.num_vars() as usize);
    for var in 0..map.num_vars() {
        let [a, s, x, nx] = map.box_vertices(var);
        pairs.push((a, x));
        pairs.push((a, nx));
        pairs.push((x, s));
        pairs.push((nx, s));
    }
    pairs
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("assignment covers {assignment} variables but the layout has {layout}")]
    AssignmentMismatch { assignment: u32, layout: u32 },
    #[error("no vertex is available to the strategy; the position is outside its play")]
    NoSafeMove,
}

/// Avoider's scripted play for a satisfiable formula: answer in the box the
/// opponent just played in, preferring the vertex of the literal the
/// assignment makes true, then `a`, then whatever remains. She never claims a
/// third vertex in any box.
#[derive(Clone, Debug)]
pub struct AvoiderStrategy {
    assignment: Assignment,
    map: VarMap,
}

impl AvoiderStrategy {
    pub fn new(assignment: Assignment, map: VarMap) -> Result<Self, StrategyError> {
        if assignment.len() != map.num_vars() {
            return Err(StrategyError::AssignmentMismatch {
                assignment: assignment.len(),
                layout: map.num_vars(),
            });
        }
        Ok(AvoiderStrategy { assignment, map })
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// Avoider's reply. `enforcer_last` is the opponent's latest claim, or
    /// `None` when she opens the game (she then takes the dummy vertex). A
    /// reply in the opponent's box is preferred; when that box is full, or
    /// the opponent took the dummy, she makes a free move into the lowest
    /// untouched box instead.
    pub fn reply(
        &self,
        pos: &Position,
        enforcer_last: Option<VertexId>,
    ) -> Result<VertexId, StrategyError> {
        match enforcer_last {
            Some(last) => {
                if let Some(var) = self.map.box_of(last) {
                    if self.claims_in_box(pos, var) < 2 {
                        if let Some(v) = self.preference(pos, var) {
                            return Ok(v);
                        }
                    }
                }
                self.free_move(pos)
            }
            None => match self.map.dummy().filter(|&d| !pos.is_claimed(d)) {
                Some(d) => Ok(d),
                None => self.free_move(pos),
            },
        }
    }

    fn preference(&self, pos: &Position, var: u32) -> Option<VertexId> {
        let (true_lit, false_lit) = if self.assignment.value(var) {
            (self.map.pos_vertex(var), self.map.neg_vertex(var))
        } else {
            (self.map.neg_vertex(var), self.map.pos_vertex(var))
        };
        [true_lit, self.map.a_vertex(var), self.map.s_vertex(var), false_lit]
            .into_iter()
            .find(|&v| !pos.is_claimed(v))
    }

    fn claims_in_box(&self, pos: &Position, var: u32) -> u32 {
        self.map
            .box_vertices(var)
            .into_iter()
            .filter(|&v| pos.avoider().contains(v))
            .count() as u32
    }

    fn free_move(&self, pos: &Position) -> Result<VertexId, StrategyError> {
        for var in 0..self.map.num_vars() {
            if self.map.box_vertices(var).into_iter().all(|v| !pos.is_claimed(v)) {
                return Ok(self.map.a_vertex(var));
            }
        }
        for var in 0..self.map.num_vars() {
            if self.claims_in_box(pos, var) < 2 {
                if let Some(v) = self.preference(pos, var) {
                    return Ok(v);
                }
            }
        }
        self.map
            .dummy()
            .filter(|&d| !pos.is_claimed(d))
            .ok_or(StrategyError::NoSafeMove)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("avoider claimed {} of x{v} and ~x{v}", if *.both { "both" } else { "neither" }, v = var + 1)]
    AmbiguousVariable { var: u32, both: bool },
}

/// Reads the assignment off a finished game: variable `i` is true exactly
/// when Avoider holds the `x_i` vertex. Requires that she claimed exactly one
/// literal vertex per box, which ordered play guarantees.
pub fn extract_assignment(
    map: &VarMap,
    final_avoider: &VertexSet,
) -> Result<Assignment, ExtractError> {
    let mut values = Vec::with_capacity(map.num_vars() as usize);
    for var in 0..map.num_vars() {
        let pos = final_avoider.contains(map.pos_vertex(var));
        let neg = final_avoider.contains(map.neg_vertex(var));
        if pos == neg {
            return Err(ExtractError::AmbiguousVariable { var, both: pos });
        }
        values.push(pos);
    }
    Ok(Assignment::new(values))
}

/// One end-to-end check of a formula against its game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub sat: bool,
    pub winner: Player,
    /// Whether satisfiability and the game winner agree.
    pub consistent: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Decides the formula twice — by exhaustive assignment search and by solving
/// the built game with Enforcer first — and reports whether the two verdicts
/// agree. A formula with an empty clause is unsatisfiable outright and maps
/// to a game Avoider has lost before her first move, so no search runs.
pub fn verify_instance(cnf: &Cnf, node_limit: Option<u64>) -> Result<VerifyReport, VerifyError> {
    let started = Instant::now();
    match normalize_cnf(cnf)? {
        Normalized::TriviallyUnsat => Ok(VerifyReport {
            sat: false,
            winner: Player::Enforcer,
            consistent: true,
            nodes: 0,
            elapsed: started.elapsed(),
        }),
        Normalized::Ready(ncnf) => {
            let sat = oracle::brute_force_sat(cnf)?.is_some();
            let (spec, _) = build_reduction(&ncnf, Player::Enforcer);
            let opts = SolveOptions { node_limit, ..Default::default() };
            let result = solver::solve(&spec, Player::Enforcer, &opts)?;
            Ok(VerifyReport {
                sat,
                winner: result.winner,
                consistent: sat == (result.winner == Player::Avoider),
                nodes: result.nodes_expanded,
                elapsed: started.elapsed(),
            })
        }
    }
}
