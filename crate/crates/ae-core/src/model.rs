//! Data model for subset Avoider-Enforcer games.
//!
//! A game is a board of densely numbered vertices plus a list of constraints
//! `(f, i_f)`: Avoider loses as soon as she holds `i_f` vertices of `f`.
//! Plain games are the special case `i_f = |f|`, where a whole losing set has
//! to be claimed. All types here are immutable values; the structural
//! relations consumed by the solver (constraint neighborhoods, vertex
//! dominance, subset-to-plain expansion) are pure functions.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// Dense 0-based index of a board vertex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Fixed-capacity bit set over board vertices.
///
/// Equality and hashing are exact over the full capacity, which makes claimed
/// sets directly usable as transposition-table keys.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    nbits: u32,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(nbits: u32) -> Self {
        let n_words = (nbits as usize).div_ceil(64);
        VertexSet { nbits, words: vec![0; n_words] }
    }

    pub fn from_vertices(nbits: u32, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut set = Self::empty(nbits);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> u32 {
        self.nbits
    }

    /// True when `v` is in the set; out-of-range vertices are never members.
    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.nbits && self.words[v.index() / 64] & (1 << (v.index() % 64)) != 0
    }

    /// Inserts `v`, returning whether it was newly added. Panics when `v` is
    /// outside the capacity.
    pub fn insert(&mut self, v: VertexId) -> bool {
        assert!(v.0 < self.nbits, "vertex {v} outside set capacity {}", self.nbits);
        let word = &mut self.words[v.index() / 64];
        let mask = 1u64 << (v.index() % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    /// Copy of the set with `v` added.
    pub fn with(&self, v: VertexId) -> Self {
        let mut copy = self.clone();
        copy.insert(v);
        copy
    }

    pub fn len(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            let base = (wi as u32) * 64;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some(VertexId(base + b))
                }
            })
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A losing pair `(f, i_f)`: Avoider loses upon claiming `threshold` members
/// of `members`. Members are stored sorted and deduplicated so that equal
/// constraints compare equal and serialize identically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Constraint {
    members: Vec<VertexId>,
    threshold: u32,
}

impl Constraint {
    pub fn new(members: impl IntoIterator<Item = VertexId>, threshold: u32) -> Self {
        let mut members: Vec<VertexId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Constraint { members, threshold }
    }

    /// Constraint that triggers only when every member is claimed.
    pub fn plain(members: impl IntoIterator<Item = VertexId>) -> Self {
        let mut c = Self::new(members, 0);
        c.threshold = c.members.len() as u32;
        c
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Number of members claimed in `set`.
    pub fn claimed_count(&self, set: &VertexSet) -> u32 {
        self.members.iter().filter(|&&v| set.contains(v)).count() as u32
    }

    pub fn is_plain(&self) -> bool {
        self.threshold as usize == self.members.len()
    }
}

/// Which side a player is on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Player {
    Avoider,
    Enforcer,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Avoider => Player::Enforcer,
            Player::Enforcer => Player::Avoider,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Avoider => f.write_str("Avoider"),
            Player::Enforcer => f.write_str("Enforcer"),
        }
    }
}

/// A game hypergraph: board size, losing constraints, and the player who
/// moves first unless a caller overrides it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameSpec {
    pub board_size: u32,
    pub constraints: Vec<Constraint>,
    pub default_first: Player,
}

impl GameSpec {
    pub fn new(board_size: u32, constraints: Vec<Constraint>, default_first: Player) -> Self {
        GameSpec { board_size, constraints, default_first }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.board_size).map(VertexId)
    }
}

/// Claimed vertices of a half-played game. The two claim sets are always
/// disjoint and share the same capacity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Position {
    pub(crate) avoider: VertexSet,
    pub(crate) enforcer: VertexSet,
}

impl Position {
    pub fn empty(board_size: u32) -> Self {
        Position { avoider: VertexSet::empty(board_size), enforcer: VertexSet::empty(board_size) }
    }

    pub fn from_sets(avoider: VertexSet, enforcer: VertexSet) -> Result<Self, GameError> {
        if avoider.capacity() != enforcer.capacity() {
            return Err(GameError::BoardMismatch {
                left: avoider.capacity(),
                right: enforcer.capacity(),
            });
        }
        if let Some(v) = avoider.iter().find(|&v| enforcer.contains(v)) {
            return Err(GameError::OverlappingClaims { vertex: v });
        }
        Ok(Position { avoider, enforcer })
    }

    pub fn avoider(&self) -> &VertexSet {
        &self.avoider
    }

    pub fn enforcer(&self) -> &VertexSet {
        &self.enforcer
    }

    pub fn is_claimed(&self, v: VertexId) -> bool {
        self.avoider.contains(v) || self.enforcer.contains(v)
    }

    pub fn claimed_count(&self) -> u32 {
        self.avoider.len() + self.enforcer.len()
    }

    pub fn board_size(&self) -> u32 {
        self.avoider.capacity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("vertex {vertex} out of range for board of {board_size}")]
    VertexOutOfRange { vertex: VertexId, board_size: u32 },
    #[error("vertex {vertex} is already claimed")]
    AlreadyClaimed { vertex: VertexId },
    #[error("claim counts (avoider {avoider}, enforcer {enforcer}) do not fit alternation with {first} first")]
    InconsistentCounts { avoider: u32, enforcer: u32, first: Player },
    #[error("claim sets overlap at vertex {vertex}")]
    OverlappingClaims { vertex: VertexId },
    #[error("board sizes differ: {left} vs {right}")]
    BoardMismatch { left: u32, right: u32 },
    #[error("expansion would generate at least {subsets} subsets, over the cap of {cap}")]
    ExpansionTooLarge { subsets: u128, cap: u64 },
}

/// A single problem found by [`validate_spec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defect {
    /// Index of the offending constraint, when one is to blame.
    pub constraint: Option<usize>,
    pub message: String,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constraint {
            Some(i) => write!(f, "constraint {i}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Checks the structural invariants of a spec. Defects are data, not errors:
/// an empty report means the spec is well formed.
pub fn validate_spec(spec: &GameSpec) -> Vec<Defect> {
    let mut defects = Vec::new();
    for (i, c) in spec.constraints.iter().enumerate() {
        let defect = |message: String| Defect { constraint: Some(i), message };
        if c.members().is_empty() {
            defects.push(defect("set is empty".to_string()));
            continue;
        }
        for &v in c.members() {
            if v.0 >= spec.board_size {
                defects.push(defect(format!("vertex {v} out of range")));
            }
        }
        if c.threshold() == 0 {
            defects.push(defect("threshold 0 is below 1".to_string()));
        } else if c.threshold() as usize > c.members().len() {
            defects.push(defect(format!(
                "threshold {} > |f| = {}",
                c.threshold(),
                c.members().len()
            )));
        }
    }
    defects
}

/// The constraints whose member set contains `v`, in spec order.
pub fn neighborhood(spec: &GameSpec, v: VertexId) -> Result<Vec<&Constraint>, GameError> {
    if v.0 >= spec.board_size {
        return Err(GameError::VertexOutOfRange { vertex: v, board_size: spec.board_size });
    }
    Ok(spec.constraints.iter().filter(|c| c.contains(v)).collect())
}

/// True when every constraint through `a` is witnessed by a constraint
/// through `b` with a subset of its members and a threshold no larger.
///
/// Both players can prefer claiming a dominating vertex over a dominated one
/// without changing the game value, which is what licenses the solver's move
/// filtering. The relation is a preorder: reflexive and transitive.
pub fn dominates(spec: &GameSpec, a: VertexId, b: VertexId) -> Result<bool, GameError> {
    let la = neighborhood(spec, a)?;
    let lb = neighborhood(spec, b)?;
    Ok(la.iter().all(|f| {
        lb.iter().any(|g| {
            g.threshold() <= f.threshold() && is_sorted_subset(g.members(), f.members())
        })
    }))
}

/// Two-pointer subset test over ascending slices.
pub(crate) fn is_sorted_subset(sub: &[VertexId], sup: &[VertexId]) -> bool {
    let mut it = sup.iter();
    'outer: for x in sub {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Default ceiling on the number of subsets [`expand_to_plain`] may emit.
pub const DEFAULT_EXPANSION_CAP: u64 = 100_000;

/// Rewrites every constraint `(f, i_f)` as the family of all size-`i_f`
/// subsets of `f`, producing a plain game with the same winner. The subset
/// count grows binomially, so the expansion refuses to run past `cap`.
pub fn expand_to_plain(spec: &GameSpec, cap: u64) -> Result<GameSpec, GameError> {
    let mut subsets: u128 = 0;
    for c in &spec.constraints {
        subsets = subsets
            .saturating_add(binomial(c.members().len() as u64, c.threshold() as u64));
    }
    if subsets > cap as u128 {
        return Err(GameError::ExpansionTooLarge { subsets, cap });
    }

    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut out = Vec::new();
    for c in &spec.constraints {
        if c.threshold() == 0 || c.threshold() as usize > c.members().len() {
            continue;
        }
        for combo in c.members().iter().copied().combinations(c.threshold() as usize) {
            if seen.insert(combo.clone()) {
                out.push(Constraint::plain(combo));
            }
        }
    }
    Ok(GameSpec::new(spec.board_size, out, spec.default_first))
}

/// Binomial coefficient, saturating at `u128::MAX`.
fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        let Some(grown) = result.checked_mul((n - k + i) as u128) else {
            return u128::MAX;
        };
        result = grown / i as u128;
    }
    result
}
