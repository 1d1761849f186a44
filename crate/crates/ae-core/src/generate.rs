//! Seeded random instances for the property suites and the CLI generator.
//! Everything here is reproducible byte for byte from the seed.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thiserror::Error;

use crate::model::{Constraint, GameSpec, Player, VertexId};
use crate::reduction::{Cnf, Literal};

#[derive(Clone, Copy, Debug)]
pub struct SpecParams {
    pub vertices: u32,
    pub sets: u32,
    pub max_size: u32,
    /// Draw thresholds uniformly from `1..=size` instead of pinning them to
    /// the set size.
    pub subset_thresholds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("max set size {max_size} exceeds the board of {vertices}")]
    MaxSizeExceedsBoard { max_size: u32, vertices: u32 },
    #[error("{0} must be positive")]
    ZeroParameter(&'static str),
}

/// Random game spec, reproducible from the seed.
pub fn random_spec(params: &SpecParams, seed: u64) -> Result<GameSpec, GenError> {
    if params.vertices == 0 {
        return Err(GenError::ZeroParameter("vertices"));
    }
    if params.max_size == 0 {
        return Err(GenError::ZeroParameter("max-size"));
    }
    if params.max_size > params.vertices {
        return Err(GenError::MaxSizeExceedsBoard {
            max_size: params.max_size,
            vertices: params.vertices,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constraints = Vec::with_capacity(params.sets as usize);
    for _ in 0..params.sets {
        let size = rng.gen_range(1..=params.max_size);
        let members = distinct_draw(&mut rng, params.vertices, size);
        let threshold = if params.subset_thresholds { rng.gen_range(1..=size) } else { size };
        constraints.push(Constraint::new(members.into_iter().map(VertexId), threshold));
    }
    Ok(GameSpec::new(params.vertices, constraints, Player::Enforcer))
}

/// Random formula with 1-3 distinct variables per clause, reproducible from
/// the seed. The output is raw; normalization may still drop duplicates.
pub fn random_cnf(num_vars: u32, num_clauses: u32, seed: u64) -> Result<Cnf, GenError> {
    if num_vars == 0 {
        return Err(GenError::ZeroParameter("variables"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clauses = Vec::with_capacity(num_clauses as usize);
    for _ in 0..num_clauses {
        let width = rng.gen_range(1..=3.min(num_vars));
        let clause = distinct_draw(&mut rng, num_vars, width)
            .into_iter()
            .map(|var| Literal { var, positive: rng.gen_bool(0.5) })
            .collect();
        clauses.push(clause);
    }
    Ok(Cnf::new(num_vars, clauses))
}

fn distinct_draw(rng: &mut ChaCha8Rng, universe: u32, count: u32) -> Vec<u32> {
    let mut picked = BTreeSet::new();
    while picked.len() < count as usize {
        picked.insert(rng.gen_range(0..universe));
    }
    picked.into_iter().collect()
}
