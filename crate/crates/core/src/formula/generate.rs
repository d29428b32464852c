//! Seeded random ATL formula generator.
//!
//! Each formula is grown along a spine that carries the full strategic depth
//! budget, so the requested `max_depth` is always reached. Off-spine operands
//! (the second argument of `&`/`|`, the left argument of `U`) get a depth drawn
//! from a half-normal distribution truncated to the remaining budget, which
//! keeps the connective count roughly linear in the depth.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use super::{Coalition, Formula};

/// Standard deviation of the off-spine depth distribution.
const SIDE_DEPTH_SD: f64 = 0.6;
/// Probability that a depth-0 subtree is a bare literal rather than a small
/// Boolean combination.
const LITERAL_PROBABILITY: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub agent_count: usize,
    pub group_count: usize,
    pub prop_count: usize,
    pub max_depth: usize,
    pub seed: u64,
    /// Explicit coalition pool; drawn from the seed when absent.
    pub pool: Option<Vec<Coalition>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("{groups} groups requested but only {available} nonempty coalitions exist")]
    TooManyGroups { groups: usize, available: u128 },
    #[error("coalition pool has {0} entries, expected group_count")]
    PoolSize(usize),
    #[error("invalid coalition {0} in pool")]
    PoolEntry(Coalition),
}

impl GenParams {
    pub fn new(agent_count: usize, group_count: usize, prop_count: usize, max_depth: usize, seed: u64) -> Self {
        GenParams { agent_count, group_count, prop_count, max_depth, seed, pool: None }
    }

    pub fn with_pool(mut self, pool: Vec<Coalition>) -> Self {
        self.group_count = pool.len();
        self.pool = Some(pool);
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.agent_count == 0 {
            return Err(GenError::Zero("agent_count"));
        }
        if self.group_count == 0 {
            return Err(GenError::Zero("group_count"));
        }
        if self.prop_count == 0 {
            return Err(GenError::Zero("prop_count"));
        }
        let available = if self.agent_count >= 127 { u128::MAX } else { (1u128 << self.agent_count) - 1 };
        if self.group_count as u128 > available {
            return Err(GenError::TooManyGroups { groups: self.group_count, available });
        }
        if let Some(pool) = &self.pool {
            if pool.len() != self.group_count {
                return Err(GenError::PoolSize(pool.len()));
            }
            for (k, c) in pool.iter().enumerate() {
                let bad = c.is_empty() || c.members().iter().any(|&a| a >= self.agent_count) || pool[..k].contains(c);
                if bad {
                    return Err(GenError::PoolEntry(c.clone()));
                }
            }
        }
        Ok(())
    }

    /// The coalition pool used for this seed.
    pub fn coalition_pool(&self) -> Result<Vec<Coalition>, GenError> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok(self.pool.clone().unwrap_or_else(|| draw_pool(self, &mut rng)))
    }
}

fn draw_pool(params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<Coalition> {
    let n = params.agent_count;
    let k = params.group_count;
    if n <= 16 {
        let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
        masks.shuffle(rng);
        masks.truncate(k);
        masks.into_iter().map(|m| Coalition((0..n).filter(|a| m >> a & 1 == 1).collect())).collect()
    } else {
        let mut pool: Vec<Coalition> = Vec::with_capacity(k);
        while pool.len() < k {
            let c = Coalition((0..n).filter(|_| rng.random_bool(0.5)).collect());
            if !c.is_empty() && !pool.contains(&c) {
                pool.push(c);
            }
        }
        pool
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Not,
    And,
    Or,
    Next,
    Globally,
    Eventually,
    Until,
}

const OPS: [Op; 7] = [Op::Not, Op::And, Op::Or, Op::Next, Op::Globally, Op::Eventually, Op::Until];

struct Generator<'a> {
    rng: ChaCha8Rng,
    pool: &'a [Coalition],
    prop_count: usize,
    side_depth: Normal<f64>,
}

impl Generator<'_> {
    fn coalition(&mut self) -> Coalition {
        self.pool[self.rng.random_range(0..self.pool.len())].clone()
    }

    fn literal_of(&mut self, prop: usize) -> Formula {
        let p = Formula::Prop(prop);
        if self.rng.random_bool(0.5) {
            Formula::not(p)
        } else {
            p
        }
    }

    fn literal(&mut self) -> Formula {
        let p = self.rng.random_range(0..self.prop_count);
        self.literal_of(p)
    }

    /// A literal, or a binary over two distinct propositions when there are
    /// at least two (no `p & !p`, `p | p` filler).
    fn propositional(&mut self) -> Formula {
        if self.prop_count < 2 || self.rng.random_bool(LITERAL_PROBABILITY) {
            return self.literal();
        }
        let p = self.rng.random_range(0..self.prop_count);
        let q = (p + self.rng.random_range(1..self.prop_count)) % self.prop_count;
        let (a, b) = (self.literal_of(p), self.literal_of(q));
        if self.rng.random_bool(0.5) {
            Formula::and(a, b)
        } else {
            Formula::or(a, b)
        }
    }

    fn off_spine_depth(&mut self, budget: usize) -> usize {
        let x = self.side_depth.sample(&mut self.rng).abs().round();
        (x as usize).min(budget)
    }

    /// A formula of strategic depth exactly `depth`.
    fn grow(&mut self, depth: usize, under_not: bool) -> Formula {
        if depth == 0 {
            return self.propositional();
        }
        let op = loop {
            let op = OPS[self.rng.random_range(0..OPS.len())];
            if !(under_not && op == Op::Not) {
                break op;
            }
        };
        match op {
            Op::Not => Formula::not(self.grow(depth, true)),
            Op::And | Op::Or => {
                let spine = self.grow(depth, false);
                let side_depth = self.off_spine_depth(depth);
                let side = self.grow(side_depth, false);
                let (a, b) = if self.rng.random_bool(0.5) { (spine, side) } else { (side, spine) };
                if op == Op::And {
                    Formula::and(a, b)
                } else {
                    Formula::or(a, b)
                }
            }
            Op::Next | Op::Globally | Op::Eventually => {
                let c = self.coalition();
                let body = self.grow(depth - 1, false);
                match op {
                    Op::Next => Formula::next(c, body),
                    Op::Globally => Formula::globally(c, body),
                    _ => Formula::eventually(c, body),
                }
            }
            Op::Until => {
                let c = self.coalition();
                let side_depth = self.off_spine_depth(depth - 1);
                let lhs = self.grow(side_depth, false);
                let rhs = self.grow(depth - 1, false);
                Formula::until(c, lhs, rhs)
            }
        }
    }
}

/// Draws a formula of strategic depth `max_depth` using only the pool's
/// coalitions and propositions below `prop_count`. Deterministic in the seed.
pub fn generate_random_formula(params: &GenParams) -> Result<Formula, GenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let pool = match &params.pool {
        Some(p) => p.clone(),
        None => draw_pool(params, &mut rng),
    };
    let mut g = Generator {
        rng,
        pool: &pool,
        prop_count: params.prop_count,
        side_depth: Normal::new(0.0, SIDE_DEPTH_SD).expect("positive sd"),
    };
    Ok(g.grow(params.max_depth, false))
}

/// Scans seeds `params.seed, params.seed + 1, ..` for a formula whose
/// connective count equals `connectives`. Returns the seed and the formula.
pub fn generate_matching(
    params: &GenParams,
    connectives: usize,
    max_attempts: u64,
) -> Result<Option<(u64, Formula)>, GenError> {
    params.validate()?;
    for k in 0..max_attempts {
        let seed = params.seed.wrapping_add(k);
        let f = generate_random_formula(&GenParams { seed, ..params.clone() })?;
        if f.connective_count() == connectives {
            return Ok(Some((seed, f)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams::new(3, 4, 3, 6, 42);
        assert_eq!(generate_random_formula(&p).unwrap(), generate_random_formula(&p).unwrap());
        let q = GenParams { seed: 43, ..p.clone() };
        assert_ne!(generate_random_formula(&p).unwrap(), generate_random_formula(&q).unwrap());
    }

    #[test]
    fn depth_zero_is_propositional() {
        for seed in 0..200 {
            let f = generate_random_formula(&GenParams::new(2, 3, 2, 0, seed)).unwrap();
            assert_eq!(f.strategic_depth(), 0);
            assert!(f.max_agent().is_none());
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert_eq!(
            generate_random_formula(&GenParams::new(2, 4, 1, 1, 0)),
            Err(GenError::TooManyGroups { groups: 4, available: 3 })
        );
        assert!(generate_random_formula(&GenParams::new(0, 1, 1, 1, 0)).is_err());
        assert!(generate_random_formula(&GenParams::new(1, 1, 0, 1, 0)).is_err());
        let bad_pool = GenParams::new(2, 1, 1, 1, 0).with_pool(vec![Coalition::empty()]);
        assert!(bad_pool.validate().is_err());
    }

    #[test]
    fn drawn_pool_is_distinct_and_nonempty() {
        for seed in 0..50 {
            let pool = GenParams::new(3, 7, 1, 1, seed).coalition_pool().unwrap();
            assert_eq!(pool.len(), 7);
            for (i, c) in pool.iter().enumerate() {
                assert!(!c.is_empty());
                assert!(!pool[..i].contains(c));
            }
        }
        let big = GenParams::new(20, 5, 1, 1, 9).coalition_pool().unwrap();
        assert_eq!(big.len(), 5);
    }

    #[test]
    fn hits_first_table_target() {
        let pool = ["0", "1", "0,1", "2"]
            .iter()
            .map(|s| Coalition::new(s.split(',').map(|a| a.parse().unwrap())).unwrap())
            .collect();
        let p = GenParams::new(3, 4, 3, 9, 0).with_pool(pool);
        let (_, f) = generate_matching(&p, 13, 10_000).unwrap().expect("target reachable");
        assert_eq!(f.strategic_depth(), 9);
        assert_eq!(f.connective_count(), 13);
    }
}
