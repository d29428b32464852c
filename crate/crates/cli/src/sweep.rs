//! The eight-formula scaling sweep: depth/connective targets, the coalition
//! pool, and candidate selection.

use std::time::Duration;

use atlsat_core::formula::{generate_matching, parse_formula, Coalition, Formula, GenError, GenParams};
use atlsat_core::solver::{solve_satisfiability, Config, Requirements, SolveError, Verdict};

use crate::report::{Rejected, RunReport};

/// (strategic depth, connective count) per row.
pub const TARGETS: [(usize, usize); 8] =
    [(9, 13), (13, 19), (17, 25), (20, 31), (23, 35), (26, 41), (30, 49), (33, 55)];

pub const AGENTS: usize = 3;
pub const PROPS: usize = 3;

/// The published shortest formula, used verbatim as row 1.
pub const FIRST_FORMULA: &str = "<<0>> X (!p0 | <<1>> G (!p1 | <<0,1>> F (!p1 | <<0,1>> F (!p0 | <<2>> F <<0>> X \
                                 (!p0 | <<1>> G (!p1 | <<0,1>> G (<<0>> F !p0)))))))";

/// The four coalitions the first formula uses.
pub fn pool() -> Vec<Coalition> {
    [&[0][..], &[1], &[0, 1], &[2]].iter().map(|m| Coalition::new(m.iter().copied()).unwrap()).collect()
}

pub fn first_formula() -> Formula {
    parse_formula(FIRST_FORMULA).expect("the built-in formula parses")
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no satisfiable candidate for depth {depth} / {connectives} connectives within {candidates} candidates")]
    Exhausted { depth: usize, connectives: usize, candidates: usize },
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub config: Config,
    pub timeout: Option<Duration>,
    /// Candidates tried per row before giving up.
    pub max_candidates: usize,
    /// Seeds scanned for each matching candidate.
    pub max_seeds: u64,
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            config: Config { minimize_conflicts: true, ..Config::default() },
            timeout: Some(Duration::from_secs(60)),
            max_candidates: 50,
            max_seeds: 100_000,
            timing: true,
        }
    }
}

/// Row `id` (1-based) of the sweep. Row 1 is the published formula; the
/// other rows scan generator seeds upward from 0 for formulas hitting the
/// row's depth and connective count and keep the first one solved SAT on
/// `req`. Skipped candidates are listed in the report.
pub fn run_row(id: usize, req: &Requirements, opts: &SweepOptions) -> Result<RunReport, SweepError> {
    let config = Config { time_limit: opts.timeout, ..opts.config.clone() };
    if id == 1 {
        let f = first_formula();
        let res = solve_satisfiability(&f, req, &config)?;
        return Ok(RunReport::new(id, &f, &res, opts.timing));
    }
    let (depth, connectives) = TARGETS[id - 1];
    let mut rejected = Vec::new();
    let mut next_seed = 0u64;
    for _ in 0..opts.max_candidates {
        let params = GenParams::new(AGENTS, 4, PROPS, depth, next_seed).with_pool(pool());
        let Some((seed, f)) = generate_matching(&params, connectives, opts.max_seeds)? else { break };
        let res = solve_satisfiability(&f, req, &config)?;
        if res.verdict() == Verdict::Sat {
            let mut report = RunReport::new(id, &f, &res, opts.timing);
            report.seed = Some(seed);
            report.rejected = rejected;
            return Ok(report);
        }
        rejected.push(Rejected { seed, verdict: res.verdict().to_string() });
        next_seed = seed + 1;
    }
    Err(SweepError::Exhausted { depth, connectives, candidates: rejected.len() })
}

pub fn run_sweep(req: &Requirements, opts: &SweepOptions) -> Result<Vec<RunReport>, SweepError> {
    (1..=TARGETS.len()).map(|id| run_row(id, req, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_formula_matches_first_target() {
        let f = first_formula();
        assert_eq!((f.strategic_depth(), f.connective_count()), TARGETS[0]);
        let mut used = Vec::new();
        collect(&f, &mut used);
        used.sort();
        used.dedup();
        let mut p = pool();
        p.sort();
        assert_eq!(used, p);
    }

    fn collect(f: &Formula, out: &mut Vec<Coalition>) {
        match f {
            Formula::Prop(_) | Formula::True | Formula::False => {}
            Formula::Not(a) => collect(a, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                collect(a, out);
                collect(b, out);
            }
            Formula::Next(c, a) | Formula::Globally(c, a) | Formula::Eventually(c, a) => {
                out.push(c.clone());
                collect(a, out);
            }
            Formula::Until(c, a, b) => {
                out.push(c.clone());
                collect(a, out);
                collect(b, out);
            }
        }
    }
}
