//! Bounded ATL satisfiability: a clause-learning search over the model bits
//! with the over/under approximation as a lazy theory check.
//!
//! After unit propagation settles at any level the current assignment is
//! read as a partial model. If the initial state misses the over set, no
//! completion can satisfy the formula and the negated assignment is learned.
//! If it lies in the under set, every completion does and the search stops.

use std::fmt;
use std::ops::Not;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::approx::{sapp, Mode, PartialModel, PartialModelError};
use crate::formula::{BoundsError, Formula};
use crate::mas::{decode_model, Assignment, DecodeError, Model, ModelShape};
use crate::mc::check_validity;

/// A literal over a model bit: true when bit `var` has value `value`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: usize, value: bool) -> Lit {
        Lit((var as u32) << 1 | u32::from(!value))
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    /// The bit value that makes this literal true.
    pub fn value(self) -> bool {
        self.0 & 1 == 0
    }

    fn code(self) -> usize {
        self.0 as usize
    }

    /// `Some(true)` when satisfied, `Some(false)` when falsified.
    pub fn eval(self, bits: &[Option<bool>]) -> Option<bool> {
        bits[self.var()].map(|b| b == self.value())
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", if self.value() { "" } else { "!" }, self.var())
    }
}

/// A disjunction of literals with no repeated variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause(Vec<Lit>);

impl Clause {
    /// Drops repeated literals; `None` if some variable occurs in both
    /// polarities.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if out.contains(&!l) {
                return None;
            }
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Some(Clause(out))
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_satisfied(&self, bits: &[Option<bool>]) -> bool {
        self.0.iter().any(|l| l.eval(bits) == Some(true))
    }

    /// The clause negating every assigned bit of `bits`.
    pub fn blocking(bits: &[Option<bool>]) -> Clause {
        Clause(bits.iter().enumerate().filter_map(|(v, b)| b.map(|b| Lit::new(v, !b))).collect())
    }

    /// The assignment this clause blocks: each literal's variable set to
    /// falsify it, everything else undetermined.
    pub fn blocked_cells(&self, bit_count: usize) -> Vec<Option<bool>> {
        let mut cells = vec![None; bit_count];
        for l in &self.0 {
            cells[l.var()] = Some(!l.value());
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolConstraint {
    pub agent: usize,
    pub local: usize,
    pub action: usize,
    pub value: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationConstraint {
    pub state: usize,
    pub prop: usize,
    pub value: bool,
}

/// The model shape to search and the cells fixed in advance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirements {
    pub shape: ModelShape,
    pub cp_constraints: Vec<ProtocolConstraint>,
    pub cv_constraints: Vec<ValuationConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RequirementsError {
    #[error("protocol constraint ({agent}, {local}, {action}) is outside the shape")]
    ProtocolRange { agent: usize, local: usize, action: usize },
    #[error("valuation constraint ({state}, {prop}) is outside the shape")]
    ValuationRange { state: usize, prop: usize },
    #[error("model bit {0} is constrained to both 0 and 1")]
    Contradiction(usize),
    #[error(transparent)]
    PartialModel(#[from] PartialModelError),
}

impl Requirements {
    pub fn new(shape: ModelShape) -> Self {
        Requirements { shape, cp_constraints: Vec::new(), cv_constraints: Vec::new() }
    }

    pub fn fix_protocol(mut self, agent: usize, local: usize, action: usize, value: bool) -> Self {
        self.cp_constraints.push(ProtocolConstraint { agent, local, action, value });
        self
    }

    pub fn fix_valuation(mut self, state: usize, prop: usize, value: bool) -> Self {
        self.cv_constraints.push(ValuationConstraint { state, prop, value });
        self
    }

    /// The model bits fixed by the constraints, in cell order.
    pub fn fixed_cells(&self) -> Result<Vec<Option<bool>>, RequirementsError> {
        let shape = &self.shape;
        let mut cells = vec![None; shape.bit_count()];
        let mut fix = |cell: usize, value: bool| match cells[cell] {
            Some(v) if v != value => Err(RequirementsError::Contradiction(cell)),
            _ => {
                cells[cell] = Some(value);
                Ok(())
            }
        };
        for &ProtocolConstraint { agent, local, action, value } in &self.cp_constraints {
            let ok =
                agent < shape.agent_count() && local < shape.local_count(agent) && action < shape.local_count(agent);
            if !ok {
                return Err(RequirementsError::ProtocolRange { agent, local, action });
            }
            fix(shape.tb_index(agent, local, action), value)?;
        }
        for &ValuationConstraint { state, prop, value } in &self.cv_constraints {
            if state >= shape.state_count() || prop >= shape.prop_count() {
                return Err(RequirementsError::ValuationRange { state, prop });
            }
            fix(shape.vb_index(state, prop), value)?;
        }
        Ok(cells)
    }

    pub fn partial_model(&self) -> Result<PartialModel, RequirementsError> {
        let a = Assignment::from_bits(self.shape.clone(), self.fixed_cells()?).expect("cell count follows the shape");
        Ok(PartialModel::from_assignment(&a)?)
    }

    pub fn validate(&self) -> Result<(), RequirementsError> {
        self.partial_model().map(|_| ())
    }
}

/// One at-least-one clause per protocol row, then one unit clause per
/// constraint.
pub fn structural_clauses(req: &Requirements) -> Vec<Clause> {
    let shape = &req.shape;
    let mut out = Vec::new();
    for agent in 0..shape.agent_count() {
        let n = shape.local_count(agent);
        for local in 0..n {
            out.push(Clause((0..n).map(|a| Lit::new(shape.tb_index(agent, local, a), true)).collect()));
        }
    }
    for c in &req.cp_constraints {
        out.push(Clause(vec![Lit::new(shape.tb_index(c.agent, c.local, c.action), c.value)]));
    }
    for c in &req.cv_constraints {
        out.push(Clause(vec![Lit::new(shape.vb_index(c.state, c.prop), c.value)]));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryOutcome {
    Pass,
    EarlyAccept,
    Conflict(Clause),
}

fn merge(bits: &[Option<bool>], fixed: &[Option<bool>]) -> Vec<Option<bool>> {
    bits.iter().zip(fixed).map(|(b, f)| b.or(*f)).collect()
}

fn initial_in(shape: &ModelShape, cells: &[Option<bool>], f: &Formula, mode: Mode) -> bool {
    let pm = PartialModel::from_cells(shape, cells);
    sapp(&pm, f, mode).expect("formula validated against the shape").contains(shape.initial_state())
}

/// Reads `asg` merged with the fixed cells of `req` as a partial model and
/// compares the initial state against both approximations.
pub fn theory_check(asg: &Assignment, f: &Formula, req: &Requirements) -> Result<TheoryOutcome, SolveError> {
    let fixed = req.fixed_cells()?;
    f.validate(req.shape.agent_count(), req.shape.prop_count())?;
    let cells = merge(asg.bits(), &fixed);
    Ok(if !initial_in(&req.shape, &cells, f, Mode::Over) {
        TheoryOutcome::Conflict(Clause::blocking(asg.bits()))
    } else if initial_in(&req.shape, &cells, f, Mode::Under) {
        TheoryOutcome::EarlyAccept
    } else {
        TheoryOutcome::Pass
    })
}

/// Whether the assignment blocked by `clause` (merged with `req`) already
/// rules out every satisfying completion.
pub fn is_theory_conflict(clause: &Clause, f: &Formula, req: &Requirements) -> Result<bool, SolveError> {
    let fixed = req.fixed_cells()?;
    f.validate(req.shape.agent_count(), req.shape.prop_count())?;
    let cells = merge(&clause.blocked_cells(req.shape.bit_count()), &fixed);
    Ok(!initial_in(&req.shape, &cells, f, Mode::Over))
}

/// Greedily drops literals, front to back, while `recheck` still reports a
/// conflict for the reduced clause.
pub fn minimize_conflict(clause: &Clause, mut recheck: impl FnMut(&Clause) -> bool) -> Clause {
    let mut lits = clause.0.clone();
    let mut i = 0;
    while i < lits.len() {
        let mut reduced = lits.clone();
        reduced.remove(i);
        if recheck(&Clause(reduced.clone())) {
            lits = reduced;
        } else {
            i += 1;
        }
    }
    Clause(lits)
}

pub fn extract_model(asg: &Assignment) -> Result<Model, DecodeError> {
    decode_model(asg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// 1 first for protocol bits, 0 first for valuation bits.
    #[default]
    TbOneVbZero,
    AllZero,
    AllOne,
    /// Coin flip per decision, from the configured seed.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Config {
    pub policy: Policy,
    pub minimize_conflicts: bool,
    pub seed: u64,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub conflicts: u64,
    pub theory_conflicts: u64,
    pub theory_checks: u64,
    pub propagations: u64,
    pub learned: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverResult {
    Sat { witness: Model, stats: Stats },
    Unsat { stats: Stats },
    Timeout { stats: Stats },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
    Timeout,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Timeout => "TIMEOUT",
        })
    }
}

impl SolverResult {
    pub fn verdict(&self) -> Verdict {
        match self {
            SolverResult::Sat { .. } => Verdict::Sat,
            SolverResult::Unsat { .. } => Verdict::Unsat,
            SolverResult::Timeout { .. } => Verdict::Timeout,
        }
    }

    pub fn stats(&self) -> &Stats {
        match self {
            SolverResult::Sat { stats, .. } | SolverResult::Unsat { stats } | SolverResult::Timeout { stats } => stats,
        }
    }

    pub fn witness(&self) -> Option<&Model> {
        match self {
            SolverResult::Sat { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("invalid requirements: {0}")]
    Requirements(#[from] RequirementsError),
}

/// Search state for one solve. Build with [`Solver::new`], then [`Solver::run`].
pub struct Solver {
    formula: Formula,
    shape: ModelShape,
    fixed: Vec<Option<bool>>,
    config: Config,
    rng: ChaCha8Rng,

    clauses: Vec<Vec<Lit>>,
    /// Clause indices watching each literal, by literal code.
    watches: Vec<Vec<usize>>,
    learned: Vec<Clause>,
    root_units: Vec<Lit>,

    values: Vec<Option<bool>>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,

    stats: Stats,
    inconsistent: bool,
}

enum Step {
    Continue,
    Unsat,
}

impl Solver {
    pub fn new(f: &Formula, req: &Requirements, config: Config) -> Result<Solver, SolveError> {
        let fixed = req.fixed_cells()?;
        req.validate()?;
        f.validate(req.shape.agent_count(), req.shape.prop_count())?;
        let n = req.shape.bit_count();
        let mut s = Solver {
            formula: f.normalize(),
            shape: req.shape.clone(),
            fixed,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            learned: Vec::new(),
            root_units: Vec::new(),
            values: vec![None; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: vec![false; n],
            stats: Stats::default(),
            inconsistent: false,
        };
        let structural = structural_clauses(req);
        for c in structural.iter().filter(|c| c.len() >= 2) {
            s.attach(c.0.clone());
        }
        for c in structural.iter().filter(|c| c.len() < 2) {
            match c.0.first() {
                None => s.inconsistent = true,
                Some(&l) => s.assert_root(l),
            }
        }
        Ok(s)
    }

    /// Clauses learned so far, Boolean and theory conflicts alike.
    pub fn learned_clauses(&self) -> &[Clause] {
        &self.learned
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        l.eval(&self.values)
    }

    fn attach(&mut self, lits: Vec<Lit>) -> usize {
        let idx = self.clauses.len();
        self.watches[lits[0].code()].push(idx);
        self.watches[lits[1].code()].push(idx);
        self.clauses.push(lits);
        idx
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var();
        self.values[v] = Some(l.value());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn assert_root(&mut self, l: Lit) {
        match self.lit_value(l) {
            Some(true) => {}
            Some(false) => self.inconsistent = true,
            None => {
                self.root_units.push(l);
                self.assign(l, None);
            }
        }
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for l in self.trail.drain(keep..) {
            self.values[l.var()] = None;
            self.reason[l.var()] = None;
        }
        self.trail_lim.truncate(level);
        self.qhead = keep;
    }

    /// Two-watched-literal unit propagation. Returns a falsified clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let watching = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut kept = Vec::with_capacity(watching.len());
            let mut conflict = None;
            for (k, &ci) in watching.iter().enumerate() {
                if conflict.is_some() {
                    kept.extend_from_slice(&watching[k..]);
                    break;
                }
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if first.eval(&self.values) == Some(true) {
                    kept.push(ci);
                    continue;
                }
                if let Some(j) = (2..c.len()).find(|&j| c[j].eval(&self.values) != Some(false)) {
                    c.swap(1, j);
                    let w = c[1].code();
                    self.watches[w].push(ci);
                    continue;
                }
                kept.push(ci);
                if first.eval(&self.values) == Some(false) {
                    conflict = Some(ci);
                } else {
                    self.stats.propagations += 1;
                    self.assign(first, Some(ci));
                }
            }
            self.watches[false_lit.code()] = kept;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// First-UIP analysis of a clause falsified at the current level, which
    /// must contain at least two literals of that level.
    fn analyze(&mut self, conflict: usize) -> (Vec<Lit>, usize) {
        let current = self.decision_level();
        let mut out = vec![Lit(0)];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut clause = conflict;
        let mut pivot: Option<Lit> = None;
        loop {
            for &q in &self.clauses[clause] {
                let v = q.var();
                if Some(v) == pivot.map(Lit::var) || self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                if self.level[v] == current {
                    pending += 1;
                } else {
                    out.push(q);
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.trail[idx];
                if self.seen[p.var()] {
                    break p;
                }
            };
            self.seen[p.var()] = false;
            pending -= 1;
            pivot = Some(p);
            if pending == 0 {
                out[0] = !p;
                break;
            }
            clause = self.reason[p.var()].expect("only the decision of a level lacks a reason");
        }
        for l in &out[1..] {
            self.seen[l.var()] = false;
        }
        let back = self.place_second_watch(&mut out);
        (out, back)
    }

    /// Moves the highest-level literal among `lits[1..]` to position 1 and
    /// returns its level (0 for a unit).
    fn place_second_watch(&self, lits: &mut [Lit]) -> usize {
        if lits.len() < 2 {
            return 0;
        }
        let best = (1..lits.len()).max_by_key(|&i| self.level[lits[i].var()]).unwrap();
        lits.swap(1, best);
        self.level[lits[1].var()]
    }

    /// Backjumps and asserts `lits[0]`, which must be the only literal of the
    /// clause not falsified below `back`.
    fn learn_asserting(&mut self, lits: Vec<Lit>, back: usize) {
        self.cancel_until(back);
        self.stats.learned += 1;
        self.learned.push(Clause(lits.clone()));
        if lits.len() == 1 {
            self.assert_root(lits[0]);
        } else {
            let asserted = lits[0];
            let ci = self.attach(lits);
            self.assign(asserted, Some(ci));
        }
    }

    fn boolean_conflict(&mut self, ci: usize) -> Step {
        self.stats.conflicts += 1;
        if self.decision_level() == 0 {
            return Step::Unsat;
        }
        let (lits, back) = self.analyze(ci);
        self.learn_asserting(lits, back);
        Step::Continue
    }

    fn theory_conflict(&mut self) -> Step {
        self.stats.conflicts += 1;
        self.stats.theory_conflicts += 1;
        let mut lits: Vec<Lit> = self.trail.iter().filter(|l| self.level[l.var()] > 0).map(|&l| !l).collect();
        if self.config.minimize_conflicts {
            let root = self.root_cells();
            let shape = self.shape.clone();
            let formula = &self.formula;
            let reduced = minimize_conflict(&Clause(lits), |c| {
                let cells = merge(&c.blocked_cells(shape.bit_count()), &root);
                !initial_in(&shape, &cells, formula, Mode::Over)
            });
            lits = reduced.0;
        }
        if lits.is_empty() {
            return Step::Unsat;
        }
        let level_of = |l: &Lit| self.level[l.var()];
        let top = lits.iter().map(level_of).max().unwrap();
        let at_top = lits.iter().filter(|l| level_of(l) == top).count();
        let first = (0..lits.len()).find(|&i| level_of(&lits[i]) == top).unwrap();
        lits.swap(0, first);
        if at_top == 1 {
            let back = self.place_second_watch(&mut lits);
            self.learn_asserting(lits, back);
            return Step::Continue;
        }
        // two or more literals at the top level: store the clause and run the
        // usual analysis from that level
        let second = (1..lits.len()).find(|&i| level_of(&lits[i]) == top).unwrap();
        lits.swap(1, second);
        self.cancel_until(top);
        self.stats.learned += 1;
        self.learned.push(Clause(lits.clone()));
        let ci = self.attach(lits);
        let (learnt, back) = self.analyze(ci);
        self.learn_asserting(learnt, back);
        Step::Continue
    }

    /// Level-0 assignments merged with the fixed cells.
    fn root_cells(&self) -> Vec<Option<bool>> {
        let mut cells = self.fixed.clone();
        for (cell, (value, level)) in cells.iter_mut().zip(self.values.iter().zip(&self.level)) {
            if value.is_some() && *level == 0 {
                *cell = *value;
            }
        }
        cells
    }

    /// Fills a partial assignment the under structure already satisfies:
    /// open bits become 0, then each row left empty gets its lowest open bit.
    fn complete(&self) -> Assignment {
        let mut cells = self.values.clone();
        for agent in 0..self.shape.agent_count() {
            let n = self.shape.local_count(agent);
            for local in 0..n {
                let row: Vec<usize> = (0..n).map(|a| self.shape.tb_index(agent, local, a)).collect();
                if !row.iter().any(|&c| cells[c] == Some(true)) {
                    let open = row.iter().find(|&&c| cells[c].is_none()).expect("row clause keeps a bit open");
                    cells[*open] = Some(true);
                }
            }
        }
        for c in cells.iter_mut() {
            c.get_or_insert(false);
        }
        Assignment::from_bits(self.shape.clone(), cells).expect("cell count follows the shape")
    }

    fn pick_value(&mut self, var: usize) -> bool {
        match self.config.policy {
            Policy::TbOneVbZero => var < self.shape.tb_len(),
            Policy::AllZero => false,
            Policy::AllOne => true,
            Policy::Random => self.rng.random_bool(0.5),
        }
    }

    fn finish(&mut self, start: Instant, verdict: Verdict, witness: Option<Model>) -> SolverResult {
        self.stats.wall_time = start.elapsed();
        let stats = self.stats.clone();
        match verdict {
            Verdict::Sat => SolverResult::Sat { witness: witness.expect("sat carries a witness"), stats },
            Verdict::Unsat => SolverResult::Unsat { stats },
            Verdict::Timeout => SolverResult::Timeout { stats },
        }
    }

    fn accept(&mut self, start: Instant, asg: Assignment) -> SolverResult {
        let m = extract_model(&asg).expect("completion is total and row-nonempty");
        let compatible = asg.bits().iter().zip(&self.fixed).all(|(b, f)| f.is_none() || b == f);
        assert!(compatible, "witness violates the requirements");
        assert!(
            check_validity(&m, &self.formula).expect("formula validated"),
            "witness fails the formula at the initial state"
        );
        self.finish(start, Verdict::Sat, Some(m))
    }

    pub fn run(&mut self) -> SolverResult {
        let start = Instant::now();
        if self.inconsistent {
            return self.finish(start, Verdict::Unsat, None);
        }
        let mut prev_units = 0;
        loop {
            if self.config.time_limit.is_some_and(|t| start.elapsed() >= t) {
                return self.finish(start, Verdict::Timeout, None);
            }
            if let Some(ci) = self.propagate() {
                match self.boolean_conflict(ci) {
                    Step::Continue => continue,
                    Step::Unsat => return self.finish(start, Verdict::Unsat, None),
                }
            }
            if self.inconsistent {
                return self.finish(start, Verdict::Unsat, None);
            }
            // learned units go in at level 0 and need propagating first
            if self.root_units.len() != prev_units {
                prev_units = self.root_units.len();
                if self.qhead < self.trail.len() {
                    continue;
                }
            }
            self.stats.theory_checks += 1;
            if !initial_in(&self.shape, &self.values, &self.formula, Mode::Over) {
                match self.theory_conflict() {
                    Step::Continue => continue,
                    Step::Unsat => return self.finish(start, Verdict::Unsat, None),
                }
            }
            if initial_in(&self.shape, &self.values, &self.formula, Mode::Under) {
                let asg = self.complete();
                return self.accept(start, asg);
            }
            let Some(var) = self.values.iter().position(Option::is_none) else {
                // over and under coincide on total assignments
                unreachable!("total assignment passed the theory check without a verdict");
            };
            self.stats.decisions += 1;
            let value = self.pick_value(var);
            self.trail_lim.push(self.trail.len());
            self.assign(Lit::new(var, value), None);
        }
    }
}

/// Searches for a model of `req.shape` that meets the requirements and
/// satisfies `f` at the initial state.
pub fn solve_satisfiability(f: &Formula, req: &Requirements, config: &Config) -> Result<SolverResult, SolveError> {
    Ok(Solver::new(f, req, config.clone())?.run())
}
