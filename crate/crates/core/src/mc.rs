//! Explicit-state ATL model checking by fixpoint iteration over sets of
//! global states.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::formula::{BoundsError, Coalition, Formula};
use crate::mas::{Model, ModelShape};

/// A set of global states of a fixed shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(state_count: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(state_count))
    }

    pub fn full(state_count: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(state_count);
        b.insert_range(..);
        StateSet(b)
    }

    pub fn from_states(state_count: usize, states: impl IntoIterator<Item = usize>) -> Self {
        let mut s = StateSet::empty(state_count);
        for st in states {
            s.insert(st);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, state: usize) {
        self.0.insert(state);
    }

    pub fn remove(&mut self, state: usize) {
        self.0.set(state, false);
    }

    pub fn contains(&self, state: usize) -> bool {
        self.0.contains(state)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        StateSet(b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        StateSet(b)
    }

    pub fn complement(&self) -> StateSet {
        let mut b = self.0.clone();
        b.toggle_range(..);
        StateSet(b)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Anything the checker can evaluate on: a shape, per-agent enabled actions
/// at each local state, and a valuation.
///
/// Rows may be empty in approximating structures. The pre-image treats an
/// empty coalition row as "no strategy" and an empty opponent row as "no
/// counter-move", so the operator stays monotone in every row.
pub trait Arena {
    fn shape(&self) -> &ModelShape;
    fn enabled_actions(&self, agent: usize, local: usize) -> &[usize];
    fn holds(&self, state: usize, prop: usize) -> bool;
}

impl Arena for Model {
    fn shape(&self) -> &ModelShape {
        Model::shape(self)
    }

    fn enabled_actions(&self, agent: usize, local: usize) -> &[usize] {
        Model::enabled_actions(self, agent, local)
    }

    fn holds(&self, state: usize, prop: usize) -> bool {
        Model::holds(self, state, prop)
    }
}

pub fn prop_states<A: Arena + ?Sized>(arena: &A, prop: usize) -> StateSet {
    let n = arena.shape().state_count();
    StateSet::from_states(n, (0..n).filter(|&s| arena.holds(s, prop)))
}

/// Calls `visit` with the partial successor index of every combination of
/// one action per row, stopping early when `visit` returns false. Returns
/// false iff stopped early.
fn for_each_choice(rows: &[(&[usize], usize)], base: usize, visit: &mut dyn FnMut(usize) -> bool) -> bool {
    match rows.split_first() {
        None => visit(base),
        Some((&(actions, stride), rest)) => actions.iter().all(|&a| for_each_choice(rest, base + a * stride, visit)),
    }
}

/// States where the coalition can jointly pick enabled actions such that every
/// completion by the remaining agents lands in `x`.
pub fn atl_pre<A: Arena + ?Sized>(arena: &A, coalition: &Coalition, x: &StateSet) -> StateSet {
    let shape = arena.shape();
    let n = shape.state_count();
    let mut out = StateSet::empty(n);
    let mut ours: Vec<(&[usize], usize)> = Vec::with_capacity(shape.agent_count());
    let mut theirs: Vec<(&[usize], usize)> = Vec::with_capacity(shape.agent_count());
    for s in 0..n {
        ours.clear();
        theirs.clear();
        for agent in 0..shape.agent_count() {
            let row = (arena.enabled_actions(agent, shape.local_of(s, agent)), shape.stride(agent));
            if coalition.contains(agent) {
                ours.push(row);
            } else {
                theirs.push(row);
            }
        }
        // exists a coalition choice (stop on first winner) ...
        let found = !for_each_choice(&ours, 0, &mut |base| {
            // ... such that all opponent completions stay inside x
            let wins = for_each_choice(&theirs, base, &mut |succ| x.contains(succ));
            !wins
        });
        if found {
            out.insert(s);
        }
    }
    out
}

/// Operator tags for [`solve_op`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operator {
    Not,
    And,
    Next(Coalition),
    Globally(Coalition),
    Until(Coalition),
}

impl Operator {
    pub fn arity(&self) -> usize {
        match self {
            Operator::Not | Operator::Next(_) | Operator::Globally(_) => 1,
            Operator::And | Operator::Until(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operator {op:?} takes {expected} argument sets")]
pub struct ArityError {
    pub op: Operator,
    pub expected: usize,
}

fn fixpoint(mut current: StateSet, mut step: impl FnMut(&StateSet) -> StateSet) -> StateSet {
    loop {
        let next = step(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Evaluates one operator on argument state sets.
pub fn solve_op<A: Arena + ?Sized>(
    op: &Operator,
    y1: &StateSet,
    y2: Option<&StateSet>,
    arena: &A,
) -> Result<StateSet, ArityError> {
    let arity_err = || ArityError { op: op.clone(), expected: op.arity() };
    if (op.arity() == 2) != y2.is_some() {
        return Err(arity_err());
    }
    Ok(match op {
        Operator::Not => y1.complement(),
        Operator::And => y1.intersection(y2.unwrap()),
        Operator::Next(c) => atl_pre(arena, c, y1),
        // greatest fixpoint of Y = y1 & pre(Y), from y1 downward
        Operator::Globally(c) => fixpoint(y1.clone(), |y| y1.intersection(&atl_pre(arena, c, y))),
        // least fixpoint of Y = y2 | (y1 & pre(Y)), from y2 upward
        Operator::Until(c) => {
            let y2 = y2.unwrap();
            fixpoint(y2.clone(), |y| y2.union(&y1.intersection(&atl_pre(arena, c, y))))
        }
    })
}

fn eval<A: Arena + ?Sized>(arena: &A, f: &Formula) -> StateSet {
    let op = |op: Operator, a: &Formula, b: Option<&Formula>| {
        let y1 = eval(arena, a);
        let y2 = b.map(|b| eval(arena, b));
        solve_op(&op, &y1, y2.as_ref(), arena).expect("arity follows the formula")
    };
    match f {
        Formula::Prop(p) => prop_states(arena, *p),
        Formula::Not(a) => op(Operator::Not, a, None),
        Formula::And(a, b) => op(Operator::And, a, Some(b)),
        Formula::Next(c, a) => op(Operator::Next(c.clone()), a, None),
        Formula::Globally(c, a) => op(Operator::Globally(c.clone()), a, None),
        Formula::Until(c, a, b) => op(Operator::Until(c.clone()), a, Some(b)),
        sugar => eval(arena, &sugar.normalize()),
    }
}

/// The exact set of states satisfying `f`. Sugar is normalized first.
pub fn solve_formula<A: Arena + ?Sized>(arena: &A, f: &Formula) -> Result<StateSet, BoundsError> {
    let shape = arena.shape();
    f.validate(shape.agent_count(), shape.prop_count())?;
    Ok(eval(arena, f))
}

/// Whether `f` holds at the initial state.
pub fn check_validity(m: &Model, f: &Formula) -> Result<bool, BoundsError> {
    Ok(solve_formula(m, f)?.contains(m.shape().initial_state()))
}
