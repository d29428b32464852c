//! Partial models and the over/under approximation of ATL satisfaction sets
//! across all of their total completions.
//!
//! A partial model leaves some protocol and valuation cells undetermined. For
//! a strategic operator with coalition `C` the evaluator picks, per mode, the
//! structure that makes the coalition weakest (under) or strongest (over):
//!
//! | mode  | coalition rows | opponent rows | valuation |
//! |-------|----------------|---------------|-----------|
//! | over  | possible       | necessary     | possible  |
//! | under | necessary      | possible      | necessary |
//!
//! "Necessary" keeps only cells fixed to 1; "possible" also admits undetermined
//! cells. Negation evaluates its argument in the opposite mode and
//! complements. For every compatible completion `M` this gives
//! `sapp(Under) ⊆ solve(M) ⊆ sapp(Over)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{BoundsError, Coalition, Formula};
use crate::mas::{enabled_lists, Assignment, Model, ModelShape};
use crate::mc::{self, Arena, Operator, StateSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartialModelError {
    #[error("expected {expected} protocol tables, got {got}")]
    AgentCount { expected: usize, got: usize },
    #[error("protocol table of agent {agent} has {got} cells, expected {expected}")]
    ProtocolSize { agent: usize, expected: usize, got: usize },
    #[error("valuation table has {got} cells, expected {expected}")]
    ValuationSize { expected: usize, got: usize },
    #[error("agent {agent} has every action excluded at local state {local}")]
    ExcludedRow { agent: usize, local: usize },
}

/// A model shape with three-valued protocol tables and valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialModel {
    shape: ModelShape,
    cp: Vec<Vec<Option<bool>>>,
    cv: Vec<Option<bool>>,
}

impl PartialModel {
    pub fn new(
        shape: ModelShape,
        cp: Vec<Vec<Option<bool>>>,
        cv: Vec<Option<bool>>,
    ) -> Result<Self, PartialModelError> {
        if cp.len() != shape.agent_count() {
            return Err(PartialModelError::AgentCount { expected: shape.agent_count(), got: cp.len() });
        }
        for (agent, table) in cp.iter().enumerate() {
            let n = shape.local_count(agent);
            if table.len() != n * n {
                return Err(PartialModelError::ProtocolSize { agent, expected: n * n, got: table.len() });
            }
            if let Some(local) = table.chunks(n).position(|row| row.iter().all(|&c| c == Some(false))) {
                return Err(PartialModelError::ExcludedRow { agent, local });
            }
        }
        let expected = shape.state_count() * shape.prop_count();
        if cv.len() != expected {
            return Err(PartialModelError::ValuationSize { expected, got: cv.len() });
        }
        Ok(PartialModel { shape, cp, cv })
    }

    /// Every cell undetermined.
    pub fn undetermined(shape: ModelShape) -> Self {
        let cp = shape.locals().iter().map(|&n| vec![None; n * n]).collect();
        let cv = vec![None; shape.state_count() * shape.prop_count()];
        PartialModel { shape, cp, cv }
    }

    /// Splits a flat cell vector without checking rows; the search builds
    /// these from assignments that already satisfy the row clauses.
    pub(crate) fn from_cells(shape: &ModelShape, cells: &[Option<bool>]) -> Self {
        let mut cp = Vec::with_capacity(shape.agent_count());
        let mut at = 0;
        for &n in shape.locals() {
            cp.push(cells[at..at + n * n].to_vec());
            at += n * n;
        }
        PartialModel { shape: shape.clone(), cp, cv: cells[at..].to_vec() }
    }

    pub fn from_assignment(a: &Assignment) -> Result<Self, PartialModelError> {
        let shape = a.shape().clone();
        let cp = (0..shape.agent_count()).map(|i| a.tb(i).to_vec()).collect();
        PartialModel::new(shape, cp, a.vb().to_vec())
    }

    pub fn to_assignment(&self) -> Assignment {
        let mut bits: Vec<Option<bool>> = self.cp.iter().flatten().copied().collect();
        bits.extend_from_slice(&self.cv);
        Assignment::from_bits(self.shape.clone(), bits).expect("dimensions follow the shape")
    }

    pub fn shape(&self) -> &ModelShape {
        &self.shape
    }

    pub fn cp(&self, agent: usize, local: usize, action: usize) -> Option<bool> {
        self.cp[agent][local * self.shape.local_count(agent) + action]
    }

    pub fn cv(&self, state: usize, prop: usize) -> Option<bool> {
        self.cv[state * self.shape.prop_count() + prop]
    }

    pub fn is_total(&self) -> bool {
        self.cp.iter().flatten().chain(&self.cv).all(Option::is_some)
    }
}

/// A total structure over a shape whose protocol rows may be empty; this is
/// what the approximation evaluates on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximant {
    shape: ModelShape,
    enabled: Vec<Vec<Vec<usize>>>,
    valuation: Vec<bool>,
}

impl Approximant {
    fn build(pm: &PartialModel, possible_row: impl Fn(usize) -> bool, possible_valuation: bool) -> Self {
        let keep = |cell: Option<bool>, possible: bool| cell.unwrap_or(possible);
        let enabled =
            enabled_lists(&pm.shape, |agent, local, action| keep(pm.cp(agent, local, action), possible_row(agent)));
        let valuation = pm.cv.iter().map(|&c| keep(c, possible_valuation)).collect();
        Approximant { shape: pm.shape.clone(), enabled, valuation }
    }

    /// True when every protocol row is nonempty, i.e. this is a valid model.
    pub fn is_serial(&self) -> bool {
        self.enabled.iter().flatten().all(|row| !row.is_empty())
    }

    pub fn protocol(&self, agent: usize, local: usize, action: usize) -> bool {
        self.enabled[agent][local].contains(&action)
    }

    pub fn to_model(&self) -> Option<Model> {
        let protocols = (0..self.shape.agent_count())
            .map(|agent| {
                let n = self.shape.local_count(agent);
                (0..n * n).map(|c| self.protocol(agent, c / n, c % n)).collect()
            })
            .collect();
        Model::new(self.shape.clone(), protocols, self.valuation.clone()).ok()
    }
}

impl Arena for Approximant {
    fn shape(&self) -> &ModelShape {
        &self.shape
    }

    fn enabled_actions(&self, agent: usize, local: usize) -> &[usize] {
        &self.enabled[agent][local]
    }

    fn holds(&self, state: usize, prop: usize) -> bool {
        self.valuation[state * self.shape.prop_count() + prop]
    }
}

/// Necessary protocols for every agent and the necessary valuation. Rows with
/// no cell fixed to 1 are empty.
pub fn build_under_model(pm: &PartialModel) -> Approximant {
    Approximant::build(pm, |_| false, false)
}

/// Possible protocols for the coalition, necessary protocols for everyone
/// else, and the possible valuation.
pub fn build_over_model(pm: &PartialModel, c: &Coalition) -> Approximant {
    Approximant::build(pm, |agent| c.contains(agent), true)
}

/// Necessary protocols for the coalition, possible protocols for everyone
/// else, and the necessary valuation. This is the structure the under mode
/// evaluates strategic operators on.
pub fn build_strategic_under_model(pm: &PartialModel, c: &Coalition) -> Approximant {
    Approximant::build(pm, |agent| !c.contains(agent), false)
}

/// Whether `m` agrees with every determined cell of `pm`.
pub fn is_compatible(m: &Model, pm: &PartialModel) -> bool {
    let shape = &pm.shape;
    if m.shape() != shape {
        return false;
    }
    let agree = |cell: Option<bool>, actual: bool| cell.is_none_or(|v| v == actual);
    let protocols_ok = (0..shape.agent_count()).all(|agent| {
        let n = shape.local_count(agent);
        (0..n * n).all(|c| agree(pm.cp(agent, c / n, c % n), m.protocol(agent, c / n, c % n)))
    });
    protocols_ok && (0..shape.state_count()).all(|s| (0..shape.prop_count()).all(|p| agree(pm.cv(s, p), m.holds(s, p))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Over,
    Under,
}

impl Mode {
    pub fn flip(self) -> Mode {
        match self {
            Mode::Over => Mode::Under,
            Mode::Under => Mode::Over,
        }
    }
}

struct Evaluator<'a> {
    pm: &'a PartialModel,
    structures: HashMap<(Mode, Coalition), Approximant>,
    valuations: [Option<Approximant>; 2],
    trace: Option<Vec<Mode>>,
}

impl Evaluator<'_> {
    fn structure(&mut self, mode: Mode, c: &Coalition) -> &Approximant {
        let pm = self.pm;
        self.structures.entry((mode, c.clone())).or_insert_with(|| match mode {
            Mode::Over => build_over_model(pm, c),
            Mode::Under => build_strategic_under_model(pm, c),
        })
    }

    fn valuation(&mut self, mode: Mode) -> &Approximant {
        let pm = self.pm;
        let slot = &mut self.valuations[(mode == Mode::Under) as usize];
        slot.get_or_insert_with(|| match mode {
            Mode::Over => Approximant::build(pm, |_| true, true),
            Mode::Under => build_under_model(pm),
        })
    }

    fn strategic(&mut self, mode: Mode, op: Operator, c: &Coalition, y1: StateSet, y2: Option<StateSet>) -> StateSet {
        let arena = self.structure(mode, c);
        mc::solve_op(&op, &y1, y2.as_ref(), arena).expect("arity follows the formula")
    }

    fn eval(&mut self, f: &Formula, mode: Mode) -> StateSet {
        if let Some(t) = self.trace.as_mut() {
            t.push(mode);
        }
        let n = self.pm.shape.state_count();
        match f {
            Formula::Prop(p) => mc::prop_states(self.valuation(mode), *p),
            Formula::Not(a) => self.eval(a, mode.flip()).complement(),
            Formula::And(a, b) => {
                if is_syntactic_contradiction(a, b) {
                    return StateSet::empty(n);
                }
                let ya = self.eval(a, mode);
                let yb = self.eval(b, mode);
                ya.intersection(&yb)
            }
            Formula::Next(c, a) => {
                let y = self.eval(a, mode);
                self.strategic(mode, Operator::Next(c.clone()), c, y, None)
            }
            Formula::Globally(c, a) => {
                let y = self.eval(a, mode);
                self.strategic(mode, Operator::Globally(c.clone()), c, y, None)
            }
            Formula::Until(c, a, b) => {
                let ya = self.eval(a, mode);
                let yb = self.eval(b, mode);
                self.strategic(mode, Operator::Until(c.clone()), c, ya, Some(yb))
            }
            sugar => self.eval(&sugar.normalize(), mode),
        }
    }
}

/// `x & !x` or `!x & x`: empty in every model, so exact in both modes.
fn is_syntactic_contradiction(a: &Formula, b: &Formula) -> bool {
    matches!(b, Formula::Not(inner) if **inner == *a) || matches!(a, Formula::Not(inner) if **inner == *b)
}

fn run(pm: &PartialModel, f: &Formula, mode: Mode, trace: bool) -> Result<(StateSet, Option<Vec<Mode>>), BoundsError> {
    f.validate(pm.shape.agent_count(), pm.shape.prop_count())?;
    let mut ev = Evaluator { pm, structures: HashMap::new(), valuations: [None, None], trace: trace.then(Vec::new) };
    let set = ev.eval(f, mode);
    Ok((set, ev.trace))
}

/// Over- or under-approximation of the states satisfying `f` in every total
/// model compatible with `pm`.
pub fn sapp(pm: &PartialModel, f: &Formula, mode: Mode) -> Result<StateSet, BoundsError> {
    run(pm, f, mode, false).map(|(s, _)| s)
}

/// Like [`sapp`], also returning the mode each visited subformula was
/// evaluated in (pre-order).
pub fn sapp_traced(pm: &PartialModel, f: &Formula, mode: Mode) -> Result<(StateSet, Vec<Mode>), BoundsError> {
    run(pm, f, mode, true).map(|(s, t)| (s, t.unwrap_or_default()))
}
