//! Moore-synchronous multi-agent systems in canonical form and their bit-vector
//! encoding.
//!
//! Agent `i` has `n_i` local states and exactly `n_i` actions; action `j` moves
//! the agent to local state `j` from wherever it is enabled. A model is thus
//! fully determined by one `n_i x n_i` protocol table per agent and a
//! valuation table, laid out as
//!
//! ```text
//! [ TB_0 | TB_1 | .. | TB_{n-1} | VB ]
//! TB_i cell  k * n_i + j   = action j enabled at local state k
//! VB   cell  s * |PV| + v  = proposition v holds at global state s
//! ```
//!
//! Global states are numbered mixed-radix with agent 0 most significant.

mod witness;

use std::fmt;

use thiserror::Error;

pub use witness::{to_dot, Witness, WitnessAgent, WitnessError, WitnessState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("a shape needs at least one agent")]
    NoAgents,
    #[error("agent {0} has no local states")]
    NoLocals(usize),
    #[error("{locals} local-state counts but {initial} initial states")]
    LengthMismatch { locals: usize, initial: usize },
    #[error("initial local state {initial} of agent {agent} out of range (agent has {locals})")]
    InitialOutOfRange { agent: usize, initial: usize, locals: usize },
    #[error("shape too large to index")]
    TooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("expected {expected} local components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("local state {local} of agent {agent} out of range")]
    Local { agent: usize, local: usize },
}

/// The fixed frame of a bounded synthesis problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelShape {
    locals: Vec<usize>,
    initial: Vec<usize>,
    prop_count: usize,
    state_count: usize,
    strides: Vec<usize>,
    tb_offsets: Vec<usize>,
    vb_offset: usize,
}

impl ModelShape {
    pub fn new(locals: Vec<usize>, initial: Vec<usize>, prop_count: usize) -> Result<Self, ShapeError> {
        if locals.is_empty() {
            return Err(ShapeError::NoAgents);
        }
        if locals.len() != initial.len() {
            return Err(ShapeError::LengthMismatch { locals: locals.len(), initial: initial.len() });
        }
        for (agent, (&n, &init)) in locals.iter().zip(&initial).enumerate() {
            if n == 0 {
                return Err(ShapeError::NoLocals(agent));
            }
            if init >= n {
                return Err(ShapeError::InitialOutOfRange { agent, initial: init, locals: n });
            }
        }
        let mut strides = vec![0; locals.len()];
        let mut acc: usize = 1;
        for (agent, &n) in locals.iter().enumerate().rev() {
            strides[agent] = acc;
            acc = acc.checked_mul(n).ok_or(ShapeError::TooLarge)?;
        }
        let state_count = acc;
        let mut tb_offsets = Vec::with_capacity(locals.len());
        let mut off: usize = 0;
        for &n in &locals {
            tb_offsets.push(off);
            off = n.checked_mul(n).and_then(|sq| off.checked_add(sq)).ok_or(ShapeError::TooLarge)?;
        }
        state_count.checked_mul(prop_count).and_then(|vb| vb.checked_add(off)).ok_or(ShapeError::TooLarge)?;
        Ok(ModelShape { locals, initial, prop_count, state_count, strides, tb_offsets, vb_offset: off })
    }

    /// Every agent starts in local state 0.
    pub fn uniform(locals: Vec<usize>, prop_count: usize) -> Result<Self, ShapeError> {
        let initial = vec![0; locals.len()];
        ModelShape::new(locals, initial, prop_count)
    }

    pub fn agent_count(&self) -> usize {
        self.locals.len()
    }

    pub fn locals(&self) -> &[usize] {
        &self.locals
    }

    pub fn local_count(&self, agent: usize) -> usize {
        self.locals[agent]
    }

    pub fn initial_locals(&self) -> &[usize] {
        &self.initial
    }

    pub fn prop_count(&self) -> usize {
        self.prop_count
    }

    /// `|St|`, the product of the local-state counts.
    pub fn state_count(&self) -> usize {
        self.state_count
    }

    /// `n_M`, the length of the model bit vector.
    pub fn bit_count(&self) -> usize {
        self.vb_offset + self.state_count * self.prop_count
    }

    /// Number of protocol bits, i.e. the offset of the valuation segment.
    pub fn tb_len(&self) -> usize {
        self.vb_offset
    }

    pub fn tb_offset(&self, agent: usize) -> usize {
        self.tb_offsets[agent]
    }

    pub fn tb_index(&self, agent: usize, local: usize, action: usize) -> usize {
        self.tb_offsets[agent] + local * self.locals[agent] + action
    }

    pub fn vb_index(&self, state: usize, prop: usize) -> usize {
        self.vb_offset + state * self.prop_count + prop
    }

    /// Inverse of the cell layout: what a given bit index controls.
    pub fn cell(&self, index: usize) -> Option<CellRef> {
        if index < self.vb_offset {
            let agent = self.tb_offsets.partition_point(|&o| o <= index) - 1;
            let rel = index - self.tb_offsets[agent];
            let n = self.locals[agent];
            Some(CellRef::Protocol { agent, local: rel / n, action: rel % n })
        } else if index < self.bit_count() {
            let rel = index - self.vb_offset;
            Some(CellRef::Valuation { state: rel / self.prop_count, prop: rel % self.prop_count })
        } else {
            None
        }
    }

    pub fn state_index(&self, locals: &[usize]) -> Result<usize, IndexError> {
        if locals.len() != self.locals.len() {
            return Err(IndexError::Arity { expected: self.locals.len(), got: locals.len() });
        }
        let mut s = 0;
        for (agent, (&l, &n)) in locals.iter().zip(&self.locals).enumerate() {
            if l >= n {
                return Err(IndexError::Local { agent, local: l });
            }
            s += l * self.strides[agent];
        }
        Ok(s)
    }

    /// Stride of `agent` in the mixed-radix state numbering.
    pub fn stride(&self, agent: usize) -> usize {
        self.strides[agent]
    }

    pub fn local_of(&self, state: usize, agent: usize) -> usize {
        (state / self.strides[agent]) % self.locals[agent]
    }

    pub fn state_locals(&self, state: usize) -> Vec<usize> {
        (0..self.agent_count()).map(|a| self.local_of(state, a)).collect()
    }

    pub fn initial_state(&self) -> usize {
        self.state_index(&self.initial).expect("initial locals validated")
    }
}

/// What a single model bit controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRef {
    Protocol { agent: usize, local: usize, action: usize },
    Valuation { state: usize, prop: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("protocol table of agent {agent} has {got} cells, expected {expected}")]
    ProtocolSize { agent: usize, expected: usize, got: usize },
    #[error("expected {expected} protocol tables, got {got}")]
    AgentCount { expected: usize, got: usize },
    #[error("valuation table has {got} cells, expected {expected}")]
    ValuationSize { expected: usize, got: usize },
    #[error("agent {agent} has no enabled action at local state {local}")]
    EmptyProtocolRow { agent: usize, local: usize },
}

/// A concrete model: total protocols with no empty row, and a total valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    shape: ModelShape,
    protocols: Vec<Vec<bool>>,
    valuation: Vec<bool>,
    enabled: Vec<Vec<Vec<usize>>>,
}

impl Model {
    /// `protocols[i]` is agent `i`'s table in row-major order; `valuation` is
    /// state-major.
    pub fn new(shape: ModelShape, protocols: Vec<Vec<bool>>, valuation: Vec<bool>) -> Result<Self, ModelError> {
        if protocols.len() != shape.agent_count() {
            return Err(ModelError::AgentCount { expected: shape.agent_count(), got: protocols.len() });
        }
        for (agent, table) in protocols.iter().enumerate() {
            let n = shape.local_count(agent);
            if table.len() != n * n {
                return Err(ModelError::ProtocolSize { agent, expected: n * n, got: table.len() });
            }
        }
        let expected = shape.state_count() * shape.prop_count();
        if valuation.len() != expected {
            return Err(ModelError::ValuationSize { expected, got: valuation.len() });
        }
        let enabled =
            enabled_lists(&shape, |agent, local, action| protocols[agent][local * shape.local_count(agent) + action]);
        for (agent, rows) in enabled.iter().enumerate() {
            if let Some(local) = rows.iter().position(Vec::is_empty) {
                return Err(ModelError::EmptyProtocolRow { agent, local });
            }
        }
        Ok(Model { shape, protocols, valuation, enabled })
    }

    /// Builds a model from per-row action sets and per-state proposition sets.
    pub fn from_sets(
        shape: ModelShape,
        protocols: &[Vec<Vec<usize>>],
        labels: &[Vec<usize>],
    ) -> Result<Self, ModelError> {
        let tables = protocols
            .iter()
            .enumerate()
            .map(|(agent, rows)| {
                let n = shape.locals.get(agent).copied().unwrap_or(0);
                let mut t = vec![false; n * n];
                for (k, row) in rows.iter().enumerate().take(n) {
                    for &j in row.iter().filter(|&&j| j < n) {
                        t[k * n + j] = true;
                    }
                }
                t
            })
            .collect();
        let mut valuation = vec![false; shape.state_count() * shape.prop_count()];
        for (s, props) in labels.iter().enumerate().take(shape.state_count()) {
            for &v in props.iter().filter(|&&v| v < shape.prop_count()) {
                valuation[s * shape.prop_count() + v] = true;
            }
        }
        Model::new(shape, tables, valuation)
    }

    pub fn shape(&self) -> &ModelShape {
        &self.shape
    }

    pub fn protocol(&self, agent: usize, local: usize, action: usize) -> bool {
        self.protocols[agent][local * self.shape.local_count(agent) + action]
    }

    pub fn protocol_table(&self, agent: usize) -> &[bool] {
        &self.protocols[agent]
    }

    pub fn enabled_actions(&self, agent: usize, local: usize) -> &[usize] {
        &self.enabled[agent][local]
    }

    pub fn holds(&self, state: usize, prop: usize) -> bool {
        self.valuation[state * self.shape.prop_count() + prop]
    }

    pub fn valuation(&self) -> &[bool] {
        &self.valuation
    }

    pub fn labels(&self, state: usize) -> Vec<usize> {
        (0..self.shape.prop_count()).filter(|&v| self.holds(state, v)).collect()
    }
}

pub(crate) fn enabled_lists(shape: &ModelShape, enabled: impl Fn(usize, usize, usize) -> bool) -> Vec<Vec<Vec<usize>>> {
    (0..shape.agent_count())
        .map(|agent| {
            let n = shape.local_count(agent);
            (0..n).map(|local| (0..n).filter(|&a| enabled(agent, local, a)).collect()).collect()
        })
        .collect()
}

/// A three-valued vector over the `n_M` model bits; `None` is undetermined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    shape: ModelShape,
    bits: Vec<Option<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("model bit {index} is undetermined")]
    UndefCell { index: usize },
    #[error("agent {agent} has no enabled action at local state {local}")]
    EmptyProtocolRow { agent: usize, local: usize },
}

impl Assignment {
    pub fn undetermined(shape: ModelShape) -> Self {
        let n = shape.bit_count();
        Assignment { shape, bits: vec![None; n] }
    }

    /// Returns `None` if `bits` has the wrong length.
    pub fn from_bits(shape: ModelShape, bits: Vec<Option<bool>>) -> Option<Self> {
        (bits.len() == shape.bit_count()).then_some(Assignment { shape, bits })
    }

    pub fn shape(&self) -> &ModelShape {
        &self.shape
    }

    pub fn bits(&self) -> &[Option<bool>] {
        &self.bits
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: Option<bool>) {
        self.bits[index] = value;
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.bits.iter().all(Option::is_some)
    }

    /// Parses `0`, `1` and `?` (undetermined) characters.
    pub fn parse_bits(shape: ModelShape, text: &str) -> Option<Self> {
        let bits = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Some(Some(false)),
                '1' => Some(Some(true)),
                '?' => Some(None),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Assignment::from_bits(shape, bits)
    }

    /// The protocol segment TB_i of one agent.
    pub fn tb(&self, agent: usize) -> &[Option<bool>] {
        let start = self.shape.tb_offset(agent);
        let n = self.shape.local_count(agent);
        &self.bits[start..start + n * n]
    }

    pub fn vb(&self) -> &[Option<bool>] {
        &self.bits[self.shape.tb_len()..]
    }
}

/// Renders bits as `0`/`1`/`?` with no separators.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(match b {
                Some(false) => "0",
                Some(true) => "1",
                None => "?",
            })?;
        }
        Ok(())
    }
}

pub fn state_index(shape: &ModelShape, locals: &[usize]) -> Result<usize, IndexError> {
    shape.state_index(locals)
}

pub fn encode_model(m: &Model) -> Assignment {
    let shape = m.shape.clone();
    let mut bits = Vec::with_capacity(shape.bit_count());
    for table in &m.protocols {
        bits.extend(table.iter().map(|&b| Some(b)));
    }
    bits.extend(m.valuation.iter().map(|&b| Some(b)));
    Assignment { shape, bits }
}

pub fn decode_model(a: &Assignment) -> Result<Model, DecodeError> {
    if let Some(index) = a.bits.iter().position(Option::is_none) {
        return Err(DecodeError::UndefCell { index });
    }
    let shape = a.shape.clone();
    let protocols = (0..shape.agent_count()).map(|agent| a.tb(agent).iter().map(|b| b.unwrap()).collect()).collect();
    let valuation = a.vb().iter().map(|b| b.unwrap()).collect();
    Model::new(shape, protocols, valuation).map_err(|e| match e {
        ModelError::EmptyProtocolRow { agent, local } => DecodeError::EmptyProtocolRow { agent, local },
        other => unreachable!("assignment dimensions follow the shape: {other}"),
    })
}

/// All joint actions enabled at `state` with their targets, in
/// lexicographic order of the joint action.
pub fn successors(m: &Model, state: usize) -> Vec<(Vec<usize>, usize)> {
    let shape = m.shape();
    let rows: Vec<&[usize]> =
        (0..shape.agent_count()).map(|a| m.enabled_actions(a, shape.local_of(state, a))).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; rows.len()];
    loop {
        let joint: Vec<usize> = idx.iter().zip(&rows).map(|(&k, r)| r[k]).collect();
        let target = shape.state_index(&joint).expect("actions are local-state indices");
        out.push((joint, target));
        // odometer, last agent fastest
        let mut a = rows.len();
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < rows[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
}
