//! JSON witness files and Graphviz export of the global transition graph.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{encode_model, successors, Model, ModelError, ModelShape, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessAgent {
    pub locals: usize,
    pub initial: usize,
    /// One `0`/`1` string per local state; character `j` enables action `j`.
    pub protocol: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessState {
    pub index: usize,
    pub locals: Vec<usize>,
    pub props: Vec<usize>,
}

/// Serialized form of a synthesized model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub agents: Vec<WitnessAgent>,
    pub props: usize,
    pub states: Vec<WitnessState>,
    /// The full model bit vector in cell order.
    pub bits: String,
}

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("invalid shape: {0}")]
    Shape(#[from] ShapeError),
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("agent {agent}: protocol row {local} is {row:?}, expected {len} characters of 0/1")]
    Row { agent: usize, local: usize, row: String, len: usize },
    #[error("agent {agent}: {got} protocol rows, expected {expected}")]
    RowCount { agent: usize, expected: usize, got: usize },
    #[error("state {0} out of range or listed twice")]
    State(usize),
    #[error("state {state}: locals {locals:?} do not match the state numbering")]
    StateLocals { state: usize, locals: Vec<usize> },
    #[error("state {state}: proposition {prop} out of range")]
    Prop { state: usize, prop: usize },
    #[error("bit string does not match the protocol and valuation tables")]
    Bits,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Witness {
    pub fn from_model(m: &Model) -> Self {
        let shape = m.shape();
        let agents = (0..shape.agent_count())
            .map(|agent| {
                let n = shape.local_count(agent);
                WitnessAgent {
                    locals: n,
                    initial: shape.initial_locals()[agent],
                    protocol: m
                        .protocol_table(agent)
                        .chunks(n)
                        .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect())
                        .collect(),
                }
            })
            .collect();
        let states = (0..shape.state_count())
            .map(|s| WitnessState { index: s, locals: shape.state_locals(s), props: m.labels(s) })
            .collect();
        Witness { agents, props: shape.prop_count(), states, bits: encode_model(m).to_string() }
    }

    pub fn to_model(&self) -> Result<Model, WitnessError> {
        let shape = ModelShape::new(
            self.agents.iter().map(|a| a.locals).collect(),
            self.agents.iter().map(|a| a.initial).collect(),
            self.props,
        )?;
        let mut protocols = Vec::with_capacity(self.agents.len());
        for (agent, a) in self.agents.iter().enumerate() {
            if a.protocol.len() != a.locals {
                return Err(WitnessError::RowCount { agent, expected: a.locals, got: a.protocol.len() });
            }
            let mut table = Vec::with_capacity(a.locals * a.locals);
            for (local, row) in a.protocol.iter().enumerate() {
                let ok = row.len() == a.locals && row.bytes().all(|b| b == b'0' || b == b'1');
                if !ok {
                    return Err(WitnessError::Row { agent, local, row: row.clone(), len: a.locals });
                }
                table.extend(row.bytes().map(|b| b == b'1'));
            }
            protocols.push(table);
        }
        let mut valuation = vec![false; shape.state_count() * shape.prop_count()];
        let mut seen = vec![false; shape.state_count()];
        for st in &self.states {
            if st.index >= shape.state_count() || seen[st.index] {
                return Err(WitnessError::State(st.index));
            }
            seen[st.index] = true;
            if shape.state_index(&st.locals).ok() != Some(st.index) {
                return Err(WitnessError::StateLocals { state: st.index, locals: st.locals.clone() });
            }
            for &p in &st.props {
                if p >= shape.prop_count() {
                    return Err(WitnessError::Prop { state: st.index, prop: p });
                }
                valuation[st.index * shape.prop_count() + p] = true;
            }
        }
        let m = Model::new(shape, protocols, valuation)?;
        if encode_model(&m).to_string() != self.bits {
            return Err(WitnessError::Bits);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, WitnessError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn tuple(locals: &[usize]) -> String {
    let parts: Vec<String> = locals.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// Graphviz rendering of the global transition graph: one node per global
/// state labelled with its local components and true propositions, one edge
/// per enabled joint action. The initial state is drawn with a double circle.
pub fn to_dot(m: &Model) -> String {
    let shape = m.shape();
    let mut out = String::from("digraph model {\n");
    let init = shape.initial_state();
    for s in 0..shape.state_count() {
        let props: Vec<String> = m.labels(s).iter().map(|p| format!("p{p}")).collect();
        let shape_attr = if s == init { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  s{s} [shape={shape_attr}, label=\"{}\\n{{{}}}\"];",
            tuple(&shape.state_locals(s)),
            props.join(",")
        );
    }
    for s in 0..shape.state_count() {
        for (joint, t) in successors(m, s) {
            let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", tuple(&joint));
        }
    }
    out.push_str("}\n");
    out
}
