//! JSON requirements files:
//! `{"agents": [{"locals": 3, "initial": 0}, ...], "props": 3,
//!   "cp": [[agent, local, action, 0|1], ...], "cv": [[state, prop, 0|1], ...]}`

use serde::{Deserialize, Serialize};
use thiserror::Error;

use atlsat_core::mas::{ModelShape, ShapeError};
use atlsat_core::solver::{ProtocolConstraint, Requirements, RequirementsError, ValuationConstraint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub locals: usize,
    #[serde(default)]
    pub initial: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementsFile {
    pub agents: Vec<AgentSpec>,
    pub props: usize,
    #[serde(default)]
    pub cp: Vec<[usize; 4]>,
    #[serde(default)]
    pub cv: Vec<[usize; 3]>,
}

#[derive(Debug, Error)]
pub enum ReqFileError {
    #[error("malformed requirements: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid shape: {0}")]
    Shape(#[from] ShapeError),
    #[error("constraint value {0} is not 0 or 1")]
    Value(usize),
    #[error(transparent)]
    Requirements(#[from] RequirementsError),
}

fn bit(v: usize) -> Result<bool, ReqFileError> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(ReqFileError::Value(other)),
    }
}

impl RequirementsFile {
    pub fn parse(text: &str) -> Result<Self, ReqFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_requirements(&self) -> Result<Requirements, ReqFileError> {
        let shape = ModelShape::new(
            self.agents.iter().map(|a| a.locals).collect(),
            self.agents.iter().map(|a| a.initial).collect(),
            self.props,
        )?;
        let mut req = Requirements::new(shape);
        for &[agent, local, action, value] in &self.cp {
            req.cp_constraints.push(ProtocolConstraint { agent, local, action, value: bit(value)? });
        }
        for &[state, prop, value] in &self.cv {
            req.cv_constraints.push(ValuationConstraint { state, prop, value: bit(value)? });
        }
        req.validate()?;
        Ok(req)
    }

    pub fn from_requirements(req: &Requirements) -> Self {
        let shape = &req.shape;
        RequirementsFile {
            agents: shape
                .locals()
                .iter()
                .zip(shape.initial_locals())
                .map(|(&locals, &initial)| AgentSpec { locals, initial })
                .collect(),
            props: shape.prop_count(),
            cp: req.cp_constraints.iter().map(|c| [c.agent, c.local, c.action, c.value as usize]).collect(),
            cv: req.cv_constraints.iter().map(|c| [c.state, c.prop, c.value as usize]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("requirements serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let text = r#"{"agents": [{"locals": 3, "initial": 0}, {"locals": 2}], "props": 3,
                       "cp": [[0, 1, 2, 0]], "cv": [[5, 2, 1]]}"#;
        let req = RequirementsFile::parse(text).unwrap().to_requirements().unwrap();
        assert_eq!(req.shape.locals(), &[3, 2]);
        assert_eq!(req.cp_constraints[0], ProtocolConstraint { agent: 0, local: 1, action: 2, value: false });
        assert_eq!(req.cv_constraints[0].state, 5);
        let back = RequirementsFile::from_requirements(&req);
        assert_eq!(RequirementsFile::parse(&back.to_json()).unwrap(), back);
    }

    #[test]
    fn rejects_bad_values_and_ranges() {
        let bad_value = r#"{"agents": [{"locals": 2}], "props": 1, "cv": [[0, 0, 2]]}"#;
        assert!(matches!(RequirementsFile::parse(bad_value).unwrap().to_requirements(), Err(ReqFileError::Value(2))));
        let out_of_range = r#"{"agents": [{"locals": 2}], "props": 1, "cv": [[2, 0, 1]]}"#;
        assert!(RequirementsFile::parse(out_of_range).unwrap().to_requirements().is_err());
        assert!(RequirementsFile::parse("{").is_err());
    }
}
