//! JSON documents for operators and vectors.
//!
//! ```json
//! {"dim": 2, "weights": ["1", "1"], "entries": [["1/2", "1/3"], [1, 0]]}
//! ```
//!
//! Scalars are read from integers or `"p/q"` strings and always written as
//! canonical strings, so a written document re-reads to identical values and
//! re-writes to identical bytes. `weights` may be omitted (unit weights).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::scalar::Scalar;
use crate::space::{Space, Vec1};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Scalar>>,
    pub entries: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Scalar>>,
    pub entries: Vec<Scalar>,
}

fn build_space(dim: usize, weights: Option<Vec<Scalar>>) -> Result<Arc<Space>> {
    match weights {
        None => Space::unweighted(dim),
        Some(w) if w.len() != dim => Err(Error::Parse(format!(
            "\"weights\" has {} entries but \"dim\" is {dim}",
            w.len()
        ))),
        Some(w) => Space::new(w),
    }
}

fn space_weights(space: &Space) -> Option<Vec<Scalar>> {
    (!space.is_unweighted()).then(|| space.weights().to_vec())
}

impl OperatorDoc {
    pub fn into_operator(self) -> Result<Operator> {
        if self.entries.len() != self.dim {
            return Err(Error::Parse(format!(
                "\"entries\" has {} rows but \"dim\" is {}",
                self.entries.len(),
                self.dim
            )));
        }
        if let Some((i, row)) = self
            .entries
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != self.dim)
        {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                self.dim
            )));
        }
        let space = build_space(self.dim, self.weights)?;
        Operator::from_rows(space, self.entries)
    }

    pub fn from_operator(m: &Operator) -> Self {
        OperatorDoc {
            dim: m.dim(),
            weights: space_weights(m.space()),
            entries: m.rows(),
        }
    }
}

impl VectorDoc {
    pub fn into_vector(self) -> Result<Vec1> {
        if self.entries.len() != self.dim {
            return Err(Error::Parse(format!(
                "\"entries\" has {} coordinates but \"dim\" is {}",
                self.entries.len(),
                self.dim
            )));
        }
        let space = build_space(self.dim, self.weights)?;
        Vec1::new(space, self.entries)
    }

    pub fn from_vector(x: &Vec1) -> Self {
        VectorDoc {
            dim: x.dim(),
            weights: space_weights(x.space()),
            entries: x.coords().to_vec(),
        }
    }
}

pub fn parse_operator(text: &str) -> Result<Operator> {
    let doc: OperatorDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_operator()
}

pub fn operator_to_json(m: &Operator) -> String {
    serde_json::to_string(&OperatorDoc::from_operator(m)).expect("serializable")
}

pub fn parse_vector(text: &str) -> Result<Vec1> {
    let doc: VectorDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_vector()
}

pub fn vector_to_json(x: &Vec1) -> String {
    serde_json::to_string(&VectorDoc::from_vector(x)).expect("serializable")
}
