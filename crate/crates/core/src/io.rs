//! JSON interchange formats.
//!
//! * brace: `{"n", "add", "mul"}` with `add[a][b] = a+b`, `mul[a][b] = a∘b`
//! * cycle set: `{"n", "table"}` with `table[x][y] = x·y`
//! * solution: `{"n", "lambda", "rho"}` with `r(x,y) = (lambda[x][y], rho[y][x])`
//! * spec: [`ZGroupBraceSpec`]

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brace::LeftBrace;
use crate::cycleset::{CycleSet, Solution};
use crate::error::{BraceError, CycleSetError, SpecError};
use crate::zgroup::ZGroupBraceSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceJson {
    pub n: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSetJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub n: usize,
    pub lambda: Vec<Vec<usize>>,
    pub rho: Vec<Vec<usize>>,
}

impl From<&LeftBrace> for BraceJson {
    fn from(b: &LeftBrace) -> Self {
        BraceJson { n: b.order(), add: b.add_rows(), mul: b.mul_rows() }
    }
}

impl From<&CycleSet> for CycleSetJson {
    fn from(x: &CycleSet) -> Self {
        CycleSetJson { n: x.size(), table: x.table() }
    }
}

impl From<&Solution> for SolutionJson {
    fn from(s: &Solution) -> Self {
        SolutionJson { n: s.size(), lambda: s.lambda_rows(), rho: s.rho_rows() }
    }
}

fn check_n(declared: usize, rows: usize, what: &str) -> Result<(), String> {
    if declared == rows {
        Ok(())
    } else {
        Err(format!("n = {declared} but {what} has {rows} rows"))
    }
}

impl BraceJson {
    pub fn to_brace(&self) -> Result<LeftBrace, BraceError> {
        check_n(self.n, self.add.len(), "add").map_err(BraceError::Shape)?;
        LeftBrace::validate(&self.add, &self.mul)
    }
}

impl CycleSetJson {
    pub fn to_cycle_set(&self) -> Result<CycleSet, CycleSetError> {
        check_n(self.n, self.table.len(), "table").map_err(CycleSetError::Shape)?;
        CycleSet::validate(&self.table)
    }
}

impl SolutionJson {
    pub fn to_solution(&self) -> Result<Solution, CycleSetError> {
        check_n(self.n, self.lambda.len(), "lambda").map_err(CycleSetError::Shape)?;
        Solution::new(self.lambda.clone(), self.rho.clone())
    }
}

/// Any of the four formats, told apart by their keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Brace(BraceJson),
    CycleSet(CycleSetJson),
    Solution(SolutionJson),
    Spec(ZGroupBraceSpec),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognised document: expected keys of a brace, cycle set, solution or spec")]
    Unknown,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, ParseError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let obj = value.as_object().ok_or(ParseError::Unknown)?;
        let has = |k: &str| obj.contains_key(k);
        let doc = if has("add") && has("mul") {
            Document::Brace(serde_json::from_value(value)?)
        } else if has("table") {
            Document::CycleSet(serde_json::from_value(value)?)
        } else if has("lambda") && has("rho") {
            Document::Solution(serde_json::from_value(value)?)
        } else if ["abar", "acting", "acted", "action"].iter().any(|k| has(k)) || obj.is_empty() {
            Document::Spec(serde_json::from_value(value)?)
        } else {
            return Err(ParseError::Unknown);
        };
        Ok(doc)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Brace(_) => "brace",
            Document::CycleSet(_) => "cycle set",
            Document::Solution(_) => "solution",
            Document::Spec(_) => "spec",
        }
    }
}

/// A validated document.
#[derive(Clone, Debug)]
pub enum Object {
    Brace(LeftBrace),
    CycleSet(CycleSet),
    Solution(Solution),
    Spec(ZGroupBraceSpec),
}

/// First violation found while validating a document.
#[derive(Debug, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Brace(#[from] BraceError),
    #[error(transparent)]
    CycleSet(#[from] CycleSetError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

impl Document {
    pub fn validate(&self) -> Result<Object, ValidationError> {
        Ok(match self {
            Document::Brace(b) => Object::Brace(b.to_brace()?),
            Document::CycleSet(c) => Object::CycleSet(c.to_cycle_set()?),
            Document::Solution(s) => {
                let sol = s.to_solution()?;
                sol.check()?;
                Object::Solution(sol)
            }
            Document::Spec(s) => {
                s.validate()?;
                Object::Spec(s.clone())
            }
        })
    }
}
