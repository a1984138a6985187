//! JSON file formats.
//!
//! A step function is stored as
//! `{"dim": n, "level": L, "side": s0, "values": [...]}` with values in
//! row-major cell order (last axis fastest). An optional `"origin"` array
//! is accepted. Cell sets use the same layout; nonzero values are members.

use serde::{Deserialize, Serialize};

use crate::dyadic::{CellSet, Grid, StepFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFunctionFile {
    pub dim: usize,
    pub level: u32,
    pub side: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<f64>>,
    pub values: Vec<f64>,
}

impl StepFunctionFile {
    pub fn into_step_function(self) -> Result<StepFunction> {
        let grid = match self.origin {
            Some(origin) => Grid::with_origin(self.dim, self.level, self.side, origin)?,
            None => Grid::new(self.dim, self.level, self.side)?,
        };
        StepFunction::new(grid, self.values)
    }
}

impl From<&StepFunction> for StepFunctionFile {
    fn from(f: &StepFunction) -> Self {
        let grid = f.grid();
        let origin = grid
            .origin()
            .iter()
            .any(|&x| x != 0.0)
            .then(|| grid.origin().to_vec());
        Self {
            dim: grid.dim(),
            level: grid.level(),
            side: grid.side(),
            origin,
            values: f.values().to_vec(),
        }
    }
}

/// Parses a step function; rejects wrong lengths and non-finite numbers.
pub fn parse_step_function(json: &str) -> Result<StepFunction> {
    // serde_json refuses NaN/Infinity literals and overflows such as 1e999
    let file: StepFunctionFile =
        serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    file.into_step_function()
}

pub fn step_function_to_json(f: &StepFunction) -> String {
    serde_json::to_string(&StepFunctionFile::from(f)).expect("step functions serialize")
}

pub fn parse_cell_set(json: &str) -> Result<CellSet> {
    let f = parse_step_function(json)?;
    Ok(CellSet::support_of(&f))
}
