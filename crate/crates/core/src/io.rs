//! JSON file formats for operators, phase functions and weights.
//!
//! Complex data is stored as split real/imaginary arrays. Operators are row-major; phase
//! functions use the a-outer, b-inner enumeration of [`Group`]. Numbers are written with
//! shortest round-trip formatting, so reading back a written file is exact.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::Group;
use crate::qft::PhaseFunction;
use crate::spaces::WeightFunction;
use crate::{Operator, C64};

pub const INDEX_ORDER: &str = "a-outer-b-inner";

fn format_err(field: &'static str, message: impl Into<String>) -> Error {
    Error::Format { field, message: message.into() }
}

fn parse_group(factors: &[usize]) -> Result<Group> {
    Group::new(factors).map_err(|e| format_err("factors", e.to_string()))
}

fn check_len(field: &'static str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(format_err(field, format!("expected {expected} entries, got {got}")));
    }
    Ok(())
}

fn check_finite(field: &'static str, xs: &[f64]) -> Result<()> {
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(format_err(field, format!("entry {i} is not finite")));
    }
    Ok(())
}

fn split(values: impl Iterator<Item = C64>) -> (Vec<f64>, Vec<f64>) {
    values.map(|z| (z.re, z.im)).unzip()
}

/// Shared JSON plumbing for the file types.
pub trait JsonFile: Serialize + DeserializeOwned {
    fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| format_err("path", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()? + "\n")
            .map_err(|e| format_err("path", format!("cannot write {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub factors: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl JsonFile for OperatorFile {}

impl OperatorFile {
    pub fn from_operator(group: &Group, op: &Operator) -> Result<Self> {
        let n = group.dim();
        if op.nrows() != n || op.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, rows: op.nrows(), cols: op.ncols() });
        }
        let (re, im) = split(op.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()));
        check_finite("re", &re)?;
        check_finite("im", &im)?;
        Ok(Self { factors: group.factors().to_vec(), rows: n, cols: n, re, im })
    }

    pub fn to_operator(&self) -> Result<(Group, Operator)> {
        let group = parse_group(&self.factors)?;
        let n = group.dim();
        if self.rows != n {
            return Err(format_err("rows", format!("expected {n} (product of factors), got {}", self.rows)));
        }
        if self.cols != n {
            return Err(format_err("cols", format!("expected {n} (product of factors), got {}", self.cols)));
        }
        check_len("re", self.re.len(), n * n)?;
        check_len("im", self.im.len(), n * n)?;
        check_finite("re", &self.re)?;
        check_finite("im", &self.im)?;
        let entries: Vec<C64> = self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect();
        Ok((group, Operator::from_row_slice(n, n, &entries)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunctionFile {
    pub factors: Vec<usize>,
    pub values_re: Vec<f64>,
    pub values_im: Vec<f64>,
    pub index_order: String,
}

impl JsonFile for PhaseFunctionFile {}

impl PhaseFunctionFile {
    pub fn from_phase_function(f: &PhaseFunction) -> Result<Self> {
        let (values_re, values_im) = split(f.values().iter().copied());
        check_finite("values_re", &values_re)?;
        check_finite("values_im", &values_im)?;
        Ok(Self {
            factors: f.group().factors().to_vec(),
            values_re,
            values_im,
            index_order: INDEX_ORDER.to_string(),
        })
    }

    pub fn to_phase_function(&self) -> Result<PhaseFunction> {
        let group = parse_group(&self.factors)?;
        if self.index_order != INDEX_ORDER {
            return Err(format_err("index_order", format!("expected \"{INDEX_ORDER}\", got \"{}\"", self.index_order)));
        }
        let card = group.phase_card();
        check_len("values_re", self.values_re.len(), card)?;
        check_len("values_im", self.values_im.len(), card)?;
        check_finite("values_re", &self.values_re)?;
        check_finite("values_im", &self.values_im)?;
        let values = self.values_re.iter().zip(&self.values_im).map(|(&r, &i)| C64::new(r, i)).collect();
        PhaseFunction::new(group, values)
    }
}

/// A weight `γ` on dual points, a-outer, b-inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub factors: Vec<usize>,
    pub values: Vec<f64>,
}

impl JsonFile for WeightFile {}

impl WeightFile {
    pub fn from_weight(w: &WeightFunction) -> Self {
        Self { factors: w.group().factors().to_vec(), values: w.values().to_vec() }
    }

    pub fn to_weight(&self) -> Result<WeightFunction> {
        let group = parse_group(&self.factors)?;
        check_len("values", self.values.len(), group.phase_card())?;
        WeightFunction::new(group, self.values.clone()).map_err(|e| format_err("values", e.to_string()))
    }
}
