//! JSON input and output of the command-line front end.
//!
//! Complex numbers are `[re, im]` arrays, vectors are arrays of those, and
//! matrices are arrays of rows.

use std::io::Read;
use std::path::Path;

use fsl_core::batch::Execution;
use fsl_core::cross_ratios::{self, ConfigTuple};
use fsl_core::forms::{FormParams, FormedSpace};
use fsl_core::linalg::{CMatrix, CVector};
use fsl_core::norms::{NamedCocycle, SupEstimate};
use fsl_core::reduction::{self, ReductionResult};
use fsl_core::report::{CheckRecord, Report};
use fsl_core::tolerances::{TOL_GROUP, TOL_REDUCE};
use fsl_core::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// The report plus command-specific results.
#[derive(Debug, Serialize)]
pub struct Output {
    #[serde(flatten)]
    report: Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
}

impl Output {
    pub fn new(report: Report, result: Option<Value>) -> Self {
        Output { report, result }
    }

    /// Writes pretty JSON to `path` or stdout and returns the overall verdict.
    pub fn emit(&self, path: Option<&Path>) -> Result<bool, CliError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Input(format!("cannot serialise report: {e}")))?;
        text.push('\n');
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(self.report.pass)
    }
}

pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Input of `fsl reduce`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleInput {
    pub eps: i8,
    pub d: u8,
    pub r: usize,
    pub points: Vec<Vec<Complex64>>,
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

fn tuple_vectors(t: &ConfigTuple) -> Vec<Vec<Complex64>> {
    (0..t.len()).map(|i| t.vector(i).iter().copied().collect()).collect()
}

fn parse_tuple(text: &str) -> Result<ConfigTuple, CliError> {
    let input: TupleInput = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    let params = FormParams::new(input.eps, input.d, input.r).map_err(|e| CliError::Input(e.to_string()))?;
    if input.r == 0 {
        return Err(CliError::Input("r must be at least 1".into()));
    }
    let space = FormedSpace::from_params(params);
    if !(3..=5).contains(&input.points.len()) {
        return Err(CliError::Input(format!(
            "expected 3, 4 or 5 points, got {}",
            input.points.len()
        )));
    }
    let vectors = input
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.len() != space.dim() {
                return Err(CliError::Input(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.len(),
                    space.dim()
                )));
            }
            Ok(CVector::from_column_slice(p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ConfigTuple::from_vectors(&space, vectors).map_err(|e| CliError::Input(e.to_string()))
}

/// Runs the reduction described by `text`; genericity and conditioning
/// failures become failing checks, malformed input is an error.
pub fn reduce_json(text: &str) -> Result<(Vec<CheckRecord>, Option<Value>), CliError> {
    let t = parse_tuple(text)?;
    let space = t.space().clone();
    let cert = cross_ratios::genericity(&t);
    let mut checks = Vec::new();
    let generic = match t.len() {
        3 => cert.pairwise && cert.general_position,
        _ => cert.double_generic && cert.general_position,
    };
    let mut gen = CheckRecord::new("reduce/genericity", 1, 0.0, 0.0);
    if !generic {
        gen = gen
            .with_failures(1)
            .with_note(cert.failure.clone().unwrap_or_else(|| "not generic".into()));
        checks.push(gen);
        return Ok((checks, Some(json!({ "genericity": cert }))));
    }
    checks.push(gen);
    let outcome: fsl_core::Result<ReductionResult> = match t.len() {
        3 => reduction::reduce_triple(&t),
        4 => reduction::reduce_quadruple(&t),
        _ => reduction::reduce_quintuple(&t),
    };
    match outcome {
        Ok(res) => {
            let m = res.g.matrix();
            let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm())).powi(2).max(1.0);
            checks.push(CheckRecord::new("reduce/projective residual", 1, res.residual, TOL_REDUCE));
            checks.push(CheckRecord::new(
                "reduce/group membership",
                1,
                space.group_residual(m) / scale,
                TOL_GROUP,
            ));
            let parameters = match t.len() {
                3 => Value::Null,
                4 => json!({ "a": cross_ratios::pi3(&t).ok() }),
                _ => json!(cross_ratios::pi4(&t).ok().map(|p| p.as_array())),
            };
            Ok((
                checks,
                Some(json!({
                    "g": matrix_rows(m),
                    "canonical": tuple_vectors(&res.canonical),
                    "residual": res.residual,
                    "condition": res.condition,
                    "parameters": parameters,
                })),
            ))
        }
        Err(e) => {
            checks.push(
                CheckRecord::new("reduce/projective residual", 1, 0.0, TOL_REDUCE)
                    .with_failures(1)
                    .with_note(e.to_string()),
            );
            Ok((checks, None))
        }
    }
}

/// `fsl estimate-norm`: the estimate must reach 98% of the closed-form
/// supremum and may exceed it by at most 1e-4 relative.
pub fn estimate(
    cocycle: NamedCocycle,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<(Vec<CheckRecord>, Value), CliError> {
    let target = cocycle.target().map_err(|e| CliError::Usage(e.to_string()))?;
    let name = cocycle.name();
    match cocycle.estimate(trials, seed, exec) {
        Ok(est) => {
            let ratio = est.estimate / target;
            let checks = vec![
                CheckRecord::new(format!("estimate-norm/{name} below target"), trials, (1.0 - ratio).max(0.0), 0.02),
                CheckRecord::new(format!("estimate-norm/{name} above target"), trials, (ratio - 1.0).max(0.0), 1e-4),
            ];
            Ok((checks, estimate_json(&name, &est, target, ratio)))
        }
        Err(e) => {
            let rec = CheckRecord::new(format!("estimate-norm/{name}"), trials, 0.0, 0.0)
                .with_failures(1)
                .with_note(e.to_string());
            Ok((vec![rec], json!({ "cocycle": name, "target": target })))
        }
    }
}

fn estimate_json(name: &str, est: &SupEstimate, target: f64, ratio: f64) -> Value {
    json!({
        "cocycle": name,
        "estimate": est.estimate,
        "argmax": est.argmax,
        "raw_estimate": est.raw,
        "raw_argmax": est.raw_argmax,
        "raw_trial": est.raw_index,
        "target": target,
        "ratio": ratio,
        "trials": est.trials,
    })
}
