//! JSON documents: group specifications, resolution fiber data, 2-form
//! spectra input, and analysis reports.
//!
//! Scalars are exact. A rational entry is a string `"p/q"` or `"p"` (a JSON
//! integer is also accepted); a general cyclotomic entry is an object
//! `{"coeffs": ["p/q", ...]}` with `φ(conductor)` entries, optionally carrying
//! its own `"conductor"` that divides the document's.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{parse_rational, totient, CyclotomicNumber};
use crate::group::{FiniteMatrixGroup, GroupError};
use crate::linalg::{check_form, standard_symplectic_form, ExactMatrix};
use crate::reflection::VerdictKind;
use crate::spectrum::FormSpectrumInput;
use crate::strata::{OrbitSummary, ResolutionFiberData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {reason}")]
    Validation { path: String, reason: String },
}

fn invalid(path: impl Into<String>, reason: impl Into<String>) -> SpecError {
    SpecError::Validation {
        path: path.into(),
        reason: reason.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSpec {
    /// `Ω(e_{2k-1}, e_{2k}) = 1`.
    Standard,
    Explicit(ExactMatrix),
}

/// A group given by generators, as read from or written to JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub dimension: usize,
    pub conductor: u32,
    pub form: Option<FormSpec>,
    pub generators: Vec<ExactMatrix>,
}

impl GroupSpec {
    pub fn parse(bytes: &[u8]) -> Result<Self, SpecError> {
        let value: Value =
            serde_json::from_slice(bytes).map_err(|e| SpecError::Parse(e.to_string()))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, SpecError> {
        let obj = value
            .as_object()
            .ok_or_else(|| invalid("$", "expected an object"))?;
        let name = match obj.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(invalid("name", "expected a string")),
            None => return Err(invalid("name", "missing")),
        };
        let dimension = match obj.get("dimension") {
            Some(v) => positive_integer(v, "dimension")?,
            None => return Err(invalid("dimension", "missing")),
        };
        let conductor = match obj.get("conductor") {
            Some(v) => {
                let c = positive_integer(v, "conductor")?;
                u32::try_from(c).map_err(|_| invalid("conductor", "too large"))?
            }
            None => 1,
        };
        let form = match obj.get("symplectic_form") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) if s == "standard" => {
                if dimension % 2 != 0 {
                    return Err(invalid(
                        "symplectic_form",
                        format!("standard form needs an even dimension, got {dimension}"),
                    ));
                }
                Some(FormSpec::Standard)
            }
            Some(Value::String(s)) => {
                return Err(invalid(
                    "symplectic_form",
                    format!("unknown form {s:?}; use \"standard\" or a matrix"),
                ))
            }
            Some(v) => {
                let m = parse_matrix(v, dimension, conductor, "symplectic_form")?;
                check_form(&m).map_err(|e| invalid("symplectic_form", e.to_string()))?;
                Some(FormSpec::Explicit(m))
            }
        };
        let generators = match obj.get("generators") {
            Some(Value::Array(gens)) => gens
                .iter()
                .enumerate()
                .map(|(i, g)| parse_matrix(g, dimension, conductor, &format!("generators[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
            Some(_) => return Err(invalid("generators", "expected an array of matrices")),
            None => return Err(invalid("generators", "missing")),
        };
        Ok(GroupSpec {
            name,
            dimension,
            conductor,
            form,
            generators,
        })
    }

    pub fn to_value(&self) -> Value {
        let form = match &self.form {
            None => Value::Null,
            Some(FormSpec::Standard) => Value::String("standard".into()),
            Some(FormSpec::Explicit(m)) => matrix_to_value(m),
        };
        json!({
            "name": self.name,
            "dimension": self.dimension,
            "conductor": self.conductor,
            "symplectic_form": form,
            "generators": self.generators.iter().map(matrix_to_value).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    /// The invariant form as a matrix, if one is attached.
    pub fn omega(&self) -> Option<ExactMatrix> {
        match &self.form {
            None => None,
            Some(FormSpec::Standard) => Some(
                standard_symplectic_form(self.dimension, self.conductor)
                    .expect("validated even dimension"),
            ),
            Some(FormSpec::Explicit(m)) => Some(m.clone()),
        }
    }

    /// Enumerates the group; symplectic if a form is attached, linear otherwise.
    pub fn close(&self, max_order: usize) -> Result<FiniteMatrixGroup, GroupError> {
        match self.omega() {
            Some(omega) => FiniteMatrixGroup::closure(
                self.dimension,
                self.conductor,
                omega,
                self.generators.clone(),
                max_order,
            ),
            None => FiniteMatrixGroup::closure_linear(
                self.dimension,
                self.conductor,
                self.generators.clone(),
                max_order,
            ),
        }
    }
}

fn positive_integer(v: &Value, path: &str) -> Result<usize, SpecError> {
    match v.as_u64() {
        Some(n) if n > 0 => Ok(n as usize),
        _ => Err(invalid(path, "expected a positive integer")),
    }
}

fn parse_matrix(
    v: &Value,
    dimension: usize,
    conductor: u32,
    path: &str,
) -> Result<ExactMatrix, SpecError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(path, "expected a matrix (array of rows)"))?;
    if rows.len() != dimension {
        return Err(invalid(
            path,
            format!("expected {dimension} rows, got {}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(dimension * dimension);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let cells = row
            .as_array()
            .ok_or_else(|| invalid(&row_path, "expected an array"))?;
        if cells.len() != dimension {
            return Err(invalid(
                &row_path,
                format!("expected {dimension} entries, got {}", cells.len()),
            ));
        }
        for (j, cell) in cells.iter().enumerate() {
            entries.push(parse_scalar(cell, conductor, &format!("{row_path}[{j}]"))?);
        }
    }
    Ok(ExactMatrix::new(dimension, dimension, conductor, entries).expect("shape checked"))
}

/// Parses one scalar into `Q(ζ_conductor)`.
pub fn parse_scalar(v: &Value, conductor: u32, path: &str) -> Result<CyclotomicNumber, SpecError> {
    match v {
        Value::String(s) => {
            let r = parse_rational(s).map_err(|e| invalid(path, e.to_string()))?;
            Ok(CyclotomicNumber::from_rational(r, conductor))
        }
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(CyclotomicNumber::from_integer(i, conductor)),
            None => Err(invalid(
                path,
                "non-integer JSON numbers are not exact; write rationals as \"p/q\" strings",
            )),
        },
        Value::Object(obj) => {
            let own = match obj.get("conductor") {
                None => conductor,
                Some(c) => {
                    let c = positive_integer(c, &format!("{path}.conductor"))?;
                    u32::try_from(c)
                        .map_err(|_| invalid(format!("{path}.conductor"), "too large"))?
                }
            };
            if !conductor.is_multiple_of(own) {
                return Err(invalid(
                    format!("{path}.conductor"),
                    format!("{own} does not divide the document conductor {conductor}"),
                ));
            }
            let coeff_path = format!("{path}.coeffs");
            let coeffs = obj
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid(&coeff_path, "expected an array of rationals"))?;
            let expected = totient(own);
            if coeffs.len() != expected {
                return Err(invalid(
                    &coeff_path,
                    format!(
                        "Q(zeta_{own}) needs {expected} coefficients, got {}",
                        coeffs.len()
                    ),
                ));
            }
            let parsed = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let p = format!("{coeff_path}[{k}]");
                    match c {
                        Value::String(s) => {
                            parse_rational(s).map_err(|e| invalid(&p, e.to_string()))
                        }
                        Value::Number(n) => n
                            .as_i64()
                            .map(|i| num_rational::BigRational::from_integer(i.into()))
                            .ok_or_else(|| invalid(&p, "expected an integer or \"p/q\" string")),
                        _ => Err(invalid(&p, "expected a rational")),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let value = CyclotomicNumber::from_coeffs(own, parsed)
                .map_err(|e| invalid(&coeff_path, e.to_string()))?;
            value
                .promote(conductor)
                .map_err(|e| invalid(path, e.to_string()))
        }
        _ => Err(invalid(
            path,
            "expected a rational string or a {\"coeffs\": [...]} object",
        )),
    }
}

pub fn scalar_to_value(x: &CyclotomicNumber) -> Value {
    match x.as_rational() {
        Some(r) => Value::String(r.to_string()),
        None => json!({
            "coeffs": x.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()
        }),
    }
}

pub fn matrix_to_value(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_value).collect()))
            .collect(),
    )
}

/// Reads `{"fibers": {"<stratum index>": dim, ...}}`.
pub fn parse_fibers(bytes: &[u8]) -> Result<ResolutionFiberData, SpecError> {
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| SpecError::Parse(e.to_string()))?;
    let fibers = value
        .get("fibers")
        .and_then(Value::as_object)
        .ok_or_else(|| {
            invalid(
                "fibers",
                "expected an object mapping stratum index to dimension",
            )
        })?;
    let mut out = BTreeMap::new();
    for (k, v) in fibers {
        let path = format!("fibers.{k}");
        let idx: usize = k
            .parse()
            .map_err(|_| invalid(&path, "stratum index must be a nonnegative integer"))?;
        let dim = v
            .as_u64()
            .ok_or_else(|| invalid(&path, "fiber dimension must be a nonnegative integer"))?;
        out.insert(idx, dim as usize);
    }
    Ok(ResolutionFiberData { fibers: out })
}

/// Reads `{"theta": M, "metric": M?}` where each entry of `M` is a number or
/// a `[re, im]` pair. A missing metric means the identity.
pub fn parse_form_input(bytes: &[u8]) -> Result<FormSpectrumInput, SpecError> {
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| SpecError::Parse(e.to_string()))?;
    let theta = parse_complex_matrix(
        value
            .get("theta")
            .ok_or_else(|| invalid("theta", "missing"))?,
        "theta",
    )?;
    let metric = match value.get("metric") {
        None | Some(Value::Null) => DMatrix::identity(theta.nrows(), theta.nrows()),
        Some(v) => parse_complex_matrix(v, "metric")?,
    };
    Ok(FormSpectrumInput { theta, metric })
}

fn parse_complex_matrix(v: &Value, path: &str) -> Result<DMatrix<Complex64>, SpecError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(path, "expected an array of rows"))?;
    let n = rows.len();
    let mut out = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .filter(|c| c.len() == n)
            .ok_or_else(|| invalid(format!("{path}[{i}]"), format!("expected {n} entries")))?;
        for (j, cell) in cells.iter().enumerate() {
            let p = format!("{path}[{i}][{j}]");
            out[(i, j)] = match cell {
                Value::Number(x) => Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0),
                Value::Array(pair) if pair.len() == 2 => {
                    match (pair[0].as_f64(), pair[1].as_f64()) {
                        (Some(re), Some(im)) => Complex64::new(re, im),
                        _ => return Err(invalid(&p, "expected [re, im] numbers")),
                    }
                }
                _ => return Err(invalid(&p, "expected a number or [re, im]")),
            };
        }
    }
    Ok(out)
}

/// Output record of `analyze`. Key order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub dimension: usize,
    pub conductor: u32,
    pub group_order: usize,
    pub reflection_count: usize,
    pub reflection_conjugacy_class_count: usize,
    pub g0_order: usize,
    pub g0_index: usize,
    pub verdict: VerdictKind,
    pub dim2_duval_note: bool,
    /// `None` when `G₀ = G` and there is nothing outside `G₀`.
    pub z_min_codim: Option<usize>,
    pub strata: Option<Vec<OrbitSummary>>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.name)?;
        writeln!(
            f,
            "dimension: {} (conductor {})",
            self.dimension, self.conductor
        )?;
        writeln!(f, "order: {}", self.group_order)?;
        writeln!(
            f,
            "symplectic reflections: {} in {} conjugacy classes",
            self.reflection_count, self.reflection_conjugacy_class_count
        )?;
        writeln!(
            f,
            "reflection subgroup G0: order {}, index {}",
            self.g0_order, self.g0_index
        )?;
        match self.z_min_codim {
            Some(c) => writeln!(f, "min codim of fixed spaces outside G0: {c}")?,
            None => writeln!(f, "min codim of fixed spaces outside G0: none")?,
        }
        if let Some(strata) = &self.strata {
            writeln!(f, "strata (codim, stabilizer order, orbit size):")?;
            for s in strata {
                writeln!(
                    f,
                    "  {:>3}  {:>6}  {:>4}",
                    s.codim, s.stabilizer_order, s.orbit_size
                )?;
            }
        }
        match self.verdict {
            VerdictKind::NoSymplecticResolution => writeln!(
                f,
                "verdict: {} (G is not generated by symplectic reflections)",
                self.verdict.as_str()
            )?,
            VerdictKind::NecessaryConditionHolds => writeln!(
                f,
                "verdict: {} (G is generated by symplectic reflections; existence not decided)",
                self.verdict.as_str()
            )?,
        }
        if self.dim2_duval_note {
            writeln!(
                f,
                "note: dimension 2, a symplectic resolution exists (Du Val)"
            )?;
        }
        Ok(())
    }
}
