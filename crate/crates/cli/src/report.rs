//! Report and sample output.
//!
//! Every float is written with 17 significant digits in scientific notation,
//! which round-trips `f64` exactly. Non-finite values become `null` in JSON.

use std::io::Write;

use serde::ser::{Serialize, Serializer};
use serde_json::Number;

use crate::curve_file::CurveFile;
use crate::CliError;

/// `f64` serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

pub fn fmt17(x: f64) -> String {
    let t = format!("{x:.16e}");
    match t.split_once('e') {
        Some((mant, exp)) if !exp.starts_with('-') => format!("{mant}e+{exp}"),
        _ => t,
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n: Number = fmt17(self.0).parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

pub fn nums<const N: usize>(x: [f64; N]) -> [Num; N] {
    x.map(Num)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Toolkit {
    pub name: &'static str,
    pub version: &'static str,
}

impl Toolkit {
    pub fn current() -> Self {
        Self {
            name: "hyperpedal",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Tolerance {
    pub name: &'static str,
    pub value: Num,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<[Num; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub samples: usize,
    pub tolerances: Vec<Tolerance>,
}

/// Top-level JSON report. Field order is fixed by declaration order.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ReportFile<R> {
    pub toolkit: Toolkit,
    pub operation: &'static str,
    pub input: CurveFile,
    pub parameters: Parameters,
    pub results: R,
}

impl<R: serde::Serialize> ReportFile<R> {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ResidualOut {
    pub condition: &'static str,
    pub max: Num,
    pub at: Num,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResults {
    pub pass: bool,
    pub max_residual: Num,
    pub residuals: Vec<ResidualOut>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SingularOut {
    pub s: Num,
    pub point: [Num; 3],
    pub cause: &'static str,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SampleOut {
    pub s: Num,
    pub x: [Num; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<&'static str>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurveResults {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_path: Option<String>,
    pub sample_count: usize,
    /// Parameters where the curve is undefined (degenerate evolute).
    pub skipped: Vec<Num>,
    pub singular_points: Vec<SingularOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleOut>>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurvatureSample {
    pub s: Num,
    pub l: Num,
    pub m: Num,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurvatureResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_path: Option<String>,
    pub sample_count: usize,
    pub m_zeros: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<CurvatureSample>>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ClassifyResults {
    pub s0: Num,
    pub m_germ: String,
    pub l_germ: String,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub location_case: &'static str,
    pub predicted: String,
    pub measured: String,
    pub verdict: &'static str,
}

/// Writes rows of floats as CSV with a header and LF line endings.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt17(x))).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
