//! JSON curve files.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "astroid",
//!   "r": ["sqrt(1 + cos(s)^6 + sin(s)^6)", "cos(s)^3", "sin(s)^3"],
//!   "v": ["...", "...", "..."],
//!   "domain": [0, "2*pi"],
//!   "samples": 1000
//! }
//! ```
//!
//! `v` is optional; without it the dual is built from the tangent direction.
//! Domain bounds may be numbers or constant expressions.

use hyperpedal::{CurveExpr, LegendrePair, ParametricCurve};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Expr(String),
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Number(x) => crate::report::Num(*x).serialize(s),
            Bound::Expr(t) => t.serialize(s),
        }
    }
}

impl Bound {
    fn value(&self) -> Result<f64, CliError> {
        match self {
            Bound::Number(x) => Ok(*x),
            Bound::Expr(text) => {
                let e = CurveExpr::parse(text).map_err(|e| CliError::Usage(format!("domain bound `{text}`: {e}")))?;
                e.eval_scalar(0.0f64)
                    .map_err(|e| CliError::Usage(format!("domain bound `{text}`: {e}")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub schema: u32,
    pub name: String,
    pub r: [String; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<[String; 3]>,
    pub domain: [Bound; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl CurveFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let f: CurveFile = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("curve file: {e}")))?;
        if f.schema != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "curve file: unsupported schema {} (expected {SCHEMA_VERSION})",
                f.schema
            )));
        }
        if f.samples < 2 {
            return Err(CliError::Usage(format!("curve file: samples must be at least 2, got {}", f.samples)));
        }
        Ok(f)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn domain(&self) -> Result<(f64, f64), CliError> {
        Ok((self.domain[0].value()?, self.domain[1].value()?))
    }

    pub fn curve(&self) -> Result<ParametricCurve, CliError> {
        let r = [self.r[0].as_str(), self.r[1].as_str(), self.r[2].as_str()];
        let v = self.v.as_ref().map(|v| [v[0].as_str(), v[1].as_str(), v[2].as_str()]);
        ParametricCurve::from_strs(self.name.clone(), r, v, self.domain()?)
            .map_err(|e| CliError::Usage(format!("curve file: {e}")))
    }

    /// The curve with its dual, sampling `samples` points to orient an
    /// automatic dual.
    pub fn pair(&self, samples: usize) -> Result<LegendrePair, CliError> {
        let curve = self.curve()?;
        let pair = if curve.has_dual() {
            LegendrePair::new(curve)
        } else {
            LegendrePair::auto_dual(curve, samples)
        };
        pair.map_err(CliError::Math)
    }
}
