use thiserror::Error;

/// Errors raised by the geometry toolkit.
///
/// Parameter values and coordinates are reported as `f64` regardless of the
/// scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("null input: zero vector has no causal character")]
    NullInput,

    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("point ({0}, {1}, {2}) is not on the upper sheet of the hyperbolic plane")]
    OffUpperSheet(f64, f64, f64),

    #[error("jet division by vanishing germ (constant term {0})")]
    JetDivision(f64),

    #[error("jet domain error: {func} at constant term {value}")]
    JetDomain { func: &'static str, value: f64 },

    #[error("jets are incompatible: base {base_a} order {order_a} vs base {base_b} order {order_b}")]
    JetMismatch {
        base_a: f64,
        order_a: usize,
        base_b: f64,
        order_b: usize,
    },

    #[error("derivative order {requested} exceeds truncation {order}")]
    DerivativeOrder { requested: usize, order: usize },

    #[error("jet order {requested} exceeds configured maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },

    #[error("syntax error at position {position}: {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("domain error: {func}({arg})")]
    EvalDomain { func: &'static str, arg: f64 },

    #[error("abs is not differentiable through jets")]
    AbsInJet,

    #[error("invalid domain [{0}, {1}]")]
    InvalidDomain(f64, f64),

    #[error("curve singular at s = {0}")]
    CurveSingular(f64),

    #[error("dual undetermined at s = {0}")]
    DualUndetermined(f64),

    #[error("pedal point on curve at s = {0}")]
    PointOnCurve(f64),

    #[error("evolute degenerate at s = {0}")]
    EvoluteDegenerate(f64),

    #[error("grid needs at least {min} samples, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("evaluation failed at s = {s}: {source}")]
    At {
        s: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the parameter value it happened at.
    pub fn at(self, s: f64) -> Self {
        match self {
            e @ Error::At { .. } => e,
            e @ (Error::CurveSingular(_)
            | Error::DualUndetermined(_)
            | Error::PointOnCurve(_)
            | Error::EvoluteDegenerate(_)) => e,
            e => Error::At {
                s,
                source: Box::new(e),
            },
        }
    }

    /// The parameter value attached to this error, if any.
    pub fn parameter(&self) -> Option<f64> {
        match self {
            Error::At { s, .. }
            | Error::CurveSingular(s)
            | Error::DualUndetermined(s)
            | Error::PointOnCurve(s)
            | Error::EvoluteDegenerate(s) => Some(*s),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
