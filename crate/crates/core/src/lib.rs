//! Pedal curves, orthotomics, evolutes and catacaustics of spacelike frontals
//! in the hyperbolic plane, computed with truncated Taylor jets.

// `!(x > tol)` is used on purpose so NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod constructions;
pub mod dsl;
pub mod error;
pub mod frontal;
pub mod jet;
pub mod minkowski;
pub mod scalar;
pub mod singularity;

pub use dsl::{CurveExpr, ParametricCurve};
pub use error::{Error, Result};
pub use frontal::{Domain, Frame, FrenetData, Legendre, LegendreJet, LegendrePair, ValidationReport};
pub use jet::Jet;
pub use minkowski::{Boost, CausalClass, MVec3};
pub use scalar::{Real, Ring};

pub type Vec3 = MVec3<f64>;
pub type Vec3f = MVec3<f32>;
pub type Jet64 = Jet<f64>;
pub type Jet32 = Jet<f32>;
