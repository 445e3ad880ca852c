//! Closed-form curves used as worked examples and test fixtures.

use crate::dsl::ParametricCurve;

const TAU: f64 = std::f64::consts::TAU;

/// Hyperbolic astroid `(√(1+cos⁶+sin⁶), cos³, sin³)` with its Legendre dual.
pub fn astroid() -> ParametricCurve {
    ParametricCurve::from_strs(
        "astroid",
        [
            "sqrt(1 + cos(s)^6 + sin(s)^6)",
            "cos(s)^3",
            "sin(s)^3",
        ],
        Some([
            "sin(s)*cos(s)*sqrt(1 + cos(s)^6 + sin(s)^6) / sqrt(1 + sin(s)^2*cos(s)^2)",
            "sin(s)*(1 + cos(s)^4) / sqrt(1 + sin(s)^2*cos(s)^2)",
            "cos(s)*(1 + sin(s)^4) / sqrt(1 + sin(s)^2*cos(s)^2)",
        ]),
        (0.0, TAU),
    )
    .expect("astroid formulas parse")
}

/// `(√(1+s⁴+s⁶), s², s³)`: an ordinary cusp at `s = 0`.
pub fn cusp() -> ParametricCurve {
    ParametricCurve::from_strs(
        "cusp",
        ["sqrt(1 + s^4 + s^6)", "s^2", "s^3"],
        Some([
            "s^3*sqrt(1 + s^4 + s^6) / sqrt(s^6 + 9*s^2 + 4)",
            "(s^5 + 3*s) / sqrt(s^6 + 9*s^2 + 4)",
            "(s^6 - 2) / sqrt(s^6 + 9*s^2 + 4)",
        ]),
        (-2.0, 2.0),
    )
    .expect("cusp formulas parse")
}

/// `(√(1+s⁶+s¹⁴), s³, s⁷)`: a degenerate cusp where both curvatures vanish.
pub fn cusp_3_7() -> ParametricCurve {
    ParametricCurve::from_strs(
        "cusp_3_7",
        ["sqrt(1 + s^6 + s^14)", "s^3", "s^7"],
        Some([
            "4*s^7*sqrt(1 + s^6 + s^14) / sqrt(16*s^14 + 49*s^8 + 9)",
            "(7*s^4 + 4*s^10) / sqrt(16*s^14 + 49*s^8 + 9)",
            "(4*s^14 - 3) / sqrt(16*s^14 + 49*s^8 + 9)",
        ]),
        (-2.0, 2.0),
    )
    .expect("cusp_3_7 formulas parse")
}

/// Hyperbolic circle of radius `a` about `(1,0,0)`, without an explicit dual.
pub fn circle(a: f64) -> ParametricCurve {
    ParametricCurve::from_strs(
        "circle",
        [
            &format!("cosh({a})"),
            &format!("sinh({a})*cos(s)"),
            &format!("sinh({a})*sin(s)"),
        ],
        None,
        (0.0, TAU),
    )
    .expect("circle formulas parse")
}

/// Every catalog curve, the circle at radius 1.
pub fn all() -> Vec<ParametricCurve> {
    vec![astroid(), cusp(), cusp_3_7(), circle(1.0)]
}
