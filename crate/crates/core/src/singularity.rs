//! A_k germ detection on the curvature functions, classification of pedal
//! singularities by their normal-form exponents, and an independent
//! measurement of those exponents from the pedal germ itself.

use std::fmt;

use crate::constructions::{check_point, pedal_from_dual};
use crate::error::Result;
use crate::frontal::{d3, Legendre};
use crate::jet::{Jet, DEFAULT_ORDER, VANISHING_TOL};
use crate::minkowski::{jet_value, MVec3};
use crate::scalar::{lit, Real};

/// Tolerance for `Q = r(s₀)` and for `Q` on the tangent geodesic.
pub const LOCATION_TOL: f64 = 1e-8;

/// Vanishing type of a scalar germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GermOrder {
    /// `f(s₀) ≠ 0`.
    NonVanishing,
    /// `f, …, f^(k)` vanish at `s₀` and `f^(k+1)` does not.
    Ak(usize),
    /// Every derivative within the detection depth vanishes.
    Undetermined,
}

impl GermOrder {
    /// Index of the first non-vanishing derivative.
    pub fn first_nonzero_derivative(self) -> Option<usize> {
        match self {
            GermOrder::NonVanishing => Some(0),
            GermOrder::Ak(k) => Some(k + 1),
            GermOrder::Undetermined => None,
        }
    }
}

impl fmt::Display for GermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermOrder::NonVanishing => f.write_str("A_-1"),
            GermOrder::Ak(k) => write!(f, "A_{k}"),
            GermOrder::Undetermined => f.write_str("undetermined"),
        }
    }
}

/// Classifies a scalar germ, looking at most `order − 3` derivatives deep.
pub fn detect_ak<T: Real>(f: &Jet<T>, tol: T) -> GermOrder {
    let depth = f.order().saturating_sub(3);
    match f.truncate(depth).balanced_vanishing_order(tol) {
        Some(0) => GermOrder::NonVanishing,
        Some(p) => GermOrder::Ak(p - 1),
        None => GermOrder::Undetermined,
    }
}

/// Where the pedal point sits relative to the curve at `s₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocationCase {
    QEqualsCurvePoint,
    QOnTangentGeodesic,
    QGeneric,
    Regular,
}

impl LocationCase {
    pub fn label(self) -> &'static str {
        match self {
            LocationCase::QEqualsCurvePoint => "q_equals_curve_point",
            LocationCase::QOnTangentGeodesic => "q_on_tangent_geodesic",
            LocationCase::QGeneric => "q_generic",
            LocationCase::Regular => "regular",
        }
    }
}

/// `Q = r(s₀)`, else `Q` on the geodesic through `r(s₀)` tangent to `μ(s₀)`
/// (the plane orthogonal to `v(s₀)`), else generic.
pub fn location_case<T: Real, L: Legendre<T> + ?Sized>(
    pair: &L,
    q: &MVec3<f64>,
    s0: T,
    tol: f64,
) -> Result<LocationCase> {
    let f = pair.frame(s0)?;
    let q: MVec3<T> = q.map(|&x| lit(x));
    let tol = lit::<T>(tol);
    Ok(if (q.inner(&f.r) + T::one()).abs() <= tol {
        LocationCase::QEqualsCurvePoint
    } else if q.inner(&f.v).abs() <= tol {
        LocationCase::QOnTangentGeodesic
    } else {
        LocationCase::QGeneric
    })
}

/// Normal-form exponents `(a, b)` of a germ `t ↦ (tᵃ, tᵇ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponents {
    Smooth,
    Pair(usize, usize),
    Undetermined,
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponents::Smooth => f.write_str("smooth"),
            Exponents::Pair(a, b) => write!(f, "({a},{b})"),
            Exponents::Undetermined => f.write_str("undetermined"),
        }
    }
}

/// Exponents from the multiplicity `a` of `P − P(s₀)` and the vanishing order
/// `d` of the area density `det(P, P′, P″)`, via `b = d − a + 3`.
pub fn measure_exponents<T: Real>(p: &MVec3<Jet<T>>, tol: T) -> Exponents {
    let order = p.x1.order();
    let centred = p.map(|c| c.add_scalar(-c.value()));
    let scale = jet_value(p).max_abs().max(T::one());
    let a = (1..=order).find(|&i| {
        [&centred.x1, &centred.x2, &centred.x3]
            .iter()
            .any(|c| c.coeffs()[i].abs() > tol * scale)
    });
    let Some(a) = a else {
        return Exponents::Undetermined;
    };
    if a == 1 {
        return Exponents::Smooth;
    }
    if order < 2 {
        return Exponents::Undetermined;
    }
    let d1 = d3(p);
    let d2 = d3(&d1);
    let k = order - 2;
    let cut = |u: &MVec3<Jet<T>>| u.map(|c| c.truncate(k));
    let det = MVec3::det(&cut(p), &cut(&d1), &d2);
    match det.balanced_vanishing_order(tol) {
        Some(d) if d + 3 > a => Exponents::Pair(a, d + 3 - a),
        _ => Exponents::Undetermined,
    }
}

/// Exponents predicted from the germ types of `m` and `ℓ` and the location of `Q`.
pub fn predict(m: GermOrder, l: GermOrder, case: LocationCase) -> Exponents {
    let k = match l.first_nonzero_derivative() {
        Some(k) => k,
        None => return Exponents::Undetermined,
    };
    match (m, case) {
        (GermOrder::Undetermined, _) => Exponents::Undetermined,
        (GermOrder::NonVanishing, LocationCase::QEqualsCurvePoint) => Exponents::Pair(k + 2, k + 3),
        (GermOrder::NonVanishing, _) => Exponents::Smooth,
        (GermOrder::Ak(jm), case) => {
            let j = jm + 1;
            match case {
                LocationCase::QEqualsCurvePoint => Exponents::Pair(j + k + 2, 2 * j + k + 3),
                LocationCase::QOnTangentGeodesic => Exponents::Pair(j + 1, 2 * j + k + 3),
                LocationCase::QGeneric | LocationCase::Regular => Exponents::Pair(j + 1, j + k + 2),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Match,
    Mismatch,
    Undetermined,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityReport {
    pub s0: f64,
    pub q: MVec3<f64>,
    pub m_germ: GermOrder,
    pub l_germ: GermOrder,
    /// `m` has type `A_{j−1}`.
    pub j: Option<usize>,
    /// `ℓ` has type `A_{k−1}`.
    pub k: Option<usize>,
    pub location_case: LocationCase,
    pub predicted: Exponents,
    pub measured: Exponents,
    pub verdict: Verdict,
}

/// Settings for [`classify_pedal`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub order: usize,
    pub germ_tol: f64,
    pub location_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            germ_tol: VANISHING_TOL,
            location_tol: LOCATION_TOL,
        }
    }
}

/// Predicts the pedal germ at `s₀` from the curvature germs and checks the
/// prediction against the measured exponents.
pub fn classify_pedal<L: Legendre<f64> + ?Sized>(
    pair: &L,
    q: &MVec3<f64>,
    s0: f64,
    opts: ClassifyOptions,
) -> Result<SingularityReport> {
    check_point(q)?;
    let frame = pair.jets(s0, opts.order + 2).map_err(|e| e.at(s0))?;
    let m_germ = detect_ak(&frame.m.truncate(opts.order), opts.germ_tol);
    let l_germ = detect_ak(&frame.l.truncate(opts.order), opts.germ_tol);
    let geometric = location_case(pair, q, s0, opts.location_tol)?;
    let predicted = predict(m_germ, l_germ, geometric);
    let location_case = if predicted == Exponents::Smooth {
        LocationCase::Regular
    } else {
        geometric
    };
    let pedal = pedal_from_dual(&frame.v, q).map_err(|e| e.at(s0))?;
    let measured = measure_exponents(&pedal, opts.germ_tol);
    let verdict = match (predicted, measured) {
        (Exponents::Undetermined, _) | (_, Exponents::Undetermined) => Verdict::Undetermined,
        (p, m) if p == m => Verdict::Match,
        _ => Verdict::Mismatch,
    };
    Ok(SingularityReport {
        s0,
        q: *q,
        m_germ,
        l_germ,
        j: m_germ.first_nonzero_derivative(),
        k: l_germ.first_nonzero_derivative(),
        location_case,
        predicted,
        measured,
        verdict,
    })
}

/// Residuals of the derivative identities of the dual curve at `s₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    /// `|⟨v″, v⟩ + m²|`
    pub vv: f64,
    /// `|⟨v″, μ⟩ − m′|`
    pub vmu: f64,
    /// With `k` the vanishing order of `ℓ` (when `k ≥ 1`):
    /// `|⟨v^(k+3), r⟩ + (k+2) m′ ℓ^(k) + m ℓ^(k+1)|`, relative to the right side.
    pub higher: Option<(usize, f64)>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.vv.max(self.vmu).max(self.higher.map_or(0.0, |(_, r)| r))
    }
}

/// Evaluates the identities from jets of depth `depth` (at least 4).
pub fn derivative_identity_check<L: Legendre<f64> + ?Sized>(pair: &L, s0: f64, depth: usize) -> Result<IdentityReport> {
    let depth = depth.max(4);
    let j = pair.jets(s0, depth + 1).map_err(|e| e.at(s0))?;
    let f = j.value();
    let v2 = j.v.map(|c| c.derivative(2).unwrap_or(f64::NAN));
    let m1 = j.m.derivative(1)?;
    let vv = (v2.inner(&f.v) + f.m * f.m).abs() / f.m.abs().max(1.0).powi(2);
    let vmu = (v2.inner(&f.mu) - m1).abs() / m1.abs().max(1.0);
    let higher = match detect_ak(&j.l, VANISHING_TOL).first_nonzero_derivative() {
        Some(k) if k >= 1 && k + 3 <= depth + 1 => {
            let vk = j.v.map(|c| c.derivative(k + 3).unwrap_or(f64::NAN));
            let lhs = vk.inner(&f.r);
            let rhs = -((k + 2) as f64) * m1 * j.l.derivative(k)? - f.m * j.l.derivative(k + 1)?;
            Some((k, (lhs - rhs).abs() / rhs.abs().max(1.0)))
        }
        _ => None,
    };
    Ok(IdentityReport { vv, vmu, higher })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::frontal::LegendrePair;
    use crate::minkowski::Boost;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn jet(c: &[f64]) -> Jet<f64> {
        Jet::from_coeffs(0.0, c.to_vec())
    }

    #[test]
    fn germ_orders_of_golden_curvatures() {
        let pair = LegendrePair::new(catalog::cusp()).unwrap();
        let j = pair.jets(0.0f64, 17).unwrap();
        assert_eq!(detect_ak(&j.l, 1e-8), GermOrder::Ak(0));
        assert_eq!(detect_ak(&j.m, 1e-8), GermOrder::NonVanishing);
        let pair = LegendrePair::new(catalog::cusp_3_7()).unwrap();
        let j = pair.jets(0.0f64, 17).unwrap();
        assert_eq!(detect_ak(&j.m, 1e-8), GermOrder::Ak(2));
        assert_eq!(detect_ak(&j.l, 1e-8), GermOrder::Ak(1));
        assert_eq!(detect_ak(&jet(&[1.5, 0.0, 0.0, 0.0]), 1e-8), GermOrder::NonVanishing);
        assert_eq!(detect_ak(&jet(&[0.0; 8]), 1e-8), GermOrder::Undetermined);
        // depth is capped at order − 3
        assert_eq!(detect_ak(&jet(&[0.0, 0.0, 0.0, 1.0]), 1e-8), GermOrder::Undetermined);
        assert_eq!(detect_ak(&jet(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]), 1e-8), GermOrder::Ak(2));
    }

    #[test]
    fn location_cases() {
        let pair = LegendrePair::new(catalog::cusp()).unwrap();
        let q2 = MVec3::new(1.7320508075688772, 1.0, 1.0);
        assert_eq!(location_case(&pair, &q2, 1.0f64, 1e-8).unwrap(), LocationCase::QEqualsCurvePoint);
        let q3 = MVec3::new(1.0, 0.0, 0.0);
        assert_eq!(location_case(&pair, &q3, 0.0f64, 1e-8).unwrap(), LocationCase::QEqualsCurvePoint);
        let q1 = MVec3::new(SQRT_2, 1.0, 0.0);
        assert_eq!(location_case(&pair, &q1, 0.0f64, 1e-8).unwrap(), LocationCase::QOnTangentGeodesic);
        assert_eq!(location_case(&pair, &q1, 0.5f64, 1e-8).unwrap(), LocationCase::QGeneric);
    }

    #[test]
    fn prediction_table() {
        use GermOrder::*;
        use LocationCase::*;
        assert_eq!(predict(NonVanishing, NonVanishing, QEqualsCurvePoint), Exponents::Pair(2, 3));
        assert_eq!(predict(NonVanishing, Ak(0), QEqualsCurvePoint), Exponents::Pair(3, 4));
        assert_eq!(predict(NonVanishing, Ak(0), QGeneric), Exponents::Smooth);
        assert_eq!(predict(Ak(2), Ak(1), QEqualsCurvePoint), Exponents::Pair(7, 11));
        assert_eq!(predict(Ak(0), NonVanishing, QOnTangentGeodesic), Exponents::Pair(2, 5));
        assert_eq!(predict(Ak(0), NonVanishing, QGeneric), Exponents::Pair(2, 3));
        assert_eq!(predict(NonVanishing, Undetermined, QEqualsCurvePoint), Exponents::Undetermined);
        assert_eq!(predict(Undetermined, NonVanishing, QGeneric), Exponents::Undetermined);
    }

    #[test]
    fn golden_classifications() {
        let opts = ClassifyOptions::default();
        let cusp = LegendrePair::new(catalog::cusp()).unwrap();
        let cases = [
            (&cusp, MVec3::new(1.7320508075688772, 1.0, 1.0), 1.0, Exponents::Pair(2, 3)),
            (&cusp, MVec3::new(1.0, 0.0, 0.0), 0.0, Exponents::Pair(3, 4)),
            (&cusp, MVec3::new(SQRT_2, 1.0, 0.0), 0.0, Exponents::Smooth),
        ];
        for (pair, q, s0, want) in cases {
            let rep = classify_pedal(pair, &q, s0, opts).unwrap();
            assert_eq!(rep.predicted, want, "{rep:?}");
            assert_eq!(rep.measured, want, "{rep:?}");
            assert_eq!(rep.verdict, Verdict::Match);
        }
        let deep = LegendrePair::new(catalog::cusp_3_7()).unwrap();
        let rep = classify_pedal(&deep, &MVec3::new(1.0, 0.0, 0.0), 0.0, opts).unwrap();
        assert_eq!((rep.j, rep.k), (Some(3), Some(2)));
        assert_eq!(rep.location_case, LocationCase::QEqualsCurvePoint);
        assert_eq!(rep.predicted, Exponents::Pair(7, 11));
        assert_eq!(rep.measured, Exponents::Pair(7, 11));
        assert_eq!(rep.verdict, Verdict::Match);
    }

    #[test]
    fn degenerate_cusp_generic_point_matches() {
        let deep = LegendrePair::new(catalog::cusp_3_7()).unwrap();
        let q = MVec3::new(3f64.sqrt(), 1.0, 1.0);
        let rep = classify_pedal(&deep, &q, 0.0, ClassifyOptions::default()).unwrap();
        assert_eq!(rep.location_case, LocationCase::QGeneric);
        assert_eq!(rep.predicted, Exponents::Pair(4, 7));
        assert_eq!(rep.verdict, Verdict::Match, "{rep:?}");
    }

    #[test]
    fn det_oracle_counts_removable_square_term() {
        // On the tangent geodesic the pedal germ is (t⁴ + …, t⁸ + c·t¹¹ + …).
        // The t⁸ = (t⁴)² term is removable by a target change, but it fixes the
        // order of the area density, so the oracle reads (4, 8).
        let deep = LegendrePair::new(catalog::cusp_3_7()).unwrap();
        let rep = classify_pedal(&deep, &MVec3::new(SQRT_2, 1.0, 0.0), 0.0, ClassifyOptions::default()).unwrap();
        assert_eq!(rep.location_case, LocationCase::QOnTangentGeodesic);
        assert_eq!(rep.predicted, Exponents::Pair(4, 11));
        assert_eq!(rep.measured, Exponents::Pair(4, 8));
        assert_eq!(rep.verdict, Verdict::Mismatch);
    }

    #[test]
    fn plane_model_germ() {
        let c = crate::dsl::ParametricCurve::from_strs(
            "model",
            ["sqrt(1 + s^4 + s^6)", "s^2", "s^3"],
            None,
            (-1.0, 1.0),
        )
        .unwrap();
        let p = c.jets(0.0f64, 18).unwrap();
        assert_eq!(measure_exponents(&p, 1e-8), Exponents::Pair(2, 3));
        let p = c.jets(0.5f64, 18).unwrap();
        assert_eq!(measure_exponents(&p, 1e-8), Exponents::Smooth);
    }

    #[test]
    fn identities_hold() {
        for curve in catalog::all() {
            let pair = LegendrePair::new(curve).unwrap();
            for s in [0.1, 0.9, 1.3] {
                let rep = derivative_identity_check(&pair, s, 6).unwrap();
                assert!(rep.vv <= 1e-8 && rep.vmu <= 1e-8, "{rep:?}");
            }
        }
        let pair = LegendrePair::new(catalog::cusp()).unwrap();
        let rep = derivative_identity_check(&pair, 0.0, 8).unwrap();
        let (k, r) = rep.higher.unwrap();
        assert_eq!(k, 1);
        assert!(r <= 1e-7, "{rep:?}");
    }

    #[test]
    fn measured_exponents_survive_boost() {
        let pair = LegendrePair::new(catalog::cusp_3_7()).unwrap();
        let q = MVec3::new(1.0, 0.0, 0.0);
        let frame = pair.jets(0.0f64, 18).unwrap();
        let ped = pedal_from_dual(&frame.v, &q).unwrap();
        let boost = Boost::to_origin(&MVec3::new(SQRT_2, 1.0, 0.0)).unwrap();
        let moved = boost.apply_jets(&ped);
        assert_eq!(measure_exponents(&moved, 1e-8), measure_exponents(&ped, 1e-8));
    }

    #[test]
    fn classification_survives_parameter_scaling() {
        let c = catalog::cusp_3_7();
        let scaled = c
            .reparametrize(&crate::dsl::CurveExpr::parse("0.5*s").unwrap(), (-4.0, 4.0))
            .unwrap();
        let (a, b) = (LegendrePair::new(c).unwrap(), LegendrePair::new(scaled).unwrap());
        let q = MVec3::new(1.0, 0.0, 0.0);
        let opts = ClassifyOptions::default();
        let ra = classify_pedal(&a, &q, 0.0, opts).unwrap();
        let rb = classify_pedal(&b, &q, 0.0, opts).unwrap();
        assert_eq!(
            (ra.j, ra.k, ra.location_case, ra.predicted, ra.measured),
            (rb.j, rb.k, rb.location_case, rb.predicted, rb.measured)
        );
    }

    proptest! {
        #[test]
        fn germ_order_ignores_sign(c in proptest::collection::vec(-2.0f64..2.0, 6..12), zeros in 0usize..5) {
            let mut c = c;
            for x in c.iter_mut().take(zeros) {
                *x = 0.0;
            }
            let f = jet(&c);
            prop_assert_eq!(detect_ak(&f, 1e-8), detect_ak(&(-f.clone()), 1e-8));
        }
    }
}
