//! Curves derived from a Legendrian frontal and a point `Q` on the hyperbolic
//! plane: pedal, orthotomic, evolute and catacaustic, the Legendre structures
//! they inherit, and location of their singular points.

use crate::dsl::ParametricCurve;
use crate::error::{Error, Result};
use crate::frontal::{d3, frenet_regular, grid, Domain, Frame, Legendre, LegendreJet, DEFAULT_SAMPLES};
use crate::jet::Jet;
use crate::minkowski::{const_jets, jet_value, MVec3};
use crate::scalar::{lit, Real};

/// Tolerance for `Q` lying on the hyperboloid.
pub const POINT_TOL: f64 = 1e-9;

/// `|⟨Q, r⟩ + 1|` below this counts as `Q` on the curve.
pub const ON_CURVE_TOL: f64 = 1e-9;

/// Relative threshold on `|m² − ℓ²|` below which the evolute is not defined.
pub const EVOLUTE_DEGENERACY_TOL: f64 = 1e-12;

/// Bisection stops once brackets are this narrow.
pub const ROOT_RESOLUTION: f64 = 1e-10;

/// A local minimum of the speed counts as singular below this fraction of the
/// largest speed on the grid.
pub const SINGULAR_SPEED_TOL: f64 = 1e-6;

/// Rejects points off the upper sheet.
pub fn check_point(q: &MVec3<f64>) -> Result<()> {
    if q.is_finite() && q.on_upper_sheet(POINT_TOL) {
        Ok(())
    } else {
        Err(Error::OffUpperSheet(q.x1, q.x2, q.x3))
    }
}

fn lift<T: Real>(q: &MVec3<f64>) -> MVec3<T> {
    q.map(|&x| lit::<T>(x))
}

fn q_jets<T: Real>(q: &MVec3<f64>, like: &Jet<T>) -> MVec3<Jet<T>> {
    const_jets(&lift(q), like.base(), like.order())
}

fn scaled<T: Real>(u: &MVec3<Jet<T>>, k: &Jet<T>) -> MVec3<Jet<T>> {
    u.map(|c| c.clone() * k.clone())
}

fn divided<T: Real>(u: &MVec3<Jet<T>>, k: &Jet<T>) -> Result<MVec3<Jet<T>>> {
    u.try_map(|c| c.div(k))
}

/// Pedal germ `(Q − ⟨Q,v⟩v)/√(1+⟨Q,v⟩²)` from the dual germ.
pub fn pedal_from_dual<T: Real>(v: &MVec3<Jet<T>>, q: &MVec3<f64>) -> Result<MVec3<Jet<T>>> {
    let qj = q_jets(q, &v.x1);
    let qv = qj.inner(v);
    let denom = (qv.clone() * qv.clone()).add_scalar(T::one()).sqrt()?;
    divided(&(qj - scaled(v, &qv)), &denom)
}

/// Orthotomic germ `Q − 2⟨Q,v⟩v` from the dual germ.
pub fn orthotomic_from_dual<T: Real>(v: &MVec3<Jet<T>>, q: &MVec3<f64>) -> MVec3<Jet<T>> {
    let qj = q_jets(q, &v.x1);
    let qv = qj.inner(v).scale(lit(2.0));
    qj - scaled(v, &qv)
}

/// Pedal point at `s`.
pub fn pedal<T: Real, L: Legendre<T> + ?Sized>(pair: &L, q: &MVec3<f64>, s: T) -> Result<MVec3<T>> {
    check_point(q)?;
    let v = pair.jets(s, 1)?.v.map(|c| c.truncate(0));
    Ok(jet_value(&pedal_from_dual(&v, q)?))
}

/// Pedal of a regular curve through its Frenet normal.
pub fn pedal_regular<T: Real>(curve: &ParametricCurve, q: &MVec3<f64>, s: T) -> Result<MVec3<T>> {
    check_point(q)?;
    let n = frenet_regular(curve, s)?.n;
    let q = lift::<T>(q);
    let qn = q.inner(&n);
    Ok((q - n * qn) * (T::one() + qn * qn).sqrt().recip())
}

/// Closed-form derivative of the pedal in terms of the frame and `m`.
pub fn pedal_derivative<T: Real>(frame: &Frame<T>, q: &MVec3<f64>) -> MVec3<T> {
    let q = lift::<T>(q);
    let (qr, qv, qm) = (q.inner(&frame.r), q.inner(&frame.v), q.inner(&frame.mu));
    let w = T::one() + qv * qv;
    let first = (frame.v * qm + frame.mu * qv) * (-frame.m / w.sqrt());
    let second = (frame.r * (-qr) + frame.mu * qm) * (-frame.m * qv * qm / (w * w.sqrt()));
    first + second
}

/// Orthotomic point at `s`.
pub fn orthotomic<T: Real, L: Legendre<T> + ?Sized>(pair: &L, q: &MVec3<f64>, s: T) -> Result<MVec3<T>> {
    check_point(q)?;
    let v = pair.jets(s, 1)?.v.map(|c| c.truncate(0));
    Ok(jet_value(&orthotomic_from_dual(&v, q)))
}

/// `φ_Q(x) = −2⟨Q,x⟩x − Q`, carrying the pedal onto the orthotomic.
pub fn reflect_through<T: Real>(q: &MVec3<f64>, x: &MVec3<T>) -> MVec3<T> {
    let q = lift::<T>(q);
    *x * (lit::<T>(-2.0) * q.inner(x)) - q
}

/// Which sheet the evolute lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Hyperbolic,
    DeSitter,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Hyperbolic => "H2",
            Branch::DeSitter => "dS2",
        }
    }
}

/// Evolute germ `±(m r − ℓ v)/√|m² − ℓ²|` of order `order`, re-signed so the
/// hyperbolic branch has positive first component.
pub fn evolute_jets<T: Real, L: Legendre<T> + ?Sized>(
    pair: &L,
    s: T,
    order: usize,
) -> Result<(MVec3<Jet<T>>, Branch)> {
    let sf = s.to_f64().unwrap_or(f64::NAN);
    let j = pair.jets(s, order + 1)?;
    let (l, m) = (j.l.clone(), j.m.clone());
    let (l0, m0) = (l.value(), m.value());
    let gap = m0 * m0 - l0 * l0;
    let floor = lit::<T>(EVOLUTE_DEGENERACY_TOL) * (m0 * m0).max(l0 * l0).max(T::one());
    if !(gap.abs() > floor) {
        return Err(Error::EvoluteDegenerate(sf));
    }
    let branch = if gap > T::zero() {
        Branch::Hyperbolic
    } else {
        Branch::DeSitter
    };
    let r = j.r.map(|c| c.truncate(order));
    let v = j.v.map(|c| c.truncate(order));
    let mut gap_jet = m.clone() * m.clone() - l.clone() * l.clone();
    if branch == Branch::DeSitter {
        gap_jet = -gap_jet;
    }
    let norm = gap_jet.sqrt().map_err(|_| Error::EvoluteDegenerate(sf))?;
    let mut e = divided(&(scaled(&r, &m) - scaled(&v, &l)), &norm)
        .map_err(|_| Error::EvoluteDegenerate(sf))?;
    if branch == Branch::Hyperbolic && e.x1.value() < T::zero() {
        e = -e;
    }
    Ok((e, branch))
}

pub fn evolute<T: Real, L: Legendre<T> + ?Sized>(pair: &L, s: T) -> Result<(MVec3<T>, Branch)> {
    let (e, b) = evolute_jets(pair, s, 0)?;
    Ok((jet_value(&e), b))
}

/// Fails with the offending parameter when `Q` lies on the curve: the
/// minimum of `−⟨Q, r⟩ − 1 ≥ 0` over the domain is located on a grid, refined
/// by bisection and compared against the on-curve tolerance.
pub fn check_off_curve<L: Legendre<f64> + ?Sized>(pair: &L, q: &MVec3<f64>, samples: usize) -> Result<()> {
    let g = grid(pair.domain(), samples)?;
    let gap = |s: f64| -> Result<f64> { Ok((q.inner(&pair.frame(s)?.r) + 1.0).abs()) };
    let slope = |s: f64| -> Result<f64> {
        let r1 = pair.jets(s, 1)?.r.map(|c| c.coeffs()[1]);
        Ok(-q.inner(&r1))
    };
    let mut candidates = local_minima(slope, &g)?;
    candidates.push(g[0]);
    candidates.push(g[g.len() - 1]);
    for s in candidates {
        if gap(s)? < ON_CURVE_TOL {
            return Err(Error::PointOnCurve(s));
        }
    }
    Ok(())
}

/// `(Ped_Q, v̆)` with the pedal's own Legendre frame.
#[derive(Clone, Copy, Debug)]
pub struct PedalInduced<'a, L: ?Sized> {
    source: &'a L,
    q: MVec3<f64>,
}

impl<'a, L: Legendre<f64> + ?Sized> PedalInduced<'a, L> {
    /// Requires `Q` on the upper sheet and off the curve.
    pub fn new(source: &'a L, q: MVec3<f64>) -> Result<Self> {
        check_point(&q)?;
        check_off_curve(source, &q, DEFAULT_SAMPLES)?;
        Ok(Self { source, q })
    }
}

impl<L: ?Sized> PedalInduced<'_, L> {
    pub fn point(&self) -> MVec3<f64> {
        self.q
    }

    /// `ℓ̆ = m·√(⟨Q,μ⟩²(1+⟨Q,v⟩²) + ⟨Q,r⟩²⟨Q,v⟩²)/(1+⟨Q,v⟩²)`.
    pub fn curvature_formula<T: Real>(&self, frame: &Frame<T>) -> T {
        let q = lift::<T>(&self.q);
        let (qr, qv, qm) = (q.inner(&frame.r), q.inner(&frame.v), q.inner(&frame.mu));
        let w = T::one() + qv * qv;
        frame.m * (qm * qm * w + qr * qr * qv * qv).sqrt() / w
    }
}

impl<L: ?Sized> Domain for PedalInduced<'_, L>
where
    L: Domain,
{
    fn domain(&self) -> (f64, f64) {
        self.source.domain()
    }
}

impl<T: Real, L: Legendre<T> + ?Sized> Legendre<T> for PedalInduced<'_, L> {
    fn jets(&self, s: T, order: usize) -> Result<LegendreJet<T>> {
        let src = self.source.jets(s, order.max(1))?;
        let ped = pedal_from_dual(&src.v, &self.q)?;
        let qj = q_jets(&self.q, &src.r.x1);
        let (qr, qv, qm) = (qj.inner(&src.r), qj.inner(&src.v), qj.inner(&src.mu));
        let w = (qv.clone() * qv.clone()).add_scalar(T::one());
        let d = (qm.clone() * qm.clone() * w + qr.clone() * qr.clone() * qv.clone() * qv.clone()).sqrt()?;
        let num = scaled(&src.r, &(qm.clone() * qm.clone())) + scaled(&src.v, &(qr.clone() * qv))
            - scaled(&src.mu, &(qr * qm));
        let dual = divided(&num, &d)?;
        Ok(LegendreJet::from_frame(ped, dual))
    }
}

/// `(Ort_Q, v̄)` with the orthotomic's own Legendre frame.
#[derive(Clone, Copy, Debug)]
pub struct OrthotomicInduced<'a, L: ?Sized> {
    source: &'a L,
    q: MVec3<f64>,
}

impl<'a, L: Legendre<f64> + ?Sized> OrthotomicInduced<'a, L> {
    /// Requires `Q` on the upper sheet and off the curve.
    pub fn new(source: &'a L, q: MVec3<f64>) -> Result<Self> {
        check_point(&q)?;
        check_off_curve(source, &q, DEFAULT_SAMPLES)?;
        Ok(Self { source, q })
    }
}

impl<L: ?Sized> OrthotomicInduced<'_, L> {
    pub fn point(&self) -> MVec3<f64> {
        self.q
    }

    /// `ℓ̄ = −2m√(⟨Q,r⟩² − 1)` as printed; the frame used here (with
    /// `μ̄ = Ort ∧ v̄`) yields the opposite sign.
    pub fn curvature_formula<T: Real>(&self, frame: &Frame<T>) -> T {
        let qr = lift::<T>(&self.q).inner(&frame.r);
        lit::<T>(-2.0) * frame.m * (qr * qr - T::one()).sqrt()
    }

    /// `(Q − ⟨Q,r⟩r)/√(⟨Q,r⟩² − 1)`, the printed candidate for `μ̄`.
    pub fn printed_mu<T: Real>(&self, frame: &Frame<T>) -> MVec3<T> {
        let q = lift::<T>(&self.q);
        let qr = q.inner(&frame.r);
        (q - frame.r * qr) * (qr * qr - T::one()).sqrt().recip()
    }
}

impl<L: ?Sized> Domain for OrthotomicInduced<'_, L>
where
    L: Domain,
{
    fn domain(&self) -> (f64, f64) {
        self.source.domain()
    }
}

impl<T: Real, L: Legendre<T> + ?Sized> Legendre<T> for OrthotomicInduced<'_, L> {
    fn jets(&self, s: T, order: usize) -> Result<LegendreJet<T>> {
        let src = self.source.jets(s, order.max(1))?;
        let ort = orthotomic_from_dual(&src.v, &self.q);
        let qj = q_jets(&self.q, &src.r.x1);
        let (qr, qv, qm) = (qj.inner(&src.r), qj.inner(&src.v), qj.inner(&src.mu));
        let g = (qr.clone() * qr.clone()).add_scalar(-T::one());
        let num = scaled(&src.r, &g) + scaled(&src.v, &(qr.clone() * qv)) - scaled(&src.mu, &(qr * qm));
        let dual = divided(&num, &g.sqrt()?)?;
        Ok(LegendreJet::from_frame(ort, dual))
    }
}

/// Evolute of the orthotomic-induced pair.
pub fn catacaustic<T: Real, L>(pair: &L, q: &MVec3<f64>, s: T) -> Result<(MVec3<T>, Branch)>
where
    L: Legendre<T> + Legendre<f64> + ?Sized,
{
    let induced = OrthotomicInduced::new(pair, *q)?;
    evolute(&induced, s)
}

/// The four derived constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Pedal,
    Orthotomic,
    Evolute,
    Catacaustic,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Pedal => "pedal",
            Kind::Orthotomic => "orthotomic",
            Kind::Evolute => "evolute",
            Kind::Catacaustic => "catacaustic",
        }
    }
}

/// A derived curve over a source pair, evaluable as values or jets.
#[derive(Clone, Copy, Debug)]
pub struct DerivedCurve<'a, L: ?Sized> {
    kind: Kind,
    source: &'a L,
    q: Option<MVec3<f64>>,
}

impl<'a, L: Legendre<f64> + ?Sized> DerivedCurve<'a, L> {
    pub fn pedal(source: &'a L, q: MVec3<f64>) -> Result<Self> {
        check_point(&q)?;
        Ok(Self {
            kind: Kind::Pedal,
            source,
            q: Some(q),
        })
    }

    pub fn orthotomic(source: &'a L, q: MVec3<f64>) -> Result<Self> {
        check_point(&q)?;
        Ok(Self {
            kind: Kind::Orthotomic,
            source,
            q: Some(q),
        })
    }

    pub fn evolute(source: &'a L) -> Self {
        Self {
            kind: Kind::Evolute,
            source,
            q: None,
        }
    }

    /// Requires `Q` off the curve.
    pub fn catacaustic(source: &'a L, q: MVec3<f64>) -> Result<Self> {
        OrthotomicInduced::new(source, q)?;
        Ok(Self {
            kind: Kind::Catacaustic,
            source,
            q: Some(q),
        })
    }
}

impl<L: ?Sized> DerivedCurve<'_, L> {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn point(&self) -> Option<MVec3<f64>> {
        self.q
    }

    /// Germ of the derived curve and, for evolutes, its branch.
    pub fn jets<T: Real>(&self, s: T, order: usize) -> Result<(MVec3<Jet<T>>, Option<Branch>)>
    where
        L: Legendre<T>,
    {
        let q = self.q.unwrap_or_else(MVec3::origin);
        match self.kind {
            Kind::Pedal => {
                let v = self.source.jets(s, order.max(1))?.v.map(|c| c.truncate(order));
                Ok((pedal_from_dual(&v, &q)?, None))
            }
            Kind::Orthotomic => {
                let v = self.source.jets(s, order.max(1))?.v.map(|c| c.truncate(order));
                Ok((orthotomic_from_dual(&v, &q), None))
            }
            Kind::Evolute => evolute_jets(self.source, s, order).map(|(e, b)| (e, Some(b))),
            Kind::Catacaustic => {
                let induced = OrthotomicInduced {
                    source: self.source,
                    q,
                };
                evolute_jets(&induced, s, order).map(|(e, b)| (e, Some(b)))
            }
        }
    }

    pub fn eval<T: Real>(&self, s: T) -> Result<(MVec3<T>, Option<Branch>)>
    where
        L: Legendre<T>,
    {
        let (j, b) = self.jets(s, 0)?;
        Ok((jet_value(&j), b))
    }
}

/// Why a derived curve is singular at a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cause {
    MZero,
    PointOnCurve,
    Other,
}

impl Cause {
    pub fn label(self) -> &'static str {
        match self {
            Cause::MZero => "m_zero",
            Cause::PointOnCurve => "point_on_curve",
            Cause::Other => "other",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularPoint {
    pub s: f64,
    pub cause: Cause,
}

/// Evaluation failures that mark a gap in the sampled curve rather than a
/// hard error.
fn is_gap(e: &Error) -> bool {
    match e {
        Error::EvoluteDegenerate(_) => true,
        Error::At { source, .. } => is_gap(source),
        _ => false,
    }
}

fn gap_to_none(r: Result<f64>, s: f64) -> Result<Option<f64>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(e) if is_gap(&e) => Ok(None),
        Err(e) => Err(e.at(s)),
    }
}

/// Local minima of a function whose derivative has the sign of `h`: sign
/// changes of `h` from negative to positive on the grid, refined by bisection.
/// Samples where `h` is degenerate split the grid; no bracket spans them.
pub fn local_minima<H>(h: H, grid: &[f64]) -> Result<Vec<f64>>
where
    H: Fn(f64) -> Result<f64>,
{
    if grid.len() < 2 {
        return Err(Error::GridTooSmall {
            min: 2,
            got: grid.len(),
        });
    }
    let hv = grid
        .iter()
        .map(|&s| gap_to_none(h(s), s))
        .collect::<Result<Vec<_>>>()?;
    let mut found = Vec::new();
    let n = grid.len();
    let neg = |x: Option<f64>| x.is_some_and(|x| x < 0.0);
    let pos = |x: Option<f64>| x.is_some_and(|x| x > 0.0);
    'outer: for i in 0..n {
        if hv[i] == Some(0.0) {
            let left = i == 0 || neg(hv[i - 1]);
            let right = i + 1 == n || pos(hv[i + 1]);
            if left && right {
                found.push(grid[i]);
            }
        }
        if i + 1 < n && neg(hv[i]) && pos(hv[i + 1]) {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            while hi - lo > ROOT_RESOLUTION {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let Some(hm) = gap_to_none(h(mid), mid)? else {
                    continue 'outer;
                };
                if hm == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if hm < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            found.push(0.5 * (lo + hi));
        }
    }
    Ok(found)
}

/// Local minima of `g ≥ 0` (with `h ∝ g′`) where `g ≤ rel · max g` over the grid.
pub fn minima_below<H, G>(h: H, g: G, grid: &[f64], rel: f64) -> Result<Vec<f64>>
where
    H: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> Result<f64>,
{
    let found = local_minima(&h, grid)?;
    let mut gmax = 0.0f64;
    for &s in grid {
        if let Some(x) = gap_to_none(g(s), s)? {
            gmax = gmax.max(x);
        }
    }
    let floor = rel * gmax.max(f64::MIN_POSITIVE);
    let mut kept: Vec<f64> = Vec::new();
    for s in found {
        let Some(gs) = gap_to_none(g(s), s)? else { continue };
        if gs <= floor && kept.last().is_none_or(|&p| s - p > 1e-8) {
            kept.push(s);
        }
    }
    Ok(kept)
}

/// Parameters where a curve germ has vanishing velocity.
pub fn singular_points<F>(curve: F, grid: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, usize) -> Result<MVec3<Jet<f64>>>,
{
    let derivs = |s: f64| -> Result<(MVec3<f64>, MVec3<f64>)> {
        let j = curve(s, 2)?;
        Ok((j.map(|c| c.coeffs()[1]), j.map(|c| 2.0 * c.coeffs()[2])))
    };
    minima_below(
        |s| derivs(s).map(|(d1, d2)| d1.inner(&d2)),
        |s| derivs(s).map(|(d1, _)| d1.inner(&d1).max(0.0).sqrt()),
        grid,
        tol,
    )
}

/// Zeros of `m`, including ones where `m` touches zero without a sign change.
pub fn m_zeros<L: Legendre<f64> + ?Sized>(pair: &L, grid: &[f64], tol: f64) -> Result<Vec<f64>> {
    minima_below(
        |s| {
            let j = pair.jets(s, 2)?;
            Ok(j.m.value() * j.m.derivative(1)?)
        },
        |s| Ok(pair.frame(s)?.m.abs()),
        grid,
        tol,
    )
}

/// Tags a singular parameter of a pedal or orthotomic.
pub fn classify_cause<L: Legendre<f64> + ?Sized>(pair: &L, q: &MVec3<f64>, s: f64) -> Result<Cause> {
    let f = pair.frame(s)?;
    if (q.inner(&f.r) + 1.0).abs() <= 1e-6 {
        Ok(Cause::PointOnCurve)
    } else if f.m.abs() <= 1e-6 {
        Ok(Cause::MZero)
    } else {
        Ok(Cause::Other)
    }
}

/// Singular points of a pedal or orthotomic with their causes.
pub fn derived_singular_points<L: Legendre<f64> + ?Sized>(
    curve: &DerivedCurve<'_, L>,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<SingularPoint>> {
    let found = singular_points(|s, k| curve.jets(s, k).map(|(j, _)| j), grid, tol)?;
    found
        .into_iter()
        .map(|s| {
            let cause = match curve.point() {
                Some(q) if matches!(curve.kind(), Kind::Pedal | Kind::Orthotomic) => {
                    classify_cause(curve.source, &q, s)?
                }
                _ => Cause::Other,
            };
            Ok(SingularPoint { s, cause })
        })
        .collect()
}

/// Derivative of a curve germ at its base point.
pub fn velocity<T: Real>(germ: &MVec3<Jet<T>>) -> MVec3<T> {
    jet_value(&d3(germ))
}
