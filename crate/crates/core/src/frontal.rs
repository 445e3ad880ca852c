//! Legendrian frames of spacelike frontals: the frame `{r, v, μ = r∧v}`, the
//! curvature pair `(ℓ, m)`, Frenet data of regular curves and the automatic
//! dual through singular points.

use crate::dsl::ParametricCurve;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::minkowski::{jet_value, MVec3};
use crate::scalar::{lit, Real};

/// Relative threshold on the speed below which a point counts as singular.
pub const REGULARITY_TOL: f64 = 1e-7;

/// Default sample count for grids.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Componentwise derivative of a vector germ.
pub fn d3<T: Real>(u: &MVec3<Jet<T>>) -> MVec3<Jet<T>> {
    u.map(Jet::differentiate)
}

pub fn truncate3<T: Real>(u: &MVec3<Jet<T>>, order: usize) -> MVec3<Jet<T>> {
    u.map(|c| c.truncate(order))
}

/// Index of the first non-zero coefficient vector of a vector germ.
pub fn vector_vanishing_order<T: Real>(u: &MVec3<Jet<T>>, tol: T) -> Option<usize> {
    let n = u.x1.order() + 1;
    (0..n).find(|&i| {
        let c = [u.x1.coeffs()[i], u.x2.coeffs()[i], u.x3.coeffs()[i]];
        c.iter().any(|x| x.abs() > tol)
    })
}

/// `n` equally spaced samples on the closed interval, endpoints included.
pub fn grid(domain: (f64, f64), n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::GridTooSmall { min: 2, got: n });
    }
    let (a, b) = domain;
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}

/// Frame values at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame<T> {
    pub r: MVec3<T>,
    pub v: MVec3<T>,
    pub mu: MVec3<T>,
    pub l: T,
    pub m: T,
}

/// Jets of the Legendrian frame at a base point. `ℓ` and `m` carry one order
/// less than the frame vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreJet<T> {
    pub r: MVec3<Jet<T>>,
    pub v: MVec3<Jet<T>>,
    pub mu: MVec3<Jet<T>>,
    pub l: Jet<T>,
    pub m: Jet<T>,
}

impl<T: Real> LegendreJet<T> {
    /// Builds `μ`, `ℓ`, `m` from jets of the curve and its dual (order ≥ 1).
    pub fn from_frame(r: MVec3<Jet<T>>, v: MVec3<Jet<T>>) -> Self {
        let k = r.x1.order();
        assert!(k >= 1, "frame jets need order at least 1");
        let mu = r.wedge(&v);
        let mu_low = truncate3(&mu, k - 1);
        let l = d3(&r).inner(&mu_low);
        let m = d3(&v).inner(&mu_low);
        Self { r, v, mu, l, m }
    }

    pub fn order(&self) -> usize {
        self.r.x1.order()
    }

    pub fn base(&self) -> T {
        self.r.x1.base()
    }

    pub fn value(&self) -> Frame<T> {
        Frame {
            r: jet_value(&self.r),
            v: jet_value(&self.v),
            mu: jet_value(&self.mu),
            l: self.l.value(),
            m: self.m.value(),
        }
    }
}

/// Parameter interval of a curve-like object.
pub trait Domain {
    fn domain(&self) -> (f64, f64);
}

/// Anything carrying a Legendrian frame: source pairs and induced pairs.
pub trait Legendre<T: Real>: Domain {
    /// Frame jets of the given order (≥ 1) at `s`.
    fn jets(&self, s: T, order: usize) -> Result<LegendreJet<T>>;

    fn frame(&self, s: T) -> Result<Frame<T>> {
        Ok(self.jets(s, 1)?.value())
    }
}

/// Curvature pair `(ℓ(s), m(s))`.
pub fn curvatures<T: Real, L: Legendre<T> + ?Sized>(pair: &L, s: T) -> Result<(T, T)> {
    let f = pair.frame(s)?;
    Ok((f.l, f.m))
}

#[derive(Clone, Debug, PartialEq)]
enum Dual {
    Explicit,
    Auto { grid: Vec<f64>, oriented: Vec<MVec3<f64>> },
}

/// A frontal together with its dual curve.
#[derive(Clone, Debug, PartialEq)]
pub struct LegendrePair {
    curve: ParametricCurve,
    dual: Dual,
}

impl LegendrePair {
    /// Uses the curve's explicit dual when present, otherwise builds one.
    pub fn new(curve: ParametricCurve) -> Result<Self> {
        if curve.has_dual() {
            Ok(Self {
                curve,
                dual: Dual::Explicit,
            })
        } else {
            Self::auto_dual(curve, DEFAULT_SAMPLES)
        }
    }

    /// Builds the dual from the unit tangent direction, continued through
    /// singular points by factoring the leading power out of `r′`.
    ///
    /// The sign is fixed on a grid of `samples` points: positive third
    /// component (or first non-zero component) at the first sample, then
    /// continuity.
    pub fn auto_dual(curve: ParametricCurve, samples: usize) -> Result<Self> {
        let curve = curve.without_dual();
        let grid = grid(curve.domain(), samples)?;
        let mut oriented: Vec<MVec3<f64>> = Vec::with_capacity(grid.len());
        for &s in &grid {
            let raw = jet_value(&raw_dual_jets(&curve, s, 0)?);
            let flip = match oriented.last() {
                Some(prev) => raw.euclid_dot(prev) < 0.0,
                None => leading_sign(&raw) < 0.0,
            };
            oriented.push(if flip { -raw } else { raw });
        }
        Ok(Self {
            curve,
            dual: Dual::Auto { grid, oriented },
        })
    }

    pub fn curve(&self) -> &ParametricCurve {
        &self.curve
    }

    pub fn has_auto_dual(&self) -> bool {
        matches!(self.dual, Dual::Auto { .. })
    }

    /// Dual jets at `s`.
    pub fn dual_jets<T: Real>(&self, s: T, order: usize) -> Result<MVec3<Jet<T>>> {
        match &self.dual {
            Dual::Explicit => self
                .curve
                .dual_jets(s, order)
                .expect("explicit dual present"),
            Dual::Auto { grid, oriented } => {
                let raw = raw_dual_jets(&self.curve, s, order)?;
                let (a, b) = self.curve.domain();
                let sf = s.to_f64().unwrap_or(a);
                let t = ((sf - a) / (b - a) * (grid.len() - 1) as f64).round();
                let i = t.clamp(0.0, (grid.len() - 1) as f64) as usize;
                let reference = oriented[i];
                if jet_value(&raw).to_f64().euclid_dot(&reference) < 0.0 {
                    Ok(-raw)
                } else {
                    Ok(raw)
                }
            }
        }
    }
}

impl<T: Real> Legendre<T> for LegendrePair {
    fn jets(&self, s: T, order: usize) -> Result<LegendreJet<T>> {
        let order = order.max(1);
        let r = self.curve.jets(s, order)?;
        let v = self.dual_jets(s, order)?;
        Ok(LegendreJet::from_frame(r, v))
    }
}

impl Domain for LegendrePair {
    fn domain(&self) -> (f64, f64) {
        self.curve.domain()
    }
}

fn leading_sign(u: &MVec3<f64>) -> f64 {
    let tiny = 1e-12 * u.max_abs().max(1.0);
    if u.x3.abs() > tiny {
        return u.x3.signum();
    }
    [u.x1, u.x2]
        .into_iter()
        .find(|c| c.abs() > tiny)
        .map_or(1.0, f64::signum)
}

/// Threshold, relative to the point's magnitude, below which a coefficient of
/// `r′` counts as zero when factoring the dual through a singular point.
const FACTOR_TOL: f64 = 1e-12;

/// Deepest singular point the automatic dual factors through.
const MAX_FACTOR_DEPTH: usize = 32;

/// Unoriented dual `r ∧ ŵ` with `w = r′/(s−s₀)^p`, `p` the vanishing order of `r′`.
fn raw_dual_jets<T: Real>(curve: &ParametricCurve, s: T, order: usize) -> Result<MVec3<Jet<T>>> {
    let sf = s.to_f64().unwrap_or(f64::NAN);
    let mut depth = 4;
    loop {
        let full = curve.jets(s, order + depth + 1)?;
        let scale = jet_value(&full).max_abs().max(T::one());
        let dr = d3(&full);
        let tol = lit::<T>(FACTOR_TOL).max(T::epsilon() * lit(64.0)) * scale;
        match vector_vanishing_order(&dr, tol) {
            Some(p) if p <= depth => {
                let w = dr.map(|c| c.shift_down(p).truncate(order));
                let norm = w.inner(&w).sqrt().map_err(|_| Error::DualUndetermined(sf))?;
                let unit = w
                    .try_map(|c| c.div(&norm))
                    .map_err(|_| Error::DualUndetermined(sf))?;
                return Ok(truncate3(&full, order).wedge(&unit));
            }
            _ if depth >= MAX_FACTOR_DEPTH => return Err(Error::DualUndetermined(sf)),
            _ => depth *= 2,
        }
    }
}

/// Maximum of one residual over a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub max: f64,
    pub at: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub residuals: Vec<Residual>,
    pub tol: f64,
    pub pass: bool,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.max).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }
}

/// Names of the checked conditions, in report order.
pub const CONDITIONS: [&str; 7] = ["<r,r>+1", "<v,v>-1", "<r,v>", "<r',v>", "<mu,mu>-1", "<r,mu>", "<v,mu>"];

/// Checks the Legendre conditions on a grid. Each residual is divided by
/// `max(1, M)²` where `M` is the largest frame entry at that sample.
pub fn validate_legendre<T: Real, L: Legendre<T> + ?Sized>(
    pair: &L,
    grid: &[T],
    tol: T,
) -> Result<ValidationReport> {
    if grid.len() < 2 {
        return Err(Error::GridTooSmall {
            min: 2,
            got: grid.len(),
        });
    }
    let mut worst = [(0.0f64, f64::NAN); 7];
    for &s in grid {
        let sf = s.to_f64().unwrap_or(f64::NAN);
        let j = pair.jets(s, 1).map_err(|e| e.at(sf))?;
        let f = j.value();
        let dr = MVec3::new(
            j.r.x1.coeffs()[1],
            j.r.x2.coeffs()[1],
            j.r.x3.coeffs()[1],
        );
        let big = f.r.max_abs().max(f.v.max_abs()).max(dr.max_abs()).max(T::one());
        let scale = big * big;
        let vals = [
            f.r.inner(&f.r) + T::one(),
            f.v.inner(&f.v) - T::one(),
            f.r.inner(&f.v),
            dr.inner(&f.v),
            f.mu.inner(&f.mu) - T::one(),
            f.r.inner(&f.mu),
            f.v.inner(&f.mu),
        ];
        for (w, x) in worst.iter_mut().zip(vals) {
            let rel = (x.abs() / scale).to_f64().unwrap_or(f64::INFINITY);
            if !(rel <= w.0) {
                *w = (rel, sf);
            }
        }
    }
    let tol_f = tol.to_f64().unwrap_or(0.0);
    let residuals: Vec<Residual> = CONDITIONS
        .iter()
        .zip(worst)
        .map(|(name, (max, at))| Residual { name, max, at })
        .collect();
    let pass = residuals.iter().all(|r| r.max <= tol_f);
    Ok(ValidationReport {
        residuals,
        tol: tol_f,
        pass,
    })
}

/// Frenet data of a regular curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetData<T> {
    pub t: MVec3<T>,
    pub n: MVec3<T>,
    pub kappa: T,
    pub speed: T,
}

/// Unit tangent, normal `r∧T`, geodesic curvature and speed at a regular point.
pub fn frenet_regular<T: Real>(curve: &ParametricCurve, s: T) -> Result<FrenetData<T>> {
    let sf = s.to_f64().unwrap_or(f64::NAN);
    let j = curve.jets(s, 2).map_err(|e| e.at(sf))?;
    let r = jet_value(&j);
    let d1 = j.map(|c| c.coeffs()[1]);
    let d2 = j.map(|c| c.coeffs()[2] * lit::<T>(2.0));
    let speed = d1.inner(&d1).max(T::zero()).sqrt();
    if !(speed > lit::<T>(REGULARITY_TOL) * r.max_abs().max(T::one())) {
        return Err(Error::CurveSingular(sf));
    }
    let t = d1 * speed.recip();
    let n = r.wedge(&t);
    let kappa = MVec3::det(&r, &d1, &d2) / (speed * speed * speed);
    Ok(FrenetData { t, n, kappa, speed })
}
